from __future__ import annotations

from pathlib import Path

import pytest

from psverify.deepstack import deep_call
from psverify.session.pipeline import Options, load_program, solve

DATA = Path(__file__).resolve().parent.parent / "src" / "psverify" / "data"
FIXTURES = Path(__file__).resolve().parent / "fixtures"

# every bundled program the acceptance checks sweep over
CORPUS = [DATA / "size.psc", DATA / "sums.psc", DATA / "sums_stripped.psc", DATA / "minilib.psc",
          FIXTURES / "term.psc", FIXTURES / "mapping.psc"]


def load(source: str, use_base: bool = True):
    return deep_call(load_program, source, "<test>", use_base)


def analyze(source: str, **opts):
    return deep_call(solve, load(source), Options(**opts))


def load_file(path: Path):
    return deep_call(load_program, path.read_text(), path.name)


def fun(program, orig: str):
    """User function by its source name."""
    name = program.lookup_orig(orig)
    assert name is not None, orig
    return program.funs[name]


@pytest.fixture(scope="session")
def corpus_analyses():
    return {p.name: deep_call(solve, load_file(p), Options()) for p in CORPUS}


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)
