"""Acceptance criteria 1-11, one pass/fail line each.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; either way a
``criterion N [PASS|FAIL] ...`` line is printed per criterion.
"""
from __future__ import annotations

import json
import random
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from psverify.core.evaluate import CtorVal, eval_expr  # noqa: E402
from psverify.defgraph import call_graph, check_positivity, scc_topo  # noqa: E402
from psverify.deepstack import deep_call  # noqa: E402
from psverify.emitter import show_equation  # noqa: E402
from psverify.errors import PositivityError  # noqa: E402
from psverify.patcomp.exhaustive import check_exhaustive  # noqa: E402
from psverify.patcomp.oracle import oracle_equivalence  # noqa: E402
from psverify.patcomp.split import split_equations  # noqa: E402
from psverify.prover.checker import check_trace  # noqa: E402
from psverify.prover.mapping import MappingTheorem  # noqa: E402
from psverify.prover.sequent import Proved, Step  # noqa: E402
from psverify.session.pipeline import Options, load_program, solve  # noqa: E402
from psverify.session.report import json_report  # noqa: E402
from psverify.termination import TerminationCert, TerminationFailure, certify_termination, validate_certificate  # noqa: E402

from conftest import CORPUS, DATA, FIXTURES  # noqa: E402
from fuzz import invalid_programs  # noqa: E402
from mutate import stall_recursion  # noqa: E402
from patgen import brute_force_complete, random_match  # noqa: E402
from rpc import DaemonProcess  # noqa: E402

# tolerances
SIZE_SECONDS = 1.0
SUMS_SECONDS = 10.0
COVERAGE_MIN = 0.70
MINILIB_FUNCTIONS, MINILIB_VCS = 20, 30
ORACLE_SAMPLES, ORACLE_DEPTH, ORACLE_FUEL = 1000, 5, 1000
EXHAUSTIVE_CASES, EXHAUSTIVE_DEPTH = 200, 3
PROTOCOL_REQUESTS, FUZZ_PROGRAMS = 50, 500
KERNEL_RULES = ["rewrite", "intro", "forall_intro", "conj_intro", "hyp_conj", "hyp_drop", "subst", "close_true",
                "close_hyp", "close_false", "close_contra", "linarith", "case_bool", "case_data", "induct"]

LINES: list[str] = []


def load(source: str, file: str = "<acceptance>"):
    return deep_call(load_program, source, file)


def run(source: str, file: str = "<acceptance>", **opts):
    return deep_call(solve, load(source, file), Options(**opts))


def user_fun(program, orig):
    return program.funs[program.lookup_orig(orig)]


class Checks:
    """Collects named sub-checks; the criterion passes iff all of them do."""

    def __init__(self):
        self.failed: list[str] = []
        self.notes: list[str] = []

    def __call__(self, ok: bool, what: str) -> bool:
        if not ok:
            self.failed.append(what)
        return ok

    def note(self, text: str) -> None:
        self.notes.append(text)

    def result(self) -> tuple[bool, str]:
        if self.failed:
            return False, "failed: " + "; ".join(self.failed)
        return True, "; ".join(self.notes)


def criterion_1():
    c = Checks()
    src = (DATA / "size.psc").read_text()
    t0 = time.perf_counter()
    an = run(src, "size.psc")
    elapsed = time.perf_counter() - t0
    size = an.program.lookup_orig("size")
    eqs = [show_equation(e) for e in an.equations[size]]
    c(eqs == ["size_0 Nil_0 = 0", "size_0 (Cons_0 _ xs_0) = 1 + size_0 xs_0"], f"equations {eqs}")
    cert = an.termination[size]
    c(isinstance(cert, TerminationCert) and [col.positions for col in cert.measure] == [((size, 0),)],
      "termination certificate on argument 0")
    vc = an.vcs[0]
    c(len(an.vcs) == 1 and vc.kind == "postcondition" and vc.hint is None, "single unhinted postcondition VC")
    c(isinstance(an.results[vc.id], Proved), "postcondition proved")
    c(an.verdict.overall == "unsat", "overall unsat")
    c(elapsed < SIZE_SECONDS, f"runtime {elapsed:.3f}s >= {SIZE_SECONDS}s")
    c.note(f"2 equations, measure [size_0:0], proved, unsat in {elapsed:.3f}s")
    return c.result()


def criterion_2():
    c = Checks()
    t0 = time.perf_counter()
    hinted = run((DATA / "sums.psc").read_text(), "sums.psc").verdict.per_vc
    bare = run((DATA / "sums_stripped.psc").read_text(), "sums_stripped.psc").verdict.per_vc
    elapsed = time.perf_counter() - t0
    ids = {"sumReverse": "sumReverse_0.holds.0", "sumConstant": "sumConstant_0.holds.0",
           "mapFstZip": "mapFstZip_0.postcondition.0"}
    for name, vid in ids.items():
        c(hinted.get(vid, {}).get("verdict") == "proved", f"{name} with hints: {hinted.get(vid)}")
    expect_bare = {"sumReverse": "proved", "sumConstant": "unknown", "mapFstZip": "unknown"}
    for name, want in expect_bare.items():
        got = bare.get(ids[name], {}).get("verdict")
        c(got == want, f"{name} without hints is {got}, expected {want}")
    c(elapsed < SUMS_SECONDS, f"runtime {elapsed:.2f}s")
    c.note("hinted 3/3 proved; stripped: " + ", ".join(f"{n}={bare[v]['verdict']}" for n, v in ids.items())
           + f"; {elapsed:.2f}s")
    return c.result()


def minilib_outcome() -> tuple[dict, str]:
    an = run((DATA / "minilib.psc").read_text(), "minilib.psc")
    verdicts = {vid: s["verdict"] for vid, s in an.verdict.per_vc.items()}
    return verdicts, json.dumps(verdicts, sort_keys=True)


def criterion_3():
    c = Checks()
    manifest = json.loads((DATA / "minilib.manifest.json").read_text())
    prog = load((DATA / "minilib.psc").read_text(), "minilib.psc")
    funs = [f for f in prog.functions if f.origin == "user" and not f.holds]
    c(len(funs) >= MINILIB_FUNCTIONS, f"only {len(funs)} functions")
    c(len(manifest["vcs"]) >= MINILIB_VCS, f"only {len(manifest['vcs'])} manifest VCs")
    first, first_text = minilib_outcome()
    _, second_text = minilib_outcome()
    c(first_text == second_text, "pass/fail set differs between runs")
    ids = [v["id"] for v in manifest["vcs"]]
    c(sorted(ids) == sorted(first), "manifest VC ids differ from generated VCs")
    proved = sum(1 for i in ids if first.get(i) == "proved")
    rate = proved / len(ids)
    c(rate >= COVERAGE_MIN, f"coverage {rate:.1%}")
    drift = [v["id"] for v in manifest["vcs"] if first.get(v["id"]) != v["expected"]]
    c(not drift, f"verdicts differ from manifest: {drift}")
    c.note(f"{len(funs)} functions, {proved}/{len(ids)} VCs proved ({rate:.1%}), stable across runs")
    return c.result()


def corpus_programs():
    yield "base", load("", "base")
    for p in CORPUS:
        yield p.name, load(p.read_text(), p.name)


def criterion_4():
    c = Checks()
    seen, n = set(), 0
    for tag, prog in corpus_programs():
        for f in prog.functions:
            key = ("base", f.name) if f.origin == "base" else (tag, f.name)
            if key in seen:
                continue
            seen.add(key)
            v = oracle_equivalence(f, split_equations(f, prog), prog, ORACLE_SAMPLES, seed=n,
                                   fuel=ORACLE_FUEL, depth=ORACLE_DEPTH)
            n += 1
            c(v.agree and v.agreements == ORACLE_SAMPLES, f"{tag}:{f.name} disagrees on {v.witness}")
    c.note(f"{n} functions x {ORACLE_SAMPLES} samples agree")
    return c.result()


def components(prog, user_only=True):
    order = scc_topo(call_graph(prog))
    for comp, rec in zip(order.components, order.recursive):
        funs = [prog.funs[n] for n in comp]
        if not user_only or funs[0].origin == "user":
            yield funs, rec


def criterion_5():
    c = Checks()
    base = load("", "base")
    term = load((FIXTURES / "term.psc").read_text(), "term.psc")
    size = load((DATA / "size.psc").read_text(), "size.psc")
    wanted = [(size, ["size"]), (term, ["ack"]), (term, ["even", "odd"])]
    wanted += [(base, [n]) for n in ("map", "append", "zip")]
    for prog, names in wanted:
        kind = "base" if prog is base else None
        funs = [prog.funs[prog.lookup_orig(n, kind) if kind else prog.lookup_orig(n)] for n in names]
        cert = certify_termination(funs, {f.name: split_equations(f, prog) for f in funs})
        c(isinstance(cert, TerminationCert), f"{'/'.join(names)} not certified")
    loop = user_fun(term, "loop")
    c(isinstance(certify_termination([loop], {loop.name: split_equations(loop, term)}), TerminationFailure),
      "f(x) = f(x) accepted")
    certs = mutated = 0
    for _, prog in corpus_programs():
        for funs, rec in components(prog, user_only=False):
            eqs = {f.name: split_equations(f, prog) for f in funs}
            cert = certify_termination(funs, eqs)
            if isinstance(cert, TerminationCert):
                certs += 1
                c(validate_certificate(cert.matrix, cert), f"validator rejects {funs[0].name}")
                if rec:
                    mutated += 1
                    c(isinstance(certify_termination(funs, stall_recursion(eqs)), TerminationFailure),
                      f"mutated {funs[0].name} still certified")
    c.note(f"{certs} certificates validated, {mutated} recursive components mutated, loop rejected")
    return c.result()


def criterion_6():
    c = Checks()
    try:
        load("case class Bad(f: Bad => BigInt)")
        c(False, "Bad accepted")
    except PositivityError as e:
        c(e.field == "f", f"error names field {e.field}")
    try:
        load((FIXTURES / "positivity.psc").read_text())
        c(False, "sealed-class Bad accepted")
    except PositivityError as e:
        c(e.field == "f", f"error names field {e.field}")
    n = 0
    for _, prog in corpus_programs():
        check_positivity(prog.datatypes)
        n += len(prog.datatypes)
    c.note(f"Bad rejected naming field f; {n} corpus datatypes accepted")
    return c.result()


def criterion_7():
    c = Checks()
    proofs = corrupted = 0
    for p in CORPUS:
        an = run(p.read_text(), p.name)
        for vid, r in an.results.items():
            if not isinstance(r, Proved):
                continue
            proofs += 1
            c(check_trace(r.root, r.trace, an.theory).valid, f"{vid} trace rejected")
            stack = [r.trace]
            while stack:
                node = stack.pop()
                stack.extend(node.children)
                for i, step in enumerate(list(node.steps)):
                    bad = [Step(KERNEL_RULES[(KERNEL_RULES.index(step.rule) + 1) % len(KERNEL_RULES)],
                                step.args, step.check)]
                    if step.rule == "rewrite":
                        bad.append(Step(step.rule, step.args, "0" * 16))
                    for b in bad:
                        node.steps[i] = b
                        corrupted += 1
                        c(not deep_call(check_trace, r.root, r.trace, an.theory).valid,
                          f"{vid} step {i} corruption undetected")
                        node.steps[i] = step
    c.note(f"{proofs} proofs replayed, {corrupted} single-step corruptions detected")
    return c.result()


def criterion_8():
    c = Checks()
    prog = load("", "base")
    rng = random.Random(8)
    complete = 0
    for k in range(EXHAUSTIVE_CASES):
        ty, clauses = random_match(prog, rng)
        got = check_exhaustive(clauses, ty, prog).complete
        want = brute_force_complete(prog, clauses, ty, EXHAUSTIVE_DEPTH)
        complete += want
        c(got == want, f"case {k}: {clauses} at {ty}")
    src = "def hd(l: List[BigInt]): BigInt = l match { case Cons(h, _) => h }"
    an = run(src)
    (vc,) = an.vcs
    c(vc.kind == "exhaustiveness", "no exhaustiveness VC")
    c(an.verdict.per_vc[vc.id]["verdict"] == "unknown", "missing-Nil VC not unknown")
    c(an.verdict.overall == "unknown", "overall not unknown")
    (l, _), = vc.fixed
    nil = CtorVal(an.program.lookup_orig("Nil", "base"))
    c(eval_expr(an.program, vc.formula, {l: nil}) is False, "Nil does not falsify the VC")
    c.note(f"{EXHAUSTIVE_CASES} random matches agree with enumeration ({complete} complete); missing Nil is "
           f"unknown and falsified on Nil")
    return c.result()


def criterion_9():
    c = Checks()
    src = (FIXTURES / "mapping.psc").read_text()
    proved = run(src, "mapping.psc")
    maps = [m for m in proved.mappings if isinstance(m, MappingTheorem)]
    c(len(maps) == 1 and maps[0].status == "proved", "map not proved equal to base map")
    c(maps and check_trace(maps[0].trace.root, maps[0].trace.trace, proved.theory).valid, "mapping trace")
    c(json_report(proved, src)["axioms"] == [], "prove mode lists axioms")
    with tempfile.TemporaryDirectory() as tmp:
        rep = Path(tmp) / "r.json"
        code = subprocess.run([sys.executable, "-m", "psverify", "verify", str(FIXTURES / "mapping.psc"),
                               "--assume-mappings", "--json-report", str(rep)], capture_output=True).returncode
        axioms = json.loads(rep.read_text())["axioms"]
    c(code == 0 and axioms == ["map_1 = map_0"], f"assume mode axioms {axioms}")
    wrong = run((FIXTURES / "mapping_swapped.psc").read_text())
    c(wrong.verdict.overall == "unknown" and not any(isinstance(m, MappingTheorem) for m in wrong.mappings),
      "swapped-argument map accepted")
    c.note("user map = base map proved; --assume-mappings reports exactly ['map_1 = map_0']; swapped map fails")
    return c.result()


def cli_outputs(path: Path, tmp: Path, tag: str) -> tuple[bytes, bytes]:
    thy, rep = tmp / f"{tag}.thy.txt", tmp / f"{tag}.json"
    subprocess.run([sys.executable, "-m", "psverify", "verify", str(path), "--emit-theory", str(thy),
                    "--json-report", str(rep)], capture_output=True)
    return thy.read_bytes(), rep.read_bytes()


def criterion_10():
    c = Checks()
    with tempfile.TemporaryDirectory() as tmp:
        for p in CORPUS:
            a = cli_outputs(p, Path(tmp), "a")
            b = cli_outputs(p, Path(tmp), "b")
            c(a[0] == b[0] and len(a[0]) > 0, f"{p.name} theory differs")
            c(a[1] == b[1] and len(a[1]) > 0, f"{p.name} report differs")
    c.note(f"{len(CORPUS)} programs, two separate processes each, byte-identical")
    return c.result()


def criterion_11():
    c = Checks()
    sources = [p.read_text() for p in CORPUS]
    d = DaemonProcess()
    rid = 0
    try:
        sent: list[int] = []
        pids: list[str] = []
        rng = random.Random(11)
        while len(sent) < PROTOCOL_REQUESTS:
            rid += 1
            kind = ["load", "verify", "status", "cancel"][len(sent) % 4] if pids or len(sent) % 4 == 0 else "load"
            if kind == "load":
                d.send(rid, "load", source=rng.choice(sources))
                r = d.wait_for(rid)
                if r.get("result", {}).get("program_id"):
                    pids.append(r["result"]["program_id"])
            elif kind == "verify":
                d.send(rid, "verify", program_id=rng.choice(pids))
            elif kind == "status":
                d.send(rid, "status")
            else:
                d.send(rid, "cancel", id=rid - rng.choice([1, 3]))
            sent.append(rid)
        for r_id in sent:
            d.wait_for(r_id)
        ids = [r["id"] for r in d.responses]
        c(sorted(ids) == sorted(sent), "not exactly one response per id")
        c(all(("result" in r) != ("error" in r) for r in d.responses), "malformed response")
        verdicts = [r["result"]["overall"] for r in d.responses if "result" in r and "overall" in r["result"]]
        ordered = ids == sorted(ids)
        c.note(f"{len(sent)} requests answered once each ({'in order' if ordered else 'out of order'})")
        # never sat: each invalid program is rejected at load or verifies to unknown
        fuzz = invalid_programs(FUZZ_PROGRAMS, 11, sources)
        rejected = unknown = 0
        for tag, src in fuzz:
            rid += 1
            r = d.call(rid, "load", source=src)
            pid = r.get("result", {}).get("program_id")
            if pid is None:
                c(tag == "input" and r["result"]["diagnostics"], f"false program rejected: {src[:60]!r}")
                rejected += 1
                continue
            c(tag == "false", f"invalid input loaded: {src[:60]!r}")
            rid += 1
            v = d.call(rid, "verify", program_id=pid)
            overall = v.get("result", {}).get("overall")
            verdicts.append(overall)
            c(overall == "unknown", f"false contract verified: {src[-80:]!r}")
            unknown += overall == "unknown"
        c("sat" not in verdicts and set(verdicts) <= {"unsat", "unknown"}, "a verdict outside {unsat, unknown}")
        c.note(f"fuzz: {rejected} rejected at load, {unknown} unknown, none sat")
        d.call(rid + 1, "shutdown")
    finally:
        c(d.close() == 0, "daemon exit code")
    return c.result()


CRITERIA = {
    1: ("size example end to end", criterion_1),
    2: ("three-lemma suite with and without hints", criterion_2),
    3: ("mini-library coverage", criterion_3),
    4: ("split-equation oracle", criterion_4),
    5: ("termination", criterion_5),
    6: ("positivity", criterion_6),
    7: ("trace checking", criterion_7),
    8: ("exhaustiveness", criterion_8),
    9: ("mapping modes", criterion_9),
    10: ("emitter and report determinism", criterion_10),
    11: ("protocol and never-sat", criterion_11),
}


def evaluate_criterion(n: int) -> tuple[bool, str]:
    title, fn = CRITERIA[n]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as e:  # a crash is a failure of that criterion only
        ok, detail = False, f"crashed: {type(e).__name__}: {e}"
    line = f"criterion {n:>2} [{'PASS' if ok else 'FAIL'}] {title}: {detail} ({time.perf_counter() - t0:.1f}s)"
    LINES.append(line)
    print(line, flush=True)
    return ok, detail


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, detail = evaluate_criterion(n)
    assert ok, detail


if __name__ == "__main__":
    results = [evaluate_criterion(n)[0] for n in sorted(CRITERIA)]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
