from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from psverify.errors import LexError, NameError_, ParseError, TypeError_
from psverify.surface.lexer import tokenize
from psverify.surface.parser import parse_program
from psverify.surface.resolve import render_name, resolve_names, split_internal

from conftest import DATA, FIXTURES, load


def test_tokens_carry_positions():
    toks = tokenize("x +\n  12", "f.psc")
    assert [t.text for t in toks[:3]] == ["x", "+", "12"]
    assert (toks[2].span.line, toks[2].span.column) == (2, 3)
    assert toks[2].value == 12


def test_size_shape():
    prog = parse_program((DATA / "size.psc").read_text(), "size.psc")
    assert [d.name for d in prog.datatypes] == ["List"]
    assert [c.name for c in prog.cases] == ["Cons", "Nil"]
    (size,) = prog.functions
    assert size.name == "size" and size.ensuring is not None and size.require is None


def test_annotations_are_kept():
    prog = parse_program((DATA / "sums.psc").read_text(), "sums.psc")
    hints = {f.name: f.proof for f in prog.functions}
    assert '(induct "<var xs>", auto)' in hints["sumConstant"]
    lib = parse_program((FIXTURES / "mapping.psc").read_text())
    assert lib.functions[0].library == "map"


def test_hygienic_names():
    prog = resolve_names(parse_program((DATA / "size.psc").read_text()))
    assert str(prog.name_table.terms["size"]) == "size'0"
    assert render_name("size'0") == "size_0"
    assert split_internal("size'3") == ("size", 3)


def test_user_shadowing_a_base_function_gets_a_fresh_suffix():
    # base code keeps calling the base definition
    prog = load("def reverse(x: BigInt): BigInt = x")
    user = prog.lookup_orig("reverse")
    base = prog.lookup_orig("reverse", "base")
    assert user != base
    assert prog.funs[user].origin == "user" and prog.funs[base].origin == "base"


@pytest.mark.parametrize("src, err", [
    ("def f(x: BigInt): BigInt = y", NameError_),
    ("def f(x: BigInt): BigInt = x + true", TypeError_),
    ("def f(x: BigInt): BigInt = x $", LexError),
    ("def f(x: BigInt): Foo = x", NameError_),
    ((FIXTURES / "bad_syntax.psc").read_text(), ParseError),
    ("def f(x: BigInt): BigInt = {", ParseError),
])
def test_input_errors_have_spans(src, err):
    with pytest.raises(err) as info:
        load(src)
    assert info.value.span is not None and info.value.span.line >= 1


@given(st.lists(st.integers(min_value=0, max_value=10**6), min_size=1, max_size=8))
def test_integer_sums_tokenize_round_trip(xs):
    text = " + ".join(map(str, xs))
    toks = [t for t in tokenize(text) if t.kind == "int"]
    assert [t.value for t in toks] == xs


def test_lone_case_class_is_its_own_datatype():
    prog = load("case class Pt(x: BigInt, y: BigInt)\ndef sx(p: Pt): BigInt = p match { case Pt(a, _) => a }")
    dt = prog.dt[prog.lookup_orig("Pt", "datatype")]
    assert [c.name for c in dt.constructors] == [prog.lookup_orig("Pt")]
