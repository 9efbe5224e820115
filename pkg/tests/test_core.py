from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from psverify.core import expr as E
from psverify.core.elaborate import show_type
from psverify.core.evaluate import CtorVal, MatchFailure, OutOfFuel, evaluate, value_to_expr
from psverify.core.subst import substitute
from psverify.errors import TypeError_

from conftest import DATA, FIXTURES, fun, load, load_file


def pylist(program, xs):
    nil, cons = program.lookup_orig("Nil"), program.lookup_orig("Cons")
    out = CtorVal(nil)
    for x in reversed(xs):
        out = CtorVal(cons, (x, out))
    return out


def test_signatures_are_generalized():
    prog = load_file(DATA / "size.psc")
    size = fun(prog, "size")
    assert len(size.typarams) == 1
    assert show_type(size.ret) == "Int"


def test_lambda_and_tuple_types_are_inferred():
    prog = load("def pairUp[A](l: List[A]): List[(A, A)] = map(l, (x: A) => (x, x))")
    f = fun(prog, "pairUp")
    (a,) = f.typarams
    assert show_type(f.ret) == f"List_0[({a.replace(chr(39), '_')}, {a.replace(chr(39), '_')})]"
    g = fun(load("def g(l: List[BigInt]) = map(l, (x: BigInt) => x > 0)"), "g")
    assert show_type(g.ret) == "List_0[Bool]"


def test_match_arms_must_agree():
    with pytest.raises(TypeError_):
        load("def f(l: List[BigInt]): BigInt = l match { case Nil() => 0  case Cons(h, _) => true }")


@given(st.lists(st.integers(-50, 50), max_size=12))
def test_size_evaluates_to_length(xs):
    prog = load_file(DATA / "size.psc")
    assert evaluate(prog, fun(prog, "size").name, [pylist(prog, xs)]) == len(xs)


@given(st.lists(st.integers(-50, 50), max_size=10))
@settings(max_examples=50)
def test_base_reverse_round_trips(xs):
    prog = load("def rr(l: List[BigInt]): List[BigInt] = reverse(reverse(l))")
    v = pylist(prog, xs)
    assert evaluate(prog, fun(prog, "rr").name, [v]) == v


def test_fuel_and_partiality():
    prog = load_file(FIXTURES / "term.psc")
    with pytest.raises(OutOfFuel):
        evaluate(prog, fun(prog, "loop").name, [1], fuel=500)
    part = load("def hd(l: List[BigInt]): BigInt = l match { case Cons(h, _) => h }")
    with pytest.raises(MatchFailure):
        evaluate(part, fun(part, "hd").name, [pylist(part, [])])


def test_substitution_avoids_capture():
    lam = E.Lam(("y",), E.Prim("+", (E.Var("x"), E.Var("y"))))
    out = substitute(lam, {"x": E.Var("y")})
    assert isinstance(out, E.Lam) and out.params[0] != "y"
    assert E.free_vars(out) == frozenset({"y"})


def test_values_convert_back_to_terms():
    prog = load_file(DATA / "size.psc")
    e = value_to_expr(pylist(prog, [1, 2]))
    assert isinstance(e, E.Ctor) and e.args[0] == E.IntLit(1)
