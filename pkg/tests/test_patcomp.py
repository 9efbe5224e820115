from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from psverify.core import expr as E
from psverify.emitter import show_equation
from psverify.patcomp.exhaustive import check_exhaustive, function_coverage
from psverify.patcomp.oracle import oracle_equivalence
from psverify.patcomp.split import split_equations

from conftest import DATA, FIXTURES, fun, load, load_file
from patgen import brute_force_complete, random_match


def eqs_text(program, name):
    return [show_equation(e) for e in split_equations(fun(program, name), program)]


def test_size_splits_into_two_equations():
    prog = load_file(DATA / "size.psc")
    assert eqs_text(prog, "size") == ["size_0 Nil_0 = 0", "size_0 (Cons_0 _ xs_0) = 1 + size_0 xs_0"]


def test_tuple_scrutinee_splits_per_parameter():
    prog = load_file(FIXTURES / "term.psc")
    assert eqs_text(prog, "ack") == [
        "ack_0 Zero_0 n_0 = Succ_0 n_0",
        "ack_0 (Succ_0 k_0) Zero_0 = ack_0 k_0 (Succ_0 Zero_0)",
        "ack_0 (Succ_0 k_1) (Succ_0 j_0) = ack_0 k_1 (ack_0 (Succ_0 k_1) j_0)",
    ]


def test_overlapping_literal_clauses_are_flagged_order_sensitive():
    prog = load("def f(x: BigInt): BigInt = x match { case 0 => 1  case 1 => 2  case y => y }")
    eqs = split_equations(fun(prog, "f"), prog)
    assert [e.order_sensitive for e in eqs] == [False, False, True]


def test_missing_nil_is_reported_with_a_witness():
    prog = load("def hd(l: List[BigInt]): BigInt = l match { case Cons(h, _) => h }")
    (site,) = function_coverage(fun(prog, "hd"), prog)
    assert not site.coverage.complete
    assert site.coverage.missing == [E.PCon(prog.lookup_orig("Nil"), ())]


def test_redundant_clause_is_detected():
    prog = load("def f(b: Boolean): BigInt = b match { case _ => 0  case true => 1 }")
    (site,) = function_coverage(fun(prog, "f"), prog)
    assert site.coverage.complete and site.coverage.redundant == [1]


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_exhaustiveness_matches_brute_force(seed):
    prog = load("")
    ty, clauses = random_match(prog, random.Random(seed))
    cov = check_exhaustive(clauses, ty, prog)
    assert cov.complete == brute_force_complete(prog, clauses, ty)


def test_oracle_agrees_on_size():
    prog = load_file(DATA / "size.psc")
    f = fun(prog, "size")
    v = oracle_equivalence(f, split_equations(f, prog), prog, samples=200, seed=3)
    assert v.agree and v.agreements == 200


def test_oracle_catches_a_wrong_split():
    prog = load_file(DATA / "size.psc")
    f = fun(prog, "size")
    eqs = split_equations(f, prog)
    swapped = [eqs[0].__class__(eqs[0].fun, eqs[0].lhs, E.IntLit(7))] + eqs[1:]
    v = oracle_equivalence(f, swapped, prog, samples=200, seed=3)
    assert not v.agree and v.witness is not None
