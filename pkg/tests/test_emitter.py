from __future__ import annotations

import pytest

from psverify.emitter import emit_theory, parse_equation, round_trip, show_equation, show_term
from psverify.core import expr as E

from conftest import CORPUS, DATA, FIXTURES, analyze

SIZE_THEORY = '''theory size
imports Main
begin

datatype 'a List_0 = Nil_0 | Cons_0 'a "'a List_0"

fun size_0 :: "'a List_0 => int" where
  "size_0 Nil_0 = 0" |
  "size_0 (Cons_0 _ xs_0) = 1 + size_0 xs_0"

lemma size_0_postcondition_0: "size_0 l_0 >= 0"  (* proved *)

end
'''


def test_size_document():
    an = analyze((DATA / "size.psc").read_text())
    assert emit_theory(an, "size") == SIZE_THEORY


def test_unknown_lemmas_carry_their_reason():
    text = emit_theory(analyze((DATA / "sums_stripped.psc").read_text()), "sums")
    assert 'lemma mapFstZip_0_postcondition_0: ' in text
    assert "(* unknown: no-progress *)" in text
    assert "imports Base" in text


def test_assumed_mappings_become_axioms():
    an = analyze((FIXTURES / "mapping.psc").read_text(), assume_mappings=True)
    assert 'axiomatization where map_1_mapping: "map_1 = map_0"  (* axiom *)' in emit_theory(an)


def test_failed_termination_is_marked():
    text = emit_theory(analyze((FIXTURES / "term.psc").read_text()), "term")
    assert "(* termination not certified *)" in text


@pytest.mark.parametrize("e, s", [
    (E.Prim("-", (E.IntLit(1), E.Prim("-", (E.Var("a'0"), E.Var("b'0"))))), "1 - (a_0 - b_0)"),
    (E.Prim("*", (E.Prim("+", (E.Var("a'0"), E.IntLit(1))), E.IntLit(2))), "(a_0 + 1) * 2"),
    (E.Prim("!", (E.Prim("==", (E.Var("a'0"), E.IntLit(-3))),)), "~ (a_0 = (-3))"),
])
def test_precedence(e, s):
    assert show_term(e) == s


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_equations_round_trip(path):
    an = analyze(path.read_text())
    n = 0
    for name, eqs in an.equations.items():
        for eq in eqs:
            assert round_trip(eq, an.program), show_equation(eq)
            n += 1
    assert n > 0


def test_parse_equation_reads_rendered_text():
    an = analyze((DATA / "size.psc").read_text())
    size = an.program.lookup_orig("size")
    eq = an.equations[size][1]
    f, lhs, rhs = parse_equation(show_equation(eq), an.program)
    assert (f, rhs) == (size, eq.rhs)
    assert lhs[0].name == an.program.lookup_orig("Cons")
