from __future__ import annotations

import pytest

from psverify.core.evaluate import CtorVal, eval_expr
from psverify.emitter import vc_statement
from psverify.errors import HintError
from psverify.vcgen import generate_vcs, parse_hint

from conftest import DATA, analyze, fun, load, load_file

HD = "def hd(l: List[BigInt]): BigInt = l match { case Cons(h, _) => h }"


def vcs_of(program, *names):
    return generate_vcs(program, [fun(program, n) for n in names])


def test_size_has_one_postcondition_vc():
    prog = load_file(DATA / "size.psc")
    (vc,) = vcs_of(prog, "size")
    assert (vc.id, vc.kind) == ("size_0.postcondition.0", "postcondition")
    assert vc_statement(vc) == "size_0 l_0 >= 0"


def test_precondition_vc_carries_path_conditions():
    prog = load_file(DATA / "minilib.psc")
    vc = next(v for v in vcs_of(prog, "nth") if v.kind == "precondition_at_call")
    assert vc_statement(vc).endswith("~ (i_0 = 0) ==> 0 <= i_0 - 1 & i_0 - 1 < size_0 t_18")
    assert vc.callee == vc.fun


def test_earlier_clauses_are_negated_on_later_paths():
    prog = load_file(DATA / "minilib.psc")
    vc = next(v for v in vcs_of(prog, "maxList") if v.kind == "precondition_at_call")
    assert "~ (case l_22 of (Cons_0 _ Nil_0) => True | _ => False)" in vc_statement(vc)


def test_complete_matches_produce_no_exhaustiveness_vc():
    assert all(v.kind != "exhaustiveness" for v in vcs_of(load_file(DATA / "size.psc"), "size"))


def test_missing_nil_is_unknown_and_refuted_by_evaluation():
    prog = load(HD)
    (vc,) = vcs_of(prog, "hd")
    assert vc.kind == "exhaustiveness"
    an = analyze(HD)
    assert an.verdict.per_vc[vc.id]["verdict"] == "unknown"
    assert an.verdict.overall == "unknown"
    (l, _), = vc.fixed
    assert eval_expr(prog, vc.formula, {l: CtorVal(prog.lookup_orig("Nil"))}) is False


def test_holds_lemma_yields_one_vc():
    prog = load_file(DATA / "sums.psc")
    (vc,) = vcs_of(prog, "sumReverse")
    assert vc.kind == "holds"


def test_hints_are_parsed_and_names_resolved():
    prog = load_file(DATA / "sums.psc")
    (vc,) = vcs_of(prog, "sumConstant")
    assert [s.method for s in vc.hint.steps] == ["induct", "auto"]
    assert vc.hint.steps[0].arg == str(prog.name_table.lookup_binder(vc.fun, "xs"))


@pytest.mark.parametrize("text", ["(induct", "(frobnicate)", '(induct "<var nope>", auto)', "(auto,)"])
def test_bad_hints_are_input_errors(text):
    prog = load_file(DATA / "sums.psc")
    with pytest.raises(HintError):
        parse_hint(text, fun(prog, "sumConstant").name, prog.name_table)
