from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from psverify.core import expr as E
from psverify.core.evaluate import evaluate
from psverify.core.types import INT
from psverify.patcomp.generate import random_args
from psverify.prover import linarith as LA
from psverify.prover.checker import check_trace
from psverify.prover.mapping import MappingFailure, MappingTheorem, register_mapping
from psverify.prover.sequent import Proved, Sequent, Step
from psverify.prover.tactics import Budget
from psverify.prover.theory import new_theory

from conftest import DATA, FIXTURES, analyze, fun, load, load_file

VARS = ("x", "y", "z")
RULES = ["rewrite", "intro", "forall_intro", "conj_intro", "hyp_conj", "hyp_drop", "subst", "close_true",
         "close_hyp", "close_false", "close_contra", "linarith", "case_bool", "case_data", "induct"]


def lin(coeffs, const):
    terms = [E.Prim("*", (E.IntLit(c), E.Var(v))) for v, c in zip(VARS, coeffs) if c]
    e = E.IntLit(const)
    for t in terms:
        e = E.Prim("+", (e, t))
    return e


atoms = st.builds(lambda cs, k, op: E.Prim(op, (lin(cs, k), E.IntLit(0))),
                  st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(-4, 4),
                  st.sampled_from(["<=", "<", "==", ">="]))


def holds(e, env):
    if isinstance(e, E.IntLit):
        return e.value
    if isinstance(e, E.Var):
        return env[e.name]
    a, b = (holds(x, env) for x in e.args)
    return {"+": a + b, "*": a * b, "<=": a <= b, "<": a < b, "==": a == b, ">=": a >= b}[e.op]


@given(st.lists(atoms, min_size=1, max_size=4), atoms)
@settings(max_examples=150, deadline=None)
def test_linarith_certificates_are_sound_and_checkable(hyps, goal):
    seq = Sequent(tuple((v, INT) for v in VARS), tuple(hyps), goal)
    prog = load("", use_base=False)
    cert = LA.find_certificate(seq, prog)
    if cert is None:
        return
    assert LA.check(seq, cert, prog)
    for env in itertools.product(range(-4, 5), repeat=3):
        env = dict(zip(VARS, env))
        if all(holds(h, env) for h in hyps):
            assert holds(goal, env), env


def test_disequality_hypotheses_are_split():
    x = E.Var("x")
    seq = Sequent((("x", INT),), (E.Prim(">=", (x, E.IntLit(0))), E.Prim("!", (E.Prim("==", (x, E.IntLit(0))),))),
                  E.Prim(">=", (E.Prim("-", (x, E.IntLit(1))), E.IntLit(0))))
    prog = load("", use_base=False)
    cert = LA.find_certificate(seq, prog)
    assert cert is not None and len(cert) == 2 and LA.check(seq, cert, prog)
    assert not LA.check(seq, cert[:1], prog)


def test_default_strategy_proves_size():
    an = analyze((DATA / "size.psc").read_text())
    res = an.results["size_0.postcondition.0"]
    assert isinstance(res, Proved)
    rules = {s.rule for s in res.trace.iter_steps()}
    assert {"induct", "linarith"} <= rules


def test_hints_are_followed():
    an = analyze((DATA / "sums.psc").read_text())
    assert an.verdict.overall == "unsat"
    res = an.results["mapFstZip_0.postcondition.0"]
    assert any(s.rule == "induct" for s in res.trace.iter_steps())


def test_stripped_hints_leave_map_fst_zip_unknown():
    an = analyze((DATA / "sums_stripped.psc").read_text())
    assert an.verdict.per_vc["sumReverse_0.holds.0"]["verdict"] == "proved"
    assert an.verdict.per_vc["mapFstZip_0.postcondition.0"]["verdict"] == "unknown"


def test_step_budget_gives_timeout():
    an = analyze((DATA / "sums.psc").read_text(), max_steps=3)
    assert {s.get("reason") for s in an.verdict.per_vc.values()} == {"timeout"}


def test_non_terminating_functions_report_termination():
    an = analyze((FIXTURES / "term.psc").read_text() + "\ndef loopy(x: BigInt): BigInt = loop(x) ensuring (_ == 0)")
    assert an.verdict.per_vc["loopy_0.postcondition.0"]["verdict"] == "unknown"
    an2 = analyze("def spin(x: BigInt): BigInt = spin(x) ensuring (_ == 0)")
    assert an2.verdict.per_vc["spin_0.postcondition.0"] == {"verdict": "unknown", "reason": "termination"}


def test_unprovable_goals_stay_unknown():
    an = analyze("def bad(l: List[BigInt]): Boolean = (length(l) == Zero).holds")
    assert an.verdict.overall == "unknown"


def proved_results(an):
    return [(vid, r) for vid, r in an.results.items() if isinstance(r, Proved)]


def test_every_proof_replays(corpus_analyses):
    n = 0
    for an in corpus_analyses.values():
        for vid, r in proved_results(an):
            assert check_trace(r.root, r.trace, an.theory).valid, vid
            n += 1
    assert n > 30


def corruptions(step: Step):
    yield Step(RULES[(RULES.index(step.rule) + 1) % len(RULES)], step.args, step.check)
    if step.rule == "rewrite":
        yield Step(step.rule, step.args, "0" * 16)


def test_single_step_corruption_is_detected():
    an = analyze((DATA / "sums.psc").read_text())
    for vid, r in proved_results(an):
        stack = [r.trace]
        while stack:
            node = stack.pop()
            stack.extend(node.children)
            for i, step in enumerate(list(node.steps)):
                for bad in corruptions(step):
                    node.steps[i] = bad
                    assert not check_trace(r.root, r.trace, an.theory).valid, (vid, i, bad.rule)
                    node.steps[i] = step
        assert check_trace(r.root, r.trace, an.theory).valid


def mapping_setup(path):
    from psverify.patcomp.split import split_equations
    from psverify.prover.theory import add_function
    prog = load_file(path)
    th = new_theory(prog)
    for f in prog.functions:
        add_function(th, f, split_equations(f, prog))
    return prog, th


def test_mapping_prove_mode_registers_a_rule():
    prog, th = mapping_setup(FIXTURES / "mapping.psc")
    user = fun(prog, "map")
    m = register_mapping(user, "map", "prove", th, Budget())
    assert isinstance(m, MappingTheorem) and m.status == "proved"
    assert check_trace(m.trace.root, m.trace.trace, th).valid
    assert th.rules.mappings[user.name].id == f"map:{user.name}"
    rng = random.Random(7)
    base = prog.lookup_orig("map", "base")
    for _ in range(100):
        args = random_args(prog, user, rng, 4)
        assert evaluate(prog, user.name, args) == evaluate(prog, base, args)


@pytest.mark.parametrize("path, reason", [("mapping_swapped.psc", "types do not unify"),
                                          ("mapping_wrong.psc", "no-progress")])
def test_mapping_mismatch_fails_in_prove_mode(path, reason):
    prog, th = mapping_setup(FIXTURES / path)
    m = register_mapping(fun(prog, "map"), "map", "prove", th, Budget())
    assert isinstance(m, MappingFailure) and m.reason == reason


def test_assume_mode_skips_the_proof():
    prog, th = mapping_setup(FIXTURES / "mapping_wrong.psc")
    m = register_mapping(fun(prog, "map"), "map", "assume", th)
    assert isinstance(m, MappingTheorem) and m.status == "axiom" and m.trace is None
