"""Assembling the rewrite rules and induction principles available to proofs."""
from __future__ import annotations

from ..core import expr as E
from ..core.types import TTuple
from ..patcomp.exhaustive import check_exhaustive
from ..surface.resolve import render_name, split_internal
from .kernel import Theory, nat_theory
from .principles import datatype_principle, function_principle
from .rules import RuleSet, equation_rules, lemma_rule

# simultaneous-induction principle names resolved to a function's own principle
RULE_ALIASES = {"list_induct2": "zip"}


def new_theory(program) -> Theory:
    th = Theory(program, RuleSet())
    for d in program.datatypes:
        p = datatype_principle(d)
        th.principles[p.name] = p
        base = split_internal(d.name)[0]
        th.aliases.setdefault(f"{base}.induct", p.name)
        th.aliases.setdefault(f"{render_name(d.name)}.induct", p.name)
    return th


def equations_complete(fun, equations, program) -> bool:
    if len(fun.params) == 1:
        cov = check_exhaustive([eq.lhs[0] for eq in equations], fun.params[0][1], program)
    else:
        ty = TTuple(tuple(t for _, t in fun.params))
        cov = check_exhaustive([E.PTup(tuple(eq.lhs)) for eq in equations], ty, program)
    return cov.complete


def add_function(th: Theory, fun, equations) -> None:
    """Register a terminated function's equations and its functional induction principle."""
    th.rules.equations[fun.name] = equation_rules(fun.name, equations)
    for r in th.rules.equations[fun.name]:
        th.rules.status[r.id] = "definition"
    if fun.params and equations_complete(fun, equations, th.program):
        p = function_principle(fun, equations)
        if p is not None:
            th.principles[p.name] = p
            base = split_internal(fun.name)[0]
            th.aliases.setdefault(f"{base}.induct", p.name)
            th.aliases.setdefault(f"{render_name(fun.name)}.induct", p.name)
            for alias, target in RULE_ALIASES.items():
                if base == target and fun.origin == "base":
                    th.aliases[alias] = p.name


def add_lemma(th: Theory, name: str, fun, status: str = "proved") -> bool:
    """Register a proved ``.holds`` function as a rewrite rule (left to right)."""
    r = lemma_rule(name, fun)
    if r is None:
        return False
    th.rules.lemmas[name] = r
    th.rules.status[r.id] = status
    if fun.pre is None:
        th.rules.statements[name] = (frozenset(fun.param_names), fun.body)
    if th.nat is None:
        th.nat = nat_theory(th.program, th.rules)
    return True
