"""Mutations that remove the decreasing argument from recursive calls."""
from __future__ import annotations

import dataclasses
import itertools

from psverify.core import expr as E


_fresh = itertools.count()


def _lhs_expr(p):
    if isinstance(p, E.Wild):
        return E.Var(f"w'{next(_fresh)}")
    if isinstance(p, E.PNotLits):
        return E.IntLit(max(p.values, default=0) + 1)
    if isinstance(p, E.PCon):
        return E.Ctor(p.name, tuple(_lhs_expr(a) for a in p.args))
    if isinstance(p, E.PTup):
        return E.Tuple(tuple(_lhs_expr(a) for a in p.items))
    return E.pattern_to_expr(p)


def _stall(e, names: set, lhs: tuple):
    kids = tuple(_stall(k, names, lhs) for k in E.children(e))
    e = E.with_children(e, kids) if kids else e
    if isinstance(e, E.Call) and e.fun in names and len(e.args) == len(lhs):
        return dataclasses.replace(e, args=tuple(_lhs_expr(p) for p in lhs))
    return e


def stall_recursion(equations: dict) -> dict:
    """Every recursive call in the component is made on the caller's own arguments."""
    names = set(equations)
    return {f: [dataclasses.replace(eq, rhs=_stall(eq.rhs, names, eq.lhs)) for eq in eqs]
            for f, eqs in equations.items()}
