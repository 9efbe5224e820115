"""Capture-avoiding simultaneous substitution."""
from __future__ import annotations

from .expr import (
    Clause, ForAll, Lam, Let, Match, PCon, PTup, PVar, Var,
    all_names, children, free_vars, pattern_var_list, with_children,
)


def fresh_name(name: str, avoid) -> str:
    base = name.rpartition("'")[0] if "'" in name else name
    k = 0
    while f"{base}'{k}" in avoid:
        k += 1
    return f"{base}'{k}"


def rename_pattern(p, mapping: dict):
    if isinstance(p, PVar):
        return PVar(mapping.get(p.name, p.name))
    if isinstance(p, PCon):
        return PCon(p.name, tuple(rename_pattern(a, mapping) for a in p.args))
    if isinstance(p, PTup):
        return PTup(tuple(rename_pattern(a, mapping) for a in p.items))
    return p


def _prepare(binders, body, bindings: dict):
    """Drop shadowed keys and freshen binders that would capture.

    Returns (binder renaming, bindings to push into the body).
    """
    inner = {k: v for k, v in bindings.items() if k not in binders}
    fv_body = free_vars(body)
    inner = {k: v for k, v in inner.items() if k in fv_body}
    if not inner:
        return {}, inner
    incoming: set[str] = set()
    for v in inner.values():
        incoming |= free_vars(v)
    clash = [b for b in binders if b in incoming]
    if not clash:
        return {}, inner
    avoid = set(incoming) | all_names(body) | set(inner) | set(binders)
    renaming = {}
    for b in sorted(clash):
        nb = fresh_name(b, avoid)
        avoid.add(nb)
        renaming[b] = nb
    inner = dict(inner)
    for b, nb in renaming.items():
        inner[b] = Var(nb)
    return renaming, inner


def substitute(e, bindings: dict):
    """Replace free variables of ``e`` according to ``bindings`` (name -> Expr)."""
    if not bindings:
        return e
    if isinstance(e, Var):
        return bindings.get(e.name, e)
    if isinstance(e, Lam):
        ren, inner = _prepare(e.params, e.body, bindings)
        if not inner:
            return e
        return Lam(tuple(ren.get(p, p) for p in e.params), substitute(e.body, inner), e.param_types)
    if isinstance(e, Let):
        value = substitute(e.value, bindings)
        ren, inner = _prepare((e.name,), e.body, bindings)
        body = substitute(e.body, inner) if inner else e.body
        return Let(ren.get(e.name, e.name), value, body, e.type)
    if isinstance(e, ForAll):
        names = tuple(n for n, _ in e.vars)
        ren, inner = _prepare(names, e.body, bindings)
        if not inner:
            return e
        return ForAll(tuple((ren.get(n, n), t) for n, t in e.vars), substitute(e.body, inner))
    if isinstance(e, Match):
        scrut = substitute(e.scrut, bindings)
        clauses = []
        for c in e.clauses:
            pv = pattern_var_list(c.pattern)
            ren, inner = _prepare(pv, c.body, bindings)
            pat = rename_pattern(c.pattern, ren) if ren else c.pattern
            clauses.append(Clause(pat, substitute(c.body, inner) if inner else c.body))
        return Match(scrut, tuple(clauses), e.scrut_type, e.span)
    kids = children(e)
    if not kids:
        return e
    return with_children(e, tuple(substitute(k, bindings) for k in kids))
