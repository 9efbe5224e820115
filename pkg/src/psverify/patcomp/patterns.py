"""Type-directed pattern algebra: intersection, subtraction, instance matching."""
from __future__ import annotations

from ..core import expr as E
from ..core.types import BOOL, TTuple, is_datatype


def _is_any(p) -> bool:
    return isinstance(p, (E.Wild, E.PVar))


def field_types(program, p, ty) -> list:
    if isinstance(p, E.PCon):
        return program.ctor_field_types(p.name, ty)
    if isinstance(p, E.PTup):
        return list(ty.items) if isinstance(ty, TTuple) else [None] * len(p.items)
    return []


def expand(program, ty) -> list | None:
    """All top-level shapes of ``ty`` with wildcard fields, or None for infinite/opaque types."""
    if is_datatype(ty):
        d = program.dt[ty.name]
        return [E.PCon(c.name, tuple(E.Wild() for _ in c.fields)) for c in d.constructors]
    if ty == BOOL:
        return [E.PLit(True), E.PLit(False)]
    if isinstance(ty, TTuple):
        return [E.PTup(tuple(E.Wild() for _ in ty.items))]
    return None


def intersect(program, a, b, ty):
    """Pattern matching exactly the values matched by both, or None if disjoint."""
    if _is_any(a):
        return b
    if _is_any(b):
        return a
    if isinstance(a, E.PLit) and isinstance(b, E.PLit):
        return a if a.value == b.value and type(a.value) is type(b.value) else None
    if isinstance(a, E.PLit) and isinstance(b, E.PNotLits):
        return None if a.value in b.values else a
    if isinstance(a, E.PNotLits) and isinstance(b, E.PLit):
        return intersect(program, b, a, ty)
    if isinstance(a, E.PNotLits) and isinstance(b, E.PNotLits):
        return E.PNotLits(a.values | b.values)
    if isinstance(a, E.PCon) and isinstance(b, E.PCon):
        if a.name != b.name:
            return None
        fts = field_types(program, a, ty)
        out = []
        for x, y, t in zip(a.args, b.args, fts):
            r = intersect(program, x, y, t)
            if r is None:
                return None
            out.append(r)
        return E.PCon(a.name, tuple(out))
    if isinstance(a, E.PTup) and isinstance(b, E.PTup):
        fts = field_types(program, a, ty)
        out = []
        for x, y, t in zip(a.items, b.items, fts):
            r = intersect(program, x, y, t)
            if r is None:
                return None
            out.append(r)
        return E.PTup(tuple(out))
    return None


def subtract(program, q, p, ty) -> list:
    """Disjoint patterns covering exactly the values matched by ``q`` but not ``p``."""
    if _is_any(p):
        return []
    if _is_any(q):
        shapes = expand(program, ty)
        if shapes is None:
            if isinstance(p, E.PLit):
                return [E.PNotLits(frozenset({p.value}))]
            if isinstance(p, E.PNotLits):
                return [E.PLit(v) for v in sorted(p.values)]
            return [q]
        out = []
        for s in shapes:
            out += subtract(program, s, p, ty)
        return out
    if isinstance(q, E.PNotLits):
        if isinstance(p, E.PLit):
            return [q] if p.value in q.values else [E.PNotLits(q.values | {p.value})]
        if isinstance(p, E.PNotLits):
            return [E.PLit(v) for v in sorted(p.values - q.values)]
        return [q]
    if isinstance(q, E.PLit):
        if isinstance(p, E.PLit):
            return [] if p.value == q.value and type(p.value) is type(q.value) else [q]
        if isinstance(p, E.PNotLits):
            return [q] if q.value in p.values else []
        return [q]
    if isinstance(q, (E.PCon, E.PTup)) and type(q) is type(p):
        if isinstance(q, E.PCon) and q.name != p.name:
            return [q]
        qs = q.args if isinstance(q, E.PCon) else q.items
        ps = p.args if isinstance(p, E.PCon) else p.items
        fts = field_types(program, q, ty)
        rebuild = (lambda xs: E.PCon(q.name, tuple(xs))) if isinstance(q, E.PCon) else (lambda xs: E.PTup(tuple(xs)))
        inters = []
        for x, y, t in zip(qs, ps, fts):
            r = intersect(program, x, y, t)
            if r is None:
                return [q]
            inters.append(r)
        out = []
        for i, (x, y, t) in enumerate(zip(qs, ps, fts)):
            for d in subtract(program, x, y, t):
                out.append(rebuild(inters[:i] + [d] + list(qs[i + 1:])))
        return out
    return [q]


def subtract_all(program, q, ps, ty) -> list:
    regions = [q]
    for p in ps:
        nxt = []
        for r in regions:
            nxt += subtract(program, r, p, ty)
        regions = nxt
        if not regions:
            break
    return regions


def has_notlits(p) -> bool:
    if isinstance(p, E.PNotLits):
        return True
    if isinstance(p, E.PCon):
        return any(has_notlits(a) for a in p.args)
    if isinstance(p, E.PTup):
        return any(has_notlits(a) for a in p.items)
    return False


def anonymize(p, keep: set):
    """Turn variables not in ``keep`` into wildcards."""
    if isinstance(p, E.PVar):
        return p if p.name in keep else E.Wild()
    if isinstance(p, E.PCon):
        return E.PCon(p.name, tuple(anonymize(a, keep) for a in p.args))
    if isinstance(p, E.PTup):
        return E.PTup(tuple(anonymize(a, keep) for a in p.items))
    return p


def match_instance(general, specific, acc: dict) -> bool:
    """Bind variables of ``general`` to the subpatterns of ``specific`` it is an instance of."""
    if isinstance(general, E.Wild):
        return True
    if isinstance(general, E.PVar):
        acc[general.name] = specific
        return True
    if isinstance(general, E.PLit):
        return isinstance(specific, E.PLit) and specific.value == general.value
    if isinstance(general, E.PCon):
        return (isinstance(specific, E.PCon) and specific.name == general.name
                and all(match_instance(g, s, acc) for g, s in zip(general.args, specific.args)))
    if isinstance(general, E.PTup):
        return (isinstance(specific, E.PTup)
                and all(match_instance(g, s, acc) for g, s in zip(general.items, specific.items)))
    return False


def name_wildcards(p, fresh):
    """Replace wildcards with fresh variables; ``fresh()`` returns a new name."""
    if isinstance(p, E.Wild):
        return E.PVar(fresh())
    if isinstance(p, E.PCon):
        return E.PCon(p.name, tuple(name_wildcards(a, fresh) for a in p.args))
    if isinstance(p, E.PTup):
        return E.PTup(tuple(name_wildcards(a, fresh) for a in p.items))
    return p


def show_pattern(p) -> str:
    from ..surface.resolve import render_name
    if isinstance(p, E.Wild):
        return "_"
    if isinstance(p, E.PVar):
        return render_name(p.name)
    if isinstance(p, E.PLit):
        return str(p.value).lower() if isinstance(p.value, bool) else str(p.value)
    if isinstance(p, E.PNotLits):
        return "_ /* not " + ", ".join(map(str, sorted(p.values))) + " */"
    if isinstance(p, E.PCon):
        if not p.args:
            return render_name(p.name)
        return f"{render_name(p.name)}({', '.join(show_pattern(a) for a in p.args)})"
    if isinstance(p, E.PTup):
        return "(" + ", ".join(show_pattern(a) for a in p.items) + ")"
    return repr(p)
