"""Core expressions and patterns.

Nodes are frozen and hashable; spans and type annotations are excluded from
equality so that structurally identical terms compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SourceSpan

_NOSPAN = dict(default=None, compare=False, repr=False)


# ---- patterns

@dataclass(frozen=True)
class Wild:
    pass


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PCon:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class PTup:
    items: tuple


@dataclass(frozen=True)
class PLit:
    value: int | bool


@dataclass(frozen=True)
class PNotLits:
    """Any literal except the listed ones (only produced by pattern subtraction)."""
    values: frozenset


# ---- expressions

@dataclass(frozen=True)
class Var:
    name: str
    span: SourceSpan | None = field(**_NOSPAN)


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


TRUE = BoolLit(True)
FALSE = BoolLit(False)


@dataclass(frozen=True)
class Ctor:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Call:
    fun: str
    args: tuple
    span: SourceSpan | None = field(**_NOSPAN)


@dataclass(frozen=True)
class FunRef:
    name: str


@dataclass(frozen=True)
class Apply:
    fn: object
    args: tuple


@dataclass(frozen=True)
class Lam:
    params: tuple
    body: object
    param_types: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class Tuple:
    items: tuple


@dataclass(frozen=True)
class Proj:
    expr: object
    index: int  # 1-based


@dataclass(frozen=True)
class If:
    cond: object
    then: object
    else_: object


@dataclass(frozen=True)
class Let:
    name: str
    value: object
    body: object
    type: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Clause:
    pattern: object
    body: object


@dataclass(frozen=True)
class Match:
    scrut: object
    clauses: tuple
    scrut_type: object = field(default=None, compare=False, repr=False)
    span: SourceSpan | None = field(**_NOSPAN)


ARITH_OPS = frozenset({"+", "-", "*", "neg"})
CMP_OPS = frozenset({"<", "<=", ">", ">="})
BOOL_OPS = frozenset({"&&", "||", "!", "==>"})


@dataclass(frozen=True)
class Prim:
    op: str
    args: tuple


@dataclass(frozen=True)
class ForAll:
    """Universally quantified formula; only appears in proof states."""
    vars: tuple  # tuple of (name, Type)
    body: object


def children(e) -> tuple:
    if isinstance(e, (Ctor, Call, Prim)):
        return e.args
    if isinstance(e, Apply):
        return (e.fn,) + e.args
    if isinstance(e, Lam):
        return (e.body,)
    if isinstance(e, Tuple):
        return e.items
    if isinstance(e, Proj):
        return (e.expr,)
    if isinstance(e, If):
        return (e.cond, e.then, e.else_)
    if isinstance(e, Let):
        return (e.value, e.body)
    if isinstance(e, Match):
        return (e.scrut,) + tuple(c.body for c in e.clauses)
    if isinstance(e, ForAll):
        return (e.body,)
    return ()


def with_children(e, kids: tuple):
    """Rebuild ``e`` with new immediate children (same order as :func:`children`)."""
    if isinstance(e, Ctor):
        return Ctor(e.name, tuple(kids))
    if isinstance(e, Call):
        return Call(e.fun, tuple(kids), e.span)
    if isinstance(e, Prim):
        return Prim(e.op, tuple(kids))
    if isinstance(e, Apply):
        return Apply(kids[0], tuple(kids[1:]))
    if isinstance(e, Lam):
        return Lam(e.params, kids[0], e.param_types)
    if isinstance(e, Tuple):
        return Tuple(tuple(kids))
    if isinstance(e, Proj):
        return Proj(kids[0], e.index)
    if isinstance(e, If):
        return If(*kids)
    if isinstance(e, Let):
        return Let(e.name, kids[0], kids[1], e.type)
    if isinstance(e, Match):
        return Match(kids[0], tuple(Clause(c.pattern, b) for c, b in zip(e.clauses, kids[1:])), e.scrut_type, e.span)
    if isinstance(e, ForAll):
        return ForAll(e.vars, kids[0])
    return e


def binders_of(e) -> list[set[str]]:
    """Names bound by ``e`` over each child (parallel to :func:`children`)."""
    if isinstance(e, Lam):
        return [set(e.params)]
    if isinstance(e, Let):
        return [set(), {e.name}]
    if isinstance(e, Match):
        return [set()] + [pattern_vars(c.pattern) for c in e.clauses]
    if isinstance(e, ForAll):
        return [{n for n, _ in e.vars}]
    return [set()] * len(children(e))


def pattern_vars(p) -> set[str]:
    if isinstance(p, PVar):
        return {p.name}
    if isinstance(p, PCon):
        out: set[str] = set()
        for a in p.args:
            out |= pattern_vars(a)
        return out
    if isinstance(p, PTup):
        out = set()
        for a in p.items:
            out |= pattern_vars(a)
        return out
    return set()


def pattern_var_list(p) -> list[str]:
    """Pattern variables in left-to-right order."""
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, (PCon, PTup)):
        out: list[str] = []
        for a in (p.args if isinstance(p, PCon) else p.items):
            out += pattern_var_list(a)
        return out
    return []


def free_vars(e) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    out: set[str] = set()
    for kid, bound in zip(children(e), binders_of(e)):
        fv = free_vars(kid)
        out |= fv - bound if bound else fv
    return frozenset(out)


def all_names(e, acc=None) -> set[str]:
    """Every variable name occurring in ``e``, bound or free."""
    acc = set() if acc is None else acc
    if isinstance(e, Var):
        acc.add(e.name)
    for b in binders_of(e):
        acc |= b
    for k in children(e):
        all_names(k, acc)
    return acc


def pattern_to_expr(p):
    if isinstance(p, PVar):
        return Var(p.name)
    if isinstance(p, PCon):
        return Ctor(p.name, tuple(pattern_to_expr(a) for a in p.args))
    if isinstance(p, PTup):
        return Tuple(tuple(pattern_to_expr(a) for a in p.items))
    if isinstance(p, PLit):
        return BoolLit(p.value) if isinstance(p.value, bool) else IntLit(p.value)
    raise ValueError(f"pattern {p!r} has no expression form")


def size(e) -> int:
    return 1 + sum(size(k) for k in children(e))


def contains_call(e, names) -> bool:
    if isinstance(e, Call) and e.fun in names:
        return True
    if isinstance(e, FunRef) and e.name in names:
        return True
    return any(contains_call(k, names) for k in children(e))


def subterm(e, path: tuple):
    for i in path:
        e = children(e)[i]
    return e


def replace_at(e, path: tuple, new):
    if not path:
        return new
    kids = list(children(e))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(e, tuple(kids))


def conj(items):
    items = [i for i in items if i != TRUE]
    if not items:
        return TRUE
    out = items[-1]
    for i in reversed(items[:-1]):
        out = Prim("&&", (i, out))
    return out


def implies(hyps, goal):
    out = goal
    for h in reversed(list(hyps)):
        out = Prim("==>", (h, out))
    return out
