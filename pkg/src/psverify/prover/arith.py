"""Canonical forms for integer polynomials and Peano addition."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..core import expr as E
from ..core.types import INT, TCon

# polynomial: dict monomial -> int coefficient; monomial = sorted tuple of atoms (() for the constant)


@lru_cache(maxsize=None)
def atom_key(a) -> str:
    return repr(a)


def _mono_key(m):
    return (len(m), tuple(atom_key(a) for a in m))


def _add(p, q, sign=1):
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, 0) + sign * c
        if out[m] == 0:
            del out[m]
    return out


def _mul(p, q):
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2, key=atom_key))
            out[m] = out.get(m, 0) + c1 * c2
            if out[m] == 0:
                del out[m]
    return out


def is_arith(e) -> bool:
    return isinstance(e, E.IntLit) or (isinstance(e, E.Prim) and e.op in E.ARITH_OPS)


def poly(e) -> dict:
    if isinstance(e, E.IntLit):
        return {(): e.value} if e.value else {}
    if isinstance(e, E.Prim) and e.op in E.ARITH_OPS:
        if e.op == "neg":
            return _add({}, poly(e.args[0]), -1)
        a, b = (poly(x) for x in e.args)
        if e.op == "+":
            return _add(a, b)
        if e.op == "-":
            return _add(a, b, -1)
        return _mul(a, b)
    return {(e,): 1}


def constant(p) -> int | None:
    if not p:
        return 0
    if set(p) == {()}:
        return p[()]
    return None


def _prod(m):
    out = m[0]
    for a in m[1:]:
        out = E.Prim("*", (out, a))
    return out


def _term(c: int, m):
    if not m:
        return E.IntLit(c)
    if c == 1:
        return _prod(m)
    return E.Prim("*", (E.IntLit(c), _prod(m)))


def render(p) -> object:
    monos = sorted((m for m in p if m), key=_mono_key)
    if () in p:
        monos.append(())
    if not monos:
        return E.IntLit(0)
    out = _term(p[monos[0]], monos[0])
    for m in monos[1:]:
        c = p[m]
        out = E.Prim("-", (out, _term(-c, m))) if c < 0 else E.Prim("+", (out, _term(c, m)))
    return out


def normalize_arith(e):
    """Canonical polynomial form of an arithmetic term."""
    return render(poly(e))


def term_type(e, types: dict, program):
    """Best-effort type of a term; ``None`` when unknown."""
    if isinstance(e, E.Var):
        return types.get(e.name)
    if isinstance(e, E.IntLit) or is_arith(e):
        return INT
    if isinstance(e, E.BoolLit):
        return TCon("Bool")
    if isinstance(e, E.Prim):
        return TCon("Bool")
    if isinstance(e, E.Call):
        f = program.funs.get(e.fun)
        return f.ret if f is not None else None
    if isinstance(e, E.Ctor):
        c = program.ctors.get(e.name)
        return TCon(c.datatype) if c is not None else None
    return None


def int_typed(e, types: dict, program) -> bool:
    return term_type(e, types, program) == INT


# ---- Peano addition

@dataclass(frozen=True)
class NatTheory:
    datatype: str
    zero: str
    succ: str
    plus: str


def nat_summands(e, nat: NatTheory):
    """(successor count, summands) of a sum built from plus/Succ/Zero."""
    if isinstance(e, E.Ctor) and e.name == nat.zero:
        return 0, []
    if isinstance(e, E.Ctor) and e.name == nat.succ:
        k, s = nat_summands(e.args[0], nat)
        return k + 1, s
    if isinstance(e, E.Call) and e.fun == nat.plus:
        k1, s1 = nat_summands(e.args[0], nat)
        k2, s2 = nat_summands(e.args[1], nat)
        return k1 + k2, s1 + s2
    return 0, [e]


def nat_render(k: int, summands, nat: NatTheory):
    s = sorted(summands, key=atom_key)
    if s:
        out = s[-1]
        for a in reversed(s[:-1]):
            out = E.Call(nat.plus, (a, out))
    else:
        out = E.Ctor(nat.zero, ())
    for _ in range(k):
        out = E.Ctor(nat.succ, (out,))
    return out


def nat_normalize(e, nat: NatTheory):
    k, s = nat_summands(e, nat)
    return nat_render(k, s, nat)
