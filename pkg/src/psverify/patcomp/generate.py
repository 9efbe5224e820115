"""Seeded random well-typed values for oracle testing."""
from __future__ import annotations

import random

from ..core import expr as E
from ..core.evaluate import Closure, CtorVal, TupleVal, value_to_expr
from ..core.types import BOOL, INT, TFun, TTuple, TVar, is_datatype, subst_type, type_vars

INT_RANGE = (-10, 10)


def _recursive(program, ctor, dt_name) -> bool:
    from ..core.elaborate import _mentions
    return any(_mentions(t, dt_name) for _, t in program.ctors[ctor].fields)


def random_value(program, ty, rng: random.Random, depth: int = 5):
    if ty == INT or isinstance(ty, TVar):
        return rng.randint(*INT_RANGE)
    if ty == BOOL:
        return rng.random() < 0.5
    if isinstance(ty, TTuple):
        return TupleVal(tuple(random_value(program, t, rng, depth) for t in ty.items))
    if is_datatype(ty):
        d = program.dt[ty.name]
        ctors = [c.name for c in d.constructors]
        if depth <= 1:
            base = [c for c in ctors if not _recursive(program, c, d.name)]
            ctors = base or ctors
        c = rng.choice(ctors)
        fts = program.ctor_field_types(c, ty)
        return CtorVal(c, tuple(random_value(program, t, rng, depth - 1) for t in fts))
    if isinstance(ty, TFun):
        return random_function(program, ty, rng, depth)
    raise ValueError(f"cannot generate values of type {ty}")


def random_function(program, ty: TFun, rng: random.Random, depth: int):
    params = tuple(f"arg'{i}" for i in range(len(ty.params)))
    choices = ["const"]
    same = [i for i, t in enumerate(ty.params) if t == ty.result]
    if same:
        choices.append("proj")
    if ty.result == INT and any(t == INT for t in ty.params):
        choices.append("shift")
    kind = rng.choice(choices)
    if kind == "const":
        body = value_to_expr(random_value(program, ty.result, rng, min(depth, 3)))
    elif kind == "proj":
        body = E.Var(params[rng.choice(same)])
    else:
        i = rng.choice([i for i, t in enumerate(ty.params) if t == INT])
        body = E.Prim("+", (E.Var(params[i]), E.IntLit(rng.randint(-3, 3))))
    return Closure(params, body, {})


def ground_params(fun) -> list:
    """Parameter types with type variables instantiated at Int."""
    tvs = set()
    for _, t in fun.params:
        type_vars(t, tvs)
    m = {v: INT for v in tvs}
    return [subst_type(t, m) for _, t in fun.params]


def random_args(program, fun, rng: random.Random, depth: int = 5) -> list:
    return [random_value(program, t, rng, depth) for t in ground_params(fun)]
