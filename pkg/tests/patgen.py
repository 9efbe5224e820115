"""Random small patterns and brute-force value enumeration for coverage checks."""
from __future__ import annotations

import itertools
import random

from psverify.core import expr as E
from psverify.core.evaluate import CtorVal, TupleVal, match_pattern
from psverify.core.types import BOOL, INT, TCon, TTuple, is_datatype

INT_LITS = (0, 1, 2)
INT_DOMAIN = (0, 1, 2, 3)  # 3 stands for every literal no pattern mentions


def scrutinee_types(program):
    lst = program.lookup_orig("List", "datatype")
    nat = program.lookup_orig("Nat", "datatype")
    return [TCon(lst, (BOOL,)), TCon(nat), TTuple((BOOL, TCon(nat))), TCon(lst, (INT,)),
            TTuple((TCon(lst, (BOOL,)), BOOL)), INT]


def random_pattern(program, ty, rng: random.Random, depth: int):
    if depth <= 1 or rng.random() < 0.25:
        return E.Wild() if rng.random() < 0.5 else E.PVar(f"v{rng.randrange(1000)}")
    if ty == BOOL:
        return E.PLit(rng.random() < 0.5)
    if ty == INT:
        return E.PLit(rng.choice(INT_LITS))
    if isinstance(ty, TTuple):
        return E.PTup(tuple(random_pattern(program, t, rng, depth) for t in ty.items))
    d = program.dt[ty.name]
    c = rng.choice(d.constructors).name
    return E.PCon(c, tuple(random_pattern(program, t, rng, depth - 1) for t in program.ctor_field_types(c, ty)))


def values(program, ty, depth: int) -> list:
    if ty == BOOL:
        return [False, True]
    if ty == INT:
        return list(INT_DOMAIN)
    if isinstance(ty, TTuple):
        return [TupleVal(vs) for vs in itertools.product(*(values(program, t, depth) for t in ty.items))]
    assert is_datatype(ty)
    if depth <= 0:
        return []
    out = []
    for c in program.dt[ty.name].constructors:
        fields = [values(program, t, depth - 1) for t in program.ctor_field_types(c.name, ty)]
        out += [CtorVal(c.name, vs) for vs in itertools.product(*fields)]
    return out


def brute_force_complete(program, clauses, ty, depth: int = 3) -> bool:
    return all(any(match_pattern(p, v, {}) for p in clauses) for v in values(program, ty, depth))


def random_match(program, rng: random.Random):
    ty = rng.choice(scrutinee_types(program))
    clauses = [random_pattern(program, ty, rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
    return ty, clauses
