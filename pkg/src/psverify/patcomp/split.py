"""Split function bodies into top-level pattern-matching equations."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import expr as E
from ..core.subst import fresh_name, substitute
from .patterns import anonymize, has_notlits, match_instance, name_wildcards, subtract_all

SPLIT_DEPTH_LIMIT = 8


@dataclass(frozen=True)
class Equation:
    fun: str
    lhs: tuple  # one pattern per parameter
    rhs: object
    index: int = 0
    order_sensitive: bool = field(default=False, compare=False)

    def lhs_vars(self) -> set[str]:
        out: set[str] = set()
        for p in self.lhs:
            out |= E.pattern_vars(p)
        return out


def _replace_var(p, x: str, new):
    if isinstance(p, E.PVar):
        return new if p.name == x else p
    if isinstance(p, E.PCon):
        return E.PCon(p.name, tuple(_replace_var(a, x, new) for a in p.args))
    if isinstance(p, E.PTup):
        return E.PTup(tuple(_replace_var(a, x, new) for a in p.items))
    return p


class Splitter:
    def __init__(self, fun, program, depth_limit: int = SPLIT_DEPTH_LIMIT):
        self.fun = fun
        self.program = program
        self.depth_limit = depth_limit
        self.avoid = set(fun.param_names) | E.all_names(fun.body)
        self.new_types: dict[str, object] = {}

    def fresh(self) -> str:
        n = fresh_name("uu'0", self.avoid | set(self.program.var_types))
        self.avoid.add(n)
        return n

    def run(self) -> list[Equation]:
        start = (tuple(E.PVar(p) for p in self.fun.param_names), self.fun.body, False)
        out = self.expand(start, 0)
        return [Equation(self.fun.name, lhs, rhs, i, sens) for i, (lhs, rhs, sens) in enumerate(out)]

    def expand(self, eq, depth: int) -> list:
        lhs, rhs, sens = eq
        if depth >= self.depth_limit or not isinstance(rhs, E.Match):
            return [eq]
        bound = set()
        for p in lhs:
            bound |= E.pattern_vars(p)
        if isinstance(rhs.scrut, E.Tuple):
            return self.expand_tuple(eq, bound, depth)
        if not isinstance(rhs.scrut, E.Var):
            return [eq]
        x = rhs.scrut.name
        if x not in bound:
            return [eq]
        ty = rhs.scrut_type
        out = []
        earlier = []
        for clause in rhs.clauses:
            p = clause.pattern
            regions = subtract_all(self.program, p, earlier, ty) if earlier else [p]
            earlier.append(p)
            if not regions:
                continue  # unreachable clause
            clause_sens = sens
            if any(has_notlits(r) for r in regions):
                regions = [p]
                clause_sens = True
            for r in regions:
                new = self.specialize(lhs, x, clause, r)
                out += self.expand((new[0], new[1], clause_sens), depth + 1)
        return out

    def expand_tuple(self, eq, bound: set, depth: int) -> list:
        lhs, rhs, sens = eq
        items = rhs.scrut.items
        xs = [i.name for i in items if isinstance(i, E.Var)]
        if len(xs) != len(items) or len(set(xs)) != len(xs) or not set(xs) <= bound:
            return [eq]
        ty = rhs.scrut_type
        out = []
        earlier = []
        for clause in rhs.clauses:
            p = clause.pattern
            regions = subtract_all(self.program, p, earlier, ty) if earlier else [p]
            earlier.append(p)
            if not regions:
                continue
            clause_sens = sens
            if any(has_notlits(r) for r in regions):
                regions = [p]
                clause_sens = True
            for r in regions:
                new = self.specialize_tuple(lhs, xs, clause, r)
                out += self.expand((new[0], new[1], clause_sens), depth + 1)
        return out

    def specialize_tuple(self, lhs, xs: list, clause: E.Clause, region):
        p = clause.pattern
        r = anonymize(region, E.pattern_vars(p))
        if isinstance(r, (E.Wild, E.PVar)):
            body = clause.body
            if isinstance(p, E.PVar):
                body = substitute(body, {p.name: E.Tuple(tuple(E.Var(x) for x in xs))})
            return lhs, body
        # unconstrained components keep the parameter name
        r = E.PTup(tuple(E.PVar(x) if isinstance(i, E.Wild) else i for x, i in zip(xs, r.items)))
        named = name_wildcards(r, self.fresh)
        full: dict = {}
        match_instance(p, named, full)
        bindings = {v: E.pattern_to_expr(sub) for v, sub in full.items() if not (isinstance(sub, E.PVar) and sub.name == v)}
        new_lhs = lhs
        for x, item in zip(xs, named.items):
            if not (isinstance(item, E.PVar) and item.name == x):
                bindings[x] = E.pattern_to_expr(item)
                new_lhs = tuple(_replace_var(q, x, item) for q in new_lhs)
        return new_lhs, substitute(clause.body, bindings)

    def specialize(self, lhs, x: str, clause: E.Clause, region):
        p = clause.pattern
        own = E.pattern_vars(p)
        r = anonymize(region, own)
        sigma: dict = {}
        match_instance(p, r, sigma)
        if isinstance(r, (E.Wild, E.PVar)):
            # catch-all clause: the parameter keeps its name
            body = clause.body
            if isinstance(r, E.PVar):
                body = substitute(body, {r.name: E.Var(x)})
            return lhs, body
        named = name_wildcards(r, self.fresh)
        # binders of p that were refined by earlier-clause completion
        full: dict = {}
        match_instance(p, named, full)
        bindings = {v: E.pattern_to_expr(sub) for v, sub in full.items() if not (isinstance(sub, E.PVar) and sub.name == v)}
        bindings[x] = E.pattern_to_expr(named)
        new_lhs = tuple(_replace_var(q, x, named) for q in lhs)
        return new_lhs, substitute(clause.body, bindings)


def split_equations(fun, program, depth_limit: int = SPLIT_DEPTH_LIMIT) -> list[Equation]:
    """Equations with top-level patterns equivalent to ``fun``'s body under first-match semantics."""
    return Splitter(fun, program, depth_limit).run()


def equation_var_types(eqs: list[Equation], fun, program) -> dict:
    """Types of every lhs variable, derived from the parameter types."""
    from .patterns import field_types
    out = {}

    def walk(p, ty):
        if isinstance(p, E.PVar):
            out[p.name] = ty
        elif isinstance(p, (E.PCon, E.PTup)):
            subs = p.args if isinstance(p, E.PCon) else p.items
            for a, t in zip(subs, field_types(program, p, ty)):
                walk(a, t)

    for eq in eqs:
        for p, (_, ty) in zip(eq.lhs, fun.params):
            walk(p, ty)
    return out
