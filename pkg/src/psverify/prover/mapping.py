"""Replacing user functions by base-library constants through proved equivalences."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import expr as E
from ..core.types import TCon, TFun, TTuple, TVar
from ..surface.resolve import render_name
from .rules import Rule
from .sequent import Unknown
from .tactics import Budget, prove


@dataclass
class MappingTheorem:
    user: str
    library: str
    status: str  # "proved" | "axiom"
    trace: object = None

    @property
    def id(self) -> str:
        return f"{render_name(self.user)} = {render_name(self.library)}"


@dataclass
class MappingFailure:
    user: str
    library: str
    reason: str
    residual: list = field(default_factory=list)


@dataclass
class _EqGoal:
    """Just enough of a VC for :func:`prove`."""
    fixed: tuple
    hypotheses: tuple
    goal: object
    hint: object = None


def types_unify(a, b, sigma: dict | None = None) -> bool:
    """``a`` and ``b`` are equal up to a bijective renaming of type variables."""
    sigma = {} if sigma is None else sigma
    if isinstance(a, TVar) and isinstance(b, TVar):
        if a.name in sigma:
            return sigma[a.name] == b.name
        if b.name in sigma.values():
            return False
        sigma[a.name] = b.name
        return True
    if type(a) is not type(b):
        return False
    if isinstance(a, TCon):
        return a.name == b.name and len(a.args) == len(b.args) and all(
            types_unify(x, y, sigma) for x, y in zip(a.args, b.args))
    if isinstance(a, TTuple):
        return len(a.items) == len(b.items) and all(types_unify(x, y, sigma) for x, y in zip(a.items, b.items))
    if isinstance(a, TFun):
        return (len(a.params) == len(b.params)
                and all(types_unify(x, y, sigma) for x, y in zip(a.params, b.params))
                and types_unify(a.result, b.result, sigma))
    return a == b


def mapping_goal(user_fun, library_fun) -> _EqGoal:
    args = tuple(E.Var(p) for p in user_fun.param_names)
    goal = E.Prim("==", (E.Call(user_fun.name, args), E.Call(library_fun.name, args)))
    return _EqGoal(tuple(user_fun.params), (), goal)


def register_mapping(user_fun, library_const: str, mode: str, theory, budget: Budget | None = None):
    """Prove (or assume) ``user_fun(args) = library_const(args)`` and register it as a rewrite rule."""
    program = theory.program
    lib = program.lookup_orig(library_const, "base")
    if lib is None or lib not in program.funs:
        return MappingFailure(user_fun.name, library_const, f"unknown library constant {library_const}")
    lib_fun = program.funs[lib]
    if not types_unify(user_fun.type, lib_fun.type):
        return MappingFailure(user_fun.name, lib, "types do not unify")
    if user_fun.pre is not None:
        return MappingFailure(user_fun.name, lib, "functions with preconditions cannot be mapped")
    eq = mapping_goal(user_fun, lib_fun)
    trace = None
    if mode == "prove":
        result = prove(eq, theory, budget)
        if isinstance(result, Unknown):
            return MappingFailure(user_fun.name, lib, result.reason, list(result.residual))
        trace = result
        status = "proved"
    elif mode == "assume":
        status = "axiom"
    else:
        raise ValueError(f"unknown mapping mode {mode!r}")
    lhs, rhs = eq.goal.args
    rule = Rule(f"map:{user_fun.name}", frozenset(user_fun.param_names), lhs, rhs)
    theory.rules.mappings[user_fun.name] = rule
    theory.rules.status[rule.id] = status
    return MappingTheorem(user_fun.name, lib, status, trace)
