"""Call-by-value big-step evaluator used as the semantic oracle."""
from __future__ import annotations

from dataclasses import dataclass

from ..deepstack import deep_call
from . import expr as E

DEFAULT_FUEL = 10_000


@dataclass(frozen=True)
class CtorVal:
    name: str
    fields: tuple = ()

    def __str__(self):
        from ..surface.resolve import render_name
        if not self.fields:
            return render_name(self.name)
        return f"{render_name(self.name)}({', '.join(map(str, self.fields))})"


@dataclass(frozen=True)
class TupleVal:
    items: tuple

    def __str__(self):
        return "(" + ", ".join(map(str, self.items)) + ")"


@dataclass(frozen=True, eq=False)
class Closure:
    params: tuple
    body: object
    env: dict


@dataclass(frozen=True, eq=False)
class FunVal:
    name: str


class OutOfFuel(Exception):
    pass


class MatchFailure(Exception):
    def __init__(self, value):
        super().__init__(f"no clause matches {value}")
        self.value = value


class EvalError(Exception):
    """Raised for ill-typed runtime situations (comparing closures, etc.)."""


def match_pattern(p, v, env: dict) -> bool:
    if isinstance(p, E.Wild):
        return True
    if isinstance(p, E.PVar):
        env[p.name] = v
        return True
    if isinstance(p, E.PLit):
        return type(v) is type(p.value) and v == p.value
    if isinstance(p, E.PNotLits):
        return v not in p.values
    if isinstance(p, E.PCon):
        if not isinstance(v, CtorVal) or v.name != p.name:
            return False
        return all(match_pattern(a, f, env) for a, f in zip(p.args, v.fields))
    if isinstance(p, E.PTup):
        return all(match_pattern(a, f, env) for a, f in zip(p.items, v.items))
    raise TypeError(p)


def values_equal(a, b) -> bool:
    if isinstance(a, (Closure, FunVal)) or isinstance(b, (Closure, FunVal)):
        raise EvalError("equality on functions")
    return a == b


class Evaluator:
    """Evaluates function calls against a program.

    With ``equations`` (function name -> list of Equation), calls to those
    functions dispatch by first-match over the equations instead of running
    the original body.
    """

    def __init__(self, program, fuel: int = DEFAULT_FUEL, equations: dict | None = None):
        self.program = program
        self.fuel = fuel
        self.equations = equations or {}

    def call(self, name: str, args: list):
        self.fuel -= 1
        if self.fuel < 0:
            raise OutOfFuel()
        eqs = self.equations.get(name)
        if eqs is not None:
            for eq in eqs:
                env: dict = {}
                if all(match_pattern(p, a, env) for p, a in zip(eq.lhs, args)):
                    return self.eval(eq.rhs, env)
            raise MatchFailure(args[0] if len(args) == 1 else TupleVal(tuple(args)))
        f = self.program.funs[name]
        env = dict(zip(f.param_names, args))
        return self.eval(f.body, env)

    def apply(self, fn, args: list):
        if isinstance(fn, Closure):
            env = dict(fn.env)
            env.update(zip(fn.params, args))
            return self.eval(fn.body, env)
        if isinstance(fn, FunVal):
            return self.call(fn.name, args)
        raise EvalError(f"cannot apply {fn!r}")

    def eval(self, e, env: dict):
        if isinstance(e, E.Var):
            try:
                return env[e.name]
            except KeyError:
                raise EvalError(f"unbound variable {e.name}") from None
        if isinstance(e, (E.IntLit, E.BoolLit)):
            return e.value
        if isinstance(e, E.Ctor):
            return CtorVal(e.name, tuple(self.eval(a, env) for a in e.args))
        if isinstance(e, E.Call):
            return self.call(e.fun, [self.eval(a, env) for a in e.args])
        if isinstance(e, E.FunRef):
            return FunVal(e.name)
        if isinstance(e, E.Apply):
            fn = self.eval(e.fn, env)
            return self.apply(fn, [self.eval(a, env) for a in e.args])
        if isinstance(e, E.Lam):
            return Closure(e.params, e.body, dict(env))
        if isinstance(e, E.Tuple):
            return TupleVal(tuple(self.eval(a, env) for a in e.items))
        if isinstance(e, E.Proj):
            return self.eval(e.expr, env).items[e.index - 1]
        if isinstance(e, E.If):
            return self.eval(e.then if self.eval(e.cond, env) else e.else_, env)
        if isinstance(e, E.Let):
            inner = dict(env)
            inner[e.name] = self.eval(e.value, env)
            return self.eval(e.body, inner)
        if isinstance(e, E.Match):
            v = self.eval(e.scrut, env)
            for c in e.clauses:
                inner = dict(env)
                if match_pattern(c.pattern, v, inner):
                    return self.eval(c.body, inner)
            raise MatchFailure(v)
        if isinstance(e, E.Prim):
            return self.prim(e, env)
        raise EvalError(f"cannot evaluate {type(e).__name__}")

    def prim(self, e: E.Prim, env):
        op = e.op
        if op == "&&":
            return self.eval(e.args[0], env) and self.eval(e.args[1], env)
        if op == "||":
            return self.eval(e.args[0], env) or self.eval(e.args[1], env)
        if op == "==>":
            return (not self.eval(e.args[0], env)) or self.eval(e.args[1], env)
        vals = [self.eval(a, env) for a in e.args]
        if op == "+":
            return vals[0] + vals[1]
        if op == "-":
            return vals[0] - vals[1]
        if op == "*":
            return vals[0] * vals[1]
        if op == "neg":
            return -vals[0]
        if op == "!":
            return not vals[0]
        if op == "==":
            return values_equal(vals[0], vals[1])
        if op == "!=":
            return not values_equal(vals[0], vals[1])
        if op == "<":
            return vals[0] < vals[1]
        if op == "<=":
            return vals[0] <= vals[1]
        if op == ">":
            return vals[0] > vals[1]
        if op == ">=":
            return vals[0] >= vals[1]
        raise EvalError(f"unknown primitive {op}")


def evaluate(program, fun: str, args: list, fuel: int = DEFAULT_FUEL, equations: dict | None = None):
    """Evaluate ``fun(*args)``; raises OutOfFuel or MatchFailure."""
    return deep_call(Evaluator(program, fuel, equations).call, fun, list(args))


def eval_expr(program, e, env: dict, fuel: int = DEFAULT_FUEL, equations: dict | None = None):
    return deep_call(Evaluator(program, fuel, equations).eval, e, env)


def value_to_expr(v):
    if isinstance(v, bool):
        return E.BoolLit(v)
    if isinstance(v, int):
        return E.IntLit(v)
    if isinstance(v, CtorVal):
        return E.Ctor(v.name, tuple(value_to_expr(f) for f in v.fields))
    if isinstance(v, TupleVal):
        return E.Tuple(tuple(value_to_expr(f) for f in v.items))
    raise ValueError(f"no expression form for {v!r}")
