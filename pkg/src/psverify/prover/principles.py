"""Structural and functional induction principles."""
from __future__ import annotations

from dataclasses import dataclass

from ..core import expr as E
from ..core.subst import fresh_name, rename_pattern, substitute
from ..core.types import TCon, TFun, TTuple, is_datatype
from ..patcomp.patterns import field_types


class InductionError(Exception):
    pass


@dataclass(frozen=True)
class PrincipleCase:
    name: str
    patterns: tuple  # one pattern per principle parameter
    ihs: tuple  # ((guards, args), ...)


@dataclass(frozen=True)
class InductionPrinciple:
    name: str
    source: str  # "datatype" or "function"
    params: tuple  # ((name, Type), ...)
    cases: tuple


def datatype_principle(d) -> InductionPrinciple:
    ty = d.applied()
    cases = []
    for c in d.constructors:
        names = []
        for i, (fname, _) in enumerate(c.fields):
            base = fname if fname and fname.isidentifier() else f"a{i}"
            names.append(f"{base.split(chr(39))[0]}'0")
        names = _dedupe(names)
        pat = E.PCon(c.name, tuple(E.PVar(n) for n in names))
        ihs = tuple(((), (E.Var(n),)) for n, (_, t) in zip(names, c.fields)
                    if isinstance(t, TCon) and t.name == d.name)
        cases.append(PrincipleCase(c.name, (pat,), ihs))
    return InductionPrinciple(f"dt:{d.name}", "datatype", (("x", ty),), tuple(cases))


def _dedupe(names):
    out = []
    for n in names:
        while n in out:
            base, _, k = n.rpartition("'")
            n = f"{base}'{int(k) + 1}"
        out.append(n)
    return out


def _self_calls(e, fun: str, guards: tuple, out: list, bound=frozenset()):
    if isinstance(e, E.Call) and e.fun == fun and not (E.free_vars(e) & bound):
        out.append((guards, e.args))
    if isinstance(e, E.If):
        _self_calls(e.cond, fun, guards, out, bound)
        _self_calls(e.then, fun, guards + (e.cond,), out, bound)
        _self_calls(e.else_, fun, guards + (E.Prim("!", (e.cond,)),), out, bound)
        return
    for k, b in zip(E.children(e), E.binders_of(e)):
        _self_calls(k, fun, guards, out, bound | b)


def function_principle(fun, equations) -> InductionPrinciple | None:
    """Functional induction from split equations; None when the equations do not qualify."""
    cases = []
    for eq in equations:
        if eq.order_sensitive:
            return None
        if any(_has_literal(p) for p in eq.lhs):
            return None
        calls: list = []
        _self_calls(eq.rhs, fun.name, (), calls)
        cases.append(PrincipleCase(f"eq{eq.index}", tuple(eq.lhs), tuple(calls)))
    return InductionPrinciple(f"fun:{fun.name}", "function", tuple(fun.params), tuple(cases))


def _has_literal(p) -> bool:
    if isinstance(p, (E.PLit, E.PNotLits)):
        return True
    if isinstance(p, (E.PCon, E.PTup)):
        return any(_has_literal(a) for a in (p.args if isinstance(p, E.PCon) else p.items))
    return False


def compatible(param_ty, var_ty) -> bool:
    if var_ty is None:
        return False
    if isinstance(param_ty, TCon) and isinstance(var_ty, TCon):
        return param_ty.name == var_ty.name
    if isinstance(param_ty, TFun):
        return isinstance(var_ty, TFun) and len(var_ty.params) == len(param_ty.params)
    if isinstance(param_ty, TTuple):
        return isinstance(var_ty, TTuple) and len(var_ty.items) == len(param_ty.items)
    return type(param_ty) is type(var_ty) and (not isinstance(param_ty, TCon) or param_ty == var_ty)


def choose_vars(principle: InductionPrinciple, seq) -> tuple:
    """Fixed variables for a rule principle: first compatible variable per parameter, in order."""
    chosen = []
    for _, t in principle.params:
        for n, vt in seq.fixed:
            if n not in chosen and compatible(t, vt):
                chosen.append(n)
                break
        else:
            raise InductionError(f"no variable fits parameter of type {t} in {principle.name}")
    return tuple(chosen)


def instantiate(principle: InductionPrinciple, vars: tuple, seq, program) -> list:
    """Case subgoals of induction on ``vars``.

    Each induction hypothesis is stated both generalized over the other fixed variables
    and at their current values.
    """
    from .sequent import Sequent
    types = seq.types()
    if len(vars) != len(principle.params) or len(set(vars)) != len(vars):
        raise InductionError("induction variables do not fit the principle")
    for v, (_, pt) in zip(vars, principle.params):
        if v not in types:
            raise InductionError(f"{v} is not a fixed variable")
        if principle.source == "datatype" and not is_datatype(types[v]):
            raise InductionError(f"{v} is not of a datatype")
        if not compatible(pt, types[v]):
            raise InductionError(f"{v} has the wrong type for {principle.name}")
    others = tuple((n, t) for n, t in seq.fixed if n not in vars)
    motive = E.implies(seq.hyps, seq.goal)
    taken = seq.names()
    out = []
    for case in principle.cases:
        binders = []
        for p in case.patterns:
            binders += E.pattern_var_list(p)
        ren = {}
        for b in binders:
            n = fresh_name(b, taken)
            taken.add(n)
            ren[b] = n
        pats = tuple(rename_pattern(p, ren) for p in case.patterns)
        renv = {b: E.Var(n) for b, n in ren.items()}
        new_fixed = list(others)
        for p, v in zip(pats, vars):
            new_fixed += _binder_types(p, types[v], program)
        sigma = {v: E.pattern_to_expr(p) for v, p in zip(vars, pats)}
        ihs = []
        for guards, args in case.ihs:
            inst = {v: substitute(a, renv) for v, a in zip(vars, args)}
            body = E.implies([substitute(g, renv) for g in guards], substitute(motive, inst))
            gen = tuple((n, t) for n, t in others if n in E.free_vars(body))
            if gen:
                ihs.append(E.ForAll(gen, body))
            # the instance at the current values of the generalized variables, usable without matching
            ihs.append(body)
        hyps = tuple(substitute(h, sigma) for h in seq.hyps) + tuple(ihs)
        out.append(Sequent(tuple(new_fixed), hyps, substitute(seq.goal, sigma)))
    return out


def _binder_types(p, ty, program) -> list:
    if isinstance(p, E.PVar):
        return [(p.name, ty)]
    if isinstance(p, (E.PCon, E.PTup)):
        out = []
        subs = p.args if isinstance(p, E.PCon) else p.items
        for a, t in zip(subs, field_types(program, p, ty)):
            out += _binder_types(a, t, program)
        return out
    return []
