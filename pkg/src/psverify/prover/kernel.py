"""Primitive inference steps. Both proof search and trace checking go through :func:`apply`."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import expr as E
from ..core.subst import fresh_name, substitute
from ..core.types import is_datatype
from . import linarith as LA
from .arith import NatTheory, constant, int_typed, is_arith, nat_normalize, normalize_arith, poly, term_type, _add
from .principles import InductionError, instantiate
from .rules import hyp_rule, instantiate as inst_rule, match
from .sequent import Sequent, Step, digest


class KernelError(Exception):
    pass


@dataclass
class Theory:
    program: object
    rules: object  # RuleSet
    principles: dict = field(default_factory=dict)
    aliases: dict = field(default_factory=dict)  # user-visible rule name -> principle name
    nat: NatTheory | None = None

    def principle(self, name: str):
        return self.principles.get(self.aliases.get(name, name))


# ---- built-in simplifications

def _match_value(p, t):
    """sigma, False (definitely no match) or None (undecided)."""
    if isinstance(p, E.Wild):
        return {}
    if isinstance(p, E.PVar):
        return {p.name: t}
    if isinstance(p, E.PCon):
        if not isinstance(t, E.Ctor):
            return None
        if t.name != p.name:
            return False
        return _match_all(p.args, t.args)
    if isinstance(p, E.PTup):
        if not isinstance(t, E.Tuple):
            return None
        return _match_all(p.items, t.items)
    if isinstance(p, E.PLit):
        if isinstance(t, (E.IntLit, E.BoolLit)):
            return {} if (t.value == p.value and type(t.value) is type(p.value)) else False
        return None
    if isinstance(p, E.PNotLits):
        if isinstance(t, E.IntLit):
            return False if t.value in p.values else {}
        return None
    return None


def _match_all(ps, ts):
    sigma: dict = {}
    undecided = False
    for p, t in zip(ps, ts):
        r = _match_value(p, t)
        if r is False:
            return False
        if r is None:
            undecided = True
        else:
            sigma.update(r)
    return None if undecided else sigma


def _bool(e):
    a = e.args
    op = e.op
    if op == "!":
        x = a[0]
        if isinstance(x, E.BoolLit):
            return E.BoolLit(not x.value)
        if isinstance(x, E.Prim) and x.op == "!":
            return x.args[0]
        return None
    if op not in ("&&", "||", "==>", "=="):
        return None
    x, y = a
    if op == "&&":
        if x == E.TRUE:
            return y
        if y == E.TRUE or x == E.FALSE:
            return x
        if y == E.FALSE:
            return E.FALSE
    elif op == "||":
        if x == E.FALSE:
            return y
        if y == E.FALSE or x == E.TRUE:
            return x
        if y == E.TRUE:
            return E.TRUE
    elif op == "==>":
        if x == E.TRUE:
            return y
        if x == E.FALSE or y == E.TRUE:
            return E.TRUE
    elif op == "==":
        if y == E.TRUE:
            return x
        if x == E.TRUE:
            return y
        if y == E.FALSE and not isinstance(x, E.BoolLit):
            return E.Prim("!", (x,))
        if x == E.FALSE and not isinstance(y, E.BoolLit):
            return E.Prim("!", (y,))
    return None


def _ctor_eq(e):
    if not (isinstance(e, E.Prim) and e.op == "=="):
        return None
    x, y = e.args
    if isinstance(x, E.Ctor) and isinstance(y, E.Ctor):
        if x.name != y.name or len(x.args) != len(y.args):
            return E.FALSE
        return E.conj([E.Prim("==", (p, q)) for p, q in zip(x.args, y.args)])
    if isinstance(x, E.Tuple) and isinstance(y, E.Tuple) and len(x.items) == len(y.items):
        return E.conj([E.Prim("==", (p, q)) for p, q in zip(x.items, y.items)])
    if isinstance(x, E.BoolLit) and isinstance(y, E.BoolLit):
        return E.BoolLit(x.value == y.value)
    return None


def _arith(e, seq, theory):
    if is_arith(e):
        r = normalize_arith(e)
        return None if r == e else r
    if isinstance(e, E.Prim) and e.op in ("<", "<=", ">", ">=", "==", "!="):
        a, b = e.args
        if e.op in ("==", "!="):
            types = seq.types()
            if not (int_typed(a, types, theory.program) or int_typed(b, types, theory.program)):
                return None
        c = constant(_add(poly(a), poly(b), -1))
        if c is None:
            return None
        return E.BoolLit({"<": c < 0, "<=": c <= 0, ">": c > 0, ">=": c >= 0, "==": c == 0, "!=": c != 0}[e.op])
    return None


def builtin(name: str, e, seq, theory):
    """Result of built-in rule ``name`` at the root of ``e``, or None if it does not apply."""
    if name == "beta":
        if isinstance(e, E.Apply) and isinstance(e.fn, E.Lam) and len(e.fn.params) == len(e.args):
            return substitute(e.fn.body, dict(zip(e.fn.params, e.args)))
    elif name == "funref":
        if isinstance(e, E.Apply) and isinstance(e.fn, E.FunRef):
            return E.Call(e.fn.name, e.args)
    elif name == "proj":
        if isinstance(e, E.Proj) and isinstance(e.expr, E.Tuple) and 1 <= e.index <= len(e.expr.items):
            return e.expr.items[e.index - 1]
    elif name == "if":
        if isinstance(e, E.If):
            if isinstance(e.cond, E.BoolLit):
                return e.then if e.cond.value else e.else_
            if e.then == e.else_:
                return e.then
    elif name == "match":
        if isinstance(e, E.Match):
            for c in e.clauses:
                r = _match_value(c.pattern, e.scrut)
                if r is None:
                    return None
                if r is not False:
                    return substitute(c.body, r)
    elif name == "let":
        if isinstance(e, E.Let):
            return substitute(e.body, {e.name: e.value})
    elif name == "arith":
        return _arith(e, seq, theory)
    elif name == "eq_refl":
        if isinstance(e, E.Prim) and e.op in ("==", "!=") and e.args[0] == e.args[1]:
            return E.TRUE if e.op == "==" else E.FALSE
    elif name == "ctor_eq":
        return _ctor_eq(e)
    elif name == "bool":
        if isinstance(e, E.Prim):
            return _bool(e)
    elif name == "neq":
        if isinstance(e, E.Prim) and e.op == "!=":
            return E.Prim("!", (E.Prim("==", e.args),))
    elif name == "nat_ac":
        nat = theory.nat
        if nat is not None and isinstance(e, E.Call) and e.fun == nat.plus:
            r = nat_normalize(e, nat)
            return None if r == e else r
    else:
        raise KernelError(f"unknown built-in rule {name}")
    return None


BUILTINS = ("beta", "funref", "proj", "if", "match", "let", "neq", "eq_refl", "ctor_eq", "bool", "arith", "nat_ac")


def rule_for(ref: str, seq: Sequent, theory: Theory):
    if ref.startswith("hyp:"):
        i = int(ref[4:])
        if not 0 <= i < len(seq.hyps):
            raise KernelError(f"no hypothesis {i}")
        return hyp_rule(seq.hyps[i], i)
    return theory.rules.get(ref)


def rewrite_term(ref: str, term, seq: Sequent, theory: Theory):
    """(new term, side conditions) or None."""
    if ref.startswith("builtin:"):
        r = builtin(ref[8:], term, seq, theory)
        return None if r is None else (r, ())
    rule = rule_for(ref, seq, theory)
    if rule is None:
        return None
    return inst_rule(rule, term)


# ---- steps

def _target(seq, where):
    if where == "goal":
        return seq.goal
    if isinstance(where, int) and 0 <= where < len(seq.hyps):
        return seq.hyps[where]
    raise KernelError(f"bad rewrite target {where!r}")


def _replace_target(seq, where, new):
    if where == "goal":
        return seq.with_goal(new)
    hyps = list(seq.hyps)
    hyps[where] = new
    return seq.with_hyps(hyps)


def _bound_on_path(e, path) -> set:
    out: set = set()
    for i in path:
        binders = E.binders_of(e)
        if i < len(binders):
            out |= binders[i]
        e = E.children(e)[i]
    return out


def _occurs_as_cond(c, e) -> bool:
    if isinstance(e, E.If) and e.cond == c:
        return True
    if isinstance(e, E.Lam):
        return False
    return any(_occurs_as_cond(c, k) for k in E.children(e))


def substitutable(h, seq) -> tuple | None:
    """(var, term) when ``h`` is ``x == t`` for a fixed x not free in t."""
    if not (isinstance(h, E.Prim) and h.op == "=="):
        return None
    fixed = seq.types()
    for x, t in (h.args, h.args[::-1]):
        if isinstance(x, E.Var) and x.name in fixed and x.name not in E.free_vars(t):
            if isinstance(t, E.Var) and t.name in fixed and t.name > x.name:
                continue  # eliminate the larger name
            return x.name, t
    return None


def case_names(seq, theory, datatype: str) -> list:
    d = theory.program.dt[datatype]
    taken = seq.names()
    out = []
    for c in d.constructors:
        names = []
        for i, (fname, _) in enumerate(c.fields):
            base = fname.split("'")[0] if fname else f"a{i}"
            n = fresh_name(f"{base}'0", taken)
            taken.add(n)
            names.append(n)
        out.append((c, names))
    return out


def apply(seq: Sequent, step: Step, theory: Theory) -> list:
    """Subgoals produced by ``step``; the first one is the main continuation."""
    try:
        return _apply(seq, step, theory)
    except KernelError:
        raise
    except (ValueError, TypeError, IndexError, KeyError, AttributeError) as e:
        raise KernelError(f"malformed {step.rule} step: {type(e).__name__}") from None


def _apply(seq: Sequent, step: Step, theory: Theory) -> list:
    r = step.rule
    a = step.args
    if r == "rewrite":
        ref, where, path = a
        target = _target(seq, where)
        if ref == f"hyp:{where}":
            raise KernelError("a hypothesis cannot rewrite itself")
        try:
            sub = E.subterm(target, path)
        except (IndexError, TypeError):
            raise KernelError(f"bad path {path}") from None
        if ref.startswith("hyp:") and ref[4:].isdigit() and int(ref[4:]) < len(seq.hyps) \
                and _bound_on_path(target, path) & E.free_vars(seq.hyps[int(ref[4:])]):
            raise KernelError("hypothesis used under a binder capturing its variables")
        res = rewrite_term(ref, sub, seq, theory)
        if res is None:
            raise KernelError(f"rule {ref} does not apply at {path}")
        new, conds = res
        main = _replace_target(seq, where, E.replace_at(target, path, new))
        if step.check and step.check != digest(new):
            raise KernelError(f"rule {ref} produced an unexpected result")
        return [main] + [seq.with_goal(c) for c in conds]
    if r == "intro":
        g = seq.goal
        if not (isinstance(g, E.Prim) and g.op == "==>"):
            raise KernelError("goal is not an implication")
        return [Sequent(seq.fixed, seq.hyps + (g.args[0],), g.args[1])]
    if r == "forall_intro":
        g = seq.goal
        if not isinstance(g, E.ForAll):
            raise KernelError("goal is not quantified")
        taken = seq.names()
        ren = {}
        fixed = list(seq.fixed)
        for n, t in g.vars:
            m = n if n not in {x for x, _ in seq.fixed} else fresh_name(n, taken)
            taken.add(m)
            ren[n] = E.Var(m)
            fixed.append((m, t))
        return [Sequent(tuple(fixed), seq.hyps, substitute(g.body, ren))]
    if r == "conj_intro":
        g = seq.goal
        if not (isinstance(g, E.Prim) and g.op == "&&"):
            raise KernelError("goal is not a conjunction")
        return [seq.with_goal(g.args[0]), seq.with_goal(g.args[1])]
    if r == "hyp_conj":
        i = a[0]
        h = _target(seq, i)
        if not (isinstance(h, E.Prim) and h.op == "&&"):
            raise KernelError("hypothesis is not a conjunction")
        return [seq.with_hyps(seq.hyps[:i] + h.args + seq.hyps[i + 1:])]
    if r == "hyp_drop":
        i = a[0]
        _target(seq, i)
        return [seq.with_hyps(seq.hyps[:i] + seq.hyps[i + 1:])]
    if r == "subst":
        i = a[0]
        s = substitutable(_target(seq, i), seq)
        if s is None:
            raise KernelError("hypothesis is not a variable definition")
        x, t = s
        m = {x: t}
        hyps = tuple(substitute(h, m) for j, h in enumerate(seq.hyps) if j != i)
        fixed = tuple((n, ty) for n, ty in seq.fixed if n != x)
        return [Sequent(fixed, hyps, substitute(seq.goal, m))]
    if r == "close_true":
        if seq.goal != E.TRUE:
            raise KernelError("goal is not true")
        return []
    if r == "close_hyp":
        if _target(seq, a[0]) != seq.goal:
            raise KernelError("hypothesis differs from goal")
        return []
    if r == "close_false":
        if _target(seq, a[0]) != E.FALSE:
            raise KernelError("hypothesis is not false")
        return []
    if r == "close_contra":
        i, j = a
        if _target(seq, j) != E.Prim("!", (_target(seq, i),)):
            raise KernelError("hypotheses are not contradictory")
        return []
    if r == "linarith":
        if not LA.check(seq, tuple(a[0]), theory.program):
            raise KernelError("arithmetic certificate rejected")
        return []
    if r == "case_bool":
        c = a[0]
        if not E.free_vars(c) <= set(seq.types()):
            raise KernelError("case term mentions unbound variables")
        if not (_occurs_as_cond(c, seq.goal) or any(_occurs_as_cond(c, h) for h in seq.hyps)):
            raise KernelError("case term is not a condition of the goal")
        return [seq.with_hyps(seq.hyps + (c,)), seq.with_hyps(seq.hyps + (E.Prim("!", (c,)),))]
    if r == "case_data":
        t = a[0]
        if not E.free_vars(t) <= set(seq.types()):
            raise KernelError("case term mentions unbound variables")
        ty = term_type(t, seq.types(), theory.program)
        if not is_datatype(ty) or ty.name not in theory.program.dt:
            raise KernelError("case term is not of a datatype")
        out = []
        for c, names in case_names(seq, theory, ty.name):
            ftys = theory.program.ctor_field_types(c.name, ty)
            fixed = seq.fixed + tuple(zip(names, ftys))
            eq = E.Prim("==", (t, E.Ctor(c.name, tuple(E.Var(n) for n in names))))
            out.append(Sequent(fixed, seq.hyps + (eq,), seq.goal))
        return out
    if r == "induct":
        name, vars = a
        p = theory.principle(name)
        if p is None:
            raise KernelError(f"unknown induction principle {name}")
        try:
            return instantiate(p, tuple(vars), seq, theory.program)
        except InductionError as e:
            raise KernelError(str(e)) from None
    raise KernelError(f"unknown step {r}")


def nat_theory(program, rules) -> NatTheory | None:
    """Peano addition facts the normalizer relies on, if all are available as proved lemmas."""
    nat = program.lookup_orig("Nat", "datatype")
    plus = program.lookup_orig("plus", "base") or program.lookup_orig("plus")
    if nat is None or plus is None or nat not in program.dt or plus not in program.funs:
        return None
    d = program.dt[nat]
    zero = next((c.name for c in d.constructors if not c.fields), None)
    succ = next((c.name for c in d.constructors if len(c.fields) == 1), None)
    if zero is None or succ is None or len(d.constructors) != 2:
        return None
    a, b, c = E.Var("?a"), E.Var("?b"), E.Var("?c")
    P = lambda x, y: E.Call(plus, (x, y))
    Z, S = E.Ctor(zero, ()), (lambda x: E.Ctor(succ, (x,)))
    needed = [
        E.Prim("==", (P(a, Z), a)),
        E.Prim("==", (P(a, S(b)), S(P(a, b)))),
        E.Prim("==", (P(a, b), P(b, a))),
        E.Prim("==", (P(P(a, b), c), P(a, P(b, c)))),
    ]
    stmts = [s for name, s in rules.statements.items() if rules.status.get(f"lemma:{name}") == "proved"]
    for n in needed:
        if not any(_same_shape(n, s) for s in stmts):
            return None
    return NatTheory(nat, zero, succ, plus)


def _same_shape(template, stmt) -> bool:
    vars, body = stmt
    tv = frozenset(v for v in ("?a", "?b", "?c"))
    sigma: dict = {}
    if not match(template, body, tv, sigma):
        return False
    images = list(sigma.values())
    return all(isinstance(x, E.Var) and x.name in vars for x in images) and len(set(images)) == len(images)
