"""Oriented (conditional) rewrite rules and first-order matching."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import expr as E
from ..core.subst import substitute


@dataclass(frozen=True)
class Rule:
    id: str
    vars: frozenset
    lhs: object
    rhs: object
    conds: tuple = ()
    guards: tuple = ()  # earlier equation lhs tuples that must be ruled out (order-sensitive equations)


def match(pat, term, vars: frozenset, sigma: dict) -> bool:
    """Extend ``sigma`` so that ``pat`` instantiated equals ``term``."""
    if isinstance(pat, E.Var) and pat.name in vars:
        bound = sigma.get(pat.name)
        if bound is None:
            sigma[pat.name] = term
            return True
        return bound == term
    if type(pat) is not type(term):
        return False
    if isinstance(pat, E.Call):
        if pat.fun != term.fun or len(pat.args) != len(term.args):
            return False
        return all(match(p, t, vars, sigma) for p, t in zip(pat.args, term.args))
    if isinstance(pat, E.Ctor):
        if pat.name != term.name or len(pat.args) != len(term.args):
            return False
        return all(match(p, t, vars, sigma) for p, t in zip(pat.args, term.args))
    if isinstance(pat, E.Prim):
        if pat.op != term.op:
            return False
        return all(match(p, t, vars, sigma) for p, t in zip(pat.args, term.args))
    if isinstance(pat, E.Tuple):
        if len(pat.items) != len(term.items):
            return False
        return all(match(p, t, vars, sigma) for p, t in zip(pat.items, term.items))
    if isinstance(pat, (E.Apply, E.Proj)):
        kp, kt = E.children(pat), E.children(term)
        if len(kp) != len(kt) or (isinstance(pat, E.Proj) and pat.index != term.index):
            return False
        return all(match(p, t, vars, sigma) for p, t in zip(kp, kt))
    if isinstance(pat, E.Lam) and E.free_vars(pat) & vars:
        return _match_lam(pat, term, vars, sigma)
    if E.free_vars(pat) & vars:
        return False  # other binders under pattern variables are not matched
    return pat == term


def _match_lam(pat, term, vars, sigma) -> bool:
    if len(pat.params) != len(term.params) or set(pat.params) & vars:
        return False
    body = term.body
    if pat.params != term.params:
        if set(pat.params) & E.free_vars(term):
            return False
        body = substitute(body, {t: E.Var(p) for t, p in zip(term.params, pat.params)})
    trial = dict(sigma)
    if not match(pat.body, body, vars, trial):
        return False
    bound = set(pat.params)
    if any(E.free_vars(v) & bound for k, v in trial.items() if k not in sigma):
        return False  # an instantiation would capture a lambda parameter
    sigma.update(trial)
    return True


def definitely_differs(pattern, term) -> bool:
    """True when no instance of ``term`` can match ``pattern``."""
    if isinstance(pattern, (E.Wild, E.PVar)):
        return False
    if isinstance(pattern, E.PCon):
        if isinstance(term, E.Ctor):
            if term.name != pattern.name:
                return True
            return any(definitely_differs(p, t) for p, t in zip(pattern.args, term.args))
        return False
    if isinstance(pattern, E.PTup) and isinstance(term, E.Tuple):
        return any(definitely_differs(p, t) for p, t in zip(pattern.items, term.items))
    if isinstance(pattern, E.PLit):
        if isinstance(term, (E.IntLit, E.BoolLit)):
            return term.value != pattern.value or type(term.value) is not type(pattern.value)
        return False
    if isinstance(pattern, E.PNotLits):
        return isinstance(term, E.IntLit) and term.value in pattern.values
    return False


def instantiate(rule: Rule, term):
    """(rhs, conditions) when ``rule`` applies at the root of ``term``, else None."""
    sigma: dict = {}
    if not match(rule.lhs, term, rule.vars, sigma):
        return None
    if rule.guards:
        args = term.args
        for g in rule.guards:
            if not any(definitely_differs(p, a) for p, a in zip(g, args)):
                return None
    for v in rule.vars:
        sigma.setdefault(v, E.Var(v))
    rhs = substitute(rule.rhs, sigma)
    conds = tuple(substitute(c, sigma) for c in rule.conds)
    return rhs, conds


def split_formula(body):
    """Split ``h1 ==> ... ==> c`` into ([h1, ...], c)."""
    hyps = []
    while isinstance(body, E.Prim) and body.op == "==>":
        hyps.append(body.args[0])
        body = body.args[1]
    return hyps, body


def _var_name(e):
    return e.name if isinstance(e, E.Var) else None


def orient(rule_id: str, vars: frozenset, conds, concl, allow_var_lhs: bool) -> Rule | None:
    """Turn a conclusion into a rewrite rule; ``None`` when it carries no usable information."""
    conds = tuple(conds)
    if isinstance(concl, E.Prim) and concl.op == "==":
        l, r = concl.args
        if l == r or isinstance(l, E.BoolLit) or isinstance(r, E.BoolLit):
            return Rule(rule_id, vars, concl, E.TRUE, conds)

        def bad(a, b):
            if isinstance(a, E.Var) and (a.name in vars or not allow_var_lhs):
                return True
            return _occurs(a, b)

        if isinstance(l, E.Var) and isinstance(r, E.Var) and not bad(l, r) and not bad(r, l):
            # variable-to-variable: rewrite the larger name to the smaller one
            return Rule(rule_id, vars, max(l, r, key=lambda v: v.name), min(l, r, key=lambda v: v.name), conds)
        if _variant(l, r, vars):
            return Rule(rule_id, vars, concl, E.TRUE, conds)  # permutative: would not terminate
        if not bad(l, r):
            return Rule(rule_id, vars, l, r, conds)
        if not bad(r, l):
            return Rule(rule_id, vars, r, l, conds)
        return Rule(rule_id, vars, concl, E.TRUE, conds)
    if isinstance(concl, E.Prim) and concl.op == "!":
        inner = concl.args[0]
        if isinstance(inner, E.Var) and inner.name in vars:
            return None
        return Rule(rule_id, vars, inner, E.FALSE, conds)
    if isinstance(concl, E.Prim) and concl.op == "!=":
        return Rule(rule_id, vars, E.Prim("==", concl.args), E.FALSE, conds)
    if isinstance(concl, E.BoolLit) or (isinstance(concl, E.Var) and concl.name in vars):
        return None
    return Rule(rule_id, vars, concl, E.TRUE, conds)


def _variant(l, r, vars) -> bool:
    """True when ``r`` is ``l`` up to a renaming of rule variables."""
    sigma: dict = {}
    if not match(l, r, vars, sigma):
        return False
    imgs = list(sigma.values())
    return all(isinstance(x, E.Var) and x.name in vars for x in imgs) and len(set(imgs)) == len(imgs)


def _occurs(small, big) -> bool:
    if small == big:
        return True
    return any(_occurs(small, k) for k in E.children(big))


def hyp_rule(h, index: int) -> Rule | None:
    """Rewrite rule read off hypothesis ``index``; quantified hypotheses give conditional rules."""
    rid = f"hyp:{index}"
    if isinstance(h, E.ForAll):
        vars = frozenset(n for n, _ in h.vars)
        conds, concl = split_formula(h.body)
        # variables not fixed by matching the lhs are instantiated by themselves
        return orient(rid, vars, conds, concl, allow_var_lhs=False)
    conds, concl = split_formula(h)
    return orient(rid, frozenset(), conds, concl, allow_var_lhs=True)


@dataclass
class RuleSet:
    """Ordered rule collection: mapping theorems, function equations, then lemmas."""
    mappings: dict = field(default_factory=dict)
    equations: dict = field(default_factory=dict)  # function -> [Rule]
    lemmas: dict = field(default_factory=dict)
    status: dict = field(default_factory=dict)  # rule id -> "proved" | "axiom" | "definition"
    statements: dict = field(default_factory=dict)  # lemma name -> (vars, statement)

    def get(self, rid: str) -> Rule | None:
        if rid.startswith("eq:"):
            fun, _, idx = rid[3:].rpartition("#")
            eqs = self.equations.get(fun)
            if eqs is None or not idx.isdigit() or int(idx) >= len(eqs):
                return None
            return eqs[int(idx)]
        if rid.startswith("lemma:"):
            return self.lemmas.get(rid[6:])
        if rid.startswith("map:"):
            return self.mappings.get(rid[4:])
        return None

    def candidates(self, term):
        """Rules whose lhs head could match ``term``, in priority order."""
        if isinstance(term, E.Call):
            m = self.mappings.get(term.fun)
            if m is not None:
                yield m
            yield from self.equations.get(term.fun, ())
        yield from self.lemmas.values()

    def copy(self) -> "RuleSet":
        return RuleSet(dict(self.mappings), dict(self.equations), dict(self.lemmas), dict(self.status), dict(self.statements))


def equation_rules(fun_name: str, equations) -> list[Rule]:
    rules = []
    for eq in equations:
        lhs = E.Call(fun_name, tuple(E.pattern_to_expr(p) for p in eq.lhs))
        guards = tuple(e.lhs for e in equations[:eq.index]) if eq.order_sensitive else ()
        rules.append(Rule(f"eq:{fun_name}#{eq.index}", frozenset(eq.lhs_vars()), lhs, eq.rhs, (), guards))
    return rules


def lemma_rule(name: str, fun) -> Rule | None:
    """Rule from a proved ``.holds`` function: ``pre ==> body``."""
    vars = frozenset(fun.param_names)
    conds = (fun.pre,) if fun.pre is not None else ()
    r = orient(f"lemma:{name}", vars, conds, fun.body, allow_var_lhs=False)
    if r is None:
        return None
    if isinstance(r.lhs, E.Var):
        return None
    if (E.free_vars(r.rhs) | set().union(*[E.free_vars(c) for c in r.conds])) & vars - E.free_vars(r.lhs):
        return None
    return r
