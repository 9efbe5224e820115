"""Proof search: simp, linarith, auto, clarsimp, induction and the default strategy.

Search never manipulates proof states directly; every state change is a kernel
step recorded in the proof tree.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..core import expr as E
from ..core.types import is_datatype
from . import linarith as LA
from .arith import term_type
from .checker import check_trace
from .kernel import BUILTINS, KernelError, apply, builtin, substitutable
from .principles import InductionError, choose_vars
from .rules import hyp_rule, instantiate as inst_rule
from .sequent import ProofNode, Proved, Sequent, Step, Unknown, digest

DEFAULT_TIMEOUT_MS = 5000
DEFAULT_MAX_STEPS = 20000
DEFAULT_INDUCTION_DEPTH = 2
MAX_SIDE_DEPTH = 2
MAX_SPLIT_DEPTH = 8
MAX_SIMP_ROUNDS = 50


class BudgetExhausted(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass
class Budget:
    max_steps: int = DEFAULT_MAX_STEPS
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS
    cancel: object = None  # anything with is_set()
    induction_depth: int = DEFAULT_INDUCTION_DEPTH
    steps: int = 0
    deadline: float | None = None

    def start(self) -> "Budget":
        self.steps = 0
        self.deadline = None if self.timeout_ms is None else time.monotonic() + self.timeout_ms / 1000
        return self

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.max_steps:
            raise BudgetExhausted("timeout")
        if self.steps % 64 == 0:
            if self.cancel is not None and self.cancel.is_set():
                raise BudgetExhausted("cancelled")
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise BudgetExhausted("timeout")


@dataclass
class Goal:
    seq: Sequent
    node: ProofNode
    theory: object

    def step(self, st: Step, side: tuple = ()) -> list:
        subs = apply(self.seq, st, self.theory)
        self.node.steps.append(st)
        if not subs:
            return []
        if len(subs) == 1:
            self.seq = subs[0]
            return [self]
        if side:
            assert len(side) == len(subs) - 1
            main = ProofNode()
            self.node.children = [main] + list(side)
            return [Goal(subs[0], main, self.theory)]
        kids = [ProofNode() for _ in subs]
        self.node.children = kids
        return [Goal(s, k, self.theory) for s, k in zip(subs, kids)]


@dataclass
class Search:
    theory: object
    budget: Budget
    side_failures: dict = field(default_factory=dict)

    # ---- rewriting

    def normalize(self, seq: Sequent, term, use_hyps: bool, allow_conds: bool, depth: int):
        """Normal form of ``term`` and the rewrites leading to it: [(ref, path, new, side_nodes)]."""
        hrules = []
        if use_hyps:
            for i, h in enumerate(seq.hyps):
                r = hyp_rule(h, i)
                if r is not None:
                    hrules.append(r)
        out: list = []
        res = self._norm(term, (), out, seq, hrules, allow_conds, depth)
        return res, out

    def _norm(self, t, path, out, seq, hrules, allow_conds, depth):
        while True:
            self.budget.tick()
            t = self._norm_children(t, path, out, seq, hrules, allow_conds, depth)
            r = self._root(t, path, out, seq, hrules, allow_conds, depth)
            if r is None:
                return t
            t = r

    def _norm_children(self, t, path, out, seq, hrules, allow_conds, depth):
        kids = E.children(t)
        if not kids or isinstance(t, (E.Lam, E.Let)):
            return t
        if isinstance(t, E.ForAll):
            bound = {n for n, _ in t.vars}
            hrules = [r for r in hrules if not (_hyp_free(seq, r) & bound)]
        limit = 1 if isinstance(t, (E.If, E.Match)) else len(kids)
        new = list(kids)
        changed = False
        for i in range(limit):
            k = self._norm(kids[i], path + (i,), out, seq, hrules, allow_conds, depth)
            if k is not kids[i] and k != kids[i]:
                new[i] = k
                changed = True
        return E.with_children(t, tuple(new)) if changed else t

    def _root(self, t, path, out, seq, hrules, allow_conds, depth):
        for name in BUILTINS:
            r = builtin(name, t, seq, self.theory)
            if r is not None:
                out.append((f"builtin:{name}", path, r, ()))
                return r
        for rule in hrules:
            r = self._try(rule, t, path, out, seq, allow_conds, depth)
            if r is not None:
                return r
        for rule in self.theory.rules.candidates(t):
            r = self._try(rule, t, path, out, seq, allow_conds, depth)
            if r is not None:
                return r
        return None

    def _try(self, rule, t, path, out, seq, allow_conds, depth):
        inst = inst_rule(rule, t)
        if inst is None:
            return None
        rhs, conds = inst
        side = []
        if conds:
            if not allow_conds or depth >= MAX_SIDE_DEPTH:
                return None
            for c in conds:
                node = self.side_proof(seq.with_goal(c), depth + 1)
                if node is None:
                    return None
                side.append(node)
        out.append((rule.id, path, rhs, tuple(side)))
        return rhs

    def side_proof(self, seq: Sequent, depth: int):
        key = (seq, depth)
        if key in self.side_failures:
            return None
        g = Goal(seq, ProofNode(), self.theory)
        opens = self.simp(g, depth=depth)
        if opens:
            opens = self.linarith(opens[0])
        if opens:
            self.side_failures[key] = True
            return None
        return g.node

    def replay(self, goal: Goal, where, rewrites) -> Goal:
        for ref, path, new, side in rewrites:
            gs = goal.step(Step("rewrite", (ref, where, path), digest(new)), side)
            goal = gs[0]
        return goal

    # ---- simp

    def simp(self, goal: Goal, use_hyps: bool = True, touch_goal: bool = True, depth: int = 0) -> list:
        """Simplify hypotheses and goal; returns [] when closed, else the single residual goal."""
        for _ in range(MAX_SIMP_ROUNDS):
            progressed = False
            seq = goal.seq
            # eliminate variable definitions
            for i, h in enumerate(seq.hyps):
                if substitutable(h, seq) is not None:
                    goal = goal.step(Step("subst", (i,)))[0]
                    progressed = True
                    break
            if progressed:
                continue
            closed, goal, progressed = self._clean_hyps(goal)
            if closed:
                return []
            if progressed:
                continue
            for i, h in enumerate(goal.seq.hyps):
                new, rw = self.normalize(goal.seq, h, use_hyps=False, allow_conds=False, depth=depth)
                if rw:
                    goal = self.replay(goal, i, rw)
                    progressed = True
            if progressed:
                continue
            if not touch_goal:
                break
            g = goal.seq.goal
            if isinstance(g, E.Prim) and g.op == "==>":
                goal = goal.step(Step("intro"))[0]
                continue
            if isinstance(g, E.ForAll):
                goal = goal.step(Step("forall_intro"))[0]
                continue
            new, rw = self.normalize(goal.seq, g, use_hyps=use_hyps, allow_conds=True, depth=depth)
            if rw:
                goal = self.replay(goal, "goal", rw)
                progressed = True
            if self._try_close(goal):
                return []
            if not progressed:
                break
        if touch_goal and self._try_close(goal):
            return []
        return [goal]

    def _clean_hyps(self, goal: Goal):
        seq = goal.seq
        for i, h in enumerate(seq.hyps):
            if h == E.FALSE:
                goal.step(Step("close_false", (i,)))
                return True, goal, True
        index = {h: i for i, h in enumerate(seq.hyps)}
        for j, h in enumerate(seq.hyps):
            if isinstance(h, E.Prim) and h.op == "!" and h.args[0] in index:
                goal.step(Step("close_contra", (index[h.args[0]], j)))
                return True, goal, True
        for i, h in enumerate(seq.hyps):
            if h == E.TRUE or h in seq.hyps[:i]:
                return False, goal.step(Step("hyp_drop", (i,)))[0], True
            if isinstance(h, E.Prim) and h.op == "&&":
                return False, goal.step(Step("hyp_conj", (i,)))[0], True
        return False, goal, False

    def _try_close(self, goal: Goal) -> bool:
        seq = goal.seq
        if seq.goal == E.TRUE:
            goal.step(Step("close_true"))
            return True
        for i, h in enumerate(seq.hyps):
            if h == seq.goal:
                goal.step(Step("close_hyp", (i,)))
                return True
        return False

    # ---- arithmetic

    def linarith(self, goal: Goal) -> list:
        self.budget.tick()
        cert = LA.find_certificate(goal.seq, self.theory.program)
        if cert is None:
            return [goal]
        goal.step(Step("linarith", (cert,)))
        return []

    # ---- auto / clarsimp

    def auto(self, goal: Goal, splits: int = 0) -> list:
        opens = self.simp(goal)
        if not opens:
            return []
        goal = opens[0]
        if not self.linarith(goal):
            return []
        g = goal.seq.goal
        if isinstance(g, E.Prim) and g.op == "&&":
            out = []
            for sub in goal.step(Step("conj_intro")):
                out += self.auto(sub, splits)
            return out
        if splits >= MAX_SPLIT_DEPTH:
            return [goal]
        split = self._split_candidate(g, goal.seq)
        for h in goal.seq.hyps:
            if split is not None:
                break
            split = self._split_candidate(h, goal.seq)
        if split is None:
            return [goal]
        out = []
        for sub in goal.step(split):
            out += self.auto(sub, splits + 1)
        return out

    def _split_candidate(self, e, seq):
        fixed = set(seq.types())
        if isinstance(e, (E.Lam, E.ForAll)):
            return None
        if isinstance(e, E.If) and not isinstance(e.cond, E.BoolLit) and E.free_vars(e.cond) <= fixed:
            return Step("case_bool", (e.cond,))
        if isinstance(e, E.Match) and E.free_vars(e.scrut) <= fixed:
            ty = term_type(e.scrut, seq.types(), self.theory.program)
            if is_datatype(ty) and ty.name in self.theory.program.dt:
                return Step("case_data", (e.scrut,))
        for k in E.children(e):
            r = self._split_candidate(k, seq)
            if r is not None:
                return r
        return None

    def clarsimp(self, goal: Goal) -> list:
        while True:
            g = goal.seq.goal
            if isinstance(g, E.Prim) and g.op == "==>":
                goal = goal.step(Step("intro"))[0]
            elif isinstance(g, E.ForAll):
                goal = goal.step(Step("forall_intro"))[0]
            else:
                break
        opens = self.simp(goal, touch_goal=False)
        if not opens:
            return []
        goal = opens[0]
        if isinstance(goal.seq.goal, E.Prim) and goal.seq.goal.op == "&&":
            out = []
            for sub in goal.step(Step("conj_intro")):
                out += self.clarsimp(sub)
            return out
        return [goal]

    # ---- induction

    def induct_var(self, goal: Goal, var: str) -> list:
        ty = goal.seq.types().get(var)
        if not is_datatype(ty):
            raise InductionError(f"cannot induct on {var}")
        return goal.step(Step("induct", (f"dt:{ty.name}", (var,))))

    def induct_rule(self, goal: Goal, name: str) -> list:
        p = self.theory.principle(name)
        if p is None:
            raise InductionError(f"unknown induction rule {name}")
        vars = choose_vars(p, goal.seq)
        return goal.step(Step("induct", (name, vars)))


def _hyp_free(seq, rule) -> set:
    return set(E.free_vars(seq.hyps[int(rule.id[4:])]))


def _run_hint(search: Search, root: Goal, hint) -> list:
    opens = [root]
    inductions = 0
    for st in hint.steps:
        new = []
        if st.method.startswith("induct"):
            inductions += 1
            if inductions > search.budget.induction_depth:
                raise InductionError("induction depth exceeded")
        for g in opens:
            if st.method == "simp":
                new += search.simp(g)
            elif st.method == "auto":
                new += search.auto(g)
            elif st.method == "clarsimp":
                new += search.clarsimp(g)
            elif st.method == "induct":
                new += search.induct_var(g, st.arg)
            elif st.method == "induct_rule":
                new += search.induct_rule(g, st.arg)
        opens = new
    return opens


def _default(search: Search, root: Sequent, theory):
    node = ProofNode()
    opens = search.auto(Goal(root, node, theory))
    if not opens:
        return node, []
    residual = [g.seq for g in opens]
    for var, ty in root.fixed:
        if not is_datatype(ty):
            continue
        node = ProofNode()
        g = Goal(root, node, theory)
        try:
            cases = search.induct_var(g, var)
        except (InductionError, KernelError):
            continue
        left = []
        for c in cases:
            left += search.auto(c)
            if left:
                break
        if not left:
            return node, []
    return None, residual


def prove(vc, theory, budget: Budget | None = None) -> Proved | Unknown:
    """Prove a VC with its hint if present, else with the default strategy."""
    budget = (budget or Budget()).start()
    search = Search(theory, budget)
    root = Sequent(tuple(vc.fixed), tuple(vc.hypotheses), vc.goal)
    try:
        if vc.hint is not None:
            node = ProofNode()
            try:
                opens = _run_hint(search, Goal(root, node, theory), vc.hint)
            except (InductionError, KernelError) as e:
                return Unknown("hint-failed", [str(e)])
            if opens:
                return Unknown("hint-failed", [g.seq for g in opens])
        else:
            node, residual = _default(search, root, theory)
            if node is None:
                return Unknown("no-progress", residual)
    except BudgetExhausted as e:
        return Unknown(e.reason)
    verdict = check_trace(root, node, theory)
    if not verdict:
        raise AssertionError(f"proof search produced an invalid trace: {verdict.message}")
    return Proved(node, root)
