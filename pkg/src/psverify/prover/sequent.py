"""Proof states and replayable proof trees."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..core import expr as E


@dataclass(frozen=True)
class Sequent:
    fixed: tuple  # ((name, Type), ...)
    hyps: tuple
    goal: object

    def types(self) -> dict:
        return dict(self.fixed)

    def with_goal(self, goal) -> "Sequent":
        return Sequent(self.fixed, self.hyps, goal)

    def with_hyps(self, hyps) -> "Sequent":
        return Sequent(self.fixed, tuple(hyps), self.goal)

    def names(self) -> set:
        out = {n for n, _ in self.fixed}
        for h in self.hyps:
            E.all_names(h, out)
        E.all_names(self.goal, out)
        return out


def digest(obj) -> str:
    return hashlib.blake2b(repr(obj).encode(), digest_size=8).hexdigest()


@dataclass(frozen=True)
class Step:
    """One kernel rule application. ``check`` is a digest of the resulting main subgoal."""
    rule: str
    args: tuple = ()
    check: str = ""


@dataclass
class ProofNode:
    steps: list = field(default_factory=list)
    children: list = field(default_factory=list)

    def count(self) -> int:
        return len(self.steps) + sum(c.count() for c in self.children)

    def iter_steps(self):
        yield from self.steps
        for c in self.children:
            yield from c.iter_steps()


@dataclass
class Proved:
    trace: ProofNode
    root: Sequent

    @property
    def status(self) -> str:
        return "proved"


@dataclass
class Unknown:
    reason: str  # no-progress, timeout, termination, hint-failed, cancelled
    residual: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "unknown"
