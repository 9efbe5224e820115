"""Trace-producing prover: kernel, search tactics, checker and library mappings."""
from __future__ import annotations

from .checker import TraceVerdict, check_trace
from .kernel import KernelError, Theory
from .rules import Rule, RuleSet
from .sequent import ProofNode, Proved, Sequent, Step, Unknown
from .tactics import Budget, prove
from .theory import add_function, add_lemma, new_theory

__all__ = [
    "Budget", "KernelError", "ProofNode", "Proved", "Rule", "RuleSet", "Sequent", "Step",
    "Theory", "TraceVerdict", "Unknown", "add_function", "add_lemma", "check_trace",
    "new_theory", "prove",
]
