"""Independent replay of proof trees against the kernel."""
from __future__ import annotations

from dataclasses import dataclass

from .kernel import KernelError, apply
from .sequent import ProofNode, Sequent


@dataclass
class TraceVerdict:
    valid: bool
    failed_step: object = None
    message: str = ""
    steps_checked: int = 0

    def __bool__(self) -> bool:
        return self.valid


def check_trace(root: Sequent, trace: ProofNode, theory) -> TraceVerdict:
    """Valid iff every step re-applies and every branch ends in a closing step."""
    count = 0
    work = [(root, trace)]
    while work:
        seq, node = work.pop()
        if not node.steps:
            return TraceVerdict(False, None, "open goal left in trace", count)
        for i, step in enumerate(node.steps):
            try:
                subs = apply(seq, step, theory)
            except KernelError as e:
                return TraceVerdict(False, step, str(e), count)
            count += 1
            last = i == len(node.steps) - 1
            if not last:
                if len(subs) != 1:
                    return TraceVerdict(False, step, "branching step in the middle of a node", count)
                seq = subs[0]
                continue
            if len(subs) == 1 and not node.children:
                return TraceVerdict(False, step, "trace ends with an open goal", count)
            if len(subs) != len(node.children):
                return TraceVerdict(False, step, f"{len(subs)} subgoals but {len(node.children)} subproofs", count)
            work.extend(zip(subs, node.children))
    return TraceVerdict(True, None, "", count)
