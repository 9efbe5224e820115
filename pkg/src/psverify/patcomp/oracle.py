from __future__ import annotations

import random
from dataclasses import dataclass

from ..core.evaluate import DEFAULT_FUEL, EvalError, Evaluator, MatchFailure, OutOfFuel
from ..deepstack import deep_call
from .generate import random_args


@dataclass
class Verdict:
    agree: bool
    samples: int
    agreements: int
    vacuous: bool = False
    witness: tuple | None = None  # (args, original outcome, equations outcome)


def run_outcome(ev: Evaluator, fun: str, args: list):
    try:
        return ("value", ev.call(fun, list(args)))
    except MatchFailure as exc:
        return ("match-failure", exc.value)
    except (OutOfFuel, RecursionError):
        return ("out-of-fuel", None)
    except EvalError as exc:
        return ("error", str(exc))


def oracle_equivalence(original, equations, program, samples: int = 1000, seed: int = 0,
                       fuel: int = DEFAULT_FUEL, depth: int = 5) -> Verdict:
    """Compare naive-body evaluation with first-match equation dispatch on random inputs."""
    return deep_call(_oracle, original, equations, program, samples, seed, fuel, depth)


def _oracle(original, equations, program, samples, seed, fuel, depth) -> Verdict:
    if samples <= 0:
        return Verdict(True, 0, 0, vacuous=True)
    rng = random.Random(seed)
    eqmap = {original.name: list(equations)}
    n = 0
    for _ in range(samples):
        args = random_args(program, original, rng, depth)
        a = run_outcome(Evaluator(program, fuel), original.name, args)
        b = run_outcome(Evaluator(program, fuel, eqmap), original.name, args)
        # partiality must agree; which value failed to match is not observable
        if a != b and not (a[0] == b[0] and a[0] in ("out-of-fuel", "match-failure")):
            return Verdict(False, samples, n, witness=(args, a, b))
        n += 1
    return Verdict(True, samples, n)
