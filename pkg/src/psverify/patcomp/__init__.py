from .exhaustive import MatchCoverage, check_exhaustive, function_coverage
from .oracle import Verdict, oracle_equivalence
from .split import Equation, split_equations

__all__ = ["MatchCoverage", "check_exhaustive", "function_coverage", "Verdict", "oracle_equivalence",
           "Equation", "split_equations"]
