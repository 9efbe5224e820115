"""Pipeline orchestration, command-line interface and the request daemon."""
from .pipeline import Analysis, Options, SolverVerdict, load_program, solve

__all__ = ["Analysis", "Options", "SolverVerdict", "load_program", "solve"]
