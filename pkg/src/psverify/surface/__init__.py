from .lexer import Token, tokenize
from .parser import parse_program
from .resolve import HygienicName, NameTable, resolve_names

__all__ = ["Token", "tokenize", "parse_program", "HygienicName", "NameTable", "resolve_names"]
