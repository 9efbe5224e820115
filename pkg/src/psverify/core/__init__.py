from .elaborate import elaborate, show_type
from .program import CoreProgram, CtorDef, DataTypeDef, FunDef
from .subst import fresh_name, substitute

__all__ = ["elaborate", "show_type", "CoreProgram", "CtorDef", "DataTypeDef", "FunDef", "fresh_name", "substitute"]
