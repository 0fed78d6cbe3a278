from .c_emitter import emit_source
from .harness import check_equivalence, compile_evaluator, find_compiler, run_evaluator

__all__ = ['emit_source', 'find_compiler', 'compile_evaluator', 'run_evaluator', 'check_equivalence']
