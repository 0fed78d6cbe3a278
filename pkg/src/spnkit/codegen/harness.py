"""
Compile emitted evaluators with the system C compiler and compare them with the interpreter.
"""
import logging
import os
import shutil
import subprocess
import tempfile
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from ..core.errors import CodegenError
from ..core.network import Network
from ..core.numeric import format_float
from ..inference.evaluation import log_likelihood
from ..systems.configuration_manager import EmitOptions
from .c_emitter import emit_source

logger = logging.getLogger(__name__)

COMPILERS = ("cc", "gcc", "clang")
STRICT_FLAGS = ("-std=c99", "-pedantic", "-Wall", "-Wextra", "-Werror", "-O2")


def find_compiler(candidates: Sequence[str] = COMPILERS) -> Optional[str]:
    """Path of the first C compiler found on PATH (CC environment variable first), or None."""
    preferred = os.environ.get("CC")
    for name in ([preferred] if preferred else []) + list(candidates):
        path = shutil.which(name)
        if path:
            return path
    return None


def compile_evaluator(source: str, workdir: str, compiler: Optional[str] = None) -> str:
    """
    Compile a translation unit containing a main into an executable.

    Returns:
        Path of the executable inside workdir

    Raises:
        CodegenError: If no compiler is found or compilation fails (diagnostics included)
    """
    compiler = compiler or find_compiler()
    if compiler is None:
        raise CodegenError("No C compiler found (tried CC, " + ", ".join(COMPILERS) + ")")
    source_path = os.path.join(workdir, "evaluator.c")
    executable = os.path.join(workdir, "evaluator")
    with open(source_path, "w", encoding="utf-8") as f:
        f.write(source)
    command = [compiler, *STRICT_FLAGS, "-o", executable, source_path, "-lm"]
    result = subprocess.run(command, capture_output=True, text=True)
    if result.returncode != 0:
        raise CodegenError(f"C compilation failed:\n{result.stderr.strip()}")
    if result.stderr.strip():
        raise CodegenError(f"C compiler produced diagnostics:\n{result.stderr.strip()}")
    logger.debug("Compiled %s with %s", executable, compiler)
    return executable


def run_evaluator(executable: str, data) -> np.ndarray:
    """Feed rows to a compiled evaluator and parse one log-likelihood per row."""
    matrix = np.atleast_2d(np.asarray(data, dtype=float))
    lines = [",".join(format_float(v) for v in row) for row in matrix]
    result = subprocess.run([executable], input="\n".join(lines) + "\n", capture_output=True, text=True)
    if result.returncode != 0:
        raise CodegenError(f"Compiled evaluator failed: {result.stderr.strip()}")
    return np.array([float(line) for line in result.stdout.split()])


def check_equivalence(network: Network, data, options: Optional[EmitOptions] = None) -> float:
    """
    Largest absolute difference between the compiled evaluator and the interpreter
    over the rows of data. Rows where both give -inf count as equal.

    Raises:
        CodegenError: If no compiler is available or compilation fails
    """
    options = replace(options or EmitOptions(), emit_main=True)
    source = emit_source(network, options)
    expected = log_likelihood(network, data)
    with tempfile.TemporaryDirectory(prefix="spnkit-") as workdir:
        actual = run_evaluator(compile_evaluator(source, workdir), data)
    if actual.shape != expected.shape:
        raise CodegenError(f"Compiled evaluator returned {actual.size} value(s) for {expected.size} row(s)")
    both_infinite = np.isneginf(actual) & np.isneginf(expected)
    with np.errstate(invalid="ignore"):
        deviation = np.where(both_infinite, 0.0, np.abs(actual - expected))
    deviation = np.nan_to_num(deviation, nan=np.inf)
    worst = float(deviation.max()) if deviation.size else 0.0
    logger.info("Compiled evaluator deviates from the interpreter by at most %g", worst)
    return worst
