"""
Number formatting shared by the text formats and the C emitter.
"""
import math


def format_float(value: float) -> str:
    """Format a double with 17 significant digits so that it parses back bit-identical."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = format(value, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def c_double(value: float) -> str:
    """Format a double as a C99 literal (infinities use the <math.h> macro)."""
    value = float(value)
    if math.isinf(value):
        return "INFINITY" if value > 0 else "(-INFINITY)"
    if math.isnan(value):
        return "NAN"
    text = format_float(value)
    return f"({text})" if text.startswith("-") else text
