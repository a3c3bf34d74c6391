from typing import Iterable, Sequence

from app.errors import ConfigError


def format_float(x: float) -> str:
    """Render a float with 17 significant digits (lossless round trip)."""
    return format(float(x), ".17g")


def format_number(x) -> str:
    """Integers print exactly, everything else through format_float."""
    if isinstance(x, int):
        return str(x)
    if hasattr(x, "denominator"):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return format_float(x)


def parse_complex(text: str) -> complex:
    """
    Parse a complex number as written on a command line.

    Accepts Python notation ("0.2+0.4j") and the mathematical "i"
    ("0.2+0.4i", "-i", "0.5").
    """
    cleaned = text.strip().replace(" ", "").replace("I", "j").replace("i", "j")
    if cleaned.endswith("j") and (cleaned == "j" or cleaned[-2] in "+-"):
        cleaned = cleaned[:-1] + "1j"
    try:
        return complex(cleaned)
    except ValueError as e:
        raise ConfigError(f"Cannot parse complex number {text!r}") from e


def polynomial_envelope(coeffs: Sequence, z: complex) -> float:
    """sum_d |c_d| |z|^d: the scale floating evaluation error is measured against."""
    r = abs(z)
    total = 0.0
    for c in reversed(coeffs):
        total = total * r + abs(float(c))
    return total


def relative_error(value: complex, reference: complex, scale: float = 0.0) -> float:
    """|value - reference| / max(|reference|, scale)."""
    denom = max(abs(reference), scale)
    if denom == 0.0:
        return abs(value - reference)
    return abs(value - reference) / denom


def chunked(items: Sequence, parts: int) -> Iterable[Sequence]:
    """Split a sequence into at most `parts` contiguous slices."""
    parts = max(1, min(parts, len(items)))
    size, extra = divmod(len(items), parts)
    start = 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        yield items[start:stop]
        start = stop
