"""
Exact and numeric oracles for Q_n(z), the q^n coefficient of

    P(z, q) = prod_{m >= 1} (1 - z q^m)^(-a_m).

Three independent routes are provided: multiplying the product out
(integer weights only), the logarithmic-derivative recurrence

    n Q_n = sum_{j=1}^n d_j(z) Q_{n-j},   d_j(z) = sum_{m | j} m a_m z^(j/m),

and a trapezoid-rule Cauchy integral on a circle |q| = rho.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from app.config import (
    CONTOUR_AGREEMENT,
    CONTOUR_MAX_DOUBLINGS,
    CONTOUR_MAX_FACTORS,
    CONTOUR_MIN_POINTS,
    K_MAX,
    SERIES_TOL,
    logger,
)
from app.errors import ConfigError, ConvergenceError, DomainError, UnsupportedFamily
from app.services.phases import dominant_growth
from app.services.weights import WeightSequence, exact_weight, weight_at

FACTOR_CELLS = 1 << 20  # points x factors evaluated per block


@dataclass(frozen=True)
class CoeffPoly:
    """Q_n(z) as coefficients of z^0..z^n."""

    n: int
    coeffs: tuple
    exact: bool

    @property
    def degree(self) -> int:
        for d in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[d] != 0:
                return d
        return -1

    def evaluate(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc


def _check_n(n: int, name: str = "n") -> None:
    if n < 0:
        raise ConfigError(f"{name} must be nonnegative, got {n}")


def _normalize(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    return value


def expand_product(seq: WeightSequence, n_max: int) -> list[CoeffPoly]:
    """
    Q_0..Q_{n_max} from the truncated product, in exact integers.

    (1 - z q^m)^(-a) is applied as `a` successive geometric factors
    1 / (1 - z q^m), each an in-place sweep over increasing n.
    """
    _check_n(n_max, "n_max")
    if not seq.integer_weights():
        raise UnsupportedFamily(
            f"{seq.describe()} has weights that are not nonnegative integers"
        )

    table = np.zeros((n_max + 1, n_max + 1), dtype=object)
    table[0, 0] = 1
    for m in range(1, n_max + 1):
        a = int(exact_weight(seq, m))
        for _ in range(a):
            for n in range(m, n_max + 1):
                table[n, 1:] += table[n - m, :-1]

    return [
        CoeffPoly(n=n, coeffs=tuple(int(c) for c in table[n, : n + 1]), exact=True)
        for n in range(n_max + 1)
    ]


def _divisor_terms(seq: WeightSequence, n_max: int, exact: bool) -> list[list[tuple]]:
    """terms[j] = [(j / m, m a_m) for m | j with a_m != 0]."""
    terms: list[list[tuple]] = [[] for _ in range(n_max + 1)]
    for m in range(1, n_max + 1):
        a = exact_weight(seq, m) if exact else weight_at(seq, m)
        if a == 0:
            continue
        for j in range(m, n_max + 1, m):
            terms[j].append((j // m, m * a))
    return terms


def expand_exp_recurrence(
    seq: WeightSequence, n_max: int, exact: Optional[bool] = None
) -> list[CoeffPoly]:
    """
    Q_0..Q_{n_max} from the logarithmic-derivative recurrence.

    Coefficients are exact rationals when the weights are rational (the
    default then), IEEE doubles otherwise.
    """
    _check_n(n_max, "n_max")
    if exact is None:
        exact = seq.rational_weights()
    elif exact and not seq.rational_weights():
        raise UnsupportedFamily(f"{seq.describe()} has irrational weights")

    size = n_max + 1
    if exact:
        table = np.full((size, size), Fraction(0), dtype=object)
        table[0, 0] = Fraction(1)
    else:
        table = np.zeros((size, size), dtype=float)
        table[0, 0] = 1.0

    terms = _divisor_terms(seq, n_max, exact)
    for n in range(1, size):
        acc = np.full(size, Fraction(0), dtype=object) if exact else np.zeros(size)
        for j in range(1, n + 1):
            prev = table[n - j]
            for power, weight in terms[j]:
                acc[power:] += weight * prev[: size - power]
        table[n] = acc / n

    return [
        CoeffPoly(
            n=n,
            coeffs=tuple(_normalize(c) if exact else float(c) for c in table[n, : n + 1]),
            exact=exact,
        )
        for n in range(size)
    ]


def eval_exact_sequence(seq: WeightSequence, z: complex, n_max: int) -> np.ndarray:
    """Q_0(z)..Q_{n_max}(z) by the scalar recurrence, O(n_max^2)."""
    _check_n(n_max, "n_max")
    z = complex(z)
    d = np.zeros(n_max + 1, dtype=complex)
    for m in range(1, n_max + 1):
        a = weight_at(seq, m)
        if a == 0.0:
            continue
        for j in range(m, n_max + 1, m):
            d[j] += m * a * z ** (j // m)

    q = np.zeros(n_max + 1, dtype=complex)
    q[0] = 1.0
    for n in range(1, n_max + 1):
        # d_1..d_n against Q_{n-1}..Q_0
        q[n] = np.dot(d[1 : n + 1], q[n - 1 :: -1]) / n
    return q


def eval_exact(seq: WeightSequence, z: complex, n: int) -> complex:
    """Q_n(z) by the scalar recurrence."""
    return complex(eval_exact_sequence(seq, z, n)[n])


def default_radius(seq: WeightSequence, z: complex, n: int, k_max: int = K_MAX) -> float:
    """
    exp(-Re L_dom(z) / n^(1/(s0+1))): the saddle radius of the dominant arc.
    Falls back to exp(-1/(n+1)) when no arc grows.
    """
    if n == 0:
        return 0.5
    growth = dominant_growth(seq, z, k_max) if z != 0 else 0.0
    if growth <= 0.0:
        return math.exp(-1.0 / (n + 1))
    return math.exp(-growth / n ** (1.0 / (seq.s0 + 1.0)))


def _factor_count(seq: WeightSequence, z: complex, radius: float) -> int:
    """Smallest M with sum_{m > M} |a_m log(1 - z q^m)| below SERIES_TOL on |q| = radius."""
    t = seq.family.shift
    peak = max(abs(seq.family.pattern(r)) for r in range(seq.period))
    r = abs(z)
    scale = peak * r / (1.0 - r)
    m = 1
    while m <= CONTOUR_MAX_FACTORS:
        ratio = radius * ((m + 1) / m) ** t if t > 0 else radius
        if ratio < 1.0:
            tail = scale * m**t * radius**m / (1.0 - ratio)
            if tail < SERIES_TOL:
                return m
        m = m + 1 if m < 64 else int(m * 1.25)
    raise ConvergenceError(
        f"log-product tail does not drop below {SERIES_TOL} within "
        f"{CONTOUR_MAX_FACTORS} factors at radius {radius}",
    )


def _log_product(
    seq: WeightSequence, z: complex, log_q: np.ndarray, factors: int
) -> np.ndarray:
    """ln P(z, q) = -sum_m a_m Log(1 - z q^m) at the points q = exp(log_q)."""
    total = np.zeros(log_q.shape, dtype=complex)
    weights = np.array([weight_at(seq, m) for m in range(1, factors + 1)])
    block = max(16, FACTOR_CELLS // max(log_q.size, 1))
    for start in range(0, factors, block):
        m = np.arange(start + 1, min(start + block, factors) + 1)
        a = weights[m - 1]
        keep = a != 0.0
        if not keep.any():
            continue
        zq = z * np.exp(np.outer(log_q, m[keep]))
        total -= np.log1p(-zq) @ a[keep]
    return total


def _trapezoid(
    seq: WeightSequence, z: complex, n: int, radius: float, points: int, factors: int
) -> tuple[complex, float]:
    theta = 2.0 * np.pi * np.arange(points) / points
    log_q = math.log(radius) + 1j * theta
    integrand = np.exp(_log_product(seq, z, log_q, factors) - n * log_q)
    return complex(integrand.mean()), float(np.abs(integrand).mean())


def contour_extract(
    seq: WeightSequence,
    z: complex,
    n: int,
    radius: Optional[float] = None,
    points: Optional[int] = None,
) -> complex:
    """
    Q_n(z) = (1 / 2 pi i) contour integral of P(z, q) q^(-n-1) dq on |q| = radius,
    by the trapezoid rule. The point count starts at max(8n, 256) and doubles
    until two successive values agree to 1e-9 of the integrand scale.
    """
    _check_n(n)
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"contour extraction needs |z| < 1, got |z| = {abs(z)}")
    if radius is None:
        radius = default_radius(seq, z, n)
    if not 0.0 < radius < 1.0:
        raise DomainError(f"contour radius must lie in (0, 1), got {radius}")
    if points is None:
        points = max(8 * n, CONTOUR_MIN_POINTS)
    if points < max(8 * n, 1):
        raise ConfigError(f"contour extraction needs at least 8n = {8 * n} points, got {points}")

    if z == 0:
        return 1 + 0j if n == 0 else 0j

    factors = _factor_count(seq, z, radius)
    value, scale = _trapezoid(seq, z, n, radius, points, factors)
    for _ in range(CONTOUR_MAX_DOUBLINGS):
        points *= 2
        refined, scale = _trapezoid(seq, z, n, radius, points, factors)
        tol = CONTOUR_AGREEMENT * max(abs(refined), 1e-6 * scale)
        if abs(refined - value) <= tol:
            return refined
        logger.debug(
            "Contour refinement",
            {"n": n, "points": points, "change": abs(refined - value)},
        )
        value = refined
    raise ConvergenceError(
        f"trapezoid rule did not settle after {CONTOUR_MAX_DOUBLINGS} doublings "
        f"(n={n}, radius={radius})",
    )
