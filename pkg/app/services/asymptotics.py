"""
Leading-order estimates for Q_n(z).

Each major arc (h, k) contributes omega_{h,k,n}(z) * T_{h,k,n}(z) with

    T = sqrt(L / (2 pi (s0+1) n^((s0+2)/(s0+1)))) * exp((s0+1)/s0 * n^(s0/(s0+1)) * L)

and L = L_{h,k}(z). When Phi_{h,k}(z) is a negative real the two conjugate
saddles coalesce into 2 Re T. The relative error is O(n^-mu) with
mu = min(-sigma0/(s0+1), s0/(2 s0 + 2)).
"""

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from app.config import (
    K_MAX,
    OSC_BAND_FACTOR,
    OSC_TOL,
    THREADS,
    TIE_TOL,
    ZERO_TOL,
    logger,
)
from app.errors import BoundaryError, DomainError, UnsupportedFamily
from app.services.phases import ArcLabel, PhaseClass, classify, phi_hk
from app.services.series import eval_exact_sequence
from app.services.special_functions import (
    gamma_real,
    polylog,
    principal_root,
    riemann_zeta,
)
from app.services.weights import (
    WeightSequence,
    dirichlet_deriv_zero,
    dirichlet_residue,
    dirichlet_value,
    fourier_coeffs,
)
from app.utils.helpers import relative_error


class Branch(str, Enum):
    ANALYTIC = "analytic"
    OSCILLATORY = "oscillatory"


@dataclass(frozen=True)
class ArcEstimate:
    arc: ArcLabel
    omega: complex
    saddle: complex
    branch: Branch
    product: complex
    envelope: float
    alternate: Optional[complex] = None


@dataclass(frozen=True)
class Estimate:
    z: complex
    n: int
    value: complex
    arcs: tuple[ArcEstimate, ...]
    mu: float
    phase: PhaseClass

    @property
    def envelope(self) -> float:
        return sum(a.envelope for a in self.arcs)

    @property
    def alternate(self) -> Optional[complex]:
        """Sum with the other branch taken on arcs inside the ambiguous band."""
        if all(a.alternate is None for a in self.arcs):
            return None
        return sum(a.product if a.alternate is None else a.alternate for a in self.arcs)


@dataclass(frozen=True)
class MeinardusResult:
    n: int
    value: float
    log_value: float
    residue: float
    d_zero: float
    d_prime_zero: float
    kappa: float
    constant: float
    exponent: float = field(repr=False)


@dataclass(frozen=True)
class CompareRow:
    n: int
    exact: complex
    estimate: complex
    rel_err: float
    envelope_err: float
    oscillatory: bool


def _unit(numerator: int, k: int) -> complex:
    r = numerator % k
    if r == 0:
        return 1 + 0j
    return complex(math.cos(2 * math.pi * r / k), math.sin(2 * math.pi * r / k))


def omega(seq: WeightSequence, arc: ArcLabel, n: int, z: complex) -> complex:
    """e^{-2 pi i h n / k} prod_j (1 - e^{2 pi i h j / k} z)^(-b(j)), principal powers."""
    z = complex(z)
    data = fourier_coeffs(seq, arc.k)
    log_total = 0j
    for j, bj in enumerate(data.b):
        if abs(bj) < ZERO_TOL:
            continue
        base = 1 - _unit(arc.h * j, arc.k) * z
        if base == 0:
            raise DomainError(f"omega_{arc} is singular at z = {z}")
        log_total -= bj * cmath.log(base)
    return _unit(-arc.h * n, arc.k) * cmath.exp(log_total)


def _saddle(L: complex, s0: float, n: int) -> complex:
    log_scale = cmath.log(L / (2 * math.pi * (s0 + 1) * n ** ((s0 + 2) / (s0 + 1))))
    exponent = (s0 + 1) / s0 * n ** (s0 / (s0 + 1)) * L
    try:
        return cmath.exp(0.5 * log_scale + exponent)
    except OverflowError as e:
        raise DomainError(f"saddle term overflows at n = {n}") from e


def _branch(phi: complex, osc_tol: float) -> tuple[Branch, bool]:
    """Branch for Phi and whether Phi sits in the ambiguous band around the negative axis."""
    ratio = abs(phi.imag) / abs(phi)
    negative = phi.real < 0
    oscillatory = negative and ratio < osc_tol
    ambiguous = negative and osc_tol / OSC_BAND_FACTOR <= ratio < osc_tol * OSC_BAND_FACTOR
    return (Branch.OSCILLATORY if oscillatory else Branch.ANALYTIC), ambiguous


def saddle_term(
    seq: WeightSequence,
    arc: ArcLabel,
    n: int,
    z: complex,
    osc_tol: float = OSC_TOL,
) -> tuple[complex, Branch]:
    """T on the analytic branch, 2 Re T when Phi_{h,k}(z) is a non-positive real."""
    if n < 1:
        raise DomainError(f"saddle_term needs n >= 1, got {n}")
    phi = phi_hk(seq, arc, z)
    if abs(phi) < ZERO_TOL:
        raise DomainError(f"Phi_{arc} vanishes at z = {z}")
    L = principal_root(phi, seq.s0 + 1.0)
    T = _saddle(L, seq.s0, n)
    branch, _ = _branch(phi, osc_tol)
    if branch is Branch.OSCILLATORY:
        return complex(2.0 * T.real, 0.0), branch
    return T, branch


def _arc_estimate(
    seq: WeightSequence, arc: ArcLabel, n: int, z: complex, osc_tol: float
) -> ArcEstimate:
    phi = phi_hk(seq, arc, z)
    if abs(phi) < ZERO_TOL:
        raise DomainError(f"Phi_{arc} vanishes at z = {z}")
    L = principal_root(phi, seq.s0 + 1.0)
    T = _saddle(L, seq.s0, n)
    w = omega(seq, arc, n, z)
    branch, ambiguous = _branch(phi, osc_tol)

    saddle = complex(2.0 * T.real, 0.0) if branch is Branch.OSCILLATORY else T
    alternate = None
    if ambiguous:
        other = T if branch is Branch.OSCILLATORY else complex(2.0 * T.real, 0.0)
        alternate = w * other
        logger.warning(
            "Phi close to the negative real axis; reporting both branches",
            {"arc": str(arc), "z": str(z), "n": n, "branch": branch.value},
        )

    scale = 2.0 if branch is Branch.OSCILLATORY else 1.0
    return ArcEstimate(
        arc=arc,
        omega=w,
        saddle=saddle,
        branch=branch,
        product=w * saddle,
        envelope=scale * abs(w) * abs(T),
        alternate=alternate,
    )


def error_exponent(seq: WeightSequence) -> float:
    """mu = min(-sigma0 / (s0 + 1), s0 / (2 s0 + 2))."""
    s0 = seq.s0
    return min(-seq.sigma0 / (s0 + 1.0), s0 / (2.0 * s0 + 2.0))


def estimate(
    seq: WeightSequence,
    z: complex,
    n: int,
    k_max: int = K_MAX,
    tie_tol: float = TIE_TOL,
    osc_tol: float = OSC_TOL,
) -> Estimate:
    """Sum of omega * T over the major arcs at z."""
    if n < 1:
        raise DomainError(f"estimate needs n >= 1, got {n}")
    z = complex(z)
    phase = classify(seq, z, k_max, tie_tol)
    if phase.boundary:
        raise BoundaryError(
            f"z = {z} lies on a phase boundary (margin {phase.margin:.3g}); "
            "no leading-order estimate applies there",
        )
    arcs = tuple(_arc_estimate(seq, arc, n, z, osc_tol) for arc in phase.major_arcs)
    return Estimate(
        z=z,
        n=n,
        value=sum((a.product for a in arcs), 0j),
        arcs=arcs,
        mu=error_exponent(seq),
        phase=phase,
    )


def meinardus_r(seq: WeightSequence, n: int) -> MeinardusResult:
    """
    Classical z = 1 asymptotic r(n) ~ C n^kappa exp((s0+1)/s0 n^(s0/(s0+1)) X^(1/(s0+1)))
    with X = A Gamma(s0+1) zeta(s0+1).
    """
    if n < 1:
        raise DomainError(f"meinardus_r needs n >= 1, got {n}")
    s0 = seq.s0
    residue = dirichlet_residue(seq, 1, 1).real
    if residue <= 0:
        raise UnsupportedFamily(
            f"{seq.describe()} has non-positive residue {residue}; the z = 1 formula needs A > 0",
        )
    d_zero = dirichlet_value(seq, 1, 1, 0.0).real
    d_prime = dirichlet_deriv_zero(seq)

    x = residue * gamma_real(s0 + 1.0) * riemann_zeta(s0 + 1.0)
    kappa = (d_zero - 1.0 - s0 / 2.0) / (1.0 + s0)
    constant = (
        math.exp(d_prime)
        * (2.0 * math.pi * (1.0 + s0)) ** -0.5
        * x ** ((1.0 - 2.0 * d_zero) / (2.0 * s0 + 2.0))
    )
    exponent = (s0 + 1.0) / s0 * n ** (s0 / (s0 + 1.0)) * x ** (1.0 / (s0 + 1.0))
    log_value = math.log(constant) + kappa * math.log(n) + exponent
    value = math.exp(log_value) if log_value < 709.0 else math.inf
    return MeinardusResult(
        n=n,
        value=value,
        log_value=log_value,
        residue=residue,
        d_zero=d_zero,
        d_prime_zero=d_prime,
        kappa=kappa,
        constant=constant,
        exponent=exponent,
    )


def compare(
    seq: WeightSequence,
    z: complex,
    n_list: Sequence[int],
    k_max: int = K_MAX,
    tie_tol: float = TIE_TOL,
    osc_tol: float = OSC_TOL,
    threads: int = THREADS,
) -> list[CompareRow]:
    """Exact Q_n(z) against the estimate for every n in n_list."""
    if not n_list:
        return []
    if min(n_list) < 1:
        raise DomainError("compare needs every n >= 1")
    exact = eval_exact_sequence(seq, z, max(n_list))

    def row(n: int) -> CompareRow:
        est = estimate(seq, z, n, k_max, tie_tol, osc_tol)
        value = complex(exact[n])
        return CompareRow(
            n=n,
            exact=value,
            estimate=est.value,
            rel_err=relative_error(est.value, value),
            envelope_err=abs(est.value - value) / est.envelope,
            oscillatory=any(a.branch is Branch.OSCILLATORY for a in est.arcs),
        )

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(row, n_list))
    logger.info("Comparison finished", {"family": seq.describe(), "z": str(z), "rows": len(rows)})
    return rows


# Closed forms for the built-in families. They are assembled from polylog and
# zeta values directly, without the Fourier data, so they cross-check estimate().


def _saddle_power(L: complex, s0: float, n: int) -> complex:
    return cmath.sqrt(L / (2 * math.pi * (s0 + 1) * n ** ((s0 + 2) / (s0 + 1)))) * cmath.exp(
        (s0 + 1) / s0 * n ** (s0 / (s0 + 1)) * L
    )


def power_positive_axis(s0: float, x: float, n: int) -> float:
    """a_m = m^(s0-1), 0 < x < 1: (1-x)^(-zeta(1-s0)) times the (1,1) saddle factor."""
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    L = principal_root(gamma_real(s0 + 1) * polylog(s0 + 1, x), s0 + 1)
    return ((1 - x) ** -riemann_zeta(1 - s0) * _saddle_power(L, s0, n)).real


def power_negative_axis_far(s0: float, x: float, n: int) -> float:
    """a_m = m^(s0-1), -1 < x < x*: the (1,2) arc with (-1)^n (1-x)^-B (1+x)^-A."""
    if not -1.0 < x < 0.0:
        raise DomainError(f"x must lie in (-1, 0), got {x}")
    zeta = riemann_zeta(1 - s0)
    a = zeta * (1 - 2 ** (s0 - 1))
    b = zeta * 2 ** (s0 - 1)
    L = 0.5 * principal_root(gamma_real(s0 + 1) * polylog(s0 + 1, x * x), s0 + 1)
    sign = -1.0 if n % 2 else 1.0
    return (sign * (1 - x) ** -b * (1 + x) ** -a * _saddle_power(L, s0, n)).real


def power_negative_axis_near(s0: float, x: float, n: int) -> float:
    """a_m = m^(s0-1), x* < x < 0: 2 (1-x)^(-zeta(1-s0)) Re[(1,1) saddle factor]."""
    if not -1.0 < x < 0.0:
        raise DomainError(f"x must lie in (-1, 0), got {x}")
    L = principal_root(gamma_real(s0 + 1) * polylog(s0 + 1, complex(x, 0.0)), s0 + 1)
    return 2.0 * (1 - x) ** -riemann_zeta(1 - s0) * _saddle_power(L, s0, n).real


def progression_sector(a: int, j: int, z: complex, n: int) -> complex:
    """Parts = a mod j (j > 2), |arg z| < pi/j."""
    if j <= 2:
        raise DomainError("the sector form needs j > 2")
    z = complex(z)
    if abs(cmath.phase(z)) >= math.pi / j:
        raise DomainError(f"z = {z} is outside the sector |arg z| < pi/{j}")
    li = polylog(2, z)
    return (
        (1 - z) ** ((2 * a - j) / (2 * j))
        * (li / (16 * j * math.pi**2 * n**3)) ** 0.25
        * cmath.exp(2 * cmath.sqrt(n * li / j))
    )


def odd_parts_main(z: complex, n: int) -> complex:
    """Partitions into odd parts, z in R(1,1)."""
    li = polylog(2, z)
    return (li / (32 * math.pi**2 * n**3)) ** 0.25 * cmath.exp(cmath.sqrt(2 * n * li))


def odd_parts_alternating(z: complex, n: int) -> complex:
    """Partitions into odd parts, z in R(1,2)."""
    li = polylog(2, -complex(z))
    sign = -1.0 if n % 2 else 1.0
    return sign * (li / (32 * math.pi**2 * n**3)) ** 0.25 * cmath.exp(cmath.sqrt(2 * n * li))


def odd_parts_quarter(z: complex, n: int) -> complex:
    """
    Partitions into odd parts, z in R(1,4): the arcs (1,4) and (3,4) together,
    with prefactor i^-n u + i^n / u, u = ((1 + iz) / (1 - iz))^(1/4).
    """
    z = complex(z)
    li = polylog(2, -z * z)
    u = principal_root((1 + 1j * z) / (1 - 1j * z), 4)
    rotation = 1j ** (n % 4)
    prefactor = u / rotation + rotation / u
    return (
        prefactor
        * (li / (128 * math.pi**2 * n**3)) ** 0.25
        * cmath.exp(cmath.sqrt(n * li / 2))
    )
