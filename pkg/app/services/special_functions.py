"""
Real-order special functions used by the rest of the package.

Everything here works in IEEE double precision except the Hasse oracle,
which runs its alternating inner sums in mpmath so that the cancellation
in the binomial differences does not eat the result. Gamma comes from
math.gamma throughout.
"""

import cmath
import math
from functools import lru_cache

import mpmath
import numpy as np

from app.config import (
    DISK_CUTOFF,
    EULER_MACLAURIN_TERMS,
    HASSE_MAX_TERMS,
    HASSE_TOL,
    POLE_TOL,
    SERIES_TOL,
    logger,
)
from app.errors import ConvergenceError, DomainError, PoleError

# B_2, B_4, ..., B_12
BERNOULLI_EVEN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)

# Stieltjes constants gamma_0 (Euler's constant), gamma_1, gamma_2
STIELTJES = (0.5772156649015329, -0.07281584548367672, -0.009690363192872318)
ZETA_3 = 1.2020569031595942

# Below this modulus polylogarithms are summed directly; above it the
# expansion in ln z is used (|ln z| <= sqrt(ln(2)^2 + pi^2) < 2 pi there).
DIRECT_RADIUS = 0.5
LOG_SERIES_TERMS = 64

# Orders closer than this to an integer m >= 1 take the pole-free form of
# the Gamma(1-s) and zeta(s-m+1) pair.
NEAR_INTEGER = 1e-4


def hurwitz_zeta(s: float, nu: float) -> float:
    """
    Hurwitz zeta function zeta(s, nu) = sum_{n>=0} (n + nu)^(-s), continued
    analytically in s.

    For s >= -1/2, Euler-Maclaurin: the first 16 terms are summed
    explicitly, the rest is the integral term, half the boundary term and
    Bernoulli corrections through B_12. Further left the head sum and the
    integral term cancel down to a value many orders smaller, so Hurwitz's
    formula is used instead:

        zeta(s, nu) = 2 Gamma(1-s) (2 pi)^(s-1) Re[e^{i pi (1-s)/2} Li_{1-s}(e^{-2 pi i nu})]

    Relative accuracy is better than 1e-10 on s in [-5, 10] away from the
    zeros of nu -> zeta(s, nu).
    """
    if abs(s - 1.0) < POLE_TOL:
        raise PoleError(f"Hurwitz zeta has a pole at s = 1 (got s = {s})")
    if not 0.0 < nu <= 1.0:
        raise DomainError(f"Hurwitz zeta parameter must lie in (0, 1], got {nu}")

    if s < -0.5:
        if nu == 1.0:
            return riemann_zeta(s)
        return _hurwitz_fourier(s, nu)

    n_terms = EULER_MACLAURIN_TERMS
    head = math.fsum((n + nu) ** -s for n in range(n_terms))

    a = n_terms + nu
    tail = a ** (1.0 - s) / (s - 1.0) + 0.5 * a**-s

    rising = s  # s (s + 1) ... (s + 2k - 2)
    power = a ** (-s - 1.0)
    factorial = 2.0  # (2k)!
    for k, b2k in enumerate(BERNOULLI_EVEN, start=1):
        tail += b2k / factorial * rising * power
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= a * a
        factorial *= (2 * k + 1) * (2 * k + 2)

    return head + tail


def _hurwitz_fourier(s: float, nu: float) -> float:
    order = 1.0 - s
    # argument of e^{-2 pi i nu} reduced to (-pi, pi]
    angle = -2.0 * math.pi * nu if nu <= 0.5 else 2.0 * math.pi * (1.0 - nu)
    periodic = complex(_log_series(order, np.array([1j * angle]))[0])
    rotation = cmath.exp(0.5j * math.pi * order)
    return 2.0 * math.gamma(order) * (2.0 * math.pi) ** -order * (rotation * periodic).real


def hurwitz_zeta_hasse(s: float, nu: float) -> float:
    """
    Independent evaluation of zeta(s, nu) through Hasse's globally convergent
    series

        zeta(s, a) = 1/(s-1) sum_{n>=0} 1/(n+1) sum_{k=0}^n (-1)^k C(n,k) (a+k)^(1-s).

    The outer series decays like n^(-a), so it is applied at a = nu + 16 after
    the first 16 terms of the Dirichlet sum are added explicitly. Summation
    stops once two consecutive outer terms fall below 1e-14 relative.
    """
    if abs(s - 1.0) < POLE_TOL:
        raise PoleError(f"Hurwitz zeta has a pole at s = 1 (got s = {s})")
    if nu <= 0.0:
        raise DomainError(f"Hurwitz zeta parameter must be positive, got {nu}")

    shift = EULER_MACLAURIN_TERMS
    with mpmath.workdps(40):
        mp_s = mpmath.mpf(s)
        mp_nu = mpmath.mpf(nu)
        head = mpmath.fsum((mp_nu + n) ** -mp_s for n in range(shift))
        base = mp_nu + shift
        exponent = 1 - mp_s
        growth_digits = max(0.0, 1.0 - s) * math.log10(nu + shift + HASSE_MAX_TERMS)

        total = mpmath.mpf(0)
        quiet = 0
        for n in range(HASSE_MAX_TERMS):
            # the alternating sum loses about n*log10(2) digits to cancellation
            dps = 30 + int(0.31 * n) + int(growth_digits)
            with mpmath.workdps(dps):
                inner = mpmath.fsum(
                    (-1) ** k * math.comb(n, k) * (base + k) ** exponent
                    for k in range(n + 1)
                )
                term = inner / (n + 1)
            total += term
            if abs(term) <= HASSE_TOL * abs(total):
                quiet += 1
                if quiet == 2:
                    break
            else:
                quiet = 0
        else:
            raise ConvergenceError(
                f"Hasse series did not converge in {HASSE_MAX_TERMS} terms",
            )

        value = head + total / (mp_s - 1)
    logger.debug("Hasse series converged", {"s": s, "nu": nu, "terms": n + 1})
    return float(value)


def _sinpi(x: float) -> float:
    """sin(pi x) with the reduction done on x, so zeros at the integers are exact."""
    quarter = round(2.0 * x)
    t = math.pi * (x - 0.5 * quarter)
    return (math.sin(t), math.cos(t), -math.sin(t), -math.cos(t))[quarter % 4]


def riemann_zeta(x: float) -> float:
    """Riemann zeta on the real line (x != 1), via reflection below x = -1/2."""
    if x >= -0.5:
        return hurwitz_zeta(x, 1.0)
    if x == math.floor(x) and int(x) % 2 == 0:
        return 0.0
    return (
        2.0**x
        * math.pi ** (x - 1.0)
        * _sinpi(0.5 * x)
        * math.gamma(1.0 - x)
        * hurwitz_zeta(1.0 - x, 1.0)
    )


def gamma_real(x: float) -> float:
    """Gamma function for real 0 < x <= 171 (math.gamma with the domain checked)."""
    if x <= 0.0:
        raise DomainError(f"gamma_real needs x > 0, got {x}")
    if x > 171.0:
        raise DomainError(f"gamma_real overflows for x = {x}")
    return math.gamma(x)


def principal_root(w: complex, p: float) -> complex:
    """
    p-th root of w on the principal branch, arg w taken in (-pi, pi].

    The result has argument in (-pi/p, pi/p].
    """
    w = complex(w)
    if w == 0:
        raise DomainError("principal_root is undefined at w = 0")
    if p <= 0:
        raise DomainError(f"root order must be positive, got {p}")
    arg = cmath.phase(w)
    if arg == -math.pi:
        arg = math.pi
    return cmath.exp(complex(math.log(abs(w)) / p, arg / p))


def principal_root_array(w: np.ndarray, p: float) -> np.ndarray:
    """Vectorized principal_root; zeros map to zero."""
    w = np.asarray(w, dtype=complex)
    arg = np.angle(w)
    arg = np.where(arg == -np.pi, np.pi, arg)
    with np.errstate(divide="ignore"):
        log_mod = np.log(np.abs(w))
    out = np.exp((log_mod + 1j * arg) / p)
    return np.where(w == 0, 0j, out)


def _check_disk(r: float, s: float) -> None:
    if r > DISK_CUTOFF:
        raise DomainError(
            f"|z| = {r} is outside the evaluation disk |z| <= {DISK_CUTOFF}",
        )
    if s <= 0:
        raise DomainError(f"order s must be positive, got {s}")


def polylog(s: float, z: complex) -> complex:
    """Li_s(z) = sum_{n>=1} z^n / n^s for real s > 0 and |z| <= 1 - 1e-6."""
    z = complex(z)
    r = abs(z)
    _check_disk(r, s)
    if r == 0.0:
        return 0j
    if r <= DIRECT_RADIUS:
        return polylog_direct(s, z)
    value = complex(_polylog_log_series(s, np.array([z]))[0])
    if z.imag == 0.0:
        # real on (-1, 1)
        return complex(value.real, 0.0)
    return value


def polylog_direct(s: float, z: complex) -> complex:
    """
    Li_s(z) by direct summation, truncated once the geometric tail bound
    |z|^(N+1) / ((1 - |z|) (N+1)^s) drops below 1e-13.
    """
    z = complex(z)
    r = abs(z)
    _check_disk(r, s)
    total = 0j
    power = 1 + 0j
    n = 0
    while True:
        n += 1
        power *= z
        total += power / n**s
        if r ** (n + 1) / ((1.0 - r) * (n + 1) ** s) < SERIES_TOL:
            return total


def polylog_array(s: float, z: np.ndarray) -> np.ndarray:
    """Vectorized polylog over an array of points."""
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if r.size and float(r.max()) > DISK_CUTOFF:
        raise DomainError(f"points outside the evaluation disk |z| <= {DISK_CUTOFF}")
    if s <= 0:
        raise DomainError(f"order s must be positive, got {s}")

    out = np.zeros(z.shape, dtype=complex)
    inner = (r > 0) & (r <= DIRECT_RADIUS)
    outer = r > DIRECT_RADIUS
    if inner.any():
        out[inner] = _polylog_direct_array(s, z[inner])
    if outer.any():
        out[outer] = _polylog_log_series(s, z[outer])
        real = outer & (z.imag == 0.0)
        out[real] = out[real].real
    return out


def _polylog_direct_array(s: float, z: np.ndarray) -> np.ndarray:
    r = float(np.abs(z).max())
    total = np.zeros(z.shape, dtype=complex)
    power = np.ones(z.shape, dtype=complex)
    n = 0
    while True:
        n += 1
        power = power * z
        total += power / n**s
        if r ** (n + 1) / ((1.0 - r) * (n + 1) ** s) < SERIES_TOL:
            return total


@lru_cache(maxsize=256)
def _log_series_coeffs(s: float) -> tuple[tuple[float, ...], int | None]:
    """zeta(s - k) / k! for k < LOG_SERIES_TERMS; the pole index when s is near an integer."""
    m = round(s)
    singular = m - 1 if m >= 1 and abs(s - m) < NEAR_INTEGER else None
    coeffs = []
    factorial = 1.0
    for k in range(LOG_SERIES_TERMS):
        if k > 0:
            factorial *= k
        if k == singular:
            coeffs.append(0.0)
        else:
            coeffs.append(riemann_zeta(s - k) / factorial)
    return tuple(coeffs), singular


def _polylog_log_series(s: float, z: np.ndarray) -> np.ndarray:
    return _log_series(s, np.log(z))


def _log_series(s: float, mu: np.ndarray) -> np.ndarray:
    """
    Li_s(e^mu) = Gamma(1-s) (-mu)^(s-1) + sum_k zeta(s-k) mu^k / k!,  |mu| < 2 pi.

    When s is within NEAR_INTEGER of an integer m >= 1 the Gamma term and the
    k = m-1 term carry opposite poles; _pole_pair evaluates their sum directly.
    """
    coeffs, singular = _log_series_coeffs(s)

    acc = np.zeros(mu.shape, dtype=complex)
    for c in reversed(coeffs):
        acc = acc * mu + c

    if singular is None:
        acc += math.gamma(1.0 - s) * np.power(-mu, s - 1.0)
    else:
        acc += _pole_pair(s, singular, mu)
    return acc


def _pole_pair(s: float, n: int, mu: np.ndarray) -> np.ndarray:
    """
    Gamma(1-s) (-mu)^(s-1) + zeta(s-n) mu^n / n!  for s = n + 1 + d, |d| < NEAR_INTEGER.

    With g(d) = d zeta(1+d) and f(d) = n! pi d / (sin(pi d) Gamma(n+1+d)) the
    pair equals mu^n / n! * [(g - f) / d - f (e^{d ln(-mu)} - 1) / d]; g and f
    are expanded to third order in d, which leaves an error of order d^3.
    At d = 0 this is the harmonic-number form mu^n / n! (H_n - ln(-mu)).
    """
    d = s - (n + 1)
    psi = math.fsum(1.0 / i for i in range(1, n + 1)) - STIELTJES[0]
    psi1 = math.pi**2 / 6 - math.fsum(1.0 / i**2 for i in range(1, n + 1))
    psi2 = -2.0 * ZETA_3 + 2.0 * math.fsum(1.0 / i**3 for i in range(1, n + 1))

    # ln f = a1 d + a2 d^2 + a3 d^3;  g = 1 + g1 d + g2 d^2 + g3 d^3
    a1 = -psi
    a2 = math.pi**2 / 6 - psi1 / 2
    a3 = -psi2 / 6
    g1, g2, g3 = STIELTJES[0], -STIELTJES[1], STIELTJES[2] / 2

    head = (g1 - a1) + (g2 - a2 - a1**2 / 2) * d + (g3 - a3 - a1 * a2 - a1**3 / 6) * d * d
    f = 1.0 + a1 * d + (a2 + a1**2 / 2) * d * d + (a3 + a1 * a2 + a1**3 / 6) * d**3

    log_neg = np.log(-mu)
    spread = log_neg if d == 0 else np.expm1(d * log_neg) / d
    return mu**n / math.factorial(n) * (head - f * spread)


def lerch_phi(z: complex, s: float, nu: float) -> complex:
    """
    Lerch transcendent Phi(z, s, nu) = sum_{n>=0} z^n / (n + nu)^s by direct
    summation, with the polylog tail policy.
    """
    z = complex(z)
    r = abs(z)
    _check_disk(r, s)
    if not 0.0 < nu <= 1.0:
        raise DomainError(f"Lerch parameter must lie in (0, 1], got {nu}")
    total = nu**-s + 0j
    if r == 0.0:
        return total
    power = 1 + 0j
    n = 0
    while True:
        n += 1
        power *= z
        total += power / (n + nu) ** s
        if r ** (n + 1) / ((1.0 - r) * (n + nu + 1) ** s) < SERIES_TOL:
            return total
