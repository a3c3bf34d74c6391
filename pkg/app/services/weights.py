"""
Weight sequences a_m and the Dirichlet-series data the asymptotics need.

Every family is a periodic pattern chi(m) (period P0) times a power m^t, so
the twisted series

    D_{h,k}(s) = sum_m e^{2 pi i h m / k} a_m m^{-s}

reduces to a finite sum of Hurwitz zeta values over residues modulo
P = lcm(k, P0). The pole sits at s0 = 1 + t with residue
P^{-1} sum_r chi(r) e^{2 pi i h r / k}.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import AbstractSet, Union

import numpy as np

from app.config import POLE_TOL, logger
from app.errors import ConfigError, PoleError, UnsupportedFamily
from app.services.special_functions import hurwitz_zeta

MAX_HURWITZ_PERIOD = 100_000
DEFAULT_SIGMA0 = -0.99
DERIV_STEPS = (1e-4, 5e-5)


@dataclass(frozen=True)
class Constant:
    """a_m = 1."""

    period = 1
    shift = 0.0

    def pattern(self, r: int) -> float:
        return 1.0

    def describe(self) -> str:
        return "constant"


@dataclass(frozen=True)
class Power:
    """a_m = m^(s0 - 1)."""

    s0: float
    period = 1

    def __post_init__(self):
        if not (math.isfinite(self.s0) and self.s0 > 0):
            raise ConfigError(f"power family needs s0 > 0, got {self.s0}")

    @property
    def shift(self) -> float:
        return self.s0 - 1.0

    def pattern(self, r: int) -> float:
        return 1.0

    def describe(self) -> str:
        return f"power:s0={self.s0!r}"


@dataclass(frozen=True)
class ArithmeticProgression:
    """a_m = 1 if m = a mod j, else 0."""

    a: int
    j: int
    shift = 0.0

    def __post_init__(self):
        if self.j <= 1:
            raise ConfigError(f"arithmetic progression needs j > 1, got {self.j}")
        if self.a < 1:
            raise ConfigError(f"arithmetic progression needs a >= 1, got {self.a}")
        if math.gcd(self.a, self.j) != 1:
            raise ConfigError(f"gcd(a, j) must be 1, got a={self.a}, j={self.j}")

    @property
    def period(self) -> int:
        return self.j

    def pattern(self, r: int) -> float:
        return 1.0 if (r - self.a) % self.j == 0 else 0.0

    def describe(self) -> str:
        return f"ap:a={self.a},j={self.j}"


@dataclass(frozen=True)
class Periodic:
    """a_m = weights[m mod j] with j = len(weights)."""

    weights: tuple[float, ...]
    shift = 0.0

    def __post_init__(self):
        if not self.weights:
            raise ConfigError("periodic family needs at least one weight")
        if not all(math.isfinite(w) for w in self.weights):
            raise ConfigError("periodic weights must be finite")
        if not any(self.weights):
            raise ConfigError("periodic weights are all zero; s0 is undefined")

    @property
    def period(self) -> int:
        return len(self.weights)

    def pattern(self, r: int) -> float:
        return self.weights[r % len(self.weights)]

    def describe(self) -> str:
        return "periodic:" + ",".join(repr(w) for w in self.weights)


@dataclass(frozen=True)
class Scaled:
    """a_m = base(m) * m^(s - 1)."""

    base: "Family"
    s: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0):
            raise ConfigError(f"scaled family needs s > 0, got {self.s}")
        if 1.0 + self.shift <= 0:
            raise ConfigError("scaled family has a non-positive pole location")

    @property
    def period(self) -> int:
        return self.base.period

    @property
    def shift(self) -> float:
        return self.base.shift + self.s - 1.0

    def pattern(self, r: int) -> float:
        return self.base.pattern(r)

    def describe(self) -> str:
        return f"scaled:base={self.base.describe()};s={self.s!r}"


Family = Union[Constant, Power, ArithmeticProgression, Periodic, Scaled]


@dataclass(frozen=True)
class WeightSequence:
    """A weight family with its admissibility data (s0, sigma0)."""

    family: Family
    sigma0: float = DEFAULT_SIGMA0

    def __post_init__(self):
        if not -1.0 < self.sigma0 < 0.0:
            raise ConfigError(f"sigma0 must lie in (-1, 0), got {self.sigma0}")

    @property
    def s0(self) -> float:
        return 1.0 + self.family.shift

    @property
    def period(self) -> int:
        return self.family.period

    def describe(self) -> str:
        text = self.family.describe()
        if self.sigma0 == DEFAULT_SIGMA0:
            return text
        if isinstance(self.family, Constant):
            sep = ":"
        elif isinstance(self.family, (Scaled, Periodic)):
            sep = ";"
        else:
            sep = ","
        return f"{text}{sep}sigma0={self.sigma0!r}"

    def integer_weights(self) -> bool:
        """True when every a_m is a nonnegative integer."""
        t = self.family.shift
        if t < 0 or t != int(t):
            return False
        return all(
            w >= 0 and float(w).is_integer()
            for w in (self.family.pattern(r) for r in range(self.period))
        )

    def rational_weights(self) -> bool:
        t = self.family.shift
        return t >= 0 and t == int(t)


@dataclass(frozen=True)
class DirichletData:
    """D_{h,k}(0), A_{h,k} for h = 1..k and their discrete Fourier coefficients."""

    k: int
    values_at_zero: tuple[complex, ...]
    residues: tuple[complex, ...]
    b: tuple[complex, ...]
    c: tuple[complex, ...] = field(repr=False)

    def value(self, h: int) -> complex:
        return self.values_at_zero[(h - 1) % self.k]

    def residue(self, h: int) -> complex:
        return self.residues[(h - 1) % self.k]

    def reconstruct_value(self, h: int) -> complex:
        return sum(_unit(h * j, self.k) * bj for j, bj in enumerate(self.b))

    def reconstruct_residue(self, h: int) -> complex:
        return sum(_unit(h * j, self.k) * cj for j, cj in enumerate(self.c))


def _unit(numerator: int, k: int) -> complex:
    """e^{2 pi i numerator / k} with the numerator reduced exactly first."""
    r = numerator % k
    if r == 0:
        return 1 + 0j
    if 2 * r == k:
        return -1 + 0j
    return cmath.exp(2j * math.pi * r / k)


def _hurwitz_period(seq: WeightSequence, k: int) -> int:
    period = math.lcm(k, seq.period)
    if period > MAX_HURWITZ_PERIOD:
        raise UnsupportedFamily(
            f"period lcm({k}, {seq.period}) = {period} is too large for the Hurwitz reduction",
        )
    return period


def weight_at(seq: WeightSequence, m: int) -> float:
    """a_m for m >= 1."""
    if m < 1:
        raise ConfigError(f"weights are indexed from m = 1, got {m}")
    t = seq.family.shift
    chi = seq.family.pattern(m)
    if chi == 0.0:
        return 0.0
    return chi * float(m) ** t if t else chi


def exact_weight(seq: WeightSequence, m: int) -> Fraction:
    """a_m as an exact rational; only for families with a nonnegative integer shift."""
    if not seq.rational_weights():
        raise UnsupportedFamily(f"{seq.describe()} has irrational weights")
    chi = Fraction(seq.family.pattern(m))
    return chi * m ** int(seq.family.shift)


def dirichlet_value(seq: WeightSequence, h: int, k: int, s: float) -> complex:
    """
    Continuation of D_{h,k}(s) through the Hurwitz decomposition

        sum_{r=1}^{P} a(r) e^{2 pi i h r / k} P^{-(s - t)} zeta(s - t, r / P).
    """
    if k < 1:
        raise ConfigError(f"k must be a positive integer, got {k}")
    if abs(s - seq.s0) < POLE_TOL:
        raise PoleError(f"D_(h,k)(s) has a pole at s0 = {seq.s0}")

    period = _hurwitz_period(seq, k)
    t = seq.family.shift
    sigma = s - t
    scale = float(period) ** -sigma
    total = 0j
    for r in range(1, period + 1):
        chi = seq.family.pattern(r)
        if chi == 0.0:
            continue
        total += chi * _unit(h * r, k) * hurwitz_zeta(sigma, r / period)
    return total * scale


def dirichlet_residue(seq: WeightSequence, h: int, k: int) -> complex:
    """A_{h,k}: each zeta(s - t, r/P) has residue 1, scaled by P^{-1}."""
    if k < 1:
        raise ConfigError(f"k must be a positive integer, got {k}")
    period = _hurwitz_period(seq, k)
    total = 0j
    for r in range(1, period + 1):
        chi = seq.family.pattern(r)
        if chi:
            total += chi * _unit(h * r, k)
    return total / period


@lru_cache(maxsize=512)
def _fourier_coeffs(family: Family, k: int) -> DirichletData:
    seq = WeightSequence(family)
    values = np.array([dirichlet_value(seq, h, k, 0.0) for h in range(1, k + 1)])
    residues = np.array([dirichlet_residue(seq, h, k) for h in range(1, k + 1)])

    # index 0 of the transform is h = k
    b = np.fft.fft(np.roll(values, 1)) / k
    c = np.fft.fft(np.roll(residues, 1)) / k

    logger.debug("Dirichlet data computed", {"family": family.describe(), "k": k})
    return DirichletData(
        k=k,
        values_at_zero=tuple(complex(v) for v in values),
        residues=tuple(complex(a) for a in residues),
        b=tuple(complex(v) for v in b),
        c=tuple(complex(v) for v in c),
    )


def fourier_coeffs(seq: WeightSequence, k: int) -> DirichletData:
    """
    DirichletData for (seq, k), with b(j) = (1/k) sum_h e^{-2 pi i h j / k} D_{h,k}(0)
    and c(j) likewise from A_{h,k}. Cached per (family, k); the cache is
    write-once and safe for concurrent readers.
    """
    if k < 1:
        raise ConfigError(f"k must be a positive integer, got {k}")
    return _fourier_coeffs(seq.family, k)


def dirichlet_deriv_zero(seq: WeightSequence) -> float:
    """D'(0) for h = k = 1: central differences at two steps, Richardson-combined."""
    big, small = DERIV_STEPS

    def central(eps: float) -> float:
        plus = dirichlet_value(seq, 1, 1, eps).real
        minus = dirichlet_value(seq, 1, 1, -eps).real
        return (plus - minus) / (2.0 * eps)

    ratio = (big / small) ** 2
    return (ratio * central(small) - central(big)) / (ratio - 1.0)


def parse_family(text: str) -> WeightSequence:
    """
    Parse the family grammar:

        constant | power:s0=2.0 | ap:a=1,j=3 | periodic:1,0,2
        | scaled:base=<family>;s=1.5

    Every form accepts an optional sigma0 (",sigma0=-0.5" after key=value
    lists, ";sigma0=-0.5" after periodic weights or scaled parts,
    "constant:sigma0=-0.5").
    """
    cleaned = text.strip()
    name, _, rest = cleaned.partition(":")
    name = name.strip().lower()
    try:
        if name == "constant":
            params = _key_values(rest, allowed={"sigma0"})
            return _with_sigma0(Constant(), params)
        if name == "power":
            params = _key_values(rest, allowed={"s0", "sigma0"}, required={"s0"})
            return _with_sigma0(Power(float(params["s0"])), params)
        if name == "ap":
            params = _key_values(rest, allowed={"a", "j", "sigma0"}, required={"a", "j"})
            return _with_sigma0(
                ArithmeticProgression(_as_int(params["a"]), _as_int(params["j"])),
                params,
            )
        if name == "periodic":
            weights_text, params = _split_trailing(rest, {"sigma0"})
            weights = tuple(float(w) for w in weights_text.split(",") if w.strip())
            return _with_sigma0(Periodic(weights), params)
        if name == "scaled":
            base_text, params = _split_trailing(rest, {"s", "sigma0"})
            if "s" not in params:
                raise ConfigError("scaled family needs s=<shift>")
            if not base_text.startswith("base="):
                raise ConfigError("scaled family needs base=<family>")
            base = parse_family(base_text[len("base=") :])
            return _with_sigma0(Scaled(base.family, float(params["s"])), params)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Cannot parse family {text!r}: {e}") from e
    raise ConfigError(f"Unknown weight family {name!r} in {text!r}")


def _as_int(value: str) -> int:
    number = float(value)
    if not number.is_integer():
        raise ConfigError(f"expected an integer, got {value!r}")
    return int(number)


def _key_values(
    text: str, allowed: AbstractSet[str], required: AbstractSet[str] = frozenset()
) -> dict[str, str]:
    params: dict[str, str] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"expected key=value, got {part!r}")
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}; allowed: {sorted(allowed)}")
        if key in params:
            raise ConfigError(f"duplicate key {key!r}")
        params[key] = value.strip()
    missing = required - params.keys()
    if missing:
        raise ConfigError(f"missing keys: {sorted(missing)}")
    return params


def _split_trailing(text: str, keys: set[str]) -> tuple[str, dict[str, str]]:
    """Peel `;key=value` parts off the end of `text` while the keys are new."""
    parts = text.split(";")
    params: dict[str, str] = {}
    while len(parts) > 1:
        key, sep, value = parts[-1].partition("=")
        key = key.strip()
        if not sep or key not in keys or key in params:
            break
        params[key] = value.strip()
        parts.pop()
    return ";".join(parts).strip(), params


def _with_sigma0(family: Family, params: dict[str, str]) -> WeightSequence:
    if "sigma0" in params:
        return WeightSequence(family, float(params["sigma0"]))
    return WeightSequence(family)
