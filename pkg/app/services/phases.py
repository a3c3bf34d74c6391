"""
Growth exponents L_{h,k}(z) of the major arcs and the phase diagram they induce.

    Phi_{h,k}(z) = Gamma(s0 + 1) sum_{j in Z_k} c(j) Li_{s0+1}(e^{2 pi i h j / k} z)
    L_{h,k}(z)   = principal (s0 + 1)-th root of Phi_{h,k}(z)

A point z of the punctured disk belongs to the phase of the arcs whose
Re L is maximal; ties within a relative tolerance form the major-arc set.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from app.config import (
    BOUNDARY_FACTOR,
    DISK_CUTOFF,
    K_MAX,
    THREADS,
    TIE_TOL,
    ZERO_TOL,
    logger,
)
from app.errors import ConfigError, DomainError, PolyMeinardusError
from app.schemas import Window
from app.services.special_functions import (
    gamma_real,
    polylog,
    polylog_array,
    principal_root,
    principal_root_array,
)
from app.services.weights import WeightSequence, fourier_coeffs
from app.utils.helpers import chunked

CROSSOVER_INTERVAL = (-1.0 + 1e-6, -1e-6)
CROSSOVER_TOL = 1e-12


@dataclass(frozen=True)
class ArcLabel:
    """The root of unity e^{2 pi i h / k}, gcd(h, k) = 1, 1 <= h <= k."""

    h: int
    k: int

    def __post_init__(self):
        if not (1 <= self.h <= self.k) or math.gcd(self.h, self.k) != 1:
            raise ConfigError(f"({self.h}, {self.k}) is not a reduced arc label")

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.k, self.h)

    def conjugate(self) -> "ArcLabel":
        """Label of the mirrored arc; real families map phases onto these under z -> conj z."""
        return ArcLabel(self.k - self.h if self.h < self.k else self.k, self.k)

    def __str__(self) -> str:
        return f"({self.h},{self.k})"


@dataclass(frozen=True)
class PhaseClass:
    z: complex
    dominant: ArcLabel
    major_arcs: tuple[ArcLabel, ...]
    margin: float
    boundary: bool
    growth: float


@dataclass(frozen=True)
class PhaseMap:
    """Dominant labels on a pixel grid; row 0 is the top edge (largest Im z)."""

    window: Window
    width: int
    height: int
    k_max: int
    tie_tol: float
    h: np.ndarray
    k: np.ndarray
    boundary: np.ndarray

    def pixel_center(self, row: int, col: int) -> complex:
        dx = (self.window.x_max - self.window.x_min) / self.width
        dy = (self.window.y_max - self.window.y_min) / self.height
        return complex(
            self.window.x_min + (col + 0.5) * dx,
            self.window.y_max - (row + 0.5) * dy,
        )

    def label_at(self, row: int, col: int) -> Optional[ArcLabel]:
        k = int(self.k[row, col])
        if k == 0:
            return None
        return ArcLabel(int(self.h[row, col]), k)


@lru_cache(maxsize=64)
def coprime_arcs(k_max: int) -> tuple[ArcLabel, ...]:
    """All reduced labels with k <= k_max, ordered by (k, h)."""
    if k_max < 1:
        raise ConfigError(f"K_max must be at least 1, got {k_max}")
    return tuple(
        ArcLabel(h, k)
        for k in range(1, k_max + 1)
        for h in range(1, k + 1)
        if math.gcd(h, k) == 1
    )


def _check_point(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise DomainError("the phase structure is defined on the punctured disk; z = 0")
    if abs(z) > DISK_CUTOFF:
        raise DomainError(f"|z| = {abs(z)} exceeds the disk cutoff {DISK_CUTOFF}")
    return z


def _rotation(numerator: int, k: int) -> complex:
    r = numerator % k
    if r == 0:
        return 1 + 0j
    return complex(math.cos(2 * math.pi * r / k), math.sin(2 * math.pi * r / k))


def phi_hk(seq: WeightSequence, arc: ArcLabel, z: complex) -> complex:
    """Phi_{h,k}(z) = Gamma(s0+1) sum_j c(j) Li_{s0+1}(e^{2 pi i h j / k} z)."""
    z = _check_point(z)
    data = fourier_coeffs(seq, arc.k)
    order = seq.s0 + 1.0
    total = 0j
    for j, cj in enumerate(data.c):
        if abs(cj) < ZERO_TOL:
            continue
        total += cj * polylog(order, _rotation(arc.h * j, arc.k) * z)
    return gamma_real(order) * total


def L_hk(seq: WeightSequence, arc: ArcLabel, z: complex) -> complex:
    """Principal (s0+1)-th root of Phi_{h,k}(z)."""
    phi = phi_hk(seq, arc, z)
    if abs(phi) < ZERO_TOL:
        raise DomainError(f"Phi_{arc} vanishes at z = {z}; L is undefined there")
    return principal_root(phi, seq.s0 + 1.0)


def _decide(
    arcs: tuple[ArcLabel, ...], values: np.ndarray, tie_tol: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorized phase decision over columns of `values` (L_{h,k} for arcs x
    points, NaN where an arc is undefined). Returns dominant index (-1 when
    no arc is defined), major mask, margin and boundary flag.

    A point is on a boundary when an excluded arc comes within the boundary
    tolerance, or when the major set mixes arcs whose L differ (up to complex
    conjugation) by more than it: two exponents that only share their real
    part at z are distinct phases meeting there.
    """
    growth = np.where(np.isnan(values), -np.inf, values.real)
    best = growth.max(axis=0)
    defined = np.isfinite(best)
    scale = np.where(defined & (best != 0), np.abs(best), 1.0)
    major = growth >= (best - tie_tol * scale)[None, :]
    dominant = np.where(defined, np.argmax(major, axis=0), -1)

    excluded = np.where(major, -np.inf, growth).max(axis=0)
    with np.errstate(invalid="ignore"):
        margin = best - excluded
        lead = values[np.maximum(dominant, 0), np.arange(values.shape[1])]
        spread = np.minimum(np.abs(values - lead), np.abs(values - lead.conj()))
        mixed = (major & (spread > BOUNDARY_FACTOR * tie_tol * np.abs(lead))).any(axis=0)
        boundary = defined & ((margin < BOUNDARY_FACTOR * tie_tol * scale) | mixed)
    return dominant, major, margin, boundary


def classify(
    seq: WeightSequence, z: complex, k_max: int = K_MAX, tie_tol: float = TIE_TOL
) -> PhaseClass:
    """Major arcs, dominant label and boundary flag at z."""
    z = _check_point(z)
    arcs = coprime_arcs(k_max)
    values = np.full((len(arcs), 1), np.nan, dtype=complex)
    for i, arc in enumerate(arcs):
        phi = phi_hk(seq, arc, z)
        if abs(phi) < ZERO_TOL:
            continue
        values[i, 0] = principal_root(phi, seq.s0 + 1.0)

    dominant, major, margin, boundary = _decide(arcs, values, tie_tol)
    if dominant[0] < 0:
        raise DomainError(f"no arc with nonzero Phi at z = {z} for k <= {k_max}")

    return PhaseClass(
        z=z,
        dominant=arcs[int(dominant[0])],
        major_arcs=tuple(arc for arc, m in zip(arcs, major[:, 0]) if m),
        margin=float(margin[0]),
        boundary=bool(boundary[0]),
        growth=float(np.nanmax(values[:, 0].real)),
    )


def dominant_growth(seq: WeightSequence, z: complex, k_max: int = K_MAX) -> float:
    """max Re L_{h,k}(z) over k <= k_max."""
    return classify(seq, z, k_max).growth


def _exponent_array(
    seq: WeightSequence, arcs: tuple[ArcLabel, ...], z: np.ndarray
) -> np.ndarray:
    """L for every arc at every point (NaN where Phi vanishes); each rotated polylog is evaluated once."""
    order = seq.s0 + 1.0
    gamma = gamma_real(order)
    rotated: dict[Fraction, np.ndarray] = {}

    def li(numerator: int, k: int) -> np.ndarray:
        key = Fraction(numerator % k, k)
        if key not in rotated:
            rotated[key] = polylog_array(order, _rotation(numerator, k) * z)
        return rotated[key]

    values = np.full((len(arcs), z.size), np.nan, dtype=complex)
    for i, arc in enumerate(arcs):
        data = fourier_coeffs(seq, arc.k)
        phi = np.zeros(z.size, dtype=complex)
        for j, cj in enumerate(data.c):
            if abs(cj) >= ZERO_TOL:
                phi += cj * li(arc.h * j, arc.k)
        phi *= gamma
        valid = np.abs(phi) >= ZERO_TOL
        values[i, valid] = principal_root_array(phi[valid], order)
    return values


def _raster_rows(
    seq: WeightSequence,
    arcs: tuple[ArcLabel, ...],
    xs: np.ndarray,
    ys: np.ndarray,
    tie_tol: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    grid = xs[None, :] + 1j * ys[:, None]
    h_out = np.zeros(grid.shape, dtype=np.int32)
    k_out = np.zeros(grid.shape, dtype=np.int32)
    b_out = np.zeros(grid.shape, dtype=bool)

    inside = (np.abs(grid) <= DISK_CUTOFF) & (grid != 0)
    points = grid[inside]
    if points.size == 0:
        return h_out, k_out, b_out

    try:
        values = _exponent_array(seq, arcs, points)
    except PolyMeinardusError as e:
        logger.warning("Vectorized rows failed, classifying pixels one by one", {"error": str(e)})
        return _raster_pixels(seq, arcs, grid, inside, tie_tol)

    dominant, _, _, boundary = _decide(arcs, values, tie_tol)
    labels_h = np.array([a.h for a in arcs] + [0], dtype=np.int32)
    labels_k = np.array([a.k for a in arcs] + [0], dtype=np.int32)
    h_out[inside] = labels_h[dominant]
    k_out[inside] = labels_k[dominant]
    b_out[inside] = boundary
    return h_out, k_out, b_out


def _raster_pixels(seq, arcs, grid, inside, tie_tol):
    h_out = np.zeros(grid.shape, dtype=np.int32)
    k_out = np.zeros(grid.shape, dtype=np.int32)
    b_out = np.zeros(grid.shape, dtype=bool)
    for row, col in zip(*np.nonzero(inside)):
        z = complex(grid[row, col])
        try:
            phase = classify(seq, z, arcs[-1].k, tie_tol)
        except PolyMeinardusError as e:
            logger.warning("Pixel left empty", {"z": str(z), "error": str(e)})
            continue
        h_out[row, col] = phase.dominant.h
        k_out[row, col] = phase.dominant.k
        b_out[row, col] = phase.boundary
    return h_out, k_out, b_out


def raster(
    seq: WeightSequence,
    window: Window,
    resolution: tuple[int, int],
    k_max: int = K_MAX,
    tie_tol: float = TIE_TOL,
    threads: int = THREADS,
) -> PhaseMap:
    """Classify every pixel center of `window`; pixels outside the disk stay empty (k = 0)."""
    width, height = resolution
    if width < 1 or height < 1:
        raise ConfigError(f"resolution must be positive, got {resolution}")
    arcs = coprime_arcs(k_max)
    for k in range(1, k_max + 1):
        fourier_coeffs(seq, k)

    dx = (window.x_max - window.x_min) / width
    dy = (window.y_max - window.y_min) / height
    xs = window.x_min + (np.arange(width) + 0.5) * dx
    ys = window.y_max - (np.arange(height) + 0.5) * dy

    row_blocks = list(chunked(range(height), max(1, threads) * 4))
    logger.info(
        "Rasterizing phase map",
        {"family": seq.describe(), "width": width, "height": height, "k_max": k_max},
    )
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(
            pool.map(
                lambda rows: _raster_rows(seq, arcs, xs, ys[rows.start : rows.stop], tie_tol),
                row_blocks,
            )
        )

    return PhaseMap(
        window=window,
        width=width,
        height=height,
        k_max=k_max,
        tie_tol=tie_tol,
        h=np.vstack([r[0] for r in results]),
        k=np.vstack([r[1] for r in results]),
        boundary=np.vstack([r[2] for r in results]),
    )


def phase_counts(phase_map: PhaseMap) -> dict[ArcLabel, int]:
    """Pixel count per dominant label (pixels outside the disk excluded)."""
    counts: dict[ArcLabel, int] = {}
    labelled = phase_map.k > 0
    pairs, sizes = np.unique(
        np.stack([phase_map.h[labelled], phase_map.k[labelled]], axis=1),
        axis=0,
        return_counts=True,
    )
    for (h, k), size in zip(pairs, sizes):
        counts[ArcLabel(int(h), int(k))] = int(size)
    return dict(sorted(counts.items(), key=lambda item: item[0].sort_key))


def phase_areas(phase_map: PhaseMap) -> dict[ArcLabel, float]:
    """Fraction of the labelled (in-disk) pixels carried by each dominant label."""
    counts = phase_counts(phase_map)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {label: size / total for label, size in counts.items()}


def crossover(seq: WeightSequence) -> float:
    """
    The point x* in (-1, 0) where Re L_{1,1} and Re L_{1,2} cross on the
    negative axis, by bisection. Returns 0.0 when (1,2) wins on the whole
    interval and -1.0 when (1,1) does.
    """
    first, second = ArcLabel(1, 1), ArcLabel(1, 2)

    def gap(x: float) -> float:
        return L_hk(seq, first, x).real - L_hk(seq, second, x).real

    lo, hi = CROSSOVER_INTERVAL
    gap_lo, gap_hi = gap(lo), gap(hi)
    if gap_lo <= 0 and gap_hi <= 0:
        return 0.0
    if gap_lo > 0 and gap_hi > 0:
        return -1.0

    while hi - lo > CROSSOVER_TOL:
        mid = 0.5 * (lo + hi)
        if (gap(mid) > 0) == (gap_hi > 0):
            hi = mid
        else:
            lo = mid
    x_star = 0.5 * (lo + hi)
    logger.debug("Crossover located", {"family": seq.describe(), "x_star": x_star})
    return x_star
