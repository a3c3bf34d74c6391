import os
import logging

from app.utils.logger import get_logger

# Optional environment variables with defaults
LOG_LEVEL = os.environ.get("POLYMEINARDUS_LOG_LEVEL", "WARNING").upper()

logger = get_logger(
    "polymeinardus", log_level=getattr(logging, LOG_LEVEL, logging.WARNING)
)

# Phase classification
K_MAX = int(os.environ.get("POLYMEINARDUS_K_MAX", "10"))
TIE_TOL = float(os.environ.get("POLYMEINARDUS_TIE_TOL", "1e-9"))
BOUNDARY_FACTOR = 10.0  # boundary tolerance = BOUNDARY_FACTOR * tie_tol

# Asymptotic estimator
OSC_TOL = float(os.environ.get("POLYMEINARDUS_OSC_TOL", "1e-8"))
OSC_BAND_FACTOR = 10.0  # Phi within this many osc_tol of the negative axis is ambiguous

# Worker pool for raster and compare
THREADS = int(os.environ.get("POLYMEINARDUS_THREADS", str(os.cpu_count() or 1)))

# Numerical constants for the special functions
DISK_CUTOFF = 1.0 - 1e-6  # polylog / Lerch domain: |z| <= DISK_CUTOFF
SERIES_TOL = 1e-13  # tail bound for direct polylog / Lerch / log-product sums
POLE_TOL = 1e-12  # |s - s0| below this is a pole
ZERO_TOL = 1e-14  # Phi or b(j) below this counts as zero
EULER_MACLAURIN_TERMS = 16
HASSE_TOL = 1e-14
HASSE_MAX_TERMS = 400

# Contour extraction
CONTOUR_MIN_POINTS = 256
CONTOUR_AGREEMENT = 1e-9
CONTOUR_MAX_DOUBLINGS = 8
CONTOUR_MAX_FACTORS = 2_000_000

logger.debug(
    "Configuration loaded",
    {"k_max": K_MAX, "tie_tol": TIE_TOL, "osc_tol": OSC_TOL, "threads": THREADS},
)
