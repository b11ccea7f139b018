"""Numerical defaults shared across the library."""

# Series truncation
DEFAULT_TAIL_TOLERANCE = 1e-14
MAX_SERIES_TERMS = 2_000_000
SERIES_CHUNK = 256  # First chunk length when growing a truncated series
MIN_TAIL_TOLERANCE = 1e-300
TAIL_TOLERANCE_STEP = 1e-4  # Tightening factor when the amplitude tail is too large

# Special functions
LOG_FACTORIAL_CAPACITY = 200_000
HYP2F1_RTOL = 1e-12
INTEGER_ATOL = 1e-12  # Distance to an integer still treated as integral

# Cross-checks between independent routes
ROUTE_RTOL = 1e-10
MOMENT_RTOL = 1e-8
MOMENT_ATOL = 1e-12
NORM_ATOL = 1e-12

# Observables
VACUUM_MEAN_FLOOR = 1e-300
POISSONIAN_ATOL = 1e-12
SQUEEZING_THRESHOLD = 0.25  # Vacuum quadrature variance
HEISENBERG_BOUND = 1.0 / 16.0
HEISENBERG_ATOL = 1e-12
AMPLITUDE_TAIL_LIMIT = 1e-10

# Sweeps
ENBS_ETA_CEILING = 1.0 - 1e-6
