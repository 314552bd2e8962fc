"""Numerical tolerances and defaults shared across modules."""

# adaptive Dormand-Prince integrator; the right-hand side is only Holder
# continuous where u' = 0, and energy drift there is roughly 1e4 * tol
ODE_RTOL = 1e-14
ODE_ATOL = 1e-14
# looser tolerance for the zero-count sweep that brackets mu
ODE_SWEEP_TOL = 1e-9
ODE_MAX_STEPS = 2_000_000

# radial shooting starts at RADIAL_START * radius to avoid r = 0
RADIAL_START = 1e-6

# reference shots give up after this many units of arc length per requested zero
SHOOT_HORIZON_PER_ZERO = 1e3

# zeros of u are bisected until |u| falls below this (or the bracket is exhausted)
ZERO_TOL = 1e-10

# uniform profile resolution for 1D eigenfunctions
PROFILE_POINTS = 2048

# oracle (discrete minimization)
ORACLE_MIN_NODES = 64
ORACLE_MAX_ITER = 200_000
ORACLE_GRAD_TOL = 1e-8
ORACLE_STALL_WINDOW = 50
ORACLE_STALL_TOL = 1e-12

# calculus
NORMALIZATION_TOL = 1e-12
# relative tolerance for merging enumerated values; 0 merges only bit-identical values
DEDUP_RTOL = 0.0
ENUMERATION_BUDGET = 10_000_000
MAX_SIGN_VARIANTS = 20

# environment variable read by the CLI for worker threads
THREADS_ENV = "PQSPEC_THREADS"
# set to 1 to force the pure-Python kernel
PURE_PYTHON_ENV = "PQSPEC_PURE_PYTHON"


def worker_count() -> int:
    """Worker threads from ``PQSPEC_THREADS`` (default 1)."""
    import os

    from .errors import ConfigError

    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n
