"""Shooting solvers for intervals and balls.

The eigenvalue equation on one component reduces to the ODE

    (x^(N-1) w)' = -mu x^(N-1) |u|^(q-2) u,   w = |u'|^(p-2) u',

and an eigenpair is read off as ``lambda = mu * ||u||_q^(q-p)``.

Two routes are provided for intervals. :func:`interval_eigenvalue` runs one
reference trajectory (mu = 1, u(0) = 0, u'(0) = 1) and uses the rescaling
``u -> A u(B x)`` with ``A^(p-q) B^p = 1`` to move its k-th zero to L.
:func:`interval_eigenvalue_bvp` instead shoots on [0, L] directly and
bisects in mu, the same way :func:`ball_eigenvalue_radial` does.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from . import config, kernel
from .core import ComponentDomain, EigenPair, Exponents, sphere_area
from .errors import BracketFailure, InvalidDomain, NoZeroFound, StepFailure

LINE = "line"
RADIAL = "radial"


@dataclass(frozen=True, eq=False)
class ShootingSolution:
    """A trajectory of the shooting ODE with its zeros located.

    ``segment_q_norms[j]`` is the integral of ``x^(N-1) |u|^q`` over the j-th
    nodal segment (the q-th power of the segment's radial L^q norm, without
    the sphere-area factor).
    """

    exponents: Exponents
    geometry: str
    dim: int
    mu: float
    grid: np.ndarray
    u: np.ndarray
    w: np.ndarray
    zeros: np.ndarray
    segment_q_norms: np.ndarray
    dense: kernel.DenseSolution = field(repr=False)

    def q_integral(self, x):
        """Running integral of ``x^(N-1) |u|^q`` from the start point."""
        return self.dense(x, 2)

    def energy(self) -> np.ndarray:
        """``(p-1)/p |u'|^p + mu |u|^q / q`` at the accepted steps (conserved on the line)."""
        p, q = self.exponents.p, self.exponents.q
        du_p = np.abs(self.w) ** (p / (p - 1.0))
        return (p - 1.0) / p * du_p + self.mu * np.abs(self.u) ** q / q


def _start(exponents: Exponents, geometry: str, dim: int, mu: float, x0: float):
    p, q = exponents.p, exponents.q
    if geometry == LINE:
        return 0.0, (0.0, 1.0, 0.0)
    # regular-singular start: u ~ 1 - c x^(p/(p-1)), x^(N-1) w ~ -mu x^N / N
    c = (p - 1.0) / p * (mu / dim) ** (1.0 / (p - 1.0))
    u0 = 1.0 - c * x0 ** (p / (p - 1.0))
    w0 = -mu * x0 / dim
    q0 = x0 ** dim / dim
    return x0, (u0, w0, q0)


def _integrate(exponents, geometry, dim, mu, x_end, max_zeros, scale, tol=None):
    x0, y0 = _start(exponents, geometry, dim, mu, config.RADIAL_START * scale)
    nm1 = 0 if geometry == LINE else dim - 1
    rtol = config.ODE_RTOL if tol is None else tol
    atol = config.ODE_ATOL if tol is None else tol
    sol = kernel.integrate(
        nm1, exponents.p, exponents.q, mu, x0, y0, x_end, max_zeros,
        rtol, atol, 1e-3 * scale, config.ODE_MAX_STEPS,
    )
    if sol.status < 0:
        reason = "step size underflow" if sol.status == kernel.STATUS_UNDERFLOW else "step budget exhausted"
        raise StepFailure(f"{reason} at x={sol.x_last:.6g} (p={exponents.p}, q={exponents.q}, mu={mu})")
    return sol


def refine_zero(sol: kernel.DenseSolution, a: float, b: float) -> float:
    """Bisect the interpolated u on ``[a, b]`` (which must bracket a sign change)."""
    ua = float(sol(a, 0))
    for _ in range(200):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        um = float(sol(m, 0))
        if um == 0.0:
            return m
        if (um > 0) == (ua > 0):
            a, ua = m, um
        else:
            b = m
    m = 0.5 * (a + b)
    if abs(float(sol(m, 0))) >= config.ZERO_TOL:
        raise NoZeroFound(f"zero refinement stalled near x={m}")
    return m


def _locate_zeros(sol: kernel.DenseSolution, limit: Optional[int] = None) -> np.ndarray:
    zeros = []
    for i, j in sol.sign_change_brackets():
        zeros.append(refine_zero(sol, float(sol.xs[i]), float(sol.xs[j])))
        if limit is not None and len(zeros) >= limit:
            break
    return np.asarray(zeros)


def _solution(exponents, geometry, dim, mu, sol):
    zeros = _locate_zeros(sol)
    start = float(sol.xs[0])
    edges = np.concatenate(([start], zeros))
    qint = sol(edges, 2)
    q_at_start = float(sol.ys[0, 2]) if geometry == LINE else 0.0
    qint[0] = q_at_start
    return ShootingSolution(
        exponents=exponents, geometry=geometry, dim=dim, mu=mu,
        grid=sol.xs, u=sol.ys[:, 0], w=sol.ys[:, 1],
        zeros=zeros, segment_q_norms=np.diff(qint), dense=sol,
    )


_cache: dict = {}
_cache_lock = threading.Lock()


def reference_shoot(exponents: Exponents, geometry: str = LINE, dim: int = 1,
                    n_zeros: int = 10) -> ShootingSolution:
    """Trajectory with mu = 1 carried until ``n_zeros`` zeros are bracketed.

    The line starts from ``u(0) = 0, u'(0) = 1``; the radial case from
    ``u(0) = 1, u'(0) = 0``. Results are memoized per (exponents, geometry);
    a request for more zeros than cached extends the cache.
    """
    if geometry not in (LINE, RADIAL):
        raise InvalidDomain(f"unknown geometry {geometry!r}")
    if geometry == LINE:
        dim = 1
    elif dim < 2:
        raise InvalidDomain("radial geometry needs dimension >= 2")
    key = (exponents, geometry, dim)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None and len(hit.zeros) >= n_zeros:
        return hit
    want = max(n_zeros, 2 * len(hit.zeros) if hit is not None else n_zeros)
    horizon = config.SHOOT_HORIZON_PER_ZERO * want
    sol = _integrate(exponents, geometry, dim, 1.0, horizon, want, 1.0)
    if sol.nzeros < want:
        raise NoZeroFound(
            f"only {sol.nzeros} of {want} zeros within x <= {horizon:g} "
            f"(p={exponents.p}, q={exponents.q}, {geometry})"
        )
    res = _solution(exponents, geometry, dim, 1.0, sol)
    if len(res.zeros) < want:
        raise NoZeroFound(f"located {len(res.zeros)} of {want} zeros")
    with _cache_lock:
        current = _cache.get(key)
        if current is None or len(current.zeros) < len(res.zeros):
            _cache[key] = res
    return res


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def interval_eigenvalue(exponents: Exponents, L: float, k: int = 1) -> EigenPair:
    """k-th eigenpair of the interval ``(0, L)`` from the rescaled reference trajectory."""
    domain = ComponentDomain.interval(L)
    if k < 1:
        raise InvalidDomain(f"eigenvalue index must be >= 1, got {k}")
    p, q = exponents.p, exponents.q
    ref = reference_shoot(exponents, LINE, 1, max(k, 10))
    zk = float(ref.zeros[k - 1])
    sk = float(ref.q_integral(zk))
    # on (0, zk) the reference solves the problem with mu = 1
    lam_ref = sk ** ((q - p) / q)
    lam = lam_ref * (L / zk) ** exponents.dilation_exponent(1)
    stretch = zk / L
    factor = (stretch / sk) ** (1.0 / q)
    dense = ref.dense

    def evaluate(x):
        return dense(np.asarray(x, dtype=float) * stretch, 0) * factor

    grid = np.linspace(0.0, L, config.PROFILE_POINTS)
    profile = evaluate(grid)
    profile[0] = 0.0
    profile[-1] = 0.0
    return EigenPair(domain, exponents, k, lam, grid, profile, "shooting", evaluate)


def _bvp_trajectory(exponents, geometry, dim, mu, R, k, tol=None):
    return _integrate(exponents, geometry, dim, mu, R, k + 1, R, tol)


def _solve_mu(exponents: Exponents, geometry: str, dim: int, R: float, k: int):
    """Find mu such that u(R) = 0 with exactly k - 1 zeros inside (0, R)."""
    sweep_tol = [config.ODE_SWEEP_TOL]

    def count(mu):
        return _bvp_trajectory(exponents, geometry, dim, mu, R, k, sweep_tol[0]).nzeros

    # geometric sweep for a bracket with count(lo) <= k-1 < k <= count(hi)
    mu = 1.0
    c = count(mu)
    lo = hi = None
    for _ in range(400):
        if c >= k:
            hi = mu
            if lo is not None:
                break
            mu *= 0.5
        else:
            lo = mu
            if hi is not None:
                break
            mu *= 2.0
        c = count(mu)
    if lo is None or hi is None:
        raise BracketFailure(f"no sign change of u(R) found for k={k}, R={R}")
    # bisect on the zero count until the bracket isolates the k-th transition,
    # first at the sweep tolerance, then confirmed at full accuracy
    for tol in (config.ODE_SWEEP_TOL, None):
        sweep_tol[0] = tol
        clo, chi = count(lo), count(hi)
        for _ in range(200):
            if clo == k - 1 and chi == k:
                break
            mid = math.sqrt(lo * hi)
            cm = count(mid)
            if cm >= k:
                hi, chi = mid, cm
            else:
                lo, clo = mid, cm
        else:
            raise BracketFailure(f"zero count bracket did not isolate k={k}")

    def end_value(mu):
        return float(_bvp_trajectory(exponents, geometry, dim, mu, R, k).ys[-1, 0])

    glo, ghi = end_value(lo), end_value(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if (glo > 0) == (ghi > 0):
        raise BracketFailure(f"u(R) does not change sign on [{lo}, {hi}]")
    return brentq(end_value, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def _bvp_pair(exponents, geometry, dim, R, k, domain):
    p, q = exponents.p, exponents.q
    mu = _solve_mu(exponents, geometry, dim, R, k)
    sol = _bvp_trajectory(exponents, geometry, dim, mu, R, k)
    weight = 1.0 if geometry == LINE else sphere_area(dim)
    mass = weight * float(sol.ys[-1, 2])
    lam = mu * mass ** ((q - p) / q)
    factor = mass ** (-1.0 / q)
    x_start = float(sol.xs[0])

    def evaluate(x):
        x = np.clip(np.asarray(x, dtype=float), x_start, R)
        return sol(x, 0) * factor

    grid = np.linspace(0.0, R, config.PROFILE_POINTS)
    profile = evaluate(grid)
    profile[-1] = 0.0
    if geometry == LINE:
        profile[0] = 0.0
    return EigenPair(domain, exponents, k, lam, grid, profile, "shooting", evaluate)


def interval_eigenvalue_bvp(exponents: Exponents, L: float, k: int = 1) -> EigenPair:
    """k-th eigenpair of ``(0, L)`` by shooting on ``[0, L]`` and bisecting in mu.

    Independent of the reference-trajectory rescaling used by
    :func:`interval_eigenvalue`.
    """
    if k < 1:
        raise InvalidDomain(f"eigenvalue index must be >= 1, got {k}")
    domain = ComponentDomain.interval(L)
    return _bvp_pair(exponents, LINE, 1, float(L), k, domain)


def ball_eigenvalue_radial(exponents: Exponents, r: float, N: int, k: int = 1) -> EigenPair:
    """k-th radial eigenpair of the ball of radius ``r`` in R^N.

    For N = 1 the ball is the interval of length 2r and the interval solver
    is used. Only radial eigenfunctions are computed for N >= 2.
    """
    if k < 1:
        raise InvalidDomain(f"eigenvalue index must be >= 1, got {k}")
    domain = ComponentDomain.ball(r, N)
    if N == 1:
        pair = interval_eigenvalue(exponents, 2.0 * r, k)
        return EigenPair(domain, exponents, k, pair.value, pair.grid, pair.profile,
                         pair.method, pair.evaluate)
    return _bvp_pair(exponents, RADIAL, N, float(r), k, domain)


def eigenpair(domain: ComponentDomain, exponents: Exponents, k: int = 1, direct: bool = False) -> EigenPair:
    """Dispatch on the domain kind. ``direct`` selects the mu-bisection route for intervals."""
    if domain.kind == "interval":
        if direct:
            return interval_eigenvalue_bvp(exponents, domain.size, k)
        return interval_eigenvalue(exponents, domain.size, k)
    if domain.dim == 1 and direct:
        pair = interval_eigenvalue_bvp(exponents, 2.0 * domain.size, k)
        return EigenPair(domain, exponents, k, pair.value, pair.grid, pair.profile,
                         pair.method, pair.evaluate)
    return ball_eigenvalue_radial(exponents, domain.size, domain.dim, k)


def eigenvalues(domain: ComponentDomain, exponents: Exponents, ks, direct: bool = False):
    return [eigenpair(domain, exponents, k, direct).value for k in ks]
