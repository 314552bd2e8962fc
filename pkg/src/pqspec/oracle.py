"""Independent checks on intervals: discrete minimization, residuals, closed forms.

The discrete problem lives on ``M`` interior nodes of a uniform grid over
``[0, L]`` with zero boundary values. The energy is ``h * sum |Du|^p`` over
the ``M + 1`` cell differences and the constraint uses the trapezoid rule,
which for zero boundary values is ``h * sum |u|^q``. Stationary points of
the quotient ``E(u) / ||u||_q^p`` satisfy exactly

    -Delta_p^h u = lam * ||u||_q^(p-q) |u|^(q-2) u

with the three-point operator used by :func:`residual`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import brentq, minimize_scalar
from scipy.special import beta, jv

from . import config
from .core import Exponents
from .errors import InvalidDomain, NoConvergence


def _phi(x, p):
    return np.abs(x) ** (p - 2.0) * x


@dataclass(frozen=True, eq=False)
class DiscreteProfile:
    """Interior nodal values on the uniform grid over ``[0, L]``."""

    L: float
    values: np.ndarray

    @property
    def M(self) -> int:
        return len(self.values)

    @property
    def h(self) -> float:
        return self.L / (self.M + 1)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.M + 2)

    @property
    def full(self) -> np.ndarray:
        return np.concatenate(([0.0], self.values, [0.0]))

    def lq_norm(self, q: float) -> float:
        return float(np.trapezoid(np.abs(self.full) ** q, dx=self.h)) ** (1.0 / q)

    def energy(self, p: float) -> float:
        d = np.diff(self.full) / self.h
        return float(self.h * np.sum(np.abs(d) ** p))

    @classmethod
    def sample(cls, L: float, M: int, func) -> "DiscreteProfile":
        """Sample ``func`` at the interior nodes."""
        x = np.linspace(0.0, L, M + 2)[1:-1]
        return cls(float(L), np.asarray(func(x), dtype=float))


def rayleigh_quotient(exponents: Exponents, profile: DiscreteProfile) -> float:
    p, q = exponents.p, exponents.q
    return profile.energy(p) / profile.lq_norm(q) ** p


def _normalize(u, h, q):
    return u / (h * np.sum(np.abs(u) ** q)) ** (1.0 / q)


def _minus_plap(u, h, p):
    """Three-point ``-Delta_p^h`` at the interior nodes."""
    d = np.diff(np.concatenate(([0.0], u, [0.0]))) / h
    f = _phi(d, p)
    return (f[:-1] - f[1:]) / h


def _solve_plap(f, v, h, p, tol=1e-13, max_newton=200):
    """Newton's method for ``-Delta_p^h v = f`` (minimizer of a convex energy) from ``v``."""
    M = len(f)

    def J(v):
        d = np.diff(np.concatenate(([0.0], v, [0.0]))) / h
        return h * np.sum(np.abs(d) ** p) / p - h * np.dot(f, v)

    fscale = h * max(np.max(np.abs(f)), 1e-300)
    jv = J(v)
    for _ in range(max_newton):
        d = np.diff(np.concatenate(([0.0], v, [0.0]))) / h
        g = (_phi(d, p)[:-1] - _phi(d, p)[1:]) - h * f
        if np.max(np.abs(g)) <= tol * fscale:
            return v
        ad = np.abs(d)
        if p < 2:
            ad = np.maximum(ad, 1e-12 * max(np.max(ad), 1e-300))
        a = (p - 1.0) * ad ** (p - 2.0) / h
        if p > 2:
            a = np.maximum(a, 1e-14 * np.max(a))
        ab = np.zeros((3, M))
        ab[1] = a[:-1] + a[1:]
        ab[0, 1:] = -a[1:-1]
        ab[2, :-1] = -a[1:-1]
        step = solve_banded((1, 1), ab, -g)
        t = 1.0
        slope = float(np.dot(g, step))
        while t > 1e-12:
            trial = v + t * step
            jt = J(trial)
            if jt <= jv + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            return v
        if np.max(np.abs(t * step)) <= 1e-16 * np.max(np.abs(v)):
            return trial
        v, jv = trial, jt
    return v


def _inverse_power(exponents, L, M, u, max_iter):
    p, q = exponents.p, exponents.q
    h = L / (M + 1)
    u = _normalize(u, h, q)
    lam = rayleigh_quotient(exponents, DiscreteProfile(L, u))
    for it in range(1, max_iter + 1):
        f = np.abs(u) ** (q - 2.0) * u
        # start Newton from the best multiple of u
        e_u = DiscreteProfile(L, u).energy(p)
        c = (h * np.dot(f, u) / e_u) ** (1.0 / (p - 1.0))
        v = _solve_plap(f, c * u, h, p)
        u_new = _normalize(v, h, q)
        lam_new = rayleigh_quotient(exponents, DiscreteProfile(L, u_new))
        du = np.max(np.abs(u_new - u)) / np.max(np.abs(u_new))
        dl = abs(lam_new - lam) / lam_new
        u, lam = u_new, lam_new
        if dl <= 1e-15 and du <= 1e-12:
            return lam, u, it
    raise NoConvergence(f"inverse power iteration did not converge in {max_iter} steps (M={M})")


def _projected_gradient(exponents, L, M, u, max_iter):
    """Steepest descent on the L^q sphere with backtracking.

    Trial steps come from the Barzilai-Borwein formula. Once the quotient
    stops changing in floating point, a step is still accepted while the
    directional derivative keeps its sign, so the gradient criterion stays
    reachable.
    """
    p, q = exponents.p, exponents.q
    h = L / (M + 1)
    u = _normalize(u, h, q)

    def quotient(v):
        return rayleigh_quotient(exponents, DiscreteProfile(L, v))

    def gradient(v, lam):
        # gradient of the quotient on the constraint sphere, in the discrete L2 metric
        return p * _minus_plap(v, h, p) - p * lam * np.abs(v) ** (q - 2.0) * v

    lam = quotient(u)
    g = gradient(u, lam)
    history = [lam]
    t = 1e-3 * h * h
    window = config.ORACLE_STALL_WINDOW
    for it in range(1, max_iter + 1):
        gg = h * float(np.dot(g, g))
        if (math.sqrt(gg) < config.ORACLE_GRAD_TOL and len(history) > window
                and history[-window - 1] - lam <= config.ORACLE_STALL_TOL * lam):
            return lam, u, it
        while True:
            trial = _normalize(u - t * g, h, q)
            lt = quotient(trial)
            if lt <= lam - 1e-4 * t * gg:
                gt = gradient(trial, lt)
                break
            if lt <= lam + 4 * np.spacing(lam):
                gt = gradient(trial, lt)
                if np.dot(gt, g) >= 0:
                    break
            t *= 0.5
            if t < 1e-30:
                raise NoConvergence(
                    f"line search failed at iteration {it} (gradient norm {math.sqrt(gg):.3g}, M={M})"
                )
        s_ = trial - u
        y_ = gt - g
        sy = float(np.dot(s_, y_))
        u, lam, g = trial, lt, gt
        history.append(lam)
        t = float(np.dot(s_, s_)) / sy if sy > 0 else 2.0 * t
    raise NoConvergence(f"projected gradient descent did not converge in {max_iter} steps (M={M})")


METHODS = {"inverse_power": _inverse_power, "projected_gradient": _projected_gradient}


def minimize_first(exponents: Exponents, L: float, M: int, method: str = "inverse_power",
                   restarts: int = 0, seed: int = 0, max_iter: int = config.ORACLE_MAX_ITER):
    """Minimize the discrete quotient on ``M`` interior nodes; returns ``(lam, profile)``.

    The iteration starts from the sine bump. ``restarts > 0`` adds that many
    random positive starting vectors drawn from ``numpy.random.default_rng(seed)``
    and keeps the lowest value found. The returned profile is the positive
    representative with unit discrete L^q norm.
    """
    if M < config.ORACLE_MIN_NODES:
        raise InvalidDomain(f"M must be >= {config.ORACLE_MIN_NODES}, got {M}")
    if not L > 0:
        raise InvalidDomain(f"L must be > 0, got {L}")
    run = METHODS[method]
    x = np.linspace(0.0, L, M + 2)[1:-1]
    starts = [np.sin(np.pi * x / L)]
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append(rng.uniform(0.05, 1.0, M) * np.sin(np.pi * x / L) ** 0.5)
    best = None
    for u0 in starts:
        lam, u, _ = run(exponents, float(L), M, u0, max_iter)
        if best is None or lam < best[0]:
            best = (lam, u)
    lam, u = best
    if np.sum(u) < 0:
        u = -u
    return float(lam), DiscreteProfile(float(L), u)


def residual(exponents: Exponents, lam: float, profile: DiscreteProfile, lq_norm: float | None = None) -> float:
    """Discrete dual norm of ``-Delta_p^h u - lam ||u||_q^(p-q) |u|^(q-2) u``.

    The norm is dual to ``v -> (h sum |Dv|^p)^(1/p)`` on the same grid; it
    equals ``min_c ||c - h * cumsum(r)||`` in the discrete ``l^(p')`` norm over
    the cells. ``lq_norm`` overrides the L^q norm in the source term; pass the
    norm of the whole union when ``profile`` is one component of it.
    """
    p, q = exponents.p, exponents.q
    h = profile.h
    u = profile.values
    norm = profile.lq_norm(q) if lq_norm is None else lq_norm
    r = _minus_plap(u, h, p) - lam * norm ** (p - q) * np.abs(u) ** (q - 2.0) * u
    flux = np.concatenate(([0.0], -h * np.cumsum(r)))
    pc = p / (p - 1.0)

    def dual(c):
        return float(h * np.sum(np.abs(flux + c) ** pc))

    lo, hi = -float(np.max(flux)), -float(np.min(flux))
    if hi - lo <= 0.0:
        return dual(lo) ** (1.0 / pc)
    res = minimize_scalar(dual, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-14 * max(hi - lo, 1e-300) + 1e-300})
    return min(res.fun, dual(lo), dual(hi)) ** (1.0 / pc)


def richardson(Ms, values, L: float = 1.0):
    """Extrapolate ``lam(h)`` to ``h = 0`` from three or more resolutions.

    The convergence order is estimated from the last three levels; an order
    outside ``[0.5, 6]`` falls back to 2. Returns ``(value, order)``.
    """
    if len(Ms) < 2:
        raise ValueError("need at least two resolutions")
    hs = [L / (M + 1) for M in Ms]
    order = 2.0
    if len(Ms) >= 3:
        (h1, h2, h3), (v1, v2, v3) = hs[-3:], values[-3:]
        d12, d23 = v1 - v2, v2 - v3
        if d23 != 0 and d12 / d23 > 0:
            est = math.log(d12 / d23) / math.log(h1 / h2)
            if 0.5 <= est <= 6.0:
                order = est
    h2, h3 = hs[-2], hs[-1]
    v2, v3 = values[-2], values[-1]
    ratio = (h2 / h3) ** order
    return v3 + (v3 - v2) / (ratio - 1.0), order


def extrapolated_first(exponents: Exponents, L: float, Ms=(1024, 2048, 4096)):
    """Richardson-extrapolated discrete first eigenvalue; returns ``(value, order, raw)``."""
    raw = [minimize_first(exponents, L, M)[0] for M in Ms]
    value, order = richardson(list(Ms), raw, L)
    return value, order, raw


def pi_p(p: float) -> float:
    """Half-period of the p-sine: ``2 pi (p-1)^(1/p) / (p sin(pi/p))``."""
    return 2.0 * math.pi * (p - 1.0) ** (1.0 / p) / (p * math.sin(math.pi / p))


def calibration_eigenvalue(p: float, L: float, k: int = 1) -> float:
    """Classical Dirichlet eigenvalue ``(k pi_p / L)^p`` of the 1D p-Laplacian."""
    return (k * pi_p(p) / L) ** p


def closed_form_first(exponents: Exponents, L: float) -> float:
    """First eigenvalue of ``(0, L)`` by quadrature of the conserved energy.

    With ``mu = 1`` and ``u'(0) = 1`` the first hump has height
    ``m = (q (p-1) / p)^(1/q)``, length ``(2m/q) B(1/q, 1-1/p)`` and
    ``int |u|^q = (2 m^(q+1) / q) B(1+1/q, 1-1/p)``; the dilation law moves
    the hump to length ``L``.
    """
    p, q = exponents.p, exponents.q
    m = (q * (p - 1.0) / p) ** (1.0 / q)
    b = 1.0 - 1.0 / p
    zero = 2.0 * m / q * beta(1.0 / q, b)
    mass = 2.0 * m ** (q + 1.0) / q * beta(1.0 + 1.0 / q, b)
    return mass ** ((q - p) / q) * (L / zero) ** exponents.dilation_exponent(1)


def bessel_eigenvalue(dim: int, r: float, k: int = 1) -> float:
    """k-th radial Dirichlet eigenvalue of the Laplacian on the ball ``B_r`` in R^dim.

    It equals ``(j / r)^2`` with ``j`` the k-th positive zero of ``J_nu``, ``nu = dim/2 - 1``.
    """
    if dim < 1 or k < 1 or not r > 0:
        raise InvalidDomain("need dim >= 1, k >= 1 and r > 0")
    nu = dim / 2.0 - 1.0
    zeros = []
    step = 0.25
    a = 1e-3
    fa = jv(nu, a)
    while len(zeros) < k:
        b = a + step
        fb = jv(nu, b)
        if fa * fb < 0:
            zeros.append(brentq(lambda x: jv(nu, x), a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
        a, fa = b, fb
    return (zeros[k - 1] / r) ** 2
