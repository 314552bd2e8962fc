"""Shared domain types and the exact dilation law.

Everything here is immutable. A union of components never stores
positions: disjointness of the pieces is assumed, and no formula below
depends on where the pieces sit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidDomain, InvalidExponents, InvalidScale

STRICT = "strict"
CALIBRATION = "calibration"

METHODS = ("shooting", "variational", "closed_form", "rescaled")


@dataclass(frozen=True)
class Exponents:
    """The pair (p, q) of the eigenvalue problem.

    ``strict`` mode requires ``1 < q < p``. ``calibration`` mode requires
    ``1 < q == p`` and is only used to check solvers against the classical
    p-Laplacian.
    """

    p: float
    q: float
    mode: str = STRICT

    def __post_init__(self):
        validate(self)

    @property
    def gamma(self) -> float:
        """Exponent ``q/(p-q)`` applied to reciprocal eigenvalues when combining."""
        return self.q / (self.p - self.q)

    @property
    def strict(self) -> bool:
        return self.mode == STRICT

    def dilation_exponent(self, dim: int) -> float:
        """Exponent ``N - p - N p / q`` of the dilation law."""
        return dim - self.p - dim * self.p / self.q

    def compactness_exponent(self, dim: int) -> float:
        """Exponent ``p q / (p - q) + N`` of the summability condition on radii."""
        return self.p * self.q / (self.p - self.q) + dim


def validate(exponents: Exponents) -> None:
    """Raise :class:`InvalidExponents` naming the violated constraint."""
    p, q, mode = exponents.p, exponents.q, exponents.mode
    for name, value in (("p", p), ("q", q)):
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise InvalidExponents(f"{name} must be a finite real, got {value!r}")
    if mode == STRICT:
        if not q > 1:
            raise InvalidExponents(f"strict mode requires q > 1, got q={q}")
        if not q < p:
            raise InvalidExponents(f"strict mode requires q < p, got p={p}, q={q}")
    elif mode == CALIBRATION:
        if not q > 1:
            raise InvalidExponents(f"calibration mode requires q > 1, got q={q}")
        if q != p:
            raise InvalidExponents(f"calibration mode requires q == p, got p={p}, q={q}")
    else:
        raise InvalidExponents(f"unknown mode {mode!r}")


def require_strict(exponents: Exponents) -> None:
    if not exponents.strict:
        raise InvalidExponents("operation requires strict exponents (1 < q < p)")


@dataclass(frozen=True)
class ComponentDomain:
    """An interval of length ``size`` or a ball of radius ``size`` in dimension ``dim``."""

    kind: str
    size: float
    dim: int = 1

    def __post_init__(self):
        if self.kind not in ("interval", "ball"):
            raise InvalidDomain(f"unknown domain kind {self.kind!r}")
        if not (math.isfinite(self.size) and self.size > 0):
            raise InvalidDomain(f"{self.kind} size must be > 0, got {self.size}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidDomain(f"dimension must be an integer >= 1, got {self.dim}")
        if self.kind == "interval" and self.dim != 1:
            raise InvalidDomain("intervals are one-dimensional")

    @classmethod
    def interval(cls, length: float) -> "ComponentDomain":
        return cls("interval", float(length), 1)

    @classmethod
    def ball(cls, radius: float, dim: int) -> "ComponentDomain":
        return cls("ball", float(radius), int(dim))

    @property
    def length(self) -> float:
        """Length of the equivalent interval (one-dimensional domains only)."""
        if self.dim != 1:
            raise InvalidDomain("length is defined only for one-dimensional domains")
        return self.size if self.kind == "interval" else 2.0 * self.size

    def dilate(self, t: float) -> "ComponentDomain":
        if not t > 0:
            raise InvalidScale(f"dilation factor must be > 0, got {t}")
        return ComponentDomain(self.kind, self.size * t, self.dim)

    def label(self) -> str:
        if self.kind == "interval":
            return f"interval(L={self.size:g})"
        return f"ball(N={self.dim}, r={self.size:g})"


def scale_eigenvalue(lam: float, domain: ComponentDomain, t: float, exponents: Exponents) -> float:
    """Eigenvalue of the dilated domain ``t * domain`` given the one of ``domain``.

    Eigenvalues scale like ``t ** (N - p - N p / q)``.
    """
    if not t > 0:
        raise InvalidScale(f"dilation factor must be > 0, got {t}")
    if not lam > 0:
        raise InvalidScale(f"eigenvalue must be > 0, got {lam}")
    if t == 1:
        return lam
    return lam * t ** exponents.dilation_exponent(domain.dim)


def sphere_area(dim: int) -> float:
    """Surface measure of the unit sphere in R^dim (2 for dim = 1)."""
    return 2.0 * math.pi ** (dim / 2) / math.gamma(dim / 2)


@dataclass(frozen=True, eq=False)
class EigenPair:
    """One eigenvalue of one component with its sampled eigenfunction.

    ``grid`` runs over ``[0, L]`` for intervals and over the radial
    coordinate ``[0, r]`` for balls. ``profile`` has unit L^q norm on the
    component. ``evaluate``, when present, evaluates the same normalized
    eigenfunction at arbitrary points (used by residual checks).
    """

    domain: ComponentDomain
    exponents: Exponents
    k: int
    value: float
    grid: np.ndarray
    profile: np.ndarray
    method: str
    evaluate: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not self.value > 0:
            raise ValueError(f"eigenvalue must be positive, got {self.value}")

    def lq_norm(self) -> float:
        """Trapezoid L^q norm of the sampled profile over the component."""
        q = self.exponents.q
        integrand = np.abs(self.profile) ** q
        if self.domain.kind == "ball" and self.domain.dim > 1:
            n = self.domain.dim
            integrand = integrand * self.grid ** (n - 1) * sphere_area(n)
        return float(np.trapezoid(integrand, self.grid)) ** (1.0 / q)


@dataclass(frozen=True)
class GeometricTail:
    """Radii ``r_i = r0 * ratio**i`` of balls in dimension ``dim``."""

    r0: float
    ratio: float
    dim: int = 1

    def __post_init__(self):
        if not self.r0 > 0:
            raise InvalidDomain(f"r0 must be > 0, got {self.r0}")
        if not 0 < self.ratio < 1:
            raise InvalidDomain(f"ratio must lie in (0, 1), got {self.ratio}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidDomain(f"dimension must be an integer >= 1, got {self.dim}")

    def radius(self, i: int) -> float:
        return self.r0 * self.ratio ** i

    def summand_ratio(self, exponents: Exponents) -> float:
        """Ratio of consecutive terms of the compactness series."""
        return self.ratio ** exponents.compactness_exponent(self.dim)


@dataclass(frozen=True)
class UnionModel:
    """Ordered disjoint union: explicit components then an optional geometric tail.

    ``n_max`` caps how many tail balls are materialized by :meth:`truncated`.
    """

    components: tuple = ()
    tail_rule: Optional[GeometricTail] = None
    n_max: int = 0

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components and self.tail_rule is None:
            raise InvalidDomain("a union needs at least one component")
        if self.n_max < 0:
            raise InvalidDomain("n_max must be >= 0")

    def compactness_holds(self, exponents: Exponents) -> bool:
        if self.tail_rule is None:
            return True
        return self.tail_rule.summand_ratio(exponents) < 1.0

    def truncated(self) -> tuple:
        """Explicit components followed by the first ``n_max`` tail balls."""
        if self.tail_rule is None:
            return self.components
        tail = tuple(
            ComponentDomain.ball(self.tail_rule.radius(i), self.tail_rule.dim)
            for i in range(self.n_max)
        )
        return self.components + tail


def parse_range(text: str) -> Sequence[int]:
    """Parse ``"3"`` or ``"1..5"`` into a list of eigenvalue indices (all >= 1)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            a, b = int(lo), int(hi)
        else:
            a = b = int(text)
    except ValueError:
        raise InvalidDomain(f"expected an index or a range like 1..5, got {text!r}") from None
    if a < 1 or b < a:
        raise InvalidDomain(f"range {text!r} must be nonempty with indices >= 1")
    return list(range(a, b + 1))
