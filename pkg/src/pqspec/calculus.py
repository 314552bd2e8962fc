"""Eigenvalues of disjoint unions from the eigenvalues of their pieces.

Selecting one eigenvalue ``lam_i`` from each piece in a nonempty subset
gives the union eigenvalue

    lam = [ sum_i (1 / lam_i)^(q/(p-q)) ]^((q-p)/q)

with eigenfunction ``sum_i alpha_i u_i``, ``|alpha_i| = (lam / lam_i)^(1/(p-q))``.
Every eigenvalue of the union arises this way. The map is decreasing in
each ``lam_i`` and adding a piece lowers it, which is what
:func:`enumerate_spectrum` uses to prune.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import config
from .core import EigenPair, Exponents, GeometricTail, require_strict
from .errors import (BudgetExceeded, DivergentTail, EmptySelection, InvalidSpectrum,
                     NormalizationDrift, TooManyVariants)


@dataclass(frozen=True)
class Choice:
    """Eigenvalue number ``k`` (1-based) of one piece, with its value."""

    k: int
    value: float


@dataclass(frozen=True)
class Selection:
    """One entry per piece: a :class:`Choice`, or ``None`` where the piece is left out."""

    choices: tuple

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(self.choices))

    @property
    def deltas(self) -> tuple:
        return tuple(0 if c is None else 1 for c in self.choices)

    @property
    def selected(self) -> list:
        return [i for i, c in enumerate(self.choices) if c is not None]

    def key(self) -> tuple:
        return tuple(0 if c is None else c.k for c in self.choices)

    @classmethod
    def from_values(cls, values: Sequence[Optional[float]], ks: Optional[Sequence[int]] = None) -> "Selection":
        ks = ks if ks is not None else [1] * len(values)
        return cls(tuple(None if v is None else Choice(int(k), float(v)) for v, k in zip(values, ks)))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Optional[EigenPair]]) -> "Selection":
        return cls(tuple(None if e is None else Choice(e.k, e.value) for e in pairs))


@dataclass(frozen=True)
class CombinedEigenPair:
    """Union eigenvalue with coefficients in the canonical all-positive sign pattern.

    ``provenance`` lists every selection producing this value when the pair
    comes out of :func:`enumerate_spectrum`.
    """

    value: float
    coefficients: tuple
    selection: Selection
    truncation_error: Optional[float] = None
    provenance: tuple = field(default=(), compare=False)


def _power_sum(values, gamma):
    """``sum (lam_min / lam_i)^gamma - 1``, summed exactly and order-independently."""
    lo = min(values)
    ratios = sorted((lo / v) ** gamma for v in values)
    # drop one copy of the minimum, which contributes exactly 1
    ratios.pop()
    return lo, math.fsum(ratios)


def combined_value(exponents: Exponents, values: Sequence[float]) -> float:
    """Union eigenvalue for the selected values (all entries used)."""
    if len(values) == 0:
        raise EmptySelection("at least one piece must be selected")
    if any(not v > 0 for v in values):
        raise InvalidSpectrum("eigenvalues must be positive")
    gamma = exponents.gamma
    lo, rest = _power_sum(values, gamma)
    return lo * math.exp(-math.log1p(rest) / gamma)


def coefficients(exponents: Exponents, lam: float, values: Sequence[float]) -> tuple:
    """Magnitudes ``(lam / lam_i)^(1/(p-q))`` of the eigenfunction coefficients."""
    e = 1.0 / (exponents.p - exponents.q)
    return tuple((lam / v) ** e for v in values)


def combine(exponents: Exponents, selection: Selection) -> CombinedEigenPair:
    require_strict(exponents)
    idx = selection.selected
    if not idx:
        raise EmptySelection("at least one piece must be selected")
    values = [selection.choices[i].value for i in idx]
    lam = combined_value(exponents, values)
    mags = coefficients(exponents, lam, values)
    coeffs = [0.0] * len(selection.choices)
    for i, a in zip(idx, mags):
        coeffs[i] = a
    norm = math.fsum(a ** exponents.q for a in mags)
    if abs(norm - 1.0) > config.NORMALIZATION_TOL:
        raise NormalizationDrift(f"coefficient normalization drifted: sum |alpha|^q = {norm!r}")
    return CombinedEigenPair(lam, tuple(coeffs), selection, provenance=(selection,))


def sign_variants(pair: CombinedEigenPair) -> list:
    """All sign patterns of the coefficients on the selected pieces (``2**m`` of them)."""
    idx = pair.selection.selected
    m = len(idx)
    if m > config.MAX_SIGN_VARIANTS:
        raise TooManyVariants(f"{m} selected pieces would give 2**{m} variants")
    out = []
    for signs in itertools.product((1.0, -1.0), repeat=m):
        c = list(pair.coefficients)
        for i, s in zip(idx, signs):
            c[i] = s * abs(c[i])
        out.append(tuple(c))
    return out


def assemble(pair: CombinedEigenPair, eigenpairs: Sequence[Optional[EigenPair]], signs=None) -> list:
    """Per-piece callables ``x -> alpha_i u_i(x)`` of the union eigenfunction.

    Pieces outside the selection get the zero function. ``eigenpairs`` must
    carry ``evaluate``.
    """
    coeffs = pair.coefficients if signs is None else signs
    funcs = []
    for c, e in zip(coeffs, eigenpairs):
        if c == 0.0 or e is None:
            funcs.append(lambda x: 0.0 * x)
        else:
            funcs.append(lambda x, c=c, f=e.evaluate: c * f(x))
    return funcs


@dataclass(frozen=True)
class GeometricEigenvalues:
    """An infinite list of pieces ``lam_i = first * growth**i`` after an explicit ``prefix``."""

    first: float
    growth: float
    prefix: tuple = ()

    def summand_ratio(self, exponents: Exponents) -> float:
        return self.growth ** (-exponents.gamma)

    def value(self, i: int) -> float:
        return self.first * self.growth ** i

    @classmethod
    def from_tail(cls, tail: GeometricTail, unit_value: float, exponents: Exponents, prefix=()):
        """Pieces ``B_{r_i}`` of a geometric tail, given the first eigenvalue of the unit ball."""
        d = exponents.dilation_exponent(tail.dim)
        return cls(unit_value * tail.r0 ** d, tail.ratio ** d, tuple(prefix))


def _f(s, gamma):
    return s ** (-1.0 / gamma)


def first_eigenvalue_union(exponents: Exponents, first_values, n_terms: Optional[int] = None):
    """First eigenvalue of a union from the first eigenvalues of its pieces.

    ``first_values`` is a finite sequence (exact formula, zero error) or a
    :class:`GeometricEigenvalues` stream. For a stream the partial sum after
    ``n_terms`` geometric terms is closed by the exact geometric tail ``T``;
    the result is ``f(S + T/2)`` with error bound ``f(S) - f(S + T)``, where
    ``f(S) = S^((q-p)/q)``. Without ``n_terms`` terms are added until the
    tail is below double precision relative to the partial sum.

    Returns ``(lam, truncation_error)``.
    """
    require_strict(exponents)
    gamma = exponents.gamma
    if not isinstance(first_values, GeometricEigenvalues):
        values = [float(v) for v in first_values]
        if any(not v > 0 for v in values):
            raise InvalidSpectrum("first eigenvalues must be positive")
        return combined_value(exponents, values), 0.0
    stream = first_values
    ratio = stream.summand_ratio(exponents)
    if not ratio < 1.0:
        raise DivergentTail(f"summand ratio {ratio} >= 1: the series of (1/lam_i)^(q/(p-q)) diverges")
    if not stream.first > 0:
        raise InvalidSpectrum("first eigenvalue of the stream must be positive")
    # work with summands scaled by the largest one to stay in range
    lead = min([stream.first, *stream.prefix])
    scaled = [(lead / v) ** gamma for v in stream.prefix]
    a0 = (lead / stream.first) ** gamma
    cap = 10_000_000 if n_terms is None else n_terms
    terms = []
    n = 0
    while n < cap:
        terms.append(a0 * ratio ** n)
        n += 1
        if n_terms is None:
            tail = a0 * ratio ** n / (1.0 - ratio)
            if tail <= 2.0 ** -64 * math.fsum(scaled + terms):
                break
    s = math.fsum(scaled + terms)
    tail = a0 * ratio ** n / (1.0 - ratio)
    lam = lead * _f(s + 0.5 * tail, gamma)
    upper = lead * _f(s, gamma)
    err = upper * -math.expm1(-math.log1p(tail / s) / gamma)
    return lam, err


def _selection(spectra, key):
    return Selection(tuple(
        None if k == 0 else Choice(k, float(spectra[i][k - 1])) for i, k in enumerate(key)
    ))


class Enumeration(list):
    """Sorted union eigenvalues with the truncation that produced them.

    ``depths`` are the per-piece list lengths, ``cutoff`` the value bound,
    ``budget`` the selection cap and ``visited`` how many complete
    selections were evaluated.
    """

    def __init__(self, points, depths, cutoff, budget, visited):
        super().__init__(points)
        self.depths = depths
        self.cutoff = cutoff
        self.budget = budget
        self.visited = visited

    @property
    def values(self) -> list:
        return [p.value for p in self]


def _dfs(exponents, spectra, cutoff, budget, fixed_first):
    """Evaluate all selections (with piece 0 fixed to ``fixed_first``) whose value is <= cutoff."""
    gamma = exponents.gamma
    m = len(spectra)
    # best-case summand of the remaining pieces, relative to nothing: use raw powers
    lowest = [(1.0 / s[0]) ** gamma for s in spectra]
    rest_best = [0.0] * (m + 1)
    for i in range(m - 1, -1, -1):
        rest_best[i] = rest_best[i + 1] + lowest[i]
    slack = cutoff * (1.0 + 1e-9) if math.isfinite(cutoff) else cutoff
    found = []
    visited = 0
    key = [0] * m

    def bound(partial, i):
        total = partial + rest_best[i]
        return math.inf if total == 0.0 else total ** (-1.0 / gamma)

    def visit(i, partial):
        nonlocal visited
        if i == m:
            if partial == 0.0:
                return
            visited += 1
            if visited > budget:
                raise BudgetExceeded(
                    f"more than {budget} selections; reduce the truncation depth or the cutoff"
                )
            sel = _selection(spectra, key)
            pair = combine(exponents, sel)
            if pair.value <= cutoff:
                found.append(pair)
            return
        options = range(0, len(spectra[i]) + 1) if not (i == 0 and fixed_first is not None) else [fixed_first]
        for k in options:
            if k == 0:
                key[i] = 0
                if bound(partial, i + 1) <= slack:
                    visit(i + 1, partial)
                continue
            a = (1.0 / spectra[i][k - 1]) ** gamma
            if bound(partial + a, i + 1) > slack:
                # larger eigenvalues of this piece only raise the value
                break
            key[i] = k
            visit(i + 1, partial + a)
        key[i] = 0

    visit(0, 0.0)
    return found, visited


def _dedup(pairs, rel_tol):
    pairs = sorted(pairs, key=lambda c: (c.value, c.selection.key()))
    groups = []
    for pair in pairs:
        if groups and pair.value - groups[-1][0].value <= rel_tol * abs(groups[-1][0].value):
            groups[-1].append(pair)
        else:
            groups.append([pair])
    out = []
    for g in groups:
        head = g[0]
        out.append(CombinedEigenPair(head.value, head.coefficients, head.selection,
                                     head.truncation_error, tuple(c.selection for c in g)))
    return out


def enumerate_spectrum(exponents: Exponents, spectra: Sequence[Sequence[float]], cutoff: float = math.inf,
                       budget: int = config.ENUMERATION_BUDGET, rel_tol: float = config.DEDUP_RTOL,
                       workers: int = 1) -> Enumeration:
    """All union eigenvalues ``<= cutoff`` built from truncated per-piece spectra.

    Each list in ``spectra`` must be sorted ascending. Values closer than
    ``rel_tol`` (relative) are merged into one entry whose ``provenance``
    records every contributing selection. The result is complete for the
    truncated lists, not for the full spectrum of the union.
    ``workers > 1`` splits the search over the choices for the first piece.
    """
    require_strict(exponents)
    spectra = [list(map(float, s)) for s in spectra]
    if not spectra or any(len(s) == 0 for s in spectra):
        raise InvalidSpectrum("every piece needs at least one eigenvalue")
    for s in spectra:
        if any(b < a for a, b in zip(s, s[1:])):
            raise InvalidSpectrum("per-piece spectra must be sorted ascending")
        if s[0] <= 0:
            raise InvalidSpectrum("eigenvalues must be positive")
    if not cutoff > 0:
        raise InvalidSpectrum("cutoff must be positive")
    if workers <= 1:
        found, visited = _dfs(exponents, spectra, cutoff, budget, None)
    else:
        firsts = list(range(len(spectra[0]) + 1))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda k: _dfs(exponents, spectra, cutoff, budget, k), firsts))
        found = [p for part, _ in parts for p in part]
        visited = sum(v for _, v in parts)
        if visited > budget:
            raise BudgetExceeded(f"more than {budget} selections; reduce the truncation depth or the cutoff")
    points = _dedup(found, rel_tol)
    return Enumeration(points, tuple(len(s) for s in spectra), cutoff, budget, visited)


def brute_force_spectrum(exponents: Exponents, spectra, cutoff: float = math.inf,
                         rel_tol: float = config.DEDUP_RTOL) -> list:
    """Unpruned enumeration over every selection; reference for :func:`enumerate_spectrum`."""
    spectra = [list(map(float, s)) for s in spectra]
    found = []
    for key in itertools.product(*[range(len(s) + 1) for s in spectra]):
        if not any(key):
            continue
        pair = combine(exponents, _selection(spectra, key))
        if pair.value <= cutoff:
            found.append(pair)
    return _dedup(found, rel_tol)
