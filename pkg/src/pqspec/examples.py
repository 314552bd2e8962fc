"""Two executable counterexample reports.

``bi_union_report`` shows the spectrum of a union of two pieces clustering
below every eigenvalue of the larger piece, so it cannot be a sequence
tending to infinity. ``shrinking_tail_report`` shows that a union of
geometrically shrinking balls has a first eigenvalue approached from
above by other eigenvalues.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath

from . import calculus, config, shoot
from .core import ComponentDomain, Exponents, GeometricTail, require_strict, scale_eigenvalue
from .errors import DivergentTail, InsufficientPoints, InvalidDomain

SCHEMA = 1


@dataclass
class AccumulationReport:
    exponents: Exponents
    big: ComponentDomain
    small: ComponentDomain
    k: int
    limit: float
    table: list  # (n, lam_nk, gap)
    window_counts: list  # (j, eps_j, count in (limit - eps_j, limit))
    big_spectrum: list
    small_spectrum: list
    spectrum: list  # deduplicated enumerated values <= limit
    checks: dict = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return len(self.table)

    @property
    def values(self) -> list:
        return [row[1] for row in self.table]

    @property
    def gaps(self) -> list:
        return [row[2] for row in self.table]


def _spectrum(domain: ComponentDomain, exponents: Exponents, depth: int) -> list:
    return shoot.eigenvalues(domain, exponents, range(1, depth + 1))


def bi_union_report(exponents: Exponents, big: ComponentDomain, small: ComponentDomain, k: int,
                    n_max: int, depth: Optional[int] = None, workers: Optional[int] = None) -> AccumulationReport:
    """Cluster ``lam_{n,k}`` of union eigenvalues below ``lam^k(big)``.

    ``lam_{n,k}`` combines the k-th eigenvalue of ``big`` with the n-th of
    ``small`` for n = 1..n_max. The enumerated spectrum uses the first k
    eigenvalues of ``big`` and the first ``depth`` of ``small`` (default
    ``n_max + 1``, so the open window ``(lam_{1,k}, limit)`` holds n_max points).
    """
    require_strict(exponents)
    if k < 1:
        raise InvalidDomain(f"k must be >= 1, got {k}")
    if n_max < 1:
        raise InvalidDomain(f"n_max must be >= 1, got {n_max}")
    depth = n_max + 1 if depth is None else depth
    if depth < n_max:
        raise InvalidDomain(f"enumeration depth {depth} is below n_max {n_max}")
    workers = config.worker_count() if workers is None else workers
    big_spec = _spectrum(big, exponents, k)
    small_spec = _spectrum(small, exponents, depth)
    limit = big_spec[k - 1]
    top = calculus.Choice(k, limit)

    def row(n):
        sel = calculus.Selection((top, calculus.Choice(n, small_spec[n - 1])))
        lam = calculus.combine(exponents, sel).value
        return (n, lam, limit - lam)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        table = list(pool.map(row, range(1, n_max + 1)))
    enum = calculus.enumerate_spectrum(exponents, [big_spec, small_spec], cutoff=limit, workers=workers)
    values = enum.values
    windows = []
    for j, lam, gap in table:
        count = sum(1 for v in values if limit - gap < v < limit)
        windows.append((j, gap, count))
    lams = [r[1] for r in table]
    gaps = [r[2] for r in table]
    checks = {
        "increasing": all(b > a for a, b in zip(lams, lams[1:])),
        "below_limit": all(v < limit for v in lams),
        "gap_decreasing": all(b < a for a, b in zip(gaps, gaps[1:])),
        "gap_shrinks_100x": gaps[-1] < 0.01 * gaps[0],
        "window_counts": all(c >= n_max - j for j, _, c in windows)
        and all(b[2] <= a[2] for a, b in zip(windows, windows[1:])),
    }
    return AccumulationReport(exponents, big, small, k, limit, table, windows,
                              big_spec, small_spec, values, checks)


def bi_union_reports(exponents: Exponents, big: ComponentDomain, small: ComponentDomain,
                     ks: Sequence[int], n_max: int, **kw) -> list:
    """One report per k; their limits are distinct accumulation points."""
    return [bi_union_report(exponents, big, small, k, n_max, **kw) for k in ks]


LS_ARGUMENT = (
    "Any sequence of reals that diverges to +infinity meets a bounded interval "
    "only finitely many times. The interval I below contains n_max distinct "
    "eigenvalues of the union, and the construction gives one more for every "
    "larger n, so I contains infinitely many eigenvalues and the limit is an "
    "accumulation point of the spectrum. The minimax eigenvalues of the union "
    "form a sequence diverging to +infinity, hence they cannot exhaust the "
    "spectrum. Only the finite count in I is checked numerically; the "
    "passage to infinitely many points is the analytic step stated here."
)


@dataclass(frozen=True)
class Certificate:
    lower: float  # open end
    upper: float  # closed end (the accumulation limit)
    values: tuple
    required: int
    argument: str = LS_ARGUMENT

    @property
    def count(self) -> int:
        return len(self.values)

    @property
    def degenerate(self) -> bool:
        return self.required < 10


def ls_mismatch_certificate(report: AccumulationReport) -> Certificate:
    """Distinct enumerated values in ``I = (lam_{1,k}, limit]``; at least n_max of them."""
    a = report.table[0][1]
    b = report.limit
    vals = tuple(sorted({v for v in report.spectrum if a < v <= b}))
    if len(vals) < report.n_max:
        raise InsufficientPoints(
            f"only {len(vals)} distinct values in ({a!r}, {b!r}], need {report.n_max}; "
            "increase the enumeration depth"
        )
    return Certificate(a, b, vals, report.n_max)


@dataclass
class TailReport:
    exponents: Exponents
    dim: int
    radii: list
    compactness_exponent: float
    unit_value: float  # first eigenvalue of the unit ball
    first_values: list  # first eigenvalue of each ball
    summand_ratios: list
    expected_ratio: float
    partial_sums: list  # extended precision decimal strings
    values: list  # lam_n as decimal strings with enough digits to separate them
    gaps: list  # lam_n - lam(T) as floats
    limit: float
    limit_error: float
    limit_precise: str
    bound_checks: list  # (n, f(S_n) - f(S_2n), certified bound at n)
    checks: dict = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return len(self.values)


def _ratio_tail(ratios: Sequence[float]) -> float:
    """Ratio-test bound for an arbitrary radius list; refuses when inconclusive."""
    if len(ratios) < 2:
        raise DivergentTail("ratio test needs at least three radii")
    half = ratios[len(ratios) // 2:]
    worst = max(half)
    if any(b > a * (1 + 1e-12) for a, b in zip(half, half[1:])):
        raise DivergentTail(
            "ratio test inconclusive: consecutive summand ratios are still increasing, "
            "so no geometric bound on the remaining tail is justified"
        )
    if not worst < 1.0:
        raise DivergentTail(
            f"ratio test inconclusive: consecutive summand ratio reaches {worst}; "
            "the tail may diverge"
        )
    return worst


def shrinking_tail_report(exponents: Exponents, N: int, r0: float, rho: float, n_max: int,
                          radii: Optional[Sequence[float]] = None) -> TailReport:
    """First eigenvalue of a union of balls ``B_{r_i}`` against its truncations.

    ``lam_n`` is the first eigenvalue of the first n balls; it decreases to
    the first eigenvalue of the whole union. All ball eigenvalues come from
    one solve on the unit ball and the dilation law. Passing ``radii``
    replaces the geometric rule by an explicit list; the tail beyond it is
    then bounded by a ratio test and refused when that is inconclusive.
    """
    require_strict(exponents)
    if n_max < 1:
        raise InvalidDomain(f"n_max must be >= 1, got {n_max}")
    beta = exponents.compactness_exponent(N)
    gamma = exponents.gamma
    explicit = radii is not None
    if not explicit:
        tail = GeometricTail(r0, rho, N)
        expected = tail.summand_ratio(exponents)
        if not expected < 1.0:
            raise DivergentTail(f"summand ratio {expected} >= 1")
        radii = [tail.radius(i) for i in range(2 * n_max)]
    else:
        radii = [float(r) for r in radii]
        if any(not r > 0 for r in radii):
            raise InvalidDomain("radii must be positive")
        expected = math.nan
    unit = shoot.eigenpair(ComponentDomain.ball(1.0, N), exponents, 1).value
    unit_ball = ComponentDomain.ball(1.0, N)
    firsts = [scale_eigenvalue(unit, unit_ball, r, exponents) for r in radii]
    summands = [(1.0 / v) ** gamma for v in firsts]
    ratios = [b / a for a, b in zip(summands, summands[1:])]
    if explicit:
        geo = _ratio_tail(ratios)
        n_max = min(n_max, len(radii))
    else:
        geo = expected

    # float partial sums agree to the last bit after a few terms, so the table
    # is evaluated in extended precision
    m = len(firsts)
    digits = int(m * max(1.0, -math.log10(max(min(ratios or [0.5]), 1e-300)))) + 30
    with mpmath.workdps(min(digits, 5000)):
        g = mpmath.mpf(gamma)
        if explicit:
            rs = [mpmath.mpf(r) for r in radii]
        else:
            rs = [mpmath.mpf(r0) * mpmath.mpf(rho) ** i for i in range(m)]
        d = mpmath.mpf(exponents.dilation_exponent(N))
        a = [(mpmath.mpf(unit) * r ** d) ** (-g) for r in rs]
        s = []
        acc = mpmath.mpf(0)
        for t in a:
            acc += t
            s.append(acc)
        f = lambda x: x ** (-1 / g)
        if explicit:
            s_inf = s[-1] + a[-1] * geo / (1 - geo)
        else:
            s_inf = a[0] / (1 - mpmath.mpf(rho) ** beta)
        lam_inf = f(s_inf)
        lam = [f(x) for x in s[:n_max]]
        gaps = [float(v - lam_inf) for v in lam]
        bounds = []
        for n in range(1, n_max + 1):
            tail_n = a[n - 1] * geo / (1 - geo) if n <= m else mpmath.mpf(0)
            bound = f(s[n - 1]) * (1 - (1 + tail_n / s[n - 1]) ** (-1 / g))
            if 2 * n <= m:
                bounds.append((n, float(f(s[n - 1]) - f(s[2 * n - 1])), float(bound)))
        shown = mpmath.mp.dps - 10
        values = [mpmath.nstr(v, shown) for v in lam]
        partial = [mpmath.nstr(x, shown) for x in s[:n_max]]
        precise = mpmath.nstr(lam_inf, shown)
        strictly = all(y < x for x, y in zip(lam, lam[1:]))
        above = all(v > lam_inf for v in lam)

    if explicit:
        stream = calculus.GeometricEigenvalues(firsts[-1], geo ** (-1.0 / gamma), tuple(firsts[:-1]))
        limit, err = calculus.first_eigenvalue_union(exponents, stream)
    else:
        stream = calculus.GeometricEigenvalues.from_tail(GeometricTail(r0, rho, N), unit, exponents)
        limit, err = calculus.first_eigenvalue_union(exponents, stream)
    ratio_dev = max((abs(r / expected - 1.0) for r in ratios), default=0.0) if not explicit else 0.0
    checks = {
        "summand_ratio": ratio_dev <= 1e-12,
        "decreasing": strictly,
        "above_limit": above,
        "gaps_decreasing": all(y < x for x, y in zip(gaps, gaps[1:])),
        "final_gap_small": gaps[-1] < 1e-9 * limit,
        "bound_holds": all(d <= b * (1 + 1e-9) for _, d, b in bounds),
    }
    return TailReport(exponents, N, radii[:n_max], beta, unit, firsts[:n_max], ratios[:max(n_max - 1, 0)],
                      expected, partial, values, gaps, limit, err, precise, bounds, checks)


# -- serialization -----------------------------------------------------------

def _exponents_json(e: Exponents) -> dict:
    return {"p": e.p, "q": e.q, "mode": e.mode}


def _domain_json(d: ComponentDomain) -> dict:
    return {"kind": d.kind, "size": d.size, "dim": d.dim}


def report_to_dict(report) -> dict:
    if isinstance(report, AccumulationReport):
        return {
            "kind": "bi",
            "exponents": _exponents_json(report.exponents),
            "big": _domain_json(report.big),
            "small": _domain_json(report.small),
            "k": report.k,
            "n_max": report.n_max,
            "limit": report.limit,
            "table": [{"n": n, "value": v, "gap": g} for n, v, g in report.table],
            "window_counts": [{"j": j, "eps": e, "count": c} for j, e, c in report.window_counts],
            "big_spectrum": report.big_spectrum,
            "small_spectrum": report.small_spectrum,
            "spectrum": report.spectrum,
            "checks": report.checks,
        }
    if isinstance(report, TailReport):
        return {
            "kind": "tail",
            "exponents": _exponents_json(report.exponents),
            "dim": report.dim,
            "n_max": report.n_max,
            "compactness_exponent": report.compactness_exponent,
            "expected_summand_ratio": None if math.isnan(report.expected_ratio) else report.expected_ratio,
            "unit_ball_value": report.unit_value,
            "limit": report.limit,
            "limit_error": report.limit_error,
            "limit_precise": report.limit_precise,
            "table": [
                {"n": i + 1, "radius": r, "ball_value": b, "partial_sum": s, "value": v, "gap": g}
                for i, (r, b, s, v, g) in enumerate(zip(report.radii, report.first_values,
                                                        report.partial_sums, report.values, report.gaps))
            ],
            "summand_ratios": report.summand_ratios,
            "bound_checks": [{"n": n, "observed": d, "bound": b} for n, d, b in report.bound_checks],
            "checks": report.checks,
        }
    raise TypeError(f"not a report: {type(report).__name__}")


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "lower_open": cert.lower,
        "upper_closed": cert.upper,
        "count": cert.count,
        "required": cert.required,
        "degenerate": cert.degenerate,
        "values": list(cert.values),
        "argument": cert.argument,
    }


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def document(command: str, parameters: dict, reports: Sequence, certificates: Sequence = ()) -> dict:
    """Versioned JSON document for one CLI run."""
    doc = {
        "schema": SCHEMA,
        "command": command,
        "parameters": parameters,
        "reports": [report_to_dict(r) for r in reports],
    }
    if certificates:
        doc["certificates"] = [certificate_to_dict(c) for c in certificates]
    return doc


def reports_to_csv(reports: Sequence) -> str:
    """One table for all reports; bi reports are keyed by (k, n)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if all(isinstance(r, AccumulationReport) for r in reports):
        w.writerow(["k", "n", "value", "gap", "window_count"])
        for r in reports:
            for (n, v, g), (_, _, c) in zip(r.table, r.window_counts):
                w.writerow([r.k, n, repr(v), repr(g), c])
    elif all(isinstance(r, TailReport) for r in reports):
        w.writerow(["n", "radius", "ball_value", "value", "gap"])
        for r in reports:
            for i, (rad, b, v, g) in enumerate(zip(r.radii, r.first_values, r.values, r.gaps)):
                w.writerow([i + 1, repr(rad), repr(b), v, repr(g)])
    else:
        raise TypeError("reports must all be of one kind")
    return buf.getvalue()
