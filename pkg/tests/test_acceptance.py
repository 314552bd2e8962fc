"""Acceptance checks, one test and one printed PASS/FAIL line per criterion."""
import math
import time

import mpmath
import numpy as np
import pytest
from scipy.special import jn_zeros

from golden_commands import COMMANDS, argv_for
from pqspec import calculus, examples, oracle, shoot
from pqspec.cli import main
from pqspec.core import CALIBRATION, ComponentDomain, Exponents, scale_eigenvalue


@pytest.fixture
def verdict(capsys):
    def report(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return report


def test_1_calibration(verdict):
    t0 = time.perf_counter()
    devs = []
    for p in (1.5, 2.0, 3.0, 4.0):
        lam = shoot.interval_eigenvalue(Exponents(p, p, CALIBRATION), 1.0, 1).value
        devs.append(abs(lam / oracle.pi_p(p) ** p - 1))
    disk = shoot.ball_eigenvalue_radial(Exponents(2, 2, CALIBRATION), 1.0, 2, 1).value
    devs.append(abs(disk / jn_zeros(0, 1)[0] ** 2 - 1))
    dt = time.perf_counter() - t0
    verdict(1, max(devs) < 1e-6 and dt < 5, f"max rel dev {max(devs):.2e} (< 1e-6), {dt:.2f} s (< 5 s)")


def test_2_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for pq in [(3, 2), (4, 2), (2.5, 1.5), (5, 4)]:
        e = Exponents(*pq)
        for L in (0.5, 1.0, 2.0):
            ref, _, _ = oracle.extrapolated_first(e, L, (1024, 2048, 4096))
            lam = shoot.interval_eigenvalue(e, L, 1).value
            worst = max(worst, abs(lam / ref - 1))
    dt = time.perf_counter() - t0
    verdict(2, worst < 1e-4 and dt < 120, f"max rel dev {worst:.2e} (< 1e-4), {dt:.1f} s (< 120 s)")


def test_3_dilation_law(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(20):
        p = rng.uniform(1.5, 5.0)
        q = rng.uniform(1.2, p - 0.2)
        e = Exponents(p, q)
        t = rng.uniform(0.2, 5.0)
        k = int(rng.integers(1, 3))
        kind = rng.choice(["interval", "ball2", "ball3"])
        if kind == "interval":
            dom = ComponentDomain.interval(rng.uniform(0.3, 3.0))
        else:
            dom = ComponentDomain.ball(rng.uniform(0.3, 3.0), int(kind[-1]))
        # both sides are separate direct solves, not the rescaling shortcut
        base = shoot.eigenpair(dom, e, k, direct=True).value
        moved = shoot.eigenpair(dom.dilate(t), e, k, direct=True).value
        worst = max(worst, abs(moved / scale_eigenvalue(base, dom, t, e) - 1))
    dt = time.perf_counter() - t0
    verdict(3, worst < 1e-6 and dt < 30, f"20 cases, max rel dev {worst:.2e} (< 1e-6), {dt:.1f} s (< 30 s)")


def test_4_combination_enumeration(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    pairs = [(3, 2), (4, 2), (2.5, 1.5), (5, 4)]
    mismatches = 0
    worst_norm = 0.0
    checked = 0
    for trial in range(200):
        e = Exponents(*pairs[trial % 4])
        m = int(rng.integers(1, 4))
        spectra = [sorted(rng.uniform(0.5, 50.0, int(rng.integers(1, 5))).tolist()) for _ in range(m)]
        cutoff = math.inf if trial % 3 == 0 else float(rng.uniform(0.5, 60.0))
        pruned = calculus.enumerate_spectrum(e, spectra, cutoff=cutoff)
        brute = calculus.brute_force_spectrum(e, spectra, cutoff=cutoff)
        if pruned.values != [c.value for c in brute] or [c.provenance for c in pruned] != [c.provenance for c in brute]:
            mismatches += 1
        for c in pruned:
            worst_norm = max(worst_norm, abs(math.fsum(a ** e.q for a in c.coefficients) - 1))
            checked += 1
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and worst_norm <= 1e-12 and dt < 5
    verdict(4, ok, f"200 instances, {mismatches} mismatches, {checked} outputs, "
                   f"max |sum|alpha|^q - 1| = {worst_norm:.1e} (<= 1e-12), {dt:.2f} s (< 5 s)")


def _union_slopes(e, Ms=(256, 512, 1024, 2048, 4096)):
    pairs = [shoot.interval_eigenvalue(e, 1.0, 1), shoot.interval_eigenvalue(e, 0.5, 1)]
    combined = calculus.combine(e, calculus.Selection.from_pairs(pairs))
    slopes = []
    for pr, f in zip(pairs, calculus.assemble(combined, pairs)):
        res = [oracle.residual(e, combined.value, oracle.DiscreteProfile.sample(pr.domain.size, M, f), 1.0)
               for M in Ms]
        hs = [pr.domain.size / (M + 1) for M in Ms]
        slopes.append(float(np.polyfit(np.log(hs), np.log(res), 1)[0]))
    return slopes


def test_5_residual_order(verdict, capsys):
    t0 = time.perf_counter()
    slopes = _union_slopes(Exponents(4, 2))
    info = _union_slopes(Exponents(3, 2))
    dt = time.perf_counter() - t0
    with capsys.disabled():
        print(f"\n  (info) p=3 q=2 slopes {info[0]:.3f}, {info[1]:.3f}; the order tends to 2 - 1/p")
    ok = all(1.7 <= s <= 2.3 for s in slopes) and dt < 60
    verdict(5, ok, f"p=4 q=2 per-component slopes {slopes[0]:.3f}, {slopes[1]:.3f} (in [1.7, 2.3]), {dt:.1f} s")


def test_6_accumulation(verdict):
    t0 = time.perf_counter()
    e = Exponents(3, 2)
    reps = examples.bi_union_reports(e, ComponentDomain.interval(1.0), ComponentDomain.interval(0.25),
                                     [1, 2, 3], 50)
    parts = []
    ok = True
    for rep in reps:
        lams, gaps = rep.values, rep.gaps
        a, b = lams[0], rep.limit
        inside = len({v for v in rep.spectrum if a < v < b})
        good = (all(y > x for x, y in zip(lams, lams[1:])) and all(v < b for v in lams)
                and gaps[-1] < 0.01 * gaps[0] and inside >= 50)
        ok &= good
        parts.append(f"k={rep.k}: {inside} values, gap ratio {gaps[-1] / gaps[0]:.1e}")
    ratios = [rep.limit / reps[0].limit / rep.k ** 3 - 1 for rep in reps]
    ok &= max(abs(r) for r in ratios) < 1e-6
    dt = time.perf_counter() - t0
    ok &= dt < 60
    verdict(6, ok, "; ".join(parts) + f"; limit ratio dev {max(map(abs, ratios)):.1e}; {dt:.1f} s")


def test_7_tail(verdict):
    t0 = time.perf_counter()
    e = Exponents(3, 2)
    rep = examples.shrinking_tail_report(e, 1, 0.5, 0.5, 30)
    expected = 0.5 ** e.compactness_exponent(1)
    ratio_dev = max(abs(r / expected - 1) for r in rep.summand_ratios)
    with mpmath.workdps(400):
        vals = [mpmath.mpf(v) for v in rep.values]
        decreasing = all(y < x for x, y in zip(vals, vals[1:]))
    gap = rep.gaps[-1] / rep.limit
    bound_ok = all(0 < d <= b for _, d, b in rep.bound_checks) and len(rep.bound_checks) == 30
    dt = time.perf_counter() - t0
    ok = ratio_dev <= 1e-12 and decreasing and gap < 1e-9 and bound_ok and dt < 30
    verdict(7, ok, f"summand ratio dev {ratio_dev:.1e}, decreasing={decreasing}, "
                   f"relative gap {gap:.1e} (< 1e-9), n-vs-2n bounds hold={bound_ok}, {dt:.2f} s")


def test_8_k_power_law(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for pq in [(3, 2), (4, 2), (2.5, 1.5), (5, 4)]:
        e = Exponents(*pq)
        lam1 = shoot.interval_eigenvalue_bvp(e, 1.0, 1).value
        for k in range(2, 6):
            lam = shoot.interval_eigenvalue_bvp(e, 1.0, k).value
            worst = max(worst, abs(lam / (k ** e.p * lam1) - 1))
    dt = time.perf_counter() - t0
    verdict(8, worst < 1e-6 and dt < 30, f"max rel dev {worst:.2e} (< 1e-6), {dt:.1f} s (< 30 s)")


def test_9_determinism(verdict, tmp_path):
    same = []
    for name in sorted(COMMANDS):
        outs = []
        for run in ("a", "b"):
            d = tmp_path / name / run
            d.mkdir(parents=True)
            argv, files = argv_for(name, d)
            assert main(argv) == 0
            outs.append({f: (d / f).read_bytes() for f in files})
        same.append(outs[0] == outs[1])
    verdict(9, all(same), f"{sum(same)}/{len(same)} golden commands byte-identical across two runs")
