import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqspec import calculus, oracle, shoot
from pqspec.calculus import Choice, GeometricEigenvalues, Selection
from pqspec.core import ComponentDomain, Exponents, GeometricTail, scale_eigenvalue
from pqspec.errors import BudgetExceeded, DivergentTail, EmptySelection, InvalidExponents, TooManyVariants

E32 = Exponents(3, 2)
E42 = Exponents(4, 2)


def sel(*values):
    return Selection.from_values(values)


def test_single_component():
    pair = calculus.combine(E32, sel(7.5, None))
    assert pair.value == 7.5
    assert pair.coefficients == (1.0, 0.0)


def test_equal_components():
    pair = calculus.combine(E42, sel(3.0, 3.0))
    assert pair.value == pytest.approx(1.5, rel=1e-15)
    assert pair.coefficients == pytest.approx((2 ** -0.5, 2 ** -0.5), rel=1e-15)


def test_hand_example():
    pair = calculus.combine(E32, sel(1.0, 3.0))
    assert pair.value == pytest.approx(3 / math.sqrt(10), rel=1e-15)
    assert pair.coefficients[0] ** 2 + pair.coefficients[1] ** 2 == pytest.approx(1.0, abs=1e-12)


def test_empty_selection():
    with pytest.raises(EmptySelection):
        calculus.combine(E32, sel(None, None))


def test_calibration_rejected():
    from pqspec.core import CALIBRATION

    with pytest.raises(InvalidExponents):
        calculus.combine(Exponents(2, 2, CALIBRATION), sel(1.0))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_sign_variants(m):
    pair = calculus.combine(E32, sel(*([2.0] * m)))
    variants = calculus.sign_variants(pair)
    assert len(variants) == 2 ** m
    assert len(set(variants)) == 2 ** m
    assert all(abs(c) == abs(pair.coefficients[0]) for v in variants for c in v)


def test_sign_variant_guard():
    pair = calculus.combine(E32, sel(*([2.0] * 21)))
    with pytest.raises(TooManyVariants):
        calculus.sign_variants(pair)


def test_first_eigenvalue_finite():
    assert calculus.first_eigenvalue_union(E32, [4.0]) == (4.0, 0.0)
    lam, err = calculus.first_eigenvalue_union(E32, [4.0] * 5)
    assert lam == pytest.approx(5 ** -0.5 * 4.0, rel=1e-15) and err == 0.0


def test_first_eigenvalue_geometric_stream(strict_exponents):
    e = strict_exponents
    unit = 13.0
    tail = GeometricTail(0.5, 0.6, 2)
    stream = GeometricEigenvalues.from_tail(tail, unit, e)
    lam, err = calculus.first_eigenvalue_union(e, stream)
    a0 = (1.0 / scale_eigenvalue(unit, ComponentDomain.ball(1.0, 2), 0.5, e)) ** e.gamma
    exact = (a0 / (1.0 - tail.summand_ratio(e))) ** (-1.0 / e.gamma)
    assert lam == pytest.approx(exact, rel=1e-12)
    assert err < 1e-12 * lam


def test_truncated_stream_brackets_limit():
    stream = GeometricEigenvalues(2.0, 2.0)
    exact, _ = calculus.first_eigenvalue_union(E32, stream)
    for n in (1, 3, 6):
        lam, err = calculus.first_eigenvalue_union(E32, stream, n)
        assert abs(lam - exact) <= err
        partial = calculus.combined_value(E32, [stream.value(i) for i in range(n)])
        assert partial - exact <= 2 * err


def test_divergent_tail():
    with pytest.raises(DivergentTail):
        calculus.first_eigenvalue_union(E32, GeometricEigenvalues(2.0, 1.0))


def test_stream_with_prefix():
    stream = GeometricEigenvalues(2.0, 4.0, prefix=(1.0, 1.5))
    lam, _ = calculus.first_eigenvalue_union(E32, stream)
    s = 1.0 + (1 / 1.5) ** 2 + (1 / 2.0) ** 2 / (1 - 1 / 16)
    assert lam == pytest.approx(s ** -0.5, rel=1e-14)


def test_enumerate_single_component():
    res = calculus.enumerate_spectrum(E32, [[1.0, 2.0, 3.0, 4.0, 5.0]])
    assert res.values == [1.0, 2.0, 3.0, 4.0, 5.0]


def test_enumerate_hand_example():
    mu = 1.7
    res = calculus.enumerate_spectrum(E42, [[mu, 4 * mu], [mu, 4 * mu]])
    expected = sorted({mu / 2, 4 * mu / 5, mu, 2 * mu, 4 * mu})
    assert res.values == pytest.approx(expected, rel=1e-15)
    assert sum(len(c.provenance) for c in res) == 8
    assert res.visited == 8
    assert res.depths == (2, 2)


def test_budget():
    spectra = [[float(k) for k in range(1, 11)]] * 4
    with pytest.raises(BudgetExceeded):
        calculus.enumerate_spectrum(E32, spectra, budget=100)


def test_workers_deterministic():
    rng = np.random.default_rng(3)
    spectra = [sorted(rng.uniform(1, 40, 6)) for _ in range(3)]
    one = calculus.enumerate_spectrum(E32, spectra, cutoff=20.0)
    many = calculus.enumerate_spectrum(E32, spectra, cutoff=20.0, workers=4)
    assert one.values == many.values
    assert [c.provenance for c in one] == [c.provenance for c in many]


def test_dedup_tolerance_merges():
    res = calculus.enumerate_spectrum(E32, [[1.0], [1.0 + 1e-14]], rel_tol=1e-12)
    assert len(res) == 2  # the two singletons merge, the pair stays apart
    assert len(res[1].provenance) == 2


spectra_st = st.lists(
    st.lists(st.floats(0.5, 100.0), min_size=1, max_size=4).map(sorted), min_size=1, max_size=3
)
exps_st = st.sampled_from([(3.0, 2.0), (4.0, 2.0), (2.5, 1.5), (5.0, 4.0), (6.0, 1.5)])


@settings(max_examples=150, deadline=None)
@given(spectra=spectra_st, pq=exps_st, cut=st.one_of(st.just(math.inf), st.floats(0.3, 120.0)))
def test_pruned_equals_brute_force(spectra, pq, cut):
    e = Exponents(*pq)
    pruned = calculus.enumerate_spectrum(e, spectra, cutoff=cut)
    brute = calculus.brute_force_spectrum(e, spectra, cutoff=cut)
    assert pruned.values == [c.value for c in brute]
    assert [c.provenance for c in pruned] == [c.provenance for c in brute]
    first, _ = calculus.first_eigenvalue_union(e, [s[0] for s in spectra])
    for c in pruned:
        assert abs(math.fsum(a ** e.q for a in c.coefficients) - 1.0) <= 1e-12
        assert c.value >= first * (1 - 1e-15)


@settings(max_examples=200, deadline=None)
@given(values=st.lists(st.floats(0.1, 1e4), min_size=1, max_size=6), pq=exps_st,
       extra=st.floats(0.1, 1e4), bump=st.floats(1.001, 10.0))
def test_monotonicity(values, pq, extra, bump):
    e = Exponents(*pq)
    lam = calculus.combined_value(e, values)
    assert lam <= min(values)
    # strict inequalities hold in exact arithmetic; in floating point only
    # when the summands involved are resolvable against the sum
    lo = min(values)
    if len(values) == 1:
        assert lam == values[0]
    elif sorted((lo / v) ** e.gamma for v in values)[-2] > 1e-13:
        assert lam < lo
    grown = calculus.combined_value(e, values + [extra])
    assert grown <= lam
    if (lo / extra) ** e.gamma > 1e-13:
        assert grown < lam
    raised = calculus.combined_value(e, [values[0] * bump] + values[1:])
    assert raised >= lam
    if (lo / values[0]) ** e.gamma > 1e-13:
        assert raised > lam


@settings(max_examples=100, deadline=None)
@given(values=st.lists(st.floats(1e-3, 1e6), min_size=1, max_size=8), pq=exps_st)
def test_coefficient_law(values, pq):
    e = Exponents(*pq)
    pair = calculus.combine(e, Selection.from_values(values))
    for a, v in zip(pair.coefficients, values):
        assert a == pytest.approx((pair.value / v) ** (1 / (e.p - e.q)), rel=1e-14)


def test_order_independent():
    vals = [3.0, 1.0, 7.0, 2.5]
    a = calculus.combined_value(E32, vals)
    assert all(calculus.combined_value(E32, list(perm)) == a for perm in
               [vals[::-1], sorted(vals), [7.0, 2.5, 3.0, 1.0]])


def test_assembled_eigenfunction_residual():
    # two intervals scaled so their first eigenvalues are 1 and 3
    e = E32
    lam1 = shoot.interval_eigenvalue(e, 1.0, 1).value
    d = e.dilation_exponent(1)
    lengths = [(1.0 / lam1) ** (1 / d), (3.0 / lam1) ** (1 / d)]
    pairs = [shoot.interval_eigenvalue(e, L, 1) for L in lengths]
    assert [p.value for p in pairs] == pytest.approx([1.0, 3.0], rel=1e-12)
    combined = calculus.combine(e, Selection.from_pairs(pairs))
    assert combined.value == pytest.approx(3 / math.sqrt(10), rel=1e-12)
    for variant in calculus.sign_variants(combined):
        funcs = calculus.assemble(combined, pairs, variant)
        for pr, f in zip(pairs, funcs):
            prof = oracle.DiscreteProfile.sample(pr.domain.size, 1024, f)
            # the union is normalized, so the source term uses norm 1
            assert oracle.residual(e, combined.value, prof, 1.0) < 1e-5
    # the wrong eigenvalue leaves an O(1) residual
    prof = oracle.DiscreteProfile.sample(lengths[0], 1024, calculus.assemble(combined, pairs)[0])
    assert oracle.residual(e, 1.0, prof, 1.0) > 1e-3


def test_choice_keys():
    s = Selection((Choice(2, 5.0), None, Choice(1, 1.0)))
    assert s.deltas == (1, 0, 1)
    assert s.key() == (2, 0, 1)
    assert s.selected == [0, 2]
