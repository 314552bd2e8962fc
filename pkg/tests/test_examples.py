import csv
import io
import json
import math

import mpmath
import pytest

from pqspec import examples, shoot
from pqspec.core import ComponentDomain, Exponents
from pqspec.errors import DivergentTail, InsufficientPoints

E32 = Exponents(3, 2)
BIG, SMALL = ComponentDomain.interval(1.0), ComponentDomain.interval(0.25)


@pytest.fixture(scope="module")
def bi50():
    return examples.bi_union_report(E32, BIG, SMALL, 1, 50)


def test_bi_table(bi50):
    lams, gaps = bi50.values, bi50.gaps
    assert all(b > a for a, b in zip(lams, lams[1:]))
    assert all(v < bi50.limit for v in lams)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 0.01 * gaps[0]
    assert all(bi50.checks.values())


def test_bi_window_counts(bi50):
    counts = [c for _, _, c in bi50.window_counts]
    assert all(c >= 50 - j for (j, _, _), c in zip(bi50.window_counts, counts))
    assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_bi_symmetric_case():
    rep = examples.bi_union_report(E32, BIG, BIG, 1, 1)
    lam1 = shoot.interval_eigenvalue(E32, 1.0, 1).value
    assert rep.table[0][1] == pytest.approx(2 ** ((E32.q - E32.p) / E32.q) * lam1, rel=1e-15)


def test_certificate(bi50):
    cert = examples.ls_mismatch_certificate(bi50)
    assert cert.count >= 50
    assert cert.upper == bi50.limit and cert.upper in cert.values
    assert all(cert.lower < v <= cert.upper for v in cert.values)
    assert len(set(cert.values)) == cert.count
    assert "finitely many" in cert.argument
    assert not cert.degenerate


def test_degenerate_certificate():
    rep = examples.bi_union_report(E32, BIG, SMALL, 1, 1)
    cert = examples.ls_mismatch_certificate(rep)
    assert cert.degenerate and cert.count >= 1


def test_duplicate_values_count_once():
    # identical small pieces: swapping them gives the same value twice
    rep = examples.bi_union_report(E32, SMALL, SMALL, 1, 3, depth=3)
    assert len(rep.spectrum) == len(set(rep.spectrum))


def test_insufficient_points(bi50):
    starved = examples.AccumulationReport(**{**bi50.__dict__, "spectrum": bi50.spectrum[:10]})
    with pytest.raises(InsufficientPoints):
        examples.ls_mismatch_certificate(starved)


def test_distinct_limits():
    reps = examples.bi_union_reports(E32, BIG, SMALL, [1, 2, 3], 10)
    for k, rep in zip((1, 2, 3), reps):
        assert rep.limit / reps[0].limit == pytest.approx(k ** 3, rel=1e-10)


@pytest.fixture(scope="module")
def tail30():
    return examples.shrinking_tail_report(E32, 1, 0.5, 0.5, 30)


def test_tail_report(tail30):
    assert all(tail30.checks.values())
    assert tail30.compactness_exponent == 7.0
    assert all(r == pytest.approx(0.5 ** 7, rel=1e-12) for r in tail30.summand_ratios)
    with mpmath.workdps(400):
        vals = [mpmath.mpf(v) for v in tail30.values]
        assert all(b < a for a, b in zip(vals, vals[1:]))
    assert all(g > 0 for g in tail30.gaps)
    assert tail30.gaps[-1] < 1e-9 * tail30.limit


def test_tail_bound_certified(tail30):
    for n, observed, bound in tail30.bound_checks:
        assert 0 < observed <= bound


def test_tail_single_term():
    rep = examples.shrinking_tail_report(E32, 1, 0.5, 0.5, 1)
    assert float(rep.values[0]) == pytest.approx(shoot.interval_eigenvalue(E32, 1.0, 1).value, rel=1e-14)


def test_tail_higher_dimension():
    rep = examples.shrinking_tail_report(Exponents(4, 2), 2, 1.0, 0.7, 12)
    assert all(rep.checks[k] for k in ("summand_ratio", "decreasing", "above_limit", "bound_holds"))


def test_tail_explicit_radii():
    radii = [0.5 * 0.4 ** i for i in range(10)]
    rep = examples.shrinking_tail_report(E32, 1, 0, 0, 5, radii=radii)
    geo = examples.shrinking_tail_report(E32, 1, 0.5, 0.4, 5)
    assert rep.limit == pytest.approx(geo.limit, rel=1e-12)
    with pytest.raises(DivergentTail):
        examples.shrinking_tail_report(E32, 1, 0, 0, 5, radii=[0.5 / (i + 1) for i in range(10)])


def test_serialization(bi50, tail30):
    cert = examples.ls_mismatch_certificate(bi50)
    doc = json.loads(examples.to_json(examples.document("example bi", {}, [bi50], [cert])))
    assert doc["schema"] == 1
    assert doc["reports"][0]["limit"] == bi50.limit
    assert len(doc["reports"][0]["table"]) == 50
    assert doc["certificates"][0]["count"] == cert.count
    rows = list(csv.reader(io.StringIO(examples.reports_to_csv([bi50]))))
    assert rows[0] == ["k", "n", "value", "gap", "window_count"]
    assert float(rows[1][2]) == bi50.table[0][1]
    tdoc = json.loads(examples.to_json(examples.document("example tail", {}, [tail30])))
    assert tdoc["reports"][0]["limit"] == tail30.limit
    assert not math.isnan(tdoc["reports"][0]["limit_error"])
    rows = list(csv.reader(io.StringIO(examples.reports_to_csv([tail30]))))
    assert rows[0] == ["n", "radius", "ball_value", "value", "gap"]
    assert len(rows) == 31
