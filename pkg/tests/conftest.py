import pytest

from pqspec.core import Exponents

STRICT_PAIRS = [(3.0, 2.0), (4.0, 2.0), (2.5, 1.5), (5.0, 4.0)]


@pytest.fixture(params=STRICT_PAIRS, ids=lambda pq: f"p{pq[0]:g}-q{pq[1]:g}")
def strict_exponents(request):
    return Exponents(*request.param)
