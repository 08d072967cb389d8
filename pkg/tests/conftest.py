import random

import pytest

from frobkill import parse_ring

SG4 = """\
p = {p}
vars = a, b, c, d
ideal = a*d - b*c, b^3 - a^2*c, c^3 - b*d^2, b^2*d - a*c^2
cech = a, d
"""

FERMAT = """\
p = {p}
vars = x, y, z
ideal = x^3 + y^3 + z^3
"""

PLANE = """\
p = {p}
vars = x, y
"""


def sg4(p):
    return parse_ring(SG4.format(p=p))


def fermat(p):
    return parse_ring(FERMAT.format(p=p))


def plane(p):
    return parse_ring(PLANE.format(p=p))


def hasse_oracle(p):
    """Coefficient of (xyz)^(p-1) in (x^3+y^3+z^3)^(p-1), by multinomial expansion."""
    from math import factorial

    n = p - 1
    if n % 3:
        return 0
    k = n // 3
    return factorial(n) // factorial(k) ** 3 % p


def random_poly(ring, rng, max_deg=3, max_terms=4, homogeneous=None):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = homogeneous if homogeneous is not None else rng.randint(0, max_deg)
        e = [0] * ring.nvars
        for _ in range(deg):
            e[rng.randrange(ring.nvars)] += 1
        terms[tuple(e)] = (terms.get(tuple(e), 0) + rng.randrange(1, ring.p)) % ring.p
    return ring.parse("0") + sum(
        (ring.monomial(m, c) for m, c in terms.items() if c), ring.zero()
    )


@pytest.fixture(params=[2, 3, 5])
def p(request):
    return request.param


@pytest.fixture
def rng():
    return random.Random(20240611)
