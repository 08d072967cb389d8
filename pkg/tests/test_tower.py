import pytest

from conftest import sg4
from frobkill import PreconditionError, RingTower, adjoin_root, compositum
from frobkill.ringfile import parse_ring, parse_tower_text, serialize_ring, tower_from_json, tower_to_json, tower_to_text
from frobkill.tower import Fraction, check_monic


def sqrt_bc(p):
    pres = sg4(p)
    T = pres.trivial_tower()
    ring = T.ring.extend(["Z"])
    Z, b, c = ring.gen("Z"), ring.gen("b"), ring.gen("c")
    return pres, adjoin_root(T, Z**2 - b * c, "Z")


def test_adjoin_and_zero_tests():
    pres, T = sqrt_bc(2)
    assert T.rank_bound() == 2
    assert T.injectivity_check()[0]
    R = T.ring
    a, b, Z = R.gen("a"), R.gen("b"), R.gen("Z")
    u = b**2 - Z * a
    assert not T.zero_test(u)
    assert T.zero_test(u * u)  # b^4 - a^2 bc is in P
    assert not T.loc_zero_test(Fraction(b**2, (1, 0), T.seq))


def test_injectivity_failure_detected():
    pres = sg4(3)
    T = pres.trivial_tower()
    ring = T.ring.extend(["Z"])
    Z = ring.gen("Z")
    bad = RingTower(pres, (("Z", Z - 1),), (Z,))
    ok, elim = bad.injectivity_check()
    assert not ok
    assert [str(g) for g in elim] == ["1"]


def test_monicity_enforced():
    pres = sg4(2)
    ring = pres.ring.extend(["Z"])
    Z, a = ring.gen("Z"), ring.gen("a")
    with pytest.raises(PreconditionError):
        adjoin_root(pres.trivial_tower(), a * Z**2 - 1, "Z")
    with pytest.raises(PreconditionError):
        check_monic(a + 1, ring.index("Z"), ring.nvars - 1)


def test_compositum_renames_apart():
    pres, T = sqrt_bc(3)
    C = compositum(T, T)
    assert C.adjoined == ["Z", "Z_2"]
    assert C.rank_bound() == 4
    assert C.injectivity_check()[0]


def test_tower_serialization_roundtrip():
    pres, T = sqrt_bc(5)
    U = tower_from_json(pres, tower_to_json(T))
    assert tower_to_json(U) == tower_to_json(T)
    V = parse_tower_text(tower_to_text(T))
    assert tower_to_json(V) == tower_to_json(T)


def test_ring_roundtrip_and_errors(p):
    pres = sg4(p)
    assert parse_ring(serialize_ring(pres)) == pres
    from frobkill import ParseError

    with pytest.raises(ParseError, match="inhomogeneous generator x\\^2-y \\(term degrees \\[1, 2\\]\\)"):
        parse_ring("p = 3\nvars = x, y\nideal = x^2-y\n")
    with pytest.raises(ParseError, match="prime"):
        parse_ring("p = 4\nvars = x\n")
    with pytest.raises(ParseError, match="unknown identifier"):
        parse_ring("p = 3\nvars = x\ncech = y\n")


def test_sg4_parametrization_kills_generators(p):
    # a, b, c, d -> s^4, s^3 t, s t^3, t^4
    from frobkill import PolyRing

    S = PolyRing(p, ["s", "t"])
    s, t = S.gens()
    images = [s**4, s**3 * t, s * t**3, t**4]
    for g in sg4(p).gens:
        assert not g.eval_to(images)
