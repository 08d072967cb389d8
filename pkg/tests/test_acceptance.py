"""Acceptance gate.  Each criterion prints one PASS/FAIL line.

Run alone with ``python3 -m pytest tests/test_acceptance.py -v`` or as a
script: ``python3 tests/test_acceptance.py``.
"""

import copy
import io
import os
import random
import sys
import tempfile
import time

sys.path.insert(0, os.path.dirname(__file__))

from conftest import SG4, fermat, hasse_oracle, plane, random_poly, sg4  # noqa: E402
from frobkill import (  # noqa: E402
    CechComplex,
    ClassHandle,
    FrobeniusPoly,
    Ideal,
    PolyRing,
    Presentation,
    differential,
    find_relation,
    frob_cochain,
    ideal_member,
    kill_all,
    kill_class,
    lc_graded_piece,
    trivialize_relation,
    verify_certificate,
)
from frobkill.cech import Cochain, cochains_equal  # noqa: E402
from frobkill.cli import run_command  # noqa: E402
from frobkill.ringfile import canonical_json  # noqa: E402
from frobkill.tower import Fraction  # noqa: E402

# Frozen oracle values (multinomial expansion, computed before the build).
HASSE = {5: 0, 7: 6}


def report(n, title, ok, detail, seconds):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} ({detail}; {seconds:.1f}s)"
    print(line, flush=True)
    return ok


def sg4_alpha(p):
    pres = sg4(p)
    cx = CechComplex(pres)
    return pres, cx, ClassHandle(lc_graded_piece(cx, 1, 1).basis[0], 1)


def criterion_1():
    start = time.time()
    rows = {}
    ok = True
    for p in (2, 3, 5):
        t0 = time.time()
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sg4.ring")
            with open(path, "w") as fh:
                fh.write(SG4.format(p=p))
            out = io.StringIO()
            code = run_command(["lc", path, "--i", "1", "--degrees", "-4..6"], out)
        table = {}
        for line in out.getvalue().splitlines():
            parts = line.split("\t")
            if len(parts) == 3 and parts[0].lstrip("-").isdigit():
                table[int(parts[0])] = int(parts[1])
        rows[p] = table
        ok &= code == 0 and table == {t: int(t == 1) for t in range(-4, 7)}
        ok &= time.time() - t0 < 60
    return report(1, "SG4 H^1 dims for p=2,3,5 on [-4,6]", ok,
                  "only t=1 nonzero" if ok else f"got {rows}", time.time() - start)


def criterion_2():
    start = time.time()
    ok = True
    for p in (2, 3, 5):
        pres, cx, alpha = sg4_alpha(p)
        rel = find_relation(alpha)
        ok &= rel.g == FrobeniusPoly(p, 1, [pres.ring.zero()])
        ok &= cochains_equal(differential(rel.beta), rel.g.apply_cochain(alpha.cocycle))
        if p == 2:
            ((J, fr),) = rel.beta.comps.items()
            R = pres.ring
            ok &= J == () and fr.den == (0, 0)
            ok &= pres.ideal.reduce(fr.num) == pres.ideal.reduce(R.parse("b*c"))
            ok &= pres.ideal.contains(R.parse("b^4 - a^2*b*c"))
    return report(2, "SG4 relation g = T^p with checked beta", ok,
                  "g = T^p, beta = bc (p=2)", time.time() - start)


def criterion_3():
    start = time.time()
    ok = True
    for p in (2, 3, 5):
        pres, cx, alpha = sg4_alpha(p)
        T, cert = kill_class(alpha, cx)
        ok &= verify_certificate(cert, pres).ok
        ok &= T.injectivity_check()[0]
        ok &= T.rank_bound() <= p**3
        R = pres.ring
        a, d, b2 = R.parse("a"), R.parse("d"), R.parse("b^2")
        tc = trivialize_relation(pres, [a, d], b2)
        Tt = tc.tower
        resid = Tt.embed(b2) - tc.cofactors[0] * Tt.embed(a)
        ok &= Tt.zero_test(resid)
        ok &= not ideal_member(b2, Ideal(R, list(pres.gens) + [a]))
    ok &= time.time() - start < 120
    return report(3, "SG4 kill + verify + trivialize b^2 in (a)", ok,
                  "certificates OK, rank <= p^3", time.time() - start)


def criterion_4():
    start = time.time()
    got = {}
    for p in (5, 7):
        cx = CechComplex(fermat(p))
        pc = lc_graded_piece(cx, 2, 0)
        rel = find_relation(ClassHandle(pc.basis[0], 0))
        lam = None
        if rel.g.s == 1:
            lam = rel.g.coeffs[0].terms.get((0, 0, 0), 0)
        got[p] = (pc.dimension, lam)
    ok = all(got[p] == (1, HASSE[p]) and HASSE[p] == hasse_oracle(p) for p in HASSE)
    ok &= got[7][1] != 0 and got[5][1] == 0
    return report(4, "Fermat cubic Hasse invariant", ok,
                  f"lambda(5)={got[5][1]}, lambda(7)={got[7][1]}", time.time() - start)


def criterion_5():
    start = time.time()
    ok = True
    for p in (2, 3, 5):
        for i in (0, 1):
            T, certs = kill_all(plane(p), i)
            ok &= not T.levels and not T.extras and certs == []
    ok &= time.time() - start < 10
    return report(5, "F_p[x,y] i=0,1 trivial", ok, "trivial towers, no certificates",
                  time.time() - start)


def _leaves(obj, path=()):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _leaves(obj[k], path + (k,))
    elif isinstance(obj, list) and obj:
        for k, v in enumerate(obj):
            yield from _leaves(v, path + (k,))
    else:
        yield path


def _mutate(value, rng):
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value + rng.choice([-1, 1, 2])
    if isinstance(value, str):
        if value and rng.random() < 0.5:
            k = rng.randrange(len(value))
            ch = rng.choice("0123456789abcdZ+*^")
            if ch == value[k]:
                ch = "x"
            return value[:k] + ch + value[k + 1:]
        return value + rng.choice([" + 1", "*a", "0", " + 1*b"])
    if value is None:
        return 0
    if isinstance(value, list):
        return [0]
    return None


def criterion_6():
    start = time.time()
    pres, cx, alpha = sg4_alpha(3)
    _, cert = kill_class(alpha, cx)
    base = cert.data
    rng = random.Random(1234)
    leaves = list(_leaves(base))
    flipped = 0
    with tempfile.TemporaryDirectory() as tmp:
        ring = os.path.join(tmp, "sg4.ring")
        with open(ring, "w") as fh:
            fh.write(SG4.format(p=3))
        path = os.path.join(tmp, "cert.kc")
        with open(path, "w") as fh:
            fh.write(canonical_json(base))
        sane = run_command(["verify", path, ring], io.StringIO()) == 0
        for n in range(100):
            data = copy.deepcopy(base)
            where = leaves[n % len(leaves)] if n < len(leaves) else rng.choice(leaves)
            node = data
            for k in where[:-1]:
                node = node[k]
            node[where[-1]] = _mutate(node[where[-1]], rng)
            with open(path, "w") as fh:
                fh.write(canonical_json(data))
            code = run_command(["verify", path, ring], io.StringIO(),
                               io.StringIO())
            flipped += code == 4
    ok = sane and flipped == 100 and time.time() - start < 120
    return report(6, "certificate tampering detected", ok, f"{flipped}/100 mutations exit 4",
                  time.time() - start)


def _random_cochain(cx, level, rng):
    comps = {}
    for J in cx.subsets(level):
        if rng.random() < 0.7:
            den = tuple(rng.randint(0, 2) if j in J else 0 for j in range(cx.d))
            comps[J] = Fraction(random_poly(cx.ring, rng, 2, 3), den, cx.seq)
    return Cochain(cx, level, comps)


def criterion_7():
    start = time.time()
    rng = random.Random(77)
    names = ["x", "y", "z", "w"]
    fails = {k: 0 for k in ("d∘d", "nf", "freshman", "g-additive", "frob∘d")}

    def ring(max_vars=4):
        return PolyRing(rng.choice([2, 3, 5]), names[: rng.randint(2, max_vars)])

    def complex_():
        R = ring()
        return CechComplex(Presentation(R, [], list(range(rng.randint(1, R.nvars)))))

    for _ in range(100):
        cx = complex_()
        c = _random_cochain(cx, rng.randint(0, cx.d), rng)
        fails["d∘d"] += not differential(differential(c)).is_formally_zero()
    for _ in range(100):
        R = ring(3)
        I = Ideal(R, [random_poly(R, rng, 2, 3) for _ in range(rng.randint(1, 3))])
        f = random_poly(R, rng, 4, 5)
        r = I.reduce(f)
        fails["nf"] += not (I.reduce(r) == r and I.contains(f - r))
    for _ in range(100):
        R = ring()
        f, g = random_poly(R, rng), random_poly(R, rng)
        fails["freshman"] += (f + g) ** R.p != f**R.p + g**R.p
    for _ in range(100):
        R = ring()
        s = rng.randint(0, 2)
        g = FrobeniusPoly(R.p, s, [random_poly(R, rng, 2, 2) for _ in range(s)])
        u, v = random_poly(R, rng, 2, 3), random_poly(R, rng, 2, 3)
        fails["g-additive"] += g(u + v) != g(u) + g(v)
    for _ in range(100):
        cx = complex_()
        c = _random_cochain(cx, rng.randint(0, cx.d), rng)
        fails["frob∘d"] += not cochains_equal(frob_cochain(differential(c)),
                                              differential(frob_cochain(c)))
    ok = not any(fails.values()) and time.time() - start < 600
    detail = ", ".join(f"{k} {100 - v}/100" for k, v in fails.items())
    return report(7, "property suites", ok, detail, time.time() - start)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7]


def test_criterion_1_sg4_cohomology(capsys):
    with capsys.disabled():
        assert criterion_1()


def test_criterion_2_sg4_relation(capsys):
    with capsys.disabled():
        assert criterion_2()


def test_criterion_3_sg4_kill_and_trivialize(capsys):
    with capsys.disabled():
        assert criterion_3()


def test_criterion_4_hasse_dichotomy(capsys):
    with capsys.disabled():
        assert criterion_4()


def test_criterion_5_cohen_macaulay(capsys):
    with capsys.disabled():
        assert criterion_5()


def test_criterion_6_certificate_soundness(capsys):
    with capsys.disabled():
        assert criterion_6()


def test_criterion_7_property_suites(capsys):
    with capsys.disabled():
        assert criterion_7()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
