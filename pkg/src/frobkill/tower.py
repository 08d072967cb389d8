"""Base presentations, module-finite towers built from monic adjunctions,
and fractions with Čech-sequence denominators."""

from __future__ import annotations

from .errors import InjectivityError, PreconditionError
from .groebner import Ideal, saturate
from .poly import MonomialOrder, Poly, PolyRing


class Presentation:
    """A standard graded quotient F_p[vars]/P together with a Čech sequence."""

    def __init__(self, ring, gens, cech=None):
        self.ring = ring
        self.gens = tuple(g.to_ring(ring) for g in gens if g)
        self.ideal = Ideal(ring, self.gens)
        if cech is None:
            cech = range(ring.nvars)
        self.cech = tuple(ring.index(c) if isinstance(c, str) else c for c in cech)
        if len(set(self.cech)) != len(self.cech):
            raise PreconditionError("repeated element in the Čech sequence")

    @property
    def p(self):
        return self.ring.p

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.ring == other.ring
            and self.gens == other.gens
            and self.cech == other.cech
        )

    def __hash__(self):
        return hash((self.ring, self.cech, len(self.gens)))

    def __repr__(self):
        return f"Presentation(p={self.p}, vars={list(self.ring.names)}, ideal={[str(g) for g in self.gens]})"

    def is_standard_graded(self):
        return all(g.is_homogeneous() for g in self.gens)

    def require_graded(self):
        for g in self.gens:
            if not g.is_homogeneous():
                raise PreconditionError(
                    f"inhomogeneous generator {g} (term degrees {g.degrees()})"
                )

    def dim(self):
        return self.ideal.krull_dim()

    def with_cech(self, cech):
        return Presentation(self.ring, self.gens, cech)

    def cech_is_primary(self):
        """R/(sequence) is finite dimensional, i.e. the sequence is m-primary."""
        extra = [self.ring.gen(i) for i in self.cech]
        return Ideal(self.ring, list(self.gens) + extra).krull_dim() <= 0

    def trivial_tower(self):
        return RingTower(self, ())


def seq_exponent(nvars, seq, exps):
    e = [0] * nvars
    for i, x in zip(seq, exps):
        e[i] += x
    return tuple(e)


class Fraction:
    """num / Π x_{seq[j]}^{den[j]} in a localization of a tower ring."""

    __slots__ = ("num", "den", "seq")

    def __init__(self, num, den, seq):
        self.num = num
        self.den = tuple(den)
        self.seq = tuple(seq)
        if len(self.den) != len(self.seq) or min(self.den, default=0) < 0:
            raise ValueError("bad denominator exponents")

    @property
    def ring(self):
        return self.num.ring

    def __repr__(self):
        return f"Fraction({self.num}, {list(self.den)})"

    def is_zero(self):
        return not self.num

    def _shift(self, target):
        extra = [a - b for a, b in zip(target, self.den)]
        return self.num.mul_monomial(seq_exponent(self.ring.nvars, self.seq, extra))

    def __add__(self, other):
        common = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return Fraction(self._shift(common) + other._shift(common), common, self.seq)

    def __neg__(self):
        return Fraction(-self.num, self.den, self.seq)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Fraction):
            den = tuple(a + b for a, b in zip(self.den, other.den))
            return Fraction(self.num * other.num, den, self.seq)
        return Fraction(self.num * other, self.den, self.seq)

    __rmul__ = __mul__

    def frobenius(self, k=1):
        q = self.ring.p**k
        return Fraction(self.num.frobenius(k), tuple(q * x for x in self.den), self.seq)

    def to_ring(self, ring):
        return Fraction(self.num.to_ring(ring), self.den, self.seq)

    def lift_to(self, target):
        """Numerator over the larger denominator `target` (componentwise >= den)."""
        if any(a < b for a, b in zip(target, self.den)):
            raise ValueError("target denominator is smaller than the fraction's")
        return self._shift(target)

    def degree(self):
        """Internal degree (numerator homogeneous)."""
        if not self.num:
            return None
        return self.num.total_degree() - sum(self.den)

    def cross_difference(self, other):
        """Numerator of self - other over the common denominator."""
        return (self - other).num


class RingTower:
    """F_p[base vars, Z_1..Z_m]/(P + monic relations + side relations).

    `levels` is a tuple of (variable name, relation monic in it); `extras`
    holds further relations (fraction identities, torsion discovered while
    building).  The order is an elimination order: adjoined variables
    dominate the base block, so one Gröbner basis serves both zero tests and
    the injectivity check.
    """

    def __init__(self, base, levels, extras=(), verify=False):
        self.base = base
        names = [nm for nm, _ in levels]
        self.ring = base.ring.extend(names) if names else base.ring
        self.levels = tuple((nm, rel.to_ring(self.ring)) for nm, rel in levels)
        self.extras = tuple(e.to_ring(self.ring) for e in extras if e)
        nb = base.ring.nvars
        self.order = MonomialOrder(
            (tuple(range(nb, self.ring.nvars)), tuple(range(nb))),
            name="block(adjoined>base; grevlex each)" if names else "grevlex",
        )
        gens = [g.to_ring(self.ring) for g in base.gens]
        gens += [rel for _, rel in self.levels] + list(self.extras)
        self.ideal = Ideal(self.ring, gens, self.order)
        self._sat = {}
        for k, (nm, rel) in enumerate(self.levels):
            check_monic(rel, self.ring.index(nm), nb + k)
        if verify:
            ok, _ = self.injectivity_check()
            if not ok:
                raise InjectivityError("base ring does not inject into the tower")

    @property
    def p(self):
        return self.base.p

    @property
    def seq(self):
        return self.base.cech

    @property
    def adjoined(self):
        return [nm for nm, _ in self.levels]

    def __repr__(self):
        return f"RingTower(levels={[(n, str(r)) for n, r in self.levels]}, extras={len(self.extras)})"

    def rank_bound(self):
        out = 1
        for nm, rel in self.levels:
            out *= rel.degree_in(nm)
        return out

    def embed(self, f):
        return f.to_ring(self.ring)

    def zero_test(self, u):
        return self.ideal.contains(self.embed(u))

    def normal_form(self, u):
        return self.ideal.reduce(self.embed(u))

    def saturation(self, support):
        support = tuple(sorted(set(support)))
        sat = self._sat.get(support)
        if sat is None:
            if not support:
                sat = self.ideal
            else:
                f = self.ring.one()
                for j in support:
                    f = f * self.ring.gen(self.seq[j])
                sat = saturate(self.ideal, f, certify=False)
            self._sat[support] = sat
        return sat

    def loc_zero_test(self, fr, support=None):
        """fr == 0 in the localization at the sequence elements in `support`
        (default: those appearing in the denominator)."""
        num = self.embed(fr.num)
        if not num:
            return True
        if support is None:
            support = [j for j, x in enumerate(fr.den) if x]
        support = tuple(sorted(set(support)))
        if not support:
            return self.ideal.contains(num)
        xs = self.ring.one()
        for j in support:
            xs = xs * self.ring.gen(self.seq[j])
        probe = num
        for _ in range(3):
            if self.ideal.contains(probe):
                return True
            probe = probe * xs
        return self.saturation(support).contains(num)

    def injectivity_check(self):
        """(ok, certificate): the elimination ideal onto the base equals P."""
        nb = self.base.ring.nvars
        elim = []
        for g in self.ideal.basis:
            if all(not any(m[nb:]) for m in g.terms):
                elim.append(Poly(self.base.ring, {m[:nb]: c for m, c in g.terms.items()}))
        P = self.base.ideal
        ok = all(P.contains(g) for g in elim)
        if ok and self.base.gens:
            E = Ideal(self.base.ring, elim)
            ok = all(E.contains(g) for g in self.base.gens)
        return ok, elim

    def reduce_monic(self, u):
        """Rewrite u with every adjoined variable below its relation degree
        (division by the monic relations, last level first)."""
        u = self.embed(u)
        for nm, rel in reversed(self.levels):
            i = self.ring.index(nm)
            n = rel.degree_in(i)
            tail = rel - self.ring.gen(i) ** n
            while u.degree_in(i) >= n:
                k = u.degree_in(i)
                top = u.coeff_in(i, k)
                u = u - top * self.ring.gen(i) ** k + top * self.ring.gen(i) ** (k - n) * (-tail)
        return u

    def spanning_monomials(self):
        """Adjoined-variable exponents below the relation degrees."""
        out = [()]
        for nm, rel in self.levels:
            n = rel.degree_in(nm)
            out = [e + (k,) for e in out for k in range(n)]
        return out

    def with_extras(self, extras, verify=True):
        return RingTower(self.base, self.levels, self.extras + tuple(extras), verify=verify)


def check_monic(rel, var_index, max_allowed_index):
    """rel must be monic in var_index with coefficients in variables < max_allowed_index."""
    n = rel.degree_in(var_index)
    if n < 1:
        raise PreconditionError(f"relation {rel} does not involve its new variable")
    top = rel.coeff_in(var_index, n)
    if top != rel.ring.one():
        raise PreconditionError(f"relation {rel} is not monic in {rel.ring.names[var_index]}")
    for v in rel.variables():
        if v > max_allowed_index:
            raise PreconditionError(
                f"relation {rel} uses {rel.ring.names[v]}, introduced after "
                f"{rel.ring.names[var_index]}"
            )


def fresh_name(taken, stem):
    nm = stem
    k = 1
    while nm in taken:
        k += 1
        nm = f"{stem}_{k}"
    return nm


def adjoin_root(T, h, name, side=(), verify=True):
    """Adjoin a root of h (monic in `name`); `side` adds further relations
    in the enlarged ring."""
    if name in T.ring.names:
        raise PreconditionError(f"variable {name} already present")
    ring = T.ring.extend([name])
    h = h.to_ring(ring)
    check_monic(h, ring.nvars - 1, ring.nvars - 1)
    return RingTower(
        T.base,
        T.levels + ((name, h),),
        T.extras + tuple(s.to_ring(ring) for s in side),
        verify=verify,
    )


def compositum(T1, T2, verify=True):
    """Free join over the common base; T2's variables are renamed apart."""
    if T1.base != T2.base:
        raise PreconditionError("compositum needs identical base presentations")
    taken = set(T1.ring.names)
    renamed = []
    for nm in T2.adjoined:
        new = fresh_name(taken, nm)
        taken.add(new)
        renamed.append(new)
    ren_ring = PolyRing(T2.p, T2.base.ring.names + tuple(renamed))

    def move(f):
        return Poly(ren_ring, f.terms)

    levels = T1.levels + tuple((new, move(rel)) for new, (_, rel) in zip(renamed, T2.levels))
    full = T1.base.ring.extend([nm for nm, _ in levels])
    levels = tuple((nm, rel.to_ring(full)) for nm, rel in levels)
    extras = tuple(e.to_ring(full) for e in T1.extras) + tuple(
        move(e).to_ring(full) for e in T2.extras
    )
    return RingTower(T1.base, levels, extras, verify=verify)


def zero_test(u, T):
    return T.zero_test(u)


def loc_zero_test(fr, T, support=None):
    return T.loc_zero_test(fr, support)


def injectivity_check(T):
    return T.injectivity_check()
