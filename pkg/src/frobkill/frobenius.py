"""Frobenius on Čech cochains, orbits of classes, and monic p-polynomial
relations g(alpha) = 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cech import Cochain, boundary_solve_level, cochains_equal, differential
from .errors import BudgetExceeded, PreconditionError
from .tower import Fraction, seq_exponent


class FrobeniusPoly:
    """g(T) = T^(p^s) - Σ_{j<s} c_j T^(p^j) with c_j in the base ring.

    s = 0 means g(T) = T.
    """

    def __init__(self, p, s, coeffs=()):
        self.p = p
        self.s = int(s)
        coeffs = tuple(coeffs)
        if len(coeffs) != self.s:
            raise ValueError(f"expected {self.s} lower coefficients, got {len(coeffs)}")
        self.coeffs = coeffs

    def __repr__(self):
        return f"FrobeniusPoly({self.describe()})"

    def __eq__(self, other):
        return (
            isinstance(other, FrobeniusPoly)
            and self.p == other.p
            and self.s == other.s
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    @property
    def degree(self):
        return self.p**self.s

    def is_pure_power(self):
        return all(not c for c in self.coeffs)

    def describe(self):
        parts = [f"T^{self.degree}" if self.s else "T"]
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c})*T^{self.p ** j}")
        return " - ".join(parts)

    def __call__(self, u):
        """g(u) for a ring element u."""
        out = u.frobenius(self.s)
        for j, c in enumerate(self.coeffs):
            if c:
                out = out - c.to_ring(u.ring) * u.frobenius(j)
        return out

    def apply_fraction(self, fr):
        q = self.degree
        den = tuple(q * x for x in fr.den)
        num = fr.num.frobenius(self.s)
        for j, c in enumerate(self.coeffs):
            if c:
                shift = seq_exponent(fr.ring.nvars, fr.seq, [x * (q - self.p**j) for x in fr.den])
                num = num - (c.to_ring(fr.ring) * fr.num.frobenius(j)).mul_monomial(shift)
        return Fraction(num, den, fr.seq)

    def apply_cochain(self, c):
        return c.map(self.apply_fraction)

    def cleared_relation(self, var, r, den, seq):
        """(x^e)^(p^s) * (g(var / x^e) - r / x^e): monic in var."""
        ring = var.ring
        q = self.degree
        out = var.frobenius(self.s)
        for j, c in enumerate(self.coeffs):
            if c:
                shift = seq_exponent(ring.nvars, seq, [x * (q - self.p**j) for x in den])
                out = out - (c.to_ring(ring) * var.frobenius(j)).mul_monomial(shift)
        shift = seq_exponent(ring.nvars, seq, [x * (q - 1) for x in den])
        return out - r.to_ring(ring).mul_monomial(shift)

    def to_json(self):
        return {"s": self.s, "coeffs": [c.to_string() for c in self.coeffs]}

    @classmethod
    def from_json(cls, ring, data):
        return cls(ring.p, int(data["s"]), [ring.parse(c) for c in data["coeffs"]])


@dataclass
class ClassHandle:
    cocycle: Cochain
    degree: int
    piece: tuple = None  # (i, t, index) when taken from a computed piece
    zero: bool = None

    @property
    def level(self):
        return self.cocycle.level


def frob_cochain(c):
    """Componentwise p-th power r/x^e -> r^p/x^(pe)."""
    return c.map(lambda fr: fr.frobenius(1))


def frob_class(alpha):
    p = alpha.cocycle.cx.base.p
    return ClassHandle(frob_cochain(alpha.cocycle), alpha.degree * p)


def _is_zero_cochain(c):
    T = c.cx.tower
    return all(T.loc_zero_test(fr, J) for J, fr in c.comps.items())


def frob_orbit(alpha, cap=4, exp_cap=None):
    """[alpha, alpha^p, ...] up to the first boundary or `cap` Frobenius steps."""
    cx = alpha.cocycle.cx
    out = []
    cur = alpha
    for step in range(cap + 1):
        if step:
            cur = frob_class(cur)
        member = ClassHandle(cur.cocycle, cur.degree)
        if _is_zero_cochain(cur.cocycle):
            member.zero = True
        else:
            beta, _, _ = boundary_solve_level(cx, cur.cocycle, _cap(cur.cocycle, exp_cap), cur.degree)
            member.zero = beta is not None
        out.append(member)
        if member.zero:
            return out
    raise BudgetExceeded(f"Frobenius orbit not resolved within {cap} steps")


def _cap(cochain, exp_cap):
    lo = max(1, cochain.max_exponent())
    return lo + 3 if exp_cap is None else max(lo, exp_cap)


@dataclass
class Relation:
    g: FrobeniusPoly
    beta: Cochain
    koszul_level: int
    degenerate: bool = False


def find_relation(alpha, orbit_cap=4, exp_cap=None):
    """Monic p-polynomial g and beta with g(alpha~) = d(beta).

    For each s the pure power g = T^(p^s) is tried first; otherwise the
    coefficients c_j (of degree (p^s - p^j) deg(alpha)) and beta are
    solved for jointly as one linear system.  The smallest s wins.
    """
    c = alpha.cocycle
    cx = c.cx
    p = cx.base.p
    base_ring = cx.base.ring
    if c.is_formally_zero() or _is_zero_cochain(c):
        return Relation(FrobeniusPoly(p, 0), cx.zero(c.level - 1), 0, degenerate=True)
    if c.level == 0:
        raise PreconditionError("a nonzero degree-0 cochain cannot be a boundary")
    gk = cx.graded
    t = alpha.degree
    orbit = [c]
    for s in range(orbit_cap + 1):
        if s:
            orbit.append(frob_cochain(orbit[-1]))
        target = orbit[s]
        deg = t * p**s
        cap = _cap(target, exp_cap)
        beta, E, _ = boundary_solve_level(cx, target, cap, deg)
        if beta is not None:
            g = FrobeniusPoly(p, s, [base_ring.zero()] * s)
            return _checked(Relation(g, beta, E), c)
        if s == 0:
            continue
        layout = []
        for j in range(s):
            for m in gk.standard((p**s - p**j) * t):
                layout.append((j, m))
        if not layout:
            continue

        def columns(E, layout=layout):
            cols = []
            for j, m in layout:
                shifted = orbit[j].scale(base_ring.monomial(m))
                cols.append(gk.vector(shifted, E, deg))
            return np.array(cols, dtype=np.int64).T.reshape(-1, len(layout))

        lo = max(1, target.max_exponent())
        beta, E, coeffs = boundary_solve_level(
            cx, target, cap, deg, extra_columns=lambda E: columns(E) if E >= lo else None
        )
        if beta is None:
            continue
        cs = [base_ring.zero() for _ in range(s)]
        for (j, m), x in zip(layout, coeffs):
            if x:
                cs[j] = cs[j] + base_ring.monomial(m, int(x))
        # g(alpha) = alpha^(p^s) - Σ c_j alpha^(p^j) = d(beta') with beta' = beta
        # since the solve found d(beta) + Σ c_j alpha^(p^j) = alpha^(p^s).
        return _checked(Relation(FrobeniusPoly(p, s, cs), beta, E), c)
    raise BudgetExceeded(f"no Frobenius relation found with s <= {orbit_cap}")


def _checked(rel, cocycle):
    if not cochains_equal(differential(rel.beta), rel.g.apply_cochain(cocycle)):
        raise AssertionError("relation certificate g(alpha) = d(beta) failed")
    return rel
