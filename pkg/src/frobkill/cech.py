"""Čech complexes over towers, graded local cohomology via Koszul colimits,
boundary solving and the contracting homotopy of the unit-ideal complex.

Sign convention ("alt-omit"): the component of d(c) at {j_0 < ... < j_i}
is Σ_k (-1)^k c_{J minus j_k}, each term restricted to the smaller
localization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import ceil

import numpy as np

from . import budget, linalg
from .errors import BudgetExceeded, PreconditionError
from .tower import Fraction, Presentation, seq_exponent

SIGN_CONVENTION = "alt-omit: d(c)_J = sum_k (-1)^k c_(J minus j_k)"


class CechComplex:
    def __init__(self, ring, seq=None):
        if isinstance(ring, Presentation):
            ring = ring.trivial_tower()
        self.tower = ring
        if seq is not None and tuple(seq) != ring.seq:
            raise PreconditionError("a complex uses its presentation's Čech sequence")
        self.seq = ring.seq
        self.d = len(self.seq)
        self._graded = None

    @property
    def ring(self):
        return self.tower.ring

    @property
    def base(self):
        return self.tower.base

    @property
    def graded(self):
        if self._graded is None:
            if self.tower.levels or self.tower.extras:
                raise PreconditionError("graded pieces are computed on the base ring only")
            self.base.require_graded()
            self._graded = GradedKoszul(self.base)
        return self._graded

    def subsets(self, k):
        return list(combinations(range(self.d), k))

    def fraction(self, num, den=None):
        return Fraction(num.to_ring(self.ring), den or (0,) * self.d, self.seq)

    def cochain(self, level, comps):
        return Cochain(self, level, comps)

    def zero(self, level):
        return Cochain(self, level, {})

    def over(self, tower):
        """The same sequence over another tower (for embedding cochains)."""
        return CechComplex(tower)


class Cochain:
    """Element of C^level: a map from index subsets to fractions."""

    def __init__(self, cx, level, comps):
        self.cx = cx
        self.level = level
        clean = {}
        for J, fr in comps.items():
            J = tuple(J)
            if len(J) != level or list(J) != sorted(set(J)):
                raise ValueError(f"bad index subset {J} for level {level}")
            if any(x and j not in J for j, x in enumerate(fr.den)):
                raise ValueError(f"component {J} has a denominator outside its subset")
            if fr.num:
                if fr.ring != cx.ring:
                    fr = fr.to_ring(cx.ring)
                clean[J] = fr
        self.comps = dict(sorted(clean.items()))

    def __repr__(self):
        return f"Cochain({self.level}, {self.comps})"

    def is_formally_zero(self):
        return not self.comps

    def _combine(self, other, sign):
        if other.level != self.level:
            raise ValueError("level mismatch")
        out = dict(self.comps)
        for J, fr in other.comps.items():
            fr = fr if sign > 0 else -fr
            out[J] = out[J] + fr if J in out else fr
        return Cochain(self.cx, self.level, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Cochain(self.cx, self.level, {J: -fr for J, fr in self.comps.items()})

    def scale(self, r):
        r = r.to_ring(self.cx.ring)
        return Cochain(self.cx, self.level, {J: fr * r for J, fr in self.comps.items()})

    def map(self, fn):
        return Cochain(self.cx, self.level, {J: fn(fr) for J, fr in self.comps.items()})

    def to_complex(self, cx):
        return Cochain(cx, self.level, {J: fr.to_ring(cx.ring) for J, fr in self.comps.items()})

    def degree(self):
        degs = {fr.degree() for fr in self.comps.values()}
        if len(degs) > 1:
            raise PreconditionError(f"cochain is not homogeneous (degrees {sorted(degs)})")
        return degs.pop() if degs else None

    def max_exponent(self):
        return max((max(fr.den, default=0) for fr in self.comps.values()), default=0)

    def is_constant(self):
        return all(not any(fr.den) for fr in self.comps.values())

    # -- serialization: (subset, numerator string, denominator exponents)
    def to_json(self):
        return {
            "level": self.level,
            "components": [
                [list(J), fr.num.to_string(), list(fr.den)] for J, fr in self.comps.items()
            ],
        }

    @classmethod
    def from_json(cls, cx, data):
        comps = {}
        for J, num, den in data["components"]:
            J = tuple(int(j) for j in J)
            if J in comps:
                raise ValueError(f"duplicate component {J}")
            comps[J] = Fraction(cx.ring.parse(num), tuple(int(x) for x in den), cx.seq)
        return cls(cx, int(data["level"]), comps)


def differential(c):
    cx = c.cx
    if c.level >= cx.d:
        return cx.zero(c.level + 1)
    out = {}
    for J, fr in c.comps.items():
        for j in range(cx.d):
            if j in J:
                continue
            Jp = tuple(sorted(J + (j,)))
            k = Jp.index(j)
            term = fr if k % 2 == 0 else -fr
            out[Jp] = out[Jp] + term if Jp in out else term
    return Cochain(cx, c.level + 1, out)


def cochains_equal(c1, c2):
    """Componentwise equality in the localizations (support = the subset)."""
    diff = c1 - c2
    T = c1.cx.tower
    return all(T.loc_zero_test(fr, J) for J, fr in diff.comps.items())


def first_difference(c1, c2):
    diff = c1 - c2
    T = c1.cx.tower
    for J, fr in diff.comps.items():
        if not T.loc_zero_test(fr, J):
            return J
    return None


def is_cocycle(c):
    if c.level >= c.cx.d:
        return True
    dc = differential(c)
    T = c.cx.tower
    return all(T.loc_zero_test(fr, J) for J, fr in dc.comps.items())


# -- graded Koszul engine ----------------------------------------------------


class _Space:
    """Basis of K^k at Koszul level e in internal degree t."""

    def __init__(self, subsets, blocks):
        self.subsets = subsets
        self.blocks = blocks  # subset -> list of standard monomials
        self.index = {}
        self.entries = []
        for J in subsets:
            for m in blocks[J]:
                self.index[(J, m)] = len(self.entries)
                self.entries.append((J, m))

    @property
    def dim(self):
        return len(self.entries)


class GradedKoszul:
    """Koszul complexes K(x^e; R) restricted to one internal degree.

    An element of K^k at level e in degree t has components in R_{t + e k};
    it represents the Čech cochain with components num / x_J^e.
    """

    def __init__(self, pres):
        self.pres = pres
        self.ideal = pres.ideal
        self.ring = pres.ring
        self.p = pres.p
        self.seq = pres.cech
        self.d = len(self.seq)
        self._spaces = {}
        self._mats = {}
        self._std = {}

    def standard(self, deg):
        s = self._std.get(deg)
        if s is None:
            s = [m for m in self.ring.monomials_of_degree(deg) if self.ideal.is_standard(m)]
            self._std[deg] = s
        return s

    def space(self, k, e, t):
        key = (k, e, t)
        sp = self._spaces.get(key)
        if sp is None:
            if k < 0 or k > self.d:
                subsets = []
            else:
                subsets = list(combinations(range(self.d), k))
            blocks = {J: self.standard(t + e * k) for J in subsets}
            sp = _Space(subsets, blocks)
            self._spaces[key] = sp
        return sp

    def xj_power(self, J, e):
        exps = [0] * self.d
        for j in J:
            exps[j] = e
        return seq_exponent(self.ring.nvars, self.seq, exps)

    def coords_of_terms(self, terms, sp, J, out):
        for m, c in terms.items():
            idx = sp.index.get((J, m))
            if idx is None:
                raise PreconditionError("numerator left the expected graded piece")
            out[idx] = (out[idx] + c) % self.p

    def dmatrix(self, k, e, t):
        """Matrix of the Koszul differential K^k -> K^{k+1} (rows: target)."""
        key = (k, e, t)
        M = self._mats.get(key)
        if M is not None:
            return M
        src = self.space(k, e, t)
        dst = self.space(k + 1, e, t)
        M = np.zeros((dst.dim, src.dim), dtype=np.int64)
        for col, (J, m) in enumerate(src.entries):
            for j in range(self.d):
                if j in J:
                    continue
                Jp = tuple(sorted(J + (j,)))
                sign = 1 if Jp.index(j) % 2 == 0 else -1
                shift = self.xj_power((j,), e)
                nf = self.ideal.nf_monomial(tuple(a + b for a, b in zip(m, shift)))
                for mm, c in nf.items():
                    row = dst.index[(Jp, mm)]
                    M[row, col] = (M[row, col] + sign * c) % self.p
            if col % 256 == 0:
                budget.check()
        self._mats[key] = M
        return M

    def vector(self, cochain, e, t):
        """Coordinates of a Čech cochain lifted to Koszul level e."""
        k = cochain.level
        sp = self.space(k, e, t)
        v = np.zeros(sp.dim, dtype=np.int64)
        for J, fr in cochain.comps.items():
            target = tuple(e if j in J else 0 for j in range(self.d))
            num = fr.lift_to(target).to_ring(self.ring)
            num = self.ideal.reduce(num)
            self.coords_of_terms(num.terms, sp, J, v)
        return v

    def transition(self, vec, k, e, e2, t):
        """Koszul transition map (multiplication by x_J^(e2-e)) on coordinates."""
        src = self.space(k, e, t)
        dst = self.space(k, e2, t)
        out = np.zeros(dst.dim, dtype=np.int64)
        for idx in np.nonzero(vec)[0]:
            J, m = src.entries[idx]
            shift = self.xj_power(J, e2 - e)
            nf = self.ideal.nf_monomial(tuple(a + b for a, b in zip(m, shift)))
            c = int(vec[idx])
            for mm, cc in nf.items():
                r = dst.index[(J, mm)]
                out[r] = (out[r] + c * cc) % self.p
        return out

    def cochain(self, cx, vec, k, e, t):
        sp = self.space(k, e, t)
        comps = {}
        for idx in np.nonzero(vec)[0]:
            J, m = sp.entries[idx]
            term = self.ring.monomial(m, int(vec[idx]))
            comps[J] = comps[J] + term if J in comps else term
        out = {}
        for J, num in comps.items():
            den = tuple(e if j in J else 0 for j in range(self.d))
            out[J] = Fraction(num.to_ring(cx.ring), den, self.seq)
        return Cochain(cx, k, out)

    def level_data(self, i, e, t):
        key = ("H", i, e, t)
        data = self._mats.get(key)
        if data is not None:
            return data
        dim_i = self.space(i, e, t).dim
        if dim_i == 0:
            data = {"B": np.zeros((0, 0), dtype=np.int64), "reps": [], "dim": 0}
            self._mats[key] = data
            return data
        if i < self.d:
            Z = linalg.nullspace(self.dmatrix(i, e, t), self.p)
        else:
            Z = np.eye(dim_i, dtype=np.int64)
        if i >= 1:
            B = self.dmatrix(i - 1, e, t).T.copy()
        else:
            B = np.zeros((0, dim_i), dtype=np.int64)
        reps = linalg.complement_basis(B, Z.reshape(-1, dim_i), self.p)
        data = {"B": B, "reps": reps, "dim": len(reps)}
        self._mats[key] = data
        return data

    def is_iso(self, i, e, e2, t):
        a = self.level_data(i, e, t)
        b = self.level_data(i, e2, t)
        if a["dim"] != b["dim"]:
            return False
        if a["dim"] == 0:
            return True
        imgs = np.array([self.transition(r, i, e, e2, t) for r in a["reps"]])
        return linalg.independent_mod(b["B"], imgs, self.p) == a["dim"]


@dataclass
class CohomologyPiece:
    i: int
    t: int
    dimension: int
    basis: list = field(default_factory=list)
    koszul_level: int = 0


def _start_level(i, t):
    if t < 0 and i > 0:
        return max(1, ceil(-t / i))
    return 1


def lc_graded_piece(cx, i, t, koszul_cap=12):
    """dim and cocycle basis of H^i_I(R)_t via the Koszul colimit.

    A level e is accepted once the transition maps e -> e+1 and e -> e+2
    are both isomorphisms on the degree-t piece.
    """
    if i < 0 or i > cx.d:
        return CohomologyPiece(i, t, 0, [], 0)
    gk = cx.graded
    e = _start_level(i, t)
    dims = []
    while e + 2 <= koszul_cap:
        budget.check()
        if gk.is_iso(i, e, e + 1, t) and gk.is_iso(i, e, e + 2, t):
            data = gk.level_data(i, e, t)
            basis = [gk.cochain(cx, r, i, e, t) for r in data["reps"]]
            return CohomologyPiece(i, t, data["dim"], basis, e)
        dims.append(gk.level_data(i, e, t)["dim"])
        e += 1
    last = [gk.level_data(i, k, t)["dim"] for k in (koszul_cap - 1, koszul_cap)]
    raise BudgetExceeded(
        f"H^{i}_{t} did not stabilize below Koszul level {koszul_cap}; last dims {last}"
    )


def boundary_solve_level(cx, target, exp_cap=None, t=None, extra_columns=None):
    """Search for beta with d(beta) = target, deepening the Koszul level.

    Returns (beta, level, extra) or (None, None, None).  `extra_columns`
    is an optional callable level -> (matrix columns, tag); the solve then
    treats those columns as further unknowns and returns their coefficients.
    """
    i = target.level
    gk = cx.graded
    if t is None:
        t = target.degree()
        if t is None:
            t = 0
    if i == 0:
        if target.is_formally_zero():
            return None, None, None
        return None, None, None
    lo = max(1, target.max_exponent())
    hi = lo + 3 if exp_cap is None else exp_cap
    for E in range(lo, hi + 1):
        budget.check()
        A = gk.dmatrix(i - 1, E, t)
        b = gk.vector(target, E, t)
        ncols_beta = A.shape[1]
        if extra_columns is not None:
            X = extra_columns(E)
            if X.shape[1]:
                A = np.concatenate([A, X], axis=1)
        x = linalg.solve(A, b, cx.base.p)
        if x is None:
            continue
        beta = gk.cochain(cx, x[:ncols_beta], i - 1, E, t)
        return beta, E, x[ncols_beta:]
    return None, None, None


def boundary_solve(cx, target, exp_cap=None, t=None):
    """beta with differential(beta) == target, or None ("not found below cap")."""
    beta, _, _ = boundary_solve_level(cx, target, exp_cap, t)
    return beta


def cone_homotopy(c):
    """eta with eta_J' = c_({0} ∪ J') for 0 not in J' (no checks)."""
    comps = {}
    for J, fr in c.comps.items():
        if J[0] == 0:
            comps[J[1:]] = fr
    return Cochain(c.cx, c.level - 1, comps)


def unit_homotopy(c):
    """Bounding cochain for a constant cocycle (contracting homotopy off the
    first sequence index); the result is re-checked against `c`."""
    if not 1 <= c.level <= c.cx.d:
        raise PreconditionError("unit_homotopy needs 1 <= level <= d")
    if not c.is_constant():
        raise PreconditionError("unit_homotopy needs denominator-free components")
    eta = cone_homotopy(c)
    bad = first_difference(differential(eta), c)
    if bad is not None:
        raise PreconditionError(
            f"input is not a cocycle of the constant subcomplex (component {bad})"
        )
    return eta
