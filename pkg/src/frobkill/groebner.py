"""Gröbner bases over F_p and the ideal operations built on them.

Buchberger's algorithm with the sugar selection strategy, the coprime
criterion and the chain criterion.  Budgets are explicit: exceeding
`max_pairs` or `max_terms` raises BudgetExceeded instead of truncating.
"""

from __future__ import annotations

import heapq
from itertools import combinations

from . import budget
from .errors import BudgetExceeded, PreconditionError
from .poly import MonomialOrder, Poly, mono_div, mono_divides, mono_lcm, mono_mul

DEFAULT_MAX_PAIRS = 200_000


def _lead(terms, order):
    return max(terms, key=order.key)


def _monic(terms, order, p):
    m = _lead(terms, order)
    inv = pow(terms[m], -1, p)
    if inv == 1:
        return dict(terms), m
    return {k: v * inv % p for k, v in terms.items()}, m


def _reduce(terms, basis, lms, order, p):
    """Remainder of `terms` modulo monic `basis` (lists of dicts / leading monomials)."""
    f = dict(terms)
    neg = order.negkey
    heap = [(neg(m), m) for m in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, 0)
        if not c:
            continue
        for g, lm in zip(basis, lms):
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.items():
                    nm = mono_mul(gm, q)
                    if nm == m:
                        continue
                    old = f.get(nm)
                    if old is None:
                        f[nm] = (-c * gc) % p
                        heapq.heappush(heap, (neg(nm), nm))
                    else:
                        v = (old - c * gc) % p
                        if v:
                            f[nm] = v
                        else:
                            del f[nm]
                break
        else:
            rem[m] = c
    return rem


def _spoly(f, lf, g, lg, p):
    lcm = mono_lcm(lf, lg)
    uf = mono_div(lcm, lf)
    ug = mono_div(lcm, lg)
    out = {}
    for m, c in f.items():
        out[mono_mul(m, uf)] = c
    for m, c in g.items():
        nm = mono_mul(m, ug)
        v = (out.get(nm, 0) - c) % p
        if v:
            out[nm] = v
        else:
            out.pop(nm, None)
    return out


def buchberger(polys, order, max_pairs=None, max_terms=None):
    """Reduced Gröbner basis (list of monic Polys, descending leading terms)."""
    polys = [f for f in polys if f]
    if not polys:
        return []
    ring = polys[0].ring
    p = ring.p
    max_pairs = budget.default_pairs(DEFAULT_MAX_PAIRS) if max_pairs is None else max_pairs
    G, LM, sugar = [], [], []
    pairs = []
    pending = set()

    def add(h, sug):
        h, lm = _monic(h, order, p)
        i = len(G)
        G.append(h)
        LM.append(lm)
        sugar.append(sug)
        for k in range(i):
            lcm = mono_lcm(LM[k], lm)
            s = max(sugar[k] + sum(lcm) - sum(LM[k]), sug + sum(lcm) - sum(lm))
            heapq.heappush(pairs, (s, order.key(lcm), k, i))
            pending.add((k, i))
        return not any(lm)

    for f in sorted(polys, key=lambda f: order.key(f.lead(order)[0])):
        h = _reduce(f.terms, G, LM, order, p)
        if h and add(h, f.total_degree()):
            return [ring.one()]

    npairs = 0
    while pairs:
        s, _, i, j = heapq.heappop(pairs)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        lcm = mono_lcm(LM[i], LM[j])
        if all(a == 0 or b == 0 for a, b in zip(LM[i], LM[j])):
            continue
        chain = False
        for k in range(len(G)):
            if k == i or k == j or not mono_divides(LM[k], lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        npairs += 1
        if npairs > max_pairs:
            raise BudgetExceeded(f"Gröbner pair budget {max_pairs} exceeded")
        if npairs % 64 == 0:
            budget.check()
        sp = _spoly(G[i], LM[i], G[j], LM[j], p)
        h = _reduce(sp, G, LM, order, p)
        if h:
            if max_terms is not None and len(h) > max_terms:
                raise BudgetExceeded(f"polynomial support exceeded {max_terms} terms")
            if add(h, s):
                return [ring.one()]

    # minimize, then interreduce
    keep = []
    for i, lm in enumerate(LM):
        if any(
            mono_divides(LM[k], lm) and (LM[k] != lm or k < i) for k in range(len(G)) if k != i
        ):
            continue
        keep.append(i)
    basis = [G[i] for i in keep]
    lms = [LM[i] for i in keep]
    out = []
    for idx, (g, lm) in enumerate(zip(basis, lms)):
        others = basis[:idx] + basis[idx + 1 :]
        olms = lms[:idx] + lms[idx + 1 :]
        tail = {m: c for m, c in g.items() if m != lm}
        red = _reduce(tail, others, olms, order, p)
        red[lm] = 1
        out.append(Poly(ring, red))
    out.sort(key=lambda f: order.key(f.lead(order)[0]), reverse=True)
    return out


class Ideal:
    """Ideal presentation with a lazily cached reduced Gröbner basis."""

    def __init__(self, ring, gens, order=None, max_pairs=None, max_terms=None):
        self.ring = ring
        self.gens = tuple(g for g in gens if g)
        for g in self.gens:
            if g.ring != ring:
                raise ValueError("generator lives in a different ring")
        self.order = order or MonomialOrder.grevlex(ring.nvars)
        self.max_pairs = max_pairs
        self.max_terms = max_terms
        self._basis = None
        self._nf_cache = {}

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]}, order={self.order.name})"

    @property
    def basis(self):
        if self._basis is None:
            self._basis = buchberger(self.gens, self.order, self.max_pairs, self.max_terms)
            self._lms = [g.lead(self.order)[0] for g in self._basis]
            self._bterms = [g.terms for g in self._basis]
        return self._basis

    @property
    def leading_monomials(self):
        self.basis
        return list(self._lms)

    def is_unit(self):
        return any(not any(lm) for lm in self.leading_monomials)

    def reduce(self, f):
        if f.ring != self.ring:
            raise ValueError(
                f"variable count mismatch: {f.ring.nvars} vs {self.ring.nvars} variables"
            )
        self.basis
        return Poly(self.ring, _reduce(f.terms, self._bterms, self._lms, self.order, self.ring.p))

    def contains(self, f):
        return not self.reduce(f)

    def is_standard(self, exp):
        self.basis
        return not any(mono_divides(lm, exp) for lm in self._lms)

    def nf_monomial(self, exp):
        """Normal form of a single monomial as a term dict (memoized)."""
        r = self._nf_cache.get(exp)
        if r is None:
            self.basis
            if self.is_standard(exp):
                r = {exp: 1}
            else:
                r = _reduce({exp: 1}, self._bterms, self._lms, self.order, self.ring.p)
            self._nf_cache[exp] = r
        return r

    def contains_ideal(self, other):
        return all(self.contains(g) for g in other.gens)

    def same_ideal(self, other):
        return self.contains_ideal(other) and other.contains_ideal(self)

    def with_order(self, order):
        return Ideal(self.ring, self.gens, order, self.max_pairs, self.max_terms)

    def krull_dim(self):
        """dim of ring/I, read off the leading-term ideal."""
        lms = self.leading_monomials
        if self.is_unit():
            return -1
        n = self.ring.nvars
        supports = [frozenset(i for i, x in enumerate(lm) if x) for lm in lms]
        for size in range(n, -1, -1):
            for U in combinations(range(n), size):
                U = frozenset(U)
                if not any(s <= U for s in supports):
                    return size
        return 0


# -- ideal operations ----------------------------------------------------------


def groebner(gens, order=None, max_pairs=None):
    if not gens:
        raise PreconditionError("groebner needs at least one generator")
    order = order or MonomialOrder.grevlex(gens[0].ring.nvars)
    return buchberger(gens, order, max_pairs)


def normal_form(f, ideal):
    return ideal.reduce(f)


def ideal_member(f, ideal):
    return ideal.contains(f)


def s_polynomial(f, g, order):
    lf, cf = f.lead(order)
    lg, cg = g.lead(order)
    fm = f.scale(pow(cf, -1, f.ring.p))
    gm = g.scale(pow(cg, -1, g.ring.p))
    return Poly(f.ring, _spoly(fm.terms, lf, gm.terms, lg, f.ring.p))


def satisfies_buchberger_criterion(basis, order):
    """Oracle: every S-polynomial of `basis` reduces to zero modulo `basis`."""
    lms = [g.lead(order)[0] for g in basis]
    monic = [g.monic(order).terms for g in basis]
    p = basis[0].ring.p if basis else 2
    for a, b in combinations(range(len(basis)), 2):
        sp = s_polynomial(basis[a], basis[b], order)
        if _reduce(sp.terms, monic, lms, order, p):
            return False
    return True


def _extended(ring, name):
    nm = name
    while nm in ring.names:
        nm = "_" + nm
    return ring.extend([nm])


def _elim_last(gens, big, small, small_order, max_pairs):
    u = big.nvars - 1
    blocks = ((u,),) + small_order.blocks
    order = MonomialOrder(blocks)
    gb = buchberger(gens, order, max_pairs)
    out = []
    for g in gb:
        if all(m[u] == 0 for m in g.terms):
            out.append(Poly(small, {m[:u]: c for m, c in g.terms.items()}))
    return out


def exact_quotient(h, f, order):
    """h / f, raising ValueError when f does not divide h."""
    lf, cf = f.lead(order)
    inv = pow(cf, -1, f.ring.p)
    q = {}
    r = h
    p = f.ring.p
    while r:
        lr, cr = r.lead(order)
        if not mono_divides(lf, lr):
            raise ValueError("not an exact division")
        m = mono_div(lr, lf)
        c = cr * inv % p
        q[m] = c
        r = r - f.mul_monomial(m, c)
    return Poly(f.ring, q)


def intersect_principal(ideal, f):
    """Generators of I ∩ (f) by eliminating a tag variable."""
    ring = ideal.ring
    big = _extended(ring, "t")
    t = big.gen(big.nvars - 1)
    gens = [t * g.to_ring(big) for g in ideal.gens] + [(1 - t) * f.to_ring(big)]
    return _elim_last(gens, big, ring, ideal.order, ideal.max_pairs)


def colon(ideal, f):
    """(I : f)."""
    if not f:
        return Ideal(ideal.ring, [ideal.ring.one()], ideal.order, ideal.max_pairs)
    if not ideal.gens:
        return Ideal(ideal.ring, [], ideal.order, ideal.max_pairs)
    inter = intersect_principal(ideal, f)
    gens = [exact_quotient(h, f, ideal.order) for h in inter]
    return Ideal(ideal.ring, gens, ideal.order, ideal.max_pairs)


def saturate(ideal, f, certify=True):
    """(I : f^∞) via the Rabinowitsch trick.

    With `certify`, the stabilization (I:f^∞):f = (I:f^∞) is re-checked by an
    independent colon computation.
    """
    ring = ideal.ring
    if not ideal.gens:
        return Ideal(ring, [], ideal.order, ideal.max_pairs)
    if not f:
        return Ideal(ring, [ring.one()], ideal.order, ideal.max_pairs)
    big = _extended(ring, "u")
    u = big.gen(big.nvars - 1)
    gens = [g.to_ring(big) for g in ideal.gens] + [1 - u * f.to_ring(big)]
    sat = Ideal(ring, _elim_last(gens, big, ring, ideal.order, ideal.max_pairs), ideal.order,
                ideal.max_pairs)
    if certify:
        step = colon(sat, f)
        if not sat.contains_ideal(step):
            raise AssertionError("saturation failed its stabilization certificate")
    return sat


def lift(f, gens, ideal_basis, order, max_pairs=None):
    """Cofactors c with f - Σ c_k gens_k in (ideal_basis), or None.

    Tracked Buchberger over ideal_basis ∪ gens; only the cofactors of
    `gens` are recorded since members of `ideal_basis` vanish in the quotient.
    """
    ring = f.ring
    p = ring.p
    k = len(gens)
    zero = ring.zero()
    max_pairs = budget.default_pairs(DEFAULT_MAX_PAIRS) if max_pairs is None else max_pairs

    elems = []  # (terms, lm, vec)

    def unit(i):
        return [ring.one() if j == i else zero for j in range(k)]

    def reduce_tracked(terms, vec):
        terms = dict(terms)
        vec = list(vec)
        rem = {}
        while terms:
            m = _lead(terms, order)
            c = terms[m]
            for g, lm, gv in elems:
                if mono_divides(lm, m):
                    q = mono_div(m, lm)
                    for gm, gc in g.items():
                        nm = mono_mul(gm, q)
                        v = (terms.get(nm, 0) - c * gc) % p
                        if v:
                            terms[nm] = v
                        else:
                            terms.pop(nm, None)
                    vec = [a - b.mul_monomial(q, c) for a, b in zip(vec, gv)]
                    break
            else:
                rem[m] = c
                del terms[m]
        return rem, vec

    def add(terms, vec):
        m = _lead(terms, order)
        inv = pow(terms[m], -1, p)
        elems.append(({a: b * inv % p for a, b in terms.items()}, m, [v.scale(inv) for v in vec]))

    for g in ideal_basis:
        if g:
            r, v = reduce_tracked(g.terms, [zero] * k)
            if r:
                add(r, v)
    for i, g in enumerate(gens):
        if g:
            r, v = reduce_tracked(g.terms, unit(i))
            if r:
                add(r, v)
    queue = [(a, b) for a, b in combinations(range(len(elems)), 2)]
    npairs = 0
    while queue:
        a, b = queue.pop(0)
        ga, la, va = elems[a]
        gb, lb, vb = elems[b]
        if all(x == 0 or y == 0 for x, y in zip(la, lb)):
            continue
        npairs += 1
        if npairs > max_pairs:
            raise BudgetExceeded("lift pair budget exceeded")
        lcm = mono_lcm(la, lb)
        ua, ub = mono_div(lcm, la), mono_div(lcm, lb)
        sp = _spoly(ga, la, gb, lb, p)
        sv = [x.mul_monomial(ua) - y.mul_monomial(ub) for x, y in zip(va, vb)]
        r, v = reduce_tracked(sp, sv)
        if r:
            n = len(elems)
            add(r, v)
            queue.extend((j, n) for j in range(n))
    r, v = reduce_tracked(f.terms, [zero] * k)
    if r:
        return None
    return [-x for x in v]


def graded_basis(pres_ideal, t):
    """Standard monomials of degree t: a basis of the degree-t piece of ring/I."""
    ideal = pres_ideal
    for g in ideal.gens:
        if not g.is_homogeneous():
            raise PreconditionError(f"inhomogeneous presentation: generator {g}")
    return [m for m in ideal.ring.monomials_of_degree(t) if ideal.is_standard(m)]


def hilbert_function(ideal, t):
    return len(graded_basis(ideal, t))
