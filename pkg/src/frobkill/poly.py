"""Sparse multivariate polynomials over a prime field.

A polynomial is a dict mapping exponent tuples to coefficients in [1, p).
Monomial orders are products of graded-reverse-lexicographic blocks, which
covers plain grevlex (one block) and the elimination orders used for towers
and saturations.
"""

from __future__ import annotations

import ast
from itertools import combinations_with_replacement

from sympy import isprime

from .errors import ParseError

MAX_PRIME = 2**31


class PolyRing:
    """F_p[names...]; the modulus is fixed per ring and never mixed."""

    __slots__ = ("p", "names", "nvars", "_index")

    def __init__(self, p, names):
        p = int(p)
        if p < 2 or p > MAX_PRIME or not isprime(p):
            raise ParseError(f"modulus {p} is not a prime <= 2^31")
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate variable names in {names}")
        for nm in names:
            if not nm.isidentifier():
                raise ParseError(f"bad variable name {nm!r}")
        self.p = p
        self.names = names
        self.nvars = len(names)
        self._index = {nm: i for i, nm in enumerate(names)}

    def __eq__(self, other):
        return (self is other) or (
            isinstance(other, PolyRing) and self.p == other.p and self.names == other.names
        )

    def __hash__(self):
        return hash((self.p, self.names))

    def __repr__(self):
        return f"PolyRing({self.p}, {list(self.names)})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ParseError(f"unknown identifier {name!r}") from None

    def extend(self, new_names):
        return PolyRing(self.p, self.names + tuple(new_names))

    # constructors
    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c %= self.p
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=1):
        coeff %= self.p
        return Poly(self, {tuple(exp): coeff} if coeff else {})

    def parse(self, text):
        return parse_poly(text, self)

    def monomials_of_degree(self, t):
        """All exponent vectors of total degree t, in increasing grevlex order."""
        if t < 0:
            return []
        out = []
        for combo in combinations_with_replacement(range(self.nvars), t):
            e = [0] * self.nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        out.sort(key=grevlex_key)
        return out


def grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


class MonomialOrder:
    """Product of grevlex blocks; earlier blocks dominate.

    `blocks` is a tuple of tuples of variable indices.  A single block
    holding every variable is ordinary grevlex.
    """

    def __init__(self, blocks, name=None):
        self.blocks = tuple(tuple(b) for b in blocks if len(b))
        self.name = name or "block(" + "|".join(",".join(map(str, b)) for b in self.blocks) + ")"
        self._key = {}
        self._neg = {}

    @classmethod
    def grevlex(cls, nvars):
        return cls((tuple(range(nvars)),), name="grevlex")

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"MonomialOrder({self.name})"

    def key(self, e):
        k = self._key.get(e)
        if k is None:
            k = []
            for b in self.blocks:
                sub = [e[i] for i in b]
                k.append(sum(sub))
                k.extend(-x for x in reversed(sub))
            k = tuple(k)
            self._key[e] = k
        return k

    def negkey(self, e):
        k = self._neg.get(e)
        if k is None:
            k = tuple(-x for x in self.key(e))
            self._neg[e] = k
        return k


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


class Poly:
    """Immutable-by-convention sparse polynomial."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- basic queries
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == self.ring.const(other).terms
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _check(self, other):
        if other.ring is not self.ring and other.ring != self.ring:
            if other.ring.p != self.ring.p:
                raise ValueError("mixed characteristic operands")
            raise ValueError(f"operands live in different rings: {self.ring} vs {other.ring}")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return Poly(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c):
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {m: v * c % p for m, v in self.terms.items()})

    def mul_monomial(self, exp, coeff=1):
        p = self.ring.p
        coeff %= p
        if not coeff:
            return self.ring.zero()
        return Poly(self.ring, {mono_mul(m, exp): c * coeff % p for m, c in self.terms.items()})

    def frobenius(self, k=1):
        """f^(p^k), computed termwise (coefficients are fixed by Frobenius on F_p)."""
        q = self.ring.p**k
        return Poly(self.ring, {tuple(x * q for x in m): c for m, c in self.terms.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        p = self.ring.p
        result = self.ring.one()
        base = self
        k = 0
        while n:
            n, digit = divmod(n, p)
            if digit:
                result = result * _plain_pow(base.frobenius(k) if k else base, digit)
            k += 1
        return result

    # -- structure
    def total_degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def degrees(self):
        return sorted({sum(m) for m in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def lead(self, order):
        """(exponent, coefficient) of the leading term under `order`."""
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order):
        _, c = self.lead(order)
        return self.scale(pow(c, -1, self.ring.p))

    def degree_in(self, var):
        i = var if isinstance(var, int) else self.ring.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def variables(self):
        used = set()
        for m in self.terms:
            used.update(i for i, x in enumerate(m) if x)
        return sorted(used)

    def coeff_in(self, var, k):
        """Coefficient of var^k, as a polynomial in the remaining variables."""
        i = var if isinstance(var, int) else self.ring.index(var)
        out = {}
        for m, c in self.terms.items():
            if m[i] == k:
                mm = list(m)
                mm[i] = 0
                out[tuple(mm)] = c
        return Poly(self.ring, out)

    def to_ring(self, ring):
        """Re-express in `ring`, matching variables by name."""
        if ring is self.ring or ring == self.ring:
            return Poly(ring, self.terms)
        if ring.p != self.ring.p:
            raise ValueError("mixed characteristic operands")
        idx = []
        for i, nm in enumerate(self.ring.names):
            idx.append(ring._index.get(nm))
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for i, x in enumerate(m):
                if x:
                    j = idx[i]
                    if j is None:
                        raise ValueError(f"variable {self.ring.names[i]} absent from target ring")
                    e[j] = x
            out[tuple(e)] = c
        return Poly(ring, out)

    def substitute(self, values):
        """Evaluate with a map {var index: Poly}; unmapped variables stay."""
        ring = self.ring
        out = ring.zero()
        for m, c in self.terms.items():
            term = ring.const(c)
            rest = list(m)
            for i, x in enumerate(m):
                if x and i in values:
                    term = term * values[i] ** x
                    rest[i] = 0
            out = out + term.mul_monomial(tuple(rest))
        return out

    def eval_to(self, images):
        """Ring map: variable i goes to images[i] (Polys in a common ring)."""
        target = images[0].ring
        out = target.zero()
        for m, c in self.terms.items():
            term = target.const(c)
            for i, x in enumerate(m):
                if x:
                    term = term * images[i] ** x
            out = out + term
        return out

    # -- printing
    def to_string(self, order=None):
        """Canonical form: terms in descending order, explicit coefficients."""
        if not self.terms:
            return "0"
        order = order or MonomialOrder.grevlex(self.ring.nvars)
        parts = []
        for m in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[m]
            factors = [str(c)]
            for nm, x in zip(self.ring.names, m):
                if x == 1:
                    factors.append(nm)
                elif x > 1:
                    factors.append(f"{nm}^{x}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Poly({self.to_string()!r})"


def _plain_pow(f, n):
    result = f.ring.one()
    while n:
        if n & 1:
            result = result * f
        n >>= 1
        if n:
            f = f * f
    return result


_ALLOWED_BIN = (ast.Add, ast.Sub, ast.Mult, ast.Pow)


def parse_poly(text, ring):
    """Parse `text` (operators + - * ^, integers, variable names, parentheses)."""
    src = text.strip().replace("^", "**")
    if not src:
        raise ParseError("empty polynomial")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
    return _eval_node(tree.body, ring, text)


def _eval_node(node, ring, text):
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BIN):
        if isinstance(node.op, ast.Pow):
            base = _eval_node(node.left, ring, text)
            n = node.right
            if not (isinstance(n, ast.Constant) and type(n.value) is int and n.value >= 0):
                raise ParseError(f"exponent must be a non-negative integer in {text!r}")
            return base**n.value
        left = _eval_node(node.left, ring, text)
        right = _eval_node(node.right, ring, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        return left * right
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, ring, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return ring.const(node.value)
    if isinstance(node, ast.Name):
        return ring.gen(ring.index(node.id))
    raise ParseError(f"unsupported syntax in polynomial {text!r}")
