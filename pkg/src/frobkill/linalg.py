"""Dense exact linear algebra over F_p (p < 2^31) on int64 numpy arrays."""

import numpy as np


def as_matrix(rows, ncols):
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), ncols)


def rref(M, p):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    A = np.array(M, dtype=np.int64) % p
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = (A[rows] - np.outer(col[rows], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p):
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def nullspace(M, p):
    """Rows spanning {v : M v = 0}."""
    M = np.asarray(M, dtype=np.int64)
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for row, pc in enumerate(piv):
            out[k, pc] = (-R[row, f]) % p
    return out


def solve(M, b, p):
    """Some x with M x = b (free variables set to 0), or None."""
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    nrows, ncols = M.shape
    if ncols == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(b % p) else None
    aug = np.concatenate([M % p, (b % p).reshape(-1, 1)], axis=1)
    R, piv = rref(aug, p)
    if ncols in piv:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for row, pc in enumerate(piv):
        x[pc] = R[row, ncols]
    return x


def independent_mod(span_rows, new_rows, p):
    """Rank of `new_rows` modulo the row space of `span_rows`."""
    span_rows = np.asarray(span_rows, dtype=np.int64)
    new_rows = np.asarray(new_rows, dtype=np.int64)
    if new_rows.size == 0:
        return 0
    if span_rows.size == 0:
        return rank(new_rows, p)
    both = np.concatenate([span_rows, new_rows], axis=0)
    return rank(both, p) - rank(span_rows, p)


class Echelon:
    """Incrementally maintained echelon basis of a row space."""

    def __init__(self, ncols, p):
        self.p = p
        self.ncols = ncols
        self.rows = {}  # pivot column -> row with 1 at the pivot

    def reduce(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        for c, row in self.rows.items():
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def add(self, v):
        """Insert v; returns True when it enlarged the span."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        for k, row in self.rows.items():
            if row[c]:
                self.rows[k] = (row - row[c] * v) % self.p
        self.rows[c] = v
        return True

    def __len__(self):
        return len(self.rows)


def complement_basis(span_rows, candidates, p):
    """Rows of `candidates` extending a basis of span(span_rows), chosen greedily."""
    candidates = np.asarray(candidates, dtype=np.int64)
    ncols = candidates.shape[1] if candidates.ndim == 2 else 0
    ech = Echelon(ncols, p)
    for row in np.asarray(span_rows, dtype=np.int64).reshape(-1, ncols):
        ech.add(row)
    return [row for row in candidates if ech.add(row)]
