"""Dense exact linear algebra over a FieldTower, on numpy index arrays.

Matrices are 2-D int64 arrays of canonical element indices.  Everything is
built on the tower's vectorized table arithmetic; elimination maintains a
reduced row echelon form so that reducing a new row against the current
basis is a single scaled-matrix subtraction.
"""

import numpy as np


class Echelon:
    """Incrementally maintained reduced row echelon basis."""

    def __init__(self, tower, width):
        self.tw = tower
        self.width = width
        self.rows = np.zeros((0, width), dtype=np.int64)
        self.pivots = []

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, v):
        """Residual of v modulo the current row space."""
        v = np.asarray(v, dtype=np.int64).copy()
        if self.rows.shape[0]:
            coefs = v[self.pivots]
            if coefs.any():
                v = self.tw.sub_arr(v, self.tw.sum_arr(
                    self.tw.mul_arr(coefs[:, None], self.rows), axis=0))
        return v

    def add(self, v):
        """Reduce v and absorb it if independent; returns True if absorbed."""
        r = self.reduce(v)
        nz = np.nonzero(r)[0]
        if nz.size == 0:
            return False
        j = int(nz[0])
        r = self.tw.mul_arr(self.tw.inv(int(r[j])), r)
        if self.rows.shape[0]:
            col = self.rows[:, j]
            if col.any():
                self.rows = self.tw.sub_arr(
                    self.rows, self.tw.mul_arr(col[:, None], r[None, :]))
        self.rows = np.vstack([self.rows, r[None, :]])
        self.pivots.append(j)
        return True


def rref(tower, M):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    M = np.asarray(M, dtype=np.int64)
    ech = Echelon(tower, M.shape[1])
    for row in M:
        ech.add(row)
    order = np.argsort(ech.pivots)
    return ech.rows[order], [ech.pivots[i] for i in order]


def rank(tower, M):
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return rref(tower, M)[0].shape[0]


def nullspace(tower, M):
    """Basis of the right nullspace, one row per free column."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R, pivots = rref(tower, M)
    free = [j for j in range(n) if j not in set(pivots)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for i, j in enumerate(free):
        out[i, j] = 1
        for r, pj in enumerate(pivots):
            out[i, pj] = tower.neg(int(R[r, j]))
    return out


def matmul(tower, A, B):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i in range(A.shape[0]):
        prods = tower.mul_arr(A[i][:, None], B)
        out[i] = tower.sum_arr(prods, axis=0)
    return out


def row_space_equal(tower, A, B):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    ra = rank(tower, A)
    rb = rank(tower, B)
    if ra != rb:
        return False
    return rank(tower, np.vstack([A, B])) == ra


def solve_membership(tower, E, pivots, v):
    """True iff v lies in the row space described by an rref (E, pivots)."""
    v = np.asarray(v, dtype=np.int64).copy()
    if E.shape[0]:
        coefs = v[pivots]
        v = tower.sub_arr(v, tower.sum_arr(
            tower.mul_arr(coefs[:, None], E), axis=0))
    return not v.any()
