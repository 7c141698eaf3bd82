"""Sparse vectors and dense Scalar matrices, with exact elimination over Q.

Vectors used inside the checkers are ``dict[int, Scalar]`` with zero
coordinates omitted.  Matrices are lists of rows of Scalars; ``M[i][j]`` is
the coefficient of target basis vector ``i`` in the image of source basis
vector ``j``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalar import Scalar, ScalarError, as_scalar

SparseVec = dict  # dict[int, Scalar]
Matrix = list  # list[list[Scalar]]


def vadd_into(acc: SparseVec, vec: SparseVec, coeff=1) -> SparseVec:
    """acc += coeff * vec, in place; drops cancelled coordinates."""
    for k, v in vec.items():
        term = v if coeff == 1 else v * coeff
        cur = acc.get(k)
        if cur is None:
            if term:
                acc[k] = term
        else:
            cur = cur + term
            if cur:
                acc[k] = cur
            else:
                del acc[k]
    return acc


def vcombine(pairs: Iterable[tuple]) -> SparseVec:
    """Linear combination sum(coeff * vec)."""
    acc: SparseVec = {}
    for coeff, vec in pairs:
        vadd_into(acc, vec, coeff)
    return acc


def vscale(vec: SparseVec, coeff) -> SparseVec:
    out = {}
    for k, v in vec.items():
        w = v * coeff
        if w:
            out[k] = w
    return out


def to_sparse(dense: Sequence, params: Iterable[str] = ()) -> SparseVec:
    out = {}
    for i, v in enumerate(dense):
        s = as_scalar(v, params)
        if s:
            out[i] = s
    return out


def to_dense(vec: SparseVec, dim: int, params: Iterable[str] = ()) -> list[Scalar]:
    z = Scalar.const(0, params)
    return [vec.get(i, z) for i in range(dim)]


def basis_vec(i: int, params: Iterable[str] = ()) -> SparseVec:
    return {i: Scalar.const(1, params)}


def matrix(rows: Sequence[Sequence], params: Iterable[str] = ()) -> Matrix:
    return [[as_scalar(v, params) for v in row] for row in rows]


def zeros(r: int, c: int, params: Iterable[str] = ()) -> Matrix:
    z = Scalar.const(0, params)
    return [[z] * c for _ in range(r)]


def identity(n: int, params: Iterable[str] = ()) -> Matrix:
    z, o = Scalar.const(0, params), Scalar.const(1, params)
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def matvec(M: Matrix, vec: SparseVec) -> SparseVec:
    out: SparseVec = {}
    for j, v in vec.items():
        for i, row in enumerate(M):
            if row[j]:
                cur = out.get(i)
                term = row[j] * v
                cur = term if cur is None else cur + term
                if cur:
                    out[i] = cur
                else:
                    out.pop(i, None)
    return out


def column(M: Matrix, j: int) -> SparseVec:
    return {i: row[j] for i, row in enumerate(M) if row[j]}


def matmul(A: Matrix, B: Matrix) -> Matrix:
    inner = len(B)
    cols = len(B[0]) if B else 0
    params = _params_of(A, B)
    z = Scalar.const(0, params)
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = z
            for k in range(inner):
                if row[k] and B[k][j]:
                    acc = acc + row[k] * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def _params_of(*mats) -> tuple:
    for M in mats:
        for row in M:
            for v in row:
                return v.params
    return ()


def madd(A: Matrix, B: Matrix, coeff=1) -> Matrix:
    return [[a + b * coeff for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mscale(A: Matrix, coeff) -> Matrix:
    return [[a * coeff for a in row] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def is_zero_matrix(A: Matrix) -> bool:
    return all(not v for row in A for v in row)


def _require_constant(A: Matrix) -> list[list[Fraction]]:
    try:
        return [[v.constant_value() for v in row] for row in A]
    except ScalarError:
        raise ScalarError("exact elimination is only supported for parameter-free matrices") from None


def determinant(A: Matrix) -> Fraction:
    """Exact determinant of a parameter-free square matrix (fraction-free Bareiss is unnecessary at this size)."""
    M = _require_constant(A)
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if M[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse over Q; raises ScalarError when singular or parametric."""
    M = _require_constant(A)
    n = len(M)
    if any(len(row) != n for row in M):
        raise ScalarError("only square matrices can be inverted")
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if pivot is None:
            raise ScalarError("matrix is singular")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        p = aug[c][c]
        aug[c] = [v / p for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    params = A[0][0].params if n else ()
    return [[Scalar.const(v, params) for v in row[n:]] for row in aug]


def nullspace(A: Matrix, cols: int | None = None) -> list[list[Fraction]]:
    """A basis of {x : A x = 0} over Q, from the reduced row echelon form."""
    M = _require_constant(A)
    n = cols if cols is not None else (len(M[0]) if M else 0)
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        p = M[r][c]
        M[r] = [v / p for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        x = [Fraction(0)] * n
        x[free] = Fraction(1)
        for row, c in enumerate(pivots):
            x[c] = -M[row][free]
        basis.append(x)
    return basis


class SparseMap:
    """A linear map stored by columns, ``cols[j]`` being the image of basis vector j.

    Used to place an operator matrix inside a larger direct-sum space.
    """

    __slots__ = ("cols",)

    def __init__(self, cols: dict):
        self.cols = {j: c for j, c in cols.items() if c}

    @classmethod
    def embed(cls, M: Matrix, row_offset: int = 0, col_offset: int = 0) -> SparseMap:
        cols = {}
        for j in range(len(M[0]) if M else 0):
            col = {i + row_offset: row[j] for i, row in enumerate(M) if row[j]}
            if col:
                cols[j + col_offset] = col
        return cls(cols)

    def apply1(self, x: SparseVec) -> SparseVec:
        out: SparseVec = {}
        for j, v in x.items():
            col = self.cols.get(j)
            if col:
                vadd_into(out, col, v)
        return out
