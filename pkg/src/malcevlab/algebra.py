"""Finite-dimensional algebras given by structure constants.

An :class:`Algebra` carries one or more named bilinear operations, each a
:class:`StructureTensor` with ``op(e_i, e_j) = sum_k c[i][j][k] e_k``.
Indices are 0-based in Python; files, the CLI and check reports use the
1-based labels ``e1..en``.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .linalg import SparseVec, to_dense, to_sparse, vadd_into
from .scalar import Scalar, as_scalar, unify_params

SKEW = "skew"
SYMMETRIC = "symmetric"


class AlgebraError(ValueError):
    pass


class SymmetryError(AlgebraError):
    pass


class StructureTensor:
    """Sparse n x n x n tensor of Scalars; ``rows[(i, j)]`` maps k to c[i][j][k]."""

    __slots__ = ("dim", "params", "rows")

    def __init__(self, dim: int, params: Iterable[str] = (), rows: Mapping | None = None):
        self.dim = dim
        self.params = tuple(params)
        self.rows: dict[tuple[int, int], dict[int, Scalar]] = {}
        for (i, j), out in (rows or {}).items():
            clean = {k: as_scalar(v, self.params) for k, v in out.items()}
            clean = {k: v for k, v in clean.items() if v}
            if clean:
                self.rows[(i, j)] = clean

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[tuple], params: Iterable[str] = (), one_based: bool = False):
        """Build from ``(i, j, k, value)`` records; repeated cells accumulate."""
        params = tuple(params)
        shift = 1 if one_based else 0
        rows: dict = {}
        for i, j, k, value in entries:
            i, j, k = i - shift, j - shift, k - shift
            for idx in (i, j, k):
                if not 0 <= idx < dim:
                    raise AlgebraError(f"index {idx + shift} out of range for dimension {dim}")
            cell = rows.setdefault((i, j), {})
            s = as_scalar(value, params)
            cell[k] = cell[k] + s if k in cell else s
        return cls(dim, params, rows)

    @classmethod
    def from_function(cls, dim: int, fn: Callable[[int, int], SparseVec], params: Iterable[str] = ()):
        """Tabulate a bilinear map given on basis pairs."""
        return cls(dim, params, {(i, j): fn(i, j) for i in range(dim) for j in range(dim)})

    def get(self, i: int, j: int, k: int) -> Scalar:
        v = self.rows.get((i, j), {}).get(k)
        return v if v is not None else Scalar.const(0, self.params)

    def product(self, i: int, j: int) -> SparseVec:
        return self.rows.get((i, j), {})

    def apply(self, x: SparseVec, y: SparseVec) -> SparseVec:
        out: SparseVec = {}
        rows = self.rows
        for i, xi in x.items():
            for j, yj in y.items():
                cell = rows.get((i, j))
                if cell:
                    vadd_into(out, cell, xi * yj)
        return out

    def entries(self):
        """Nonzero ``(i, j, k, value)`` in lexicographic index order."""
        for (i, j) in sorted(self.rows):
            for k in sorted(self.rows[(i, j)]):
                yield i, j, k, self.rows[(i, j)][k]

    def with_params(self, params: Iterable[str]) -> StructureTensor:
        params = tuple(params)
        if params == self.params:
            return self
        return StructureTensor(self.dim, params, {ij: {k: v.with_params(params) for k, v in out.items()}
                                                  for ij, out in self.rows.items()})

    def map_scalars(self, fn: Callable[[Scalar], Scalar], params: Iterable[str] | None = None) -> StructureTensor:
        params = self.params if params is None else tuple(params)
        return StructureTensor(self.dim, params, {ij: {k: fn(v) for k, v in out.items()}
                                                  for ij, out in self.rows.items()})

    def scaled(self, coeff) -> StructureTensor:
        return self.map_scalars(lambda v: v * coeff)

    def __add__(self, other: StructureTensor) -> StructureTensor:
        params = unify_params(self.params, other.params)
        rows: dict = {ij: dict(out) for ij, out in self.with_params(params).rows.items()}
        for ij, out in other.with_params(params).rows.items():
            vadd_into(rows.setdefault(ij, {}), out)
        return StructureTensor(self.dim, params, rows)

    def __sub__(self, other: StructureTensor) -> StructureTensor:
        return self + other.scaled(-1)

    def transposed(self) -> StructureTensor:
        """The opposite product, (x, y) -> op(y, x)."""
        return StructureTensor(self.dim, self.params, {(j, i): out for (i, j), out in self.rows.items()})

    def is_zero(self) -> bool:
        return not self.rows

    def symmetry_violations(self, kind: str) -> list[tuple[int, int, int]]:
        sign = -1 if kind == SKEW else 1
        bad = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                a, b = self.rows.get((i, j), {}), self.rows.get((j, i), {})
                for k in sorted(set(a) | set(b)):
                    if self.get(i, j, k) != self.get(j, i, k) * sign:
                        bad.append((i, j, k))
        return bad

    def max_degree(self) -> int:
        return max((v.degree() for out in self.rows.values() for v in out.values()), default=0)

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        if self.dim != other.dim:
            return False
        return (self - other).is_zero()

    def __repr__(self):
        return f"StructureTensor(dim={self.dim}, nonzero_cells={len(self.rows)})"


class Algebra:
    """A vector space with named bilinear operations sharing one parameter context."""

    def __init__(self, dim: int, ops: Mapping[str, StructureTensor], symmetry: Mapping[str, str | None] | None = None,
                 basis: Sequence[str] | None = None, params: Iterable[str] = (), name: str = ""):
        params = unify_params(params, *(t.params for t in ops.values()))
        self.dim = dim
        self.params = params
        self.name = name
        self.basis = list(basis) if basis is not None else [f"e{i + 1}" for i in range(dim)]
        if len(self.basis) != dim:
            raise AlgebraError(f"{len(self.basis)} basis labels for dimension {dim}")
        self.ops: dict[str, StructureTensor] = {}
        for op, t in ops.items():
            if t.dim != dim:
                raise AlgebraError(f"operation {op!r} has dimension {t.dim}, expected {dim}")
            self.ops[op] = t.with_params(params)
        self.symmetry = {op: (symmetry or {}).get(op) for op in self.ops}
        for op, kind in self.symmetry.items():
            if kind not in (None, SKEW, SYMMETRIC):
                raise AlgebraError(f"unknown symmetry flag {kind!r}")
            if kind:
                bad = self.ops[op].symmetry_violations(kind)
                if bad:
                    i, j, k = bad[0]
                    raise SymmetryError(f"operation {op!r} flagged {kind} but c[{i + 1}][{j + 1}][{k + 1}] "
                                        f"and c[{j + 1}][{i + 1}][{k + 1}] disagree")

    def tensor(self, op: str) -> StructureTensor:
        try:
            return self.ops[op]
        except KeyError:
            raise AlgebraError(f"unknown operation {op!r}; algebra has {sorted(self.ops)}") from None

    def is_skew(self, op: str) -> bool:
        return self.symmetry.get(op) == SKEW

    def with_ops(self, ops: Mapping[str, StructureTensor], symmetry: Mapping[str, str | None] | None = None,
                 name: str | None = None) -> Algebra:
        return Algebra(self.dim, ops, symmetry, self.basis, self.params, self.name if name is None else name)

    def substitute(self, assignment: Mapping) -> Algebra:
        """Partially evaluate parameters; substituted names stay in the context."""
        ops = {op: t.map_scalars(lambda v: v.substitute(assignment)) for op, t in self.ops.items()}
        return Algebra(self.dim, ops, self.symmetry, self.basis, self.params, self.name)

    def evaluate(self, assignment: Mapping) -> Algebra:
        """Full evaluation to a parameter-free algebra."""
        ops = {op: t.map_scalars(lambda v: Scalar.const(v.evaluate(assignment)), ()) for op, t in self.ops.items()}
        return Algebra(self.dim, ops, self.symmetry, self.basis, (), self.name)

    def __repr__(self):
        return f"Algebra({self.name or 'anonymous'}, dim={self.dim}, ops={sorted(self.ops)})"


def _dense_in(alg: Algebra, x: Sequence) -> SparseVec:
    if len(x) != alg.dim:
        raise AlgebraError(f"vector of length {len(x)} for dimension {alg.dim}")
    return to_sparse(x, alg.params)


def apply(alg: Algebra, op: str, x: Sequence, y: Sequence) -> list[Scalar]:
    """Bilinear extension: sum_{i,j} x_i y_j c[i][j][.]."""
    t = alg.tensor(op)
    return to_dense(t.apply(_dense_in(alg, x), _dense_in(alg, y)), alg.dim, alg.params)


def associator(alg: Algebra, op: str, x: Sequence, y: Sequence, z: Sequence) -> list[Scalar]:
    t = alg.tensor(op)
    xs, ys, zs = (_dense_in(alg, v) for v in (x, y, z))
    out = t.apply(t.apply(xs, ys), zs)
    vadd_into(out, t.apply(xs, t.apply(ys, zs)), -1)
    return to_dense(out, alg.dim, alg.params)


def jacobian(alg: Algebra, bracket: str, x: Sequence, y: Sequence, z: Sequence) -> list[Scalar]:
    """[[x,y],z] + [[z,x],y] + [[y,z],x]."""
    if not alg.is_skew(bracket):
        raise AlgebraError(f"operation {bracket!r} is not flagged skew")
    t = alg.tensor(bracket)
    xs, ys, zs = (_dense_in(alg, v) for v in (x, y, z))
    out: SparseVec = {}
    vadd_into(out, t.apply(t.apply(xs, ys), zs))
    vadd_into(out, t.apply(t.apply(zs, xs), ys))
    vadd_into(out, t.apply(t.apply(ys, zs), xs))
    return to_dense(out, alg.dim, alg.params)


def commutator_tensor(t: StructureTensor) -> StructureTensor:
    return t - t.transposed()


def commutator_algebra(alg: Algebra, op: str = "mul", name: str | None = None) -> Algebra:
    """Single-bracket algebra [x, y] = x.y - y.x, flagged skew."""
    return Algebra(alg.dim, {"bracket": commutator_tensor(alg.tensor(op))}, {"bracket": SKEW}, alg.basis,
                   alg.params, name or (f"[{alg.name}]" if alg.name else ""))


def direct_sum(a: Algebra, b: Algebra, op_a: str, op_b: str | None = None, op: str | None = None) -> Algebra:
    """Direct sum of algebras; the summands multiply to zero."""
    op_b = op_b or op_a
    op = op or op_a
    n = a.dim
    rows: dict = {}
    ta, tb = a.tensor(op_a), b.tensor(op_b)
    for (i, j), out in ta.rows.items():
        rows[(i, j)] = dict(out)
    for (i, j), out in tb.rows.items():
        rows[(i + n, j + n)] = {k + n: v for k, v in out.items()}
    params = unify_params(a.params, b.params)
    sym = a.symmetry.get(op_a) if a.symmetry.get(op_a) == b.symmetry.get(op_b) else None
    return Algebra(n + b.dim, {op: StructureTensor(n + b.dim, params, rows)}, {op: sym},
                   params=params, name=f"{a.name}+{b.name}")
