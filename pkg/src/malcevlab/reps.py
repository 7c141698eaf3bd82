"""Representations of Malcev algebras and bimodules of alternative algebras.

An action of an n-dimensional algebra on an m-dimensional module is stored
as one m x m matrix per basis element of the algebra, so linearity in the
acting element is structural.  Checks run on the direct sum ``A + V`` where
basis indices ``0..n-1`` belong to ``A`` and ``n..n+m-1`` to ``V``; the
action then becomes one more bilinear slot for the identity evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import SKEW, Algebra, AlgebraError, StructureTensor, commutator_tensor
from .identities import CheckReport, Frame, Witness, evaluate_identity, lookup, merge_reports, check_identity
from .linalg import Matrix, determinant, matmul, mscale, transpose, zeros
from .scalar import Scalar, as_scalar, format_scalar, unify_params


class ShapeError(AlgebraError):
    pass


def _check_mats(mats: Sequence[Matrix], count: int, m: int, what: str):
    if len(mats) != count:
        raise ShapeError(f"{what}: expected {count} matrices, got {len(mats)}")
    for idx, M in enumerate(mats):
        if len(M) != m or any(len(row) != m for row in M):
            raise ShapeError(f"{what}: matrix for e{idx + 1} is not {m}x{m}")


def _mats_params(mats):
    return unify_params(*dict.fromkeys(v.params for M in mats for row in M for v in row))


def _clean(mats, params):
    return [[[as_scalar(v, params) for v in row] for row in M] for M in mats]


@dataclass(frozen=True)
class MalcevRep:
    """``rho[i]`` is the matrix of rho(e_i); ``module_bracket`` makes V an A-module Malcev algebra."""

    base: Algebra
    module_dim: int
    rho: list
    module_bracket: StructureTensor | None = None
    bracket: str = "bracket"

    def __post_init__(self):
        params = unify_params(self.base.params, *(v.params for M in self.rho for row in M for v in row
                                                  if isinstance(v, Scalar)))
        object.__setattr__(self, "rho", _clean(self.rho, params))
        _check_mats(self.rho, self.base.dim, self.module_dim, "rho")
        if self.module_bracket is not None:
            mb = self.module_bracket
            if mb.dim != self.module_dim:
                raise ShapeError(f"module bracket has dimension {mb.dim}, module has {self.module_dim}")
            if mb.symmetry_violations(SKEW):
                raise ShapeError("module bracket is not skew")

    @property
    def params(self):
        extra = [self.module_bracket.params] if self.module_bracket else []
        return unify_params(self.base.params, _mats_params(self.rho), *extra)

    def action(self, i: int) -> Matrix:
        return self.rho[i]


@dataclass(frozen=True)
class AltBimodule:
    """``left[i]``, ``right[i]`` are the matrices of l(e_i), r(e_i); ``module_mul`` is optional."""

    base: Algebra
    module_dim: int
    left: list
    right: list
    module_mul: StructureTensor | None = None
    mul: str = "mul"

    def __post_init__(self):
        params = unify_params(self.base.params, *(v.params for M in self.left + self.right for row in M
                                                   for v in row if isinstance(v, Scalar)))
        object.__setattr__(self, "left", _clean(self.left, params))
        object.__setattr__(self, "right", _clean(self.right, params))
        _check_mats(self.left, self.base.dim, self.module_dim, "left action")
        _check_mats(self.right, self.base.dim, self.module_dim, "right action")
        if self.module_mul is not None and self.module_mul.dim != self.module_dim:
            raise ShapeError(f"module product has dimension {self.module_mul.dim}, module has {self.module_dim}")

    @property
    def params(self):
        extra = [self.module_mul.params] if self.module_mul else []
        return unify_params(self.base.params, _mats_params(self.left), _mats_params(self.right), *extra)


@dataclass(frozen=True)
class BilinearForm:
    matrix: list
    symmetric: bool = True

    def __post_init__(self):
        object.__setattr__(self, "matrix", [[as_scalar(v) if not isinstance(v, Scalar) else v for v in row]
                                            for row in self.matrix])
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ShapeError("bilinear form must be square")
        if self.symmetric:
            for i in range(n):
                for j in range(i):
                    if self.matrix[i][j] != self.matrix[j][i]:
                        raise ShapeError(f"form flagged symmetric but B(e{i + 1},e{j + 1}) != B(e{j + 1},e{i + 1})")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def is_nondegenerate(self) -> bool:
        return determinant(self.matrix) != 0

    def __call__(self, x: dict, y: dict) -> Scalar:
        acc = Scalar.const(0, _params_of_form(self))
        for i, xi in x.items():
            for j, yj in y.items():
                if self.matrix[i][j]:
                    acc = acc + xi * yj * self.matrix[i][j]
        return acc


def _params_of_form(B: BilinearForm):
    return B.matrix[0][0].params if B.matrix else ()


# -- building the combined space ---------------------------------------------------

def embed_tensor(t: StructureTensor, offset: int, total: int, params) -> StructureTensor:
    rows = {(i + offset, j + offset): {k + offset: v for k, v in out.items()} for (i, j), out in t.rows.items()}
    return StructureTensor(total, params, rows)


def action_tensor(mats: Sequence[Matrix], n: int, m: int, params) -> StructureTensor:
    """Tensor on A + V with (e_i, v_j) -> sum_k mats[i][k][j] v_k."""
    rows = {}
    for i, M in enumerate(mats):
        for j in range(m):
            out = {n + k: M[k][j] for k in range(m) if M[k][j]}
            if out:
                rows[(i, n + j)] = out
    return StructureTensor(n + m, params, rows)


def module_frame(base: Algebra, m: int, params, base_ops: dict, actions: dict, module_ops: dict) -> Frame:
    """Frame on A + V: *base_ops* slot -> tensor on A, *actions* slot -> matrices, *module_ops* slot -> tensor on V."""
    n = base.dim
    tensors = {}
    for slot, t in base_ops.items():
        tensors[slot] = embed_tensor(t.with_params(params), 0, n + m, params)
    for slot, mats in actions.items():
        tensors[slot] = action_tensor(mats, n, m, params)
    for slot, t in module_ops.items():
        tensors[slot] = embed_tensor(t.with_params(params), n, n + m, params)
    sorts = {"A": list(range(n)), "V": list(range(n, n + m))}
    labels = list(base.basis) + [f"v{k + 1}" for k in range(m)]
    return Frame(n + m, params, sorts, tensors, labels, window=(n, n + m))


def _zero_tensor(m, params):
    return StructureTensor(m, params)


def _run(names, frame, max_witnesses):
    return [evaluate_identity(lookup(name), frame, max_witnesses) for name in names]


# -- checks -----------------------------------------------------------------------

def check_malcev_rep(rep: MalcevRep, max_witnesses: int | None = 10) -> CheckReport:
    """Operator identity for rho at every basis triple of A and every module basis vector."""
    params = rep.params
    frame = module_frame(rep.base, rep.module_dim, params, {"B": rep.base.tensor(rep.bracket)},
                         {"rho": rep.rho}, {})
    return evaluate_identity(lookup("malcev_rep"), frame, max_witnesses)


def dual_rep(rep: MalcevRep) -> MalcevRep:
    """rho*(x) = -rho(x)^T; the module bracket is dropped."""
    return MalcevRep(rep.base, rep.module_dim, [mscale(transpose(M), -1) for M in rep.rho], None, rep.bracket)


def check_a_module_malcev(rep: MalcevRep, max_witnesses: int | None = 10) -> CheckReport:
    """Representation, Malcev module bracket, and the three compatibility identities."""
    params = rep.params
    mb = rep.module_bracket if rep.module_bracket is not None else _zero_tensor(rep.module_dim, params)
    reports = [check_malcev_rep(rep, max_witnesses)]
    module_alg = Algebra(rep.module_dim, {"bracket": mb}, {"bracket": SKEW}, params=params)
    sag = check_identity(module_alg, "sagle", max_witnesses=max_witnesses)
    sag.identity = "sagle (module bracket)"
    reports.append(sag)
    frame = module_frame(rep.base, rep.module_dim, params, {"B": rep.base.tensor(rep.bracket)},
                         {"rho": rep.rho}, {"W": mb})
    reports += _run(["a_module_malcev_1", "a_module_malcev_2", "a_module_malcev_3"], frame, max_witnesses)
    return merge_reports("a_module_malcev", reports, max_witnesses)


def check_alt_bimodule(bm: AltBimodule, max_witnesses: int | None = 10) -> CheckReport:
    """The four bimodule identities; with a module product also its alternativity
    and the four compatibility identities of an A-bimodule alternative algebra."""
    params = bm.params
    base_ops = {"M": bm.base.tensor(bm.mul)}
    actions = {"l": bm.left, "r": bm.right}
    module_ops = {} if bm.module_mul is None else {"W": bm.module_mul}
    frame = module_frame(bm.base, bm.module_dim, params, base_ops, actions, module_ops)
    names = [f"alt_bimodule_{k}" for k in range(1, 5)]
    reports = _run(names, frame, max_witnesses)
    if bm.module_mul is not None:
        module_alg = Algebra(bm.module_dim, {"mul": bm.module_mul}, params=params)
        for name in ("alternative_left", "alternative_right"):
            rep = check_identity(module_alg, name, max_witnesses=max_witnesses)
            rep.identity = f"{name} (module product)"
            reports.append(rep)
        reports += _run([f"bimodule_algebra_{k}" for k in range(1, 5)], frame, max_witnesses)
    name = "alt_bimodule" if bm.module_mul is None else "bimodule_algebra"
    return merge_reports(name, reports, max_witnesses)


# -- constructions ----------------------------------------------------------------

def semidirect_malcev(rep: MalcevRep, module_scale=1, name: str = "") -> Algebra:
    """[(x,a),(y,b)] = ([x,y], rho(x)b - rho(y)a + s[a,b]_V) with s = *module_scale*."""
    n, m = rep.base.dim, rep.module_dim
    params = rep.params
    s = as_scalar(module_scale, params)
    params = unify_params(params, s.params)
    t = embed_tensor(rep.base.tensor(rep.bracket).with_params(params), 0, n + m, params)
    act = action_tensor(rep.rho, n, m, params)
    t = t + act - act.transposed()
    if rep.module_bracket is not None:
        t = t + embed_tensor(rep.module_bracket.with_params(params), n, n + m, params).scaled(s)
    basis = list(rep.base.basis) + [f"v{k + 1}" for k in range(m)]
    return Algebra(n + m, {"bracket": t}, {"bracket": SKEW}, basis, params, name or "semidirect")


def semidirect_alternative(bm: AltBimodule, name: str = "") -> Algebra:
    """(x+a)(y+b) = xy + l(x)b + r(y)a + a.b."""
    n, m = bm.base.dim, bm.module_dim
    params = bm.params
    t = embed_tensor(bm.base.tensor(bm.mul).with_params(params), 0, n + m, params)
    t = t + action_tensor(bm.left, n, m, params) + action_tensor(bm.right, n, m, params).transposed()
    if bm.module_mul is not None:
        t = t + embed_tensor(bm.module_mul.with_params(params), n, n + m, params)
    basis = list(bm.base.basis) + [f"v{k + 1}" for k in range(m)]
    return Algebra(n + m, {"mul": t}, basis=basis, params=params, name=name or "semidirect")


def alt_to_malcev_module(bm: AltBimodule) -> MalcevRep:
    """rho = l - r over the commutator algebra; module bracket is the commutator of the module product."""
    from .algebra import commutator_algebra

    base = commutator_algebra(bm.base, bm.mul)
    rho = [[[a - b for a, b in zip(ra, rb)] for ra, rb in zip(L, R)] for L, R in zip(bm.left, bm.right)]
    mb = commutator_tensor(bm.module_mul) if bm.module_mul is not None else None
    return MalcevRep(base, bm.module_dim, rho, mb)


def adjoint_rep(alg: Algebra, op: str = "bracket", with_bracket: bool = True) -> MalcevRep:
    """rho(e_i) = ad(e_i); optionally V = A with its own bracket."""
    t = alg.tensor(op)
    n = alg.dim
    mats = [[[t.get(i, j, k) for j in range(n)] for k in range(n)] for i in range(n)]
    return MalcevRep(alg, n, mats, t if with_bracket else None, op)


def zero_rep(alg: Algebra, m: int, op: str = "bracket", with_bracket: bool = False) -> MalcevRep:
    mats = [zeros(m, m, alg.params) for _ in range(alg.dim)]
    return MalcevRep(alg, m, mats, StructureTensor(m, alg.params) if with_bracket else None, op)


def regular_bimodule(alg: Algebra, op: str = "mul", with_product: bool = True) -> AltBimodule:
    """l = L (left multiplication), r = R (right multiplication), V = A."""
    t = alg.tensor(op)
    n = alg.dim
    left = [[[t.get(i, j, k) for j in range(n)] for k in range(n)] for i in range(n)]
    right = [[[t.get(j, i, k) for j in range(n)] for k in range(n)] for i in range(n)]
    return AltBimodule(alg, n, left, right, t if with_product else None, op)


def killing_form(alg: Algebra, op: str = "bracket") -> BilinearForm:
    """B(x, y) = trace(ad x ad y)."""
    ad = adjoint_rep(alg, op, with_bracket=False).rho
    n = alg.dim
    z = Scalar.const(0, alg.params)
    mat = []
    for i in range(n):
        row = []
        for j in range(n):
            P = matmul(ad[i], ad[j])
            acc = z
            for k in range(n):
                acc = acc + P[k][k]
            row.append(acc)
        mat.append(row)
    return BilinearForm(mat)


def check_invariant_form(alg: Algebra, B: BilinearForm, op: str = "bracket",
                         max_witnesses: int | None = 10) -> CheckReport:
    """B([e_i,e_j],e_k) - B(e_i,[e_j,e_k]) at every basis triple."""
    if B.dim != alg.dim:
        raise ShapeError(f"form has dimension {B.dim}, algebra has {alg.dim}")
    t = alg.tensor(op)
    n = alg.dim
    one = Scalar.const(1, alg.params)
    witnesses, failing, checked = [], 0, 0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                checked += 1
                lhs = B(t.product(i, j), {k: one})
                rhs = B({i: one}, t.product(j, k))
                res = lhs - rhs
                if res:
                    failing += 1
                    if max_witnesses is None or len(witnesses) < max_witnesses:
                        witnesses.append(Witness((i + 1, j + 1, k + 1), [[res]]))
    return CheckReport("invariant_form", failing == 0, witnesses, failing, checked, ("x", "y", "z"),
                       "B([x,y],z) = B(x,[y,z])")
