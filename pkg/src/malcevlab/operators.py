"""Weighted O-operators, Rota-Baxter and Nijenhuis operators, and the Malcev
Yang-Baxter equation in tensor and operator form.

Matrix conventions: a LinearMap ``M`` sends source basis vector ``j`` to
``sum_i M[i][j] e_i``.  A TensorElement ``r`` stands for
``sum r[i][j] e_i (x) e_j``; read as a map from the dual space it sends
``e_j*`` to ``sum_i r[i][j] e_i``, so its matrix is ``r`` itself.  On dual
spaces ``<e_i*, e_j> = delta_ij`` and coadjoint-type actions are negative
transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import SKEW, Algebra, StructureTensor
from .identities import CheckReport, Frame, Witness, evaluate_identity, lookup, merge_reports
from .linalg import Matrix, SparseMap, SparseVec, identity, inverse, is_zero_matrix, matmul, matvec, vadd_into
from .reps import AltBimodule, BilinearForm, MalcevRep, ShapeError, adjoint_rep, check_invariant_form, \
    dual_rep, module_frame, regular_bimodule, semidirect_malcev
from .scalar import Scalar, ScalarError, as_scalar, format_scalar, unify_params


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class LinearMap:
    matrix: list

    def __post_init__(self):
        object.__setattr__(self, "matrix", [[as_scalar(v) for v in row] for row in self.matrix])
        if self.matrix and any(len(row) != len(self.matrix[0]) for row in self.matrix):
            raise ShapeError("ragged matrix")

    @classmethod
    def from_rows(cls, rows, params=()) -> LinearMap:
        return cls([[as_scalar(v, params) for v in row] for row in rows])

    @classmethod
    def identity(cls, n: int, params=()) -> LinearMap:
        return cls(identity(n, params))

    @classmethod
    def zero(cls, rows: int, cols: int, params=()) -> LinearMap:
        z = Scalar.const(0, params)
        return cls([[z] * cols for _ in range(rows)])

    @classmethod
    def from_images(cls, images: Sequence[SparseVec], rows: int, params=()) -> LinearMap:
        z = Scalar.const(0, params)
        return cls([[images[j].get(i, z) for j in range(len(images))] for i in range(rows)])

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @property
    def cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def params(self):
        return unify_params(*(v.params for row in self.matrix for v in row))

    def __call__(self, vec: SparseVec) -> SparseVec:
        return matvec(self.matrix, vec)

    def __matmul__(self, other: LinearMap) -> LinearMap:
        return LinearMap(matmul(self.matrix, other.matrix))

    def __add__(self, other: LinearMap) -> LinearMap:
        return LinearMap([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)])

    def __sub__(self, other: LinearMap) -> LinearMap:
        return self + other.scaled(-1)

    def scaled(self, c) -> LinearMap:
        return LinearMap([[a * c for a in row] for row in self.matrix])

    def substitute(self, assignment) -> LinearMap:
        return LinearMap([[a.substitute(assignment) for a in row] for row in self.matrix])

    def evaluate(self, assignment) -> LinearMap:
        return LinearMap([[Scalar.const(a.evaluate(assignment)) for a in row] for row in self.matrix])

    def inverse(self) -> LinearMap:
        return LinearMap(inverse(self.matrix))

    def is_zero(self) -> bool:
        return is_zero_matrix(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and (self - other).is_zero()

    def embedded(self, row_offset: int = 0, col_offset: int = 0) -> SparseMap:
        return SparseMap.embed(self.matrix, row_offset, col_offset)


@dataclass(frozen=True)
class TensorElement:
    """r = sum r[i][j] e_i (x) e_j."""

    matrix: list
    skew: bool = True

    def __post_init__(self):
        object.__setattr__(self, "matrix", [[as_scalar(v) for v in row] for row in self.matrix])
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ShapeError("tensor element must be square")
        if self.skew:
            for i in range(n):
                for j in range(i, n):
                    if self.matrix[i][j] != -self.matrix[j][i]:
                        raise ShapeError(f"tensor flagged skew but r[{i + 1}][{j + 1}] != -r[{j + 1}][{i + 1}]")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def sigma(self) -> TensorElement:
        """The flip e_i (x) e_j -> e_j (x) e_i."""
        return TensorElement([list(col) for col in zip(*self.matrix)], self.skew)

    def as_map(self) -> LinearMap:
        return LinearMap(self.matrix)


@dataclass(frozen=True)
class OOperator:
    """T: V -> A over a Malcev representation or an alternative bimodule, with weight lam."""

    rep: object
    T: LinearMap
    weight: Scalar = field(default_factory=lambda: Scalar.const(0))

    def __post_init__(self):
        object.__setattr__(self, "weight", as_scalar(self.weight))
        if self.T.rows != self.rep.base.dim or self.T.cols != self.rep.module_dim:
            raise ShapeError(f"T is {self.T.rows}x{self.T.cols}, expected "
                             f"{self.rep.base.dim}x{self.rep.module_dim}")

    @property
    def is_malcev(self) -> bool:
        return isinstance(self.rep, MalcevRep)

    @property
    def params(self):
        return unify_params(self.rep.params, self.T.params, self.weight.params)


def _weighted(t: StructureTensor | None, m: int, lam: Scalar, params) -> StructureTensor:
    if t is None or not lam:
        return StructureTensor(m, params)
    return t.with_params(params).scaled(lam)


# -- operator checks ---------------------------------------------------------------

def check_oop_malcev(o: OOperator, max_witnesses: int | None = 10) -> CheckReport:
    """[Ta,Tb] = T(rho(Ta)b - rho(Tb)a + lam[a,b]_V) at every module basis pair."""
    if not o.is_malcev:
        raise OperatorError("check_oop_malcev needs an operator over a Malcev representation")
    rep: MalcevRep = o.rep
    params = o.params
    n, m = rep.base.dim, rep.module_dim
    frame = module_frame(rep.base, m, params, {"B": rep.base.tensor(rep.bracket)}, {"rho": rep.rho},
                         {"K": _weighted(rep.module_bracket, m, o.weight, params)})
    frame.tensors["T"] = o.T.embedded(0, n)
    frame.window = (0, n)
    return evaluate_identity(lookup("o_operator_malcev"), frame, max_witnesses)


def check_oop_alt(o: OOperator, max_witnesses: int | None = 10) -> CheckReport:
    """Ta.Tb = T(l(Ta)b + r(Tb)a + lam a.b) at every module basis pair."""
    if o.is_malcev:
        raise OperatorError("check_oop_alt needs an operator over an alternative bimodule")
    bm: AltBimodule = o.rep
    params = o.params
    n, m = bm.base.dim, bm.module_dim
    frame = module_frame(bm.base, m, params, {"M": bm.base.tensor(bm.mul)}, {"l": bm.left, "r": bm.right},
                         {"K": _weighted(bm.module_mul, m, o.weight, params)})
    frame.tensors["T"] = o.T.embedded(0, n)
    frame.window = (0, n)
    return evaluate_identity(lookup("o_operator_alternative"), frame, max_witnesses)


def check_oop(o: OOperator, max_witnesses: int | None = 10) -> CheckReport:
    return check_oop_malcev(o, max_witnesses) if o.is_malcev else check_oop_alt(o, max_witnesses)


def _square(alg: Algebra, M: LinearMap, what: str):
    if M.rows != alg.dim or M.cols != alg.dim:
        raise ShapeError(f"{what} is {M.rows}x{M.cols}, algebra has dimension {alg.dim}")


def check_rb(alg: Algebra, op: str, R: LinearMap, weight=0, max_witnesses: int | None = 10) -> CheckReport:
    """R(x)R(y) = R(R(x)y + xR(y) + lam xy) at every basis pair."""
    _square(alg, R, "R")
    lam = as_scalar(weight)
    params = unify_params(alg.params, R.params, lam.params)
    t = alg.tensor(op).with_params(params)
    frame = Frame(alg.dim, params, {"A": list(range(alg.dim))},
                  {"M": t, "K": t.scaled(lam), "R": R.embedded()}, list(alg.basis))
    return evaluate_identity(lookup("rota_baxter"), frame, max_witnesses)


def check_nijenhuis(alg: Algebra, bracket: str, N: LinearMap, max_witnesses: int | None = 10) -> CheckReport:
    """[Nx,Ny] = N([Nx,y] - [Ny,x] - N[x,y]) at every basis pair."""
    _square(alg, N, "N")
    params = unify_params(alg.params, N.params)
    frame = Frame(alg.dim, params, {"A": list(range(alg.dim))},
                  {"B": alg.tensor(bracket).with_params(params), "N": N.embedded()}, list(alg.basis))
    return evaluate_identity(lookup("nijenhuis"), frame, max_witnesses)


def rb_as_oop(alg: Algebra, R: LinearMap, weight=0, op: str = "bracket") -> OOperator:
    """A Rota-Baxter operator is an O-operator over the adjoint (or regular) module with V = A."""
    if alg.is_skew(op):
        return OOperator(adjoint_rep(alg, op), R, weight)
    return OOperator(regular_bimodule(alg, op), R, weight)


def nijenhuis_block(o: OOperator) -> tuple[Algebra, LinearMap]:
    """The semidirect algebra with module bracket scaled by -lam and N_T(x, a) = (x + T a, 0).

    N_T is Nijenhuis there exactly when T is a lam-weighted O-operator.
    """
    if not o.is_malcev:
        raise OperatorError("the Nijenhuis criterion is stated for Malcev representations")
    rep = o.rep
    n, m = rep.base.dim, rep.module_dim
    alg = semidirect_malcev(rep, module_scale=-o.weight, name="semidirect(-weight)")
    params = unify_params(alg.params, o.params)
    z, one = Scalar.const(0, params), Scalar.const(1, params)
    N = [[z] * (n + m) for _ in range(n + m)]
    for i in range(n):
        N[i][i] = one
        for j in range(m):
            N[i][n + j] = o.T.matrix[i][j]
    return alg, LinearMap(N)


def graph_subalgebra_check(o: OOperator, max_witnesses: int | None = 10) -> CheckReport:
    """Closure of the graph {(Ta, a)} under the semidirect bracket with lam-scaled module bracket."""
    if not o.is_malcev:
        raise OperatorError("graph criterion needs a Malcev representation")
    rep = o.rep
    n, m = rep.base.dim, rep.module_dim
    alg = semidirect_malcev(rep, module_scale=o.weight)
    params = unify_params(alg.params, o.params)
    t = alg.tensor("bracket")
    one = Scalar.const(1, params)
    lift = []
    for a in range(m):
        v = {i: o.T.matrix[i][a] for i in range(n) if o.T.matrix[i][a]}
        v[n + a] = one
        lift.append(v)
    witnesses, failing, checked = [], 0, 0
    z = Scalar.const(0, params)
    for a in range(m):
        for b in range(m):
            checked += 1
            w = t.apply(lift[a], lift[b])
            base_part = {i: v for i, v in w.items() if i < n}
            mod_part = {i - n: v for i, v in w.items() if i >= n}
            res = dict(base_part)
            vadd_into(res, o.T(mod_part), -1)
            if res:
                failing += 1
                if max_witnesses is None or len(witnesses) < max_witnesses:
                    witnesses.append(Witness((a + 1, b + 1), [[res.get(i, z) for i in range(n)]]))
    return CheckReport("graph_subalgebra", failing == 0, witnesses, failing, checked, ("a", "b"),
                       "[(Ta,a),(Tb,b)] lies in the graph of T")


def induced_tensor(o: OOperator) -> StructureTensor:
    """[a,b]_T = rho(Ta)b - rho(Tb)a + lam[a,b]_V (Malcev) or a*b = l(Ta)b + r(Tb)a + lam a.b (alternative)."""
    rep = o.rep
    n, m = rep.base.dim, rep.module_dim
    params = o.params
    z = Scalar.const(0, params)
    if o.is_malcev:
        left_act, right_act, sign, mod = rep.rho, rep.rho, -1, rep.module_bracket
    else:
        left_act, right_act, sign, mod = rep.left, rep.right, 1, rep.module_mul

    def act(mats, x: SparseVec, v: int) -> SparseVec:
        out: SparseVec = {}
        for i, c in x.items():
            col = {k: mats[i][k][v] for k in range(m) if mats[i][k][v]}
            vadd_into(out, col, c)
        return out

    images = [o.T({a: Scalar.const(1, params)}) for a in range(m)]
    rows = {}
    for a in range(m):
        for b in range(m):
            acc = act(left_act, images[a], b)
            vadd_into(acc, act(right_act, images[b], a), sign)
            if mod is not None and o.weight:
                vadd_into(acc, mod.product(a, b), o.weight)
            if acc:
                rows[(a, b)] = acc
    return StructureTensor(m, params, rows)


def induced_bracket(o: OOperator, name: str = "") -> Algebra:
    """The module with bracket [a,b]_T; refuses when T is not a weighted O-operator."""
    if not o.is_malcev:
        raise OperatorError("induced_bracket needs a Malcev representation; see induced_product")
    rep = check_oop_malcev(o, max_witnesses=1)
    if not rep.passed:
        raise OperatorError("T is not a weighted O-operator:\n" + rep.render())
    labels = [f"v{k + 1}" for k in range(o.rep.module_dim)]
    return Algebra(o.rep.module_dim, {"bracket": induced_tensor(o)}, {"bracket": SKEW}, labels, o.params,
                   name or "induced")


def induced_product(o: OOperator, name: str = "") -> Algebra:
    if o.is_malcev:
        raise OperatorError("induced_product needs an alternative bimodule")
    rep = check_oop_alt(o, max_witnesses=1)
    if not rep.passed:
        raise OperatorError("T is not a weighted O-operator:\n" + rep.render())
    labels = [f"v{k + 1}" for k in range(o.rep.module_dim)]
    return Algebra(o.rep.module_dim, {"mul": induced_tensor(o)}, basis=labels, params=o.params,
                   name=name or "induced")


def map_homomorphism_report(name: str, f: LinearMap, src: StructureTensor, dst: StructureTensor,
                            max_witnesses: int | None = 10) -> CheckReport:
    """f(x*y) = f(x)*f(y) at every basis pair of the source."""
    n = src.dim
    params = unify_params(f.params, src.params, dst.params)
    one = Scalar.const(1, params)
    z = Scalar.const(0, params)
    images = [f({i: one}) for i in range(n)]
    witnesses, failing = [], 0
    for i in range(n):
        for j in range(n):
            res = f(src.product(i, j))
            vadd_into(res, dst.apply(images[i], images[j]), -1)
            if res:
                failing += 1
                if max_witnesses is None or len(witnesses) < max_witnesses:
                    witnesses.append(Witness((i + 1, j + 1), [[res.get(k, z) for k in range(dst.dim)]]))
    return CheckReport(name, failing == 0, witnesses, failing, n * n, ("x", "y"))


def check_oop_homomorphism(src: OOperator, dst: OOperator, phi: LinearMap, psi: LinearMap,
                           max_witnesses: int | None = 10) -> CheckReport:
    """phi: A -> A', psi: V -> V' bracket homomorphisms with phi T = T' psi and
    psi(rho(x)a) = rho'(phi x) psi(a).  On success, psi must also be a homomorphism
    of the induced brackets; that is checked and reported too."""
    if not (src.is_malcev and dst.is_malcev):
        raise OperatorError("homomorphisms are checked for Malcev O-operators")
    A, A2 = src.rep.base, dst.rep.base
    n, m, n2, m2 = A.dim, src.rep.module_dim, A2.dim, dst.rep.module_dim
    if (phi.rows, phi.cols) != (n2, n) or (psi.rows, psi.cols) != (m2, m):
        raise ShapeError("phi must be dim A' x dim A and psi dim V' x dim V")
    if src.weight != dst.weight:
        raise OperatorError("source and target operators have different weights")
    params = unify_params(src.params, dst.params, phi.params, psi.params)
    reports = [map_homomorphism_report("phi_bracket", phi, A.tensor(src.rep.bracket), A2.tensor(dst.rep.bracket),
                                       max_witnesses)]
    zm, zm2 = StructureTensor(m, params), StructureTensor(m2, params)
    reports.append(map_homomorphism_report("psi_module_bracket", psi, src.rep.module_bracket or zm,
                                           dst.rep.module_bracket or zm2, max_witnesses))
    # phi T = T' psi
    diff = (phi @ src.T) - (dst.T @ psi)
    z = Scalar.const(0, params)
    wit = [Witness((j + 1,), [[diff.matrix[i][j] for i in range(n2)]]) for j in range(m)
           if any(diff.matrix[i][j] for i in range(n2))]
    reports.append(CheckReport("intertwines_T", not wit, wit[:max_witnesses] if max_witnesses else wit, len(wit), m,
                               ("a",)))
    # psi(rho(x)a) = rho'(phi x) psi(a)
    one = Scalar.const(1, params)
    wit, failing = [], 0
    for x in range(n):
        px = phi({x: one})
        for a in range(m):
            lhs = psi({k: src.rep.rho[x][k][a] for k in range(m) if src.rep.rho[x][k][a]})
            pa = psi({a: one})
            rhs: SparseVec = {}
            for i, c in px.items():
                for b, d in pa.items():
                    col = {k: dst.rep.rho[i][k][b] for k in range(m2) if dst.rep.rho[i][k][b]}
                    vadd_into(rhs, col, c * d)
            vadd_into(lhs, rhs, -1)
            if lhs:
                failing += 1
                if max_witnesses is None or len(wit) < max_witnesses:
                    wit.append(Witness((x + 1, a + 1), [[lhs.get(k, z) for k in range(m2)]]))
    reports.append(CheckReport("intertwines_action", failing == 0, wit, failing, n * m, ("x", "a")))
    merged = merge_reports("oop_homomorphism", reports, max_witnesses)
    if merged.passed and check_oop_malcev(src, 1).passed and check_oop_malcev(dst, 1).passed:
        induced = map_homomorphism_report("psi_induced_bracket", psi, induced_tensor(src), induced_tensor(dst),
                                          max_witnesses)
        merged = merge_reports("oop_homomorphism", reports + [induced], max_witnesses)
    return merged


# -- Malcev Yang-Baxter equation -------------------------------------------------------

def mybe_residual(alg: Algebra, bracket: str, r: TensorElement) -> list:
    """Coefficients of [r12,r13] + [r12,r23] + [r13,r23] on e_p (x) e_q (x) e_s, as an n x n x n list.

    With r = sum r_ij e_i (x) e_j and [e_a, e_b] = sum_p c_ab^p e_p:
      [r12,r13] = sum r_ij r_kl [e_i,e_k] (x) e_j (x) e_l
      [r12,r23] = sum r_ij r_kl e_i (x) [e_j,e_k] (x) e_l
      [r13,r23] = sum r_ij r_kl e_i (x) e_k (x) [e_j,e_l]
    """
    n = alg.dim
    if r.dim != n:
        raise ShapeError(f"tensor has dimension {r.dim}, algebra has {n}")
    t = alg.tensor(bracket)
    params = unify_params(alg.params, *(v.params for row in r.matrix for v in row))
    z = Scalar.const(0, params)
    out = [[[z] * n for _ in range(n)] for _ in range(n)]
    nz = [(i, j, r.matrix[i][j]) for i in range(n) for j in range(n) if r.matrix[i][j]]
    for i, j, a in nz:
        for k, l, b in nz:
            ab = a * b
            for p, c in t.product(i, k).items():
                out[p][j][l] = out[p][j][l] + ab * c
            for p, c in t.product(j, k).items():
                out[i][p][l] = out[i][p][l] + ab * c
            for p, c in t.product(j, l).items():
                out[i][k][p] = out[i][k][p] + ab * c
    return out


def mybe_report(alg: Algebra, bracket: str, r: TensorElement, max_witnesses: int | None = 10) -> CheckReport:
    res = mybe_residual(alg, bracket, r)
    n = alg.dim
    wit, failing = [], 0
    for p in range(n):
        for q in range(n):
            for s in range(n):
                if res[p][q][s]:
                    failing += 1
                    if max_witnesses is None or len(wit) < max_witnesses:
                        wit.append(Witness((p + 1, q + 1, s + 1), [[res[p][q][s]]]))
    return CheckReport("mybe", failing == 0, wit, failing, n ** 3, ("p", "q", "s"),
                       "coefficient of e_p (x) e_q (x) e_s")


def coadjoint_rep(alg: Algebra, bracket: str = "bracket") -> MalcevRep:
    return dual_rep(adjoint_rep(alg, bracket, with_bracket=False))


def operator_form_residual(alg: Algebra, bracket: str, r: TensorElement, max_witnesses: int | None = 10) -> CheckReport:
    """[r(x*), r(y*)] = r(ad*(r x*) y* - ad*(r y*) x*) over dual-basis pairs: r as a
    weight-0 O-operator on the coadjoint module."""
    if not r.skew:
        raise ShapeError("operator form needs a skew tensor")
    if r.dim != alg.dim:
        raise ShapeError(f"tensor has dimension {r.dim}, algebra has {alg.dim}")
    rep = coadjoint_rep(alg, bracket)
    report = check_oop_malcev(OOperator(rep, r.as_map(), 0), max_witnesses)
    report.identity = "mybe_operator_form"
    return report


def lift_oop_to_tensor(o: OOperator) -> tuple[Algebra, TensorElement]:
    """A^ = A semidirect V* (dual action, zero bracket on V*) and r = T - sigma(T) in A^ (x) A^."""
    if not o.is_malcev:
        raise OperatorError("the lift is defined for Malcev O-operators")
    if o.weight:
        raise OperatorError("the lift is only defined for weight 0")
    rep = o.rep
    n, m = rep.base.dim, rep.module_dim
    dual = dual_rep(MalcevRep(rep.base, m, rep.rho, None, rep.bracket))
    hat = semidirect_malcev(dual, name="A x V*")
    hat.basis = list(rep.base.basis) + [f"v{k + 1}*" for k in range(m)]
    params = unify_params(hat.params, o.params)
    z = Scalar.const(0, params)
    r = [[z] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(m):
            v = o.T.matrix[i][j]
            r[i][n + j] = v
            r[n + j][i] = -v
    return hat, TensorElement(r)


def form_to_rb(alg: Algebra, bracket: str, B: BilinearForm, r: TensorElement) -> LinearMap:
    """R = r phi where phi(x) = B(x, .) read in the dual basis, so phi has matrix B."""
    if B.dim != alg.dim or r.dim != alg.dim:
        raise ShapeError("form, tensor and algebra dimensions differ")
    if not B.symmetric:
        raise OperatorError("form must be symmetric")
    try:
        nondeg = B.is_nondegenerate()
    except ScalarError:
        raise OperatorError("form must be parameter-free") from None
    if not nondeg:
        raise OperatorError("form is degenerate")
    inv = check_invariant_form(alg, B, bracket, max_witnesses=1)
    if not inv.passed:
        raise OperatorError("form is not invariant:\n" + inv.render())
    return LinearMap(matmul(r.matrix, B.matrix))
