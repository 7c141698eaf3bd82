"""Post-Malcev and post-alternative structures and the constructions between them.

Every post-structure is *certified*: its constructor runs the full axiom
enumeration and raises CertificationError on failure, and downstream
constructions refuse uncertified input.  Parametric tables are certified
symbolically when the expected residual degree is small, otherwise at a few
seeded random rational parameter points.  A certificate may also fix some
parameters (``fixed={"lam": -1}``), in which case the verdict only speaks
for that specialization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import SKEW, Algebra, AlgebraError, StructureTensor, commutator_tensor
from .identities import CheckReport, check_identity, expand_names, lookup, merge_reports, tree_depth
from .linalg import SparseVec, vadd_into
from .operators import LinearMap, OOperator, OperatorError, check_oop, check_rb, induced_tensor, \
    map_homomorphism_report, rb_as_oop
from .scalar import Scalar, ScalarError

SYMBOLIC_DEGREE_LIMIT = 4
DEFAULT_SAMPLES = 3


class CertificationError(AlgebraError):
    def __init__(self, message: str, reports: list | None = None):
        super().__init__(message)
        self.reports = reports or []


@dataclass
class Certificate:
    mode: str  # "symbolic" or "sampled"
    fixed: dict = field(default_factory=dict)
    points: list = field(default_factory=list)
    seed: int | None = None
    reports: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def describe(self) -> str:
        parts = [self.mode]
        if self.fixed:
            parts.append("with " + ", ".join(f"{k}={v}" for k, v in self.fixed.items()))
        if self.mode == "sampled":
            parts.append(f"at {len(self.points)} points, seed {self.seed}")
        return " ".join(parts)


def _specialize(alg: Algebra, fixed: Mapping | None) -> Algebra:
    return alg.substitute(fixed) if fixed else alg


def _free_params(alg: Algebra) -> tuple:
    used = set()
    for t in alg.ops.values():
        for _, _, _, v in t.entries():
            used.update(v.used_params())
    return tuple(p for p in alg.params if p in used)


def _expected_degree(alg: Algebra, names: Iterable[str]) -> int:
    deg = max((t.max_degree() for t in alg.ops.values()), default=0)
    depth = 0
    for name in names:
        for eq in lookup(name).parsed():
            for _, tree in eq:
                depth = max(depth, tree_depth(tree))
    return deg * depth


def random_points(params: Iterable[str], count: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        pts.append({p: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for p in params})
    return pts


def certify(alg: Algebra, identities: Iterable[str], binding: Mapping[str, str] | None = None,
            fixed: Mapping | None = None, seed: int = 0, samples: int = DEFAULT_SAMPLES,
            mode: str | None = None) -> Certificate:
    """Run every named identity; raise CertificationError on any failure."""
    names = expand_names(identities)
    spec = _specialize(alg, fixed)
    free = _free_params(spec)
    if mode is None:
        mode = "symbolic" if not free or _expected_degree(spec, names) <= SYMBOLIC_DEGREE_LIMIT else "sampled"
    cert = Certificate(mode, dict(fixed or {}), seed=seed if mode == "sampled" else None)
    if mode == "symbolic":
        cert.reports = [check_identity(spec, n, binding, max_witnesses=3) for n in names]
    else:
        cert.points = random_points(free, samples, seed)
        for pt in cert.points:
            concrete = spec.evaluate({**{p: 0 for p in spec.params if p not in pt}, **pt})
            for n in names:
                rep = check_identity(concrete, n, binding, max_witnesses=3)
                rep.note = (rep.note + " " if rep.note else "") + "at " + ", ".join(f"{k}={v}" for k, v in pt.items())
                cert.reports.append(rep)
    if not cert.passed:
        bad = [r for r in cert.reports if not r.passed]
        raise CertificationError("certification failed:\n" + "\n".join(r.render() for r in bad), bad)
    return cert


@dataclass
class PostMalcevAlgebra:
    """Operations "bracket" (skew) and "rhd"."""

    algebra: Algebra
    certificate: Certificate | None = None

    @classmethod
    def build(cls, dim: int, bracket: StructureTensor, rhd: StructureTensor, basis=None, params=(),
              name: str = "", fixed: Mapping | None = None, seed: int = 0, mode: str | None = None):
        alg = Algebra(dim, {"bracket": bracket, "rhd": rhd}, {"bracket": SKEW}, basis, params, name)
        return cls.certify(alg, fixed, seed, mode)

    @classmethod
    def certify(cls, alg: Algebra, fixed: Mapping | None = None, seed: int = 0, mode: str | None = None):
        cert = certify(alg, ["post_malcev"], {"B": "bracket", "P": "rhd"}, fixed, seed, mode=mode)
        return cls(alg, cert)

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.passed

    @property
    def bracket(self) -> StructureTensor:
        return self.algebra.tensor("bracket")

    @property
    def rhd(self) -> StructureTensor:
        return self.algebra.tensor("rhd")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def fixed(self) -> dict:
        return self.certificate.fixed if self.certificate else {}


@dataclass
class PostAlternativeAlgebra:
    """Operations "tri_left" (<), "tri_right" (>) and "tri_dot"."""

    algebra: Algebra
    certificate: Certificate | None = None

    @classmethod
    def build(cls, dim: int, left: StructureTensor, right: StructureTensor, dot: StructureTensor, basis=None,
              params=(), name: str = "", fixed: Mapping | None = None, seed: int = 0, mode: str | None = None):
        alg = Algebra(dim, {"tri_left": left, "tri_right": right, "tri_dot": dot}, basis=basis, params=params,
                      name=name)
        return cls.certify(alg, fixed, seed, mode)

    @classmethod
    def certify(cls, alg: Algebra, fixed: Mapping | None = None, seed: int = 0, mode: str | None = None):
        cert = certify(alg, ["post_alternative"], {"L": "tri_left", "R": "tri_right", "D": "tri_dot"},
                       fixed, seed, mode=mode)
        return cls(alg, cert)

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.passed

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def fixed(self) -> dict:
        return self.certificate.fixed if self.certificate else {}

    def tensor(self, op: str) -> StructureTensor:
        return self.algebra.tensor(op)


def _require(p):
    if not getattr(p, "certified", False):
        raise CertificationError("construction needs a certified post-structure")


def _recheck(alg: Algebra, names, binding, p, what: str):
    """Run identities on a derived algebra under the same specialization as *p*."""
    cert = p.certificate
    try:
        certify(alg, names, binding, cert.fixed, cert.seed or 0, mode=cert.mode)
    except CertificationError as exc:
        raise CertificationError(f"{what}: {exc}", exc.reports) from None


# -- from operators -------------------------------------------------------------------

def _oop_gate(o: OOperator, fixed):
    spec = o
    if fixed:
        spec = OOperator(o.rep, o.T.substitute(fixed), o.weight.substitute(fixed))
        spec = _substitute_rep(spec, fixed)
    rep = check_oop(spec, max_witnesses=3)
    if not rep.passed:
        raise OperatorError("T is not a weighted O-operator:\n" + rep.render())


def _substitute_rep(o: OOperator, fixed) -> OOperator:
    from dataclasses import replace

    rep = o.rep
    base = rep.base.substitute(fixed)
    sub = lambda mats: [[[v.substitute(fixed) for v in row] for row in M] for M in mats]
    if o.is_malcev:
        mb = rep.module_bracket.map_scalars(lambda v: v.substitute(fixed)) if rep.module_bracket else None
        new = replace(rep, base=base, rho=sub(rep.rho), module_bracket=mb)
    else:
        mm = rep.module_mul.map_scalars(lambda v: v.substitute(fixed)) if rep.module_mul else None
        new = replace(rep, base=base, left=sub(rep.left), right=sub(rep.right), module_mul=mm)
    return OOperator(new, o.T, o.weight)


def post_malcev_from_oop(o: OOperator, fixed: Mapping | None = None, seed: int = 0,
                         mode: str | None = None) -> PostMalcevAlgebra:
    """[a,b] = lam[a,b]_V and a > b = rho(Ta)b on the module."""
    if not o.is_malcev:
        raise OperatorError("needs an operator over a Malcev representation")
    _oop_gate(o, fixed)
    rep = o.rep
    m = rep.module_dim
    params = o.params
    br = rep.module_bracket.with_params(params).scaled(o.weight) if rep.module_bracket else StructureTensor(m, params)
    one = Scalar.const(1, params)
    rows = {}
    for a in range(m):
        ta = o.T({a: one})
        for b in range(m):
            acc: SparseVec = {}
            for i, c in ta.items():
                vadd_into(acc, {k: rep.rho[i][k][b] for k in range(m) if rep.rho[i][k][b]}, c)
            if acc:
                rows[(a, b)] = acc
    labels = [f"v{k + 1}" for k in range(m)]
    p = PostMalcevAlgebra.build(m, br, StructureTensor(m, params, rows), labels, params, "post-Malcev", fixed, seed,
                                mode)
    # T is a homomorphism from the sub-adjacent algebra to the base
    sub = subadjacent_malcev(p, check=False)
    hom = map_homomorphism_report("T_homomorphism", o.T, _specialize(sub, fixed).tensor("bracket"),
                                  _specialize(rep.base, fixed).tensor(rep.bracket))
    if not hom.passed:
        raise CertificationError("T is not a homomorphism onto the base:\n" + hom.render(), [hom])
    p.certificate.reports.append(hom)
    return p


def post_malcev_from_rb(alg: Algebra, R: LinearMap, weight, op: str = "bracket", fixed: Mapping | None = None,
                        seed: int = 0, mode: str | None = None) -> PostMalcevAlgebra:
    """[x,y]_new = lam[x,y] and x > y = [R x, y]."""
    return post_malcev_from_oop(rb_as_oop(alg, R, weight, op), fixed, seed, mode)


def post_alt_from_oop(o: OOperator, fixed: Mapping | None = None, seed: int = 0,
                      mode: str | None = None) -> PostAlternativeAlgebra:
    """a > b = l(Ta)b, a < b = r(Tb)a, a.b = lam a.b on the module."""
    if o.is_malcev:
        raise OperatorError("needs an operator over an alternative bimodule")
    _oop_gate(o, fixed)
    bm = o.rep
    m = bm.module_dim
    params = o.params
    one = Scalar.const(1, params)
    images = [o.T({a: one}) for a in range(m)]

    def act(mats, x, v):
        out: SparseVec = {}
        for i, c in x.items():
            vadd_into(out, {k: mats[i][k][v] for k in range(m) if mats[i][k][v]}, c)
        return out

    right = {(a, b): act(bm.left, images[a], b) for a in range(m) for b in range(m)}
    left = {(a, b): act(bm.right, images[b], a) for a in range(m) for b in range(m)}
    dot = bm.module_mul.with_params(params).scaled(o.weight) if bm.module_mul else StructureTensor(m, params)
    labels = [f"v{k + 1}" for k in range(m)]
    p = PostAlternativeAlgebra.build(m, StructureTensor(m, params, left), StructureTensor(m, params, right), dot,
                                     labels, params, "post-alternative", fixed, seed, mode)
    star = sum_alternative(p, check=False)
    hom = map_homomorphism_report("T_homomorphism", o.T, _specialize(star, fixed).tensor("mul"),
                                  _specialize(bm.base, fixed).tensor(bm.mul))
    if not hom.passed:
        raise CertificationError("T is not a homomorphism onto the base:\n" + hom.render(), [hom])
    p.certificate.reports.append(hom)
    return p


def post_alt_from_rb(alg: Algebra, R: LinearMap, weight, op: str = "mul", fixed: Mapping | None = None,
                     seed: int = 0, mode: str | None = None) -> PostAlternativeAlgebra:
    """x < y = x R(y), x > y = R(x) y, x.y = lam xy."""
    return post_alt_from_oop(rb_as_oop(alg, R, weight, op), fixed, seed, mode)


# -- derived algebras ---------------------------------------------------------------------

def subadjacent_tensor(p: PostMalcevAlgebra) -> StructureTensor:
    return commutator_tensor(p.rhd) + p.bracket


def subadjacent_malcev(p: PostMalcevAlgebra, check: bool = True) -> Algebra:
    """{x,y} = x > y - y > x + [x,y]."""
    _require(p)
    alg = Algebra(p.dim, {"bracket": subadjacent_tensor(p)}, {"bracket": SKEW}, p.algebra.basis, p.algebra.params,
                  "sub-adjacent")
    if check:
        _recheck(alg, ["sagle"], None, p, "sub-adjacent algebra")
    return alg


def sum_alternative(p: PostAlternativeAlgebra, check: bool = True) -> Algebra:
    """x * y = x < y + x > y + x.y."""
    _require(p)
    t = p.tensor("tri_left") + p.tensor("tri_right") + p.tensor("tri_dot")
    alg = Algebra(p.dim, {"mul": t}, basis=p.algebra.basis, params=p.algebra.params, name="sum")
    if check:
        _recheck(alg, ["alternative_left", "alternative_right"], None, p, "sum product")
    return alg


def admissible_product(p: PostMalcevAlgebra) -> Algebra:
    """x o y = x > y + 1/2 [x,y]; its commutator is the sub-adjacent bracket."""
    _require(p)
    t = p.rhd + p.bracket.scaled(Fraction(1, 2))
    alg = Algebra(p.dim, {"mul": t}, basis=p.algebra.basis, params=p.algebra.params, name="admissible")
    if commutator_tensor(t) != subadjacent_tensor(p):
        raise CertificationError("commutator of the admissible product differs from the sub-adjacent bracket")
    return alg


def modified_post_malcev(p: PostMalcevAlgebra) -> PostMalcevAlgebra:
    """(A, -[,], x >> y = x > y + [x,y]), with the same sub-adjacent algebra."""
    _require(p)
    cert = p.certificate
    alg = p.algebra.with_ops({"bracket": p.bracket.scaled(-1), "rhd": p.rhd + p.bracket}, {"bracket": SKEW},
                             name="modified")
    q = PostMalcevAlgebra.certify(alg, cert.fixed, cert.seed or 0, cert.mode)
    if subadjacent_tensor(q) != subadjacent_tensor(p):
        raise CertificationError("modified structure changed the sub-adjacent algebra")
    return q


def double_bracket(p: PostMalcevAlgebra) -> Algebra:
    """[[(a,x),(b,y)]] = ({a,b}, a > y - b > x + [x,y]) on A + A (first copy e_i, second f_i)."""
    _require(p)
    n = p.dim
    params = p.algebra.params
    curly = subadjacent_tensor(p)
    rows: dict = {}

    def add(key, vec, coeff=1):
        if vec:
            vadd_into(rows.setdefault(key, {}), vec, coeff)

    for i in range(n):
        for j in range(n):
            add((i, j), curly.product(i, j))
            add((i, n + j), {k + n: v for k, v in p.rhd.product(i, j).items()})
            add((n + j, i), {k + n: v for k, v in p.rhd.product(i, j).items()}, -1)
            add((n + i, n + j), {k + n: v for k, v in p.bracket.product(i, j).items()})
    basis = [f"e{i + 1}" for i in range(n)] + [f"f{i + 1}" for i in range(n)]
    return Algebra(2 * n, {"bracket": StructureTensor(2 * n, params, rows)}, {"bracket": SKEW}, basis, params,
                   "double")


def post_malcev_from_post_alt(p: PostAlternativeAlgebra) -> PostMalcevAlgebra:
    """[a,b] = a.b - b.a and a > b = a >_alt b - b <_alt a."""
    _require(p)
    cert = p.certificate
    br = commutator_tensor(p.tensor("tri_dot"))
    rhd = p.tensor("tri_right") - p.tensor("tri_left").transposed()
    alg = Algebra(p.dim, {"bracket": br, "rhd": rhd}, {"bracket": SKEW}, p.algebra.basis, p.algebra.params,
                  "post-Malcev of post-alternative")
    return PostMalcevAlgebra.certify(alg, cert.fixed, cert.seed or 0, cert.mode)


def compatible_post_malcev_from_invertible_rb(alg: Algebra, bracket: str, R: LinearMap, weight=1,
                                              seed: int = 0) -> PostMalcevAlgebra:
    """{x,y} = R[R^-1 x, R^-1 y] and x > y = R[x, R^-1 y] for an invertible
    weight-1 Rota-Baxter R; x > y - y > x + {x,y} recovers [x,y]."""
    try:
        Rinv = R.inverse()
    except ScalarError as exc:
        raise OperatorError(f"R must be invertible and parameter-free: {exc}") from None
    rb = check_rb(alg, bracket, R, weight, max_witnesses=3)
    if not rb.passed:
        raise OperatorError("R is not a Rota-Baxter operator of the given weight:\n" + rb.render())
    n = alg.dim
    t = alg.tensor(bracket)
    params = alg.params
    one = Scalar.const(1, params)
    inv_img = [Rinv({i: one}) for i in range(n)]
    curly = {}
    rhd = {}
    for i in range(n):
        for j in range(n):
            v = R(t.apply(inv_img[i], inv_img[j]))
            if v:
                curly[(i, j)] = v
            w = R(t.apply({i: one}, inv_img[j]))
            if w:
                rhd[(i, j)] = w
    p = PostMalcevAlgebra.build(n, StructureTensor(n, params, curly), StructureTensor(n, params, rhd), alg.basis,
                                params, "compatible", seed=seed)
    if subadjacent_tensor(p) != t:
        raise CertificationError("x > y - y > x + {x,y} does not recover the original bracket")
    return p


def transposed_bracket_post_malcev(alg: Algebra, bracket: str = "bracket") -> PostMalcevAlgebra:
    """x > y = [y,x] alongside the original bracket."""
    t = alg.tensor(bracket)
    return PostMalcevAlgebra.build(alg.dim, t, t.transposed(), alg.basis, alg.params, "transposed")
