"""Registry of multilinear identities and the evaluator that checks them.

Every identity is data: a list of equations, each a rational linear
combination of composition trees written in a small call syntax such as
``B(B(x,z),B(y,t))``.  Tree leaves are variables, inner nodes apply a named
operation *slot*.  Slots are bound to concrete structure tensors when an
identity is checked.

Basis-evaluation lemma: if a residual is linear in each variable, it vanishes
for all inputs iff it vanishes on every tuple of basis vectors.  Variables an
identity uses twice (the Malcev identity repeats ``x``, the weak alternative
law repeats ``x``) are *polarized*: a residual that is quadratic in ``x`` is
zero iff it is zero at every ``e_i + e_j`` with ``i <= j`` (characteristic 0).

Variables carry a *sort*.  Plain algebra identities use one sort ``A``;
representation identities run on the direct sum ``A + V`` with ``x, y, z`` in
``A`` and ``a, b, c, v`` in ``V``, so actions are just more bilinear slots.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import Algebra, AlgebraError, StructureTensor
from .linalg import SparseVec, vadd_into
from .scalar import Scalar, format_scalar


class IdentityError(KeyError):
    def __str__(self):
        return str(self.args[0])


# -- expression trees ---------------------------------------------------------

_TOKENS = re.compile(r"\s*(\d+(?:/\d+)?|[A-Za-z_][A-Za-z_0-9]*|[-+*(),])")


def _lex(text: str) -> list[str]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m:
            raise ValueError(f"bad identity expression near {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_expression(text: str, variables: Iterable[str]) -> list[tuple[Fraction, tuple]]:
    """Parse ``c1*tree1 - tree2 + ...`` into (coefficient, tree) terms.

    A tree is ``('var', name)`` or ``('op', slot, left, right)``; a unary
    slot such as ``T(a)`` (a linear map) has ``right = None``.
    """
    variables = set(variables)
    toks = _lex(text) + [""]
    pos = 0

    def tree():
        nonlocal pos
        name = toks[pos]
        if not name:
            raise ValueError(f"unexpected end of {text!r}")
        pos += 1
        if name in variables:
            return ("var", name)
        if toks[pos] != "(":
            raise ValueError(f"expected '(' after slot {name!r} in {text!r}")
        pos += 1
        left = tree()
        if toks[pos] == ")":
            pos += 1
            return ("op", name, left, None)
        if toks[pos] != ",":
            raise ValueError(f"expected ',' in {text!r}")
        pos += 1
        right = tree()
        if toks[pos] != ")":
            raise ValueError(f"expected ')' in {text!r}")
        pos += 1
        return ("op", name, left, right)

    terms = []
    sign = 1
    while toks[pos]:
        if toks[pos] in "+-":
            sign = -1 if toks[pos] == "-" else 1
            pos += 1
        coeff = Fraction(1)
        if re.fullmatch(r"\d+(?:/\d+)?", toks[pos]):
            coeff = Fraction(toks[pos])
            pos += 1
            if toks[pos] != "*":
                raise ValueError(f"expected '*' after coefficient in {text!r}")
            pos += 1
        terms.append((sign * coeff, tree()))
        sign = 1
    return terms


def _children(node):
    return [c for c in node[2:] if c is not None]


def tree_slots(node) -> set[str]:
    if node[0] == "var":
        return set()
    out = {node[1]}
    for c in _children(node):
        out |= tree_slots(c)
    return out


def tree_vars(node) -> tuple[str, ...]:
    if node[0] == "var":
        return (node[1],)
    return tuple(dict.fromkeys(v for c in _children(node) for v in tree_vars(c)))


def tree_depth(node) -> int:
    if node[0] == "var":
        return 0
    return 1 + max(tree_depth(c) for c in _children(node))


# -- identities -----------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    name: str
    variables: tuple[tuple[str, str], ...]  # (name, sort)
    equations: tuple[str, ...]
    derived: tuple[tuple[str, str], ...] = ()  # (slot, expression in x, y)
    polarized: frozenset = frozenset()
    note: str = ""

    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def var_names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.variables)

    @property
    def sorts(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(s for _, s in self.variables))

    def parsed(self):
        return [parse_expression(eq, self.var_names) for eq in self.equations]

    @property
    def slots(self) -> tuple[str, ...]:
        """Operation slots the caller must bind (derived slots excluded)."""
        used: set[str] = set()
        for eq in self.parsed():
            for _, t in eq:
                used |= tree_slots(t)
        derived_names = {d for d, _ in self.derived}
        for _, expr in self.derived:
            for _, t in parse_expression(expr, ("x", "y")):
                used |= tree_slots(t)
        return tuple(sorted(used - derived_names))


REGISTRY: dict[str, Identity] = {}
GROUPS: dict[str, tuple[str, ...]] = {}


def register(name: str, variables: str, *equations: str, derived: Sequence[tuple[str, str]] = (),
             polarized: Iterable[str] = (), note: str = "") -> Identity:
    vs = []
    for spec in variables.split():
        v, _, sort = spec.partition(":")
        vs.append((v, sort or "A"))
    ident = Identity(name, tuple(vs), tuple(equations), tuple(derived), frozenset(polarized), note)
    REGISTRY[name] = ident
    return ident


def lookup(name: str) -> Identity:
    try:
        return REGISTRY[name]
    except KeyError:
        raise IdentityError(f"unknown identity {name!r}") from None


def expand_names(names: Iterable[str]) -> list[str]:
    out = []
    for n in names:
        out.extend(GROUPS.get(n, (n,)))
    return out


# Malcev side.  B is the bracket.
register("anticommutativity", "x y", "B(x,y) + B(y,x)")
register("jacobi", "x y z", "B(B(x,y),z) + B(B(z,x),y) + B(B(y,z),x)")
register(
    "malcev", "x y z",
    # J(x,y,[x,z]) - [J(x,y,z),x]
    "B(B(x,y),B(x,z)) + B(B(B(x,z),x),y) + B(B(y,B(x,z)),x)"
    " - B(B(B(x,y),z),x) - B(B(B(z,x),y),x) - B(B(B(y,z),x),x)",
    polarized="x",
    note="J(x,y,[x,z]) = [J(x,y,z),x]",
)
register(
    "sagle", "x y z t",
    "B(B(x,z),B(y,t)) - B(B(B(x,y),z),t) - B(B(B(y,z),t),x) - B(B(B(z,t),x),y) - B(B(B(t,x),y),z)",
)

# Alternative side.  M is the product.
register("associativity", "x y z", "M(M(x,y),z) - M(x,M(y,z))")
register("alternative_left", "x y z", "M(M(x,y),z) - M(x,M(y,z)) + M(M(y,x),z) - M(y,M(x,z))")
register("alternative_right", "x y z", "M(M(z,x),y) - M(z,M(x,y)) + M(M(z,y),x) - M(z,M(y,x))")
register("alternative_weak", "x y", "M(M(x,x),y) - M(x,M(x,y))", "M(M(y,x),x) - M(y,M(x,x))",
         polarized="x", note="as(x,x,y) = as(y,x,x) = 0")
GROUPS["alternative"] = ("alternative_left", "alternative_right")

# One-operation splitting of a Malcev bracket.  P is the product, B its commutator.
register(
    "pre_malcev", "x y z t",
    "P(B(y,z),P(x,t)) + P(B(B(x,y),z),t) + P(y,P(B(x,z),t)) - P(x,P(y,P(z,t))) + P(z,P(x,P(y,t)))",
    derived=[("B", "P(x,y) - P(y,x)")],
)

# Two-operation splitting of an alternative product.  L is <, R is >, D = L + R.
_PRE_ALT = [
    "L(R(x,y),z) - R(x,L(y,z)) + L(L(y,x),z) - L(y,D(x,z))",
    "L(R(x,y),z) - R(x,L(y,z)) + R(D(x,z),y) - R(x,R(z,y))",
    "R(D(x,y),z) - R(x,R(y,z)) + R(D(y,x),z) - R(y,R(x,z))",
    "L(L(z,x),y) - L(z,D(x,y)) + L(L(z,y),x) - L(z,D(y,x))",
]
register("pre_alternative", "x y z", *_PRE_ALT, derived=[("D", "L(x,y) + R(x,y)")])
register("pre_alternative_printed", "x y z", _PRE_ALT[0],
         "L(R(x,y),z) - R(x,L(y,z)) + R(D(z,x),y) - R(z,R(x,y))", *_PRE_ALT[2:],
         derived=[("D", "L(x,y) + R(x,y)")], note="second axiom as printed, kept for comparison")

# Three-operation splitting.  L is <, R is >, D is the dot, S = L + R + D.
_POST_ALT = [
    "D(D(x,y),z) - D(x,D(y,z)) + D(D(y,x),z) - D(y,D(x,z))",
    "D(D(z,x),y) - D(z,D(x,y)) + D(D(z,y),x) - D(z,D(y,x))",
    "L(D(x,y),z) - D(x,L(y,z)) + L(D(y,x),z) - D(y,L(x,z))",
    "D(R(x,y),z) - R(x,D(y,z)) + D(R(x,z),y) - R(x,D(z,y))",
    "D(R(y,x),z) - D(x,R(y,z)) + D(L(x,y),z) - R(y,D(x,z))",
    "D(L(z,x),y) - D(z,R(x,y)) + L(D(z,y),x) - D(z,L(y,x))",
    "L(R(x,y),z) - R(x,L(y,z)) + L(L(y,x),z) - L(y,S(x,z))",
    "L(R(x,y),z) - R(x,L(y,z)) + R(S(x,z),y) - R(x,R(z,y))",
    "R(S(x,y),z) - R(x,R(y,z)) + R(S(y,x),z) - R(y,R(x,z))",
    "L(L(z,x),y) - L(z,S(x,y)) + L(L(z,y),x) - L(z,S(y,x))",
]
_SUM3 = [("S", "L(x,y) + R(x,y) + D(x,y)")]
for _k, _eq in enumerate(_POST_ALT, 1):
    register(f"post_alternative_{_k}", "x y z", _eq, derived=_SUM3)
register("post_alternative_8_printed", "x y z", "L(R(x,y),z) - R(x,L(y,z)) + R(S(z,x),y) - R(z,R(x,y))",
         derived=_SUM3, note="as printed, kept for comparison")
GROUPS["post_alternative"] = tuple(f"post_alternative_{k}" for k in range(1, 11))

# Post-Malcev.  B is the bracket, P is the triangle product, C = P - P^op + B.
_CURLY = [("C", "P(x,y) - P(y,x) + B(x,y)")]
register("post_malcev_1", "x y z t",
         "P(C(x,z),B(y,t)) - P(x,B(P(z,y),t)) + B(P(z,P(x,y)),t) + B(P(x,P(z,t)),y) - P(z,B(P(x,t),y))",
         derived=_CURLY)
register("post_malcev_2", "x y z t",
         "B(P(x,z),P(y,t)) - B(P(C(x,y),z),t) + P(x,B(P(y,z),t)) - P(y,P(x,B(z,t))) - B(P(y,P(x,t)),z)",
         derived=_CURLY)
register("post_malcev_3", "x y z t",
         "B(P(x,z),B(y,t)) - B(B(P(x,y),z),t) + P(x,B(B(y,z),t)) + B(P(x,B(z,t)),y) + B(B(P(x,t),y),z)",
         derived=_CURLY)
register("post_malcev_4", "x y z t",
         "P(C(y,z),P(x,t)) + P(C(C(x,y),z),t) + P(y,P(C(x,z),t)) - P(x,P(y,P(z,t))) + P(z,P(x,P(y,t)))",
         derived=_CURLY, note="the representation identity for L_P over C")
register("post_malcev_4_printed", "x y z t",
         "P(C(y,z),P(x,t)) - P(C(C(x,y),z),t) - P(y,P(C(x,z),t)) - P(x,P(y,P(z,t))) + P(z,P(x,P(y,t)))",
         derived=_CURLY, note="as printed, kept for comparison")
GROUPS["post_malcev"] = tuple(f"post_malcev_{k}" for k in range(1, 5))

# Module identities on A + V.  rho, l, r act A x V -> V; W is the product on V.
register("malcev_rep", "x y z v:V",
         "rho(B(B(x,y),z),v) - rho(x,rho(y,rho(z,v))) + rho(z,rho(x,rho(y,v)))"
         " - rho(y,rho(B(z,x),v)) + rho(B(y,z),rho(x,v))")
register("a_module_malcev_1", "x y a:V b:V",
         "rho(B(x,y),W(a,b)) - rho(x,W(rho(y,a),b)) + W(rho(y,rho(x,a)),b)"
         " + W(rho(x,rho(y,b)),a) - rho(y,W(rho(x,b),a))")
register("a_module_malcev_2", "x y a:V b:V",
         "W(rho(x,a),rho(y,b)) - W(rho(B(x,y),a),b) + rho(x,W(rho(y,a),b))"
         " - rho(y,rho(x,W(a,b))) - W(rho(y,rho(x,b)),a)")
register("a_module_malcev_3", "x a:V b:V c:V",
         "W(rho(x,a),W(b,c)) - W(W(rho(x,b),a),c) + rho(x,W(W(b,a),c))"
         " + W(rho(x,W(a,c)),b) + W(W(rho(x,c),b),a)")
GROUPS["a_module_malcev"] = ("a_module_malcev_1", "a_module_malcev_2", "a_module_malcev_3")

register("alt_bimodule_1", "x y v:V", "r(x,r(y,v)) + r(y,r(x,v)) - r(M(x,y),v) - r(M(y,x),v)")
register("alt_bimodule_2", "x y v:V", "l(M(x,y),v) + l(M(y,x),v) - l(x,l(y,v)) - l(y,l(x,v))")
register("alt_bimodule_3", "x y v:V", "l(M(x,y),v) + r(y,l(x,v)) - l(x,l(y,v)) - l(x,r(y,v))")
register("alt_bimodule_4", "x y v:V", "r(y,l(x,v)) + r(y,r(x,v)) - l(x,r(y,v)) - r(M(x,y),v)",
         note="r(z) in the fourth axiom read as r(y)")
GROUPS["alt_bimodule"] = tuple(f"alt_bimodule_{k}" for k in range(1, 5))

register("bimodule_algebra_1", "x a:V b:V", "r(x,W(a,b)) - W(a,r(x,b)) + r(x,W(b,a)) - W(b,r(x,a))")
register("bimodule_algebra_2", "x a:V b:V", "W(l(x,a),b) - l(x,W(a,b)) + W(l(x,b),a) - l(x,W(b,a))")
register("bimodule_algebra_3", "x a:V b:V", "W(l(x,a),b) - W(a,l(x,b)) + W(r(x,a),b) - l(x,W(a,b))")
register("bimodule_algebra_4", "x a:V b:V", "W(r(x,a),b) - W(a,l(x,b)) + r(x,W(a,b)) - W(a,r(x,b))")
GROUPS["bimodule_algebra"] = tuple(f"bimodule_algebra_{k}" for k in range(1, 5))


# Operator conditions.  K is always the weight times the relevant product,
# bound by the caller, so the weight may be a formal parameter.
register("rota_baxter", "x y", "M(R(x),R(y)) - R(M(R(x),y)) - R(M(x,R(y))) - R(K(x,y))",
         note="R(x)R(y) = R(R(x)y + xR(y) + weight*xy)")
register("nijenhuis", "x y", "B(N(x),N(y)) - N(B(N(x),y)) + N(B(N(y),x)) + N(N(B(x,y)))",
         note="[Nx,Ny] = N([Nx,y] - [Ny,x] - N[x,y])")
register("o_operator_malcev", "a:V b:V", "B(T(a),T(b)) - T(rho(T(a),b)) + T(rho(T(b),a)) - T(K(a,b))",
         note="[Ta,Tb] = T(rho(Ta)b - rho(Tb)a + weight*[a,b]_V)")
register("o_operator_alternative", "a:V b:V", "M(T(a),T(b)) - T(l(T(a),b)) - T(r(T(b),a)) - T(K(a,b))",
         note="Ta.Tb = T(l(Ta)b + r(Tb)a + weight*a.b)")


# -- evaluation -----------------------------------------------------------------

@dataclass
class Frame:
    """Where an identity is evaluated: a space of dimension ``dim``, the basis
    indices each sort ranges over, bound slot tensors, and labels for reports."""

    dim: int
    params: tuple[str, ...]
    sorts: dict[str, list[int]]
    tensors: dict  # slot -> StructureTensor (binary) or SparseMap (unary)
    labels: list[str] = field(default_factory=list)
    window: tuple[int, int] | None = None  # coordinates shown in witness residuals

    @classmethod
    def for_algebra(cls, alg: Algebra, binding: Mapping[str, str]) -> Frame:
        tensors = {slot: alg.tensor(op) for slot, op in binding.items()}
        return cls(alg.dim, alg.params, {"A": list(range(alg.dim))}, tensors, list(alg.basis))


@dataclass
class Witness:
    indices: tuple  # 1-based per variable; polarized variables give (i, j)
    residuals: list  # per equation, a dense list of Scalars (None where that equation holds)
    at: str = ""

    def label(self, var_names: Sequence[str] = ()) -> str:
        if self.at:
            return self.at
        parts = []
        for name, idx in zip(var_names, self.indices):
            if isinstance(idx, tuple):
                parts.append(f"{name}=e{idx[0]}+e{idx[1]}")
            else:
                parts.append(f"{name}=e{idx}")
        return "(" + ", ".join(parts) + ")"


@dataclass
class CheckReport:
    identity: str
    passed: bool
    witnesses: list = field(default_factory=list)
    failing: int = 0
    tuples_checked: int = 0
    variables: tuple = ()
    note: str = ""

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "verdict": self.verdict,
            "tuples_checked": self.tuples_checked,
            "failing": self.failing,
            "note": self.note,
            "witnesses": [
                {"at": w.label(self.variables),
                 "indices": [list(i) if isinstance(i, tuple) else i for i in w.indices],
                 "residual": [[format_scalar(s) for s in r] if r is not None else None for r in w.residuals]}
                for w in self.witnesses
            ],
        }

    def render(self) -> str:
        head = f"{self.identity}: {self.verdict.upper()} ({self.tuples_checked} tuples"
        head += f", {self.failing} failing)" if not self.passed else ")"
        if self.note:
            head += f" [{self.note}]"
        lines = [head]
        for w in self.witnesses:
            res = "; ".join("[" + ", ".join(format_scalar(s) for s in r) + "]" for r in w.residuals if r is not None)
            lines.append(f"  witness {w.label(self.variables)}: residual {res}")
        return "\n".join(lines)


def merge_reports(name: str, reports: Sequence[CheckReport], max_witnesses: int | None = None) -> CheckReport:
    """Combine several reports into one verdict; witnesses keep their source name in the note."""
    passed = all(r.passed for r in reports)
    witnesses = [w for r in reports for w in r.witnesses]
    if max_witnesses is not None:
        witnesses = witnesses[:max_witnesses]
    failing_parts = [r.identity for r in reports if not r.passed]
    note = "failed: " + ", ".join(failing_parts) if failing_parts else ""
    variables = next((r.variables for r in reports if not r.passed), reports[0].variables if reports else ())
    return CheckReport(name, passed, witnesses, sum(r.failing for r in reports),
                       sum(r.tuples_checked for r in reports), variables, note)


class _Compiled:
    """Flattened trees with per-node variable positions, shared across equations."""

    def __init__(self, ident: Identity, tensors: Mapping[str, StructureTensor]):
        self.var_names = ident.var_names
        self.nodes: list[tuple] = []
        self.index: dict = {}
        self.equations = []
        for eq in ident.parsed():
            self.equations.append([(c, self._add(t)) for c, t in eq])
        self.tensors = tensors

    def _add(self, tree) -> int:
        if tree in self.index:
            return self.index[tree]
        if tree[0] == "var":
            node = ("var", self.var_names.index(tree[1]), None, None, (self.var_names.index(tree[1]),))
        else:
            left = self._add(tree[2])
            right = None if tree[3] is None else self._add(tree[3])
            pos = set(self.nodes[left][4]) | (set(self.nodes[right][4]) if right is not None else set())
            positions = tuple(sorted(pos))
            node = ("op", tree[1], left, right, positions)
        self.nodes.append(node)
        self.index[tree] = len(self.nodes) - 1
        return len(self.nodes) - 1


def _derived_tensor(expr: str, tensors: Mapping[str, StructureTensor], dim: int, params) -> StructureTensor:
    terms = parse_expression(expr, ("x", "y"))

    def ev(node, x, y):
        if node[0] == "var":
            return {x: Scalar.const(1, params)} if node[1] == "x" else {y: Scalar.const(1, params)}
        if node[3] is None:
            return tensors[node[1]].apply1(ev(node[2], x, y))
        return tensors[node[1]].apply(ev(node[2], x, y), ev(node[3], x, y))

    rows = {}
    for i in range(dim):
        for j in range(dim):
            acc: SparseVec = {}
            for c, t in terms:
                vadd_into(acc, ev(t, i, j), c)
            if acc:
                rows[(i, j)] = acc
    return StructureTensor(dim, params, rows)


def evaluate_identity(ident: Identity, frame: Frame, max_witnesses: int | None = 10,
                      stop_at_first: bool = False) -> CheckReport:
    """Evaluate every equation of *ident* at every basis tuple of *frame*."""
    tensors = dict(frame.tensors)
    missing = [s for s in ident.slots if s not in tensors]
    if missing:
        raise IdentityError(f"identity {ident.name!r} needs operation slots {missing} bound")
    for slot, expr in ident.derived:
        tensors[slot] = _derived_tensor(expr, tensors, frame.dim, frame.params)
    for s in ident.sorts:
        if s not in frame.sorts:
            raise IdentityError(f"identity {ident.name!r} needs a basis for sort {s!r}")
    comp = _Compiled(ident, tensors)
    one = Scalar.const(1, frame.params)

    # domain points: (report index, sparse vector)
    def name_of(i):
        return frame.labels[i] if frame.labels and i < len(frame.labels) else f"e{i + 1}"

    domains = []
    for v, sort in ident.variables:
        idx = frame.sorts[sort]
        if v in ident.polarized:
            pts = []
            for a, b in itertools.combinations_with_replacement(range(len(idx)), 2):
                if a == b:
                    vec, text = {idx[a]: one + one}, f"2*{name_of(idx[a])}"
                else:
                    vec, text = {idx[a]: one, idx[b]: one}, f"{name_of(idx[a])}+{name_of(idx[b])}"
                pts.append(((a + 1, b + 1), vec, f"{v}={text}"))
            domains.append(pts)
        else:
            domains.append([(k + 1, {i: one}, f"{v}={name_of(i)}") for k, i in enumerate(idx)])

    arity = ident.arity
    nodes = comp.nodes
    memo: dict = {}

    def value(nid, point):
        kind, slot, left, right, pos = nodes[nid]
        if kind == "var":
            return domains[slot][point[slot]][1]
        cache = len(pos) < arity
        if cache:
            key = (nid, tuple(point[p] for p in pos))
            hit = memo.get(key)
            if hit is not None:
                return hit
        if right is None:
            out = tensors[slot].apply1(value(left, point))
        else:
            out = tensors[slot].apply(value(left, point), value(right, point))
        if cache:
            memo[key] = out
        return out

    witnesses = []
    failing = 0
    checked = 0
    for point in itertools.product(*(range(len(d)) for d in domains)):
        checked += 1
        residuals = []
        bad = False
        for eq in comp.equations:
            acc: SparseVec = {}
            for c, nid in eq:
                vadd_into(acc, value(nid, point), c)
            if acc:
                bad = True
                residuals.append(acc)
            else:
                residuals.append(None)
        if bad:
            failing += 1
            if max_witnesses is None or len(witnesses) < max_witnesses:
                z = Scalar.const(0, frame.params)
                lo, hi = frame.window or (0, frame.dim)
                dense = [None if r is None else [r.get(k, z) for k in range(lo, hi)] for r in residuals]
                chosen = [domains[i][p] for i, p in enumerate(point)]
                at = "(" + ", ".join(c[2] for c in chosen) + ")"
                witnesses.append(Witness(tuple(c[0] for c in chosen), dense, at))
            if stop_at_first:
                break
    return CheckReport(ident.name, failing == 0, witnesses, failing, checked, ident.var_names, ident.note)


def check_identity(alg: Algebra, identity: str, binding: Mapping[str, str] | None = None,
                   max_witnesses: int | None = 10, stop_at_first: bool = False) -> CheckReport:
    """Check a registered identity on *alg* with slots bound to its operations.

    When *binding* is omitted, each slot is bound to the algebra's only
    operation (or to the operation with the same name as the slot).
    """
    ident = lookup(identity)
    binding = dict(binding or {})
    for slot in ident.slots:
        if slot not in binding:
            if slot in alg.ops:
                binding[slot] = slot
            elif len(alg.ops) == 1:
                binding[slot] = next(iter(alg.ops))
            else:
                raise IdentityError(f"slot {slot!r} of {identity!r} is unbound; algebra has {sorted(alg.ops)}")
    for slot, op in binding.items():
        if op not in alg.ops:
            raise AlgebraError(f"unknown operation {op!r}; algebra has {sorted(alg.ops)}")
    frame = Frame.for_algebra(alg, {s: binding[s] for s in ident.slots})
    return evaluate_identity(ident, frame, max_witnesses, stop_at_first)


def check_all(alg: Algebra, identities: Iterable[str], binding: Mapping[str, str] | None = None,
              max_witnesses: int | None = 10) -> list[CheckReport]:
    return [check_identity(alg, name, binding, max_witnesses) for name in expand_names(identities)]
