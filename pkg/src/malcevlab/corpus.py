"""Built-in algebras and operators, the JSON file format, and table diffs.

File format (UTF-8 JSON, 1-based indices, omitted entries are zero)::

    {"kind": "algebra", "id": ..., "dim": n, "params": [...], "basis": [...],
     "ops": {name: {"skew": bool, "entries": [[i, j, k, "expr"], ...]}}}
    {"kind": "map", "id": ..., "params": [...], "maps": {name: {"rows", "cols", "entries": [[i, j, "expr"]]}}}
    {"kind": "tensor", "id": ..., "params": [...], "dim": n, "tensors": {name: {"skew", "entries": [[i, j, "expr"]]}}}
    {"kind": "malcev_rep", "base": <ref or inline>, "module_dim": m, "rho": [[[i, j, "expr"], ...] per base element],
     "module_bracket": optional op block}
    {"kind": "alt_bimodule", "base": ..., "module_dim": m, "left": [...], "right": [...], "module_mul": optional}
    {"kind": "oop", "rep": <ref or inline>, "T": map block, "weight": "expr"}
    {"kind": "post_malcev" | "post_alternative", ...algebra fields..., "fixed": {param: "rational"}}

A reference is ``"corpus:ID"`` or a path relative to the referring file.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra import SKEW, SYMMETRIC, Algebra, AlgebraError, StructureTensor, commutator_algebra
from .constructions import CertificationError, PostAlternativeAlgebra, PostMalcevAlgebra
from .identities import CheckReport, check_identity
from .operators import LinearMap, OOperator, TensorElement, check_oop
from .reps import AltBimodule, MalcevRep, adjoint_rep, check_a_module_malcev, regular_bimodule
from .scalar import ParseError, Scalar, ScalarError, as_scalar, format_scalar, parse, unify_params


class LoadError(ValueError):
    pass


# -- vectors as text ------------------------------------------------------------------

def format_vector(vec: dict, basis) -> str:
    """Sparse vector as ``2*alpha*e2 - e3``; compound coefficients are parenthesized."""
    if not vec:
        return "0"
    parts = []
    for k in sorted(vec):
        c = vec[k]
        text = format_scalar(c)
        name = basis[k]
        if text == "1":
            term = name
        elif text == "-1":
            term = "-" + name
        elif len(c.terms) == 1:
            term = f"{text}*{name}"
        else:
            term = f"({text})*{name}"
        parts.append(term)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def parse_vector(text: str, params, basis) -> dict:
    """Inverse of format_vector: the basis labels act as formal symbols of degree one."""
    params = tuple(params)
    clash = set(params) & set(basis)
    if clash:
        raise LoadError(f"basis labels clash with parameters: {sorted(clash)}")
    # identifiers may not contain digits, so labels like e1 are renamed first
    symbols = [_letters_name(k) for k in range(len(basis))]
    for k in sorted(range(len(basis)), key=lambda k: -len(basis[k])):
        text = re.sub(r"(?<![A-Za-z_0-9])" + re.escape(basis[k]) + r"(?![A-Za-z_0-9])", symbols[k], text)
    full = params + tuple(symbols)
    poly = parse(text, full)
    out: dict = {}
    np_ = len(params)
    for exps, coeff in poly.terms.items():
        lin = exps[np_:]
        if sum(lin) != 1:
            raise LoadError(f"{text!r} is not linear in the basis labels")
        k = lin.index(1)
        term = Scalar(params, {exps[:np_]: coeff})
        out[k] = out[k] + term if k in out else term
    return {k: v for k, v in out.items() if v}


def _letters_name(k: int) -> str:
    out = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        out = chr(ord("a") + r) + out
    return "__basis_" + out


# -- serialization -------------------------------------------------------------------

def _entries3(t: StructureTensor):
    return [[i + 1, j + 1, k + 1, format_scalar(v)] for i, j, k, v in t.entries()]


def _op_block(t: StructureTensor, skew: bool):
    return {"skew": skew, "entries": _entries3(t)}


def _map_block(M: list):
    rows = len(M)
    cols = len(M[0]) if M else 0
    return {"rows": rows, "cols": cols,
            "entries": [[i + 1, j + 1, format_scalar(M[i][j])] for i in range(rows) for j in range(cols) if M[i][j]]}


def _mats_block(mats):
    return [[[i + 1, j + 1, format_scalar(v)] for i, row in enumerate(M) for j, v in enumerate(row) if v]
            for M in mats]


def algebra_to_dict(alg: Algebra, kind: str = "algebra") -> dict:
    d = {"kind": kind, "id": alg.name, "dim": alg.dim, "params": list(alg.params), "basis": list(alg.basis),
         "ops": {op: _op_block(t, alg.symmetry.get(op) == SKEW) for op, t in alg.ops.items()}}
    sym = [op for op, k in alg.symmetry.items() if k == SYMMETRIC]
    if sym:
        d["symmetric"] = sym
    return d


def to_dict(obj, id: str | None = None) -> dict:
    """Canonical JSON-ready form of any supported object."""
    if isinstance(obj, Algebra):
        d = algebra_to_dict(obj)
    elif isinstance(obj, PostMalcevAlgebra):
        d = algebra_to_dict(obj.algebra, "post_malcev")
        d["fixed"] = {k: str(Fraction(v)) for k, v in obj.fixed.items()}
    elif isinstance(obj, PostAlternativeAlgebra):
        d = algebra_to_dict(obj.algebra, "post_alternative")
        d["fixed"] = {k: str(Fraction(v)) for k, v in obj.fixed.items()}
    elif isinstance(obj, LinearMap):
        d = {"kind": "map", "id": "", "params": list(obj.params), "maps": {"map": _map_block(obj.matrix)}}
    elif isinstance(obj, TensorElement):
        params = unify_params(*dict.fromkeys(v.params for row in obj.matrix for v in row))
        d = {"kind": "tensor", "id": "", "params": list(params), "dim": obj.dim,
             "tensors": {"r": {"skew": obj.skew, "entries": _map_block(obj.matrix)["entries"]}}}
    elif isinstance(obj, MalcevRep):
        d = {"kind": "malcev_rep", "id": "", "params": list(obj.params), "base": to_dict(obj.base),
             "bracket": obj.bracket, "module_dim": obj.module_dim, "rho": _mats_block(obj.rho)}
        if obj.module_bracket is not None:
            d["module_bracket"] = _op_block(obj.module_bracket, True)
    elif isinstance(obj, AltBimodule):
        d = {"kind": "alt_bimodule", "id": "", "params": list(obj.params), "base": to_dict(obj.base),
             "mul": obj.mul, "module_dim": obj.module_dim, "left": _mats_block(obj.left),
             "right": _mats_block(obj.right)}
        if obj.module_mul is not None:
            d["module_mul"] = _op_block(obj.module_mul, False)
    elif isinstance(obj, OOperator):
        d = {"kind": "oop", "id": "", "params": list(obj.params), "rep": to_dict(obj.rep),
             "T": _map_block(obj.T.matrix), "weight": format_scalar(obj.weight)}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    if id is not None:
        d["id"] = id
    return d


def dumps(obj, id: str | None = None) -> str:
    return json.dumps(to_dict(obj, id), indent=1, ensure_ascii=False) + "\n"


def save(obj, path: str, id: str | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, id))


# -- deserialization -----------------------------------------------------------------

class _Reader:
    def __init__(self, base_dir: str | None):
        self.base_dir = base_dir

    def need(self, d: dict, key: str, where: str):
        if key not in d:
            raise LoadError(f"{where}: missing field {key!r}")
        return d[key]

    def scalar(self, text, params, where):
        if not isinstance(text, (str, int)):
            raise LoadError(f"{where}: scalar must be a string expression, got {text!r}")
        try:
            return parse(str(text), params)
        except ScalarError as exc:
            raise LoadError(f"{where}: {exc}") from None

    def index(self, v, limit, where):
        if not isinstance(v, int) or not 1 <= v <= limit:
            raise LoadError(f"{where}: index {v!r} out of range 1..{limit}")
        return v - 1

    def op(self, block, dim, params, where) -> tuple[StructureTensor, bool]:
        entries = self.need(block, "entries", where)
        rows: dict = {}
        for n, e in enumerate(entries):
            w = f"{where}.entries[{n}]"
            if not isinstance(e, list) or len(e) != 4:
                raise LoadError(f"{w}: expected [i, j, k, expr]")
            i, j, k = (self.index(x, dim, w) for x in e[:3])
            v = self.scalar(e[3], params, w)
            cell = rows.setdefault((i, j), {})
            cell[k] = cell[k] + v if k in cell else v
        return StructureTensor(dim, params, rows), bool(block.get("skew", False))

    def matrix(self, entries, rows, cols, params, where):
        z = Scalar.const(0, params)
        M = [[z] * cols for _ in range(rows)]
        for n, e in enumerate(entries):
            w = f"{where}[{n}]"
            if not isinstance(e, list) or len(e) != 3:
                raise LoadError(f"{w}: expected [i, j, expr]")
            i, j = self.index(e[0], rows, w), self.index(e[1], cols, w)
            M[i][j] = M[i][j] + self.scalar(e[2], params, w)
        return M

    def map_block(self, block, params, where, rows=None, cols=None):
        r = self.need(block, "rows", where)
        c = self.need(block, "cols", where)
        if (rows is not None and r != rows) or (cols is not None and c != cols):
            raise LoadError(f"{where}: expected a {rows}x{cols} map, got {r}x{c}")
        return self.matrix(self.need(block, "entries", where), r, c, params, where + ".entries")

    def ref(self, value, where):
        if isinstance(value, dict):
            return self.obj(value, where)
        if isinstance(value, str):
            return load(value, self.base_dir)
        raise LoadError(f"{where}: expected a reference or inline object")

    def params(self, d, where, inherit=()):
        ps = d.get("params", [])
        if not isinstance(ps, list) or not all(isinstance(p, str) and p.isascii() for p in ps):
            raise LoadError(f"{where}.params: expected a list of ASCII names")
        return unify_params(inherit, ps)

    def algebra(self, d, where):
        dim = self.need(d, "dim", where)
        if not isinstance(dim, int) or dim < 0:
            raise LoadError(f"{where}.dim: expected a nonnegative integer")
        params = self.params(d, where)
        ops, sym = {}, {}
        for name, block in self.need(d, "ops", where).items():
            t, skew = self.op(block, dim, params, f"{where}.ops.{name}")
            ops[name] = t
            sym[name] = SKEW if skew else (SYMMETRIC if name in d.get("symmetric", []) else None)
        basis = d.get("basis") or None
        try:
            return Algebra(dim, ops, sym, basis, params, d.get("id", ""))
        except AlgebraError as exc:
            raise LoadError(f"{where}: {exc}") from None

    def obj(self, d, where="$"):
        if not isinstance(d, dict):
            raise LoadError(f"{where}: expected an object")
        kind = self.need(d, "kind", where)
        if kind == "algebra":
            return self.algebra(d, where)
        if kind in ("post_malcev", "post_alternative"):
            alg = self.algebra(d, where)
            fixed = {k: Fraction(v) for k, v in d.get("fixed", {}).items()}
            cls = PostMalcevAlgebra if kind == "post_malcev" else PostAlternativeAlgebra
            try:
                return cls.certify(alg, fixed or None)
            except CertificationError as exc:
                raise LoadError(f"{where}: {exc}") from None
        if kind == "map":
            params = self.params(d, where)
            maps = self.need(d, "maps", where)
            if len(maps) != 1:
                raise LoadError(f"{where}.maps: expected exactly one map")
            (name, block), = maps.items()
            return LinearMap(self.map_block(block, params, f"{where}.maps.{name}"))
        if kind == "tensor":
            params = self.params(d, where)
            dim = self.need(d, "dim", where)
            tensors = self.need(d, "tensors", where)
            if len(tensors) != 1:
                raise LoadError(f"{where}.tensors: expected exactly one tensor")
            (name, block), = tensors.items()
            w = f"{where}.tensors.{name}"
            M = self.matrix(self.need(block, "entries", w), dim, dim, params, w + ".entries")
            try:
                return TensorElement(M, bool(block.get("skew", False)))
            except AlgebraError as exc:
                raise LoadError(f"{w}: {exc}") from None
        if kind == "malcev_rep":
            base = self.ref(self.need(d, "base", where), where + ".base")
            params = self.params(d, where, base.params)
            m = self.need(d, "module_dim", where)
            rho = self._mats(self.need(d, "rho", where), base.dim, m, params, where + ".rho")
            mb = None
            if d.get("module_bracket") is not None:
                mb, _ = self.op(d["module_bracket"], m, params, where + ".module_bracket")
            try:
                return MalcevRep(base, m, rho, mb, d.get("bracket", "bracket"))
            except AlgebraError as exc:
                raise LoadError(f"{where}: {exc}") from None
        if kind == "alt_bimodule":
            base = self.ref(self.need(d, "base", where), where + ".base")
            params = self.params(d, where, base.params)
            m = self.need(d, "module_dim", where)
            left = self._mats(self.need(d, "left", where), base.dim, m, params, where + ".left")
            right = self._mats(self.need(d, "right", where), base.dim, m, params, where + ".right")
            mm = None
            if d.get("module_mul") is not None:
                mm, _ = self.op(d["module_mul"], m, params, where + ".module_mul")
            try:
                return AltBimodule(base, m, left, right, mm, d.get("mul", "mul"))
            except AlgebraError as exc:
                raise LoadError(f"{where}: {exc}") from None
        if kind == "oop":
            rep = self.ref(self.need(d, "rep", where), where + ".rep")
            params = self.params(d, where, rep.params)
            T = self.map_block(self.need(d, "T", where), params, where + ".T", rep.base.dim, rep.module_dim)
            weight = self.scalar(d.get("weight", "0"), params, where + ".weight")
            return OOperator(rep, LinearMap(T), weight)
        raise LoadError(f"{where}.kind: unknown kind {kind!r}")

    def _mats(self, blocks, count, m, params, where):
        if not isinstance(blocks, list) or len(blocks) != count:
            raise LoadError(f"{where}: expected {count} matrices")
        return [self.matrix(b, m, m, params, f"{where}[{n}]") for n, b in enumerate(blocks)]


def loads(text: str, base_dir: str | None = None):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return _Reader(base_dir).obj(data)


def load(ref: str, base_dir: str | None = None):
    """Load ``corpus:ID`` or a JSON file."""
    if ref.startswith("corpus:"):
        return get(ref[len("corpus:"):])
    path = ref if base_dir is None or os.path.isabs(ref) else os.path.join(base_dir, ref)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, os.path.dirname(os.path.abspath(path)))


# -- table diffs ----------------------------------------------------------------------

def diff_tables(computed: StructureTensor, reference: StructureTensor) -> list[tuple]:
    """Cells (i, j) (1-based) where the two tables differ, with both products."""
    if computed.dim != reference.dim:
        raise AlgebraError(f"dimension mismatch: {computed.dim} vs {reference.dim}")
    extra = set(reference.params) - set(computed.params)
    if extra:
        raise AlgebraError(f"reference uses parameters absent from the computed table: {sorted(extra)}")
    params = unify_params(computed.params, reference.params)
    a, b = computed.with_params(params), reference.with_params(params)
    out = []
    for i in range(a.dim):
        for j in range(a.dim):
            x, y = a.product(i, j), b.product(i, j)
            if set(x) != set(y) or any(x[k] != y[k] for k in x):
                out.append((i + 1, j + 1, dict(x), dict(y)))
    return out


def render_diff(rows, basis) -> str:
    if not rows:
        return "tables agree"
    lines = [f"{len(rows)} differing cells"]
    for i, j, x, y in rows:
        lines.append(f"  ({basis[i - 1]},{basis[j - 1]}): computed {format_vector(x, basis)}; "
                     f"reference {format_vector(y, basis)}")
    return "\n".join(lines)


# -- built-in entries -----------------------------------------------------------------

def _skew_algebra(dim, cells, name, basis=None, params=()):
    """Bracket from upper-triangle cells (i, j, k, value), 1-based, extended by skew symmetry."""
    entries = []
    for i, j, k, v in cells:
        entries += [(i, j, k, v), (j, i, k, "-(" + v + ")" if isinstance(v, str) else -v)]
    t = StructureTensor.from_entries(dim, entries, params, one_based=True)
    return Algebra(dim, {"bracket": t}, {"bracket": SKEW}, basis, params, name)


MALCEV7_CELLS = [
    (1, 2, 2, 2), (1, 3, 3, -2), (1, 4, 4, 2), (1, 5, 5, -2), (1, 6, 6, 2), (1, 7, 7, -2),
    (2, 3, 1, 1), (2, 4, 7, 2), (2, 6, 5, -2),
    (3, 5, 6, -2), (3, 7, 4, 2),
    (4, 5, 1, 1), (4, 6, 3, 2),
    (5, 7, 2, -2),
    (6, 7, 1, 1),
]

RB7_PARAMS = ("alpha", "beta", "gamma", "delta", "mu")
RB7_IMAGES = {
    1: "1/2*e1 + 2*alpha*e2 + 2*beta*e5 + 2*gamma*e6",
    2: "0",
    3: "e3 - alpha*e1 + delta*e5 - 2*beta*e6",
    4: "e4 - beta*e1 - delta*e2 + mu*e6",
    5: "0",
    6: "0",
    7: "e7 - gamma*e1 + 2*beta*e2 - mu*e5",
}

# The post-Malcev tables printed with the 7-dimensional example, transcribed cell by cell.
PRINTED_CURLY = [
    ["0", "2*lam*e2", "-2*lam*e3", "2*lam*e4", "-2*lam*e5", "2*lam*e6", "-2*lam*e7"],
    ["-2*lam*e2", "0", "lam*e1", "2*lam*e7", "0", "-2*lam*e5", "0"],
    ["2*lam*e3", "-lam*e1", "0", "0", "-2*lam*e6", "0", "2*lam*e4"],
    ["-2*lam*e4", "-2*lam*e7", "0", "0", "lam*e1", "2*lam*e3", "0"],
    ["2*lam*e5", "0", "2*lam*e6", "-lam*e1", "0", "0", "-2*lam*e2"],
    ["-2*lam*e6", "2*lam*e5", "0", "-2*lam*e3", "0", "0", "lam*e1"],
    ["2*lam*e7", "0", "-2*lam*e4", "0", "2*lam*e2", "-lam*e1", "0"],
]
PRINTED_RHD = [
    ["4*beta*e5 - 4*alpha*e2 - 4*gamma*e6", "e2 + 4*gamma*e5", "2*alpha*e1 - e3 + 4*beta*e6",
     "e4 + 4*alpha*e7 - 2*beta*e1 - 4*gamma*e3", "-e5", "e6 - 4*alpha*e5", "2*gamma*e1 - e7 - 4*beta*e2"],
    ["0"] * 7,
    ["2*e3 + 2*delta*e5 + 4*beta*e6", "-e1 - 2*alpha*e2 - 4*beta*e5", "2*alpha*e3 + 2*delta*e6",
     "4*beta*e3 - 2*alpha*e4 - delta*e1", "2*alpha*e5 - 2*e6", "-2*alpha*e6",
     "2*e4 + 2*alpha*e7 - 2*delta*e2 - 2*beta*e1"],
    ["2*delta*e2 - 2*e4 - 2*mu*e6", "2*mu*e5 - 2*e7 - 2*beta*e2", "2*beta*e3 - delta*e1",
     "-2*beta*e4 - 2*delta*e7 - 2*mu*e3", "e1 + 2*beta*e5", "2*e3 + 2*delta*e5 - 2*beta*e6", "2*beta*e7 + mu*e1"],
    ["0"] * 7,
    ["0"] * 7,
    ["2*e7 - 4*beta*e2 - 2*mu*e5", "-2*gamma*e2", "2*beta*e1 + 2*gamma*e3 - 2*e4 - 2*mu*e6",
     "mu*e1 - 2*gamma*e4 + 4*beta*e7", "2*e2 + 2*gamma*e5", "-e1 - 2*gamma*e6 - 4*beta*e5",
     "2*gamma*e7 + 2*mu*e2"],
]


def _table(cells, params, basis) -> StructureTensor:
    n = len(cells)
    rows = {}
    for i, row in enumerate(cells):
        for j, text in enumerate(row):
            v = parse_vector(text, params, basis)
            if v:
                rows[(i, j)] = v
    return StructureTensor(n, params, rows)


def malcev7() -> Algebra:
    return _skew_algebra(7, MALCEV7_CELLS, "malcev7")


def malcev7_corrupt() -> Algebra:
    cells = [(i, j, k, -v) if (i, j) == (2, 3) else (i, j, k, v) for i, j, k, v in MALCEV7_CELLS]
    return _skew_algebra(7, cells, "malcev7_corrupt")


def rb7_map() -> LinearMap:
    basis = [f"e{i}" for i in range(1, 8)]
    images = [parse_vector(RB7_IMAGES[j], RB7_PARAMS, basis) for j in range(1, 8)]
    return LinearMap.from_images(images, 7, RB7_PARAMS)


def rb7_param() -> OOperator:
    return OOperator(adjoint_rep(malcev7()), rb7_map(), -1)


def printed_curly() -> Algebra:
    basis = [f"e{i}" for i in range(1, 8)]
    t = _table(PRINTED_CURLY, ("lam",), basis)
    return Algebra(7, {"bracket": t}, {"bracket": SKEW}, basis, ("lam",), "printed_curly")


def printed_rhd() -> Algebra:
    basis = [f"e{i}" for i in range(1, 8)]
    t = _table(PRINTED_RHD, RB7_PARAMS, basis)
    return Algebra(7, {"rhd": t}, basis=basis, params=RB7_PARAMS, name="printed_rhd")


def sl2() -> Algebra:
    # e, h, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h
    return _skew_algebra(3, [(2, 1, 1, 2), (2, 3, 3, -2), (1, 3, 2, 1)], "sl2", ["e", "h", "f"])


def so3() -> Algebra:
    return _skew_algebra(3, [(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)], "so3")


def heis3() -> Algebra:
    return _skew_algebra(3, [(1, 2, 3, 1)], "heis3")


def aff2() -> Algebra:
    return _skew_algebra(2, [(1, 2, 2, 1)], "aff2")


def abelian(n: int = 3) -> Algebra:
    return Algebra(n, {"bracket": StructureTensor(n)}, {"bracket": SKEW}, name=f"abelian{n}")


def mat2() -> Algebra:
    """2x2 matrices in the basis E11, E12, E21, E22 (E_ab E_cd = [b == c] E_ad)."""
    idx = [(0, 0), (0, 1), (1, 0), (1, 1)]
    entries = []
    for p, (a, b) in enumerate(idx):
        for q, (c, d) in enumerate(idx):
            if b == c:
                entries.append((p, q, idx.index((a, d)), 1))
    t = StructureTensor.from_entries(4, entries)
    return Algebra(4, {"mul": t}, basis=["E11", "E12", "E21", "E22"], name="mat2")


def gl2() -> Algebra:
    return commutator_algebra(mat2(), "mul", "gl2")


def nonalt3() -> Algebra:
    """A fixed 3-dimensional algebra that is not alternative."""
    t = StructureTensor.from_entries(3, [(0, 0, 1, 1), (0, 1, 2, 1), (1, 0, 0, 2), (2, 2, 0, -1), (1, 2, 1, 3)])
    return Algebra(3, {"mul": t}, name="nonalt3")


def cayley_dickson_mul(x: tuple, y: tuple) -> tuple:
    """(a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)) on tuples of length 2^k."""
    if len(x) == 1:
        return (x[0] * y[0],)
    h = len(x) // 2
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    conj = lambda v: (v[0],) + tuple(-t for t in v[1:])
    sub = lambda u, v: tuple(p - q for p, q in zip(u, v))
    add = lambda u, v: tuple(p + q for p, q in zip(u, v))
    return sub(cayley_dickson_mul(a, c), cayley_dickson_mul(conj(d), b)) + \
        add(cayley_dickson_mul(d, a), cayley_dickson_mul(b, conj(c)))


def emit_octonions() -> Algebra:
    """Structure constants of the octonions by three doublings of Q; basis e0 (unit) .. e7."""
    n = 8
    unit = lambda i: tuple(Fraction(int(k == i)) for k in range(n))
    entries = []
    for i in range(n):
        for j in range(n):
            prod = cayley_dickson_mul(unit(i), unit(j))
            entries += [(i, j, k, c) for k, c in enumerate(prod) if c]
    t = StructureTensor.from_entries(n, entries)
    return Algebra(n, {"mul": t}, basis=[f"e{i}" for i in range(n)], name="octonions")


def direct_sum_mul(alg: Algebra, op: str = "mul", name: str = "") -> Algebra:
    """A + A with the componentwise product."""
    from .algebra import direct_sum

    out = direct_sum(alg, alg, op, op, op)
    out.basis = [f"{b}'" if k >= alg.dim else b for k, b in enumerate(list(alg.basis) * 2)]
    out.name = name or f"{alg.name}+{alg.name}"
    return out


def square_zero_extension(alg: Algebra, op: str = "mul") -> Algebra:
    """A + A with (x,a)(y,b) = (xy, xb + ay)."""
    n = alg.dim
    t = alg.tensor(op)
    rows: dict = {}
    for (i, j), out in t.rows.items():
        rows[(i, j)] = dict(out)
        rows[(i, n + j)] = {k + n: v for k, v in out.items()}
        rows[(n + i, j)] = {k + n: v for k, v in out.items()}
    basis = list(alg.basis) + [f"{b}'" for b in alg.basis]
    return Algebra(2 * n, {"mul": StructureTensor(2 * n, alg.params, rows)}, basis=basis, params=alg.params,
                   name=f"{alg.name}_sqzero")


def oct_neg_id() -> OOperator:
    """R = -id on the octonions, weight 1."""
    o = emit_octonions()
    return OOperator(regular_bimodule(o), LinearMap.identity(8).scaled(-1), 1)


def mat2_upper() -> OOperator:
    """R = -(projection onto upper triangular along strictly lower), weight 1."""
    a = mat2()
    z = [[0] * 4 for _ in range(4)]
    for k in (0, 1, 3):
        z[k][k] = -1
    return OOperator(regular_bimodule(a), LinearMap.from_rows(z), 1)


def oct_diagonal(weight: int = 3) -> OOperator:
    """On O + O, R(x, y) = -weight (x, x): a weighted projection onto the diagonal along 0 + O."""
    o = direct_sum_mul(emit_octonions(), name="octonions2")
    n = 8
    M = [[0] * 16 for _ in range(16)]
    for i in range(n):
        M[i][i] = -weight
        M[n + i][i] = -weight
    return OOperator(regular_bimodule(o), LinearMap.from_rows(M), weight)


def mat2_square_zero() -> OOperator:
    """R(x, a) = (0, x) on the square-zero extension of 2x2 matrices, weight 0."""
    a = square_zero_extension(mat2())
    M = [[0] * 8 for _ in range(8)]
    for i in range(4):
        M[4 + i][i] = 1
    return OOperator(regular_bimodule(a), LinearMap.from_rows(M), 0)


def sl2_triangular() -> OOperator:
    """T(f) = e on sl2 with the adjoint module and no module bracket, weight 0."""
    a = sl2()
    return OOperator(adjoint_rep(a, with_bracket=False), LinearMap.from_rows([[0, 0, 1], [0, 0, 0], [0, 0, 0]]), 0)


@dataclass
class CorpusEntry:
    id: str
    kind: str
    build: Callable
    provenance: str
    checks: list = field(default_factory=list)  # (label, fn(obj) -> CheckReport, expect_pass)
    reference: bool = False

    @property
    def expect_fail(self) -> bool:
        return any(not expect for _, _, expect in self.checks)


def _ident(name, **bind):
    return lambda a: check_identity(a, name, bind or None, max_witnesses=3)


CORPUS: dict[str, CorpusEntry] = {}


def _entry(id, kind, build, provenance, checks=(), reference=False):
    CORPUS[id] = CorpusEntry(id, kind, build, provenance, list(checks), reference)


_entry("malcev7", "algebra", malcev7, "7-dimensional simple Malcev algebra of the worked example",
       [("sagle", _ident("sagle"), True), ("malcev", _ident("malcev"), True), ("jacobi", _ident("jacobi"), False)])
_entry("malcev7_corrupt", "algebra", malcev7_corrupt, "malcev7 with [e2,e3] flipped to -e1 (expected to fail)",
       [("sagle", _ident("sagle"), False), ("malcev", _ident("malcev"), False)])
_entry("malcev7_adjoint", "rep", lambda: adjoint_rep(malcev7()), "adjoint module of malcev7 with V = A",
       [("a_module_malcev", lambda r: check_a_module_malcev(r, 3), True)])
_entry("rb7_param", "operator", rb7_param,
       "parametric (-1)-weighted Rota-Baxter operator of the worked example, as an O-operator on the adjoint module",
       [("rota_baxter", lambda o: check_oop(o, 3), True)])
_entry("sl2", "algebra", sl2, "sl2 in the basis e, h, f", [("jacobi", _ident("jacobi"), True)])
_entry("so3", "algebra", so3, "so3 over Q, [e1,e2] = e3 cyclically", [("jacobi", _ident("jacobi"), True)])
_entry("heis3", "algebra", heis3, "3-dimensional Heisenberg Lie algebra", [("jacobi", _ident("jacobi"), True)])
_entry("aff2", "algebra", aff2, "2-dimensional non-abelian Lie algebra [e1,e2] = e2",
       [("jacobi", _ident("jacobi"), True)])
_entry("abelian3", "algebra", lambda: abelian(3), "3-dimensional abelian Lie algebra",
       [("jacobi", _ident("jacobi"), True)])
_entry("mat2", "algebra", mat2, "2x2 matrix algebra", [("associativity", _ident("associativity"), True)])
_entry("gl2", "algebra", gl2, "commutator algebra of mat2", [("jacobi", _ident("jacobi"), True)])
_entry("octonions", "algebra", emit_octonions, "octonions by Cayley-Dickson doubling",
       [("alternative_left", _ident("alternative_left"), True),
        ("alternative_right", _ident("alternative_right"), True),
        ("associativity", _ident("associativity"), False)])
_entry("nonalt3", "algebra", nonalt3, "a 3-dimensional algebra that is not alternative (expected to fail)",
       [("alternative_weak", _ident("alternative_weak"), False)])
_entry("oct_neg_id", "operator", oct_neg_id, "R = -id on the octonions, weight 1",
       [("rota_baxter", lambda o: check_oop(o, 3), True)])
_entry("mat2_upper", "operator", mat2_upper, "minus the upper-triangular projection on mat2, weight 1",
       [("rota_baxter", lambda o: check_oop(o, 3), True)])
_entry("oct_diagonal", "operator", oct_diagonal, "R(x,y) = -3(x,x) on octonions + octonions, weight 3",
       [("rota_baxter", lambda o: check_oop(o, 3), True)])
_entry("mat2_square_zero", "operator", mat2_square_zero,
       "R(x,a) = (0,x) on the square-zero extension of mat2, weight 0",
       [("rota_baxter", lambda o: check_oop(o, 3), True)])
_entry("sl2_triangular", "operator", sl2_triangular, "T(f) = e on sl2 over the adjoint module, weight 0",
       [("o_operator", lambda o: check_oop(o, 3), True)])
_entry("printed_curly", "reference", printed_curly,
       "post-Malcev bracket table printed with the worked example, transcribed verbatim", reference=True)
_entry("printed_rhd", "reference", printed_rhd,
       "post-Malcev triangle table printed with the worked example, transcribed verbatim", reference=True)

POST_ALTERNATIVE_INSTANCES = ("oct_neg_id", "mat2_upper", "oct_diagonal", "mat2_square_zero")


def certify_entry(entry_id: str, obj=None) -> list[tuple[str, CheckReport, bool]]:
    entry = CORPUS[entry_id]
    obj = obj if obj is not None else entry.build()
    return [(label, fn(obj), expect) for label, fn, expect in entry.checks]


def get(entry_id: str):
    """Build a corpus entry and re-run its declared certification."""
    if entry_id not in CORPUS:
        raise LoadError(f"unknown corpus entry {entry_id!r}; known: {', '.join(sorted(CORPUS))}")
    obj = CORPUS[entry_id].build()
    for label, rep, expect in certify_entry(entry_id, obj):
        if rep.passed != expect:
            raise LoadError(f"corpus entry {entry_id!r}: declared {label} "
                            f"{'pass' if expect else 'fail'} but got {rep.verdict}")
    return obj
