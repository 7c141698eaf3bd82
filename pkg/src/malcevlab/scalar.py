"""Exact scalars: sparse multivariate polynomials over the rationals.

A :class:`Scalar` lives in a *context*, an ordered tuple of parameter names.
Its terms map dense exponent vectors (one entry per parameter) to nonzero
:class:`fractions.Fraction` coefficients.  A Scalar with an empty context, or
with only the all-zero exponent, is just a rational number.

Expression grammar accepted by :func:`parse`::

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := base ('^' uint)?
    base     := rational | identifier | '(' expr ')' | '-' base
    rational := int ('/' uint)?

``int '/' uint`` with no intervening operator is read as one rational literal,
so ``2/3^2`` is ``(2/3)^2``.  The ``'/'`` between general factors is an
extension; it only divides by nonzero constants or by exact polynomial
divisors.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction
Number = Union[int, Fraction]


class ScalarError(ValueError):
    pass


class ParseError(ScalarError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


def _grlex_key(exps: tuple[int, ...]):
    return (-sum(exps), tuple(-e for e in exps))


class Scalar:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("params", "terms")

    def __init__(self, params: Iterable[str] = (), terms: Mapping[tuple, Number] | None = None):
        params = tuple(params)
        clean = {}
        if terms:
            width = len(params)
            for exps, c in terms.items():
                if len(exps) != width:
                    raise ScalarError(f"exponent vector {exps} does not match context {params}")
                if c:
                    clean[tuple(exps)] = Fraction(c)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _raw(cls, params: tuple[str, ...], terms: dict) -> Scalar:
        s = object.__new__(cls)
        object.__setattr__(s, "params", params)
        object.__setattr__(s, "terms", terms)
        return s

    @classmethod
    def const(cls, value: Number, params: Iterable[str] = ()) -> Scalar:
        params = tuple(params)
        value = Fraction(value)
        return cls._raw(params, {(0,) * len(params): value} if value else {})

    @classmethod
    def var(cls, name: str, params: Iterable[str]) -> Scalar:
        params = tuple(params)
        if name not in params:
            raise ScalarError(f"unknown identifier {name!r}; context is {list(params)}")
        exps = tuple(1 if p == name else 0 for p in params)
        return cls._raw(params, {exps: Fraction(1)})

    # -- context handling -------------------------------------------------

    def with_params(self, params: Iterable[str]) -> Scalar:
        """Re-express this scalar in a context that contains every parameter it uses."""
        params = tuple(params)
        if params == self.params:
            return self
        pos = {p: i for i, p in enumerate(params)}
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(params)
            for p, e in zip(self.params, exps):
                if e:
                    if p not in pos:
                        raise ScalarError(f"parameter {p!r} is missing from context {list(params)}")
                    new[pos[p]] = e
            terms[tuple(new)] = c
        return Scalar._raw(params, terms)

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if other.params == self.params:
                return other
            return other.with_params(unify_params(self.params, other.params))
        if isinstance(other, (int, Fraction)):
            return Scalar.const(other, self.params)
        return NotImplemented

    def _unified(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented, NotImplemented
        if other.params != self.params:
            return self.with_params(other.params), other
        return self, other

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ScalarError(f"{self} is not a constant")
        return next(iter(self.terms.values()), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def used_params(self) -> tuple[str, ...]:
        used = set()
        for exps in self.terms:
            used.update(p for p, e in zip(self.params, exps) if e)
        return tuple(p for p in self.params if p in used)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> Scalar:
        return Scalar._raw(self.params, {e: -c for e, c in self.terms.items()})

    def __pos__(self) -> Scalar:
        return self

    def __add__(self, other):
        a, b = self._unified(other)
        if a is NotImplemented:
            return NotImplemented
        if not b.terms:
            return a
        if not a.terms:
            return b
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s += c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Scalar._raw(a.params, terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Scalar._raw(self.params, {})
            return Scalar._raw(self.params, {e: c * other for e, c in self.terms.items()})
        a, b = self._unified(other)
        if a is NotImplemented:
            return NotImplemented
        if not a.terms or not b.terms:
            return Scalar._raw(a.params, {})
        zero = (0,) * len(a.params)
        if len(b.terms) == 1 and zero in b.terms:
            return a * b.terms[zero]
        if len(a.terms) == 1 and zero in a.terms:
            return b * a.terms[zero]
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return Scalar._raw(a.params, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Scalar:
        if not isinstance(k, int) or k < 0:
            raise ScalarError("only nonnegative integer powers are supported")
        result = Scalar.const(1, self.params)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        a, b = self._unified(other)
        if a is NotImplemented:
            return NotImplemented
        if not b.terms:
            raise ZeroDivisionError("division by the zero scalar")
        if b.is_constant():
            inv = 1 / b.constant_value()
            return a * inv
        quotient, remainder = _divmod_poly(a, b)
        if remainder.terms:
            raise ScalarError(f"{b} does not divide {a}")
        return quotient

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    # -- comparison, hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            zero = (0,) * len(self.params)
            return len(self.terms) == 1 and self.terms.get(zero) == other
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.params == other.params:
            return self.terms == other.terms
        return self._named_terms() == other._named_terms()

    def _named_terms(self):
        return frozenset(
            (tuple((p, e) for p, e in zip(self.params, exps) if e), c) for exps, c in self.terms.items()
        )

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(self._named_terms())

    # -- evaluation -------------------------------------------------------

    def evaluate(self, assignment: Mapping[str, Number]) -> Fraction:
        """Substitute a rational for every parameter that occurs with a nonzero exponent."""
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for p, e in zip(self.params, exps):
                if e:
                    if p not in assignment:
                        raise ScalarError(f"no value assigned to parameter {p!r}")
                    term *= Fraction(assignment[p]) ** e
            total += term
        return total

    def substitute(self, assignment: Mapping[str, Number]) -> Scalar:
        """Partial evaluation; the context is kept, substituted exponents become zero."""
        hits = [i for i, p in enumerate(self.params) if p in assignment]
        if not hits:
            return self
        values = [Fraction(assignment[self.params[i]]) for i in hits]
        terms: dict = {}
        for exps, c in self.terms.items():
            coeff = c
            new = list(exps)
            for i, v in zip(hits, values):
                if exps[i]:
                    coeff *= v ** exps[i]
                    new[i] = 0
            key = tuple(new)
            s = terms.get(key, 0) + coeff
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        return Scalar._raw(self.params, terms)

    # -- printing ---------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]))

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        ctx = ",".join(self.params)
        return f"Scalar({format_scalar(self)!r}, [{ctx}])"


def unify_params(*contexts: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for ctx in contexts:
        for p in ctx:
            if p not in out:
                out.append(p)
    return tuple(out)


def as_scalar(value, params: Iterable[str] = ()) -> Scalar:
    params = tuple(params)
    if isinstance(value, Scalar):
        return value.with_params(unify_params(params, value.params)) if value.params != params else value
    if isinstance(value, (int, Fraction)):
        return Scalar.const(value, params)
    if isinstance(value, str):
        return parse(value, params)
    raise TypeError(f"cannot convert {value!r} to a Scalar")


def _divmod_poly(a: Scalar, b: Scalar) -> tuple[Scalar, Scalar]:
    # multivariate division by a single divisor, leading terms in grlex order
    params = a.params
    lead_e, lead_c = b.sorted_terms()[0]
    quotient = Scalar.const(0, params)
    remainder = Scalar.const(0, params)
    p = a
    while p.terms:
        e, c = p.sorted_terms()[0]
        if all(x >= y for x, y in zip(e, lead_e)):
            mono = Scalar._raw(params, {tuple(x - y for x, y in zip(e, lead_e)): c / lead_c})
            quotient = quotient + mono
            p = p - mono * b
        else:
            lt = Scalar._raw(params, {e: c})
            remainder = remainder + lt
            p = p - lt
    return quotient, remainder


# -- printing ---------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(params, exps) -> list[str]:
    return [p if e == 1 else f"{p}^{e}" for p, e in zip(params, exps) if e]


def format_scalar(s: Scalar) -> str:
    """Canonical text: grlex order, integers without a denominator."""
    if not s.terms:
        return "0"
    pieces: list[str] = []
    for idx, (exps, c) in enumerate(s.sorted_terms()):
        negative = c < 0
        mag = -c if negative else c
        mono = _format_monomial(s.params, exps)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(mono)
            # a leading "-x^2" would parse as (-x)^2
            if idx == 0 and negative and "^" in mono[0]:
                body = "1*" + body
        else:
            body = _format_coeff(mag) + "*" + "*".join(mono)
        if idx == 0:
            pieces.append("-" + body if negative else body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    return "".join(pieces)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<rat>\d+\s*/\s*\d+)|(?P<int>\d+)|(?P<ident>[A-Za-z_]+)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", text, pos + len(text[pos:]) - len(text[pos:].lstrip()))
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, params: tuple[str, ...]):
        self.text = text
        self.params = params
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.text, tok[2])

    def expr(self) -> Scalar:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.factor()
            if tok[1] == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except (ScalarError, ZeroDivisionError) as exc:
                    raise ParseError(str(exc), self.text, tok[2]) from None
        return value

    def factor(self) -> Scalar:
        value = self.base()
        if self.peek() == ("op", "^", self.peek()[2]):
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("expected a nonnegative integer exponent", tok)
            value = value ** int(tok[1])
        return value

    def base(self) -> Scalar:
        kind, val, pos = tok = self.take()
        if kind == "rat":
            num, den = (int(x) for x in val.split("/"))
            if den == 0:
                self.fail("zero denominator", tok)
            return Scalar.const(Fraction(num, den), self.params)
        if kind == "int":
            return Scalar.const(int(val), self.params)
        if kind == "ident":
            if val not in self.params:
                self.fail(f"unknown identifier {val!r}", tok)
            return Scalar.var(val, self.params)
        if kind == "op" and val == "(":
            inner = self.expr()
            if self.take()[1] != ")":
                self.fail("expected ')'", self.tokens[self.i - 1])
            return inner
        if kind == "op" and val == "-":
            return -self.base()
        self.fail("unexpected token" if kind != "end" else "unexpected end of input", tok)


def parse(text: str, params: Iterable[str] = ()) -> Scalar:
    """Parse *text* into a canonical Scalar over the context *params*."""
    parser = _Parser(text, tuple(params))
    value = parser.expr()
    if parser.peek()[0] != "end":
        parser.fail("trailing input")
    return value


def parse_open(text: str, params: Iterable[str] = ()) -> Scalar:
    """Like :func:`parse`, but identifiers outside *params* join the context (in order of appearance)."""
    names = [t for t in re.findall(r"[A-Za-z_]+", text)]
    return parse(text, unify_params(params, dict.fromkeys(names)))


def zero(params: Iterable[str] = ()) -> Scalar:
    return Scalar.const(0, params)


def one(params: Iterable[str] = ()) -> Scalar:
    return Scalar.const(1, params)
