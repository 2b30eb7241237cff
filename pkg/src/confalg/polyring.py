"""Exact sparse multivariate polynomials over arbitrary-precision rationals.

This is the computational substrate for every identity check in the package.
A polynomial is a finite map ``monomial -> Fraction`` where a monomial is a
tuple of ``(variable, exponent)`` pairs with positive exponents, sorted by a
fixed variable order.  No zero coefficients are ever stored, so equality of
polynomials is equality of the underlying term maps and ``is_zero`` is
emptiness.

Variables are plain strings in three classes, ordered ``D < L1 < L2 < ... <
aux``:

* ``"D"`` — the symbol for the module generator ∂ acting on an *output*;
* ``"L1"``, ``"L2"``, ... — the lambda-weights attached to the arguments of a
  multilinear map (the evaluation engine in :mod:`confalg.confcore` binds
  them);
* anything else (``"t"``, ``"q"``, ...) — auxiliary scalar parameters such as
  deformation or weight parameters, never touched by evaluation.

The textual form used by the DSL and JSON reports is produced by ``str()``
and read back by :func:`parse_poly`; it uses ``+ - * ^``, integer and ``p/q``
rational literals, and the variable names above, e.g. ``(2*D + 3*L1)^2``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Tuple, Union

from .errors import DuplicateBinding, ParseError

Scalar = Fraction
Monomial = Tuple[Tuple[str, int], ...]
PolyLike = Union["Poly", Scalar, int]

_LAMBDA_RE = re.compile(r"^L([1-9][0-9]*)$")


@lru_cache(maxsize=None)
def var_sort_key(name: str) -> tuple:
    """Total order on variable names: D first, then L1 < L2 < ..., then aux."""
    if name == "D":
        return (0, 0, "")
    m = _LAMBDA_RE.match(name)
    if m:
        return (1, int(m.group(1)), "")
    return (2, 0, name)


def lam(k: int) -> str:
    """Name of the k-th lambda-weight variable (1-based): ``lam(1) == "L1"``."""
    if k < 1:
        raise ValueError(f"lambda index must be >= 1, got {k}")
    return f"L{k}"


def _pair_key(pair: Tuple[str, int]) -> tuple:
    return var_sort_key(pair[0])


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    merged = dict(m1)
    for name, exp in m2:
        merged[name] = merged.get(name, 0) + exp
    return tuple(sorted(merged.items(), key=_pair_key))


def _mul_term_maps(a: Mapping[Monomial, Scalar], b: Mapping[Monomial, Scalar]) -> dict:
    out: dict[Monomial, Scalar] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = _mono_mul(m1, m2)
            prev = out.get(mono)
            out[mono] = c1 * c2 if prev is None else prev + c1 * c2
    return out


class Poly:
    """An immutable exact multivariate polynomial.

    Construct via :meth:`zero`, :meth:`one`, :meth:`const`, :meth:`var` or
    :func:`parse_poly`; combine with ``+ - * **``.  Integers and Fractions
    coerce automatically on either side.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None) -> None:
        canon: dict[Monomial, Scalar] = {}
        if terms:
            for mono, coeff in terms.items():
                if not isinstance(coeff, Fraction):
                    coeff = Fraction(coeff)
                if coeff:
                    canon[mono] = coeff
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return _ZERO_POLY

    @classmethod
    def one(cls) -> "Poly":
        return _ONE_POLY

    @classmethod
    def const(cls, value: Union[Scalar, int]) -> "Poly":
        return cls({(): Fraction(value)})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Poly":
        if exp < 0:
            raise ValueError("negative exponent")
        if exp == 0:
            return _ONE_POLY
        return cls({((name, exp),): Fraction(1)})

    # -- predicates and views ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set[str]:
        names: set[str] = set()
        for mono in self.terms:
            for name, _ in mono:
                names.add(name)
        return names

    def constant_term(self) -> Scalar:
        return self.terms.get((), Fraction(0))

    def degree_in(self, name: str) -> int:
        best = 0
        for mono in self.terms:
            for var, exp in mono:
                if var == name and exp > best:
                    best = exp
        return best

    def total_degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self.terms), default=0)

    def items(self) -> Iterator[Tuple[Monomial, Scalar]]:
        return iter(self.terms.items())

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: PolyLike) -> "Poly":
        other = as_poly(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            prev = out.get(mono)
            if prev is None:
                out[mono] = coeff
            else:
                s = prev + coeff
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return _raw({mono: -coeff for mono, coeff in self.terms.items()})

    def __sub__(self, other: PolyLike) -> "Poly":
        return self.__add__(-as_poly(other))

    def __rsub__(self, other: PolyLike) -> "Poly":
        return as_poly(other).__sub__(self)

    def __mul__(self, other: PolyLike) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return _ZERO_POLY
            frac = Fraction(other)
            return _raw({mono: coeff * frac for mono, coeff in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.terms or not other.terms:
            return _ZERO_POLY
        out = _mul_term_maps(self.terms, other.terms)
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        result = _ONE_POLY
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == as_poly(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- substitution ------------------------------------------------------

    def substitute(self, name: str, image: PolyLike) -> "Poly":
        """Replace every occurrence of ``name`` by ``image``."""
        return self.substitute_many([(name, image)])

    def substitute_many(self, bindings: Iterable[Tuple[str, PolyLike]]) -> "Poly":
        """Apply several substitutions *simultaneously*.

        Images are not re-substituted: ``L1 -> L1+L2, L2 -> L3`` sends
        ``L1*L2`` to ``(L1+L2)*L3``.  Raises :class:`DuplicateBinding` if the
        same variable is bound twice.
        """
        bound: dict[str, Poly] = {}
        for name, image in bindings:
            if name in bound:
                raise DuplicateBinding(f"variable {name!r} bound twice")
            bound[name] = as_poly(image)
        if not bound or not self.terms:
            return self
        live = self.variables() & bound.keys()
        if not live:
            return self
        power_cache: dict[Tuple[str, int], Mapping[Monomial, Scalar]] = {}

        def image_power(name: str, exp: int) -> Mapping[Monomial, Scalar]:
            key = (name, exp)
            hit = power_cache.get(key)
            if hit is None:
                hit = (bound[name] ** exp).terms
                power_cache[key] = hit
            return hit

        acc: dict[Monomial, Scalar] = {}
        for mono, coeff in self.terms.items():
            rest = tuple(p for p in mono if p[0] not in bound)
            piece: Mapping[Monomial, Scalar] = {rest: coeff}
            for name, exp in mono:
                if name in bound:
                    piece = _mul_term_maps(piece, image_power(name, exp))
            for m, c in piece.items():
                prev = acc.get(m)
                if prev is None:
                    acc[m] = c
                else:
                    s = prev + c
                    if s:
                        acc[m] = s
                    else:
                        del acc[m]
        return Poly(acc)

    # -- textual form ------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        def display_key(item: Tuple[Monomial, Scalar]) -> tuple:
            mono = item[0]
            total = sum(e for _, e in mono)
            return (-total, tuple((var_sort_key(n), -e) for n, e in mono))

        parts: list[str] = []
        for mono, coeff in sorted(self.terms.items(), key=display_key):
            factors = [
                name if exp == 1 else f"{name}^{exp}" for name, exp in mono
            ]
            mag = abs(coeff)
            if not factors:
                body = _frac_str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_frac_str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _raw(terms: dict) -> Poly:
    """Wrap an already-canonical term map without re-checking coefficients."""
    p = object.__new__(Poly)
    object.__setattr__(p, "terms", terms)
    return p


def _frac_str(value: Scalar) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_poly(value: PolyLike) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.const(value) if value else _ZERO_POLY
    raise TypeError(f"cannot interpret {value!r} as a polynomial")


_ZERO_POLY = _raw({})
_ONE_POLY = _raw({(): Fraction(1)})


# -- parser of the textual form -------------------------------------------
#
# expr   := term (('+'|'-') term)*
# term   := unary ('*' unary)*
# unary  := '-' unary | power
# power  := atom ('^' NAT)?
# atom   := NAT ('/' NAT)? | VAR | '(' expr ')'

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*^/]))")


def _tokenize_poly(text: str) -> list[Tuple[str, str, int]]:
    tokens: list[Tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = pos + (len(text[pos:]) - len(stripped)) + 1
            raise ParseError(f"unexpected character {stripped[0]!r}", 1, col)
        if m.group(1) is not None:
            tokens.append(("INT", m.group(1), m.start(1) + 1))
        elif m.group(2) is not None:
            tokens.append(("NAME", m.group(2), m.start(2) + 1))
        else:
            tokens.append(("OP", m.group(3), m.start(3) + 1))
        pos = m.end()
    tokens.append(("EOF", "", len(text) + 1))
    return tokens


class _PolyParser:
    def __init__(self, tokens: list[Tuple[str, str, int]]) -> None:
        self.tokens = tokens
        self.idx = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.idx]

    def advance(self) -> Tuple[str, str, int]:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, col = self.advance()
        if kind != "OP" or text != op:
            raise ParseError(f"expected {op!r}, found {text or 'end of input'!r}", 1, col)

    def parse_expr(self) -> Poly:
        result = self.parse_term()
        while True:
            kind, text, _ = self.peek()
            if kind == "OP" and text in "+-":
                self.advance()
                rhs = self.parse_term()
                result = result + rhs if text == "+" else result - rhs
            else:
                return result

    def parse_term(self) -> Poly:
        result = self.parse_unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "OP" and text == "*":
                self.advance()
                result = result * self.parse_unary()
            else:
                return result

    def parse_unary(self) -> Poly:
        kind, text, _ = self.peek()
        if kind == "OP" and text == "-":
            self.advance()
            return -self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Poly:
        base = self.parse_atom()
        kind, text, _ = self.peek()
        if kind == "OP" and text == "^":
            self.advance()
            ekind, etext, ecol = self.advance()
            if ekind != "INT":
                raise ParseError(
                    f"expected integer exponent, found {etext or 'end of input'!r}", 1, ecol
                )
            return base ** int(etext)
        return base

    def parse_atom(self) -> Poly:
        kind, text, col = self.advance()
        if kind == "INT":
            num = int(text)
            nkind, ntext, _ = self.peek()
            if nkind == "OP" and ntext == "/":
                self.advance()
                dkind, dtext, dcol = self.advance()
                if dkind != "INT" or int(dtext) == 0:
                    raise ParseError("expected nonzero integer denominator", 1, dcol)
                return Poly.const(Fraction(num, int(dtext)))
            return Poly.const(num)
        if kind == "NAME":
            return Poly.var(text)
        if kind == "OP" and text == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"expected a polynomial atom, found {text or 'end of input'!r}", 1, col)


def parse_poly(text: str) -> Poly:
    """Parse the textual polynomial form, e.g. ``"(2*D + 3*L1)^2"``."""
    parser = _PolyParser(_tokenize_poly(text))
    result = parser.parse_expr()
    kind, text_, col = parser.peek()
    if kind != "EOF":
        raise ParseError(f"unexpected trailing input {text_!r}", 1, col)
    return result
