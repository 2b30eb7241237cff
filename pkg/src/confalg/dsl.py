"""Parser, executor, and emitter for the structure-definition language.

A source file declares algebras, bimodules, cocycles, and module maps, then
runs ``check`` and ``construct`` statements against them::

    algebra A2 {
      basis u, v;
      product u u = u;
      product u v = v;
      product v u = v;
    }
    bimodule AdjA2 adjoint A2;
    map T : AdjA2 -> A2 { u -> v; }
    check O T on A2 with AdjA2;

Coefficients are exact polynomials in ``D`` (the derivation) and the weights
``L`` (alias ``L1``), ``L2`` (alias ``M``); rational scalars are written
``p/q``.  Omitted products and values default to zero, and ``#`` starts a
comment running to the end of the line.  :func:`parse` turns text into a
:class:`SourceFile`, :func:`run` executes one and returns a :class:`Report`,
and :func:`emit_dsl` renders algebras, bundles, and 2-cochains back to
source text such that re-parsing reproduces the same tables.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .confcore import (
    ConfAlgebra,
    ConfBimodule,
    FreeModule,
    ModElem,
    Verdict,
    check_associative,
    check_bimodule,
    check_lie,
    commutator_lie,
    rep_from_bimodule,
)
from .cohomology import Cochain, is_cocycle, random_cochain, hochschild_d
from .derived import (
    StructureBundle,
    deformed_product,
    dendriform_from_O,
    leftsym_from_dendriform,
    m_ass,
    ns_from_nijenhuis,
    ns_from_twisted,
)
from .errors import (
    ConfalgError,
    DuplicateName,
    ParseError,
    PreconditionFailed,
    UnresolvedName,
)
from .operators import KINDS as OPERATOR_KINDS
from .operators import ModuleMap, verify_operator
from .polyring import Poly

__all__ = [
    "SourceFile",
    "Report",
    "Record",
    "parse",
    "parse_file",
    "resolve",
    "run",
    "emit_dsl",
]

#: concrete variable spellings accepted in coefficient expressions
VAR_ALIASES: Mapping[str, str] = {"D": "D", "L": "L1", "L1": "L1", "L2": "L2", "M": "L2"}

#: keywords that cannot be used as declaration or basis names
KEYWORDS = frozenset(
    {
        "algebra",
        "bimodule",
        "cocycle",
        "map",
        "check",
        "construct",
        "basis",
        "product",
        "value",
        "left",
        "right",
        "lie",
        "adjoint",
        "over",
        "on",
        "into",
        "with",
        "twist",
        "weight",
        "as",
    }
)

STRUCTURE_CHECK_KINDS = ("associative", "lie", "bimodule", "cocycle")
CONSTRUCT_KINDS = ("dendriform", "ns", "mass", "leftsym", "deformed")


# -- tokens ------------------------------------------------------------------------

_PUNCT = ("->", "{", "}", "(", ")", ";", ":", ",", "=", "+", "-", "*", "/", "^")


@dataclass(frozen=True)
class _Token:
    kind: str  # "name" | "number" | "punct" | "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, column = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            column += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = column
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, start_col))
            column += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("number", text[i:j], line, start_col))
            column += j - i
            i = j
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(_Token("punct", punct, line, start_col))
                column += len(punct)
                i += len(punct)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, column)
    tokens.append(_Token("eof", "", line, column))
    return tokens


# -- abstract syntax -----------------------------------------------------------------

#: one additive term of an element expression: coefficient times a basis name
ExprTerm = Tuple[Poly, str]
#: a parsed element expression (empty tuple means the zero element)
Expr = Tuple[ExprTerm, ...]


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    flavor: str  # "associative" | "lie"
    basis: Tuple[str, ...]
    products: Tuple[Tuple[str, str, Expr], ...]
    line: int


@dataclass(frozen=True)
class BimoduleDecl:
    name: str
    algebra: str
    adjoint: bool
    basis: Tuple[str, ...]  # empty for adjoint declarations
    left: Tuple[Tuple[str, str, Expr], ...]
    right: Tuple[Tuple[str, str, Expr], ...]
    line: int


@dataclass(frozen=True)
class CocycleDecl:
    name: str
    algebra: str
    into: Optional[str]  # bimodule carrying the values; None = the algebra itself
    values: Tuple[Tuple[str, str, Expr], ...]
    line: int


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str  # algebra or bimodule name
    target: str
    images: Tuple[Tuple[str, Expr], ...]
    line: int


@dataclass(frozen=True)
class CheckStmt:
    kind: str
    name: str
    on: Optional[str]
    with_: Optional[str]
    twist: Optional[str]
    weight: Optional[Union[Fraction, str]]  # a rational or a parameter name
    line: int


@dataclass(frozen=True)
class ConstructStmt:
    kind: str
    name: str
    on: Optional[str]
    with_: Optional[str]
    twist: Optional[str]
    as_: Optional[str]
    line: int


Declaration = Union[AlgebraDecl, BimoduleDecl, CocycleDecl, MapDecl, CheckStmt, ConstructStmt]


@dataclass(frozen=True)
class SourceFile:
    """An ordered list of declarations with per-kind unique names."""

    path: str
    declarations: Tuple[Declaration, ...]


# -- parser ------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: Sequence[_Token]):
        self.tokens = tokens
        self.pos = 0

    # token plumbing

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[_Token] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)

    def expect_punct(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.text != text:
            raise self.fail(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def expect_name(self, what: str = "a name") -> _Token:
        tok = self.peek()
        if tok.kind != "name":
            raise self.fail(f"expected {what}, found {tok.text or 'end of input'!r}")
        return self.advance()

    def expect_keyword(self, word: str) -> _Token:
        tok = self.expect_name(f"keyword {word!r}")
        if tok.text != word:
            raise ParseError(f"expected keyword {word!r}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def fresh_name(self, what: str) -> _Token:
        tok = self.expect_name(what)
        if tok.text in KEYWORDS:
            raise ParseError(f"{tok.text!r} is a keyword and cannot name {what}", tok.line, tok.column)
        return tok

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == text

    def at_name(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "name" and tok.text == text

    # expression grammar

    def parse_number(self) -> Fraction:
        tok = self.advance()
        value = Fraction(int(tok.text))
        if self.at_punct("/"):
            self.advance()
            den = self.peek()
            if den.kind != "number":
                raise self.fail("expected a denominator after '/'")
            self.advance()
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.line, den.column)
            value /= int(den.text)
        return value

    def parse_exponent(self) -> int:
        self.expect_punct("^")
        tok = self.peek()
        if tok.kind != "number":
            raise self.fail("expected an integer exponent after '^'")
        self.advance()
        return int(tok.text)

    def parse_scalar_factor(self) -> Poly:
        tok = self.peek()
        if tok.kind == "number":
            return Poly.const(self.parse_number())
        if tok.kind == "name":
            if tok.text not in VAR_ALIASES:
                raise self.fail("basis names cannot appear inside coefficients", tok)
            self.advance()
            exp = self.parse_exponent() if self.at_punct("^") else 1
            return Poly.var(VAR_ALIASES[tok.text], exp)
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            inner = self.parse_scalar_expr()
            self.expect_punct(")")
            if self.at_punct("^"):
                exp = self.parse_exponent()
                out = Poly.one()
                for _ in range(exp):
                    out = out * inner
                return out
            return inner
        raise self.fail("expected a coefficient")

    def parse_scalar_term(self) -> Poly:
        out = self.parse_scalar_factor()
        while self.at_punct("*"):
            self.advance()
            out = out * self.parse_scalar_factor()
        return out

    def parse_scalar_expr(self) -> Poly:
        negate = False
        if self.at_punct("-"):
            self.advance()
            negate = True
        out = self.parse_scalar_term()
        if negate:
            out = out * Poly.const(-1)
        while self.at_punct("+") or self.at_punct("-"):
            op = self.advance().text
            term = self.parse_scalar_term()
            out = out + term if op == "+" else out - term
        return out

    def parse_elem_term(self) -> Optional[ExprTerm]:
        """One additive term: scalar factors and at most one basis name.

        Returns ``None`` for a literal scalar zero (the empty element).
        """
        coeff = Poly.one()
        basis: Optional[str] = None
        saw_scalar_zero = False
        first = True
        while True:
            tok = self.peek()
            if tok.kind == "number":
                value = self.parse_number()
                if value == 0:
                    saw_scalar_zero = True
                coeff = coeff * Poly.const(value)
            elif tok.kind == "name" and tok.text in VAR_ALIASES:
                self.advance()
                exp = self.parse_exponent() if self.at_punct("^") else 1
                coeff = coeff * Poly.var(VAR_ALIASES[tok.text], exp)
            elif tok.kind == "name" and tok.text not in KEYWORDS:
                if basis is not None:
                    raise self.fail("a term may mention at most one basis name", tok)
                self.advance()
                if self.at_punct("^"):
                    raise self.fail("basis names cannot be raised to powers")
                basis = tok.text
            elif tok.kind == "punct" and tok.text == "(":
                self.advance()
                inner = self.parse_scalar_expr()
                self.expect_punct(")")
                if self.at_punct("^"):
                    exp = self.parse_exponent()
                    power = Poly.one()
                    for _ in range(exp):
                        power = power * inner
                    inner = power
                coeff = coeff * inner
            else:
                if first:
                    raise self.fail("expected an element expression")
                break
            first = False
            if self.at_punct("*"):
                self.advance()
                continue
            break
        if basis is None:
            if saw_scalar_zero or coeff.is_zero():
                return None
            raise self.fail("a nonzero term must mention a basis name")
        return (coeff, basis)

    def parse_elem_expr(self) -> Expr:
        terms: List[ExprTerm] = []
        negate = self.at_punct("-")
        if negate:
            self.advance()
        term = self.parse_elem_term()
        if term is not None:
            coeff, name = term
            terms.append((coeff * Poly.const(-1) if negate else coeff, name))
        while self.at_punct("+") or self.at_punct("-"):
            op = self.advance().text
            term = self.parse_elem_term()
            if term is not None:
                coeff, name = term
                terms.append((coeff * Poly.const(-1) if op == "-" else coeff, name))
        return tuple(terms)

    # declarations

    def parse_basis_line(self) -> Tuple[str, ...]:
        self.expect_keyword("basis")
        names = [self.fresh_name("a basis name").text]
        while self.at_punct(","):
            self.advance()
            names.append(self.fresh_name("a basis name").text)
        self.expect_punct(";")
        seen = set()
        for name in names:
            if name in seen:
                raise self.fail(f"duplicate basis name {name!r}")
            seen.add(name)
        return tuple(names)

    def parse_algebra(self) -> AlgebraDecl:
        head = self.expect_keyword("algebra")
        name = self.fresh_name("an algebra name").text
        flavor = "associative"
        if self.at_name("lie"):
            self.advance()
            flavor = "lie"
        self.expect_punct("{")
        basis = self.parse_basis_line()
        products: List[Tuple[str, str, Expr]] = []
        while self.at_name("product"):
            self.advance()
            left = self.expect_name("a basis name").text
            right = self.expect_name("a basis name").text
            self.expect_punct("=")
            expr = self.parse_elem_expr()
            self.expect_punct(";")
            products.append((left, right, expr))
        self.expect_punct("}")
        return AlgebraDecl(name, flavor, basis, tuple(products), head.line)

    def parse_bimodule(self) -> BimoduleDecl:
        head = self.expect_keyword("bimodule")
        name = self.fresh_name("a bimodule name").text
        if self.at_name("adjoint"):
            self.advance()
            algebra = self.fresh_name("an algebra name").text
            self.expect_punct(";")
            return BimoduleDecl(name, algebra, True, (), (), (), head.line)
        self.expect_keyword("over")
        algebra = self.fresh_name("an algebra name").text
        self.expect_punct("{")
        basis = self.parse_basis_line()
        left: List[Tuple[str, str, Expr]] = []
        right: List[Tuple[str, str, Expr]] = []
        while self.at_name("left") or self.at_name("right"):
            side = self.advance().text
            first = self.expect_name("a basis name").text
            second = self.expect_name("a basis name").text
            self.expect_punct("=")
            expr = self.parse_elem_expr()
            self.expect_punct(";")
            (left if side == "left" else right).append((first, second, expr))
        self.expect_punct("}")
        return BimoduleDecl(name, algebra, False, basis, tuple(left), tuple(right), head.line)

    def parse_cocycle(self) -> CocycleDecl:
        head = self.expect_keyword("cocycle")
        name = self.fresh_name("a cocycle name").text
        self.expect_keyword("on")
        algebra = self.fresh_name("an algebra name").text
        into = None
        if self.at_name("into"):
            self.advance()
            into = self.fresh_name("a bimodule name").text
        self.expect_punct("{")
        values: List[Tuple[str, str, Expr]] = []
        while self.at_name("value"):
            self.advance()
            first = self.expect_name("a basis name").text
            second = self.expect_name("a basis name").text
            self.expect_punct("=")
            expr = self.parse_elem_expr()
            self.expect_punct(";")
            values.append((first, second, expr))
        self.expect_punct("}")
        return CocycleDecl(name, algebra, into, tuple(values), head.line)

    def parse_map(self) -> MapDecl:
        head = self.expect_keyword("map")
        name = self.fresh_name("a map name").text
        self.expect_punct(":")
        source = self.fresh_name("a source name").text
        self.expect_punct("->")
        target = self.fresh_name("a target name").text
        self.expect_punct("{")
        images: List[Tuple[str, Expr]] = []
        while self.peek().kind == "name":
            basis = self.expect_name("a basis name").text
            self.expect_punct("->")
            expr = self.parse_elem_expr()
            self.expect_punct(";")
            images.append((basis, expr))
        self.expect_punct("}")
        return MapDecl(name, source, target, tuple(images), head.line)

    def parse_clauses(self, allow_weight: bool, allow_as: bool):
        on = with_ = twist = as_ = None
        weight: Optional[Union[Fraction, str]] = None
        while self.peek().kind == "name" and self.peek().text in ("on", "with", "twist", "weight", "as"):
            word = self.advance().text
            if word == "weight":
                if not allow_weight:
                    raise self.fail("'weight' is only valid in check statements")
                tok = self.peek()
                if tok.kind == "number" or (tok.kind == "punct" and tok.text == "-"):
                    negate = False
                    if tok.kind == "punct":
                        self.advance()
                        negate = True
                        if self.peek().kind != "number":
                            raise self.fail("expected a number after '-'")
                    value = self.parse_number()
                    weight = -value if negate else value
                else:
                    weight = self.fresh_name("a weight parameter").text
                continue
            if word == "as":
                if not allow_as:
                    raise self.fail("'as' is only valid in construct statements")
                as_ = self.fresh_name("a result name").text
                continue
            value = self.fresh_name(f"a name after {word!r}").text
            if word == "on":
                on = value
            elif word == "with":
                with_ = value
            else:
                twist = value
        return on, with_, twist, weight, as_

    def parse_check(self) -> CheckStmt:
        head = self.expect_keyword("check")
        kind = self.expect_name("a check kind").text
        if kind not in OPERATOR_KINDS and kind not in STRUCTURE_CHECK_KINDS:
            raise ParseError(
                f"unknown check kind {kind!r}; expected an operator kind "
                f"{tuple(sorted(OPERATOR_KINDS))} or one of {STRUCTURE_CHECK_KINDS}",
                head.line,
                head.column,
            )
        name = self.fresh_name("the name to check").text
        on, with_, twist, weight, _ = self.parse_clauses(allow_weight=True, allow_as=False)
        self.expect_punct(";")
        return CheckStmt(kind, name, on, with_, twist, weight, head.line)

    def parse_construct(self) -> ConstructStmt:
        head = self.expect_keyword("construct")
        kind = self.expect_name("a construct kind").text
        if kind not in CONSTRUCT_KINDS:
            raise ParseError(
                f"unknown construct kind {kind!r}; expected one of {CONSTRUCT_KINDS}",
                head.line,
                head.column,
            )
        name = self.fresh_name("an operator name").text
        on, with_, twist, _, as_ = self.parse_clauses(allow_weight=False, allow_as=True)
        self.expect_punct(";")
        return ConstructStmt(kind, name, on, with_, twist, as_, head.line)

    def parse_file(self, path: str) -> SourceFile:
        decls: List[Declaration] = []
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "name":
                raise self.fail("expected a declaration keyword")
            if tok.text == "algebra":
                decls.append(self.parse_algebra())
            elif tok.text == "bimodule":
                decls.append(self.parse_bimodule())
            elif tok.text == "cocycle":
                decls.append(self.parse_cocycle())
            elif tok.text == "map":
                decls.append(self.parse_map())
            elif tok.text == "check":
                decls.append(self.parse_check())
            elif tok.text == "construct":
                decls.append(self.parse_construct())
            else:
                raise self.fail(f"unknown declaration {tok.text!r}")
        return SourceFile(path, tuple(decls))


def parse(text: str, path: str = "<string>") -> SourceFile:
    """Parse source text, enforcing per-kind uniqueness of declared names."""
    sf = _Parser(_tokenize(text)).parse_file(path)
    seen: Dict[Tuple[str, str], int] = {}
    for decl in sf.declarations:
        kind = _namespace_of(decl)
        if kind is None:
            continue
        key = (kind, decl.name)
        if key in seen:
            raise DuplicateName(
                f"{kind} {decl.name!r} redeclared on line {decl.line} "
                f"(first declared on line {seen[key]})"
            )
        seen[key] = decl.line
    return sf


def parse_file(path: str) -> SourceFile:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read(), path)


def _namespace_of(decl: Declaration) -> Optional[str]:
    if isinstance(decl, AlgebraDecl):
        return "algebra"
    if isinstance(decl, BimoduleDecl):
        return "bimodule"
    if isinstance(decl, CocycleDecl):
        return "cocycle"
    if isinstance(decl, MapDecl):
        return "map"
    return None


# -- static resolution -----------------------------------------------------------


def resolve(sf: SourceFile) -> None:
    """Verify every reference names an earlier declaration of the right kind."""
    algebras: set = set()
    bimodules: set = set()
    cocycles: set = set()
    maps: set = set()

    def need(name: Optional[str], pool: set, kind: str, line: int) -> None:
        if name is not None and name not in pool:
            raise UnresolvedName(f"unknown {kind} {name!r} referenced on line {line}")

    for decl in sf.declarations:
        if isinstance(decl, AlgebraDecl):
            if decl.name in algebras:
                # parse() already rejects twin declarations, so the only way to
                # get here is a clash with a construct-registered name
                raise DuplicateName(
                    f"algebra {decl.name!r} on line {decl.line} collides with a "
                    f"construct result of the same name"
                )
            algebras.add(decl.name)
        elif isinstance(decl, BimoduleDecl):
            need(decl.algebra, algebras, "algebra", decl.line)
            bimodules.add(decl.name)
        elif isinstance(decl, CocycleDecl):
            need(decl.algebra, algebras, "algebra", decl.line)
            need(decl.into, bimodules, "bimodule", decl.line)
            cocycles.add(decl.name)
        elif isinstance(decl, MapDecl):
            for endpoint in (decl.source, decl.target):
                if endpoint not in algebras and endpoint not in bimodules:
                    raise UnresolvedName(
                        f"unknown algebra or bimodule {endpoint!r} referenced on line {decl.line}"
                    )
            maps.add(decl.name)
        elif isinstance(decl, CheckStmt):
            if decl.kind in OPERATOR_KINDS:
                need(decl.name, maps, "map", decl.line)
            elif decl.kind in ("associative", "lie"):
                need(decl.name, algebras, "algebra", decl.line)
            elif decl.kind == "bimodule":
                need(decl.name, bimodules, "bimodule", decl.line)
            else:
                need(decl.name, cocycles, "cocycle", decl.line)
            need(decl.on, algebras, "algebra", decl.line)
            need(decl.with_, bimodules, "bimodule", decl.line)
            need(decl.twist, cocycles, "cocycle", decl.line)
        elif isinstance(decl, ConstructStmt):
            need(decl.name, maps, "map", decl.line)
            need(decl.on, algebras, "algebra", decl.line)
            need(decl.with_, bimodules, "bimodule", decl.line)
            need(decl.twist, cocycles, "cocycle", decl.line)
            if decl.as_ is not None:
                if decl.kind not in ("mass", "deformed"):
                    raise UnresolvedName(
                        f"'as' on line {decl.line} needs a construct that yields an "
                        f"algebra (mass or deformed), not {decl.kind!r}"
                    )
                if decl.as_ in algebras:
                    raise DuplicateName(
                        f"algebra {decl.as_!r} redeclared by construct on line {decl.line}"
                    )
                algebras.add(decl.as_)


# -- reports -----------------------------------------------------------------------


@dataclass(frozen=True)
class Record:
    """Outcome of one statement: what ran, how it went, and any witnesses."""

    identity: str
    status: str  # "holds" | "fails" | "error"
    witnesses: Tuple[dict, ...]
    elapsed_ms: float
    detail: Optional[str] = None
    emitted: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "status": self.status,
            "witnesses": [dict(w) for w in self.witnesses],
            "elapsed_ms": self.elapsed_ms,
            "detail": self.detail,
            "emitted": self.emitted,
        }


@dataclass(frozen=True)
class Report:
    """Machine-readable account of a command run over one source file."""

    command: str
    version: str
    seed: Optional[int]
    records: Tuple[Record, ...]

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "records": [r.to_json() for r in self.records],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @property
    def exit_code(self) -> int:
        if any(r.status == "error" for r in self.records):
            return 2
        if any(r.status == "fails" for r in self.records):
            return 1
        return 0


def _witnesses_json(verdict: Verdict) -> Tuple[dict, ...]:
    return tuple(
        {"names": [str(n) for n in names], "residual": str(residual)}
        for names, residual in verdict.witnesses
    )


def _verdict_record(identity: str, verdict: Verdict, started: float, emitted=None) -> Record:
    elapsed = (time.perf_counter() - started) * 1000.0
    status = "holds" if verdict.holds else "fails"
    return Record(identity, status, _witnesses_json(verdict), elapsed, None, emitted)


# -- execution environment -----------------------------------------------------------


@dataclass
class Environment:
    """Named objects built while executing a source file."""

    algebras: Dict[str, ConfAlgebra] = field(default_factory=dict)
    bimodules: Dict[str, ConfBimodule] = field(default_factory=dict)
    cocycles: Dict[str, Tuple[Cochain, str, Optional[str]]] = field(default_factory=dict)
    maps: Dict[str, ModuleMap] = field(default_factory=dict)

    def module_of(self, name: str) -> FreeModule:
        if name in self.algebras:
            return self.algebras[name].module
        if name in self.bimodules:
            return self.bimodules[name].module
        raise UnresolvedName(f"unknown algebra or bimodule {name!r}")


def _eval_expr(expr: Expr, module: FreeModule) -> ModElem:
    out = module.zero()
    index = {name: k for k, name in enumerate(module.basis)}
    for coeff, name in expr:
        if name not in index:
            raise UnresolvedName(
                f"{name!r} is not a basis name of this module (basis: {', '.join(module.basis)})"
            )
        out = out + coeff * module.basis_elem(index[name])
    return out


def _entry_table(
    pairs: Sequence[Tuple[str, str, Expr]],
    row_module: FreeModule,
    col_module: FreeModule,
    value_module: FreeModule,
) -> Dict[Tuple[int, int], ModElem]:
    rows = {name: k for k, name in enumerate(row_module.basis)}
    cols = {name: k for k, name in enumerate(col_module.basis)}
    entries: Dict[Tuple[int, int], ModElem] = {}
    for first, second, expr in pairs:
        if first not in rows:
            raise UnresolvedName(f"{first!r} is not a basis name (basis: {', '.join(row_module.basis)})")
        if second not in cols:
            raise UnresolvedName(f"{second!r} is not a basis name (basis: {', '.join(col_module.basis)})")
        key = (rows[first], cols[second])
        if key in entries:
            raise DuplicateName(f"entry {first} {second} given twice")
        value = _eval_expr(expr, value_module)
        if not value.is_zero():
            entries[key] = value
    return entries


def _declare(env: Environment, decl: Declaration) -> None:
    if isinstance(decl, AlgebraDecl):
        module = FreeModule(decl.basis)
        entries = _entry_table(decl.products, module, module, module)
        if decl.flavor == "lie":
            env.algebras[decl.name] = ConfAlgebra.lie(module, entries, check_skew=False)
        else:
            env.algebras[decl.name] = ConfAlgebra.associative(module, entries)
    elif isinstance(decl, BimoduleDecl):
        algebra = env.algebras[decl.algebra]
        if decl.adjoint:
            env.bimodules[decl.name] = ConfBimodule.adjoint(algebra)
        else:
            module = FreeModule(decl.basis)
            left = _entry_table(decl.left, algebra.module, module, module)
            right = _entry_table(decl.right, module, algebra.module, module)
            env.bimodules[decl.name] = ConfBimodule.build(algebra, module, left, right)
    elif isinstance(decl, CocycleDecl):
        algebra = env.algebras[decl.algebra]
        value_module = (
            env.bimodules[decl.into].module if decl.into is not None else algebra.module
        )
        entries = _entry_table(decl.values, algebra.module, algebra.module, value_module)
        env.cocycles[decl.name] = (
            Cochain.from_entries(2, algebra.module, value_module, entries),
            decl.algebra,
            decl.into,
        )
    elif isinstance(decl, MapDecl):
        source = env.module_of(decl.source)
        target = env.module_of(decl.target)
        images = {}
        names = set(source.basis)
        for name, expr in decl.images:
            if name not in names:
                raise UnresolvedName(
                    f"{name!r} is not a basis name of {decl.source!r} (basis: {', '.join(source.basis)})"
                )
            if name in images:
                raise DuplicateName(f"image of {name!r} given twice")
            images[name] = _eval_expr(expr, target)
        for name in source.basis:
            images.setdefault(name, target.zero())
        env.maps[decl.name] = ModuleMap.from_images(source, target, images)


def _operator_context(env: Environment, stmt: CheckStmt):
    if stmt.on is None:
        raise PreconditionFailed(
            f"check {stmt.kind} needs an 'on <algebra>' clause (line {stmt.line})"
        )
    T = env.maps[stmt.name]
    alg = env.algebras[stmt.on]
    bim = env.bimodules[stmt.with_] if stmt.with_ is not None else None
    twist = env.cocycles[stmt.twist][0] if stmt.twist is not None else None
    weight = stmt.weight if stmt.weight is not None else 0
    if isinstance(weight, str):
        weight = Poly.var(weight)
    rep = None
    if stmt.kind in ("OLie", "NijenhuisLie") and alg.flavor == "associative":
        if stmt.kind == "OLie":
            if bim is None:
                raise PreconditionFailed(
                    f"check OLie needs a 'with <bimodule>' clause (line {stmt.line})"
                )
            rep = rep_from_bimodule(alg, bim)
            bim = None
        alg = commutator_lie(alg)
    return T, alg, bim, twist, weight, rep


def _run_check(env: Environment, stmt: CheckStmt, cap: int) -> Record:
    identity = f"check {stmt.kind} {stmt.name}"
    started = time.perf_counter()
    if stmt.kind in OPERATOR_KINDS:
        T, alg, bim, twist, weight, rep = _operator_context(env, stmt)
        verdict = verify_operator(
            stmt.kind, T, alg, bim, weight=weight, twist=twist, rep=rep, cap=cap
        )
    elif stmt.kind == "associative":
        verdict = check_associative(env.algebras[stmt.name], cap=cap)
    elif stmt.kind == "lie":
        verdict = check_lie(env.algebras[stmt.name], cap=cap)
    elif stmt.kind == "bimodule":
        bim = env.bimodules[stmt.name]
        verdict = check_bimodule(bim.algebra, bim, cap=cap)
    else:  # cocycle
        phi, alg_name, into = env.cocycles[stmt.name]
        alg = env.algebras[alg_name]
        if stmt.with_ is not None:
            bim = env.bimodules[stmt.with_]
        elif into is not None:
            bim = env.bimodules[into]
        else:
            bim = ConfBimodule.adjoint(alg)
        verdict = is_cocycle(phi, alg, bim, cap=cap)
    return _verdict_record(identity, verdict, started)


def _run_construct(env: Environment, stmt: ConstructStmt, cap: int) -> Record:
    identity = f"construct {stmt.kind} {stmt.name}"
    started = time.perf_counter()
    if stmt.on is None:
        raise PreconditionFailed(
            f"construct {stmt.kind} needs an 'on <algebra>' clause (line {stmt.line})"
        )
    T = env.maps[stmt.name]
    alg = env.algebras[stmt.on]
    bim = env.bimodules[stmt.with_] if stmt.with_ is not None else None
    twist = env.cocycles[stmt.twist][0] if stmt.twist is not None else None
    base = stmt.as_ or f"{stmt.kind}_{stmt.name}"

    def need_bim() -> ConfBimodule:
        if bim is None:
            raise PreconditionFailed(
                f"construct {stmt.kind} needs a 'with <bimodule>' clause (line {stmt.line})"
            )
        return bim

    if stmt.kind == "dendriform":
        bundle = dendriform_from_O(T, alg, need_bim(), cap=cap)
        emitted = emit_dsl(bundle, base)
    elif stmt.kind == "ns":
        if twist is not None:
            bundle = ns_from_twisted(T, alg, need_bim(), twist, cap=cap)
        else:
            bundle = ns_from_nijenhuis(T, alg, cap=cap)
        emitted = emit_dsl(bundle, base)
    elif stmt.kind == "leftsym":
        bundle = leftsym_from_dendriform(dendriform_from_O(T, alg, need_bim(), cap=cap), cap=cap)
        emitted = emit_dsl(bundle, base)
    elif stmt.kind == "mass":
        star = m_ass(T, alg, need_bim(), twist)
        env.algebras[base] = star
        emitted = emit_dsl(star, base)
    else:  # deformed
        circ, defect = deformed_product(T, alg)
        env.algebras[base] = circ
        emitted = emit_dsl(circ, base)
        if not defect.is_zero():
            witnesses = tuple(
                {
                    "names": [alg.module.basis[i] for i in idx],
                    "residual": str(value),
                }
                for idx, value in sorted(defect.table.entries.items())
            )[:cap]
            elapsed = (time.perf_counter() - started) * 1000.0
            return Record(
                identity,
                "fails",
                witnesses,
                elapsed,
                "the deformation defect (the candidate's cocycle error) is nonzero",
                emitted,
            )
    elapsed = (time.perf_counter() - started) * 1000.0
    return Record(identity, "holds", (), elapsed, None, emitted)


def run(
    sf: SourceFile,
    *,
    command: str = "check",
    seed: Optional[int] = None,
    witness_cap: int = 16,
    version: str = "0",
) -> Tuple[Report, Environment]:
    """Execute a parsed file: declarations bind names, checks produce records.

    Declarations only contribute records when they raise; check and construct
    statements always do.  The report's exit code is 2 if any record is an
    error, 1 if any check fails, and 0 otherwise.
    """
    resolve(sf)
    env = Environment()
    records: List[Record] = []
    for decl in sf.declarations:
        namespace = _namespace_of(decl)
        if namespace is not None:
            started = time.perf_counter()
            try:
                _declare(env, decl)
            except ConfalgError as exc:
                elapsed = (time.perf_counter() - started) * 1000.0
                records.append(
                    Record(f"{namespace} {decl.name}", "error", (), elapsed, str(exc))
                )
            continue
        try:
            if isinstance(decl, CheckStmt):
                records.append(_run_check(env, decl, witness_cap))
            else:
                records.append(_run_construct(env, decl, witness_cap))
        except ConfalgError as exc:
            kind = "check" if isinstance(decl, CheckStmt) else "construct"
            records.append(
                Record(f"{kind} {decl.kind} {decl.name}", "error", (), 0.0, str(exc))
            )
    return Report(command, version, seed, tuple(records)), env


# -- emission ----------------------------------------------------------------------


def render_elem(elem: ModElem) -> str:
    """Render a module element as a parseable element expression."""
    pieces = []
    for k, coeff in enumerate(elem.coeffs):
        if coeff.is_zero():
            continue
        name = elem.module.basis[k]
        if coeff == Poly.one():
            pieces.append(name)
        else:
            pieces.append(f"({coeff})*{name}")
    return " + ".join(pieces) if pieces else "0"


def _emit_algebra(alg: ConfAlgebra, name: str) -> str:
    flavor = " lie" if alg.flavor == "lie" else ""
    lines = [f"algebra {name}{flavor} {{"]
    lines.append(f"  basis {', '.join(alg.module.basis)};")
    for idx in sorted(alg.table.entries):
        left, right = (alg.module.basis[k] for k in idx)
        lines.append(f"  product {left} {right} = {render_elem(alg.table.entries[idx])};")
    lines.append("}")
    return "\n".join(lines)


def _emit_cochain(f: Cochain, name: str, on: str, into: Optional[str]) -> str:
    if f.arity != 2:
        raise PreconditionFailed("only arity-2 cochains have a source form")
    head = f"cocycle {name} on {on}"
    if into is not None:
        head += f" into {into}"
    lines = [head + " {"]
    for idx in sorted(f.table.entries):
        first = f.input_module.basis[idx[0]]
        second = f.input_module.basis[idx[1]]
        lines.append(f"  value {first} {second} = {render_elem(f.table.entries[idx])};")
    lines.append("}")
    return "\n".join(lines)


def emit_dsl(
    obj: Union[ConfAlgebra, StructureBundle, Cochain],
    name: str = "X",
    *,
    on: str = "A",
    into: Optional[str] = None,
) -> str:
    """Render an algebra, a structure bundle, or a 2-cochain as source text.

    Re-parsing the output reconstructs objects with equal tables.  Bundles
    emit one algebra block per component table, named ``<name>_<tag>``; the
    ``on``/``into`` names only matter for cochains, whose source form must
    reference an algebra (and optionally a bimodule) by name.
    """
    if isinstance(obj, ConfAlgebra):
        return _emit_algebra(obj, name)
    if isinstance(obj, StructureBundle):
        blocks = [
            _emit_algebra(obj.table(tag).as_algebra(), f"{name}_{tag}")
            for tag in sorted(obj.tables)
        ]
        return "\n\n".join(blocks)
    if isinstance(obj, Cochain):
        return _emit_cochain(obj, name, on, into)
    raise PreconditionFailed(f"cannot emit {type(obj).__name__} as source text")


# -- random differential suite (used by the command line) ------------------------------


def d_squared_suite(
    alg: ConfAlgebra,
    bim: ConfBimodule,
    *,
    count: int = 10,
    seed: int = 0,
    max_degree: int = 2,
) -> Tuple[bool, Tuple[dict, ...]]:
    """Check 𝐝∘𝐝 = 0 on ``count`` seeded random cochains of arities 1 and 2.

    Returns the overall result and JSON-ready witnesses for any failures.
    """
    rng = random.Random(seed)
    witnesses: List[dict] = []
    for sample in range(count):
        arity = 1 + sample % 2
        f = random_cochain(rng, arity, alg.module, bim.module, max_degree=max_degree)
        dd = hochschild_d(hochschild_d(f, alg, bim), alg, bim)
        if not dd.is_zero():
            idx, value = sorted(dd.table.entries.items())[0]
            witnesses.append(
                {
                    "names": [f"sample={sample}", f"arity={arity}"]
                    + [alg.module.basis[i] for i in idx],
                    "residual": str(value),
                }
            )
    return not witnesses, tuple(witnesses)
