"""Conformal algebras over C[∂] presented by finite structure tables.

A conformal algebra here is a finitely generated free C[∂]-module together
with a bilinear λ-product ``a_λ b`` valued in polynomials in λ with module
coefficients.  Everything reduces to finite data:

* a :class:`FreeModule` fixes an ordered basis;
* a :class:`MultiTable` stores the values of an n-linear λ-map on basis
  tuples, written in the variables ``D`` (∂ acting on the *output*) and
  ``L1 .. L(n-1)`` (the formal weights of the first n−1 arguments);
* :func:`eval_multilinear` extends a table to arbitrary elements by
  sesquilinearity: a ``D`` in the coefficient of argument j < n becomes
  ``-w_j``, a ``D`` in the last argument becomes ``D + w_1 + ... + w_{n-1}``,
  and the formal weights in the table entry become the actual weights.

Weights are linear forms in the weight variables and may themselves contain
``D``: that is how products "at weight −λ−∂" (the conformal substitute for
multiplying on the other side) are formed, the ``D`` inside the weight again
meaning ∂ on the output.

The checkers (:func:`check_associative`, :func:`check_lie`,
:func:`check_bimodule`, :func:`check_lie_rep`) expand their defining
identities on all basis tuples with independent weights ``L1, L2, ...`` and
return a :class:`Verdict` listing the failing tuples.  The constructors
(:func:`commutator_lie`, :func:`rep_from_bimodule`, :func:`semidirect`,
:func:`twisted_extension`, :func:`extension_iso`, :func:`matching_pair`,
:func:`cur`) build new algebras from verified inputs and raise when a
documented precondition fails.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from .errors import (
    ArityMismatch,
    InvalidEntry,
    ModuleMismatch,
    NotAssociative,
    NotBimodule,
    NotCocycle,
    NotSkewSymmetric,
    PreconditionFailed,
    RankMismatch,
)
from .polyring import Poly, PolyLike, as_poly, lam, var_sort_key

D = Poly.var("D")
L1 = Poly.var("L1")
L2 = Poly.var("L2")
L3 = Poly.var("L3")

#: Default maximum number of failing basis tuples kept in a verdict.
WITNESS_CAP = 16

EntryLike = Union["ModElem", Sequence[PolyLike]]
IndexKey = Tuple[Union[int, str], ...]


def _is_lambda_var(name: str) -> bool:
    return var_sort_key(name)[0] == 1


@dataclass(frozen=True)
class FreeModule:
    """A free C[∂]-module with a fixed ordered basis of named generators."""

    basis: Tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(self.basis))
        if not self.basis:
            raise RankMismatch("a free module needs at least one basis element")
        if len(set(self.basis)) != len(self.basis):
            raise RankMismatch(f"duplicate basis names in {self.basis}")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, name: Union[int, str]) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.rank:
                raise RankMismatch(f"basis index {name} out of range 0..{self.rank - 1}")
            return name
        try:
            return self.basis.index(name)
        except ValueError:
            raise RankMismatch(f"no basis element named {name!r} in {self.basis}") from None

    def elem(self, coeffs: Sequence[PolyLike]) -> "ModElem":
        return ModElem(self, tuple(coeffs))

    def basis_elem(self, which: Union[int, str]) -> "ModElem":
        i = self.index(which)
        return ModElem(self, tuple(1 if j == i else 0 for j in range(self.rank)))

    def zero(self) -> "ModElem":
        return ModElem(self, (0,) * self.rank)

    def basis_elems(self) -> Iterator["ModElem"]:
        for i in range(self.rank):
            yield self.basis_elem(i)

    def __str__(self) -> str:
        return "<" + ", ".join(self.basis) + ">"


@dataclass(frozen=True)
class ModElem:
    """An element of a :class:`FreeModule`: a vector of polynomial coefficients.

    Coefficients may contain ``D``, weight variables, and auxiliary scalar
    parameters.  Addition, subtraction, negation, and multiplication by a
    polynomial or scalar act coefficientwise.
    """

    module: FreeModule
    coeffs: Tuple[Poly, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(as_poly(c) for c in self.coeffs))
        if len(self.coeffs) != self.module.rank:
            raise RankMismatch(
                f"{len(self.coeffs)} coefficients for a rank-{self.module.rank} module"
            )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def support(self) -> Iterator[Tuple[int, Poly]]:
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield i, c

    def map_coeffs(self, fn: Callable[[Poly], Poly]) -> "ModElem":
        return ModElem(self.module, tuple(fn(c) for c in self.coeffs))

    def _require_same_module(self, other: "ModElem") -> None:
        if self.module != other.module:
            raise ModuleMismatch(f"elements of {self.module} and {other.module}")

    def __add__(self, other: "ModElem") -> "ModElem":
        self._require_same_module(other)
        return ModElem(self.module, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ModElem") -> "ModElem":
        self._require_same_module(other)
        return ModElem(self.module, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "ModElem":
        return ModElem(self.module, tuple(-c for c in self.coeffs))

    def __mul__(self, factor: PolyLike) -> "ModElem":
        f = as_poly(factor)
        return ModElem(self.module, tuple(c * f for c in self.coeffs))

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts = []
        for i, c in self.support():
            name = self.module.basis[i]
            if c == 1:
                parts.append(name)
            elif len(c.terms) == 1 and not c.variables():
                parts.append(f"{c}*{name}")
            else:
                parts.append(f"({c})*{name}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Verdict:
    """Outcome of an identity check.

    ``witnesses`` holds up to :data:`WITNESS_CAP` failing basis tuples in
    scan order, each paired with its nonzero residual.  For checkers that
    combine several residual families (Lie, bimodule, ...) the first entry of
    the tuple names the family.
    """

    identity: str
    holds: bool
    witnesses: Tuple[Tuple[Tuple[str, ...], ModElem], ...]

    def __bool__(self) -> bool:
        return self.holds

    def summary(self) -> str:
        if self.holds:
            return f"{self.identity}: holds"
        slot, residual = self.witnesses[0]
        where = ", ".join(slot)
        more = f" (+{len(self.witnesses) - 1} more)" if len(self.witnesses) > 1 else ""
        return f"{self.identity}: fails at ({where}): residual {residual}{more}"

    def __str__(self) -> str:
        return self.summary()


def residual_scan(
    identity: str,
    items: Iterable[Tuple[Tuple[str, ...], ModElem]],
    cap: int = WITNESS_CAP,
) -> Verdict:
    """Fold a stream of ``(basis tuple, residual)`` pairs into a verdict.

    Scanning stops once ``cap`` nonzero residuals have been collected.
    """
    witnesses = []
    for slot, residual in items:
        if residual.is_zero():
            continue
        witnesses.append((tuple(slot), residual))
        if len(witnesses) >= cap:
            break
    return Verdict(identity, not witnesses, tuple(witnesses))


class MultiTable:
    """Structure constants of an n-linear λ-map between free modules.

    ``entries`` maps basis index tuples to elements of ``out_module`` whose
    coefficients may use ``D``, the weights ``L1 .. L(n-1)``, and auxiliary
    scalar parameters; absent tuples are zero.
    """

    __slots__ = ("in_modules", "out_module", "entries")

    def __init__(
        self,
        in_modules: Sequence[FreeModule],
        out_module: FreeModule,
        entries: Mapping[Tuple[int, ...], EntryLike],
    ) -> None:
        self.in_modules = tuple(in_modules)
        self.out_module = out_module
        if not self.in_modules:
            raise ArityMismatch("a multilinear table needs at least one argument slot")
        n = len(self.in_modules)
        allowed = {lam(k) for k in range(1, n)}
        canon: dict = {}
        for raw_idx, raw_entry in entries.items():
            parts = tuple(raw_idx)
            if len(parts) != n:
                raise ArityMismatch(f"index {raw_idx} has {len(parts)} slots, expected {n}")
            idx = tuple(mod.index(part) for mod, part in zip(self.in_modules, parts))
            entry = raw_entry if isinstance(raw_entry, ModElem) else out_module.elem(raw_entry)
            if entry.module != out_module:
                raise ModuleMismatch(f"entry at {raw_idx} lives in {entry.module}")
            bad = {
                v
                for _, c in entry.support()
                for v in c.variables()
                if _is_lambda_var(v) and v not in allowed
            }
            if bad:
                raise InvalidEntry(
                    f"entry at {raw_idx} uses {sorted(bad)}; an arity-{n} table "
                    f"may only use {sorted(allowed) or ['no weight variables']}"
                )
            if not entry.is_zero():
                canon[idx] = entry
        self.entries = canon

    @property
    def arity(self) -> int:
        return len(self.in_modules)

    def entry(self, idx: IndexKey) -> ModElem:
        parts = tuple(idx)
        if len(parts) != self.arity:
            raise ArityMismatch(f"index {idx} has {len(parts)} slots, expected {self.arity}")
        key = tuple(mod.index(part) for mod, part in zip(self.in_modules, parts))
        return self.entries.get(key, self.out_module.zero())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiTable):
            return NotImplemented
        return (
            self.in_modules == other.in_modules
            and self.out_module == other.out_module
            and self.entries == other.entries
        )

    __hash__ = None  # type: ignore[assignment]

    def map_entries(self, fn: Callable[[ModElem], ModElem]) -> "MultiTable":
        return MultiTable(
            self.in_modules,
            self.out_module,
            {idx: fn(entry) for idx, entry in self.entries.items()},
        )

    def __add__(self, other: "MultiTable") -> "MultiTable":
        if (self.in_modules, self.out_module) != (other.in_modules, other.out_module):
            raise ModuleMismatch("cannot add tables with different shapes")
        merged = dict(self.entries)
        for idx, entry in other.entries.items():
            merged[idx] = merged[idx] + entry if idx in merged else entry
        return MultiTable(self.in_modules, self.out_module, merged)

    def __neg__(self) -> "MultiTable":
        return self.map_entries(lambda e: -e)

    def __sub__(self, other: "MultiTable") -> "MultiTable":
        return self + (-other)

    def scale(self, factor: PolyLike) -> "MultiTable":
        f = as_poly(factor)
        return self.map_entries(lambda e: e * f)


def eval_multilinear(
    table: MultiTable, args: Sequence[ModElem], weights: Sequence[PolyLike]
) -> ModElem:
    """Evaluate an n-linear table on module elements at the given weights.

    ``weights`` carries the n−1 weights of the leading arguments; the last
    argument's weight is determined.  Sesquilinearity is applied to the
    argument coefficients (``D ↦ -w_j`` for j < n, ``D ↦ D + Σw`` in the last
    slot) and the table entry's formal weights ``L1 .. L(n-1)`` are replaced
    by the actual weights simultaneously.  Weights may contain ``D``, which
    then denotes ∂ on the output and is substituted verbatim.
    """
    n = table.arity
    if len(args) != n:
        raise ArityMismatch(f"{len(args)} arguments for an arity-{n} table")
    if len(weights) != n - 1:
        raise ArityMismatch(f"{len(weights)} weights for an arity-{n} table; expected {n - 1}")
    ws = [as_poly(w) for w in weights]
    for pos, (arg, mod) in enumerate(zip(args, table.in_modules)):
        if arg.module != mod:
            raise ModuleMismatch(f"argument {pos + 1} lives in {arg.module}, expected {mod}")
    total = Poly.zero()
    for w in ws:
        total = total + w
    binding = tuple((lam(k + 1), ws[k]) for k in range(n - 1))

    columns = []
    for j, arg in enumerate(args):
        image = -ws[j] if j < n - 1 else D + total
        column = [(i, c.substitute("D", image)) for i, c in arg.support()]
        columns.append(column)

    out = [Poly.zero()] * table.out_module.rank
    for combo in itertools.product(*columns):
        idx = tuple(i for i, _ in combo)
        entry = table.entries.get(idx)
        if entry is None:
            continue
        factor = Poly.one()
        for _, c in combo:
            factor = factor * c
        if factor.is_zero():
            continue
        for i, p in entry.support():
            out[i] = out[i] + factor * p.substitute_many(binding)
    return ModElem(table.out_module, tuple(out))


@dataclass(frozen=True)
class ConfAlgebra:
    """A conformal algebra: a free module with a binary λ-product table.

    ``flavor`` is ``"associative"`` or ``"lie"``; Lie tables are stored in
    full (both argument orders) and skew-symmetry is checked when the
    :meth:`lie` factory builds one.
    """

    module: FreeModule
    table: MultiTable
    flavor: str

    def __post_init__(self) -> None:
        if self.flavor not in ("associative", "lie"):
            raise PreconditionFailed(f"unknown flavor {self.flavor!r}")
        if self.table.in_modules != (self.module, self.module) or (
            self.table.out_module != self.module
        ):
            raise ModuleMismatch("algebra table must map module × module -> module")

    @classmethod
    def associative(
        cls, module: FreeModule, entries: Mapping[Tuple[int, ...], EntryLike]
    ) -> "ConfAlgebra":
        return cls(module, MultiTable((module, module), module, entries), "associative")

    @classmethod
    def lie(
        cls,
        module: FreeModule,
        entries: Mapping[Tuple[int, ...], EntryLike],
        *,
        check_skew: bool = True,
    ) -> "ConfAlgebra":
        alg = cls(module, MultiTable((module, module), module, entries), "lie")
        if check_skew:
            verdict = residual_scan("skew-symmetry", _skew_items(alg), cap=1)
            if not verdict.holds:
                raise NotSkewSymmetric(verdict.summary())
        return alg

    @property
    def rank(self) -> int:
        return self.module.rank

    def entry(self, i: Union[int, str], j: Union[int, str]) -> ModElem:
        return self.table.entry((i, j))

    def mul(self, x: ModElem, y: ModElem, weight: PolyLike) -> ModElem:
        """The λ-product ``x_w y`` at the given weight."""
        return eval_multilinear(self.table, (x, y), (weight,))


@dataclass(frozen=True)
class ConfBimodule:
    """Left and right λ-actions of an associative conformal algebra.

    ``left`` maps algebra × module -> module and ``right`` maps module ×
    algebra -> module.  Validity is established by :func:`check_bimodule`,
    not at construction, so failing candidates can be studied.
    """

    algebra: ConfAlgebra
    module: FreeModule
    left: MultiTable
    right: MultiTable

    def __post_init__(self) -> None:
        amod = self.algebra.module
        if self.left.in_modules != (amod, self.module) or self.left.out_module != self.module:
            raise ModuleMismatch("left action must map algebra × module -> module")
        if self.right.in_modules != (self.module, amod) or self.right.out_module != self.module:
            raise ModuleMismatch("right action must map module × algebra -> module")

    @classmethod
    def build(
        cls,
        algebra: ConfAlgebra,
        module: FreeModule,
        left_entries: Mapping[Tuple[int, ...], EntryLike],
        right_entries: Mapping[Tuple[int, ...], EntryLike],
    ) -> "ConfBimodule":
        amod = algebra.module
        return cls(
            algebra,
            module,
            MultiTable((amod, module), module, left_entries),
            MultiTable((module, amod), module, right_entries),
        )

    @classmethod
    def adjoint(cls, algebra: ConfAlgebra) -> "ConfBimodule":
        """The algebra acting on itself by its own λ-product."""
        entries = dict(algebra.table.entries)
        return cls.build(algebra, algebra.module, entries, entries)

    def act_left(self, a: ModElem, m: ModElem, weight: PolyLike) -> ModElem:
        return eval_multilinear(self.left, (a, m), (weight,))

    def act_right(self, m: ModElem, a: ModElem, weight: PolyLike) -> ModElem:
        return eval_multilinear(self.right, (m, a), (weight,))


@dataclass(frozen=True)
class LieRep:
    """A representation of a Lie conformal algebra on a free module."""

    lie: ConfAlgebra
    module: FreeModule
    action: MultiTable

    def __post_init__(self) -> None:
        if self.lie.flavor != "lie":
            raise PreconditionFailed("LieRep needs a lie-flavored algebra")
        lmod = self.lie.module
        if self.action.in_modules != (lmod, self.module) or (
            self.action.out_module != self.module
        ):
            raise ModuleMismatch("action must map lie × module -> module")

    def act(self, a: ModElem, v: ModElem, weight: PolyLike) -> ModElem:
        return eval_multilinear(self.action, (a, v), (weight,))


# -- axiom checkers ---------------------------------------------------------


def _triples(module: FreeModule) -> Iterator[Tuple[int, int, int]]:
    return itertools.product(range(module.rank), repeat=3)


def check_associative(alg: ConfAlgebra, cap: int = WITNESS_CAP) -> Verdict:
    """Expand ``(e_i L1 e_j) L1+L2 e_k − e_i L1 (e_j L2 e_k)`` on all triples."""
    if alg.flavor != "associative":
        raise PreconditionFailed("check_associative needs an associative-flavored algebra")
    names = alg.module.basis

    def items():
        for i, j, k in _triples(alg.module):
            ei, ej, ek = (alg.module.basis_elem(t) for t in (i, j, k))
            lhs = alg.mul(alg.mul(ei, ej, L1), ek, L1 + L2)
            rhs = alg.mul(ei, alg.mul(ej, ek, L2), L1)
            yield (names[i], names[j], names[k]), lhs - rhs

    return residual_scan("associativity", items(), cap)


def _skew_items(alg: ConfAlgebra):
    names = alg.module.basis
    for i, j in itertools.product(range(alg.rank), repeat=2):
        ei, ej = alg.module.basis_elem(i), alg.module.basis_elem(j)
        res = alg.mul(ei, ej, L1) + alg.mul(ej, ei, -L1 - D)
        yield ("skew", names[i], names[j]), res


def check_lie(alg: ConfAlgebra, cap: int = WITNESS_CAP) -> Verdict:
    """Check skew-symmetry and the Jacobi identity of a λ-bracket.

    Skew-symmetry compares ``[e_i L1 e_j]`` with ``−[e_j −L1−D e_i]``; the
    Jacobi residual is ``[e_i L1 [e_j L2 e_k]] − [[e_i L1 e_j] L1+L2 e_k] −
    [e_j L2 [e_i L1 e_k]]``.  Witness tuples are tagged ``skew`` or
    ``jacobi``.
    """
    if alg.flavor != "lie":
        raise PreconditionFailed("check_lie needs a lie-flavored algebra")
    names = alg.module.basis

    def items():
        yield from _skew_items(alg)
        for i, j, k in _triples(alg.module):
            ei, ej, ek = (alg.module.basis_elem(t) for t in (i, j, k))
            res = (
                alg.mul(ei, alg.mul(ej, ek, L2), L1)
                - alg.mul(alg.mul(ei, ej, L1), ek, L1 + L2)
                - alg.mul(ej, alg.mul(ei, ek, L1), L2)
            )
            yield ("jacobi", names[i], names[j], names[k]), res

    return residual_scan("lie", items(), cap)


def check_bimodule(alg: ConfAlgebra, bim: ConfBimodule, cap: int = WITNESS_CAP) -> Verdict:
    """Check the three module axioms of a candidate bimodule.

    Families: ``left-module`` ``(a L1 b) L1+L2 m = a L1 (b L2 m)``,
    ``right-module`` ``(m L1 a) L1+L2 b = m L1 (a L2 b)``, and
    ``compatibility`` ``(a L1 m) L1+L2 b = a L1 (m L2 b)``.
    """
    if alg.flavor != "associative":
        raise PreconditionFailed("check_bimodule needs an associative-flavored algebra")
    if bim.algebra != alg:
        raise ModuleMismatch("bimodule was built over a different algebra")
    anames, mnames = alg.module.basis, bim.module.basis
    ra, rm = alg.rank, bim.module.rank

    def items():
        for i, j in itertools.product(range(ra), repeat=2):
            a, b = alg.module.basis_elem(i), alg.module.basis_elem(j)
            for u in range(rm):
                m = bim.module.basis_elem(u)
                res = bim.act_left(alg.mul(a, b, L1), m, L1 + L2) - bim.act_left(
                    a, bim.act_left(b, m, L2), L1
                )
                yield ("left-module", anames[i], anames[j], mnames[u]), res
        for u in range(rm):
            m = bim.module.basis_elem(u)
            for i, j in itertools.product(range(ra), repeat=2):
                a, b = alg.module.basis_elem(i), alg.module.basis_elem(j)
                res = bim.act_right(bim.act_right(m, a, L1), b, L1 + L2) - bim.act_right(
                    m, alg.mul(a, b, L2), L1
                )
                yield ("right-module", mnames[u], anames[i], anames[j]), res
        for i in range(ra):
            a = alg.module.basis_elem(i)
            for u in range(rm):
                m = bim.module.basis_elem(u)
                for j in range(ra):
                    b = alg.module.basis_elem(j)
                    res = bim.act_right(bim.act_left(a, m, L1), b, L1 + L2) - bim.act_left(
                        a, bim.act_right(m, b, L2), L1
                    )
                    yield ("compatibility", anames[i], mnames[u], anames[j]), res

    return residual_scan("bimodule", items(), cap)


def check_lie_rep(rep: LieRep, cap: int = WITNESS_CAP) -> Verdict:
    """Check ``ρ(a)_L1 ρ(b)_L2 v − ρ(b)_L2 ρ(a)_L1 v = ρ([a L1 b])_L1+L2 v``."""
    lnames, vnames = rep.lie.module.basis, rep.module.basis

    def items():
        for i, j in itertools.product(range(rep.lie.rank), repeat=2):
            a, b = rep.lie.module.basis_elem(i), rep.lie.module.basis_elem(j)
            for u in range(rep.module.rank):
                v = rep.module.basis_elem(u)
                res = (
                    rep.act(a, rep.act(b, v, L2), L1)
                    - rep.act(b, rep.act(a, v, L1), L2)
                    - rep.act(rep.lie.mul(a, b, L1), v, L1 + L2)
                )
                yield (lnames[i], lnames[j], vnames[u]), res

    return residual_scan("lie-representation", items(), cap)


# -- constructors -----------------------------------------------------------


def commutator_lie(alg: ConfAlgebra) -> ConfAlgebra:
    """The commutator bracket ``[a L1 b] = a_L1 b − b_{−L1−D} a``."""
    if alg.flavor != "associative":
        raise NotAssociative("commutator_lie needs an associative algebra")
    verdict = check_associative(alg, cap=1)
    if not verdict.holds:
        raise NotAssociative(verdict.summary())
    entries = {}
    for i, j in itertools.product(range(alg.rank), repeat=2):
        ei, ej = alg.module.basis_elem(i), alg.module.basis_elem(j)
        entries[(i, j)] = alg.mul(ei, ej, L1) - alg.mul(ej, ei, -L1 - D)
    return ConfAlgebra.lie(alg.module, entries)


def rep_from_bimodule(alg: ConfAlgebra, bim: ConfBimodule) -> LieRep:
    """``ρ(a)_L1 m = a_L1 m − m_{−L1−D} a`` over the commutator bracket."""
    verdict = check_bimodule(alg, bim, cap=1)
    if not verdict.holds:
        raise NotBimodule(verdict.summary())
    lie = commutator_lie(alg)
    entries = {}
    for i in range(alg.rank):
        a = alg.module.basis_elem(i)
        for u in range(bim.module.rank):
            m = bim.module.basis_elem(u)
            entries[(i, u)] = bim.act_left(a, m, L1) - bim.act_right(m, a, -L1 - D)
    return LieRep(lie, bim.module, MultiTable((lie.module, bim.module), bim.module, entries))


def _sum_module(left: FreeModule, right: FreeModule, lp: str, rp: str) -> FreeModule:
    return FreeModule(tuple(lp + n for n in left.basis) + tuple(rp + n for n in right.basis))


def _embed(elem: ModElem, big: FreeModule, offset: int) -> ModElem:
    coeffs = [Poly.zero()] * big.rank
    for i, c in elem.support():
        coeffs[offset + i] = c
    return ModElem(big, tuple(coeffs))


def _semidirect_entries(alg: ConfAlgebra, bim: ConfBimodule, big: FreeModule) -> dict:
    ra = alg.rank
    entries: dict = {}
    for (i, j), e in alg.table.entries.items():
        entries[(i, j)] = _embed(e, big, 0)
    for (i, u), e in bim.left.entries.items():
        entries[(i, ra + u)] = _embed(e, big, ra)
    for (u, i), e in bim.right.entries.items():
        entries[(ra + u, i)] = _embed(e, big, ra)
    return entries


def semidirect(alg: ConfAlgebra, bim: ConfBimodule, *, validate: bool = True) -> ConfAlgebra:
    """The extension of ``alg`` by ``bim`` with zero product on the module.

    ``(a, m) L (b, n) = (a_L b, a_L n + m_L b)`` on the basis ``a_* ++ m_*``.
    With ``validate`` the bimodule axioms are checked first; pass
    ``validate=False`` to build the candidate table for a failing bimodule.
    """
    if validate:
        verdict = check_bimodule(alg, bim)
        if not verdict.holds:
            raise NotBimodule(verdict.summary())
    big = _sum_module(alg.module, bim.module, "a_", "m_")
    return ConfAlgebra.associative(big, _semidirect_entries(alg, bim, big))


def _require_binary_cochain(phi, alg: ConfAlgebra, bim: ConfBimodule) -> None:
    if getattr(phi, "arity", None) != 2:
        raise ArityMismatch("the twisting cochain must have arity 2")
    if phi.input_module != alg.module or phi.value_module != bim.module:
        raise ModuleMismatch("the twisting cochain must map algebra² into the module")


def twisted_extension(
    alg: ConfAlgebra, bim: ConfBimodule, phi, *, validate: bool = True
) -> ConfAlgebra:
    """The extension twisted by a 2-cocycle φ with values in the module.

    ``(a, m) L (b, n) = (a_L b, a_L n + m_L b + φ_L(a, b))``; with φ = 0 this
    is :func:`semidirect`.  ``validate`` checks the bimodule axioms and that
    φ is a 2-cocycle.
    """
    _require_binary_cochain(phi, alg, bim)
    if validate:
        verdict = check_bimodule(alg, bim)
        if not verdict.holds:
            raise NotBimodule(verdict.summary())
        from .cohomology import is_cocycle

        cocycle = is_cocycle(phi, alg, bim)
        if not cocycle.holds:
            raise NotCocycle(cocycle.summary())
    big = _sum_module(alg.module, bim.module, "a_", "m_")
    ra = alg.rank
    entries = _semidirect_entries(alg, bim, big)
    for i, j in itertools.product(range(ra), repeat=2):
        value = phi.entry((i, j))
        if value.is_zero():
            continue
        lifted = _embed(value, big, ra)
        entries[(i, j)] = entries[(i, j)] + lifted if (i, j) in entries else lifted
    return ConfAlgebra.associative(big, entries)


@dataclass(frozen=True)
class ExtensionIso:
    """The change-of-section map between two twisted extensions."""

    psi: "object"
    psi_inv: "object"
    verdict: Verdict


def extension_iso(alg: ConfAlgebra, bim: ConfBimodule, phi, h) -> ExtensionIso:
    """Verify that ``ψ_h(a, m) = (a, m − h(a))`` intertwines twists φ and φ+𝐝h.

    ``h`` is a module map from the algebra into the module.  Returns ψ_h, its
    inverse ``(a, m) ↦ (a, m + h(a))``, and the verdict of the identity
    ``ψ_h(x ∘ᵠ y) = ψ_h(x) ∘ᵠ⁺ᵈʰ ψ_h(y)`` expanded on all basis pairs.
    """
    from .cohomology import Cochain, hochschild_d, is_cocycle
    from .operators import ModuleMap

    _require_binary_cochain(phi, alg, bim)
    if h.source != alg.module or h.target != bim.module:
        raise ModuleMismatch("h must map the algebra into the module")
    cocycle = is_cocycle(phi, alg, bim)
    if not cocycle.holds:
        raise NotCocycle(cocycle.summary())
    dh = hochschild_d(Cochain.from_module_map(h), alg, bim)
    ext = twisted_extension(alg, bim, phi, validate=False)
    ext_shifted = twisted_extension(alg, bim, phi + dh, validate=False)
    big = ext.module
    ra, rm = alg.rank, bim.module.rank

    def block(sign: int) -> ModuleMap:
        columns = []
        for i in range(ra):
            image = [Poly.zero()] * (ra + rm)
            image[i] = Poly.one()
            hi = h.apply(alg.module.basis_elem(i))
            for u, c in hi.support():
                image[ra + u] = sign * c
            columns.append(tuple(image))
        for u in range(rm):
            image = [Poly.zero()] * (ra + rm)
            image[ra + u] = Poly.one()
            columns.append(tuple(image))
        matrix = tuple(
            tuple(columns[j][i] for j in range(ra + rm)) for i in range(ra + rm)
        )
        return ModuleMap(big, big, matrix)

    psi, psi_inv = block(-1), block(+1)

    names = big.basis

    def items():
        for i, j in itertools.product(range(big.rank), repeat=2):
            x, y = big.basis_elem(i), big.basis_elem(j)
            lhs = psi.apply(ext.mul(x, y, L1))
            rhs = ext_shifted.mul(psi.apply(x), psi.apply(y), L1)
            yield (names[i], names[j]), lhs - rhs

    return ExtensionIso(psi, psi_inv, residual_scan("extension-iso", items()))


def matching_pair(
    a1: ConfAlgebra,
    a2: ConfAlgebra,
    a1_on_a2: ConfBimodule,
    a2_on_a1: ConfBimodule,
) -> ConfAlgebra:
    """The candidate algebra on A₁ ⊕ A₂ glued by four cross actions.

    ``(a, x) L (b, y) = (a_L b + x·b + a·y, a·y' + x·b' + x_L y)`` where the
    unprimed dots are the actions of A₂ on A₁ and the primed ones the actions
    of A₁ on A₂.  The basis is ``a_* ++ m_*`` as in :func:`semidirect`, so
    the degenerate pair (zero product and actions on one side) reproduces the
    semidirect table exactly.  The result is *not* validated: run
    :func:`check_associative` on it to certify the pair.
    """
    if a1.flavor != "associative" or a2.flavor != "associative":
        raise PreconditionFailed("matching_pair needs associative-flavored algebras")
    if a1_on_a2.algebra != a1 or a1_on_a2.module != a2.module:
        raise RankMismatch("first action bundle must be A₁ acting on A₂")
    if a2_on_a1.algebra != a2 or a2_on_a1.module != a1.module:
        raise RankMismatch("second action bundle must be A₂ acting on A₁")
    big = _sum_module(a1.module, a2.module, "a_", "m_")
    r1 = a1.rank

    def add_entry(entries: dict, idx: Tuple[int, int], value: ModElem) -> None:
        if value.is_zero():
            return
        entries[idx] = entries[idx] + value if idx in entries else value

    entries: dict = {}
    for (i, j), e in a1.table.entries.items():
        add_entry(entries, (i, j), _embed(e, big, 0))
    for (i, j), e in a2.table.entries.items():
        add_entry(entries, (r1 + i, r1 + j), _embed(e, big, r1))
    for (i, u), e in a1_on_a2.left.entries.items():
        add_entry(entries, (i, r1 + u), _embed(e, big, r1))
    for (u, i), e in a1_on_a2.right.entries.items():
        add_entry(entries, (r1 + u, i), _embed(e, big, r1))
    for (u, i), e in a2_on_a1.left.entries.items():
        add_entry(entries, (r1 + u, i), _embed(e, big, 0))
    for (i, u), e in a2_on_a1.right.entries.items():
        add_entry(entries, (i, r1 + u), _embed(e, big, 0))
    return ConfAlgebra.associative(big, entries)


def cur(
    basis: Sequence[str],
    products: Mapping[IndexKey, Sequence[PolyLike]],
    flavor: str = "associative",
) -> ConfAlgebra:
    """The current conformal algebra of a finite-dimensional scalar algebra.

    ``products`` maps basis pairs (names or indices) to constant coefficient
    vectors; the λ-product is constant in both ``D`` and the weight.
    Associativity (or the Lie axioms) of the result is equivalent to that of
    the scalar algebra and is *not* checked here.
    """
    module = FreeModule(tuple(basis))
    entries = {}
    for key, vec in products.items():
        elem = module.elem(vec)
        for _, c in elem.support():
            if c.variables():
                raise InvalidEntry(
                    f"current-algebra entry at {key} must be scalar, got {c}"
                )
        entries[tuple(key)] = elem
    if flavor == "lie":
        return ConfAlgebra.lie(module, entries)
    return ConfAlgebra.associative(module, entries)
