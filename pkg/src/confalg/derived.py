"""Products and brackets induced by operators.

An operator that satisfies one of the identities in :mod:`confalg.operators`
equips the underlying module or algebra with new bilinear products.  This
module tabulates them and certifies their axioms:

* dendriform pairs ``(≻, ≺)`` from an O-operator, with the sum ``⋆ = ≻ + ≺``
  an associative product carried by the module;
* NS triples ``(≻, ≺, ∨)`` from a twisted Rota-Baxter operator or a
  Nijenhuis operator, with the sum ``× = ≻ + ≺ + ∨`` associative;
* the module product ``m ⋆ n = T(m)·n + m·T(n)`` (optionally corrected by a
  twisting 2-cochain) together with the induced actions of the module
  algebra back on the original algebra;
* left-symmetric products ``a ∘ b = a ≻ b − b ≺_{−λ−∂} a`` obtained from a
  dendriform pair;
* Nijenhuis-deformed products ``a ∘ᴺ b = N(a)b + aN(b) − N(ab)`` and
  brackets, their defect cochains, the hierarchy of identities satisfied by
  the powers of a Nijenhuis operator, and the formal one-parameter
  deformation they generate.

Every constructor validates its operator precondition and returns only
bundles whose axioms have been re-checked on all basis triples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Tuple

from .confcore import (
    D,
    WITNESS_CAP,
    ConfAlgebra,
    ConfBimodule,
    FreeModule,
    L1,
    L2,
    ModElem,
    MultiTable,
    Verdict,
    check_lie,
    eval_multilinear,
    matching_pair,
    residual_scan,
)
from .errors import (
    ConfalgError,
    NotDendriform,
    NotNijenhuis,
    NotOOperator,
    NotTwistedRB,
    ShapeMismatch,
)
from .operators import (
    ModuleMap,
    induced_left_value,
    induced_right_value,
    star_value,
    verify_operator,
)
from .polyring import Poly, PolyLike, as_poly

__all__ = [
    "BinaryOpTable",
    "StructureBundle",
    "check_structure",
    "dendriform_from_O",
    "m_ass",
    "induced_bimodule_on_A",
    "matching_pair_from_O",
    "ns_from_twisted",
    "ns_from_nijenhuis",
    "deformed_product",
    "nijenhuis_hierarchy",
    "HierarchyVerdict",
    "leftsym_from_dendriform",
    "deformed_bracket",
    "deformation_check",
    "DeformationVerdict",
]

TAGS = ("succ", "prec", "vee", "star", "circ", "bracket", "leftsym")

#: required table tags per structure kind
KIND_TAGS: Mapping[str, Tuple[str, ...]] = {
    "dendriform": ("succ", "prec"),
    "ns": ("succ", "prec", "vee"),
    "leftsym": ("leftsym",),
    "assoc": ("star",),
}

BinaryFn = Callable[[ModElem, ModElem, PolyLike], ModElem]


@dataclass(frozen=True)
class BinaryOpTable:
    """A single binary product on a module, stored as a structure-constant table."""

    module: FreeModule
    table: MultiTable
    tag: str

    def __post_init__(self) -> None:
        if self.tag not in TAGS:
            raise ShapeMismatch("unknown binary operation tag %r" % (self.tag,))
        if self.table.in_modules != (self.module, self.module) or (
            self.table.out_module != self.module
        ):
            raise ShapeMismatch(
                "binary operation table must map module x module -> module"
            )

    @classmethod
    def from_function(cls, module: FreeModule, fn: BinaryFn, tag: str) -> "BinaryOpTable":
        """Tabulate ``fn(x, y, λ)`` on basis pairs at the formal weight ``L1``."""
        entries = {}
        for i in range(module.rank):
            for j in range(module.rank):
                value = fn(module.basis_elem(i), module.basis_elem(j), L1)
                if not value.is_zero():
                    entries[(i, j)] = value
        table = MultiTable((module, module), module, entries)
        return cls(module, table, tag)

    def value(self, x: ModElem, y: ModElem, weight: PolyLike) -> ModElem:
        return eval_multilinear(self.table, (x, y), (weight,))

    def entry(self, i, j) -> ModElem:
        return self.table.entry((i, j))

    def with_tag(self, tag: str) -> "BinaryOpTable":
        return BinaryOpTable(self.module, self.table, tag)

    def as_algebra(self, flavor: str = "associative") -> ConfAlgebra:
        """View the table as a (candidate) conformal algebra; no axioms checked."""
        return ConfAlgebra(self.module, self.table, flavor)

    def __add__(self, other: "BinaryOpTable") -> "BinaryOpTable":
        if not isinstance(other, BinaryOpTable):
            return NotImplemented
        if other.module != self.module:
            raise ShapeMismatch("cannot add binary operations on different modules")
        return BinaryOpTable(self.module, self.table + other.table, "star")

    def is_zero(self) -> bool:
        return not self.table.entries


@dataclass(frozen=True)
class StructureBundle:
    """A named collection of binary products forming one algebraic structure.

    ``kind`` is one of ``dendriform`` (tables ``succ``, ``prec``), ``ns``
    (``succ``, ``prec``, ``vee``), ``leftsym`` (``leftsym``) or ``assoc``
    (``star``).  Construction checks only shapes; :func:`check_structure`
    certifies the axioms, and every constructor in this module does so
    before returning a bundle.
    """

    kind: str
    tables: Mapping[str, BinaryOpTable]

    def __post_init__(self) -> None:
        if self.kind not in KIND_TAGS:
            raise ShapeMismatch("unknown structure kind %r" % (self.kind,))
        required = KIND_TAGS[self.kind]
        if tuple(sorted(self.tables)) != tuple(sorted(required)):
            raise ShapeMismatch(
                "%s bundle needs tables %s, got %s"
                % (self.kind, sorted(required), sorted(self.tables))
            )
        modules = {op.module for op in self.tables.values()}
        if len(modules) != 1:
            raise ShapeMismatch("all tables of a bundle must share one module")
        object.__setattr__(self, "tables", dict(self.tables))
        for tag, op in self.tables.items():
            if op.tag != tag:
                raise ShapeMismatch("table under key %r is tagged %r" % (tag, op.tag))

    @property
    def module(self) -> FreeModule:
        return next(iter(self.tables.values())).module

    def table(self, tag: str) -> BinaryOpTable:
        return self.tables[tag]

    def sum_table(self) -> BinaryOpTable:
        """The total product (``⋆`` or ``×``) carried by the bundle."""
        if self.kind == "leftsym":
            raise ShapeMismatch("a left-symmetric bundle has no sum product")
        total = None
        for tag in KIND_TAGS[self.kind]:
            total = self.tables[tag] if total is None else total + self.tables[tag]
        return total.with_tag("star")


def _dendriform_items(succ: BinaryOpTable, prec: BinaryOpTable):
    module = succ.module
    for i, j, k in itertools.product(range(module.rank), repeat=3):
        names = (module.basis[i], module.basis[j], module.basis[k])
        a, b, c = (module.basis_elem(x) for x in (i, j, k))
        both = succ.value(a, b, L1) + prec.value(a, b, L1)
        res = succ.value(a, succ.value(b, c, L2), L1) - succ.value(both, c, L1 + L2)
        yield ("cd1",) + names, res
        both_bc = succ.value(b, c, L2) + prec.value(b, c, L2)
        res = prec.value(prec.value(a, b, L1), c, L1 + L2) - prec.value(a, both_bc, L1)
        yield ("cd2",) + names, res
        res = prec.value(succ.value(a, b, L1), c, L1 + L2) - succ.value(
            a, prec.value(b, c, L2), L1
        )
        yield ("cd3",) + names, res


def _ns_items(succ: BinaryOpTable, prec: BinaryOpTable, vee: BinaryOpTable):
    times = (succ + prec + vee).with_tag("star")
    module = succ.module
    for i, j, k in itertools.product(range(module.rank), repeat=3):
        names = (module.basis[i], module.basis[j], module.basis[k])
        x, y, z = (module.basis_elem(idx) for idx in (i, j, k))
        res = succ.value(x, succ.value(y, z, L2), L1) - succ.value(
            times.value(x, y, L1), z, L1 + L2
        )
        yield ("ns1",) + names, res
        res = prec.value(x, times.value(y, z, L2), L1) - prec.value(
            prec.value(x, y, L1), z, L1 + L2
        )
        yield ("ns2",) + names, res
        res = succ.value(x, prec.value(y, z, L2), L1) - prec.value(
            succ.value(x, y, L1), z, L1 + L2
        )
        yield ("ns3",) + names, res
        lhs = succ.value(x, vee.value(y, z, L2), L1) + vee.value(
            x, times.value(y, z, L2), L1
        )
        rhs = vee.value(times.value(x, y, L1), z, L1 + L2) + prec.value(
            vee.value(x, y, L1), z, L1 + L2
        )
        yield ("ns4",) + names, lhs - rhs


def _leftsym_items(circ: BinaryOpTable):
    module = circ.module

    def defect(x, y, wx, wy, c):
        return circ.value(circ.value(x, y, wx), c, wx + wy) - circ.value(
            x, circ.value(y, c, wy), wx
        )

    for i, j, k in itertools.product(range(module.rank), repeat=3):
        names = (module.basis[i], module.basis[j], module.basis[k])
        a, b, c = (module.basis_elem(x) for x in (i, j, k))
        yield names, defect(a, b, L1, L2, c) - defect(b, a, L2, L1, c)


def _assoc_items(star: BinaryOpTable):
    module = star.module
    for i, j, k in itertools.product(range(module.rank), repeat=3):
        names = (module.basis[i], module.basis[j], module.basis[k])
        a, b, c = (module.basis_elem(x) for x in (i, j, k))
        res = star.value(star.value(a, b, L1), c, L1 + L2) - star.value(
            a, star.value(b, c, L2), L1
        )
        yield names, res


def check_structure(bundle: StructureBundle, cap: int = WITNESS_CAP) -> Verdict:
    """Residuals of the axioms of ``bundle.kind`` on all basis triples."""
    if bundle.kind == "dendriform":
        items = _dendriform_items(bundle.table("succ"), bundle.table("prec"))
        return residual_scan("dendriform", items, cap=cap)
    if bundle.kind == "ns":
        items = _ns_items(bundle.table("succ"), bundle.table("prec"), bundle.table("vee"))
        return residual_scan("ns", items, cap=cap)
    if bundle.kind == "leftsym":
        return residual_scan("left-symmetric", _leftsym_items(bundle.table("leftsym")), cap=cap)
    return residual_scan("associative", _assoc_items(bundle.table("star")), cap=cap)


def _certify(bundle: StructureBundle, origin: str) -> StructureBundle:
    verdict = check_structure(bundle, cap=1)
    if not verdict.holds:
        raise ConfalgError(
            "%s produced a bundle violating its own axioms; %s"
            % (origin, verdict.summary())
        )
    return bundle


def dendriform_from_O(
    T: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule, cap: int = WITNESS_CAP
) -> StructureBundle:
    """Dendriform pair ``m ≻ n = T(m)·n``, ``m ≺ n = m·T(n)`` on the module."""
    verdict = verify_operator("O", T, alg, bim, cap=cap)
    if not verdict.holds:
        raise NotOOperator(verdict.summary())
    module = bim.module
    succ = BinaryOpTable.from_function(
        module, lambda m, n, w: bim.act_left(T.apply(m), n, w), "succ"
    )
    prec = BinaryOpTable.from_function(
        module, lambda m, n, w: bim.act_right(m, T.apply(n), w), "prec"
    )
    bundle = StructureBundle("dendriform", {"succ": succ, "prec": prec})
    return _certify(bundle, "dendriform_from_O")


def _verify_star_operator(
    T: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule, phi, origin: str
) -> None:
    if phi is None:
        verdict = verify_operator("O", T, alg, bim, cap=1)
        if not verdict.holds:
            raise NotOOperator("%s: %s" % (origin, verdict.summary()))
    else:
        verdict = verify_operator("TwistedRB", T, alg, bim, twist=phi, cap=1)
        if not verdict.holds:
            raise NotTwistedRB("%s: %s" % (origin, verdict.summary()))


def m_ass(
    T: ModuleMap,
    alg: ConfAlgebra,
    bim: ConfBimodule,
    phi=None,
    *,
    validate: bool = True,
) -> ConfAlgebra:
    """The associative product ``m ⋆ n = T(m)·n + m·T(n) [+ φ(T(m), T(n))]``.

    ``phi`` is an optional twisting 2-cochain on the algebra valued in the
    module; with it the product is the one carried by a twisted Rota-Baxter
    operator.  ``validate=False`` skips the operator precondition and
    returns the candidate product unverified.
    """

    def product(m: ModElem, n: ModElem, w: PolyLike) -> ModElem:
        out = star_value(T, bim, m, n, w)
        if phi is not None:
            out = out + phi.eval((T.apply(m), T.apply(n)), (w,))
        return out

    if validate:
        _verify_star_operator(T, alg, bim, phi, "m_ass")
    table = BinaryOpTable.from_function(bim.module, product, "star")
    return ConfAlgebra(bim.module, table.table, "associative")


def induced_bimodule_on_A(
    T: ModuleMap,
    alg: ConfAlgebra,
    bim: ConfBimodule,
    phi=None,
    *,
    validate: bool = True,
) -> ConfBimodule:
    """The original algebra as a bimodule over the module's ⋆-algebra.

    Actions ``m·a = T(m)a − T(m a [+ φ(T(m), a)])`` and
    ``a·m = a T(m) − T(a m [+ φ(a, T(m))])``; over the untwisted or twisted
    ⋆-product of :func:`m_ass` they satisfy the bimodule axioms.
    """
    if validate:
        _verify_star_operator(T, alg, bim, phi, "induced_bimodule_on_A")
    star_alg = m_ass(T, alg, bim, phi, validate=False)

    def left(m: ModElem, a: ModElem, w: PolyLike) -> ModElem:
        if phi is None:
            return induced_left_value(T, alg, bim, m, a, w)
        inner = bim.act_right(m, a, w) + phi.eval((T.apply(m), a), (w,))
        return alg.mul(T.apply(m), a, w) - T.apply(inner)

    def right(a: ModElem, m: ModElem, w: PolyLike) -> ModElem:
        if phi is None:
            return induced_right_value(T, alg, bim, a, m, w)
        inner = bim.act_left(a, m, w) + phi.eval((a, T.apply(m)), (w,))
        return alg.mul(a, T.apply(m), w) - T.apply(inner)

    def tabulate(fn, first: FreeModule, second: FreeModule):
        entries = {}
        for i in range(first.rank):
            for j in range(second.rank):
                value = fn(first.basis_elem(i), second.basis_elem(j), L1)
                if not value.is_zero():
                    entries[(i, j)] = value
        return entries

    return ConfBimodule.build(
        star_alg,
        alg.module,
        tabulate(left, bim.module, alg.module),
        tabulate(right, alg.module, bim.module),
    )


def matching_pair_from_O(
    T: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule, phi=None
) -> ConfAlgebra:
    """The matching-pair algebra of the original product and the ⋆-product."""
    star_alg = m_ass(T, alg, bim, phi)
    induced = induced_bimodule_on_A(T, alg, bim, phi, validate=False)
    return matching_pair(alg, star_alg, bim, induced)


def ns_from_twisted(
    T: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule, phi, cap: int = WITNESS_CAP
) -> StructureBundle:
    """NS triple ``m ≻ n = T(m)·n``, ``m ≺ n = m·T(n)``, ``m ∨ n = φ(T(m), T(n))``."""
    verdict = verify_operator("TwistedRB", T, alg, bim, twist=phi, cap=cap)
    if not verdict.holds:
        raise NotTwistedRB(verdict.summary())
    module = bim.module
    succ = BinaryOpTable.from_function(
        module, lambda m, n, w: bim.act_left(T.apply(m), n, w), "succ"
    )
    prec = BinaryOpTable.from_function(
        module, lambda m, n, w: bim.act_right(m, T.apply(n), w), "prec"
    )
    vee = BinaryOpTable.from_function(
        module, lambda m, n, w: phi.eval((T.apply(m), T.apply(n)), (w,)), "vee"
    )
    bundle = StructureBundle("ns", {"succ": succ, "prec": prec, "vee": vee})
    return _certify(bundle, "ns_from_twisted")


def ns_from_nijenhuis(N: ModuleMap, alg: ConfAlgebra, cap: int = WITNESS_CAP) -> StructureBundle:
    """NS triple ``a ≻ b = N(a)b``, ``a ≺ b = a N(b)``, ``a ∨ b = −N(ab)``."""
    verdict = verify_operator("Nijenhuis", N, alg, cap=cap)
    if not verdict.holds:
        raise NotNijenhuis(verdict.summary())
    module = alg.module
    succ = BinaryOpTable.from_function(
        module, lambda a, b, w: alg.mul(N.apply(a), b, w), "succ"
    )
    prec = BinaryOpTable.from_function(
        module, lambda a, b, w: alg.mul(a, N.apply(b), w), "prec"
    )
    vee = BinaryOpTable.from_function(
        module, lambda a, b, w: -N.apply(alg.mul(a, b, w)), "vee"
    )
    bundle = StructureBundle("ns", {"succ": succ, "prec": prec, "vee": vee})
    return _certify(bundle, "ns_from_nijenhuis")


def _deformed_value(N: ModuleMap, alg: ConfAlgebra, a: ModElem, b: ModElem, w: PolyLike) -> ModElem:
    return (
        alg.mul(N.apply(a), b, w)
        + alg.mul(a, N.apply(b), w)
        - N.apply(alg.mul(a, b, w))
    )


def deformed_product(N: ModuleMap, alg: ConfAlgebra):
    """The deformed product ``a ∘ᴺ b = N(a)b + aN(b) − N(ab)`` and its defect.

    Returns ``(candidate, phiN)`` where ``candidate`` is the (unchecked)
    conformal algebra carrying ``∘ᴺ`` and ``phiN`` is the arity-2 cochain
    ``φᴺ(a, b) = N(a)N(b) − N(a ∘ᴺ b)``.  The defect vanishes exactly when
    ``N`` is Nijenhuis, and ``∘ᴺ`` is associative exactly when ``φᴺ`` is a
    2-cocycle.
    """
    from .cohomology import Cochain

    if N.source != alg.module or N.target != alg.module:
        raise ShapeMismatch("deformed_product needs an endomorphism of the algebra")
    circ = BinaryOpTable.from_function(
        alg.module, lambda a, b, w: _deformed_value(N, alg, a, b, w), "circ"
    )
    candidate = ConfAlgebra(alg.module, circ.table, "associative")

    def defect(args, weights):
        (a, b), (w,) = args, weights
        return alg.mul(N.apply(a), N.apply(b), w) - N.apply(
            _deformed_value(N, alg, a, b, w)
        )

    phiN = Cochain.from_function(2, alg.module, alg.module, defect)
    return candidate, phiN


@dataclass(frozen=True)
class HierarchyVerdict:
    """Verdicts for the tower of identities satisfied by Nijenhuis powers."""

    power_pair: Verdict
    intertwine: Verdict
    relative: Verdict
    powers_nijenhuis: Verdict
    pairwise_compatible: Verdict

    @property
    def holds(self) -> bool:
        return all(
            v.holds
            for v in (
                self.power_pair,
                self.intertwine,
                self.relative,
                self.powers_nijenhuis,
                self.pairwise_compatible,
            )
        )

    def summary(self) -> str:
        parts = [
            "power-pair: " + self.power_pair.summary(),
            "intertwine: " + self.intertwine.summary(),
            "relative: " + self.relative.summary(),
            "powers-nijenhuis: " + self.powers_nijenhuis.summary(),
            "pairwise-compatible: " + self.pairwise_compatible.summary(),
        ]
        return "; ".join(parts)


def nijenhuis_hierarchy(
    N: ModuleMap, alg: ConfAlgebra, kmax: int = 3, cap: int = WITNESS_CAP
) -> HierarchyVerdict:
    """Verify the identities satisfied by the powers of a Nijenhuis operator.

    For all exponents up to ``kmax`` this checks, on every basis pair:

    * the power-pair identity
      ``Nʲ(a) Nᵏ(b) − Nᵏ(Nʲ(a) b) − Nʲ(a Nᵏ(b)) + Nʲ⁺ᵏ(ab) = 0``;
    * ``Nʳ`` intertwines the deformed products,
      ``Nʳ(a ∘^{Nᵏ⁺ʳ} b) = Nʳ(a) ∘^{Nᵏ} Nʳ(b)``;
    * the relative deformation identity: deforming ``∘^{Nⁱ}`` by ``Nᵏ``
      yields ``∘^{Nⁱ⁺ᵏ}``;
    * every power ``Nᵏ`` is Nijenhuis for every deformed product ``∘^{Nⁱ}``;
    * all powers are pairwise compatible Nijenhuis operators.
    """
    verdict = verify_operator("Nijenhuis", N, alg, cap=1)
    if not verdict.holds:
        raise NotNijenhuis(verdict.summary())
    module = alg.module
    powers = [ModuleMap.identity(module)]
    for _ in range(2 * kmax):
        powers.append(powers[-1].compose(N))
    circs = [
        BinaryOpTable.from_function(
            module, lambda a, b, w, P=powers[i]: _deformed_value(P, alg, a, b, w), "circ"
        )
        for i in range(2 * kmax + 1)
    ]

    def pair_names(i, j):
        return (module.basis[i], module.basis[j])

    def power_pair_items():
        for j, k in itertools.product(range(kmax + 1), repeat=2):
            for i1, i2 in itertools.product(range(module.rank), repeat=2):
                a, b = module.basis_elem(i1), module.basis_elem(i2)
                nja, nkb = powers[j].apply(a), powers[k].apply(b)
                res = alg.mul(nja, nkb, L1)
                res = res - powers[k].apply(alg.mul(nja, b, L1))
                res = res - powers[j].apply(alg.mul(a, nkb, L1))
                res = res + powers[j + k].apply(alg.mul(a, b, L1))
                yield ("j=%d,k=%d" % (j, k),) + pair_names(i1, i2), res

    def intertwine_items():
        for r, k in itertools.product(range(kmax + 1), repeat=2):
            for i1, i2 in itertools.product(range(module.rank), repeat=2):
                a, b = module.basis_elem(i1), module.basis_elem(i2)
                lhs = powers[r].apply(circs[k + r].value(a, b, L1))
                rhs = circs[k].value(powers[r].apply(a), powers[r].apply(b), L1)
                yield ("r=%d,k=%d" % (r, k),) + pair_names(i1, i2), lhs - rhs

    def relative_items():
        for i, k in itertools.product(range(kmax + 1), repeat=2):
            for i1, i2 in itertools.product(range(module.rank), repeat=2):
                a, b = module.basis_elem(i1), module.basis_elem(i2)
                lhs = circs[i].value(powers[k].apply(a), b, L1)
                lhs = lhs + circs[i].value(a, powers[k].apply(b), L1)
                lhs = lhs - powers[k].apply(circs[i].value(a, b, L1))
                yield ("i=%d,k=%d" % (i, k),) + pair_names(i1, i2), lhs - circs[
                    i + k
                ].value(a, b, L1)

    def powers_nijenhuis_items():
        for i, k in itertools.product(range(kmax + 1), repeat=2):
            circ_alg = ConfAlgebra(module, circs[i].table, "associative")
            inner = verify_operator("Nijenhuis", powers[k], circ_alg, cap=cap)
            for witness in inner.witnesses:
                yield ("i=%d,k=%d" % (i, k),) + witness[0], witness[1]

    def compatible_items():
        for j, k in itertools.product(range(kmax + 1), repeat=2):
            nj, nk = powers[j], powers[k]
            for i1, i2 in itertools.product(range(module.rank), repeat=2):
                a, b = module.basis_elem(i1), module.basis_elem(i2)
                lhs = alg.mul(nj.apply(a), nk.apply(b), L1) + alg.mul(
                    nk.apply(a), nj.apply(b), L1
                )
                rhs = nj.apply(circs[k].value(a, b, L1)) + nk.apply(
                    circs[j].value(a, b, L1)
                )
                yield ("j=%d,k=%d" % (j, k),) + pair_names(i1, i2), lhs - rhs

    return HierarchyVerdict(
        power_pair=residual_scan("hierarchy-power-pair", power_pair_items(), cap=cap),
        intertwine=residual_scan("hierarchy-intertwine", intertwine_items(), cap=cap),
        relative=residual_scan("hierarchy-relative", relative_items(), cap=cap),
        powers_nijenhuis=residual_scan(
            "hierarchy-powers-nijenhuis", powers_nijenhuis_items(), cap=cap
        ),
        pairwise_compatible=residual_scan(
            "hierarchy-pairwise-compatible", compatible_items(), cap=cap
        ),
    )


def leftsym_from_dendriform(bundle: StructureBundle, cap: int = WITNESS_CAP) -> StructureBundle:
    """The left-symmetric product ``a ∘ b = a ≻ b − b ≺_{−λ−∂} a``."""
    if bundle.kind != "dendriform":
        raise ShapeMismatch("leftsym_from_dendriform needs a dendriform bundle")
    verdict = check_structure(bundle, cap=1)
    if not verdict.holds:
        raise NotDendriform(verdict.summary())
    succ, prec = bundle.table("succ"), bundle.table("prec")
    module = bundle.module

    def circ(a: ModElem, b: ModElem, w: PolyLike) -> ModElem:
        return succ.value(a, b, w) - prec.value(b, a, -as_poly(w) - D)

    table = BinaryOpTable.from_function(module, circ, "leftsym")
    out = StructureBundle("leftsym", {"leftsym": table})
    return _certify(out, "leftsym_from_dendriform")


def deformed_bracket(
    N: ModuleMap, lie: ConfAlgebra, *, validate: bool = True, cap: int = WITNESS_CAP
) -> BinaryOpTable:
    """The deformed bracket ``[a b]ᴺ = [N(a) b] + [a N(b)] − N([a b])``.

    ``lie`` must carry a Lie table.  With ``validate`` the map is required
    to satisfy the Lie Nijenhuis identity, which makes the deformed bracket
    a Lie bracket again (re-checked before returning).
    """
    if lie.flavor != "lie":
        raise ShapeMismatch("deformed_bracket needs a Lie conformal algebra")
    if validate:
        verdict = verify_operator("NijenhuisLie", N, lie, cap=1)
        if not verdict.holds:
            raise NotNijenhuis(verdict.summary())
    table = BinaryOpTable.from_function(
        lie.module, lambda a, b, w: _deformed_value(N, lie, a, b, w), "bracket"
    )
    if validate:
        candidate = ConfAlgebra(lie.module, table.table, "lie")
        verdict = check_lie(candidate, cap=1)
        if not verdict.holds:
            raise ConfalgError(
                "deformed_bracket produced a non-Lie table; " + verdict.summary()
            )
    return table


@dataclass(frozen=True)
class DeformationVerdict:
    """Clause-by-clause verdict for the deformation generated by ``ω = ∘ᴺ``."""

    cocycle: Verdict
    generator_associative: Verdict
    homomorphism: Verdict
    obstruction: Verdict

    @property
    def holds(self) -> bool:
        return all(
            v.holds
            for v in (
                self.cocycle,
                self.generator_associative,
                self.homomorphism,
                self.obstruction,
            )
        )

    def summary(self) -> str:
        return "; ".join(
            [
                "cocycle: " + self.cocycle.summary(),
                "generator-assoc: " + self.generator_associative.summary(),
                "homomorphism: " + self.homomorphism.summary(),
                "obstruction: " + self.obstruction.summary(),
            ]
        )


def deformation_check(
    N: ModuleMap, alg: ConfAlgebra, *, validate: bool = True, cap: int = WITNESS_CAP
) -> DeformationVerdict:
    """Check that ``ω = ∘ᴺ`` generates a trivial formal deformation.

    The deformed family is ``a ∘ᵗ b = ab + t·ω(a, b)`` with ``t`` an
    auxiliary scalar parameter.  The verdict covers four clauses:

    * ``cocycle`` — ``𝐝ω = 0`` over the algebra acting on itself;
    * ``generator_associative`` — ``ω`` is itself an associative product;
    * ``homomorphism`` — ``T_t = id + t·N`` satisfies
      ``T_t(a ∘ᵗ b) = T_t(a) T_t(b)`` identically in ``t``;
    * ``obstruction`` — the quadratic coefficient condition
      ``N(ω(a, b)) = N(a) N(b)``.

    All four hold when ``N`` is Nijenhuis; the ``homomorphism`` clause fails
    at the ``t²`` coefficient exactly when ``obstruction`` does.
    """
    from .cohomology import Cochain, hochschild_d

    if validate:
        verdict = verify_operator("Nijenhuis", N, alg, cap=1)
        if not verdict.holds:
            raise NotNijenhuis(verdict.summary())
    module = alg.module
    omega = BinaryOpTable.from_function(
        module, lambda a, b, w: _deformed_value(N, alg, a, b, w), "circ"
    )

    omega_cochain = Cochain(2, module, module, omega.table)
    adjoint = ConfBimodule.adjoint(alg)
    d_omega = hochschild_d(omega_cochain, alg, adjoint)

    def cocycle_items():
        for idx in itertools.product(range(module.rank), repeat=3):
            names = tuple(module.basis[i] for i in idx)
            yield names, d_omega.entry(idx)

    generator = check_structure(
        StructureBundle("assoc", {"star": omega.with_tag("star")}), cap=cap
    )

    t = Poly.var("t")

    def t_map(x: ModElem) -> ModElem:
        return x + t * N.apply(x)

    def homomorphism_items():
        for i, j in itertools.product(range(module.rank), repeat=2):
            names = (module.basis[i], module.basis[j])
            a, b = module.basis_elem(i), module.basis_elem(j)
            deformed = alg.mul(a, b, L1) + t * omega.value(a, b, L1)
            lhs = t_map(deformed)
            rhs = alg.mul(t_map(a), t_map(b), L1)
            yield names, lhs - rhs

    def obstruction_items():
        for i, j in itertools.product(range(module.rank), repeat=2):
            names = (module.basis[i], module.basis[j])
            a, b = module.basis_elem(i), module.basis_elem(j)
            res = N.apply(omega.value(a, b, L1)) - alg.mul(N.apply(a), N.apply(b), L1)
            yield names, res

    return DeformationVerdict(
        cocycle=residual_scan("deformation-cocycle", cocycle_items(), cap=cap),
        generator_associative=generator,
        homomorphism=residual_scan("deformation-homomorphism", homomorphism_items(), cap=cap),
        obstruction=residual_scan("deformation-obstruction", obstruction_items(), cap=cap),
    )
