"""Cochains, differentials, composition brackets, and Maurer-Cartan checks.

An ``n``-cochain on a conformal algebra is a multilinear, sesquilinear map
with ``n`` arguments and ``n − 1`` weight parameters, stored — like every
other map in this package — as a total table on basis tuples and evaluated
through :func:`confalg.confcore.eval_multilinear`.  On top of that single
representation this module provides:

* the Hochschild-style differential ``𝐝`` of a cochain valued in a
  bimodule, with ``𝐝∘𝐝 = 0`` exactly;
* cocycle tests (plain and commutative) used by twisted extensions;
* the composition product ``f ∘ g`` and the graded bracket
  ``[f, g] = f∘g − (−1)^{(m−1)(n−1)} g∘f`` on cochains of an algebra
  valued in itself, for which ``[θ, θ] = 0`` characterizes associativity
  of a binary table ``θ`` and ``[θ, f] = (−1)^{n−1}𝐝f``;
* horizontal lifts of module cochains into the semidirect-sum algebra, and
  the derived bracket ``[[f, g]] = (−1)^m [[θ̂, f̂], ĝ]`` computed both
  through the lifts and through its expanded direct formula (the two code
  paths are cross-checked against each other on every call);
* the Maurer-Cartan characterizations: a module map is an O-operator
  exactly when ``[[T, T]] = 0`` (equivalently, when its lift satisfies the
  same equation, or when its differential in the induced complex
  vanishes); perturbations ``T + T′`` of an O-operator are governed by
  ``[[T, T′]] + ½[[T′, T′]] = 0``; and twisted Rota-Baxter operators are
  characterized by the modified equation
  ``½[[T̂, T̂]] = −⅙[[[φ̂, T̂], T̂], T̂]``.

Weight bookkeeping in the bracket formulas follows one rule: when a
composition merges ``k`` consecutive arguments into one slot, that slot's
weight is the sum of the merged weights, and a last-slot composition drops
its weight (the output-∂ convention supplies it implicitly).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

from .confcore import (
    D,
    L1,
    WITNESS_CAP,
    ConfAlgebra,
    ConfBimodule,
    FreeModule,
    ModElem,
    MultiTable,
    Verdict,
    _embed,
    _sum_module,
    check_associative,
    eval_multilinear,
    residual_scan,
    semidirect,
)
from .errors import ArityMismatch, ConfalgError, NotCocycle, NotOOperator, ShapeMismatch
from .operators import ModuleMap, lift, verify_operator
from .derived import induced_bimodule_on_A, m_ass
from .polyring import Poly, PolyLike, as_poly, lam

__all__ = [
    "Cochain",
    "GradedElement",
    "eval_cochain",
    "multiplication_cochain",
    "hochschild_d",
    "o_complex_d",
    "is_cocycle",
    "is_commutative_cocycle",
    "g_circle",
    "g_bracket",
    "lift_cochain",
    "lift_twisting_cochain",
    "derived_bracket",
    "derived_bracket_direct",
    "derived_bracket_via_lifts",
    "derived_binary",
    "maurer_cartan_check",
    "MaurerCartanVerdict",
    "mc_perturbation_check",
    "PerturbationVerdict",
    "modified_mc_check",
    "ModifiedMCVerdict",
    "random_cochain",
]

CochainFn = Callable[[Sequence[ModElem], Sequence[Poly]], ModElem]


def _formal_weights(arity: int) -> Tuple[Poly, ...]:
    return tuple(Poly.var(lam(k)) for k in range(1, arity))


@dataclass(frozen=True)
class Cochain:
    """An ``arity``-linear sesquilinear map between free modules."""

    arity: int
    input_module: FreeModule
    value_module: FreeModule
    table: MultiTable

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ArityMismatch("cochains have arity at least 1")
        expected = (self.input_module,) * self.arity
        if self.table.in_modules != expected or self.table.out_module != self.value_module:
            raise ShapeMismatch(
                "cochain table must map input_module^%d -> value_module" % self.arity
            )

    @classmethod
    def from_entries(
        cls, arity: int, input_module: FreeModule, value_module: FreeModule, entries
    ) -> "Cochain":
        table = MultiTable((input_module,) * arity, value_module, entries)
        return cls(arity, input_module, value_module, table)

    @classmethod
    def from_function(
        cls, arity: int, input_module: FreeModule, value_module: FreeModule, fn: CochainFn
    ) -> "Cochain":
        """Tabulate ``fn`` on basis tuples at the formal weights ``L1, …``."""
        weights = _formal_weights(arity)
        entries = {}
        for idx in itertools.product(range(input_module.rank), repeat=arity):
            value = fn(tuple(input_module.basis_elem(i) for i in idx), weights)
            if not value.is_zero():
                entries[idx] = value
        return cls.from_entries(arity, input_module, value_module, entries)

    @classmethod
    def from_module_map(cls, T: ModuleMap) -> "Cochain":
        entries = {}
        for j in range(T.source.rank):
            value = T.apply(T.source.basis_elem(j))
            if not value.is_zero():
                entries[(j,)] = value
        return cls.from_entries(1, T.source, T.target, entries)

    @classmethod
    def zero(cls, arity: int, input_module: FreeModule, value_module: FreeModule) -> "Cochain":
        return cls.from_entries(arity, input_module, value_module, {})

    def eval(self, args: Sequence[ModElem], weights: Sequence[PolyLike]) -> ModElem:
        return eval_multilinear(self.table, args, weights)

    def entry(self, idx) -> ModElem:
        return self.table.entry(idx)

    def as_module_map(self) -> ModuleMap:
        """View an arity-1 cochain with ``D``-only entries as a module map."""
        if self.arity != 1:
            raise ArityMismatch("only arity-1 cochains are module maps")
        images = {
            self.input_module.basis[j]: self.table.entry((j,))
            for j in range(self.input_module.rank)
        }
        return ModuleMap.from_images(self.input_module, self.value_module, images)

    def is_zero(self) -> bool:
        return not self.table.entries

    def _require_same_shape(self, other: "Cochain") -> None:
        if (
            self.arity != other.arity
            or self.input_module != other.input_module
            or self.value_module != other.value_module
        ):
            raise ShapeMismatch("cochains of different shapes")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._require_same_shape(other)
        return Cochain(self.arity, self.input_module, self.value_module, self.table + other.table)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._require_same_shape(other)
        return Cochain(self.arity, self.input_module, self.value_module, self.table - other.table)

    def __neg__(self) -> "Cochain":
        return Cochain(self.arity, self.input_module, self.value_module, -self.table)

    def scale(self, factor: PolyLike) -> "Cochain":
        return Cochain(
            self.arity, self.input_module, self.value_module, self.table.scale(factor)
        )


@dataclass(frozen=True)
class GradedElement:
    """A cochain tagged with its degree (= arity) in the graded Lie algebra."""

    degree: int
    payload: Cochain

    def __post_init__(self) -> None:
        if self.degree != self.payload.arity:
            raise ArityMismatch("degree of a graded element must equal its arity")


CochainLike = Union[Cochain, GradedElement]


def _as_cochain(f: CochainLike) -> Cochain:
    return f.payload if isinstance(f, GradedElement) else f


def eval_cochain(phi: CochainLike, args: Sequence[ModElem], weights: Sequence[PolyLike]) -> ModElem:
    return _as_cochain(phi).eval(args, weights)


def multiplication_cochain(alg: ConfAlgebra) -> Cochain:
    """The λ-product of an algebra viewed as a 2-cochain valued in itself."""
    return Cochain(2, alg.module, alg.module, alg.table)


def _psum(weights: Sequence[PolyLike]) -> Poly:
    total = Poly.zero()
    for w in weights:
        total = total + as_poly(w)
    return total


def hochschild_d(phi: CochainLike, alg: ConfAlgebra, bim: ConfBimodule) -> Cochain:
    """The differential of a cochain on ``alg`` valued in the bimodule.

    ``(𝐝φ)(a₀, …, aₙ)`` acts by the leading left action of ``a₀`` on
    ``φ(a₁, …)``, the alternating-sign contractions that replace two
    neighbouring arguments by their product (merging their weights), and
    the trailing right action of ``φ(a₀, …, aₙ₋₁)`` on ``aₙ``.
    """
    f = _as_cochain(phi)
    if f.input_module != alg.module:
        raise ShapeMismatch("cochain arguments must live in the algebra")
    if f.value_module != bim.module:
        raise ShapeMismatch("cochain values must live in the bimodule")
    if bim.algebra.module != alg.module:
        raise ShapeMismatch("bimodule must be over the same algebra")
    n = f.arity

    def df(args: Sequence[ModElem], weights: Sequence[Poly]) -> ModElem:
        args = list(args)
        weights = [as_poly(w) for w in weights]
        out = bim.act_left(args[0], f.eval(args[1:], weights[1:]), weights[0])
        for i in range(1, n + 1):
            prod = alg.mul(args[i - 1], args[i], weights[i - 1])
            new_args = args[: i - 1] + [prod] + args[i + 1 :]
            if i < n:
                new_w = weights[: i - 1] + [weights[i - 1] + weights[i]] + weights[i + 1 :]
            else:
                new_w = weights[: n - 1]
            out = out + (-1) ** i * f.eval(new_args, new_w)
        out = out + (-1) ** (n + 1) * bim.act_right(
            f.eval(args[:n], weights[: n - 1]), args[n], _psum(weights)
        )
        return out

    return Cochain.from_function(n + 1, alg.module, bim.module, df)


def o_complex_d(phi: CochainLike, T: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule, twist=None) -> Cochain:
    """The differential of the complex attached to an O-operator candidate.

    This is :func:`hochschild_d` instantiated over the ⋆-product carried by
    the module and the induced actions on the algebra; no operator identity
    is assumed, so it can be applied to arbitrary maps.
    """
    star_alg = m_ass(T, alg, bim, twist, validate=False)
    induced = induced_bimodule_on_A(T, alg, bim, twist, validate=False)
    return hochschild_d(phi, star_alg, induced)


def is_cocycle(phi: CochainLike, alg: ConfAlgebra, bim: ConfBimodule, cap: int = WITNESS_CAP) -> Verdict:
    """Zero-test of ``𝐝φ`` for an arity-2 cochain."""
    f = _as_cochain(phi)
    if f.arity != 2:
        raise ArityMismatch("cocycle test expects an arity-2 cochain")
    d = hochschild_d(f, alg, bim)

    def items():
        for idx in itertools.product(range(alg.module.rank), repeat=3):
            names = tuple(alg.module.basis[i] for i in idx)
            yield names, d.entry(idx)

    return residual_scan("2-cocycle", items(), cap=cap)


def is_commutative_cocycle(
    phi: CochainLike, alg: ConfAlgebra, bim: ConfBimodule, cap: int = WITNESS_CAP
) -> Verdict:
    """Cocycle test plus the symmetry ``φ_λ(a, b) = φ_{−λ−∂}(b, a)``."""
    f = _as_cochain(phi)
    if f.arity != 2:
        raise ArityMismatch("cocycle test expects an arity-2 cochain")
    d = hochschild_d(f, alg, bim)

    def items():
        module = alg.module
        for idx in itertools.product(range(module.rank), repeat=3):
            names = tuple(module.basis[i] for i in idx)
            yield ("cocycle",) + names, d.entry(idx)
        for i, j in itertools.product(range(module.rank), repeat=2):
            a, b = module.basis_elem(i), module.basis_elem(j)
            res = f.eval((a, b), (L1,)) - f.eval((b, a), (-L1 - D,))
            yield ("commutative", module.basis[i], module.basis[j]), res

    return residual_scan("commutative-2-cocycle", items(), cap=cap)


def _require_self_valued(f: Cochain, g: Cochain) -> None:
    modules = {f.input_module, f.value_module, g.input_module, g.value_module}
    if len(modules) != 1:
        raise ShapeMismatch("composition needs cochains on one algebra valued in itself")


def _circle_fn(f: Cochain, g: Cochain) -> CochainFn:
    m, n = f.arity, g.arity

    def h(args: Sequence[ModElem], weights: Sequence[Poly]) -> ModElem:
        args = list(args)
        weights = [as_poly(w) for w in weights]
        out = f.value_module.zero()
        for i in range(1, m + 1):
            gv = g.eval(args[i - 1 : i + n - 1], weights[i - 1 : i + n - 2])
            f_args = args[: i - 1] + [gv] + args[i + n - 1 :]
            if i < m:
                merged = _psum(weights[i - 1 : i + n - 1])
                f_w = weights[: i - 1] + [merged] + weights[i + n - 1 :]
            else:
                f_w = weights[: m - 1]
            out = out + (-1) ** ((i - 1) * (n - 1)) * f.eval(f_args, f_w)
        return out

    return h


def _circle(f: Cochain, g: Cochain) -> Cochain:
    _require_self_valued(f, g)
    return Cochain.from_function(
        f.arity + g.arity - 1, f.input_module, f.value_module, _circle_fn(f, g)
    )


def _bracket(f: Cochain, g: Cochain) -> Cochain:
    sign = (-1) ** ((f.arity - 1) * (g.arity - 1))
    return _circle(f, g) - _circle(g, f).scale(sign)


def g_circle(f: CochainLike, g: CochainLike) -> GradedElement:
    """The composition product of two self-valued cochains."""
    result = _circle(_as_cochain(f), _as_cochain(g))
    return GradedElement(result.arity, result)


def g_bracket(f: CochainLike, g: CochainLike) -> GradedElement:
    """The graded bracket ``[f, g] = f∘g − (−1)^{(m−1)(n−1)} g∘f``."""
    result = _bracket(_as_cochain(f), _as_cochain(g))
    return GradedElement(result.arity, result)


def _hat_module(alg: ConfAlgebra, bim: ConfBimodule) -> FreeModule:
    return _sum_module(alg.module, bim.module, "a_", "m_")


def lift_cochain(f: CochainLike, alg: ConfAlgebra, bim: ConfBimodule) -> Cochain:
    """Horizontal lift of ``f: Mⁿ → A`` to the direct sum ``A ⊕ M``.

    The lift evaluates ``f`` on the module components and embeds the value
    in the algebra component; it vanishes whenever any argument has no
    module part.
    """
    f = _as_cochain(f)
    if f.input_module != bim.module or f.value_module != alg.module:
        raise ShapeMismatch("lift_cochain expects a cochain from the module to the algebra")
    big = _hat_module(alg, bim)
    ra = alg.module.rank
    entries = {}
    for idx, value in f.table.entries.items():
        entries[tuple(ra + i for i in idx)] = _embed(value, big, 0)
    return Cochain.from_entries(f.arity, big, big, entries)


def lift_twisting_cochain(phi: CochainLike, alg: ConfAlgebra, bim: ConfBimodule) -> Cochain:
    """Extend a 2-cochain ``φ: A² → M`` by zero to the direct sum ``A ⊕ M``."""
    f = _as_cochain(phi)
    if f.arity != 2:
        raise ArityMismatch("twisting cochains have arity 2")
    if f.input_module != alg.module or f.value_module != bim.module:
        raise ShapeMismatch("twisting cochain must map the algebra into the module")
    big = _hat_module(alg, bim)
    ra = alg.module.rank
    entries = {}
    for idx, value in f.table.entries.items():
        entries[idx] = _embed(value, big, ra)
    return Cochain.from_entries(2, big, big, entries)


def _require_module_cochain(f: Cochain, alg: ConfAlgebra, bim: ConfBimodule) -> None:
    if f.input_module != bim.module or f.value_module != alg.module:
        raise ShapeMismatch("derived bracket expects cochains from the module to the algebra")


def derived_bracket_direct(
    f: CochainLike, g: CochainLike, alg: ConfAlgebra, bim: ConfBimodule
) -> Cochain:
    """The derived bracket ``[[f, g]]`` by its expanded direct formula."""
    f, g = _as_cochain(f), _as_cochain(g)
    _require_module_cochain(f, alg, bim)
    _require_module_cochain(g, alg, bim)
    if bim.algebra.module != alg.module:
        raise ShapeMismatch("bimodule must be over the given algebra")
    m, n = f.arity, g.arity
    smn = (-1) ** (m * n)

    def h(args: Sequence[ModElem], weights: Sequence[Poly]) -> ModElem:
        args = list(args)
        weights = [as_poly(w) for w in weights]
        out = alg.mul(
            f.eval(args[:m], weights[: m - 1]),
            g.eval(args[m:], weights[m:]),
            _psum(weights[:m]),
        ) * smn
        out = out - alg.mul(
            g.eval(args[:n], weights[: n - 1]),
            f.eval(args[n:], weights[n:]),
            _psum(weights[:n]),
        )
        for i in range(1, m + 1):
            if i < m:
                f_w = weights[: i - 1] + [_psum(weights[i - 1 : i + n])] + weights[i + n :]
            else:
                f_w = weights[: m - 1]
            gv = g.eval(args[i - 1 : i + n - 1], weights[i - 1 : i + n - 2])
            comp = bim.act_left(gv, args[i + n - 1], _psum(weights[i - 1 : i + n - 1]))
            term = f.eval(args[: i - 1] + [comp] + args[i + n :], f_w)
            out = out + (-1) ** ((i - 1) * n) * term
            gv = g.eval(args[i : i + n], weights[i : i + n - 1])
            comp = bim.act_right(args[i - 1], gv, weights[i - 1])
            term = f.eval(args[: i - 1] + [comp] + args[i + n :], f_w)
            out = out - (-1) ** (i * n) * term
        for i in range(1, n + 1):
            if i < n:
                g_w = weights[: i - 1] + [_psum(weights[i - 1 : i + m])] + weights[i + m :]
            else:
                g_w = weights[: n - 1]
            fv = f.eval(args[i - 1 : i + m - 1], weights[i - 1 : i + m - 2])
            comp = bim.act_left(fv, args[i + m - 1], _psum(weights[i - 1 : i + m - 1]))
            term = g.eval(args[: i - 1] + [comp] + args[i + m :], g_w)
            out = out - smn * (-1) ** ((i - 1) * m) * term
            fv = f.eval(args[i : i + m], weights[i : i + m - 1])
            comp = bim.act_right(args[i - 1], fv, weights[i - 1])
            term = g.eval(args[: i - 1] + [comp] + args[i + m :], g_w)
            out = out + smn * (-1) ** (i * m) * term
        return out

    return Cochain.from_function(m + n, bim.module, alg.module, h)


def derived_bracket_via_lifts(
    f: CochainLike, g: CochainLike, alg: ConfAlgebra, bim: ConfBimodule
) -> Cochain:
    """``[[f, g]] = (−1)^m [[θ̂, f̂], ĝ]`` computed on the semidirect sum.

    The result of the double bracket is evaluated on lifted arguments; its
    module component must vanish (the lifted subspace is closed under the
    derived bracket) and the algebra component, scaled by ``(−1)^m``, is
    the bracket.
    """
    f, g = _as_cochain(f), _as_cochain(g)
    _require_module_cochain(f, alg, bim)
    _require_module_cochain(g, alg, bim)
    ambient = semidirect(alg, bim, validate=False)
    theta = multiplication_cochain(ambient)
    fh = lift_cochain(f, alg, bim)
    gh = lift_cochain(g, alg, bim)
    b2 = _bracket(_bracket(theta, fh), gh)
    m, n = f.arity, g.arity
    ra = alg.module.rank
    sign = (-1) ** m
    entries = {}
    for idx in itertools.product(range(bim.module.rank), repeat=m + n):
        value = b2.entry(tuple(ra + i for i in idx))
        if any(not c.is_zero() for c in value.coeffs[ra:]):
            raise ConfalgError("derived bracket left the lifted subspace")
        coeffs = tuple(sign * c for c in value.coeffs[:ra])
        elem = ModElem(alg.module, coeffs)
        if not elem.is_zero():
            entries[idx] = elem
    return Cochain.from_entries(m + n, bim.module, alg.module, entries)


def derived_bracket(
    f: CochainLike, g: CochainLike, alg: ConfAlgebra, bim: ConfBimodule
) -> Cochain:
    """The derived bracket, computed along both code paths and cross-checked."""
    direct = derived_bracket_direct(f, g, alg, bim)
    lifted = derived_bracket_via_lifts(f, g, alg, bim)
    if direct != lifted:
        raise ConfalgError(
            "derived bracket: direct formula and lifted computation disagree"
        )
    return direct


def derived_binary(T1: ModuleMap, T2: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule) -> Cochain:
    """Closed form of ``[[T₁, T₂]]`` for two module maps.

    ``[[T₁,T₂]](u, v) = T₁(T₂(u)v + u T₂(v)) + T₂(T₁(u)v + u T₁(v))
    − T₁(u) T₂(v) − T₂(u) T₁(v)`` with the bimodule actions inside and the
    algebra product outside.
    """

    def h(args: Sequence[ModElem], weights: Sequence[Poly]) -> ModElem:
        (u, v), (w,) = args, weights
        t1u, t1v = T1.apply(u), T1.apply(v)
        t2u, t2v = T2.apply(u), T2.apply(v)
        out = T1.apply(bim.act_left(t2u, v, w) + bim.act_right(u, t2v, w))
        out = out + T2.apply(bim.act_left(t1u, v, w) + bim.act_right(u, t1v, w))
        out = out - alg.mul(t1u, t2v, w)
        out = out - alg.mul(t2u, t1v, w)
        return out

    return Cochain.from_function(2, bim.module, alg.module, h)


def _expected_hat_components(
    T: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule
) -> MultiTable:
    from .operators import induced_left_value, induced_right_value, star_value

    big = _hat_module(alg, bim)
    ra, rm = alg.module.rank, bim.module.rank
    entries = {}
    for i in range(ra):
        for u in range(rm):
            a, mu = alg.module.basis_elem(i), bim.module.basis_elem(u)
            right = induced_right_value(T, alg, bim, a, mu, L1)
            if not right.is_zero():
                entries[(i, ra + u)] = _embed(right, big, 0)
            left = induced_left_value(T, alg, bim, mu, a, L1)
            if not left.is_zero():
                entries[(ra + u, i)] = _embed(left, big, 0)
    for u in range(rm):
        for v in range(rm):
            star = star_value(T, bim, bim.module.basis_elem(u), bim.module.basis_elem(v), L1)
            if not star.is_zero():
                entries[(ra + u, ra + v)] = _embed(star, big, ra)
    return MultiTable((big, big), big, entries)


@dataclass(frozen=True)
class MaurerCartanVerdict:
    """Agreement report for the equivalent characterizations of O-operators.

    ``is_O`` is the structure-constant identity; the next three flags are
    the vanishing of the derived bracket ``[[T, T]]`` (direct formula), of
    its lift-based computation, and of the differential ``𝐝T`` in the
    induced complex.  The theorem says all four agree; ``consistent``
    records that they did.  When the map is an O-operator, the bracket
    ``[θ̂, T̂]`` on the semidirect sum is itself an associative product
    whose components are the induced actions and the ⋆-product; the two
    ``hat_*`` fields report those checks (``None`` when not applicable).
    """

    is_O: bool
    derived_bracket_zero: bool
    lifted_bracket_zero: bool
    differential_zero: bool
    hat_bracket_associative: Optional[bool]
    hat_components_match: Optional[bool]

    @property
    def consistent(self) -> bool:
        flags = (self.derived_bracket_zero, self.lifted_bracket_zero, self.differential_zero)
        if any(flag != self.is_O for flag in flags):
            return False
        if self.is_O:
            return bool(self.hat_bracket_associative) and bool(self.hat_components_match)
        return True

    @property
    def holds(self) -> bool:
        return self.consistent

    def summary(self) -> str:
        return (
            "is_O=%s derived_bracket_zero=%s lifted_bracket_zero=%s "
            "differential_zero=%s hat_bracket_associative=%s "
            "hat_components_match=%s consistent=%s"
            % (
                self.is_O,
                self.derived_bracket_zero,
                self.lifted_bracket_zero,
                self.differential_zero,
                self.hat_bracket_associative,
                self.hat_components_match,
                self.consistent,
            )
        )


def maurer_cartan_check(T: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule) -> MaurerCartanVerdict:
    """Check the Maurer-Cartan characterizations of an O-operator candidate."""
    tc = Cochain.from_module_map(T)
    is_O = verify_operator("O", T, alg, bim, cap=1).holds
    derived_zero = derived_bracket_direct(tc, tc, alg, bim).is_zero()
    lifted_zero = derived_bracket_via_lifts(tc, tc, alg, bim).is_zero()
    differential_zero = o_complex_d(tc, T, alg, bim).is_zero()
    hat_assoc: Optional[bool] = None
    hat_match: Optional[bool] = None
    if is_O:
        ambient = semidirect(alg, bim, validate=False)
        theta = multiplication_cochain(ambient)
        that = Cochain.from_module_map(lift(T, alg, bim))
        hat = _bracket(theta, that)
        hat_alg = ConfAlgebra(ambient.module, hat.table, "associative")
        hat_assoc = check_associative(hat_alg, cap=1).holds
        hat_match = hat.table == _expected_hat_components(T, alg, bim)
    return MaurerCartanVerdict(
        is_O=is_O,
        derived_bracket_zero=derived_zero,
        lifted_bracket_zero=lifted_zero,
        differential_zero=differential_zero,
        hat_bracket_associative=hat_assoc,
        hat_components_match=hat_match,
    )


@dataclass(frozen=True)
class PerturbationVerdict:
    """Report for the Maurer-Cartan perturbation equation.

    ``sum_is_O`` states whether ``T + T′`` satisfies the O-operator
    identity; ``mc_zero`` whether ``[[T, T′]] + ½[[T′, T′]] = 0``; the
    theorem makes them equivalent.  ``differential_relation`` confirms
    ``[[T, f]] = −𝐝f`` for the arity-1 perturbation in the complex induced
    by ``T``.
    """

    sum_is_O: bool
    mc_zero: bool
    differential_relation: bool

    @property
    def consistent(self) -> bool:
        return self.sum_is_O == self.mc_zero and self.differential_relation

    @property
    def holds(self) -> bool:
        return self.consistent

    def summary(self) -> str:
        return "sum_is_O=%s mc_zero=%s differential_relation=%s consistent=%s" % (
            self.sum_is_O,
            self.mc_zero,
            self.differential_relation,
            self.consistent,
        )


def mc_perturbation_check(
    T: ModuleMap, T2: ModuleMap, alg: ConfAlgebra, bim: ConfBimodule
) -> PerturbationVerdict:
    """Decide whether perturbing an O-operator by ``T2`` stays an O-operator."""
    base = verify_operator("O", T, alg, bim, cap=1)
    if not base.holds:
        raise NotOOperator("mc_perturbation_check: " + base.summary())
    tc = Cochain.from_module_map(T)
    t2c = Cochain.from_module_map(T2)
    cross = derived_bracket(tc, t2c, alg, bim)
    square = derived_bracket(t2c, t2c, alg, bim)
    mc = cross + square.scale(Fraction(1, 2))
    sum_is_O = verify_operator("O", T + T2, alg, bim, cap=1).holds
    relation = cross == -o_complex_d(t2c, T, alg, bim)
    return PerturbationVerdict(
        sum_is_O=sum_is_O, mc_zero=mc.is_zero(), differential_relation=relation
    )


@dataclass(frozen=True)
class ModifiedMCVerdict:
    """Report for the modified Maurer-Cartan equation of a twisted operator.

    ``is_twisted_rb`` is the structure-constant identity with the twisting
    cochain; ``bracket_identity`` states that ``−½·[[θ̂, T̂], T̂]`` equals
    ``⅙·[[[φ̂, T̂], T̂], T̂]`` on the semidirect sum, which is the modified
    Maurer-Cartan equation for the lifted operator.
    """

    is_twisted_rb: bool
    bracket_identity: bool

    @property
    def consistent(self) -> bool:
        return self.is_twisted_rb == self.bracket_identity

    @property
    def holds(self) -> bool:
        return self.consistent

    def summary(self) -> str:
        return "is_twisted_rb=%s bracket_identity=%s consistent=%s" % (
            self.is_twisted_rb,
            self.bracket_identity,
            self.consistent,
        )


def modified_mc_check(
    T: ModuleMap, phi: CochainLike, alg: ConfAlgebra, bim: ConfBimodule
) -> ModifiedMCVerdict:
    """Check the bracket form of the twisted Rota-Baxter identity."""
    f = _as_cochain(phi)
    cocycle = is_cocycle(f, alg, bim, cap=1)
    if not cocycle.holds:
        raise NotCocycle("modified_mc_check: " + cocycle.summary())
    is_twisted = verify_operator("TwistedRB", T, alg, bim, twist=f, cap=1).holds
    ambient = semidirect(alg, bim, validate=False)
    theta = multiplication_cochain(ambient)
    that = Cochain.from_module_map(lift(T, alg, bim))
    lhs = _bracket(_bracket(theta, that), that).scale(Fraction(-1, 2))
    phi_hat = lift_twisting_cochain(f, alg, bim)
    rhs = _bracket(_bracket(_bracket(phi_hat, that), that), that).scale(Fraction(1, 6))
    return ModifiedMCVerdict(is_twisted_rb=is_twisted, bracket_identity=lhs == rhs)


def random_cochain(
    rng: Union[random.Random, int],
    arity: int,
    input_module: FreeModule,
    value_module: FreeModule,
    max_degree: int = 2,
    density: float = 0.7,
) -> Cochain:
    """A random cochain with small integer coefficients.

    Entries are polynomials in ``D`` and the formal weights with
    per-variable degree at most ``max_degree``; each table component is
    nonzero with probability ``density``.  Passing an ``int`` seeds a fresh
    generator, so suites are reproducible.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    variables = ["D"] + [lam(k) for k in range(1, arity)]

    def rand_poly() -> Poly:
        total = Poly.zero()
        for _ in range(rng.randint(1, 2)):
            term = as_poly(rng.choice([-3, -2, -1, 1, 2, 3]))
            for name in variables:
                exp = rng.randint(0, max_degree)
                if exp:
                    term = term * Poly.var(name, exp)
            total = total + term
        return total

    entries = {}
    for idx in itertools.product(range(input_module.rank), repeat=arity):
        coeffs = [
            rand_poly() if rng.random() < density else Poly.zero()
            for _ in range(value_module.rank)
        ]
        elem = ModElem(value_module, tuple(coeffs))
        if not elem.is_zero():
            entries[idx] = elem
    return Cochain.from_entries(arity, input_module, value_module, entries)
