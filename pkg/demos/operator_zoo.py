"""A tour of the operator checkers on two small conformal algebras.

Everything happens over two rank-2 current algebras:

* the dual numbers ``u·u = u, u·v = v·u = v, v·v = 0``, and
* the nilpotent square ``a·a = b`` (all other products zero).

We verify one example of every supported operator kind, then break one of
them on purpose to show how witnesses are reported.  All arithmetic is exact,
so every "holds" below is a proof over the basis, not a numerical check.

Run with:  python3 demos/operator_zoo.py
"""

from __future__ import annotations

from confalg.confcore import ConfBimodule, cur
from confalg.operators import KINDS, ModuleMap, reynolds_from_derivation, verify_operator
from confalg.polyring import Poly

D = Poly.var("D")

# -- the two stages -----------------------------------------------------------

DUAL = cur(("u", "v"), {("u", "u"): (1, 0), ("u", "v"): (0, 1), ("v", "u"): (0, 1)})
ADJ = ConfBimodule.adjoint(DUAL)
u, v = DUAL.module.basis_elem(0), DUAL.module.basis_elem(1)

NILP = cur(("a", "b"), {("a", "a"): (0, 1)})
NADJ = ConfBimodule.adjoint(NILP)
a, b = NILP.module.basis_elem(0), NILP.module.basis_elem(1)


def show(label: str, verdict) -> None:
    mark = "ok " if verdict.holds else "FAIL"
    print(f"  [{mark}] {label}: {verdict.summary()}")


def main() -> int:
    print("supported operator kinds:", ", ".join(KINDS))

    print("\n-- O-operators and Rota-Baxter operators ------------------------")
    # The shift u -> v, v -> 0 absorbs one factor of the product.
    shift = ModuleMap.from_images(DUAL.module, DUAL.module, {"u": v, "v": DUAL.module.zero()})
    show("shift is an O-operator on the adjoint module", verify_operator("O", shift, DUAL, ADJ))
    show("shift is Rota-Baxter of weight 0", verify_operator("RotaBaxter", shift, DUAL, weight=0))
    # On the nilpotent algebra the derivation a -> b is Rota-Baxter of *every*
    # weight, because all products of images vanish; q stays symbolic.
    der = ModuleMap.from_images(NILP.module, NILP.module, {"a": b, "b": NILP.module.zero()})
    show(
        "a->b is Rota-Baxter of symbolic weight q",
        verify_operator("RotaBaxter", der, NILP, weight=Poly.var("q")),
    )

    print("\n-- twisted Rota-Baxter operators --------------------------------")
    # Twisting by the negated multiplication makes the identity map a
    # twisted Rota-Baxter operator on any associative conformal algebra.
    from confalg.cohomology import multiplication_cochain

    neg_mult = multiplication_cochain(DUAL).scale(-1)
    ident = ModuleMap.identity(DUAL.module)
    show(
        "id is Rota-Baxter twisted by -multiplication",
        verify_operator("TwistedRB", ident, DUAL, ADJ, twist=neg_mult),
    )

    print("\n-- Nijenhuis, Reynolds, derivations ------------------------------")
    show("shift is Nijenhuis on the dual numbers", verify_operator("Nijenhuis", shift, DUAL))
    show("a->b is a derivation of the nilpotent algebra", verify_operator("Derivation", der, NILP))
    # R = id - d inverts id + d here because d^2 = 0; the geometric series
    # construction finds that closed form and certifies it as Reynolds.
    R = reynolds_from_derivation(der, NILP, bound=4)
    print("     id - d sends a ->", R.apply(a), "and b ->", R.apply(b))
    show("id - d is a Reynolds operator", verify_operator("Reynolds", R, NILP))

    print("\n-- the Lie side ---------------------------------------------------")
    # Every checker has a Lie sibling that works on the commutator bracket.
    from confalg.confcore import commutator_lie, rep_from_bimodule

    lie = commutator_lie(DUAL)
    rep = rep_from_bimodule(DUAL, ADJ)
    show("shift is an O-operator for the commutator bracket",
         verify_operator("OLie", shift, lie, rep=rep))
    show("shift is Lie-Nijenhuis", verify_operator("NijenhuisLie", shift, lie))

    print("\n-- breaking things on purpose ------------------------------------")
    # Swap u <-> v is not an O-operator: the residual survives on (u, u).
    swap = ModuleMap.from_images(DUAL.module, DUAL.module, {"u": v, "v": u})
    bad = verify_operator("O", swap, DUAL, ADJ)
    show("the swap map pretending to be an O-operator", bad)
    for names, residual in bad.witnesses:
        print("       witness", names, "residual", residual)

    # A mutated product table loses associativity and names its own witnesses.
    mutant = cur(("u", "v"), {("u", "u"): (0, 1), ("u", "v"): (0, 1), ("v", "u"): (0, 1)})
    from confalg.confcore import check_associative

    show("mutated table u·u = v instead of u", check_associative(mutant))

    print("\nall expected verdicts reached (failures above were intentional)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
