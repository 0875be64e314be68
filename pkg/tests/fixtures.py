"""Shared splittings, automorphisms, and pairs used across the test suite."""

from freevol.splittings import (
    AMALGAM,
    HNN,
    CyclicSplitting,
    MarkedPair,
    transform,
)
from freevol.words import Automorphism, Basis, invert, parse_word, power

B2 = Basis.standard(2)
B3 = Basis.standard(3)


def w2(text):
    return parse_word(text, B2)


def w3(text):
    return parse_word(text, B3)


def amalgam_over_c() -> CyclicSplitting:
    """F3 as an amalgam of <a, c> and <c, b> over the letter c."""
    return CyclicSplitting(
        kind=AMALGAM,
        ambient_basis=B3,
        relative_basis=(w3("a"), w3("c"), w3("b")),
        a_part=(1, 2),
        edge_word=(2,),
        b0_part=(3,),
    )


def amalgam_over_ab() -> CyclicSplitting:
    """F3 as an amalgam of <a, b> and <ab, c> over the product ab."""
    return CyclicSplitting(
        kind=AMALGAM,
        ambient_basis=B3,
        relative_basis=(w3("a"), w3("b"), w3("c")),
        a_part=(1, 2),
        edge_word=(1, 2),
        b0_part=(3,),
    )


def hnn_over_commutator() -> CyclicSplitting:
    """F3 as an HNN extension with stable letter c over the commutator [a, b]."""
    return CyclicSplitting(
        kind=HNN,
        ambient_basis=B3,
        relative_basis=(w3("a"), w3("b"), w3("c")),
        a_part=(1, 2),
        edge_word=(1, 2, -1, -2),
        stable_index=3,
    )


def cycling_automorphism() -> Automorphism:
    """The rank-3 automorphism a -> b -> c -> ab used by the worked examples."""
    return Automorphism(B3, (w3("b"), w3("c"), w3("ab")))


def pair_with_sixth_power() -> MarkedPair:
    """The amalgam over c marked against its pullback under the 6th power."""
    base = amalgam_over_c()
    phi6 = power(cycling_automorphism(), 6)
    return MarkedPair(base, transform(base, invert(phi6)))


def pair_with_single_step() -> MarkedPair:
    """The amalgam over c marked against its pullback under one application."""
    base = amalgam_over_c()
    return MarkedPair(base, transform(base, cycling_automorphism()))


def hnn_over_ab(relative_basis) -> CyclicSplitting:
    return CyclicSplitting(
        kind=HNN,
        ambient_basis=B3,
        relative_basis=relative_basis,
        a_part=(1, 2),
        edge_word=(1, 2),
        stable_index=3,
    )


def certified_filling_pair() -> MarkedPair:
    """Two HNN splittings over products of two letters that jointly fill F3."""
    first = hnn_over_ab((w3("a"), w3("b"), w3("c")))
    second = hnn_over_ab((w3("ac"), w3("bC"), w3("c")))
    return MarkedPair(first, second)


def mirror_filling_pair() -> MarkedPair:
    """A second filling HNN pair with the conjugators on the opposite sides."""
    first = hnn_over_ab((w3("a"), w3("b"), w3("c")))
    second = hnn_over_ab((w3("aC"), w3("bc"), w3("c")))
    return MarkedPair(first, second)
