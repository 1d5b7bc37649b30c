"""Two-bridge knots b(alpha, beta): Schubert presentation and dihedral covers.

Generators ``a`` (0) and ``b`` (1) are the two bridge meridians.  The group
is ``<a, b | a w = w b>`` with ``w = b^e1 a^e2 ... a^e(alpha-1)`` and
``e_i = (-1)^floor(i beta / alpha)``, computed from the odd representative
of ``beta`` mod ``alpha`` (for even ``beta`` that is ``beta - alpha``).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .fpgroup import (
    CosetTable,
    DihedralElement,
    HomologySummary,
    Presentation,
    Word,
    abelianization,
    coset_table_from_hom,
    dehn_filled_homology,
    evaluate,
    exponent_sums,
    free_reduce,
    generated_subgroup,
    inverse,
    power,
    presentation,
)

A, B = 1, 2


class LongitudeError(RuntimeError):
    pass


class RepresentationNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class TwoBridgePair:
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha < 3 or self.alpha % 2 == 0:
            raise ValueError(f"alpha = {self.alpha} must be odd and >= 3 (even alpha is a link)")
        if not 0 < self.beta < self.alpha:
            raise ValueError(f"beta = {self.beta} must satisfy 0 < beta < alpha")
        if gcd(self.alpha, self.beta) != 1:
            raise ValueError(f"gcd({self.alpha}, {self.beta}) != 1")

    @property
    def is_hyperbolic(self) -> bool:
        return self.alpha >= 5 and not self.is_torus_knot

    @property
    def is_torus_knot(self) -> bool:
        """b(alpha, +-1) is the (2, alpha) torus knot."""
        return self.beta in (1, self.alpha - 1)

    @property
    def odd_beta(self) -> int:
        return self.beta if self.beta % 2 else self.beta - self.alpha

    def signs(self) -> list[int]:
        bo = self.odd_beta
        return [1 if (i * bo) // self.alpha % 2 == 0 else -1 for i in range(1, self.alpha)]


def schubert_word(k: TwoBridgePair) -> Word:
    return tuple((B if i % 2 == 0 else A) * e for i, e in enumerate(k.signs()))


def schubert_presentation(k: TwoBridgePair) -> tuple[Presentation, Word]:
    w = schubert_word(k)
    return presentation(2, [(A,) + w + (-B,) + inverse(w)]), (A,)


def dihedral_rep(k: TwoBridgePair) -> tuple[DihedralElement, DihedralElement]:
    """Send ``a`` to the flip and ``b`` to the first reflection that kills the relator."""
    pres, _ = schubert_presentation(k)
    n = k.alpha
    one = DihedralElement(n, 0, False)
    for c in range(1, n):
        images = (DihedralElement(n, 0, True), DihedralElement(n, c, True))
        if all(evaluate(r, images, one) == one for r in pres.relators):
            if len(generated_subgroup(images)) != 2 * n:
                continue
            return images
    raise RepresentationNotFound(f"no surjection onto D_{2 * n} for {k}")


def longitude_word(k: TwoBridgePair) -> Word:
    """Longitude commuting with ``a``: ``w wbar a^(-2 sigma)``.

    ``wbar`` is ``w`` spelled backwards and ``sigma`` the sum of the signs.
    The word is checked against its homological and dihedral contract
    before being returned.
    """
    w = schubert_word(k)
    sigma = sum(k.signs())
    L = free_reduce(w + tuple(reversed(w)) + power((A,), -2 * sigma))
    pres, m = schubert_presentation(k)
    images = dihedral_rep(k)
    one = images[0] * images[0]
    if sum(exponent_sums(L, 2)) != 0:
        raise LongitudeError("longitude has nonzero exponent sum")
    if evaluate(L, images, one) != one:
        raise LongitudeError("longitude has nontrivial dihedral image")
    if abelianization(presentation(2, pres.relators + (L,))).betti != 1:
        raise LongitudeError("0-surgery does not have b1 = 1")
    if abelianization(presentation(2, pres.relators + (m,))) != HomologySummary(0, ()):
        raise LongitudeError("meridian filling does not kill H1")
    return L


@dataclass(frozen=True)
class KnotData:
    pair: TwoBridgePair
    presentation: Presentation
    meridian: Word
    longitude: Word
    images: tuple[DihedralElement, DihedralElement]


def build_knot(k: TwoBridgePair) -> KnotData:
    pres, m = schubert_presentation(k)
    return KnotData(k, pres, m, longitude_word(k), dihedral_rep(k))


def irregular_cover(k: TwoBridgePair, knot: KnotData | None = None) -> CosetTable:
    """alpha-fold cover: cosets of the reflection subgroup generated by the image of ``a``."""
    knot = knot or build_knot(k)
    one = DihedralElement(k.alpha, 0, False)
    return coset_table_from_hom(knot.presentation, knot.images, [one, knot.images[0]])


def regular_cover(k: TwoBridgePair, knot: KnotData | None = None) -> CosetTable:
    """2 alpha-fold cover from the kernel of the dihedral representation."""
    knot = knot or build_knot(k)
    return coset_table_from_hom(knot.presentation, knot.images, [])


@dataclass(frozen=True)
class _Z2:
    """Z/2 as a multiplicative group, for the exponent-sum-mod-2 cover."""

    odd: bool

    def __mul__(self, other):
        return _Z2(self.odd != other.odd)

    def inverse(self):
        return self


def branched_double_cover_h1(k: TwoBridgePair, knot: KnotData | None = None) -> HomologySummary:
    """H_1 of the double branched cover: fill the double cover along the lifted meridian."""
    knot = knot or build_knot(k)
    table = coset_table_from_hom(knot.presentation, [_Z2(True), _Z2(True)], [])
    return dehn_filled_homology(knot.presentation, table, knot.meridian, knot.longitude, axis=0)
