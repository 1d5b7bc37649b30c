from collections import Counter
from itertools import permutations
from math import gcd

import pytest

from slopecert.exactlin import Permutation
from slopecert.fpgroup import (
    DihedralElement,
    HomologySummary,
    abelianization,
    evaluate,
    exponent_sums,
    generated_subgroup,
    peripheral_tori,
    presentation,
    schreier_transversal,
)
from slopecert.twobridge import (
    A,
    B,
    TwoBridgePair,
    branched_double_cover_h1,
    build_knot,
    dihedral_rep,
    irregular_cover,
    longitude_word,
    regular_cover,
    schubert_presentation,
    schubert_word,
)

PAIRS = [(a, b) for a in range(5, 14, 2) for b in range(1, a) if gcd(a, b) == 1]


def tori_of(k, table_fn):
    knot = build_knot(k)
    t = table_fn(k, knot)
    return t, peripheral_tori(t, schreier_transversal(t), knot.meridian, knot.longitude)


@pytest.mark.parametrize("alpha, beta", [(4, 1), (6, 5), (9, 3), (5, 0), (5, 5), (1, 1)])
def test_invalid_pairs(alpha, beta):
    with pytest.raises(ValueError):
        TwoBridgePair(alpha, beta)


def test_flags():
    assert not TwoBridgePair(3, 1).is_hyperbolic
    assert TwoBridgePair(5, 1).is_torus_knot and not TwoBridgePair(5, 1).is_hyperbolic
    assert TwoBridgePair(5, 3).is_hyperbolic


@pytest.mark.parametrize("alpha, beta, signs", [
    (5, 3, [1, -1, -1, 1]),
    (3, 1, [1, 1]),
    (7, 3, [1, 1, -1, -1, 1, 1]),
])
def test_sign_sequences(alpha, beta, signs):
    assert TwoBridgePair(alpha, beta).signs() == signs


def test_schubert_word_shape():
    w = schubert_word(TwoBridgePair(5, 3))
    assert w == (B, -A, -B, A)


@pytest.mark.parametrize("alpha, beta", PAIRS + [(3, 1), (3, 2)])
def test_knot_group_abelianizes_to_z(alpha, beta):
    k = TwoBridgePair(alpha, beta)
    pres, m = schubert_presentation(k)
    assert pres.ngens == 2 and len(pres.relators) == 1
    assert abelianization(pres) == HomologySummary(1, ())
    assert abelianization(presentation(2, pres.relators + (m,))) == HomologySummary(0, ())


@pytest.mark.parametrize("alpha, beta", [(5, 3), (7, 3)] + PAIRS[::3])
def test_dihedral_rep(alpha, beta):
    k = TwoBridgePair(alpha, beta)
    a, b = dihedral_rep(k)
    assert a == DihedralElement(alpha, 0, True) and b.flip
    assert len(generated_subgroup([a, b])) == 2 * alpha
    assert (a * a).is_identity
    one = DihedralElement(alpha, 0, False)
    pres, _ = schubert_presentation(k)
    # smallest valid reflection index
    for c in range(1, b.rotation):
        bad = (a, DihedralElement(alpha, c, True))
        assert evaluate(pres.relators[0], bad, one) != one or len(generated_subgroup(bad)) < 2 * alpha


@pytest.mark.parametrize("alpha, beta", PAIRS + [(3, 1)])
def test_longitude_contract(alpha, beta):
    k = TwoBridgePair(alpha, beta)
    L = longitude_word(k)
    pres, m = schubert_presentation(k)
    assert sum(exponent_sums(L, 2)) == 0
    images = dihedral_rep(k)
    assert evaluate(L, images, DihedralElement(alpha, 0, False)).is_identity
    assert abelianization(presentation(2, pres.relators + (L,))).betti == 1
    assert abelianization(presentation(2, pres.relators + (m,))) == HomologySummary(0, ())


S5 = [Permutation(p) for p in permutations(range(5))]


def homs(k, group):
    """All (a, b) in ``group`` with conjugate images satisfying the relator."""
    pres, _ = schubert_presentation(k)
    r = pres.relators[0]
    ident = group[0] * group[0].inverse()
    out = []
    by_type = {}
    for g in group:
        by_type.setdefault(tuple(sorted(len(c) for c in g.cycles())), []).append(g)
    for cls in by_type.values():
        for a in cls:
            for b in cls:
                if evaluate(r, (a, b), ident) == ident:
                    out.append((a, b))
    return out


@pytest.mark.parametrize("alpha, beta", [(5, 3), (7, 3), (7, 2), (9, 4), (11, 3)])
def test_longitude_commutes_with_meridian_in_s5(alpha, beta):
    k = TwoBridgePair(alpha, beta)
    L = longitude_word(k)
    nonabelian = 0
    for a, b in homs(k, S5):
        ident = a * a.inverse()
        l_img = evaluate(L, (a, b), ident)
        assert a * l_img == l_img * a
        nonabelian += a != b
    assert nonabelian > 0


def hom_count(alpha, beta):
    return len(homs(TwoBridgePair(alpha, beta), S5))


@pytest.mark.parametrize("alpha, beta", [(5, 2), (7, 2), (7, 3), (9, 2), (11, 3), (13, 5)])
def test_hom_counts_depend_only_on_knot(alpha, beta):
    inv = pow(beta, -1, alpha)
    base = hom_count(alpha, beta)
    assert hom_count(alpha, inv) == base
    assert hom_count(alpha, alpha - beta) == base


@pytest.mark.parametrize("alpha, beta", [(5, 3), (7, 3), (9, 5)] + PAIRS)
def test_irregular_cover_tori(alpha, beta):
    t, tori = tori_of(TwoBridgePair(alpha, beta), irregular_cover)
    assert t.size == alpha
    assert len(tori) == (alpha + 1) // 2
    assert sorted(x.degree for x in tori) == [1] + [2] * ((alpha - 1) // 2)


@pytest.mark.parametrize("alpha, beta", [(5, 3), (7, 3), (11, 4)])
def test_regular_cover_tori(alpha, beta):
    t, tori = tori_of(TwoBridgePair(alpha, beta), regular_cover)
    assert t.size == 2 * alpha
    assert [x.degree for x in tori] == [2] * alpha
    assert sum(x.degree for x in tori) == 2 * alpha


@pytest.mark.parametrize("alpha, beta", [(5, 3), (7, 3), (9, 2), (13, 5)])
def test_regular_tori_cover_irregular_tori(alpha, beta):
    k = TwoBridgePair(alpha, beta)
    knot = build_knot(k)
    reg = regular_cover(k, knot)
    irr = irregular_cover(k, knot)
    reg_tori = peripheral_tori(reg, schreier_transversal(reg), knot.meridian, knot.longitude)
    irr_tori = peripheral_tori(irr, schreier_transversal(irr), knot.meridian, knot.longitude)
    # a regular coset H g maps to the irregular coset A g; follow the same word
    reg_data = schreier_transversal(reg)
    image = {c: irr.act(0, reg_data.transversal[c]) for c in range(reg.size)}
    owner = {c: i for i, x in enumerate(irr_tori) for c in x.orbit}
    preimages = Counter()
    for x in reg_tori:
        targets = {owner[image[c]] for c in x.orbit}
        assert len(targets) == 1
        preimages[targets.pop()] += 1
    for i, x in enumerate(irr_tori):
        assert preimages[i] == (1 if x.degree == 1 else 2)


@pytest.mark.parametrize("alpha, beta", PAIRS + [(3, 1), (3, 2)])
def test_branched_double_cover_is_lens_space(alpha, beta):
    assert branched_double_cover_h1(TwoBridgePair(alpha, beta)) == HomologySummary(0, (alpha,))


def cover_stats(k):
    knot = build_knot(k)
    t = irregular_cover(k, knot)
    from slopecert.fpgroup import subgroup_presentation
    tori = peripheral_tori(t, schreier_transversal(t), knot.meridian, knot.longitude)
    return abelianization(subgroup_presentation(knot.presentation, t)), sorted(x.degree for x in tori)


@pytest.mark.parametrize("alpha, beta", [(7, 2), (9, 2), (11, 3), (13, 2), (13, 5)])
def test_inverse_beta_gives_same_statistics(alpha, beta):
    k, k2 = TwoBridgePair(alpha, beta), TwoBridgePair(alpha, pow(beta, -1, alpha))
    assert abelianization(schubert_presentation(k)[0]) == abelianization(schubert_presentation(k2)[0])
    assert cover_stats(k) == cover_stats(k2)
