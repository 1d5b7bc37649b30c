import random

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from slopecert.exactlin import IntMatrix, Permutation
from slopecert.fpgroup import (
    DihedralElement,
    HomologySummary,
    NotInSubgroupError,
    PeripheralError,
    RelatorError,
    abelianization,
    coset_table_from_action,
    coset_table_from_hom,
    cyclic_reduce,
    dehn_filled_homology,
    dihedral_group,
    double_cosets_dihedral,
    free_reduce,
    generated_subgroup,
    h1_image,
    inverse,
    peripheral_tori,
    presentation,
    relator_matrix,
    rewrite_word,
    schreier_to_base,
    schreier_transversal,
    subgroup_presentation,
)
from slopecert import ptbundle, twobridge


def words(ngens, max_size=12):
    letters = [i for i in range(1, ngens + 1)] + [-i for i in range(1, ngens + 1)]
    return st.lists(st.sampled_from(letters), max_size=max_size).map(tuple)


def naive_reduce(w):
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


@pytest.mark.parametrize("w, expected", [
    ((1, -1, 2), (2,)),
    ((), ()),
    ((1, 2, -1, -2), (1, 2, -1, -2)),
])
def test_free_reduce_examples(w, expected):
    assert free_reduce(w) == expected


@given(words(3, 20))
def test_free_reduce_matches_naive(w):
    r = free_reduce(w)
    assert r == naive_reduce(w)
    assert free_reduce(r + inverse(r)) == ()


@given(words(2, 16))
def test_cyclic_reduce(w):
    c = cyclic_reduce(w)
    assert not c or c[0] != -c[-1]
    assert len(c) <= len(free_reduce(w))


def free(ngens):
    return presentation(ngens, [])


def random_transitive_action(rng, degree, ngens):
    while True:
        perms = [Permutation(tuple(rng.sample(range(degree), degree))) for _ in range(ngens)]
        try:
            return coset_table_from_action(free(ngens), perms)
        except ValueError:
            continue


def test_index_one_table():
    t = coset_table_from_action(free(2), [Permutation.identity(1)] * 2)
    data = schreier_transversal(t)
    assert t.size == 1 and data.transversal == ((),)
    assert rewrite_word(data, t, (1, -2, 2)) == (1,)


def test_action_relator_check():
    p = presentation(1, [(1, 1, 1)])
    coset_table_from_action(p, [Permutation((1, 2, 0))])
    with pytest.raises(RelatorError):
        coset_table_from_action(p, [Permutation((1, 0, 2))])


def test_figure_eight_nine_point_table_satisfies_relators():
    M = ptbundle.Monodromy.from_entries(2, 1, 1, 1)
    b = ptbundle.build_bundle(M)
    t = ptbundle.nine_fold_cover(M, b)
    assert t.size == 9
    # independent check by composing permutations letter by letter
    for r in b.presentation.relators:
        p = Permutation.identity(9)
        for x in r:
            p = p * (t.actions[x - 1] if x > 0 else t.actions[-x - 1].inverse())
        assert p.is_identity()


def test_hom_table_sizes():
    k = twobridge.TwoBridgePair(5, 3)
    knot = twobridge.build_knot(k)
    one = DihedralElement(5, 0, False)
    t = coset_table_from_hom(knot.presentation, knot.images, [knot.images[0]])
    assert t.size == 5
    whole = dihedral_group(5)
    assert coset_table_from_hom(knot.presentation, knot.images, whole).size == 1
    assert coset_table_from_hom(knot.presentation, knot.images, [one]).size == 10


def test_hom_rejects_bad_images():
    pres = presentation(2, [(1, 2, -1, -2)])
    with pytest.raises(RelatorError):
        coset_table_from_hom(pres, [DihedralElement(3, 0, True), DihedralElement(3, 1, True)], [])


@pytest.mark.parametrize("ngens", [2, 3])
@pytest.mark.parametrize("degree", range(1, 7))
def test_nielsen_schreier_rank(ngens, degree):
    rng = random.Random(1000 * ngens + degree)
    for _ in range(15):
        t = random_transitive_action(rng, degree, ngens)
        data = schreier_transversal(t)
        assert data.ngens == degree * (ngens - 1) + 1
        assert data.transversal[0] == ()
        # prefix closed
        assert all(w[:-1] in data.transversal for w in data.transversal if w)
        assert subgroup_presentation(free(ngens), t, data).relators == ()


def test_free_index_three():
    t = coset_table_from_action(free(2), [Permutation((1, 2, 0)), Permutation((0, 2, 1))])
    sub = subgroup_presentation(free(2), t)
    assert sub.ngens == 4 and sub.relators == ()
    assert abelianization(sub) == HomologySummary(4, ())


@given(st.data())
def test_reidemeister_schreier_round_trip(data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    ngens, degree = data.draw(st.sampled_from([2, 3])), data.draw(st.integers(1, 6))
    t = random_transitive_action(rng, degree, ngens)
    sd = schreier_transversal(t)
    for k, w in enumerate(sd.words):
        assert rewrite_word(sd, t, w) == (k + 1,)
        assert schreier_to_base(sd, (k + 1,)) == w
    w = data.draw(words(ngens, 10))
    loop = free_reduce(w + inverse(sd.transversal[t.act(0, w)]))
    assert free_reduce(schreier_to_base(sd, rewrite_word(sd, t, loop))) == loop


def test_rewrite_x_cubed_in_nine_fold_table():
    M = ptbundle.Monodromy.from_entries(2, 1, 1, 1)
    t = ptbundle.nine_fold_cover(M)
    sd = schreier_transversal(t)
    x3 = (ptbundle.X,) * 3
    assert free_reduce(schreier_to_base(sd, rewrite_word(sd, t, x3))) == x3
    with pytest.raises(NotInSubgroupError):
        rewrite_word(sd, t, (ptbundle.X,))


def test_generator_fixing_base_is_single_letter():
    t = coset_table_from_action(free(2), [Permutation((0, 2, 1)), Permutation((1, 0, 2))])
    sd = schreier_transversal(t)
    assert len(rewrite_word(sd, t, (1,))) == 1


@pytest.mark.parametrize("ngens, rels, expected", [
    (2, [(1, 2, -1, -2)], HomologySummary(2, ())),
    (1, [(1, 1, 1)], HomologySummary(0, (3,))),
    (2, [(1, 1), (2, 2, 2, 2)], HomologySummary(0, (2, 4))),
    (3, [], HomologySummary(3, ())),
])
def test_abelianization_examples(ngens, rels, expected):
    assert abelianization(presentation(ngens, rels)) == expected


def test_homology_summary_str():
    assert str(HomologySummary(3, ())) == "Z^3"
    assert str(HomologySummary(0, (5,))) == "Z/5"


def sympy_homology(pres):
    R = relator_matrix(pres)
    if R.rows == 0:
        return HomologySummary(pres.ngens, ())
    S = sympy_snf(sympy.Matrix(R.tolist()), domain=sympy.ZZ)
    diag = [abs(int(S[i, i])) for i in range(min(S.shape))]
    nonzero = [d for d in diag if d]
    return HomologySummary(pres.ngens - len(nonzero), tuple(d for d in nonzero if d > 1))


def test_two_bridge_cover_abelianization_oracle():
    knot = twobridge.build_knot(twobridge.TwoBridgePair(5, 3))
    t = twobridge.irregular_cover(knot.pair, knot)
    sub = subgroup_presentation(knot.presentation, t)
    assert abelianization(sub) == sympy_homology(sub)
    assert abelianization(sub).betti == 3


def test_h1_image_columns():
    pres = presentation(3, [])
    V = h1_image(pres, [(), (2,), (1, 2, -1), (3, 3, -1)])
    assert V.tolist() == [[0, 0, 0, -1], [0, 1, 1, 0], [0, 0, 0, 2]]
    assert h1_image(pres, []) == IntMatrix.zeros(3, 0)


def test_peripheral_index_one():
    t = coset_table_from_action(free(2), [Permutation.identity(1)] * 2)
    (torus,) = peripheral_tori(t, schreier_transversal(t), (1,), (2,))
    assert torus.degree == 1 and torus.stabilizer.index == 1


def test_peripheral_requires_commuting_action():
    t = coset_table_from_action(free(2), [Permutation((1, 2, 0)), Permutation((0, 2, 1))])
    with pytest.raises(PeripheralError):
        peripheral_tori(t, schreier_transversal(t), (1,), (2,))


def test_peripheral_two_bridge_alpha_five():
    knot = twobridge.build_knot(twobridge.TwoBridgePair(5, 3))
    t = twobridge.irregular_cover(knot.pair, knot)
    tori = peripheral_tori(t, schreier_transversal(t), knot.meridian, knot.longitude)
    assert sorted(x.degree for x in tori) == [1, 2, 2]
    assert sum(len(x.orbit) for x in tori) == t.size


def test_peripheral_figure_eight_matches_cycles():
    from slopecert.exactlin import cycle_decomposition, mod_p_permutation
    M = ptbundle.Monodromy.from_entries(2, 1, 1, 1)
    b = ptbundle.build_bundle(M)
    t = ptbundle.nine_fold_cover(M, b)
    sd = schreier_transversal(t)
    tori = peripheral_tori(t, sd, b.meridian, b.longitude)
    assert sorted(len(x.orbit) for x in tori) == list(cycle_decomposition(mod_p_permutation(M.matrix, 3)))
    assert tori[0].base == 0 and tori[0].degree == 1
    for x in tori:
        assert x.stabilizer.index == len(x.orbit)
        for bw, sw in zip(x.base_words, x.words):
            assert free_reduce(schreier_to_base(sd, sw)) == bw


def test_dehn_filling_index_one():
    # figure-eight bundle filled along l: H_1 = Z + coker(f* - I) = Z
    b = ptbundle.build_bundle(ptbundle.Monodromy.from_entries(2, 1, 1, 1))
    one = [Permutation.identity(1)] * 3
    t = coset_table_from_action(b.presentation, one)
    assert dehn_filled_homology(b.presentation, t, b.meridian, b.longitude, axis=1) == HomologySummary(1, ())
    assert dehn_filled_homology(b.presentation, t, b.meridian, b.longitude, axis=0) == HomologySummary(0, ())


@pytest.mark.parametrize("n, count", [(1, 1), (3, 2), (5, 3), (7, 4), (9, 5), (13, 7)])
def test_double_cosets(n, count):
    classes = double_cosets_dihedral(n)
    assert len(classes) == count == (n + 1) // 2
    assert classes[0] == sorted([DihedralElement(n, 0, False), DihedralElement(n, 0, True)])
    assert all(len(c) == 4 for c in classes[1:])
    assert sorted(g for c in classes for g in c) == sorted(dihedral_group(n))


@pytest.mark.parametrize("n", [0, 2, 4, -3])
def test_double_cosets_reject(n):
    with pytest.raises(ValueError):
        double_cosets_dihedral(n)


@given(st.sampled_from([3, 5, 7, 9]), st.integers(0, 20), st.booleans(), st.integers(0, 20), st.booleans())
def test_dihedral_law(n, r1, f1, r2, f2):
    g, h = DihedralElement(n, r1, f1), DihedralElement(n, r2, f2)
    assert (g * h) * h.inverse() == g
    assert (g * g.inverse()).is_identity
    sign = -1 if f1 else 1
    assert g * h == DihedralElement(n, r1 + sign * r2, f1 != f2)


def test_generated_subgroup_sizes():
    assert len(generated_subgroup([DihedralElement(5, 0, True), DihedralElement(5, 1, True)])) == 10
    assert len(generated_subgroup([DihedralElement(9, 3, False)])) == 3
