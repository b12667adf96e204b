from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from cck_config import ToolkitConfig, set_config
from hurwitz_radon import build_orthogonal_multiplication, subspace_from_bilinear
from lie_descriptors import (
    ConeDimensionError,
    ConeSet,
    MotionElement,
    MotionError,
    UnsupportedGroupError,
    WeylRankError,
    apply_weyl_element,
    b_plus,
    benoist_obstruction,
    calabi_markus,
    cone_a_of_orthogonal_subgroup,
    cone_contained,
    cones_properly_disjoint,
    cones_similar,
    coordinate_subspaces,
    evaluate_parameter,
    grassmannian_inequality_obstruction,
    grassmannian_obstructions,
    grassmannian_parity_obstruction,
    group_stats,
    jordan_decompose_motion,
    maximal_compact,
    maximality_obstruction,
    motion_cone_a,
    normalize_grassmannian,
    parse_group,
    pseudo_riemannian_signature,
    rank_parity_obstruction,
    sampling_disjointness_oracle,
    weyl_group_elements,
    weyl_group_order,
)


@pytest.mark.parametrize(
    "text,dim,d,real_rank",
    [
        ("SO(8,C)", 56, 28, 4),
        ("SO(7,1)", 28, 7, 1),
        ("Spin(7,C)", 42, 21, 3),
        ("GL(4,R)", 16, 10, 4),
        ("S(GL(2,R)xGL(2,R))", 7, 5, 3),
        ("O(8,8)²", 240, 128, 16),
        ("R^3", 3, 3, 3),
        ("T(2)", 2, 0, 0),
        ("E6(-26)", 78, 26, 2),
        ("E7(C)", 266, 133, 7),
        ("SU*(4)", 15, 5, 1),
    ],
)
def test_group_stats(text, dim, d, real_rank):
    stats = group_stats(text)
    assert (stats.dim, stats.d, stats.real_rank) == (dim, d, real_rank)


def test_parse_group_substitutes_parameters():
    assert str(parse_group("SO(p,q+1)", {"p": 2, "q": 3})) == "SO(2,4)"
    assert str(parse_group("Sp(floor(n/2),1)xU(n)", {"n": 3})) == "Sp(1,1)xU(3)"
    assert group_stats(parse_group("Sp(1,n)", {"n": 2})).d == 8


@pytest.mark.parametrize("text", ["Foo(3)", "SU*(3)", "GL(3)", "Sp(2,H)"])
def test_parse_group_rejects_unknown(text):
    with pytest.raises(UnsupportedGroupError):
        parse_group(text)


def test_evaluate_parameter():
    assert evaluate_parameter("2n+1", {"n": 3}) == 7
    with pytest.raises(UnsupportedGroupError):
        evaluate_parameter("n/2", {"n": 3})


def test_maximal_compact_and_signature():
    assert group_stats(maximal_compact("SO(4,1)")).dim == 6
    assert group_stats(maximal_compact("Sp(2,R)")).dim == 4
    assert pseudo_riemannian_signature("O(3,1)", "O(2,1)") == (1, 2)


def test_weyl_groups():
    assert weyl_group_order("A", 3) == 24
    assert weyl_group_order("B", 3) == 48
    assert weyl_group_order("D", 4) == 192
    assert sum(1 for _ in weyl_group_elements("D", 3)) == 24
    assert len({apply_weyl_element(e, [1, 2]) for e in weyl_group_elements("B", 2)}) == 8
    set_config(ToolkitConfig(weyl_rank_limit=3))
    with pytest.raises(WeylRankError):
        list(weyl_group_elements("B", 4))


def test_cone_disjointness_under_weyl_orbits():
    axes = coordinate_subspaces(3, 1)
    assert cones_properly_disjoint(axes, ConeSet.line([1, 1, 1]))
    assert not cones_properly_disjoint(axes, ConeSet.line([0, 0, 2]))
    assert cone_contained(ConeSet.line([1, 1, 0]), coordinate_subspaces(3, 2))
    assert not cone_contained(ConeSet.line([1, 1, 1]), coordinate_subspaces(3, 2))


def test_cones_in_different_spaces_rejected():
    with pytest.raises(ConeDimensionError):
        cones_properly_disjoint(ConeSet.line([1, 0]), ConeSet.line([1, 0, 0]))
    with pytest.raises(ConeDimensionError):
        ConeSet.line([1, 0], weyl="E")


def test_cone_similarity_and_subgroup_cones():
    assert cones_similar(ConeSet.line([1, 0]), ConeSet.line([0, -2]))
    assert not cones_similar(ConeSet.line([1, 0]), ConeSet.line([1, 1]))
    assert cones_similar(ConeSet.zero(2), ConeSet.zero(2))
    assert cone_a_of_orthogonal_subgroup(1, 2, 2, 4) == coordinate_subspaces(2, 1)
    with pytest.raises(ConeDimensionError):
        cone_a_of_orthogonal_subgroup(3, 0, 2, 4)


def test_b_plus():
    ambient, rows = b_plus("A", 3)
    assert (ambient, len(rows)) == (4, 2)
    assert len(b_plus("D", 3)[1]) == 2
    assert len(b_plus("D", 4)[1]) == 4
    assert len(b_plus("BC", 2)[1]) == 2
    with pytest.raises(UnsupportedGroupError):
        b_plus("E", 6)
    with pytest.raises(ConeDimensionError):
        b_plus("B", 0)


def test_cone_json_round_trip():
    cone = ConeSet.line([Fraction(1, 2), 1, 0], weyl="D")
    restored = ConeSet.from_json(cone.to_json())
    assert restored == cone
    assert str(ConeSet.zero(2)) == "W[BC]·{0}"


def test_calabi_markus():
    assert calabi_markus("O(2,1)", "O(1,1)")
    assert not calabi_markus("O(3,1)", "O(3)")


def test_maximality_obstruction():
    aH = coordinate_subspaces(2, 1)
    aL = ConeSet.line([1, 0])
    assert maximality_obstruction(aH, 1, aL, 2)
    assert not maximality_obstruction(aH, 1, aL, 1)
    assert not maximality_obstruction(aH, 1, ConeSet.zero(2), 5)


def test_rank_parity_obstruction():
    assert rank_parity_obstruction("Sp(2,R)", "Sp(1,C)", "Sp(1)")
    assert rank_parity_obstruction("O(1,2)", "O(1)xO(1,1)", "O(1)xO(1)xO(1)")
    # SO(2,4)/U(1,2) is pseudo-Hermitian with equal ranks but no parity gap
    assert not rank_parity_obstruction("SO(2,4)", "U(1,2)", "U(1)xU(2)")


def test_benoist_obstruction():
    split_pairs = ConeSet.from_rows(4, [[[1, -1, 0, 0], [0, 0, 1, -1]]], "A")
    assert benoist_obstruction("A", 3, split_pairs)
    assert not benoist_obstruction("A", 3, ConeSet.from_rows(4, [[[1, 0, 0, 0]]], "A"))
    assert not benoist_obstruction("B", 2, ConeSet.from_rows(2, [[[1, 0]]]))
    assert benoist_obstruction("B", 2, ConeSet.full(2))
    assert benoist_obstruction("D", 3, ConeSet.from_rows(3, [[[1, 0, 0], [0, 1, 0]]], "D"))


def test_benoist_obstruction_limits():
    with pytest.raises(UnsupportedGroupError):
        benoist_obstruction("B", 3, coordinate_subspaces(3, 1))
    with pytest.raises(ConeDimensionError):
        benoist_obstruction("A", 3, ConeSet.full(3))
    set_config(ToolkitConfig(weyl_rank_limit=3))
    with pytest.raises(WeylRankError):
        benoist_obstruction("A", 4, ConeSet.full(5))


def test_grassmannian_closed_forms():
    assert normalize_grassmannian(2, 1, 0, 3) == (0, 3, 2, 1)
    assert grassmannian_parity_obstruction(0, 1, 1, 1)
    assert not grassmannian_parity_obstruction(0, 1, 2, 1)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    ni, nj, nk, nl = normalize_grassmannian(i, j, k, l)
                    found = grassmannian_obstructions(i, j, k, l)
                    if min(nj, nk, nl) > 0:
                        via_cones = found["calabi_markus"] or found["maximality_L1"] or found["maximality_L2"]
                        assert via_cones == grassmannian_inequality_obstruction(i, j, k, l), (i, j, k, l)


def _random_direction(rng: random.Random, ambient: int):
    while True:
        v = [rng.choice((-1, 0, 1)) for _ in range(ambient)]
        if any(v):
            return v


def test_sampling_oracle_agrees_with_exact_check():
    rng = random.Random(11)
    for _ in range(200):
        line = ConeSet.line(_random_direction(rng, 3), weyl="none")
        if rng.random() < 0.5:
            other = ConeSet.line(_random_direction(rng, 3), weyl="none")
        else:
            normal = _random_direction(rng, 3)
            plane = sympy.Matrix([normal]).nullspace()
            other = ConeSet.from_rows(3, [[list(v) for v in plane]], weyl="none")
        exact = cones_properly_disjoint(line, other)
        assert sampling_disjointness_oracle(line, other, radius=2, rng=rng) == exact


def test_motion_cone_of_structured_W():
    assert motion_cone_a(subspace_from_bilinear(build_orthogonal_multiplication(4))) == ConeSet.line([1, 1, 1, 1])
    assert motion_cone_a(subspace_from_bilinear([[[2]], [[0]]])) == ConeSet.line([2, 0])
    assert motion_cone_a(subspace_from_bilinear([[[0]], [[0]]])) == ConeSet.zero(2)
    with pytest.raises(UnsupportedGroupError):
        motion_cone_a(subspace_from_bilinear([[[1, 0], [0, 1]], [[0, -2], [2, 0]]]))


def _rotation(c: Fraction, s: Fraction, axis: int) -> sympy.Matrix:
    k = sympy.eye(3)
    i, j = [x for x in range(3) if x != axis]
    k[i, i], k[i, j], k[j, i], k[j, j] = c, -s, s, c
    return k


def test_jordan_decomposition_of_planar_rotation():
    k = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]
    g = MotionElement(k, [1, 0])
    s, w = jordan_decompose_motion(g)

    assert w == MotionElement.identity(2)
    assert s == g
    assert list(g.fixed_center()) == [sympy.Rational(-1, 2), -1]
    for n in range(1, 30):
        t = (g ** n).v
        assert (t.T * t)[0] <= 5


def test_jordan_decomposition_splits_off_axis_translation():
    k = _rotation(Fraction(3, 5), Fraction(4, 5), axis=2)
    g = MotionElement(k, [1, 0, 3])
    s, w = jordan_decompose_motion(g)

    assert w == MotionElement.translation([0, 0, 3])
    assert list(s.v) == [1, 0, 0]


def test_jordan_decomposition_properties():
    rng = random.Random(5)
    points = [(Fraction(1 - t * t, 1 + t * t), Fraction(2 * t, 1 + t * t)) for t in (Fraction(1, 2), Fraction(1, 3), 2)]
    for _ in range(500):
        k = sympy.eye(3)
        for _ in range(rng.randint(0, 2)):
            c, s = rng.choice(points)
            k = k * _rotation(c, s, rng.randrange(3))
        if rng.random() < 0.2:
            k = sympy.diag(1, 1, -1) * k
        g = MotionElement(k, [rng.randint(-3, 3) for _ in range(3)])
        s, w = jordan_decompose_motion(g)

        assert s * w == g
        assert w * s == g
        assert w.k == sympy.eye(3)
        assert s.k * w.v == w.v
        s.fixed_center()


def test_motion_element_validation():
    with pytest.raises(MotionError):
        MotionElement([[1, 1], [0, 1]], [0, 0])
    with pytest.raises(MotionError):
        MotionElement([[1, 0], [0, 1]], [0, 0, 0])
