from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from clifford_core import InnerAutomorphism, MultiVector, Signature, v_k_mask
from clifford_morphisms import (
    CLIFFORD_TABLE,
    MINUS_2,
    AlgebraMorphism,
    MorphismError,
    RepresentationSizeError,
    TensorVector,
    automorphism_morphism,
    base_isomorphism,
    build_real_rep,
    classify_clifford,
    classify_group,
    eta_K,
    even_reduction,
    even_reduction_chain,
    hyperbolic_tower,
    lambda_K,
    lambda_epsilon,
    phi_K,
    phi_transfer_tau,
    real_rep_morphism,
    signature_pairs,
    verify_clifford_table,
    verify_group_table,
    xi_L,
    xi_transfer_holds,
)

SMALL = [Signature(p, q) for p in range(4) for q in range(4) if 0 < p + q <= 4]


def test_classify_clifford_labels():
    top = classify_clifford(Signature(8, 8))
    assert top.label == "R(256)"
    assert top.matrix_label == "M(256,R)"
    assert classify_clifford(Signature(0, 0)).label == "R"
    assert classify_clifford(Signature(1, 0)).matrix_label == "R⊕R"
    assert classify_clifford(Signature(0, 2)).matrix_label == "H"
    assert classify_clifford(Signature(0, 4)).label == "H(2)"


def test_clifford_table_reproduces():
    check = verify_clifford_table()
    assert check.ok, check.failed
    assert len(check.passed) == len(CLIFFORD_TABLE) ** 2


def test_group_labels_for_p_equal_one():
    labels = [classify_group(Signature(1, q)).label for q in range(1, 9)]
    assert labels == ["GL(1,R)", "Sp(1,R)", "Sp(1,C)", "Sp(1,1)", "GL(2,H)", "O*(8)", "O(8,C)", "O(8,8)"]


def test_group_table_small_corner():
    check = verify_group_table(limit=4)
    assert check.ok, check.failed


@pytest.mark.slow
def test_group_table_full():
    check = verify_group_table()
    assert check.ok, check.failed


@pytest.mark.parametrize("sig", list(signature_pairs(6))[1:])
def test_real_rep_is_faithful_model(sig):
    algebra = build_real_rep(sig)
    assert algebra.check_relations()
    assert algebra.check_star_transpose()
    assert algebra.size == classify_clifford(sig).real_model_size
    assert algebra.blade_images_independent()


def test_real_rep_respects_products():
    rng = random.Random(3)
    sig = Signature(2, 1)
    algebra = build_real_rep(sig)
    for _ in range(20):
        a = MultiVector(sig, {rng.randrange(sig.dim): rng.randint(-2, 2) for _ in range(3)})
        b = MultiVector(sig, {rng.randrange(sig.dim): Fraction(rng.randint(-2, 2), 3) for _ in range(3)})
        assert algebra.represent(a * b) == algebra.represent(a) * algebra.represent(b)


def test_real_rep_size_cap():
    with pytest.raises(RepresentationSizeError):
        build_real_rep(Signature(10, 11), max_size=20)
    assert real_rep_morphism(Signature(1, 2)).is_bijective()


def test_base_isomorphisms():
    for name in ("ψ01", "psi10", "psi_02", "psi11", "psi20"):
        morphism = base_isomorphism(name)
        assert morphism.check_relations()
        assert morphism.is_bijective()
    with pytest.raises(MorphismError):
        base_isomorphism("psi03")


@pytest.mark.parametrize("sig", [Signature(2, 1), Signature(1, 2), Signature(2, 2), Signature(3, 1)])
def test_phi_K_is_isomorphism(sig):
    for k_plus in range(sig.p + 1):
        for k_minus in range(sig.q + 1):
            morphism = phi_K((k_plus, k_minus), sig)
            assert morphism.check_relations(), morphism.name
            assert morphism.is_bijective(), morphism.name


def test_phi_K_rejects_K_outside_M():
    with pytest.raises(MorphismError):
        phi_K((3, 0), Signature(2, 1))


def test_phi_K_transfers_reflections():
    sig = Signature(2, 2)
    for K in ((1, 0), (1, 1), (2, 1)):
        morphism = phi_K(K, sig)
        for sign, count in (("+", sig.p), ("-", sig.q)):
            for index in range(1, count + 1):
                tau = InnerAutomorphism.tau_generator(sig, sign, index)
                assert morphism.commutes_with(tau, phi_transfer_tau(K, sig, sign, index))
                assert morphism.commutes_with(tau, morphism.transfer(tau))


def test_lambda_K_is_automorphism():
    sig = Signature(2, 3)
    for k_plus in range(1, 3):
        for k_minus in range(1, 4):
            morphism = lambda_K((k_plus, k_minus), sig)
            assert morphism.check_relations()
            assert morphism.is_bijective()
            for sign in ("+", "-"):
                epsilon, _ = lambda_epsilon((k_plus, k_minus), sig, sign)
                assert epsilon in (1, -1)
    with pytest.raises(MorphismError):
        lambda_K((0, 1), sig)


def test_eta_K_sends_V_K_to_first_generator():
    sig = Signature(2, 2)
    for K in ((1, 0), (0, 1), (2, 0), (1, 1), (2, 1), (1, 2)):
        morphism = eta_K(K, sig)
        assert morphism.check_relations()
        k_sig, l_sig = morphism.target.factors
        sign = morphism.notes["target_generator"][1]
        expected = TensorVector.pure(morphism.target, [MultiVector.generator(k_sig, sign, 1), MultiVector.scalar(l_sig)])
        v_k = MultiVector.blade(sig, v_k_mask(sig, *K))
        assert morphism.apply(v_k) == expected


def test_eta_K_rejects_trivial_K():
    with pytest.raises(MorphismError):
        eta_K((0, 0), Signature(2, 2))
    with pytest.raises(MorphismError):
        eta_K((1, 0), Signature(2, 0))


@pytest.mark.parametrize("sig,L", [(Signature(2, 1), (1, 0)), (Signature(2, 1), (0, 1)), (Signature(3, 2), (2, 1))])
def test_xi_L_transfers_T_L(sig, L):
    morphism = xi_L(L, sig)
    assert morphism.check_relations()
    assert xi_transfer_holds(L, sig)


def test_xi_L_needs_odd_deltas():
    with pytest.raises(MorphismError):
        xi_L((1, 0), Signature(2, 2))


def test_even_reduction_round_trip():
    sig = Signature(2, 2)
    reduction = even_reduction(sig)
    assert reduction.target == Signature(2, 1)
    assert reduction.is_multiplicative()
    inverse = reduction.inverse()
    assert inverse.check_relations()
    for mask in reduction.even_basis():
        x = MultiVector.blade(sig, mask)
        assert inverse.apply(reduction.apply(x)) == x


def test_even_reduction_edge_cases():
    trivial = even_reduction(Signature(0, 0))
    assert trivial.apply(MultiVector.scalar(Signature(0, 0), 2)) == MultiVector.scalar(Signature(0, 0), 2)
    with pytest.raises(MorphismError):
        even_reduction(Signature(2, 0))
    with pytest.raises(MorphismError):
        even_reduction(Signature(1, 1)).apply(MultiVector.generator(Signature(1, 1), "+", 1))


def test_even_reduction_chain_swaps_signature():
    chain = even_reduction_chain(Signature(2, 1))
    assert chain.target == Signature(1, 2)
    assert chain.verify_transfer()


@pytest.mark.slow
@pytest.mark.parametrize("sig", [s for s in signature_pairs(10) if 6 < s.n])
def test_real_rep_up_to_ten_generators(sig):
    algebra = build_real_rep(sig)
    assert algebra.check_relations()
    assert algebra.blade_images_independent()


@pytest.mark.slow
def test_real_rep_of_split_sixteen():
    assert build_real_rep(Signature(8, 8)).check_relations()


def _star_sample_morphisms():
    sig = Signature(2, 2)
    yield automorphism_morphism(InnerAutomorphism.tau(MultiVector.from_vector_coords(sig, [1, 1, 0, 0])))
    yield automorphism_morphism(InnerAutomorphism.tau(MultiVector.from_vector_coords(sig, [0, 0, 1, -2])))
    yield automorphism_morphism(InnerAutomorphism.tau_generator(sig, "-", 2))
    for name in ("psi01", "psi10", "psi02", "psi11", "psi20"):
        yield base_isomorphism(name)
    for K in ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (0, 2), (2, 2)):
        yield phi_K(K, sig)
    yield phi_K((0, 3), Signature(0, 6))
    for K in ((1, 1), (1, 2), (2, 1), (2, 3)):
        yield lambda_K(K, Signature(2, 3))
    for K in ((1, 0), (0, 1), (2, 0), (1, 1), (2, 1), (1, 2)):
        yield eta_K(K, sig)
    for xi_sig, L in ((Signature(2, 1), (1, 0)), (Signature(2, 1), (0, 1)), (Signature(3, 2), (2, 1))):
        yield xi_L(L, xi_sig)
    yield hyperbolic_tower(sig)
    yield real_rep_morphism(Signature(1, 3))


def test_morphisms_commute_with_star():
    rng = random.Random(8)
    for morphism in _star_sample_morphisms():
        masks = list(morphism.source.generator_masks())
        masks += [rng.randrange(morphism.source.dim) for _ in range(100)]
        assert morphism.is_star_compatible(masks), morphism.name


def test_star_compatibility_detects_a_non_orthogonal_model():
    model = base_isomorphism("psi10")
    skew = np.array([[1, 1], [0, -1]], dtype=np.int64)
    shear = AlgebraMorphism(model.source, model.target, (skew,), name="shear")
    assert shear.check_relations()
    assert not shear.is_star_compatible()


@pytest.mark.parametrize("r", [1, 2, 3])
def test_hyperbolic_tower_is_a_real_model(r):
    tower = hyperbolic_tower(Signature(r, r))
    assert tower.check_relations()
    assert tower.is_bijective()
    assert tower.target.size == 2 ** r
    first_minus = tower.generator_images[r]
    assert np.array_equal(first_minus, np.kron(np.eye(2 ** (r - 1), dtype=np.int64), MINUS_2))


def test_hyperbolic_tower_needs_equal_signature():
    with pytest.raises(MorphismError):
        hyperbolic_tower(Signature(2, 1))
    with pytest.raises(MorphismError):
        hyperbolic_tower(Signature(0, 0))
