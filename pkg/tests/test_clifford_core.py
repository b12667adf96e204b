from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cck_config import ToolkitConfig, set_config
from clifford_core import (
    CliffordDomainError,
    InnerAutomorphism,
    MultiVector,
    Signature,
    aut_j_lie_basis,
    d_by_blades,
    fixed_subalgebra,
    format_multivector,
    grade_involution_T,
    is_central,
    is_in_group_G,
    is_in_spin,
    lie_algebra_basis_g,
    parse_multivector,
    popcount,
    preserves_form,
    rational_circle_point,
    rational_hyperbolic_point,
    reflect_tau,
    reversion,
    rho_matrix,
    special_element,
    square_sign,
    star_conjugation,
    twisted_conjugation_rho,
)
from clifford_morphisms import signature_pairs


def _random_multivector(sig: Signature, rng: random.Random, terms: int = 3) -> MultiVector:
    return MultiVector(
        sig,
        {rng.randrange(sig.dim): Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(terms)},
    )


def test_generator_squares_and_anticommutation():
    sig = Signature(1, 1)
    plus = MultiVector.generator(sig, "+", 1)
    minus = MultiVector.generator(sig, "-", 1)

    assert plus * plus == 1
    assert minus * minus == -1
    assert plus * minus == -(minus * plus)


@pytest.mark.parametrize("sig", list(signature_pairs(6)), ids=str)
def test_generator_relations_exhaustive(sig):
    generators = [MultiVector.blade(sig, mask) for mask in sig.generator_masks()]
    for i, g in enumerate(generators):
        assert g * g == sig.generator_square(i)
        for h in generators[i + 1 :]:
            assert g * h + h * g == 0


@pytest.mark.parametrize("sig", list(signature_pairs(6)), ids=str)
def test_blade_squares_and_commutation_exhaustive(sig):
    blades = [MultiVector.blade(sig, mask) for mask in range(sig.dim)]
    for a, x in enumerate(blades):
        r, t = popcount(a & sig.plus_mask), popcount(a & sig.minus_mask)
        assert x * x == square_sign("V_K", Signature(r, t), r, t), (sig, a)
        for b in range(a + 1, sig.dim):
            y = blades[b]
            sign = -1 if (popcount(a) * popcount(b) - popcount(a & b)) % 2 else 1
            assert x * y == sign * (y * x), (sig, a, b)


def test_signature_bounds_and_text():
    assert Signature.from_text("(2, 3)") == Signature(2, 3)
    with pytest.raises(CliffordDomainError):
        Signature(-1, 0)
    with pytest.raises(CliffordDomainError):
        Signature(20, 11)
    with pytest.raises(CliffordDomainError):
        Signature.from_text("two,three")


def test_signature_bound_follows_config():
    set_config(ToolkitConfig(max_signature=5))
    with pytest.raises(CliffordDomainError):
        Signature(3, 3)
    assert Signature(2, 3).dim == 32


def test_generator_outside_signature_rejected():
    with pytest.raises(CliffordDomainError):
        MultiVector.generator(Signature(1, 1), "+", 2)


def test_mixed_signatures_rejected():
    a = MultiVector.scalar(Signature(1, 0))
    b = MultiVector.scalar(Signature(0, 1))
    with pytest.raises(CliffordDomainError):
        a + b


def test_product_is_associative_on_random_elements():
    rng = random.Random(7)
    sig = Signature(2, 2)
    for _ in range(100):
        a, b, c = (_random_multivector(sig, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_star_and_reversion_are_anti_automorphisms():
    rng = random.Random(0)
    signatures = [Signature(p, q) for p in range(4) for q in range(4) if 0 < p + q <= 4]
    for _ in range(1000):
        sig = rng.choice(signatures)
        a, b = _random_multivector(sig, rng), _random_multivector(sig, rng)
        assert star_conjugation(a * b) == star_conjugation(b) * star_conjugation(a)
        assert reversion(a * b) == reversion(b) * reversion(a)
        assert star_conjugation(star_conjugation(a)) == a


def test_star_on_generators():
    sig = Signature(1, 1)
    plus = MultiVector.generator(sig, "+", 1)
    minus = MultiVector.generator(sig, "-", 1)

    assert plus.star() == plus
    assert minus.star() == -minus


def test_special_element_squares_match_rule():
    sig = Signature(3, 3)
    for k_plus in range(4):
        for k_minus in range(4):
            v = special_element("V_K", sig, k_plus, k_minus)
            assert v * v == square_sign("V_K", sig, k_plus, k_minus)


def test_square_sign_of_pseudoscalars():
    assert square_sign("J", Signature(1, 1)) == 1
    assert square_sign("J", Signature(0, 1)) == -1
    assert square_sign("J", Signature(2, 0)) == -1
    with pytest.raises(CliffordDomainError):
        special_element("V_K", Signature(1, 1))


def test_pseudoscalar_is_central_only_in_odd_dimension():
    assert is_central(special_element("J", Signature(1, 2)))
    assert not is_central(special_element("J", Signature(2, 0)))


def test_rotor_acts_as_rotation():
    sig = Signature(2, 0)
    c, s = rational_circle_point(Fraction(1, 2))
    assert (c, s) == (Fraction(3, 5), Fraction(4, 5))
    e12 = MultiVector.blade(sig, 0b11)
    x = MultiVector.scalar(sig, c) + e12 * s

    assert is_in_group_G(x)
    assert is_in_spin(x)
    assert preserves_form(rho_matrix(x), sig)


def test_boost_preserves_split_form():
    sig = Signature(1, 1)
    a, b = rational_hyperbolic_point(Fraction(1, 2))
    assert (a, b) == (Fraction(5, 3), Fraction(4, 3))
    e = MultiVector.generator(sig, "+", 1) * MultiVector.generator(sig, "-", 1)
    x = MultiVector.scalar(sig, a) + e * b

    assert is_in_spin(x)
    assert preserves_form(rho_matrix(x), sig)


def test_twisted_conjugation_rejects_odd_elements():
    sig = Signature(2, 0)
    v = MultiVector.generator(sig, "+", 1)
    with pytest.raises(CliffordDomainError):
        twisted_conjugation_rho(v, v)
    with pytest.raises(CliffordDomainError):
        rational_hyperbolic_point(1)


def test_reflection_in_vector():
    sig = Signature(2, 0)
    e1 = MultiVector.generator(sig, "+", 1)
    e2 = MultiVector.generator(sig, "+", 2)

    assert reflect_tau(e1, e1 + e2) == -e1 + e2
    assert InnerAutomorphism.tau(e1)(e1 + e2) == -e1 + e2


def test_reflection_in_null_vector_rejected():
    sig = Signature(1, 1)
    null = MultiVector.generator(sig, "+", 1) + MultiVector.generator(sig, "-", 1)
    with pytest.raises(CliffordDomainError):
        InnerAutomorphism.tau(null)


def test_full_grade_involution_negates_vectors():
    sig = Signature(2, 1)
    v = MultiVector.from_vector_coords(sig, [1, 2, 3])
    assert grade_involution_T(sig, 2, 1)(v) == -v
    assert grade_involution_T(sig, 0, 0)(v) == v


def test_fixed_subalgebra_of_cartan_involution():
    sig = Signature(1, 1)
    fixed = fixed_subalgebra(InnerAutomorphism.T(sig, 0, 1))
    assert [b.mask for b in fixed] == [0, 1]


def test_lie_algebra_dimensions():
    assert len(lie_algebra_basis_g(Signature(2, 2))) == 6
    assert d_by_blades(Signature(2, 2)) == 4
    assert d_by_blades(Signature(3, 1)) == 3
    assert [b.mask for b in aut_j_lie_basis(Signature(1, 1), "plus")] == [0b11]


def test_parse_and_format_multivector():
    sig = Signature(1, 1)
    a = parse_multivector("3/2*v+1v-1 - 1", sig)
    e = MultiVector.generator(sig, "+", 1) * MultiVector.generator(sig, "-", 1)

    assert a == e * Fraction(3, 2) - 1
    assert format_multivector(a) == "-1 + 3/2*v+1v-1"
    assert parse_multivector(format_multivector(a), sig) == a


@pytest.mark.parametrize("text", ["v+3", "2 3", ""])
def test_parse_multivector_rejects_bad_text(text):
    with pytest.raises(CliffordDomainError):
        parse_multivector(text, Signature(1, 1))
