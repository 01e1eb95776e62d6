import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl2orbits.gl2 import Mat2, borel, closure, conjugate, split_cartan, unipotent
from gl2orbits.modarith import FpUnit, PrimeModulus
from gl2orbits.semisimplify import (
    CommutatorWitness,
    DiagonalizerWitness,
    TransvectionWitness,
    classify_semisimplification,
    semisimplification,
    verify_witness,
)

M5 = PrimeModulus(5)
M7 = PrimeModulus(7)


def brute_semisimplification(G):
    """Elementwise projection oracle, independent of the closure route."""
    return frozenset(Mat2(g.a, 0, 0, g.d, G.modulus) for g in G.elements)


def triangular_strategy(primes=(3, 5, 7)):
    def build(p, data):
        m = PrimeModulus(p)
        gens = [
            Mat2(1 + a % (p - 1), b % p, 0, 1 + d % (p - 1), m)
            for a, b, d in data
        ]
        return closure(gens, m)

    return st.builds(
        build,
        st.sampled_from(list(primes)),
        st.lists(
            st.tuples(st.integers(0, 90), st.integers(0, 90), st.integers(0, 90)),
            min_size=1,
            max_size=3,
        ),
    )


def test_semisimplification_examples():
    assert semisimplification(borel(M5)) == split_cartan(M5)
    assert semisimplification(unipotent(M7)).order == 1
    G = closure([Mat2(1, 1, 0, 2, M5)])
    assert G.order == 4
    gss = semisimplification(G)
    assert gss == closure([Mat2(1, 0, 0, 2, M5)])
    assert gss.order == 4


def test_semisimplification_powers_oracle():
    # Direct powers of [[1,1],[0,2]] mod 5 pin down the projected group.
    x = Mat2(1, 1, 0, 2, M5)
    assert x * x == Mat2(1, 3, 0, 4, M5)
    assert x * x * x == Mat2(1, 2, 0, 3, M5)
    assert x**4 == Mat2.identity(M5)
    expected = {Mat2(1, 0, 0, d, M5) for d in (1, 2, 3, 4)}
    assert semisimplification(closure([x])).elements == frozenset(expected)


def test_semisimplification_rejects_non_triangular():
    from gl2orbits.gl2 import nonsplit_cartan

    with pytest.raises(ValueError):
        semisimplification(nonsplit_cartan(M5))


@settings(max_examples=60)
@given(triangular_strategy())
def test_semisimplification_matches_elementwise_projection(G):
    assert semisimplification(G).elements == brute_semisimplification(G)


@settings(max_examples=40)
@given(triangular_strategy())
def test_semisimplification_idempotent(G):
    gss = semisimplification(G)
    assert semisimplification(gss) == gss
    assert G.order % gss.order == 0


@settings(max_examples=25)
@given(triangular_strategy(primes=(3, 5)))
def test_semisimplification_monotone(G):
    # Any cyclic subgroup of G projects into the projection of G.
    gss = semisimplification(G)
    for g in sorted(G.elements, key=Mat2.encode)[:6]:
        sub = closure([g], G.modulus)
        assert semisimplification(sub).is_subgroup_of(gss)


def test_classify_transvection_case_with_frozen_values():
    # gamma = [[2,1],[0,2]]: gamma^4 = [[1,2],[0,1]] and gamma^12 = [[1,1],[0,1]].
    gamma = Mat2(2, 1, 0, 2, M5)
    assert gamma**4 == Mat2(1, 2, 0, 1, M5)
    assert gamma**12 == Mat2(1, 1, 0, 1, M5)
    lam = (4 * 1 * pow(2, 3, 5)) % 5
    assert lam == 2
    assert (3 * lam) % 5 == 1
    G = closure([gamma])
    manual = TransvectionWitness(
        gamma=gamma,
        lam=FpUnit(2, M5),
        lam_inverse=3,
        transvection=Mat2(1, 1, 0, 1, M5),
    )
    assert verify_witness(G, manual)
    result = classify_semisimplification(G)
    assert isinstance(result.witness, TransvectionWitness)
    assert verify_witness(G, result.witness)
    assert result.contained_in_G
    assert result.Gss.is_subgroup_of(G)


def test_classify_picks_smallest_encoding_candidate():
    G = closure([Mat2(2, 1, 0, 2, M5)])
    result = classify_semisimplification(G)
    candidates = [g for g in G.elements if g.b != 0 and g.a == g.d]
    assert result.witness.gamma == min(candidates, key=Mat2.encode)


def test_classify_borel_fires_shear_case():
    result = classify_semisimplification(borel(M5))
    assert isinstance(result.witness, (TransvectionWitness, CommutatorWitness))
    assert result.cases_matched[0] == "repeated_eigenvalue"
    assert "noncommutative" in result.cases_matched
    assert result.contained_in_G
    assert result.Gss == split_cartan(M5)
    assert result.Gss.is_subgroup_of(borel(M5))


def test_classify_diagonalizer_case():
    G = closure([Mat2(1, 1, 0, 2, M5)])
    result = classify_semisimplification(G)
    assert isinstance(result.witness, DiagonalizerWitness)
    assert result.witness.basis_change == Mat2(1, 1, 0, 1, M5)
    assert not result.contained_in_G
    assert result.cases_matched == ("diagonalizable",)
    assert conjugate(G, result.witness.basis_change).is_diagonal
    assert verify_witness(G, result.witness)


def test_classify_diagonal_group_gets_identity_diagonalizer():
    result = classify_semisimplification(split_cartan(M5))
    assert isinstance(result.witness, DiagonalizerWitness)
    assert result.witness.basis_change == Mat2.identity(M5)
    assert result.Gss == split_cartan(M5)


def test_verify_witness_rejects_bad_witnesses():
    # Identity basis change against a non-diagonal group.
    G = closure([Mat2(1, 1, 0, 2, M5)])
    assert not verify_witness(G, DiagonalizerWitness(Mat2.identity(M5)))
    # Commuting pair: the commutator is the identity, so lam would be 0.
    cartan = split_cartan(M5)
    bad = CommutatorWitness(
        gamma1=Mat2(2, 0, 0, 1, M5),
        gamma2=Mat2(1, 0, 0, 2, M5),
        lam=FpUnit(1, M5),
        transvection=Mat2(1, 1, 0, 1, M5),
    )
    assert not verify_witness(cartan, bad)
    # Wrong lambda on an otherwise valid gamma.
    gamma = Mat2(2, 1, 0, 2, M5)
    G2 = closure([gamma])
    wrong = TransvectionWitness(gamma, FpUnit(1, M5), 1, Mat2(1, 1, 0, 1, M5))
    assert not verify_witness(G2, wrong)
    # Gamma from another modulus.
    alien = TransvectionWitness(
        Mat2(2, 1, 0, 2, M7), FpUnit(2, M7), 4, Mat2(1, 1, 0, 1, M7)
    )
    assert not verify_witness(G2, alien)


def test_valid_commutator_witness_verifies():
    B = borel(M5)
    g1 = Mat2(1, 1, 0, 1, M5)
    g2 = Mat2(2, 0, 0, 1, M5)
    comm = g1 * g2 * g1.inverse() * g2.inverse()
    assert comm.a == 1 and comm.d == 1 and comm.c == 0 and comm.b != 0
    witness = CommutatorWitness(
        g1, g2, FpUnit(comm.b, M5), comm ** pow(comm.b, -1, 5)
    )
    assert verify_witness(B, witness)


def test_case1_lambda_formula_matches_matrix_power():
    for p in (3, 5, 7, 13):
        m = PrimeModulus(p)
        for a in range(1, p):
            for b in range(1, p):
                gamma = Mat2(a, b, 0, a, m)
                lam = ((p - 1) * b * pow(a, p - 2, p)) % p
                assert gamma ** (p - 1) == Mat2(1, lam, 0, 1, m)
                assert lam != 0


@settings(max_examples=60)
@given(triangular_strategy())
def test_trichotomy_property(G):
    result = classify_semisimplification(G)
    assert verify_witness(G, result.witness)
    if isinstance(result.witness, DiagonalizerWitness):
        assert conjugate(G, result.witness.basis_change).is_diagonal
    else:
        assert result.contained_in_G
        assert result.Gss.is_subgroup_of(G)


@settings(max_examples=40)
@given(triangular_strategy(primes=(3, 5)))
def test_diagonalizable_case_hypotheses(G):
    result = classify_semisimplification(G)
    if result.cases_matched == ("diagonalizable",):
        assert G.is_abelian
        for g in G.elements:
            if not g.is_diagonal:
                assert g.a != g.d
