"""Semisimplification of upper-triangular matrix groups, with checkable witnesses.

The diagonal-parts group of an upper-triangular group G is always contained
in G or G is simultaneously diagonalizable. Classification produces one of
three machine-checkable witnesses for this trichotomy:

  * TransvectionWitness: G holds a non-diagonal matrix gamma with repeated
    eigenvalues; gamma^(l-1) is the shear [[1, lam], [0, 1]] with
    lam = (l-1) * b * a^(l-2) != 0, and a further power is the unit shear
    [[1, 1], [0, 1]]. Shearing then moves every element of G onto its
    diagonal part inside G.
  * CommutatorWitness: two non-commuting elements whose commutator is a
    nontrivial unit-eigenvalue shear, from which the same argument runs.
  * DiagonalizerWitness: a basis change P with P^-1 G P diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .gl2 import Mat2, MatrixGroup, _close, _make_group
from .modarith import FpUnit


@dataclass(frozen=True)
class TransvectionWitness:
    """Evidence built from a repeated-eigenvalue matrix gamma in G."""

    gamma: Mat2
    lam: FpUnit
    lam_inverse: int
    transvection: Mat2


@dataclass(frozen=True)
class CommutatorWitness:
    """Evidence built from a non-commuting pair in G."""

    gamma1: Mat2
    gamma2: Mat2
    lam: FpUnit
    transvection: Mat2


@dataclass(frozen=True)
class DiagonalizerWitness:
    """A basis change P such that P^-1 G P is diagonal."""

    basis_change: Mat2


TrichotomyWitness = Union[TransvectionWitness, CommutatorWitness, DiagonalizerWitness]

# Classification order: the shear cases are tried before diagonalization.
CASE_REPEATED_EIGENVALUE = "repeated_eigenvalue"
CASE_NONCOMMUTATIVE = "noncommutative"
CASE_DIAGONALIZABLE = "diagonalizable"


@dataclass(frozen=True)
class SemisimplificationResult:
    """Outcome of classifying an upper-triangular group.

    contained_in_G is True exactly for the shear witnesses, where the
    diagonal-parts group was verified to sit inside G element by element.
    cases_matched records every case predicate that held, in priority
    order, for audit; the witness realizes the first of them.
    """

    Gss: MatrixGroup
    contained_in_G: bool
    witness: TrichotomyWitness
    cases_matched: tuple[str, ...]


def _require_upper_triangular(G: MatrixGroup) -> None:
    if not G.is_upper_triangular:
        raise ValueError("group is not upper triangular")


def semisimplification(G: MatrixGroup) -> MatrixGroup:
    """Diagonal-parts group {diag(a, d) : [[a, b], [0, d]] in G}.

    Computed as the closure of the projected generators; projection onto
    diagonal parts is a homomorphism on upper-triangular matrices, so this
    equals the elementwise projection of G.
    """
    _require_upper_triangular(G)
    gens = [g.diagonal_part().as_tuple() for g in G.generators]
    closed = _close(gens, G.modulus.ell)
    result = _make_group(G.modulus, closed, dict.fromkeys(gens))
    if G.order % result.order != 0:
        raise RuntimeError("semisimplification order does not divide group order")
    return result


def _unit_shear(G: MatrixGroup, n: int) -> Mat2:
    return Mat2(1, n, 0, 1, G.modulus)


def _shear_containment(G: MatrixGroup) -> bool:
    """Check diag(a, d) in G for every [[a, b], [0, d]] in G by shearing.

    Uses the identity [[a, b], [0, d]] * [[1, n], [0, 1]] = [[a, an + b], [0, d]]
    with n = -b * a^-1, valid once G contains all unit shears.
    """
    ell = G.modulus.ell
    for m in G.elements:
        n = (-m.b * pow(m.a, -1, ell)) % ell
        sheared = m * _unit_shear(G, n)
        if not sheared.is_diagonal or sheared not in G:
            return False
    return True


def _case_flags(G: MatrixGroup) -> tuple[Mat2 | None, bool, bool]:
    """(smallest repeated-eigenvalue non-diagonal element, non-abelian, diagonalizable)."""
    candidate: Mat2 | None = None
    for m in G.elements:
        if m.b != 0 and m.a == m.d:
            if candidate is None or m.encode() < candidate.encode():
                candidate = m
    nonabelian = not G.is_abelian
    diagonalizable = candidate is None and not nonabelian
    return candidate, nonabelian, diagonalizable


def _transvection_witness(G: MatrixGroup, gamma: Mat2) -> TransvectionWitness:
    ell = G.modulus.ell
    lam_value = ((ell - 1) * gamma.b * pow(gamma.a, ell - 2, ell)) % ell
    power = gamma ** (ell - 1)
    if power != _unit_shear(G, lam_value):
        raise RuntimeError("shear power disagrees with the closed form")
    lam = FpUnit(lam_value, G.modulus)
    lam_inverse = pow(lam_value, -1, ell)
    transvection = gamma ** ((ell - 1) * lam_inverse)
    return TransvectionWitness(gamma, lam, lam_inverse, transvection)


def _commutator_witness(G: MatrixGroup) -> CommutatorWitness:
    gens = sorted(G.generators, key=Mat2.encode)
    for i, g in enumerate(gens):
        for h in gens[i + 1 :]:
            comm = g * h * g.inverse() * h.inverse()
            if comm != G.identity:
                lam = FpUnit(comm.b, G.modulus)
                transvection = comm ** pow(comm.b, -1, G.modulus.ell)
                return CommutatorWitness(g, h, lam, transvection)
    raise RuntimeError("no non-commuting generator pair in a non-abelian group")


def _diagonalizer_witness(G: MatrixGroup) -> DiagonalizerWitness:
    """Basis change from the eigenvectors of one non-diagonal element.

    e1 is an eigenvector of every upper-triangular matrix; the second basis
    vector is the other eigenvector of the chosen element, normalized to
    second coordinate 1. A fully diagonal group gets P = I.
    """
    ell = G.modulus.ell
    chosen: Mat2 | None = None
    for m in G.elements:
        if m.b != 0:
            if chosen is None or m.encode() < chosen.encode():
                chosen = m
    if chosen is None:
        return DiagonalizerWitness(Mat2.identity(G.modulus))
    x = (chosen.b * pow(chosen.d - chosen.a, -1, ell)) % ell
    return DiagonalizerWitness(Mat2(1, x, 0, 1, G.modulus))


def classify_semisimplification(G: MatrixGroup) -> SemisimplificationResult:
    """Classify an upper-triangular group and build the matching witness.

    Case priority: repeated-eigenvalue shear, then commutator shear, then
    diagonalization. In the shear cases the containment of the
    diagonal-parts group in G is established constructively by shearing
    every element, not by set comparison.
    """
    _require_upper_triangular(G)
    gss = semisimplification(G)
    candidate, nonabelian, diagonalizable = _case_flags(G)

    matched = []
    if candidate is not None:
        matched.append(CASE_REPEATED_EIGENVALUE)
    if nonabelian:
        matched.append(CASE_NONCOMMUTATIVE)
    if diagonalizable:
        matched.append(CASE_DIAGONALIZABLE)

    witness: TrichotomyWitness
    if candidate is not None:
        witness = _transvection_witness(G, candidate)
        contained = _shear_containment(G)
    elif nonabelian:
        witness = _commutator_witness(G)
        contained = _shear_containment(G)
    else:
        witness = _diagonalizer_witness(G)
        contained = False
    return SemisimplificationResult(gss, contained, witness, tuple(matched))


def verify_witness(G: MatrixGroup, witness: TrichotomyWitness) -> bool:
    """Re-derive every claim of a witness from scratch.

    Returns False on any violation, including malformed witnesses, rather
    than raising.
    """
    try:
        if isinstance(witness, TransvectionWitness):
            return _verify_transvection(G, witness)
        if isinstance(witness, CommutatorWitness):
            return _verify_commutator(G, witness)
        if isinstance(witness, DiagonalizerWitness):
            return _verify_diagonalizer(G, witness)
    except ValueError:
        return False
    return False


def _verify_transvection(G: MatrixGroup, w: TransvectionWitness) -> bool:
    ell = G.modulus.ell
    gamma = w.gamma
    if gamma.modulus != G.modulus or gamma not in G:
        return False
    if gamma.b == 0 or gamma.a != gamma.d or gamma.c != 0:
        return False
    lam_formula = ((ell - 1) * gamma.b * pow(gamma.a, ell - 2, ell)) % ell
    if w.lam.value != lam_formula or lam_formula == 0:
        return False
    if gamma ** (ell - 1) != Mat2(1, lam_formula, 0, 1, G.modulus):
        return False
    if (w.lam_inverse * lam_formula) % ell != 1:
        return False
    expected = gamma ** ((ell - 1) * w.lam_inverse)
    unit_shear = Mat2(1, 1, 0, 1, G.modulus)
    return w.transvection == expected == unit_shear and unit_shear in G


def _verify_commutator(G: MatrixGroup, w: CommutatorWitness) -> bool:
    ell = G.modulus.ell
    if w.gamma1.modulus != G.modulus or w.gamma2.modulus != G.modulus:
        return False
    if w.gamma1 not in G or w.gamma2 not in G:
        return False
    comm = w.gamma1 * w.gamma2 * w.gamma1.inverse() * w.gamma2.inverse()
    if comm.a != 1 or comm.d != 1 or comm.c != 0 or comm.b == 0:
        return False
    if w.lam.value != comm.b:
        return False
    unit_shear = Mat2(1, 1, 0, 1, G.modulus)
    derived = comm ** pow(comm.b, -1, ell)
    return w.transvection == derived == unit_shear and unit_shear in G


def _verify_diagonalizer(G: MatrixGroup, w: DiagonalizerWitness) -> bool:
    P = w.basis_change
    if P.modulus != G.modulus:
        return False
    p_inv = P.inverse()
    return all((p_inv * g * P).is_diagonal for g in G.elements)
