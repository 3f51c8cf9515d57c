import cmath
from fractions import Fraction

import numpy as np
import pytest

from crystalrep.groups import (
    FiniteGroupTable,
    GroupDataError,
    cyclic_table,
    make_gamma_k,
)
from crystalrep.reps import UnitaryRep, is_irreducible, opnorm, trivial_rep
from crystalrep.projective import (
    UnitaryCocycle,
    cocycle_of_projective_images,
    cohomologous,
    descend,
    descent_classes_equal,
    irreducible_as_projective,
    is_scalar_on_A,
    q_characters,
    sigma_regular_count,
    trivial_cocycle,
    twist,
)


def scalar_family_rep(alpha):
    """The z = -1 member of the 2-dimensional family over the Klein bottle
    group: lattice acts by -I and alpha I, lift by the alpha-flip."""
    G = make_gamma_k(1)
    return G, UnitaryRep(G, [-np.eye(2), alpha * np.eye(2)],
                         {1: np.array([[0, alpha], [1, 0]])})


def klein_four_table():
    # C2 x C2 with indices 0..3 = (0,0),(1,0),(0,1),(1,1)
    def mul(a, b):
        return (a ^ b)
    return FiniteGroupTable([[mul(a, b) for b in range(4)] for a in range(4)])


def pauli_cocycle():
    Q = klein_four_table()
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.array([[1, 0], [0, -1]], dtype=complex)
    images = [np.eye(2, dtype=complex), X, Z, X @ Z]
    return Q, cocycle_of_projective_images(Q, images)


def test_is_scalar_on_A():
    alpha = cmath.exp(0.7j)
    G, rho = scalar_family_rep(alpha)
    flag, lam = is_scalar_on_A(rho)
    assert flag
    assert abs(lam.angles[0] - 0.5) < 1e-12
    assert abs(lam.angles[1] - 0.7 / (2 * cmath.pi)) < 1e-12
    # generic member is not scalar
    z = 1j
    rho2 = UnitaryRep(G, [np.diag([z, -z]), alpha * np.eye(2)],
                      {1: np.array([[0, alpha], [1, 0]])})
    assert is_scalar_on_A(rho2)[0] is False


def test_one_dim_always_scalar():
    G = make_gamma_k(1)
    rho = UnitaryRep(G, [np.array([[-1]]), np.array([[1j]])],
                     {1: np.array([[cmath.exp(1j * cmath.pi / 4)]])})
    flag, lam = is_scalar_on_A(rho)
    assert flag and abs(lam.angles[0] - 0.5) < 1e-12


def test_descend_flip_rep():
    alpha = cmath.exp(0.7j)
    G, rho = scalar_family_rep(alpha)
    d = descend(rho)
    assert np.allclose(d.lift[1], np.array([[0, alpha], [1, 0]]))
    # lift(g)^2 = alpha I = lambda(a^2) I exactly, so the defect scalar is 1
    assert abs(d.cocycle(1, 1) - 1) < 1e-9
    assert abs(d.cocycle(0, 1) - 1) < 1e-9


def test_descend_rejects_non_scalar():
    G = make_gamma_k(1)
    rho = UnitaryRep(G, [np.diag([1j, -1j]), np.eye(2)],
                     {1: np.array([[0, 1], [1, 0]])})
    with pytest.raises(GroupDataError):
        descend(rho)


def test_descend_one_dim_all_ones():
    G = make_gamma_k(1)
    rho = UnitaryRep(G, [np.array([[1]]), np.array([[1j]])],
                     {1: np.array([[cmath.exp(1j * cmath.pi / 4)]])})
    d = descend(rho)
    assert np.allclose(d.cocycle.table, 1)


def test_descend_source_reducibility():
    # the flip member is reducible (its commutant contains the lift itself),
    # and the descent flag just mirrors the source
    G, rho = scalar_family_rep(cmath.exp(0.7j))
    d = descend(rho)
    assert irreducible_as_projective(d) is False
    assert is_irreducible(rho) is False
    one = UnitaryRep(G, [np.array([[-1]]), np.array([[1]])], {1: np.array([[-1]])})
    assert irreducible_as_projective(descend(one)) is True


def test_q_characters_c2_c4_klein():
    assert len(q_characters(cyclic_table(2))) == 2
    assert len(q_characters(cyclic_table(4))) == 4
    assert len(q_characters(klein_four_table())) == 4
    for vals, ang in q_characters(cyclic_table(4)):
        for a in range(4):
            for b in range(4):
                assert abs(vals[(a + b) % 4] - vals[a] * vals[b]) < 1e-12


def test_twist_scales_lifts_only():
    alpha = cmath.exp(0.7j)
    G, rho = scalar_family_rep(alpha)
    chars = q_characters(G.Q)
    sign = next(c for c, ang in chars if abs(c[1] + 1) < 1e-12)
    tw = twist(sign, rho)
    assert np.allclose(tw.lifts[1], -rho.lifts[1])
    for a, b in zip(tw.lattice, rho.lattice):
        assert np.array_equal(a, b)
    # trivial character leaves the representation unchanged
    triv = next(c for c, ang in chars if abs(c[1] - 1) < 1e-12)
    assert np.allclose(twist(triv, rho).lifts[1], rho.lifts[1])


def test_twist_cocycle_invariance():
    alpha = cmath.exp(0.7j)
    G, rho = scalar_family_rep(alpha)
    d0 = descend(rho)
    for chi, _ in q_characters(G.Q):
        d1 = descend(twist(chi, rho))
        assert np.max(np.abs(d1.cocycle.table - d0.cocycle.table)) < 1e-12


def test_twist_action_is_free():
    alpha = cmath.exp(0.7j)
    G, rho = scalar_family_rep(alpha)
    for chi, _ in q_characters(G.Q):
        tw = twist(chi, rho)
        same = all(opnorm(tw.lifts[q] - rho.lifts[q]) < 1e-9 for q in rho.lifts)
        trivial = all(abs(chi[q] - 1) < 1e-12 for q in range(G.Q.order))
        assert same == trivial


def test_sigma_regular_counts():
    assert sigma_regular_count(cyclic_table(2), trivial_cocycle(cyclic_table(2))) == 2
    assert sigma_regular_count(cyclic_table(1), trivial_cocycle(cyclic_table(1))) == 1
    Q, pauli = pauli_cocycle()
    assert sigma_regular_count(Q, pauli) == 1
    # trivial cocycle counts ordinary conjugacy classes
    for n in [2, 3, 4, 6, 8]:
        Q = cyclic_table(n)
        assert sigma_regular_count(Q, trivial_cocycle(Q)) == n


def test_sigma_regular_matches_character_count_for_small_abelian():
    # with the trivial cocycle the count is the ordinary irreducible count
    for Q in [cyclic_table(2), cyclic_table(4), klein_four_table()]:
        assert sigma_regular_count(Q, trivial_cocycle(Q)) == len(q_characters(Q))


def test_cohomologous_self_and_coboundary():
    Q = klein_four_table()
    triv = trivial_cocycle(Q)
    flag, b = cohomologous(triv, triv, 4)
    assert flag and b == [0, 0, 0, 0]
    # multiply by the coboundary of a random b and recover
    rng = np.random.default_rng(5)
    exps = [0] + [int(x) for x in rng.integers(0, 4, size=3)]
    tbl = np.ones((4, 4), dtype=complex)
    for x in range(4):
        for y in range(4):
            e = (exps[x] + exps[y] - exps[Q.mul(x, y)]) % 4
            tbl[x, y] = cmath.exp(2j * cmath.pi * e / 4)
    sigma2 = UnitaryCocycle(Q, tbl)
    flag, b = cohomologous(triv, sigma2, 4)
    assert flag


def test_pauli_cocycle_not_cohomologous_to_trivial():
    Q, pauli = pauli_cocycle()
    flag, _ = cohomologous(trivial_cocycle(Q), pauli, 4)
    assert not flag


def test_cohomologous_rejects_off_grid_values():
    Q = cyclic_table(2)
    tbl = np.ones((2, 2), dtype=complex)
    tbl[1, 1] = cmath.exp(0.3j)
    sigma = UnitaryCocycle(Q, tbl)
    with pytest.raises(GroupDataError):
        cohomologous(trivial_cocycle(Q), sigma, 4)


def test_restriction_fibers_differ_by_twist():
    # two scalar-on-lattice representations with the same descent class and
    # the same lattice restriction differ by a character of Q
    alpha = cmath.exp(0.7j)
    G, rho = scalar_family_rep(alpha)
    chars = q_characters(G.Q)
    for chi, _ in chars:
        tw = twist(chi, rho)
        d1, d2 = descend(rho), descend(tw)
        assert descent_classes_equal(d1, d2)
        # the ratio on each lift recovers the character
        for q in range(1, G.Q.order):
            ratio = np.trace(tw.lifts[q] @ rho.lifts[q].conj().T) / 2
            assert abs(ratio - chi[q]) < 1e-9


def test_finiteness_of_descent_classes_per_central_character():
    # scalar-on-lattice irreducibles over the Klein bottle group with a fixed
    # central character: at most sigma_regular_count distinct descent classes
    G = make_gamma_k(1)
    rng = np.random.default_rng(42)
    lam0, lam1 = 0.5, 0.23
    count = sigma_regular_count(G.Q, trivial_cocycle(G.Q))
    reps = []
    for _ in range(200):
        # 1-dimensional scalar-on-lattice representations with chi(t) = -1:
        # the lift angle is a square root of the a^2 angle, two choices
        sign = rng.choice([0.0, 0.5])
        lift = cmath.exp(2j * cmath.pi * (lam1 / 2 + sign))
        rho = UnitaryRep(G, [np.array([[cmath.exp(2j * cmath.pi * lam0)]]),
                             np.array([[cmath.exp(2j * cmath.pi * lam1)]])],
                         {1: np.array([[lift]])})
        assert is_irreducible(rho)
        reps.append(descend(rho))
    classes = []
    for d in reps:
        if not any(descent_classes_equal(d, c) for c in classes):
            classes.append(d)
    assert 1 <= len(classes) <= count
