import cmath
from fractions import Fraction

import numpy as np
import pytest

from crystalrep.groups import (
    GroupDataError,
    make_free_abelian,
    make_gamma_k,
    make_z2_rot_c4,
)
from crystalrep.classify import (
    Classification,
    classify,
    enumerate_one_dim,
    family_rep_gamma_k,
    max_irr_dim_check,
    random_representation,
)
from crystalrep.reps import (
    UnitaryRep,
    decompose,
    equivalent,
    haar_unitary,
    is_irreducible,
)
from crystalrep.torus import TorusChar, restrict_to_A_spectrum


def test_family_rep_matches_induced_character():
    from crystalrep.torus import induced_char_rep
    theta_z, theta_a = 0.27, 0.66
    rho = family_rep_gamma_k(1, [cmath.exp(2j * cmath.pi * theta_z)],
                             cmath.exp(2j * cmath.pi * theta_a))
    ind = induced_char_rep(rho.group, TorusChar([theta_z, theta_a]))
    for a, b in zip(rho.generator_images(), ind.generator_images()):
        assert np.linalg.norm(a - b) < 1e-12


def test_family_rep_irreducibility_dichotomy():
    assert is_irreducible(family_rep_gamma_k(1, [1j], 1))
    assert not is_irreducible(family_rep_gamma_k(1, [1], 1))
    assert not is_irreducible(family_rep_gamma_k(1, [-1], cmath.exp(0.3j)))
    assert is_irreducible(family_rep_gamma_k(2, [1j, -1], cmath.exp(0.2j)))


def test_family_rep_rejects_non_unit():
    with pytest.raises(GroupDataError):
        family_rep_gamma_k(1, [2.0], 1)
    with pytest.raises(GroupDataError):
        family_rep_gamma_k(1, [1], 0.5)


def test_classify_generic_family_rep_is_induced():
    rho = family_rep_gamma_k(1, [1j], cmath.exp(0.3j))
    out = classify(rho)
    assert out.tag == "induced"
    assert out.subgroup.is_lattice()
    assert out.rho_h.n == 1
    # the inducing character is the first spectrum entry
    spec = restrict_to_A_spectrum(rho)
    assert abs(out.rho_h.lattice[0][0, 0] - spec[0][0].value([1, 0])) < 1e-9
    assert equivalent(rho, out.induced_rep)


def test_classify_one_dim_is_scalar():
    G = make_gamma_k(1)
    rho = UnitaryRep(G, [np.array([[-1]]), np.array([[1]])], {1: np.array([[1j * 0 - 1]])})
    out = classify(rho)
    assert out.tag == "scalar"
    assert abs(out.descent.central_char.angles[0] - 0.5) < 1e-12


def test_classify_rejects_reducible():
    rho = family_rep_gamma_k(1, [-1], cmath.exp(0.3j))
    with pytest.raises(GroupDataError):
        classify(rho)


def test_classify_c4_full_orbit():
    from crystalrep.torus import induced_char_rep
    G = make_z2_rot_c4()
    rng = np.random.default_rng(3)
    rho = induced_char_rep(G, TorusChar(rng.random(2)))
    assert rho.n == 4
    assert is_irreducible(rho)
    out = classify(rho)
    assert out.tag == "induced"
    assert out.subgroup.is_lattice()


def test_classify_c4_half_orbit_induces_from_middle_subgroup():
    from crystalrep.torus import induced_char_rep
    G = make_z2_rot_c4()
    # stabilizer {0, 2}: character fixed by the half turn only
    chi = TorusChar([Fraction(0), Fraction(1, 2)])
    rho = induced_char_rep(G, chi)
    dec = decompose(rho, seed=0)
    for f, _ in dec:
        if f.n == 2 and is_irreducible(f):
            out = classify(f)
            assert out.tag == "induced"
            assert set(out.subgroup.q_elements) == {0, 2}
            break
    else:
        pytest.skip("no 2-dimensional irreducible factor found")


def test_classify_round_trip_at_rational_boundary():
    # boundary family points (exact half-integral angles) are reducible,
    # so classify rejects them; just inside, classification is induced
    rho = family_rep_gamma_k(2, [1, -1], 1j)
    assert not is_irreducible(rho)
    rho = family_rep_gamma_k(2, [cmath.exp(0.1j), -1], 1j)
    assert classify(rho).tag == "induced"


@pytest.mark.parametrize("k,expected", [(1, (1, 2)), (2, (1, 4)), (3, (1, 8))])
def test_enumerate_one_dim_gamma_k(k, expected):
    assert enumerate_one_dim(make_gamma_k(k)) == expected


def test_enumerate_one_dim_free_abelian():
    assert enumerate_one_dim(make_free_abelian(3)) == (3, 1)


def test_random_representation_verifies():
    G = make_gamma_k(1)
    for n in [1, 2, 3, 4]:
        rep, ok, res = random_representation(G, n, seed=n)
        assert ok, f"n={n} residual {res}"
        assert rep.report.passed
        assert rep.n == n


def test_random_representation_c4():
    G = make_z2_rot_c4()
    got = 0
    for n in [1, 2, 4, 5]:
        rep, ok, _ = random_representation(G, n, seed=10 + n)
        if ok:
            got += 1
            assert rep.report.passed
    assert got >= 2


def test_max_irr_dim_check_gamma_1():
    report = max_irr_dim_check(make_gamma_k(1), sample_count=12, seed=0)
    assert report["pass"]
    assert report["max_factor_dim"] <= 2


def test_max_irr_dim_check_abelian():
    report = max_irr_dim_check(make_free_abelian(2), sample_count=8, seed=1)
    assert report["pass"]
    assert report["max_factor_dim"] == 1


def test_classification_serialization():
    out = classify(family_rep_gamma_k(1, [1j], 1))
    data = out.to_json()
    assert data["tag"] == "induced"
    assert data["subgroup_q_elements"] == [0]
