import itertools
import random

import pytest

from crystalrep import exactla
from crystalrep.exactla import AbelianInvariants
from crystalrep.groups import (
    Element,
    FiniteGroupTable,
    GroupDataError,
    VAGroup,
    cyclic_table,
    make_free_abelian,
    make_gamma_k,
    make_z2_rot_c4,
    parse_group_definition,
    word_ball,
)


def test_gamma_1_structure():
    G = make_gamma_k(1)
    assert G.rank == 2
    assert G.Q.order == 2
    assert G.action_faithful
    # the lift of the point-group generator squares to the last lattice basis vector
    g = G.element((0, 0), 1)
    assert G.multiply(g, g) == G.element((0, 1), 0)


def test_make_gamma_k_rejects_zero():
    with pytest.raises(GroupDataError):
        make_gamma_k(0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_gamma_k_action_involution(k):
    G = make_gamma_k(k)
    T = G.action[1]
    assert exactla.matmul(T, T) == exactla.identity(k + 1)


def test_identity_and_abelian_multiplication():
    G = make_gamma_k(2)
    rng = random.Random(0)
    for _ in range(20):
        x = G.element([rng.randint(-4, 4) for _ in range(3)], rng.randint(0, 1))
        assert G.multiply(G.identity(), x) == x
        assert G.multiply(x, G.identity()) == x
    v = G.element((1, 2, 3), 0)
    w = G.element((4, -1, 0), 0)
    assert G.multiply(v, w) == G.element((5, 1, 3), 0)


@pytest.mark.parametrize("k", [1, 2])
def test_group_axioms_exhaustive_small_box(k):
    G = make_gamma_k(k)
    box = list(itertools.product([-1, 0, 1], repeat=G.rank))
    elems = [G.element(v, q) for v in box[:5] for q in range(G.Q.order)]
    for a in elems:
        assert G.multiply(a, G.inverse(a)) == G.identity()
        assert G.multiply(G.inverse(a), a) == G.identity()
    for a, b, c in itertools.islice(itertools.product(elems, repeat=3), 300):
        assert G.multiply(G.multiply(a, b), c) == G.multiply(a, G.multiply(b, c))


def test_gamma_k_lift_torsion_free_witness():
    G = make_gamma_k(2)
    g = G.element((0, 0, 0), 1)
    for m in range(1, 21):
        x = G.power(g, 2 * m)
        assert x == G.element((0, 0, m), 0)
        assert G.power(g, 2 * m - 1).q == 1


def test_dimension_mismatch_rejected():
    G = make_gamma_k(1)
    with pytest.raises(GroupDataError):
        G.multiply(G.identity(), Element((0, 0, 0), 0))
    with pytest.raises(GroupDataError):
        G.element((0,), 0)


def test_bad_table_rejected():
    with pytest.raises(GroupDataError):
        FiniteGroupTable([[0, 1], [1, 1]])
    with pytest.raises(GroupDataError):
        FiniteGroupTable([[1, 0], [0, 1]])


def test_subgroups_c2_and_c4():
    assert cyclic_table(2).subgroups() == [(0,), (0, 1)]
    assert cyclic_table(4).subgroups() == [(0,), (0, 2), (0, 1, 2, 3)]


def test_intermediate_subgroups_gamma_1():
    G = make_gamma_k(1)
    subs = G.intermediate_subgroups()
    assert len(subs) == 2
    assert subs[0].is_lattice() and subs[0].index == 2
    assert subs[1].is_whole_group() and subs[1].index == 1
    # restricted data still validates as a group with the same rank
    assert subs[0].group.rank == G.rank
    assert subs[0].group.Q.order == 1


def test_intermediate_subgroup_index_formula():
    G = make_z2_rot_c4()
    for sub in G.intermediate_subgroups():
        assert sub.index * len(sub.q_elements) == G.Q.order


def test_subgroup_lattice_closed_under_intersection():
    for table in [cyclic_table(4), cyclic_table(6), cyclic_table(8)]:
        subs = [set(s) for s in table.subgroups()]
        for a in subs:
            for b in subs:
                assert tuple(sorted(a & b)) in table.subgroups()


def test_coset_representatives():
    G = make_gamma_k(1)
    whole = G.intermediate_subgroup((0, 1))
    assert G.coset_representatives(whole) == [G.identity()]
    lattice = G.lattice_subgroup()
    assert G.coset_representatives(lattice) == [G.element((0, 0), 0), G.element((0, 0), 1)]


def test_coset_representatives_no_collision():
    G = make_z2_rot_c4()
    sub = G.intermediate_subgroup((0, 2))
    reps = G.coset_representatives(sub)
    assert len(reps) == 2
    # multiplying representatives by subgroup elements never collides across cosets
    for h_q in sub.q_elements:
        for v in itertools.product([-1, 0, 1], repeat=2):
            h = G.element(v, h_q)
            hits = [G.multiply(r, h).q for r in reps]
            cosets = [next(i for i, r in enumerate(reps)
                           if G.Q.mul(G.Q.inv[r.q], q) in sub.q_elements)
                      for q in hits]
            assert cosets == list(range(len(reps)))


def test_relation_checklist_gamma_1():
    G = make_gamma_k(1)
    rels = G.relation_checklist()
    words = {r.label: r.word for r in rels}
    assert len(rels) == 1 + 2 + 1  # k(k-1)/2 + (|Q|-1)k + (|Q|-1)^2 with k = 2
    # U_g A_1 U_g^-1 = A_1^-1
    assert words["U1 A1 U1^-1 A^-phi"] == [
        (("U", 1), 1), (("A", 0), 1), (("U", 1), -1), (("A", 0), 1)]
    # U_g A_2 U_g^-1 = A_2
    assert words["U1 A2 U1^-1 A^-phi"] == [
        (("U", 1), 1), (("A", 1), 1), (("U", 1), -1), (("A", 1), -1)]
    # U_g^2 = A_2
    assert words["U1 U1 = A^c U0"] == [(("U", 1), 1), (("U", 1), 1), (("A", 1), -1)]


@pytest.mark.parametrize("k,q_order", [(2, 2), (1, 4)])
def test_relation_checklist_count(k, q_order):
    if q_order == 2:
        G = make_gamma_k(k)
    else:
        G = make_z2_rot_c4()
    K = G.rank
    rels = G.relation_checklist()
    expected = K * (K - 1) // 2 + (G.Q.order - 1) * K + (G.Q.order - 1) ** 2
    assert len(rels) == expected


def test_trivial_q_checklist_only_commutators():
    G = make_free_abelian(3)
    rels = G.relation_checklist()
    assert all(r.kind == "commutator" for r in rels)
    assert len(rels) == 3


@pytest.mark.parametrize("k,expected", [
    (1, AbelianInvariants(1, (2,))),
    (2, AbelianInvariants(1, (2, 2))),
    (3, AbelianInvariants(1, (2, 2, 2))),
    (4, AbelianInvariants(1, (2, 2, 2, 2))),
])
def test_abelianization_gamma_k(k, expected):
    assert make_gamma_k(k).abelianization() == expected


def test_abelianization_free_abelian():
    assert make_free_abelian(3).abelianization() == AbelianInvariants(3, ())


def test_definition_round_trip():
    for G in [make_gamma_k(2), make_z2_rot_c4(), make_free_abelian(2)]:
        H = parse_group_definition(G.to_definition())
        assert H.rank == G.rank
        assert H.Q.mult == G.Q.mult
        assert H.action == G.action
        assert H.cocycle == G.cocycle


def test_parse_rejects_malformed():
    G = make_gamma_k(1)
    d = G.to_definition()
    bad = dict(d)
    bad["mult_table"] = [0, 1, 1]
    with pytest.raises(GroupDataError):
        parse_group_definition(bad)
    bad = dict(d)
    bad["cocycle"] = [[0, 5, [0, 1]]]
    with pytest.raises(GroupDataError):
        parse_group_definition(bad)
    with pytest.raises(GroupDataError):
        parse_group_definition({"rank": 1})


def test_invalid_cocycle_rejected():
    # c(g,g) = e_1 fails the cocycle identity for the inversion action
    with pytest.raises(GroupDataError):
        VAGroup(2, cyclic_table(2),
                [exactla.identity(2), [[-1, 0], [0, 1]]],
                [[(0, 0), (0, 0)], [(0, 0), (1, 0)]])


def test_word_ball_radius_growth():
    G = make_gamma_k(1)
    b1 = word_ball(G, 1)
    b2 = word_ball(G, 2)
    assert set(b1) < set(b2)
    assert G.identity() in b1
