from fractions import Fraction

import pytest

from _corpus import sample_pairs, translate
from gradedbloc.abgroup import AbGroup, Bicharacter, FinSubgroup
from gradedbloc.blocktri import BlockProfile, KappaFn
from gradedbloc.classify import TypeIIParams, TypeIParams, build, build_typeI, iso_decide
from gradedbloc.cyclo import CycloNum, root_of_unity
from gradedbloc.gradedmat import Mat, build_elementary
from gradedbloc.oracle import (Witness, apply_witness, build_witness, graded_invariants,
                               refute_or_confirm, root_of_unity_log)

Z2 = AbGroup.parse("Z2")
Z3 = AbGroup.parse("Z3")


def typeI(G, *kappas):
    T = FinSubgroup.trivial(G)
    out = []
    for k in kappas:
        d = {}
        for x in k:
            d[x] = d.get(x, 0) + 1
        out.append(KappaFn(T, d))
    return TypeIParams(T, Bicharacter.trivial(T), tuple(out))


def perm(n, sigma):
    """Permutation matrix sending e_a to e_sigma(a) (1-based)."""
    return Mat(n, {(sigma[a - 1], a): CycloNum.rational(1) for a in range(1, n + 1)})


def test_invariants_trivial_ut11():
    A = build(typeI(Z2, [(0,)], [(0,)]), BlockProfile((1, 1)), "assoc")
    inv = graded_invariants(A)
    assert inv.support == {(0,)}
    assert inv.dim_multiset == (((0,), 3),)
    assert inv.identity_component_dim == 3
    assert inv.filtration == (((0,), 1, 1),)


def test_invariants_elementary_m2():
    A = build_elementary(Z2, [(0,), (1,)])
    inv = graded_invariants(A)
    assert inv.dim_multiset == (((0,), 2), ((1,), 2))
    assert inv.center_dims == (((0,), 1),)


def test_invariants_type2_jordan_m2():
    T = FinSubgroup(Z2, [(1,)])
    p = TypeIIParams(T, Bicharacter.trivial(T), (0,), (KappaFn(T, {(0,): 2}),))
    J = build(p, BlockProfile((2,)), "jordan")
    inv = graded_invariants(J)
    assert inv.dim_multiset == (((0,), 3), ((1,), 1))
    assert J.span((0,)).contains(Mat.identity(2).entries)


def test_identity_witness():
    A = build(typeI(Z3, [(0,)], [(1,), (2,)]), BlockProfile((1, 2)), "lie")
    assert apply_witness(A, A, Witness(Mat.identity(3)))


def test_permutation_witness_between_orderings():
    p = typeI(Z3, [(0,), (1,), (2,)])
    P = BlockProfile((3,))
    g1 = [(-1, 0), (-1, 1), (-1, 2)]
    g2 = [(-1, 1), (-1, 0), (-1, 2)]
    A = build_typeI(p, P, "assoc", gamma=g1)
    B = build_typeI(p, P, "assoc", gamma=g2)
    # entry a of g1 is entry sigma(a) of g2
    sigma = [g2.index(g) + 1 for g in g1]
    assert apply_witness(A, B, Witness(perm(3, sigma)))
    assert not apply_witness(A, B, Witness(Mat.identity(3)))


def test_witness_fails_on_dimension_mismatch():
    A = build(typeI(Z2, [(0,)], [(0,)]), BlockProfile((1, 1)), "assoc")
    B = build(typeI(Z2, [(0,)], [(1,)]), BlockProfile((1, 1)), "assoc")
    assert graded_invariants(A).dim_multiset != graded_invariants(B).dim_multiset
    assert not apply_witness(A, B, Witness(Mat.identity(2)))


def test_translated_pair_confirmed():
    P = BlockProfile((1, 1, 1))
    p = typeI(AbGroup.parse("Z4"), [(0,)], [(1,)], [(3,)])
    ev = refute_or_confirm(p, translate(p, (1,)), P, "assoc")
    assert ev.verdict_agrees and ev.evidence["confirmed"]
    assert ev.evidence["g"] == [1]


def test_branch2_witness():
    P = BlockProfile((1, 1, 1))
    G = AbGroup.parse("Z4")
    p1 = typeI(G, [(0,)], [(1,)], [(3,)])
    p2 = typeI(G, [(1,)], [(3,)], [(0,)])
    w = build_witness(p1, p2, P, "lie")
    assert w.use_minus_tau
    assert apply_witness(build(p1, P, "lie"), build(p2, P, "lie"), w)


def test_different_T_refuted_by_dimensions():
    G = AbGroup.parse("Z2xZ2")
    T2 = FinSubgroup(G, G.gens())
    b2 = Bicharacter(T2, [[0, Fraction(1, 2)], [Fraction(1, 2), 0]])
    p1 = typeI(G, [(0, 0), (1, 0)])
    p2 = TypeIParams(T2, b2, (KappaFn(T2, {(0, 0): 1}),))
    ev = refute_or_confirm(p1, p2, BlockProfile((2,)), "assoc")
    assert ev.evidence["obstruction"] == "support"
    assert "dim_multiset" in ev.evidence["fields"]


def test_incomplete_refutation_is_reported():
    # the flip pair: isomorphic as Lie algebras, not as associative algebras,
    # and the invariants used here cannot tell the associative gradings apart
    P = BlockProfile((1, 1, 1))
    p1 = typeI(Z3, [(0,)], [(0,)], [(1,)])
    p2 = typeI(Z3, [(2,)], [(0,)], [(0,)])
    assert not iso_decide(p1, p2, P, "assoc").isomorphic
    ev = refute_or_confirm(p1, p2, P, "assoc")
    assert ev.evidence == {"verdict": "non-isomorphic", "status": "incomplete"}
    assert iso_decide(p1, p2, P, "lie").isomorphic


def test_build_witness_refuses_non_isomorphic():
    P = BlockProfile((1, 1))
    with pytest.raises(ValueError):
        build_witness(typeI(Z2, [(0,)], [(0,)]), typeI(Z2, [(0,)], [(1,)]), P, "assoc")


@pytest.mark.parametrize("q", [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(5, 8), Fraction(7, 12)])
def test_root_of_unity_log(q):
    assert root_of_unity_log(root_of_unity(q)) == q


def test_root_of_unity_log_rejects():
    with pytest.raises(ValueError):
        root_of_unity_log(CycloNum.rational(2))


def test_witnesses_on_random_pairs():
    for p1, p2, P, case in sample_pairs(40, seed=11):
        v = iso_decide(p1, p2, P, case)
        ev = refute_or_confirm(p1, p2, P, case)
        if v.isomorphic:
            assert ev.evidence["confirmed"], (p1, p2, P, case)
