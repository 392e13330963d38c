from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedbloc.abgroup import AbGroup, Bicharacter, FinSubgroup, Hom
from gradedbloc.classify import bicharacters
from gradedbloc.cyclo import ONE, ZERO, CycloNum, root_of_unity
from gradedbloc.gradedmat import (GradedAlgebra, Mat, build_division, build_elementary, coarsen,
                                  eta_bar_from_division, jordan_circ, kron, kronecker_grading,
                                  lie_bracket, same_components, tau_flip, verify_grading)
from gradedbloc.linalg import rank

HALF = Fraction(1, 2)


def E(n, i, j):
    return Mat.unit(n, i, j)


def full(name):
    G = AbGroup.parse(name)
    return FinSubgroup(G, G.gens())


def hyperbolic(T):
    """beta pairing generators (1,2), (3,4), ... with value 1/order."""
    G = T.ambient
    r = len(T.generators)
    table = [[Fraction(0)] * r for _ in range(r)]
    for k in range(0, r, 2):
        m = G.order(T.generators[k])
        table[k][k + 1] = Fraction(1, m)
        table[k + 1][k] = Fraction(-1, m)
    return Bicharacter(T, table)


@st.composite
def small_mat(draw, n=3):
    entries = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            v = draw(st.integers(-2, 2))
            if v:
                entries[i, j] = CycloNum.rational(v)
    return Mat(n, entries)


def test_products():
    assert lie_bracket(E(2, 1, 1), E(2, 1, 2)) == E(2, 1, 2)
    assert jordan_circ(E(2, 1, 2), E(2, 2, 1)) == Mat.identity(2)
    assert tau_flip(E(2, 1, 2)) == E(2, 1, 2)
    assert tau_flip(E(3, 1, 2)) == E(3, 2, 3)
    assert E(3, 1, 2) @ E(3, 2, 3) == E(3, 1, 3)
    assert not (E(3, 1, 2) @ E(3, 1, 2))


def test_kron_indexing():
    a = E(2, 1, 2)
    b = E(3, 2, 3)
    # ((i-1)l + r, (j-1)l + c)
    assert kron(a, b) == E(6, 2, 6)


def test_inverse():
    m = Mat.from_rows([[1, 2], [3, 4]])
    assert m @ m.inverse() == Mat.identity(2)
    with pytest.raises(ZeroDivisionError):
        Mat.from_rows([[1, 2], [2, 4]]).inverse()


@given(small_mat(), small_mat())
@settings(deadline=None)
def test_tau_is_antiautomorphism(x, y):
    assert (x @ y).tau() == y.tau() @ x.tau()
    assert x.tau().tau() == x
    assert x.tau().trace() == x.trace()


@given(small_mat(), small_mat(), small_mat())
@settings(deadline=None)
def test_jacobi_and_jordan_commutativity(x, y, z):
    j = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))
    assert not j
    assert jordan_circ(x, y) == jordan_circ(y, x)


@given(small_mat())
def test_mat_json(x):
    assert Mat.from_json(x.to_json()) == x


def test_elementary_examples():
    Z2 = AbGroup.parse("Z2")
    A = build_elementary(Z2, [(1,), (1,)])
    assert A.dims() == {(0,): 4}
    B = build_elementary(Z2, [(0,), (1,)])
    assert B.components[(1,)] == [E(2, 1, 2), E(2, 2, 1)]
    assert B.dims() == {(0,): 2, (1,): 2}
    assert verify_grading(B).ok


@pytest.mark.parametrize("kind", ["assoc", "lie", "jordan"])
def test_elementary_verifies_for_every_kind(kind):
    Z4 = AbGroup.parse("Z4")
    A = build_elementary(Z4, [(0,), (1,), (3,)], kind=kind)
    assert verify_grading(A).ok


def test_verify_catches_moved_element():
    Z2 = AbGroup.parse("Z2")
    B = build_elementary(Z2, [(0,), (1,)])
    comps = {(0,): [E(2, 1, 1), E(2, 2, 2), E(2, 1, 2)], (1,): [E(2, 2, 1)]}
    bad = GradedAlgebra(Z2, 2, "assoc", "mn", comps)
    rep = verify_grading(bad)
    assert not rep.ok
    assert any(v["check"] == "closure" for v in rep.violations)
    assert verify_grading(B).ok


def test_verify_catches_dimension_and_carrier():
    Z2 = AbGroup.parse("Z2")
    short = GradedAlgebra(Z2, 2, "assoc", "mn", {(0,): [E(2, 1, 1)]})
    assert {v["check"] for v in verify_grading(short).violations} == {"spanning"}
    dup = GradedAlgebra(Z2, 2, "assoc", "ut", {(0,): [E(2, 1, 1), E(2, 2, 2), E(2, 1, 2)],
                                               (1,): [E(2, 2, 1)]}, (1, 1))
    assert "carrier" in {v["check"] for v in verify_grading(dup).violations}


def test_division_trivial():
    T = FinSubgroup.trivial(AbGroup.parse("Z2"))
    D = build_division(T, Bicharacter.trivial(T))
    assert D.ell == 1
    assert D.X[(0,)] == Mat.identity(1)


def test_division_z2_squared_by_hand():
    T = full("Z2xZ2")
    D = build_division(T, hyperbolic(T))
    assert D.X[(1, 0)] == Mat.from_rows([[1, 0], [0, -1]])
    assert D.X[(0, 1)] == Mat.from_rows([[0, 1], [1, 0]])
    assert D.X[(1, 1)] == D.X[(1, 0)] @ D.X[(0, 1)]
    assert D.X[(1, 0)] @ D.X[(0, 1)] == -(D.X[(0, 1)] @ D.X[(1, 0)])


@pytest.mark.parametrize("name", ["Z2xZ2", "Z3xZ3", "Z2^4", "Z4xZ4", "Z2xZ2xZ3xZ3"])
def test_division_commutators(name):
    T = full(name)
    beta = hyperbolic(T)
    D = build_division(T, beta)
    assert D.ell * D.ell == len(T)
    assert D.commutator_ok()
    assert verify_grading(D.as_grading()).ok


def test_division_z2_4_entries_are_signs():
    D = build_division(full("Z2^4"), hyperbolic(full("Z2^4")))
    assert D.ell == 4
    assert len(D.X) == 16
    vals = {v for x in D.X.values() for v in x.entries.values()}
    assert vals <= {ONE, -ONE}
    assert rank([x.entries for x in D.X.values()]) == 16


def test_division_every_nondegenerate_beta_z2_4():
    T = full("Z2^4")
    count = 0
    for beta in bicharacters(T):
        if beta.is_nondegenerate():
            count += 1
            assert build_division(T, beta).commutator_ok()
    assert count == 28  # |GL_4(F_2)| / |Sp_4(F_2)|


def test_division_rejects():
    T = full("Z2^3")
    with pytest.raises(ValueError):
        build_division(T, Bicharacter.trivial(T))


def test_kronecker_examples():
    T = full("Z2xZ2")
    G = T.ambient
    D = build_division(T, hyperbolic(T))
    one = kronecker_grading(G, [(0, 0)], D)
    assert same_components(one, D.as_grading())
    A = kronecker_grading(G, [(0, 0), (1, 0)], D)
    assert A.n == 4
    assert A.dims() == {g: 4 for g in G.elements()}
    assert verify_grading(A).ok
    triv = FinSubgroup.trivial(G)
    D1 = build_division(triv, Bicharacter.trivial(triv))
    assert same_components(kronecker_grading(G, [(0, 0), (1, 1)], D1),
                           build_elementary(G, [(0, 0), (1, 1)]))


def test_kronecker_over_sharp_group():
    T = full("Z2xZ2")
    D = build_division(T, hyperbolic(T))
    Gs = T.ambient.sharp()
    A = kronecker_grading(Gs, [(-1, 0, 0), (-2, 1, 0)], D)
    assert verify_grading(A).ok
    assert {g[0] for g in A.components} == {-1, 0, 1}


def test_coarsen_examples():
    Z4 = AbGroup.parse("Z4")
    A = build_elementary(Z4, [(0,), (1,), (2,)])
    assert same_components(coarsen(A, Hom.identity(Z4)), A)
    one = coarsen(A, Hom.trivial(Z4))
    assert one.dims() == {one.group.identity: 9}
    to_z2 = Hom(Z4, AbGroup.parse("Z2"), [(1,)])
    C = coarsen(A, to_z2)
    assert C.dims() == {(0,): 5, (1,): 4}
    assert verify_grading(C).ok


def test_eta_bar_values():
    T = full("Z2xZ2")
    D = build_division(T, hyperbolic(T))
    eta = eta_bar_from_division(D)
    # tau(diag(1,-1)) = -diag(1,-1); the shift and its product with the clock are tau-fixed
    assert eta((0, 0)) == 0
    assert eta((1, 0)) == HALF
    assert eta((0, 1)) == 0
    assert eta((1, 1)) == 0
    assert eta.polarization_ok(D.beta)


def test_eta_bar_needs_tau_compatible_basis():
    T = full("Z3xZ3")
    D = build_division(T, hyperbolic(T))
    with pytest.raises(ValueError, match="tau-compatible"):
        eta_bar_from_division(D)


def test_grading_json_round_trip():
    T = full("Z2xZ2")
    A = kronecker_grading(T.ambient, [(0, 0), (0, 1)], build_division(T, hyperbolic(T)), kind="lie")
    B = GradedAlgebra.from_json(A.to_json())
    assert B.to_json() == A.to_json()
    assert same_components(A, B) and B.kind == "lie"


def test_roots_in_clock():
    T = full("Z3xZ3")
    D = build_division(T, hyperbolic(T))
    assert D.X[(1, 0)] == Mat.diag([ONE, root_of_unity(Fraction(1, 3)), root_of_unity(Fraction(2, 3))])
    assert D.X[(1, 0)].trace() == ZERO
