import random

import pytest
from hypothesis import given, settings, strategies as st

from klein_lattice import intlinalg as la
from klein_lattice.errors import NotDefinite, NotHyperbolic, NotPrimitive
from klein_lattice.isometry import (
    GeneratedGroup,
    Isometry,
    KleinIsometry,
    dagger_apply,
    dagger_compose,
    fixes_pointwise_implies_identity,
    group_membership,
    is_isometry,
    isometry_group_definite,
    isometry_group_order_definite,
    klein_inverse,
    preserves_positive_orientation,
    stabilizer,
    vectors_of_norm,
)
from klein_lattice.lattice import (
    A1_minus,
    E8,
    E8_minus,
    IntegerLattice,
    Sublattice,
    U,
    direct_sum,
)

PELL = ((3, 4), (2, 3))


def test_is_isometry_examples():
    u = U()
    assert is_isometry(u, ((0, 1), (1, 0)))
    assert is_isometry(u, ((1, 0), (0, 1)))
    d = IntegerLattice(((2, 0), (0, -4)))
    assert is_isometry(d, PELL)
    assert not is_isometry(d, ((2, 0), (0, 1)))
    assert not is_isometry(u, ((1, 1), (0, 1)))


def test_definite_group_small():
    g1 = isometry_group_definite(A1_minus())
    assert [g.matrix for g in g1] == [((-1,),), ((1,),)]
    g2 = isometry_group_definite(IntegerLattice(((-2, 0), (0, -2))))
    assert len(g2) == 8
    mats = {g.matrix for g in g2}
    # closed under product and inverse, and every member is an isometry
    for a in g2:
        assert la.unimodular_inverse(a.matrix) in mats
        for b in g2:
            assert la.mat_mul(a.matrix, b.matrix) in mats


def brute_force_isometries(gram, bound=2):
    """Oracle: scan all integer matrices with small entries."""
    from itertools import product

    n = len(gram)
    out = []
    for entries in product(range(-bound, bound + 1), repeat=n * n):
        m = tuple(tuple(entries[i * n + j] for j in range(n)) for i in range(n))
        mt = la.transpose(m)
        if la.mat_mul(mt, la.mat_mul(gram, m)) == gram and abs(la.bareiss_det(m)) == 1:
            out.append(m)
    return sorted(out)


def test_definite_group_matches_bruteforce_oracle():
    for gram in (((-2,),), ((-2, 0), (0, -2)), ((2, -1), (-1, 2)), ((-2, 1), (1, -4))):
        lat = IntegerLattice(gram)
        assert [g.matrix for g in isometry_group_definite(lat)] == brute_force_isometries(gram)


def test_definite_group_counting_route():
    assert isometry_group_order_definite(A1_minus()) == 2
    assert isometry_group_order_definite(IntegerLattice(((-2, 0), (0, -2)))) == 8
    a2 = IntegerLattice(((2, -1), (-1, 2)))
    assert isometry_group_order_definite(a2) == 12
    assert len(isometry_group_definite(a2)) == 12


def test_not_definite():
    with pytest.raises(NotDefinite):
        isometry_group_definite(U())


def test_vectors_of_norm_e8_roots():
    assert len(vectors_of_norm(E8().gram, 2)) == 240


@pytest.mark.slow
def test_e8_isometry_group_order_stretch():
    """|O(E8(-1))| = 696729600, counted by the stabilizer chain and
    cross-checked by a Schreier-Sims orbit-stabilizer oracle over the
    reflections in the eight basis roots."""
    lat = E8_minus()
    order = isometry_group_order_definite(lat)
    assert order == 696729600
    assert _schreier_sims_order(lat) == 696729600


def _schreier_sims_order(lat):
    g = lat.gram
    n = lat.rank

    def reflection(i):
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                val = 1 if r == c else 0
                # s_i(e_c) = e_c - 2<e_c, e_i>/<e_i, e_i> * e_i
                if r == i:
                    val += g[i][c]  # -2*g[i][c]/(-2)
                row.append(val)
            rows.append(tuple(row))
        return tuple(rows)

    gens = [reflection(i) for i in range(n)]
    order = 1
    points = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    for pt in points:
        orbit = {pt: la.identity_matrix(n)}
        frontier = [pt]
        while frontier:
            x = frontier.pop()
            for m in gens:
                y = la.mat_vec(m, x)
                if y not in orbit:
                    orbit[y] = la.mat_mul(m, orbit[x])
                    frontier.append(y)
        order *= len(orbit)
        # Schreier generators for the stabilizer of pt
        new_gens = set()
        for x, t in orbit.items():
            for m in gens:
                y = la.mat_vec(m, x)
                rep = orbit[y]
                sg = la.mat_mul(la.unimodular_inverse(rep), la.mat_mul(m, t))
                if sg != la.identity_matrix(n):
                    new_gens.add(sg)
        gens = list(new_gens)
        if not gens:
            break
    return order


def test_fixes_pointwise_corank1_identityonly():
    l = direct_sum(U(), A1_minus())
    n = Sublattice(l, ((1, 0, 0), (0, 0, 1)))
    assert fixes_pointwise_implies_identity(l, n).kind == "IdentityOnly"


def test_fixes_pointwise_counterexample_u_plus_u():
    l = direct_sum(U(), U())
    n = Sublattice(l, ((1, 0, 0, 0),))
    out = fixes_pointwise_implies_identity(l, n)
    assert out.kind == "Counterexample"
    m = out.witness
    assert is_isometry(l, m)
    assert la.mat_vec(m, (1, 0, 0, 0)) == (1, 0, 0, 0)
    assert m != la.identity_matrix(4)


def test_fixes_pointwise_corank1_z_minus_one_branch():
    # diag(2,-2) with N = <e1>: the reflection in e2 fixes N pointwise
    l = IntegerLattice(((2, 0), (0, -2)))
    out = fixes_pointwise_implies_identity(l, Sublattice(l, ((1, 0),)))
    assert out.kind == "Counterexample"
    assert out.witness == ((1, 0), (0, -1))


def test_fixes_pointwise_corank2_undecided():
    # frozen instance: the bounded search finds nothing at bound 1
    l = IntegerLattice(((0, 1, 4), (1, -4, 3), (4, 3, -1)))
    out = fixes_pointwise_implies_identity(l, Sublattice(l, ((1, 0, 0),)))
    assert out.kind == "Undecided"


def test_fixes_pointwise_requires_primitive():
    u = U()
    with pytest.raises(NotPrimitive):
        fixes_pointwise_implies_identity(u, Sublattice(u, ((2, 0),)))


def test_fixes_pointwise_corank0():
    u = U()
    out = fixes_pointwise_implies_identity(u, Sublattice(u, ((1, 0), (0, 1))))
    assert out.kind == "IdentityOnly"


# --- klein isometries ---------------------------------------------------------


def test_dagger_sign_involution():
    u = U()
    k = KleinIsometry(Isometry(u, la.identity_matrix(2)), -1)
    c = dagger_compose(k, k)
    assert c.sign == 1 and c.matrix == la.identity_matrix(2)
    assert dagger_apply(k, (2, 3)) == (-2, -3)


def test_dagger_of_holomorphic_is_plain_pullback():
    u = U()
    swap = Isometry(u, ((0, 1), (1, 0)))
    k = KleinIsometry(swap, 1)
    assert k.dagger_matrix() == swap.matrix


KLEIN_MATS = [
    ((0, 1), (1, 0)),
    ((1, 0), (0, 1)),
    ((-1, 0), (0, -1)),
    ((0, -1), (-1, 0)),
]


@given(
    st.sampled_from(KLEIN_MATS),
    st.sampled_from((1, -1)),
    st.sampled_from(KLEIN_MATS),
    st.sampled_from((1, -1)),
)
@settings(max_examples=64, deadline=None)
def test_dagger_composition_law(m1, s1, m2, s2):
    u = U()
    f = KleinIsometry(Isometry(u, m1), s1)
    g = KleinIsometry(Isometry(u, m2), s2)
    fg = dagger_compose(f, g)
    assert fg.sign == s1 * s2
    # (f o g)^dag = g^dag o f^dag as matrices
    assert fg.dagger_matrix() == la.mat_mul(g.dagger_matrix(), f.dagger_matrix())
    inv = klein_inverse(f)
    assert la.mat_mul(inv.dagger_matrix(), f.dagger_matrix()) == la.identity_matrix(2)


# --- stabilizers ----------------------------------------------------------------


def test_stabilizer_oplus_u():
    u = U()
    gamma = GeneratedGroup(
        u,
        (Isometry(u, ((0, 1), (1, 0))),),
        word_bound=6,
        full_orthogonal_plus=True,
        component_base=(1, 1),
    )
    st_ = stabilizer(gamma, (1, 1))
    assert st_.is_certified()
    assert sorted(m.matrix for m in st_.members) == [
        ((0, 1), (1, 0)),
        ((1, 0), (0, 1)),
    ]
    # every member fixes x; the set is closed under products
    mats = {m.matrix for m in st_.members}
    for a in mats:
        assert la.mat_vec(a, (1, 1)) == (1, 1)
        for b in mats:
            assert la.mat_mul(a, b) in mats


def test_stabilizer_pell_certified_trivial(pell_group):
    st_ = stabilizer(pell_group, (1, 0))
    assert st_.is_certified()
    assert len(st_.members) == 1
    # oracle: every element of the cyclic Pell group has |trace| >= 2 and
    # det 1; the only candidate fixing (1,0) besides id has det -1
    assert la.bareiss_det(PELL) == 1


def test_stabilizer_dihedral(dihedral_group):
    st_ = stabilizer(dihedral_group, (1, 0))
    assert len(st_.members) == 2  # the reflection fixes (1, 0)
    st2 = stabilizer(dihedral_group, (3, 1))
    assert st2.is_certified() and len(st2.members) == 1


def test_stabilizer_contains_constructed_fix(dihedral_group):
    # x = sum of the orbit of y under <reflection> is fixed by construction
    refl = ((1, 0), (0, -1))
    y = (5, 2)
    x = tuple(a + b for a, b in zip(y, la.mat_vec(refl, y)))
    st_ = stabilizer(dihedral_group, x)
    assert refl in {m.matrix for m in st_.members}


def test_stabilizer_errors(pell_group):
    with pytest.raises(NotHyperbolic):
        stabilizer(
            GeneratedGroup(A1_minus(), (), component_base=None), (1,)
        )
    from klein_lattice.errors import NonPositiveVector

    with pytest.raises(NonPositiveVector):
        stabilizer(pell_group, (0, 1))


def test_group_membership_verdicts(pell_group):
    m2 = la.mat_mul(PELL, PELL)
    assert group_membership(pell_group, m2) == "in"
    assert group_membership(pell_group, ((1, 0), (0, -1))) == "out"  # det -1


def test_group_membership_closed_enumeration_certifies_out():
    # a finite group closes its BFS, so absence is a certified 'out' even
    # without an invariant obstruction (det +1 candidate below)
    d = IntegerLattice(((2, 0, 0), (0, -2, 0), (0, 0, -2)))
    g1 = Isometry(d, ((1, 0, 0), (0, -1, 0), (0, 0, 1)))
    g2 = Isometry(d, ((1, 0, 0), (0, 1, 0), (0, 0, -1)))
    gamma = GeneratedGroup(d, (g1, g2), word_bound=8, component_base=(1, 0, 0))
    elements, closed = gamma.enumeration()
    assert closed and len(elements) == 4
    swap23 = ((1, 0, 0), (0, 0, 1), (0, 1, 0))  # det -1... use a det +1 outsider
    rot = ((1, 0, 0), (0, 0, -1), (0, 1, 0))
    assert la.bareiss_det(rot) == 1
    assert group_membership(gamma, rot) == "out"


def test_orientation():
    d = IntegerLattice(((2, 0), (0, -4)))
    assert preserves_positive_orientation(d, PELL)
    assert preserves_positive_orientation(d, ((1, 0), (0, -1)))
    assert not preserves_positive_orientation(d, ((-1, 0), (0, 1)))
