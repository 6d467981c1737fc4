import dataclasses
import random

import pytest
from hypothesis import given, settings, strategies as st

from klein_lattice import intlinalg as la
from klein_lattice.cones import (
    PositiveCone,
    cone_from_halfspaces,
    cone_from_rays,
    cone_meets_component,
    dirichlet_domain,
    dual,
    faces,
    find_trivial_stabilizer_point,
    interiors_meet_component,
    intersect,
    make_membership_tester,
    rational_closure_member,
    reduce_into_domain,
    sample_cone_points,
    siegel_intersections,
    transform_cone,
    verify_fundamental_domain,
)
from klein_lattice.errors import (
    CoverageFailure,
    DisjointnessFailure,
    InvalidInput,
    NonPositiveVector,
    NonStabilizing,
    NotHyperbolic,
    NontrivialStabilizer,
)
from klein_lattice.isometry import GeneratedGroup, Isometry
from klein_lattice.lattice import IntegerLattice, U

PELL = ((3, 4), (2, 3))


def test_quadrant_self_dual():
    q = cone_from_halfspaces(2, ((1, 0), (0, 1)))
    assert set(q.rays) == {(1, 0), (0, 1)}
    assert dual(q).same_cone(q)


def test_intersect_quadrant():
    c1 = cone_from_halfspaces(2, ((1, 0),))
    c2 = cone_from_halfspaces(2, ((0, 1),))
    ci = intersect(c1, c2)
    assert set(ci.rays) == {(1, 0), (0, 1)}


def test_faces_simplicial_3d():
    c = cone_from_rays(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    fs = faces(c)
    assert len(fs) == 8  # 1 + 3 + 3 + 1
    dims = sorted(f.dim() for f in fs)
    assert dims == [0, 1, 1, 1, 2, 2, 2, 3]


def test_double_description_roundtrip():
    rng = random.Random(9)
    for _ in range(40):
        dim = rng.randint(2, 4)
        k = rng.randint(1, dim + 2)
        rays = []
        for _ in range(k):
            v = tuple(rng.randint(-3, 3) for _ in range(dim))
            if any(v):
                rays.append(v)
        if not rays:
            continue
        c = cone_from_rays(dim, tuple(rays))
        again = cone_from_rays(dim, c.rays, c.lines)
        assert again.same_cone(c)
        assert again.rays == c.rays
        for r in rays:
            assert c.contains(r)


def test_dual_dual_identity_on_full_dimensional():
    c = cone_from_rays(3, ((1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)))
    assert c.is_full_dimensional()
    assert dual(dual(c)).same_cone(c)


def test_non_pointed_and_zero_cones():
    hp = cone_from_halfspaces(2, ((1, 0),))
    assert len(hp.lines) == 1
    z = cone_from_halfspaces(2, ((1, 0), (-1, 0), (0, 1), (0, -1)))
    assert z.is_zero()
    full = cone_from_halfspaces(2, ())
    assert len(full.lines) == 2 and not full.halfspaces


def test_contains_is_exact_on_rationals():
    from fractions import Fraction

    c = cone_from_rays(2, ((2, 1), (2, -1)))
    assert c.contains((1, 0))
    assert c.contains((Fraction(1), Fraction(1, 2)))
    assert not c.contains((Fraction(1), Fraction(51, 100)))


def test_rational_closure_membership(pell_cone):
    assert rational_closure_member(pell_cone, (1, 0))
    assert rational_closure_member(pell_cone, (0, 0))
    assert not rational_closure_member(pell_cone, (0, 1))  # q < 0
    assert not rational_closure_member(pell_cone, (-1, 0))  # wrong component
    # U has rational isotropic boundary rays inside C+
    pos_u = PositiveCone(U(), (1, 1))
    assert rational_closure_member(pos_u, (1, 0))
    assert rational_closure_member(pos_u, (0, 1))
    assert not rational_closure_member(pos_u, (0, -1))


def test_positive_cone_validation():
    with pytest.raises(NotHyperbolic):
        PositiveCone(IntegerLattice(((2, 0), (0, 2))), (1, 0))
    with pytest.raises(NonPositiveVector):
        PositiveCone(IntegerLattice(((2, 0), (0, -4))), (0, 1))


def test_empty_input_rejected():
    from klein_lattice.errors import EmptyInput

    with pytest.raises(EmptyInput):
        cone_from_rays(0, ())
    with pytest.raises(EmptyInput):
        cone_from_halfspaces(-1, ())


def test_domain_construction_rank_limit():
    from klein_lattice.errors import UnsupportedRank

    gram = [[-2 if i == j else 0 for j in range(5)] for i in range(5)]
    gram[0][0] = 2
    lat = IntegerLattice(tuple(map(tuple, gram)))
    pos = PositiveCone(lat, (1, 0, 0, 0, 0))
    gamma = GeneratedGroup(lat, (), word_bound=3, component_base=(1, 0, 0, 0, 0))
    with pytest.raises(UnsupportedRank):
        dirichlet_domain(gamma, pos, (1, 0, 0, 0, 0))
    # pure cone algebra has no rank limit
    c = cone_from_rays(5, tuple(tuple(1 if j <= i else 0 for j in range(5)) for i in range(5)))
    assert c.is_full_dimensional()


def test_reduction_failure_on_budget(pell_cert):
    from klein_lattice.errors import ReductionFailure

    far = (3, 1)
    for _ in range(22):  # deep in the orbit: needs two moves of depth <= 20
        far = la.mat_vec(PELL, far)
    assert pell_cert.positive_cone.contains_open(far)
    with pytest.raises(ReductionFailure):
        reduce_into_domain(pell_cert, far, max_steps=1)
    point, _, steps = reduce_into_domain(pell_cert, far)
    assert pell_cert.domain_contains(point) and steps >= 2


def test_dirichlet_domain_pell(pell_cert):
    assert set(pell_cert.domain.rays) == {(2, 1), (2, -1)}
    assert set(pell_cert.halfspaces) == {(1, 2), (1, -2)}
    assert pell_cert.stabilization_depth <= 2
    assert pell_cert.rays_in_closure


def test_dirichlet_domain_trivial_group(pell_lattice, pell_cone):
    gamma = GeneratedGroup(pell_lattice, (), word_bound=4, component_base=(1, 0))
    cert = dirichlet_domain(gamma, pell_cone, (1, 0))
    assert cert.full_cone and cert.halfspaces == ()
    report, _ = verify_fundamental_domain(cert, samples=20, seed=1)
    assert report["covering"]["status"] == "pass"


def test_dirichlet_domain_dihedral_half_sector(pell_cert, dihedral_cert):
    # the dihedral domain is half of the cyclic-domain sector
    assert len(dihedral_cert.halfspaces) == 2
    for ray in dihedral_cert.domain.rays:
        assert pell_cert.domain.contains(ray)
    assert not pell_cert.domain.same_cone(dihedral_cert.domain)


def test_dirichlet_rejects_fixed_base(dihedral_group, pell_cone):
    with pytest.raises(NontrivialStabilizer):
        dirichlet_domain(dihedral_group, pell_cone, (1, 0))


def test_dirichlet_nonstabilizing(pell_lattice, pell_cone):
    gamma = GeneratedGroup(
        pell_lattice, (Isometry(pell_lattice, PELL),), word_bound=1,
        component_base=(1, 0),
    )
    with pytest.raises(NonStabilizing):
        dirichlet_domain(gamma, pell_cone, (1, 0), word_bound=1)


def test_dirichlet_domain_rank3_finite_group():
    # sign-flip group of order 4 on diag(2,-2,-2): the domain is cut by the
    # four reflection walls and verification runs the 3-D machinery
    lat = IntegerLattice(((2, 0, 0), (0, -2, 0), (0, 0, -2)))
    pos = PositiveCone(lat, (1, 0, 0))
    g1 = Isometry(lat, ((1, 0, 0), (0, -1, 0), (0, 0, 1)))
    g2 = Isometry(lat, ((1, 0, 0), (0, 1, 0), (0, 0, -1)))
    gamma = GeneratedGroup(lat, (g1, g2), word_bound=6, component_base=(1, 0, 0))
    xi = find_trivial_stabilizer_point(gamma, pos)
    cert = dirichlet_domain(gamma, pos, xi)
    assert len(cert.halfspaces) == 2
    report, _ = verify_fundamental_domain(
        cert, samples=40, seed=2, disjoint_word_len=4
    )
    assert report["covering"]["status"] == "pass"
    assert report["disjointness"]["status"] == "pass"
    # second Pell-style lattice: diag(2,-6), unit [[2,3],[1,2]]
    lat2 = IntegerLattice(((2, 0), (0, -6)))
    pos2 = PositiveCone(lat2, (1, 0))
    m2 = Isometry(lat2, ((2, 3), (1, 2)))
    gamma2 = GeneratedGroup(lat2, (m2,), word_bound=14, component_base=(1, 0))
    cert2 = dirichlet_domain(gamma2, pos2, (1, 0), word_bound=14)
    assert cert2.rays_in_closure
    report2, _ = verify_fundamental_domain(
        cert2, samples=60, seed=6, disjoint_word_len=5
    )
    assert report2["covering"]["status"] == "pass"
    cones2, rep2 = siegel_intersections(
        pos2, cert2.domain, cert2.domain, gamma2, word_bound=14
    )
    assert rep2["count"] == 3


def test_halfspaces_stable_under_doubling_bound(
    pell_group, pell_cone, dihedral_group
):
    c6 = dirichlet_domain(pell_group, pell_cone, (1, 0), word_bound=6)
    c12 = dirichlet_domain(pell_group, pell_cone, (1, 0), word_bound=12)
    assert frozenset(c6.halfspaces) == frozenset(c12.halfspaces)
    d6 = dirichlet_domain(dihedral_group, pell_cone, (3, -1), word_bound=6)
    d12 = dirichlet_domain(dihedral_group, pell_cone, (3, -1), word_bound=12)
    assert frozenset(d6.halfspaces) == frozenset(d12.halfspaces)


def test_verify_pell(pell_cert):
    report, updated = verify_fundamental_domain(
        pell_cert, samples=100, seed=11, disjoint_word_len=6
    )
    assert report["covering"]["status"] == "pass"
    assert report["disjointness"]["checked"] == 12
    assert updated.covering_evidence["seed"] == 11


def test_verify_threaded_matches_sequential(pell_cert):
    r1, _ = verify_fundamental_domain(pell_cert, samples=40, seed=3, threads=1)
    r2, _ = verify_fundamental_domain(pell_cert, samples=40, seed=3, threads=4)
    assert r1 == r2


def test_verify_shrunken_domain_fails_coverage(pell_cert):
    bad = dataclasses.replace(pell_cert, halfspaces=pell_cert.halfspaces + ((1, -40),))
    with pytest.raises(CoverageFailure):
        verify_fundamental_domain(bad, samples=50, seed=5, disjoint_word_len=2)


def test_verify_enlarged_domain_fails_disjointness(pell_cert, pell_cone, pell_group):
    # half-plane containing the domain and overlapping its translates
    bad_cone = cone_from_rays(2, ((1, 2), (2, -1)))
    bad = dataclasses.replace(
        pell_cert, halfspaces=bad_cone.halfspaces, domain=bad_cone
    )
    with pytest.raises(DisjointnessFailure):
        verify_fundamental_domain(bad, samples=5, seed=5, disjoint_word_len=4)


def test_reduction_terminates_and_is_reproducible(pell_cert):
    pts = sample_cone_points(pell_cert.positive_cone, 25, seed=42)
    for p in pts:
        q1, w1, s1 = reduce_into_domain(pell_cert, p)
        q2, w2, s2 = reduce_into_domain(pell_cert, p)
        assert (q1, w1, s1) == (q2, w2, s2)
        assert pell_cert.domain_contains(q1)


def test_membership_tester(pell_cert):
    tester = make_membership_tester(pell_cert)
    assert tester(la.mat_mul(PELL, PELL)) == "in"
    assert tester(((1, 0), (0, -1))) == "out"
    assert tester(la.unimodular_inverse(PELL)) == "in"


def test_find_trivial_stabilizer_point_examples(
    pell_lattice, pell_cone, pell_group, dihedral_group
):
    # trivial group: first point found is the first cone point enumerated
    gamma0 = GeneratedGroup(pell_lattice, (), word_bound=4, component_base=(1, 0))
    assert find_trivial_stabilizer_point(gamma0, pell_cone) == (1, 0)
    # Pell group is torsion-free on C: (1,0) already works
    assert find_trivial_stabilizer_point(pell_group, pell_cone) == (1, 0)
    # O+(U): any point off the diagonal works, and the diagonal is excluded
    u = U()
    pos_u = PositiveCone(u, (1, 1))
    gamma_u = GeneratedGroup(
        u, (Isometry(u, ((0, 1), (1, 0))),), word_bound=4,
        full_orthogonal_plus=True, component_base=(1, 1),
    )
    pt = find_trivial_stabilizer_point(gamma_u, pos_u)
    assert pt[0] != pt[1] and pos_u.contains_open(pt)
    # dihedral: the found point has certified trivial stabilizer
    pt_d = find_trivial_stabilizer_point(dihedral_group, pell_cone)
    from klein_lattice.isometry import stabilizer

    st_ = stabilizer(dihedral_group, pt_d)
    assert st_.is_certified() and len(st_.members) == 1


def test_siegel_pell(pell_cert, pell_group, pell_cone):
    cones, report = siegel_intersections(
        pell_cone, pell_cert.domain, pell_cert.domain, pell_group, word_bound=20
    )
    assert report["count"] == 3
    keys = {c.canonical_key() for c in cones}
    ray_sets = sorted(c.rays for c in cones)
    assert ray_sets == [((2, -1),), ((2, -1), (2, 1)), ((2, 1),)]
    cones10, _ = siegel_intersections(
        pell_cone, pell_cert.domain, pell_cert.domain, pell_group, word_bound=10
    )
    assert {c.canonical_key() for c in cones10} == keys


def test_siegel_trivial_group(pell_lattice, pell_cone, pell_cert):
    gamma0 = GeneratedGroup(pell_lattice, (), word_bound=4, component_base=(1, 0))
    cones, report = siegel_intersections(
        pell_cone, pell_cert.domain, pell_cert.domain, gamma0, word_bound=4
    )
    assert len(cones) == 1 and cones[0].same_cone(pell_cert.domain)


def test_siegel_disjoint_translates(pell_cone, pell_group, pell_cert):
    m4 = la.mat_mul(la.mat_mul(PELL, PELL), la.mat_mul(PELL, PELL))
    far = transform_cone(pell_cert.domain, m4)
    inter = intersect(pell_cert.domain, far)
    assert inter.is_zero()
    small = cone_from_rays(2, ((5, 2), (5, 1)))
    gamma0 = GeneratedGroup(
        pell_cone.lattice, (), word_bound=2, component_base=(1, 0)
    )
    cones, _ = siegel_intersections(pell_cone, far, small, gamma0, word_bound=2)
    assert cones == []


def test_siegel_rejects_rays_outside_closure(pell_cone, pell_group):
    bad = cone_from_rays(2, ((0, 1), (1, 0)))
    with pytest.raises(InvalidInput):
        siegel_intersections(pell_cone, bad, bad, pell_group, word_bound=3)


def test_cone_meets_component(pell_cone):
    inside = cone_from_rays(2, ((2, 1), (2, -1)))
    assert cone_meets_component(inside, pell_cone)
    outside = cone_from_rays(2, ((1, 1), (1, 2)))  # q < 0 sector
    assert not cone_meets_component(outside, pell_cone)
    negative = cone_from_rays(2, ((-2, 1), (-2, -1)))  # other component
    assert not cone_meets_component(negative, pell_cone)
    # a wide cone crossing the light cone does meet C
    wide = cone_from_rays(2, ((1, 1), (1, -1)))
    assert cone_meets_component(wide, pell_cone)


def test_interiors_meet_component(pell_cert, pell_cone):
    d = pell_cert.domain
    assert interiors_meet_component(d, d, pell_cone)
    moved = transform_cone(d, PELL)
    assert not interiors_meet_component(d, moved, pell_cone)
