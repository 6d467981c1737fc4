"""Rational polyhedral cones and hyperbolic positive cones.

Exact double description (rays <-> halfspaces), rational closure membership,
Dirichlet fundamental domains with verification certificates, and the
Siegel-property intersection enumeration.  All arithmetic is integer/Fraction.
"""

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations

from . import intlinalg as la
from .errors import (
    CoverageFailure,
    DimensionMismatch,
    DisjointnessFailure,
    EmptyInput,
    InvalidInput,
    NonPositiveVector,
    NonStabilizing,
    NotHyperbolic,
    NontrivialStabilizer,
    ReductionFailure,
    SearchExhausted,
    UnsupportedRank,
)
from .isometry import stabilizer
from .lattice import signature


# --- double description ----------------------------------------------------


def _tight_set(inserted, r):
    return frozenset(j for j, hj in enumerate(inserted) if la.dot(hj, r) == 0)


def _insert_halfspace(dim, lines, rays, inserted, h):
    """One incremental DD step.  rays is a list of (vector, tight-set)."""
    pairings = [la.dot(h, l) for l in lines]
    pivot = next((i for i, p in enumerate(pairings) if p != 0), None)
    new_inserted = inserted + [h]
    if pivot is not None:
        l0 = lines[pivot]
        d0 = pairings[pivot]
        if d0 < 0:
            l0 = tuple(-x for x in l0)
            d0 = -d0
        new_lines = []
        for i, l in enumerate(lines):
            if i == pivot:
                continue
            nl = tuple(d0 * a - pairings[i] * b for a, b in zip(l, l0))
            new_lines.append(la.primitive_vector(nl))
        vectors = [la.primitive_vector(l0)]
        for r, _ in rays:
            dr = la.dot(h, r)
            nr = tuple(d0 * a - dr * b for a, b in zip(r, l0))
            vectors.append(la.primitive_vector(nr))
        new_rays = [
            (v, _tight_set(new_inserted, v))
            for v in dict.fromkeys(vectors)
            if not la.is_zero_vector(v)
        ]
        return new_lines, new_rays
    pos, zero, neg = [], [], []
    for r, tight in rays:
        d = la.dot(h, r)
        if d > 0:
            pos.append((r, tight, d))
        elif d == 0:
            zero.append(r)
        else:
            neg.append((r, tight, d))
    vectors = [r for r, _, _ in pos] + zero
    lineality_dim = len(lines)
    for p, tp, dp in pos:
        for nvec, tn, dn in neg:
            tcommon = tp & tn
            normals = [inserted[j] for j in sorted(tcommon)]
            if la.rank(normals) != dim - lineality_dim - 2:
                continue
            w = tuple(dp * a - dn * b for a, b in zip(nvec, p))
            w = la.primitive_vector(w)
            if not la.is_zero_vector(w):
                vectors.append(w)
    new_rays = [
        (v, _tight_set(new_inserted, v)) for v in dict.fromkeys(vectors)
    ]
    return lines, new_rays


def dd_rays(dim, halfspaces, equalities=()):
    """Extreme rays and lineality of {x : h.x >= 0, e.x = 0}."""
    lines = [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]
    rays = []
    inserted = []
    constraints = []
    for e in equalities:
        constraints.append(tuple(e))
        constraints.append(tuple(-x for x in e))
    constraints.extend(tuple(h) for h in halfspaces)
    for h in constraints:
        if la.is_zero_vector(h):
            continue
        lines, rays = _insert_halfspace(dim, lines, rays, inserted, h)
        inserted.append(h)
    out_rays = tuple(sorted({r for r, _ in rays if not la.is_zero_vector(r)}))
    out_lines = tuple(sorted({l for l in lines if not la.is_zero_vector(l)}))
    return out_rays, out_lines


@dataclass(frozen=True)
class PolyhedralCone:
    """Rational polyhedral cone with both descriptions kept consistent.

    rays/lines generate the cone; halfspaces/equalities cut it out.  All four
    hold primitive integer vectors; rays keep their geometric orientation.
    """

    ambient_dim: int
    rays: tuple
    lines: tuple
    halfspaces: tuple
    equalities: tuple

    def __post_init__(self):
        for r in self.rays:
            for h in self.halfspaces:
                if la.dot(h, r) < 0:
                    raise InvalidInput("ray violates a halfspace")
            for e in self.equalities:
                if la.dot(e, r) != 0:
                    raise InvalidInput("ray violates an equality")
        for l in self.lines:
            for h in self.halfspaces + self.equalities:
                if la.dot(h, l) != 0:
                    raise InvalidInput("line not contained in a constraint boundary")

    def contains(self, x):
        if len(x) != self.ambient_dim:
            raise DimensionMismatch("point dimension mismatch")
        return all(la.dot(h, x) >= 0 for h in self.halfspaces) and all(
            la.dot(e, x) == 0 for e in self.equalities
        )

    def contains_strictly(self, x):
        """Interior membership; meaningful for full-dimensional cones."""
        return all(la.dot(h, x) > 0 for h in self.halfspaces) and all(
            la.dot(e, x) == 0 for e in self.equalities
        )

    def generators(self):
        gens = list(self.rays)
        for l in self.lines:
            gens.append(l)
            gens.append(tuple(-x for x in l))
        return gens

    def dim(self):
        gens = self.generators()
        return la.rank(gens) if gens else 0

    def is_full_dimensional(self):
        return self.dim() == self.ambient_dim

    def is_zero(self):
        return not self.rays and not self.lines

    def canonical_key(self):
        if not self.lines:
            return (self.rays, ())
        proj_rays = tuple(
            sorted(la.primitive_vector(_project_off(r, self.lines)) for r in self.rays)
        )
        lin_hnf, _ = la.row_hnf(self.lines)
        lin_rows = tuple(row for row in lin_hnf if not la.is_zero_vector(row))
        return (proj_rays, lin_rows)

    def same_cone(self, other):
        if self.ambient_dim != other.ambient_dim:
            return False
        return all(other.contains(g) for g in self.generators()) and all(
            self.contains(g) for g in other.generators()
        )


def _project_off(v, lines):
    """Project v off span(lines) with the euclidean form, exactly."""
    w = [Fraction(x) for x in v]
    for b in lines:
        bb = sum(Fraction(x) * x for x in b)
        wb = sum(x * Fraction(y) for x, y in zip(w, b))
        if bb:
            w = [x - wb / bb * Fraction(y) for x, y in zip(w, b)]
    return tuple(w)


def cone_from_halfspaces(dim, halfspaces, equalities=()):
    if dim <= 0:
        raise EmptyInput("ambient dimension must be positive")
    hs = tuple(la.primitive_vector(h) for h in halfspaces)
    eqs = tuple(la.primitive_vector(e) for e in equalities)
    for v in hs + eqs:
        if len(v) != dim:
            raise DimensionMismatch("halfspace dimension mismatch")
    rays, lines = dd_rays(dim, hs, eqs)
    can_hs, can_eqs = dd_rays(dim, rays, lines)
    cone = PolyhedralCone(dim, rays, lines, can_hs, can_eqs)
    for h in hs:
        for g in cone.generators():
            if la.dot(h, g) < 0:
                raise InvalidInput("double description round-trip failed")
    return cone


def cone_from_rays(dim, rays, lines=()):
    if dim <= 0:
        raise EmptyInput("ambient dimension must be positive")
    rs = tuple(la.primitive_vector(r) for r in rays if not la.is_zero_vector(r))
    ls = tuple(la.primitive_vector(l) for l in lines if not la.is_zero_vector(l))
    for v in rs + ls:
        if len(v) != dim:
            raise DimensionMismatch("ray dimension mismatch")
    can_hs, can_eqs = dd_rays(dim, rs, ls)
    can_rays, can_lines = dd_rays(dim, can_hs, can_eqs)
    cone = PolyhedralCone(dim, can_rays, can_lines, can_hs, can_eqs)
    for r in rs:
        if not cone.contains(r):
            raise InvalidInput("double description round-trip failed")
    return cone


def dual(cone):
    """Dual cone {y : <y, x> >= 0 for all x in the cone}."""
    return cone_from_rays(cone.ambient_dim, cone.halfspaces, cone.equalities)


def intersect(c1, c2):
    if c1.ambient_dim != c2.ambient_dim:
        raise DimensionMismatch("cones live in different dimensions")
    return cone_from_halfspaces(
        c1.ambient_dim,
        c1.halfspaces + c2.halfspaces,
        c1.equalities + c2.equalities,
    )


def faces(cone):
    """All faces (every codimension; the cone itself and its apex included)."""
    out = {}
    m = len(cone.halfspaces)
    for k in range(m + 1):
        for subset in combinations(range(m), k):
            extra = tuple(cone.halfspaces[j] for j in subset)
            f = cone_from_halfspaces(
                cone.ambient_dim, cone.halfspaces, cone.equalities + extra
            )
            out.setdefault(f.canonical_key(), f)
    return list(out.values())


def transform_cone(cone, matrix):
    rays = tuple(la.mat_vec(matrix, r) for r in cone.rays)
    lines = tuple(la.mat_vec(matrix, l) for l in cone.lines)
    return cone_from_rays(cone.ambient_dim, rays, lines)


# --- positive cones in hyperbolic lattices ---------------------------------


@dataclass(frozen=True)
class PositiveCone:
    """Selected component of {q > 0} in a hyperbolic lattice."""

    lattice: object
    component_base: tuple

    def __post_init__(self):
        n = self.lattice.rank
        if signature(self.lattice).as_tuple() != (1, 0, n - 1):
            raise NotHyperbolic("positive cone needs signature (1, 0, n-1)")
        base = tuple(Fraction(x) for x in self.component_base)
        object.__setattr__(self, "component_base", base)
        if self.q(base) <= 0:
            raise NonPositiveVector("component base must have q > 0")

    @property
    def dim(self):
        return self.lattice.rank

    def q(self, v):
        g = self.lattice.gram
        return la.dot(la.mat_vec(g, v), v)

    def pairing(self, u, v):
        g = self.lattice.gram
        return la.dot(la.mat_vec(g, v), u)

    def contains_open(self, x):
        return self.q(x) > 0 and self.pairing(x, self.component_base) > 0

    def gram_functional(self, v):
        """The covector <v, .> of the lattice form, as a primitive vector."""
        return la.primitive_vector(la.mat_vec(self.lattice.gram, v))


def rational_closure_member(pos, x):
    """Membership of a rational point in C+ = hull of rational points of C-bar.

    C+ consists of 0, the open component C, and the rational isotropic rays on
    its boundary; an irrational boundary direction cannot be represented by a
    rational input in the first place.
    """
    xv = tuple(Fraction(c) for c in x)
    if all(c == 0 for c in xv):
        return True
    if pos.q(xv) < 0:
        return False
    return pos.pairing(xv, pos.component_base) > 0


# --- deciding whether a polyhedral cone meets the open component C ---------


def _simplex_max(b):
    """Exact maximum of a^T B a over the standard simplex.

    Support sets are enumerated; for each one the Lagrange system is solved
    exactly when nonsingular, and feasible critical values are collected.  A
    minimal-support maximizer always yields a nonsingular system, so the true
    maximum is among the candidates; every candidate is attained, so the
    maximum of the candidates is exact.
    """
    m = len(b)
    best = None
    for size in range(1, m + 1):
        for support in combinations(range(m), size):
            k = len(support)
            mat = []
            for i in support:
                mat.append(
                    tuple(Fraction(2 * b[i][j]) for j in support) + (Fraction(-1),)
                )
            mat.append(tuple(Fraction(1) for _ in support) + (Fraction(0),))
            rhs = tuple(Fraction(0) for _ in support) + (Fraction(1),)
            if la.frac_det(mat) == 0:
                continue
            sol = la.solve_frac(mat, rhs)
            if sol is None:
                continue
            coords = sol[:k]
            lam = sol[k]
            if any(c < 0 for c in coords):
                continue
            value = lam / 2
            if best is None or value > best:
                best = value
    return best


def cone_meets_component(cone, pos):
    """True iff the polyhedral cone contains a point with q > 0 in C."""
    if cone.ambient_dim != pos.dim:
        raise DimensionMismatch("cone and positive cone dimension mismatch")
    base_h = pos.gram_functional(pos.component_base)
    clipped = intersect(
        cone, cone_from_halfspaces(cone.ambient_dim, (base_h,))
    )
    gens = clipped.generators()
    if not gens:
        return False
    g = pos.lattice.gram
    b = tuple(tuple(la.dot(la.mat_vec(g, w), v) for w in gens) for v in gens)
    mx = _simplex_max(b)
    return mx is not None and mx > 0


def interiors_meet_component(c1, c2, pos):
    """True iff int(c1) cap int(c2) cap C is nonempty (all full-dim data)."""
    k = intersect(c1, c2)
    if not k.is_full_dimensional():
        return False
    return cone_meets_component(k, pos)


# --- Dirichlet fundamental domains ------------------------------------------


@dataclass(frozen=True)
class DomainCertificate:
    """A materialized Dirichlet domain plus the data needed to re-verify it.

    The domain is the polyhedral part; the actual fundamental domain is its
    intersection with the rational closure C+.  full_cone marks the trivial
    case D = C+ (no halfspaces).  Orbit elements are retained so that the
    reduction procedure and membership tests are reproducible.
    """

    positive_cone: PositiveCone
    group: object
    xi: tuple
    word_bound: int
    halfspaces: tuple
    domain: PolyhedralCone
    full_cone: bool
    stabilization_depth: int
    orbit_elements: tuple  # (matrix, word) pairs, identity excluded
    rays_in_closure: bool
    covering_evidence: dict = None
    disjointness_evidence: dict = None

    def domain_contains(self, x):
        if not rational_closure_member(self.positive_cone, x):
            return False
        return all(la.dot(h, x) >= 0 for h in self.halfspaces)

    def with_evidence(self, covering=None, disjointness=None):
        return replace(
            self,
            covering_evidence=covering if covering is not None else self.covering_evidence,
            disjointness_evidence=disjointness
            if disjointness is not None
            else self.disjointness_evidence,
        )


def _group_layers(gamma, bound):
    """BFS layers of group elements: layers[d] = elements first seen at depth d."""
    n = gamma.lattice.rank
    ident = la.identity_matrix(n)
    gens = gamma.generator_elements()
    seen = {ident: "e"}
    layers = [[(ident, "e")]]
    frontier = [(ident, "e")]
    for _ in range(bound):
        nxt = []
        for m, w in frontier:
            for g in gens:
                prod_ = la.mat_mul(g.matrix, m)
                if prod_ not in seen:
                    word = g.word if w == "e" else g.word + "*" + w
                    seen[prod_] = word
                    nxt.append((prod_, word))
        layers.append(nxt)
        if not nxt:
            break
        frontier = nxt
    return layers


def dirichlet_domain(gamma, pos, xi, word_bound=None):
    """Dirichlet domain D = {x in C+ : <xi, x> <= <gamma xi, x> for all gamma}.

    Materialized from orbit points up to the word bound, with implied
    halfspaces pruned; the certificate records at which depth the pruned
    halfspace set stabilized.  Raises NontrivialStabilizer if the base point
    is fixed by a nontrivial group element (or triviality cannot be
    certified), and NonStabilizing if the halfspace set was still growing at
    the bound.  Domain construction is limited to rank <= 4 (orbit growth);
    pure cone algebra has no such limit.
    """
    if pos.dim > 4:
        raise UnsupportedRank("domain construction is limited to rank <= 4")
    if word_bound is None:
        word_bound = gamma.word_bound
    xiv = tuple(Fraction(c) for c in xi)
    if not pos.contains_open(xiv):
        raise NonPositiveVector("xi must lie in the open cone C")
    st = stabilizer(gamma, xiv)
    if not st.is_certified():
        raise NontrivialStabilizer("could not certify that the stabilizer is trivial")
    if len(st.members) != 1:
        raise NontrivialStabilizer("base point has a nontrivial stabilizer")
    layers = _group_layers(gamma, word_bound)
    n = pos.dim
    g = pos.lattice.gram
    seen_points = {tuple(xiv)}
    halfspace_raw = []  # (depth, covector, matrix, word)
    for depth, layer in enumerate(layers):
        if depth == 0:
            continue
        for m, w in layer:
            p = la.mat_vec(m, xiv)
            if tuple(p) in seen_points:
                continue
            seen_points.add(tuple(p))
            diff = tuple(a - b for a, b in zip(p, xiv))
            h = la.primitive_vector(la.mat_vec(g, diff))
            halfspace_raw.append((depth, h, m, w))
    if not halfspace_raw:
        full = cone_from_halfspaces(n, ())
        return DomainCertificate(
            pos, gamma, xiv, word_bound, (), full, True, 0, (), True
        )
    per_depth = {}
    max_depth = max(d for d, _, _, _ in halfspace_raw)
    for d in range(1, max_depth + 1):
        hs = [h for dep, h, _, _ in halfspace_raw if dep <= d]
        cone = cone_from_halfspaces(n, tuple(dict.fromkeys(hs)))
        per_depth[d] = (frozenset(cone.halfspaces), cone)
    final_set, final_cone = per_depth[max_depth]
    stabilization_depth = None
    for d in range(1, max_depth + 1):
        if per_depth[d][0] == final_set:
            stabilization_depth = d
            break
    if stabilization_depth is None or stabilization_depth >= word_bound:
        raise NonStabilizing(
            "halfspace set still growing at the word bound", bound=word_bound
        )
    rays_ok = all(
        pos.q(r) >= 0 and pos.pairing(r, pos.component_base) > 0
        for r in final_cone.rays
    ) and not final_cone.lines
    orbit_elements = tuple((m, w) for _, _, m, w in halfspace_raw)
    return DomainCertificate(
        pos,
        gamma,
        xiv,
        word_bound,
        final_cone.halfspaces,
        final_cone,
        False,
        stabilization_depth,
        orbit_elements,
        rays_ok,
    )


def reduce_into_domain(cert, x, max_steps=1000):
    """Move x into the domain by greedily decreasing <xi, .> over the
    recorded orbit moves.  Returns (point, matrix, steps), matrix * x = point.

    If x is outside D, some recorded halfspace is violated, and the inverse
    of its defining orbit element strictly decreases the pairing; values lie
    in a discrete subset bounded below, so the loop terminates.
    """
    pos = cert.positive_cone
    xiv = cert.xi
    n = pos.dim
    current = tuple(Fraction(c) for c in x)
    word_matrix = la.identity_matrix(n)
    moves = [la.unimodular_inverse(m) for m, _ in cert.orbit_elements]
    for g in cert.group.generator_elements():
        moves.append(g.matrix)
        moves.append(la.unimodular_inverse(g.matrix))
    moves = list(dict.fromkeys(moves))
    for step in range(max_steps):
        if all(la.dot(h, current) >= 0 for h in cert.halfspaces):
            return current, word_matrix, step
        val = pos.pairing(xiv, current)
        best = None
        for mv in moves:
            cand = la.mat_vec(mv, current)
            v = pos.pairing(xiv, cand)
            if v < val and (best is None or v < best[0]):
                best = (v, cand, mv)
        if best is None:
            raise ReductionFailure("no strictly decreasing move available")
        _, current, mv = best
        word_matrix = la.mat_mul(mv, word_matrix)
    raise ReductionFailure("reduction step budget exhausted", bound=max_steps)


def make_membership_tester(cert):
    """Decide membership in the certificate's group via orbit reduction.

    M is in the group iff reducing M*xi lands exactly on xi with reduction
    word W satisfying W*M = id; landing elsewhere in D certifies M outside.
    """

    def tester(matrix):
        y = la.mat_vec(matrix, cert.xi)
        try:
            point, w, _ = reduce_into_domain(cert, y)
        except ReductionFailure:
            return "unknown"
        if tuple(point) != tuple(cert.xi):
            return "out"
        wm = la.mat_mul(w, matrix)
        return "in" if wm == la.identity_matrix(cert.positive_cone.dim) else "out"

    return tester


def find_trivial_stabilizer_point(gamma, pos, height_bound=12):
    """Deterministic search for a rational point of C with certified trivial
    stabilizer: integer vectors enumerated by increasing height, lex order."""
    n = pos.dim
    for height in range(1, height_bound + 1):
        for v in _integer_vectors_of_height(n, height):
            if not pos.contains_open(v):
                continue
            st = stabilizer(gamma, v)
            if st.is_certified() and len(st.members) == 1:
                return v
    raise SearchExhausted(
        f"no certified trivial-stabilizer point up to height {height_bound}",
        bound=height_bound,
    )


def _integer_vectors_of_height(n, h):
    def rec(prefix):
        if len(prefix) == n:
            if max(abs(c) for c in prefix) == h:
                yield tuple(prefix)
            return
        for c in range(-h, h + 1):
            yield from rec(prefix + [c])

    yield from rec([])


# --- Siegel property --------------------------------------------------------


def siegel_intersections(pos, pi1, pi2, gamma, word_bound=None):
    """Distinct nonzero intersections (gamma . Pi1) cap Pi2 over the group.

    Returns (cones, report); report records the depth at which the collection
    stopped growing.  Raises NonStabilizing when it was still growing at the
    bound.  Ray containment of both cones in C+ is checked first.
    """
    if word_bound is None:
        word_bound = gamma.word_bound
    for cone in (pi1, pi2):
        for r in cone.rays:
            if not rational_closure_member(pos, r):
                raise InvalidInput("input cone has a ray outside C+")
        if cone.lines:
            raise InvalidInput("input cones must be pointed (inside C+)")
    layers = _group_layers(gamma, word_bound)
    found = {}
    growth = []
    for depth, layer in enumerate(layers):
        new = 0
        for m, _ in layer:
            moved = transform_cone(pi1, m)
            inter = intersect(moved, pi2)
            if inter.is_zero():
                continue
            key = inter.canonical_key()
            if key not in found:
                found[key] = inter
                new += 1
        growth.append(new)
    stabilized_at = None
    for d in range(len(growth)):
        if all(g == 0 for g in growth[d + 1:]):
            stabilized_at = d
            break
    if stabilized_at is None or stabilized_at >= word_bound:
        raise NonStabilizing(
            "intersection collection still growing at the bound", bound=word_bound
        )
    report = {
        "count": len(found),
        "stabilized_at_depth": stabilized_at,
        "word_bound": word_bound,
    }
    cones = [found[k] for k in sorted(found.keys())]
    return cones, report


# --- fundamental domain verification ----------------------------------------


def sample_cone_points(pos, samples, seed, box=9):
    """Seeded rational sample points of the open component C."""
    rng = random.Random(seed)
    n = pos.dim
    out = []
    attempts = 0
    while len(out) < samples:
        attempts += 1
        if attempts > 10000 * samples:
            raise SearchExhausted("sampling the cone failed; box too small?")
        v = tuple(rng.randint(-box, box) for _ in range(n))
        if pos.contains_open(v):
            out.append(v)
    return out


def verify_fundamental_domain(
    cert, samples=200, seed=0, disjoint_word_len=6, max_steps=2000, threads=1
):
    """Sampled covering plus exact interior disjointness for a certificate.

    Covering: each sample point of C is moved into D by the reduction
    procedure.  Disjointness: for every nonidentity word up to the bound,
    int(D) cap gamma . int(D) cap C is empty (exact polyhedral check).
    Raises CoverageFailure / DisjointnessFailure accordingly; returns
    (report, certificate-with-evidence) on success.  threads > 1 fans the
    sample reductions out over a thread pool with a deterministic merge.
    """
    pos = cert.positive_cone
    points = sample_cone_points(pos, samples, seed)
    max_moves = 0
    if not cert.full_cone:

        def reduce_one(p):
            try:
                reduced, _, steps = reduce_into_domain(cert, p, max_steps=max_steps)
            except ReductionFailure as exc:
                return ("fail", p, exc)
            return ("ok", reduced, steps)

        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(reduce_one, points))
        else:
            outcomes = [reduce_one(p) for p in points]
        for p, outcome in zip(points, outcomes):
            if outcome[0] == "fail":
                raise CoverageFailure(
                    f"point {p} could not be reduced", point=p
                ) from outcome[2]
            reduced, steps = outcome[1], outcome[2]
            if not cert.domain_contains(reduced):
                raise CoverageFailure(f"point {p} reduced outside D", point=p)
            max_moves = max(max_moves, steps)
    covering = {
        "samples": samples,
        "seed": seed,
        "max_reduction_steps": max_moves,
        "status": "pass",
    }
    disjointness = {"word_bound": disjoint_word_len, "checked": 0, "status": "pass"}
    if not cert.full_cone:
        layers = _group_layers(cert.group, disjoint_word_len)
        dcone = cert.domain
        checked = 0
        for depth, layer in enumerate(layers):
            if depth == 0:
                continue
            for m, word in layer:
                moved = transform_cone(dcone, m)
                checked += 1
                if interiors_meet_component(dcone, moved, pos):
                    raise DisjointnessFailure(
                        f"interior overlap with translate by {word}", word=word
                    )
        disjointness["checked"] = checked
    report = {"covering": covering, "disjointness": disjointness}
    return report, cert.with_evidence(covering=covering, disjointness=disjointness)
