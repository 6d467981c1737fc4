"""Isometries and Klein isometries of integral lattices.

Covers: isometry verification, finite isometry groups of definite lattices by
backtracking, the dagger action of Klein isometries, stabilizers of positive
vectors in hyperbolic lattices, and the corank-one pointwise-fixing decision
procedure.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt

from . import intlinalg as la
from .errors import (
    DimensionMismatch,
    InvalidInput,
    NonPositiveVector,
    NotDefinite,
    NotHyperbolic,
    NotPrimitive,
)
from .lattice import IntegerLattice, Sublattice, signature


@dataclass(frozen=True)
class Isometry:
    lattice: IntegerLattice
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if not is_isometry(self.lattice, m):
            raise InvalidInput("matrix is not an isometry of the lattice")

    def apply(self, v):
        return la.mat_vec(self.matrix, v)

    def inverse(self):
        return Isometry(self.lattice, la.unimodular_inverse(self.matrix))

    def compose(self, other):
        return Isometry(self.lattice, la.mat_mul(self.matrix, other.matrix))


@dataclass(frozen=True)
class KleinIsometry:
    """A lattice isometry together with the holomorphic/anti-holomorphic sign.

    The stored matrix is the plain pull-back; the cone action is the dagger
    sign * matrix.
    """

    isometry: Isometry
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidInput("sign must be +1 or -1")

    @property
    def matrix(self):
        return self.isometry.matrix

    @property
    def lattice(self):
        return self.isometry.lattice

    def dagger_matrix(self):
        s = self.sign
        return tuple(tuple(s * x for x in row) for row in self.matrix)


def is_isometry(lat, matrix):
    """True iff matrix^T * gram * matrix = gram and matrix is in GL_n(Z)."""
    n = lat.rank
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionMismatch("matrix size does not match lattice rank")
    for row in matrix:
        for x in row:
            if not isinstance(x, int):
                return False
    if abs(la.bareiss_det(matrix)) != 1:
        return False
    mt = la.transpose(matrix)
    return la.mat_mul(mt, la.mat_mul(lat.gram, matrix)) == lat.gram


def dagger_apply(klein, v):
    return la.mat_vec(klein.dagger_matrix(), v)


def dagger_compose(f, g):
    """Klein isometry of the composite f o g.

    Pull-backs are contravariant, so the composite's matrix is M_g * M_f and
    the sign multiplies; on daggers this is (f o g)^dag = g^dag o f^dag.
    """
    if f.lattice.gram != g.lattice.gram:
        raise DimensionMismatch("klein isometries live on different lattices")
    return KleinIsometry(
        Isometry(f.lattice, la.mat_mul(g.matrix, f.matrix)), f.sign * g.sign
    )


def klein_inverse(k):
    return KleinIsometry(k.isometry.inverse(), k.sign)


def positive_basis(lat):
    """Rational basis of a maximal positive-definite subspace."""
    diag, t = la.congruence_diagonalize(lat.gram)
    cols = la.transpose(t)
    return [cols[i] for i in range(lat.rank) if diag[i] > 0]


def preserves_positive_orientation(lat, matrix):
    """Sign of det of the pairing of the images of a positive basis against it.

    For signature (1, n-1) this is preservation of the chosen component of
    {q > 0}; for signature (3, n-3) it is the orientation of the positive cone.
    """
    w = positive_basis(lat)
    if not w:
        raise InvalidInput("lattice has no positive part")
    g = lat.gram
    p = tuple(
        tuple(la.dot(la.mat_vec(g, wj), la.mat_vec(matrix, wi)) for wj in w) for wi in w
    )
    d = la.frac_det(p)
    if d == 0:
        raise InvalidInput("degenerate positive-part pairing; not an isometry?")
    return d > 0


# --- short vectors and definite isometry groups ---------------------------


def _pos_def_data(gram):
    """Cholesky-style data: Q(x) = sum_i d[i] * (x_i + sum_{j>i} c[i][j] x_j)^2."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    c = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if a[i][i] <= 0:
            raise NotDefinite("matrix is not positive definite")
        d[i] = a[i][i]
        for j in range(i + 1, n):
            c[i][j] = a[i][j] / a[i][i]
        for r in range(i + 1, n):
            for s in range(i + 1, n):
                a[r][s] -= a[i][r] * a[i][s] / a[i][i]
    return d, c


def vectors_of_norm(gram, m):
    """All integer vectors v with v^T gram v = m, for positive definite gram."""
    n = len(gram)
    if m < 0:
        return []
    if m == 0:
        return [tuple(0 for _ in range(n))]
    d, c = _pos_def_data(gram)
    out = []
    x = [0] * n

    def rec(i, remaining):
        if i < 0:
            if remaining == 0:
                out.append(tuple(x))
            return
        t = sum(c[i][j] * x[j] for j in range(i + 1, n))
        limit = Fraction(remaining) / d[i]
        s = isqrt(int(limit)) + 1
        lo = -t - s
        k = int(lo.numerator // lo.denominator) if isinstance(lo, Fraction) else lo
        while Fraction(k) < -t - s:
            k += 1
        while Fraction(k) <= -t + s:
            term = d[i] * (k + t) ** 2
            if term <= remaining:
                x[i] = k
                rec(i - 1, remaining - term)
            k += 1
        x[i] = 0

    rec(n - 1, Fraction(m))
    return sorted(out)


def _definite_positive_gram(lat):
    sig = signature(lat)
    n = lat.rank
    if sig.as_tuple() == (n, 0, 0):
        return lat.gram
    if sig.as_tuple() == (0, 0, n):
        return tuple(tuple(-x for x in row) for row in lat.gram)
    raise NotDefinite("lattice must be positive or negative definite")


def isometry_group_definite(lat):
    """The full finite group O(L) of a definite lattice, by backtracking.

    Columns of a candidate are chosen among vectors of the right norm and
    filtered by the pairing constraints against previously chosen columns.
    Output is sorted lexicographically by matrix.
    """
    g = _definite_positive_gram(lat)
    n = lat.rank
    norm_cache = {}
    for i in range(n):
        norm_cache.setdefault(g[i][i], None)
    for norm in norm_cache:
        norm_cache[norm] = vectors_of_norm(g, norm)
    results = []
    cols = []

    def pair(u, v):
        return la.dot(la.mat_vec(g, v), u)

    def rec(i):
        if i == n:
            m = tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))
            results.append(m)
            return
        for v in norm_cache[g[i][i]]:
            ok = True
            for j in range(i):
                if pair(cols[j], v) != g[i][j]:
                    ok = False
                    break
            if ok:
                cols.append(v)
                rec(i + 1)
                cols.pop()

    rec(0)
    out = []
    for m in sorted(results):
        if abs(la.bareiss_det(m)) == 1:
            out.append(Isometry(lat, m))
    return out


def isometry_group_order_definite(lat):
    """|O(L)| for definite L via a stabilizer chain.

    At level i the candidate images of e_i (fixing e_1..e_{i-1}) that extend
    to a full isometry form one orbit of the level-(i-1) stabilizer, so the
    order is the product of the extendable-candidate counts.
    """
    g = _definite_positive_gram(lat)
    n = lat.rank
    norm_cache = {}

    def pair(u, v):
        return la.dot(la.mat_vec(g, v), u)

    def candidates(i, prefix):
        norm = g[i][i]
        if norm not in norm_cache:
            norm_cache[norm] = vectors_of_norm(g, norm)
        out = []
        for v in norm_cache[norm]:
            if all(pair(prefix[j], v) == g[i][j] for j in range(len(prefix))):
                out.append(v)
        return out

    def extendable(prefix, i):
        if i == n:
            return True
        for v in candidates(i, prefix):
            prefix.append(v)
            if extendable(prefix, i + 1):
                prefix.pop()
                return True
            prefix.pop()
        return False

    order = 1
    base = [tuple(1 if r == j else 0 for r in range(n)) for j in range(n)]
    for i in range(n):
        prefix = base[:i]
        count = 0
        for v in candidates(i, prefix):
            if extendable(prefix + [v], i + 1):
                count += 1
        order *= count
    return order


# --- pointwise-fixing decision procedure ----------------------------------


@dataclass(frozen=True)
class FixDecision:
    kind: str  # "IdentityOnly" | "Counterexample" | "Undecided"
    witness: tuple = None  # counterexample matrix when kind == "Counterexample"


def fixes_pointwise_implies_identity(lat, sub, search_bound=1):
    """Decide whether every isometry of L restricting to the identity on N
    is the identity.

    Corank one is decided exactly by the block argument: in an adapted basis
    with N spanned by the first rows and completion vector h, an isometry
    fixing N pointwise has last column (x, z) with z = +-1; z = +1 solutions
    are ker(A) cap ker(p^T), z = -1 solutions are integral solutions of
    A x = 2 p, where A is the Gram block of N and p the pairing column of N
    against h.  Corank >= 2 runs a bounded search and returns Undecided when
    it finds nothing.
    """
    if sub.ambient.gram != lat.gram:
        raise DimensionMismatch("sublattice does not live in the given lattice")
    if not sub.is_primitive():
        raise NotPrimitive("N must be primitive in L")
    n = lat.rank
    t = sub.rank
    corank = n - t
    if corank == 0:
        return FixDecision("IdentityOnly")
    cmat = la.complete_basis(sub.basis) if t else la.identity_matrix(n)
    p_basis = la.transpose(cmat)  # columns are the adapted basis vectors
    p_inv = la.unimodular_inverse(p_basis)
    gn = la.mat_mul(la.transpose(p_basis), la.mat_mul(lat.gram, p_basis))

    def to_ambient(m_new):
        return la.mat_mul(p_basis, la.mat_mul(m_new, p_inv))

    def check_and_wrap(m_new):
        m = to_ambient(m_new)
        assert is_isometry(lat, m)
        for b in sub.basis:
            assert la.mat_vec(m, b) == tuple(b)
        return FixDecision("Counterexample", m)

    if corank == 1:
        a = tuple(tuple(gn[i][j] for j in range(t)) for i in range(t))
        p = tuple(gn[i][t] for i in range(t))
        # z = +1: x in ker(A) with p.x = 0
        stacked = a + (p,) if t else ((0,) * t,)
        for x in la.int_kernel(stacked):
            if not la.is_zero_vector(x):
                m_new = _corank1_matrix(t, x, 1)
                return check_and_wrap(m_new)
        # z = -1: A x = 2p
        if t == 0:
            return check_and_wrap(_corank1_matrix(0, (), -1))
        x = la.solve_int(a, tuple(2 * pi for pi in p))
        if x is not None:
            return check_and_wrap(_corank1_matrix(t, x, -1))
        return FixDecision("IdentityOnly")

    # corank >= 2: bounded search over the unknown block
    k = corank
    a = tuple(tuple(gn[i][j] for j in range(t)) for i in range(t))
    b = tuple(tuple(gn[i][t + j] for j in range(k)) for i in range(t))
    cc = tuple(tuple(gn[t + i][t + j] for j in range(k)) for i in range(k))
    found = _search_corank_ge2(a, b, cc, t, k, search_bound)
    if found is not None:
        x_block, z_block = found
        m_new = _block_matrix(t, k, x_block, z_block)
        return check_and_wrap(m_new)
    return FixDecision("Undecided")


def _corank1_matrix(t, x, z):
    n = t + 1
    rows = []
    for i in range(t):
        rows.append(tuple(1 if j == i else (x[i] if j == t else 0) for j in range(n)))
    rows.append(tuple(z if j == t else 0 for j in range(n)))
    return tuple(rows)


def _block_matrix(t, k, x_block, z_block):
    n = t + k
    rows = []
    for i in range(t):
        rows.append(
            tuple(
                1 if j == i else (x_block[i][j - t] if j >= t else 0) for j in range(n)
            )
        )
    for i in range(k):
        rows.append(tuple(z_block[i][j - t] if j >= t else 0 for j in range(n)))
    return tuple(rows)


def _search_corank_ge2(a, b, cc, t, k, bound):
    """Bounded search for [[I, X], [0, Z]] with the isometry conditions.

    Conditions: A X = B (I - Z),  X^T A X + X^T B Z + Z^T B^T X + Z^T C Z = C,
    |det Z| = 1.  Entries of Z and kernel coefficients range over [-bound, bound].
    """
    rng = range(-bound, bound + 1)
    ker = la.int_kernel(a) if t else []
    max_candidates = 300000
    seen = 0
    ident_z = la.identity_matrix(k)
    for z_entries in product(rng, repeat=k * k):
        z = tuple(tuple(z_entries[i * k + j] for j in range(k)) for i in range(k))
        if abs(la.bareiss_det(z)) != 1:
            continue
        rhs_cols = la.transpose(
            la.mat_mul(b, tuple(tuple(ident_z[i][j] - z[i][j] for j in range(k)) for i in range(k)))
        ) if t else [()] * k
        # particular solutions per column
        parts = []
        ok = True
        for j in range(k):
            if t:
                sol = la.solve_int(a, rhs_cols[j])
                if sol is None:
                    ok = False
                    break
                parts.append(sol)
            else:
                parts.append(())
        if not ok:
            continue
        # enumerate kernel shifts per column
        dimker = len(ker)
        shift_space = list(product(rng, repeat=dimker)) if dimker else [()]
        for combo in product(shift_space, repeat=k):
            seen += 1
            if seen > max_candidates:
                return None
            cols = []
            for j in range(k):
                col = list(parts[j])
                for c, kv in zip(combo[j], ker):
                    for r in range(t):
                        col[r] += c * kv[r]
                cols.append(tuple(col))
            x = tuple(tuple(cols[j][i] for j in range(k)) for i in range(t))
            if z == ident_z and all(la.is_zero_vector(row) for row in x):
                continue
            if _second_condition_holds(a, b, cc, x, z):
                return x, z
    return None


def _second_condition_holds(a, b, cc, x, z):
    t = len(a)
    xt = la.transpose(x) if t else ()
    zt = la.transpose(z)
    term = [[0] * len(z) for _ in range(len(z))]
    if t:
        xtax = la.mat_mul(xt, la.mat_mul(a, x))
        xtbz = la.mat_mul(xt, la.mat_mul(b, z))
        ztbtx = la.mat_mul(zt, la.mat_mul(la.transpose(b), x))
        for i in range(len(z)):
            for j in range(len(z)):
                term[i][j] = xtax[i][j] + xtbz[i][j] + ztbtx[i][j]
    ztcz = la.mat_mul(zt, la.mat_mul(cc, z))
    for i in range(len(z)):
        for j in range(len(z)):
            if term[i][j] + ztcz[i][j] != cc[i][j]:
                return False
    return True


# --- generated groups and stabilizers --------------------------------------


@dataclass(frozen=True)
class GroupElement:
    """Element of a generated matrix group: acting matrix, Klein sign, word."""

    matrix: tuple
    sign: int
    word: str


@dataclass(frozen=True)
class GeneratedGroup:
    """Matrix group given by generators, with an enumeration word bound.

    Generators may be Isometry or KleinIsometry; Klein generators act through
    their dagger matrices, and the sign tag is carried along multiplicatively.
    full_orthogonal_plus declares the group to be all isometries preserving
    the selected component, which makes membership decidable.
    """

    lattice: IntegerLattice
    generators: tuple
    word_bound: int = 12
    full_orthogonal_plus: bool = False
    component_base: tuple = None

    def __post_init__(self):
        for g in self.generators:
            if g.lattice.gram != self.lattice.gram:
                raise DimensionMismatch("generator on a different lattice")

    def generator_elements(self):
        out = []
        for i, g in enumerate(self.generators):
            if isinstance(g, KleinIsometry):
                m, s = g.dagger_matrix(), g.sign
            else:
                m, s = g.matrix, 1
            name = f"g{i}"
            out.append(GroupElement(m, s, name))
            minv = la.unimodular_inverse(m)
            if minv != m:
                out.append(GroupElement(minv, s, f"g{i}^-1"))
        return out

    def enumeration(self, bound=None):
        """BFS of distinct elements with words of length <= bound.

        Returns (elements, closed): closed is True when the BFS exhausted the
        group before hitting the bound, i.e. the group is finite and the
        enumeration is complete.
        """
        if bound is None:
            bound = self.word_bound
        n = self.lattice.rank
        ident = GroupElement(la.identity_matrix(n), 1, "e")
        gens = self.generator_elements()
        seen = {ident.matrix: ident}
        frontier = [ident]
        closed = not gens
        for _ in range(bound):
            new_frontier = []
            for el in frontier:
                for g in gens:
                    m = la.mat_mul(g.matrix, el.matrix)
                    if m not in seen:
                        word = g.word if el.word == "e" else g.word + "*" + el.word
                        ne = GroupElement(m, g.sign * el.sign, word)
                        seen[m] = ne
                        new_frontier.append(ne)
            if not new_frontier:
                closed = True
                break
            frontier = new_frontier
        return list(seen.values()), closed

    def elements_up_to(self, bound=None):
        """BFS enumeration of distinct elements with words of length <= bound."""
        return self.enumeration(bound)[0]


def group_membership(gamma, matrix, tester=None, bound=None):
    """Classify matrix against gamma: returns 'in', 'out' or 'unknown'.

    Certified answers come from the full-orthogonal-plus contract, from an
    externally supplied tester (fundamental-domain reduction), or from
    invariant obstructions (determinant sign, component preservation).
    """
    lat = gamma.lattice
    if gamma.full_orthogonal_plus:
        if not is_isometry(lat, matrix):
            return "out"
        base = gamma.component_base
        if base is None:
            raise InvalidInput("full_orthogonal_plus needs a component base")
        return "in" if _pairs_positively(lat, matrix, base) else "out"
    if tester is not None:
        return tester(matrix)
    if not gamma.generators:
        return "in" if matrix == la.identity_matrix(lat.rank) else "out"
    elements, closed = gamma.enumeration(bound)
    for el in elements:
        if el.matrix == matrix:
            return "in"
    if closed:
        # the BFS exhausted a finite group: absence is a certified answer
        return "out"
    # determinant obstruction: dets of group elements multiply from the
    # generator dets, so -1 is reachable only if some generator has det -1
    gen_dets = {la.bareiss_det(g.matrix) for g in gamma.generator_elements()}
    if -1 not in gen_dets and la.bareiss_det(matrix) == -1:
        return "out"
    # component obstruction
    base = gamma.component_base
    if base is not None:
        gens_preserve = all(
            _pairs_positively(lat, g.matrix, base) for g in gamma.generator_elements()
        )
        if gens_preserve and not _pairs_positively(lat, matrix, base):
            return "out"
    return "unknown"


def _pairs_positively(lat, matrix, base):
    img = la.mat_vec(matrix, base)
    return lat.pairing(img, base) > 0


@dataclass(frozen=True)
class StabilizerResult:
    members: tuple  # Isometry
    completeness: str  # "Certified" or "BoundedSearch"
    bound: int
    unresolved: tuple  # candidate matrices with unknown membership

    def is_certified(self):
        return self.completeness == "Certified"


def stabilizer(gamma, x, tester=None):
    """Stab_Gamma(x) for a rational x with q(x) > 0 in a hyperbolic lattice.

    The candidate overgroup is the group of isometries of the definite
    complement x^perp extended over Qx + x^perp and filtered by integrality;
    each candidate is then tested for membership in Gamma.
    """
    lat = gamma.lattice
    n = lat.rank
    if signature(lat).as_tuple() != (1, 0, n - 1):
        raise NotHyperbolic("stabilizer needs a hyperbolic ambient lattice")
    xv = tuple(Fraction(c) for c in x)
    qx = la.dot(la.mat_vec(lat.gram, xv), xv)
    if qx <= 0:
        raise NonPositiveVector("q(x) must be positive")
    xprim = la.primitive_vector(xv)
    comp = _orthogonal_rows(lat, xprim)
    comp_gram = tuple(
        tuple(lat.pairing(u, v) for v in comp) for u in comp
    )
    comp_lat = IntegerLattice(comp_gram)
    phis = isometry_group_definite(comp_lat)
    p_cols = la.transpose((xprim,) + tuple(comp))
    p_inv = la.frac_inverse(p_cols)
    candidates = []
    for phi in phis:
        block = _block_diag_one(phi.matrix)
        m = la.mat_mul(p_cols, la.mat_mul(block, p_inv))
        if all(all(Fraction(v).denominator == 1 for v in row) for row in m):
            mi = tuple(tuple(int(v) for v in row) for row in m)
            if is_isometry(lat, mi):
                candidates.append(mi)
    candidates = sorted(set(candidates))
    members = []
    unresolved = []
    ident = la.identity_matrix(n)
    for m in candidates:
        if m == ident:
            members.append(m)
            continue
        verdict = group_membership(gamma, m, tester=tester)
        if verdict == "in":
            members.append(m)
        elif verdict == "unknown":
            unresolved.append(m)
    completeness = "Certified" if not unresolved else "BoundedSearch"
    return StabilizerResult(
        tuple(Isometry(lat, m) for m in sorted(members)),
        completeness,
        gamma.word_bound,
        tuple(unresolved),
    )


def _orthogonal_rows(lat, x):
    row = (la.mat_vec(lat.gram, x),)
    return la.int_kernel(row)


def _block_diag_one(m):
    k = len(m)
    n = k + 1
    rows = [tuple(1 if j == 0 else 0 for j in range(n))]
    for i in range(k):
        rows.append(tuple(0 if j == 0 else m[i][j - 1] for j in range(n)))
    return tuple(rows)
