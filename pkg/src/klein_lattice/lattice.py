"""Integral quadratic lattices: signatures, radicals, complements, saturation,
discriminant groups and the hyperbolic/elliptic/parabolic trichotomy.

All arithmetic is exact; a lattice is just its Gram matrix.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

from . import intlinalg as la
from .errors import DegenerateLattice, DimensionMismatch, InvalidInput


@dataclass(frozen=True)
class IntegerLattice:
    """Finite-rank free abelian group with an integer symmetric bilinear form."""

    gram: tuple

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        for row in g:
            if len(row) != n:
                raise InvalidInput("gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise InvalidInput("gram matrix must be symmetric")

    @property
    def rank(self):
        return len(self.gram)

    def pairing(self, u, v):
        if len(u) != self.rank or len(v) != self.rank:
            raise DimensionMismatch("vector length != lattice rank")
        return la.dot(la.mat_vec(self.gram, v), u)

    def q(self, v):
        return self.pairing(v, v)

    def det(self):
        return la.bareiss_det(self.gram)


@dataclass(frozen=True)
class Signature:
    positive: int
    zero: int
    negative: int

    def as_tuple(self):
        return (self.positive, self.zero, self.negative)


class LatticeType(Enum):
    HYPERBOLIC = "Hyperbolic"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    OTHER = "Other"


@dataclass(frozen=True)
class Sublattice:
    """Sublattice given by an explicit basis (row vectors in ambient coords)."""

    ambient: IntegerLattice
    basis: tuple

    def __post_init__(self):
        b = tuple(tuple(int(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", b)
        n = self.ambient.rank
        for row in b:
            if len(row) != n:
                raise DimensionMismatch("basis vector length != ambient rank")
        if b and la.rank(b) != len(b):
            raise InvalidInput("basis vectors are linearly dependent")

    @property
    def rank(self):
        return len(self.basis)

    def is_primitive(self):
        """True iff ambient/span is torsion-free (all invariant factors 1)."""
        if not self.basis:
            return True
        return all(f == 1 for f in la.invariant_factors(self.basis))

    def gram(self):
        """Gram matrix of the restricted form in the given basis."""
        g = self.ambient.gram
        return tuple(
            tuple(la.dot(la.mat_vec(g, v), u) for v in self.basis) for u in self.basis
        )

    def as_lattice(self):
        return IntegerLattice(self.gram())

    def contains(self, v):
        """Integral membership of an ambient vector in the span of the basis."""
        if not self.basis:
            return la.is_zero_vector(v)
        return la.solve_int(la.transpose(self.basis), v) is not None


def signature(lat):
    """Signature (positive, zero, negative) by exact congruence diagonalization."""
    diag, _ = la.congruence_diagonalize(lat.gram)
    pos = sum(1 for d in diag if d > 0)
    neg = sum(1 for d in diag if d < 0)
    zero = sum(1 for d in diag if d == 0)
    return Signature(pos, zero, neg)


def radical(lat):
    """Primitive sublattice equal to the integer kernel of the Gram matrix."""
    ker = la.int_kernel(lat.gram)
    return Sublattice(lat, tuple(ker))


def orthogonal_complement(lat, sub):
    """{v in L : <v, s> = 0 for all s in S}, a primitive sublattice."""
    if sub.ambient.gram != lat.gram:
        raise DimensionMismatch("sublattice does not live in the given lattice")
    if not sub.basis:
        return Sublattice(lat, tuple(la.identity_matrix(lat.rank)))
    rows = tuple(la.mat_vec(lat.gram, b) for b in sub.basis)
    ker = la.int_kernel(rows)
    return Sublattice(lat, tuple(ker))


def saturation(lat, sub):
    """Primitive closure (S^perp)^perp of a sublattice."""
    return orthogonal_complement(lat, orthogonal_complement(lat, sub))


def classify_type(lat):
    """Hyperbolic (1,0,r-1) / Elliptic (0,0,r) / Parabolic (0,1,r-1) / Other."""
    s = signature(lat)
    r = lat.rank
    if s.as_tuple() == (1, 0, r - 1):
        return LatticeType.HYPERBOLIC
    if s.as_tuple() == (0, 0, r):
        return LatticeType.ELLIPTIC
    if s.as_tuple() == (0, 1, r - 1):
        return LatticeType.PARABOLIC
    return LatticeType.OTHER


@dataclass(frozen=True)
class DiscriminantGroup:
    """L*/L of a nondegenerate lattice: invariant factors plus rational lifts.

    lift_matrix columns are generators of L* modulo L, in ambient coordinates;
    column i has order invariant_factors[i].
    """

    invariant_factors: tuple
    lift_matrix: tuple  # rows of Fractions; columns are the generators

    @property
    def order(self):
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n

    def generators(self):
        cols = la.transpose(self.lift_matrix)
        return list(cols)


def discriminant_group(lat):
    """Invariant factors of coker(gram : L -> L*) with rational generator lifts."""
    d = lat.det()
    if d == 0:
        raise DegenerateLattice("discriminant group needs det != 0")
    dmat, u, v = la.snf(lat.gram)
    n = lat.rank
    factors = []
    gens = []
    for i in range(n):
        di = dmat[i][i]
        if di > 1:
            factors.append(di)
            col = tuple(Fraction(v[r][i], di) for r in range(n))
            gens.append(col)
    lift = tuple(tuple(g[r] for g in gens) for r in range(n)) if gens else ()
    return DiscriminantGroup(tuple(factors), lift)


def discriminant_action(lat, disc, matrix):
    """Matrix of the action of an isometry on L*/L over the stored generators.

    Entry (i, j) is the coefficient of generator i in the image of generator j,
    reduced mod invariant_factors[i].
    """
    gens = disc.generators()
    k = len(gens)
    if k == 0:
        return ()
    cols = []
    for g in gens:
        img = la.mat_vec(matrix, g)
        # solve img = sum_i c_i gens_i + integral vector
        # over the generators with their orders: set up integer system after
        # clearing denominators by the lcm of orders
        cols.append(_express_in_disc(lat, disc, img))
    return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))


def _express_in_disc(lat, disc, vec):
    """Coefficients of a dual vector in terms of the discriminant generators."""
    gens = disc.generators()
    orders = disc.invariant_factors
    n = lat.rank
    # unknowns: c_1..c_k integers, m in Z^n; equation sum c_i g_i + m = vec
    # scale by D = lcm of denominators to make everything integral
    scale = 1
    for x in vec:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    for g in gens:
        for x in g:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    k = len(gens)
    a = []
    for r in range(n):
        row = [int(gens[i][r] * scale) for i in range(k)]
        row += [scale if c == r else 0 for c in range(n)]
        a.append(tuple(row))
    b = tuple(int(vec[r] * scale) for r in range(n))
    sol = la.solve_int(tuple(a), b)
    if sol is None:
        raise InvalidInput("vector is not in the dual lattice")
    return tuple(sol[i] % orders[i] for i in range(k))


def is_discriminant_minus_id(lat, matrix):
    """True iff the isometry acts as -id on the discriminant group."""
    disc = discriminant_group(lat)
    act = discriminant_action(lat, disc, matrix)
    for i in range(len(act)):
        for j in range(len(act)):
            want = (-1) % disc.invariant_factors[i] if i == j else 0
            if act[i][j] % disc.invariant_factors[i] != want:
                return False
    return True


def direct_sum(l1, l2):
    n1, n2 = l1.rank, l2.rank
    g = []
    for i in range(n1):
        g.append(tuple(l1.gram[i]) + (0,) * n2)
    for i in range(n2):
        g.append((0,) * n1 + tuple(l2.gram[i]))
    return IntegerLattice(tuple(g))


def rescale(lat, m):
    if m == 0:
        raise InvalidInput("rescale by zero is not a lattice")
    return IntegerLattice(tuple(tuple(m * x for x in row) for row in lat.gram))


def sublattice_index(lat, sub):
    """Index [L : S] when S has full rank; None marks infinite index."""
    if sub.rank != lat.rank:
        return None
    d = la.bareiss_det(sub.basis)
    return abs(d)


# named built-in lattices -------------------------------------------------

_U = ((0, 1), (1, 0))

# E8 Cartan matrix; chain 1-3-4-5-6-7-8 with node 2 attached to node 4
_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def _e8_gram():
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2
    for i, j in _E8_EDGES:
        g[i][j] = g[j][i] = -1
    return tuple(tuple(row) for row in g)


def U():
    return IntegerLattice(_U)


def E8():
    return IntegerLattice(_e8_gram())


def E8_minus():
    return rescale(E8(), -1)


def A1():
    return IntegerLattice(((2,),))


def A1_minus():
    return IntegerLattice(((-2,),))


def K3():
    """U^3 + E8(-1)^2, the rank-22 lattice of signature (3, 19)."""
    lat = U()
    lat = direct_sum(lat, U())
    lat = direct_sum(lat, U())
    lat = direct_sum(lat, E8_minus())
    lat = direct_sum(lat, E8_minus())
    return lat


BUILTIN_LATTICES = {
    "U": U,
    "E8": E8,
    "E8(-1)": E8_minus,
    "A1": A1,
    "A1(-1)": A1_minus,
    "K3": K3,
}


def builtin(name):
    try:
        return BUILTIN_LATTICES[name]()
    except KeyError:
        raise InvalidInput(f"unknown built-in lattice {name!r}") from None
