"""Exact linear algebra over the integers and rationals.

Matrices are tuples of tuples (rows); vectors are tuples.  Everything is
either a Python int or a fractions.Fraction -- no floating point.  Isometry
matrices act on column vectors, sublattice bases are stored as row vectors.
"""

from fractions import Fraction
from math import gcd


def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_vector(n):
    return (0,) * n


def transpose(a):
    return tuple(zip(*a)) if a else ()


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_mat(v, a):
    # row vector times matrix
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0])))


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def vec_add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v):
    return tuple(c * x for x in v)


def is_zero_vector(v):
    return all(x == 0 for x in v)


def gram_pairing(gram, u, v):
    return dot(mat_vec(gram, v), u)


def vector_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, int(x) if isinstance(x, int) else abs(x.numerator))
    return g


def primitive_vector(v):
    """Scale a rational vector to a primitive integer vector, same direction."""
    if all(x == 0 for x in v):
        return tuple(0 for _ in v)
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    w = [int(x * den) for x in v]
    g = 0
    for x in w:
        g = gcd(g, abs(x))
    return tuple(x // g for x in w)


def bareiss_det(a):
    """Fraction-free determinant of an integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def frac_det(a):
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        inv = Fraction(1) / m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det


def row_hnf(a):
    """Row Hermite normal form.  Returns (H, U) with U unimodular, U*A = H.

    Pivots are positive, entries above a pivot reduced into [0, pivot).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    h = [list(row) for row in a]
    u = [list(row) for row in identity_matrix(rows)]
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if h[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        u[r], u[piv] = u[piv], u[r]
        # euclidean elimination below the pivot
        while True:
            nz = [i for i in range(r + 1, rows) if h[i][c] != 0]
            if not nz:
                break
            for i in nz:
                q = h[i][c] // h[r][c]
                if q:
                    for j in range(cols):
                        h[i][j] -= q * h[r][j]
                    for j in range(rows):
                        u[i][j] -= q * u[r][j]
                if h[i][c] != 0:
                    h[r], h[i] = h[i], h[r]
                    u[r], u[i] = u[i], u[r]
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                for j in range(cols):
                    h[i][j] -= q * h[r][j]
                for j in range(rows):
                    u[i][j] -= q * u[r][j]
        r += 1
        if r == rows:
            break
    return tuple(tuple(row) for row in h), tuple(tuple(row) for row in u)


def snf(a):
    """Smith normal form.  Returns (D, U, V) with U*A*V = D, U and V unimodular.

    The diagonal of D is nonnegative with d1 | d2 | ... .
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d = [list(row) for row in a]
    u = [list(row) for row in identity_matrix(rows)]
    v = [list(row) for row in identity_matrix(cols)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        for j in range(cols):
            d[dst][j] += q * d[src][j]
        for j in range(rows):
            u[dst][j] += q * u[src][j]

    def add_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(rows, cols):
        # find a nonzero pivot
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, rows):
                while d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    add_row(i, t, -q)
                    if d[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                while d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    add_col(j, t, -q)
                    if d[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        t += 1
    # make diagonal nonnegative and enforce divisibility
    n = min(rows, cols)
    for i in range(n):
        if d[i][i] < 0:
            for j in range(cols):
                d[i][j] = -d[i][j]
            for j in range(rows):
                u[i][j] = -u[i][j]
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            a_, b_ = d[i][i], d[i + 1][i + 1]
            if b_ != 0 and a_ != 0 and b_ % a_ != 0:
                # standard 2x2 repair: add column, re-reduce the block
                add_col(i, i + 1, 1)
                while True:
                    dirty = False
                    if d[i + 1][i] != 0:
                        q = d[i + 1][i] // d[i][i] if d[i][i] != 0 else 0
                        add_row(i + 1, i, -q)
                        if d[i + 1][i] != 0:
                            swap_rows(i, i + 1)
                            dirty = True
                    if d[i][i + 1] != 0:
                        q = d[i][i + 1] // d[i][i] if d[i][i] != 0 else 0
                        add_col(i + 1, i, -q)
                        if d[i][i + 1] != 0:
                            swap_cols(i, i + 1)
                            dirty = True
                    if not dirty and d[i + 1][i] == 0 and d[i][i + 1] == 0:
                        break
                if d[i][i] < 0:
                    for j in range(cols):
                        d[i][j] = -d[i][j]
                    for j in range(rows):
                        u[i][j] = -u[i][j]
                if d[i + 1][i + 1] < 0:
                    for j in range(cols):
                        d[i + 1][j] = -d[i + 1][j]
                    for j in range(rows):
                        u[i + 1][j] = -u[i + 1][j]
                changed = True
        # zero diagonal entries must come last
        for i in range(n - 1):
            if d[i][i] == 0 and d[i + 1][i + 1] != 0:
                swap_rows(i, i + 1)
                swap_cols(i, i + 1)
                changed = True
    return (
        tuple(tuple(row) for row in d),
        tuple(tuple(row) for row in u),
        tuple(tuple(row) for row in v),
    )


def invariant_factors(a):
    d, _, _ = snf(a)
    n = min(len(d), len(d[0]) if d else 0)
    return tuple(d[i][i] for i in range(n) if d[i][i] != 0)


def int_kernel(a):
    """Basis (list of column vectors, as tuples) of {x in Z^n : A x = 0}.

    The basis spans a saturated (primitive) sublattice of Z^n.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows == 0:
        return [tuple(1 if i == j else 0 for i in range(cols)) for j in range(cols)]
    d, _, v = snf(a)
    rank = sum(1 for i in range(min(rows, cols)) if d[i][i] != 0)
    vt = transpose(v)
    return [vt[j] for j in range(rank, cols)]


def solve_int(a, b):
    """One integer solution x of A x = b, or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d, u, v = snf(a)
    ub = mat_vec(u, b)
    y = [0] * cols
    for i in range(rows):
        di = d[i][i] if i < min(rows, cols) else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di != 0:
                return None
            y[i] = ub[i] // di
    return mat_vec(v, tuple(y))


def solve_frac(a, b):
    """One rational solution of A x = b, or None if inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if m[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        x[c] = m[i][cols]
    return tuple(x)


def frac_kernel(a):
    """Basis of the rational kernel {x : A x = 0}."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in row] for row in a]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(cols) if c not in piv_cols]
    basis = []
    for fc in free:
        x = [Fraction(0)] * cols
        x[fc] = Fraction(1)
        for i, c in enumerate(piv_cols):
            x[c] = -m[i][fc]
        basis.append(tuple(x))
    return basis


def frac_inverse(a):
    """Exact inverse of a square rational matrix; None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = Fraction(1) / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def unimodular_inverse(a):
    """Integer inverse of a unimodular integer matrix."""
    inv = frac_inverse(a)
    return tuple(tuple(int(x) for x in row) for row in inv)


def rank(a):
    if not a:
        return 0
    m = [[Fraction(x) for x in row] for row in a]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def complete_basis(b):
    """Extend the rows of b (a primitive-lattice basis) to a basis of Z^n.

    Returns an n x n unimodular matrix whose first len(b) rows span the same
    lattice as the rows of b.
    """
    t = len(b)
    d, u, v = snf(b)
    for i in range(t):
        if d[i][i] != 1:
            raise ValueError("rows do not span a primitive sublattice")
    vinv = unimodular_inverse(v)
    return vinv


def congruence_diagonalize(g):
    """Symmetric congruence diagonalization over the rationals.

    Returns (diag, t) with t invertible rational and t^T g t = diag(diag).
    Pivot search uses diagonal entries first and falls back to the
    rank-2 move row_i += row_j when every remaining diagonal entry is zero.
    """
    n = len(g)
    m = [[Fraction(x) for x in row] for row in g]
    t = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def add_col_row(dst, src, c):
        # congruence: col_dst += c*col_src, then row_dst += c*row_src
        for i in range(n):
            m[i][dst] += c * m[i][src]
        for j in range(n):
            m[dst][j] += c * m[src][j]
        for i in range(n):
            t[i][dst] += c * t[i][src]

    def swap(i, j):
        for r_ in range(n):
            m[r_][i], m[r_][j] = m[r_][j], m[r_][i]
        m[i], m[j] = m[j], m[i]
        for r_ in range(n):
            t[r_][i], t[r_][j] = t[r_][j], t[r_][i]

    for k in range(n):
        if m[k][k] == 0:
            piv = None
            for i in range(k + 1, n):
                if m[i][i] != 0:
                    piv = i
                    break
            if piv is not None:
                swap(k, piv)
            else:
                # all remaining diagonal entries vanish; use an off-diagonal
                found = None
                for i in range(k, n):
                    for j in range(i + 1, n):
                        if m[i][j] != 0:
                            found = (i, j)
                            break
                    if found:
                        break
                if found is None:
                    break  # remaining block is identically zero
                i, j = found
                if i != k:
                    swap(k, i)
                    j = i if j == k else j
                add_col_row(k, j, 1)  # now m[k][k] = 2*m[k][j] != 0
        piv_val = m[k][k]
        for i in range(k + 1, n):
            if m[k][i] != 0:
                add_col_row(i, k, -m[k][i] / piv_val)
    diag = tuple(m[i][i] for i in range(n))
    return diag, tuple(tuple(row) for row in t)
