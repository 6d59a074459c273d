"""Exact dense matrices over Z, Q and F_p, and their normal forms.

Matrices are tuples of tuples, row major.  Entries are python ints over Z
and F_p (reduced representatives in [0, p)) and Fractions over Q; there is
no floating point anywhere.  Vectors are flat tuples and are always read as
column vectors: a map acts by ``mat_vec(A, x)`` on the left.
"""

from fractions import Fraction


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Ring:
    """One of the three coefficient rings: Z, Q or F_p (p prime)."""

    __slots__ = ("kind", "p")

    def __init__(self, kind, p=None):
        if kind not in ("Z", "Q", "Fp"):
            raise ValueError("unknown ring kind %r" % (kind,))
        if kind == "Fp":
            if not _is_prime(p):
                raise ValueError("modulus %r is not prime" % (p,))
        elif p is not None:
            raise ValueError("modulus only makes sense for Fp")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "p", p)

    def __setattr__(self, *a):
        raise AttributeError("Ring is immutable")

    def __eq__(self, other):
        return isinstance(other, Ring) and self.kind == other.kind and self.p == other.p

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Fp(%d)" % self.p if self.kind == "Fp" else self.kind

    @property
    def is_field(self):
        return self.kind != "Z"

    def normalize(self, x):
        if self.kind == "Z":
            return int(x)
        if self.kind == "Fp":
            return int(x) % self.p
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def add(self, x, y):
        return (x + y) % self.p if self.kind == "Fp" else x + y

    def sub(self, x, y):
        return (x - y) % self.p if self.kind == "Fp" else x - y

    def mul(self, x, y):
        return (x * y) % self.p if self.kind == "Fp" else x * y

    def neg(self, x):
        return (-x) % self.p if self.kind == "Fp" else -x

    def is_unit(self, x):
        if self.kind == "Z":
            return x in (1, -1)
        return self.normalize(x) != self.zero

    def inv(self, x):
        if self.kind == "Z":
            if x in (1, -1):
                return x
            raise ZeroDivisionError("%r is not a unit in Z" % (x,))
        if self.kind == "Fp":
            return pow(int(x) % self.p, self.p - 2, self.p)
        return Fraction(1) / Fraction(x)


Z = Ring("Z")
Q = Ring("Q")


def Fp(p):
    return Ring("Fp", p)


def ring_from_tag(tag):
    """Parse the file-format ring tag: "Z", "Q" or "Fp:<p>"."""
    if tag == "Z":
        return Z
    if tag == "Q":
        return Q
    if isinstance(tag, str) and tag.startswith("Fp:"):
        return Fp(int(tag[3:]))
    raise ValueError("bad ring tag %r" % (tag,))


def ring_tag(ring):
    return "Fp:%d" % ring.p if ring.kind == "Fp" else ring.kind


# ---------------------------------------------------------------------------
# basic matrix plumbing


def mat(rows, ring=None):
    """Freeze a row-major matrix, normalizing entries if a ring is given."""
    if ring is None:
        return tuple(tuple(r) for r in rows)
    return tuple(tuple(ring.normalize(x) for x in r) for r in rows)


def shape(A):
    return (len(A), len(A[0]) if A else 0)


def zeros(r, c, ring=Z):
    z = ring.zero
    return tuple((z,) * c for _ in range(r))


def identity(n, ring=Z):
    o, z = ring.one, ring.zero
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def transpose(A):
    return tuple(zip(*A)) if A else ()


def mat_add(ring, A, B):
    return tuple(tuple(ring.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B))

def mat_sub(ring, A, B):
    return tuple(tuple(ring.sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_neg(ring, A):
    return tuple(tuple(ring.neg(x) for x in r) for r in A)


def mat_scale(ring, c, A):
    return tuple(tuple(ring.mul(c, x) for x in r) for r in A)


def mat_mul(ring, A, B):
    ra, ca = shape(A)
    rb, cb = shape(B)
    if ca != rb:
        raise ValueError("shape mismatch %dx%d * %dx%d" % (ra, ca, rb, cb))
    Bt = transpose(B)
    if ring.kind == "Fp":
        p = ring.p
        return tuple(
            tuple(sum(x * y for x, y in zip(row, col)) % p for col in Bt) for row in A
        )
    out = tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in Bt) for row in A
    )
    if ring.kind == "Q":
        return mat(out, ring)
    return out


def mat_vec(ring, A, x):
    return tuple(ring.normalize(sum(a * b for a, b in zip(row, x))) for row in A)


def is_zero_matrix(ring, A):
    z = ring.zero
    return all(ring.normalize(x) == z for r in A for x in r)


def mat_equal(ring, A, B):
    return shape(A) == shape(B) and all(
        ring.normalize(x) == ring.normalize(y) for ra, rb in zip(A, B) for x, y in zip(ra, rb)
    )


def hstack(A, B):
    if not A:
        return B
    if not B:
        return A
    return tuple(ra + rb for ra, rb in zip(A, B))


def vstack(A, B):
    return tuple(A) + tuple(B)


def block_diag(blocks, ring=Z):
    rows = sum(shape(b)[0] for b in blocks)
    cols = sum(shape(b)[1] for b in blocks)
    out = [[ring.zero] * cols for _ in range(rows)]
    i = j = 0
    for b in blocks:
        r, c = shape(b)
        for a in range(r):
            out[i + a][j : j + c] = list(b[a])
        i += r
        j += c
    return mat(out)


def columns(A):
    return [tuple(row[j] for row in A) for j in range(shape(A)[1])]


def from_columns(cols, nrows=None):
    if not cols:
        return tuple(() for _ in range(nrows or 0))
    return tuple(tuple(c[i] for c in cols) for i in range(len(cols[0])))


def det(A):
    """Determinant of a square integer matrix (Bareiss, exact)."""
    n, m = shape(A)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [[int(x) for x in r] for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[-1][-1]


# ---------------------------------------------------------------------------
# normal forms
#
# All integer reductions go through the Hermite form with balanced
# (nearest-integer) quotients and eager reduction of already-placed rows:
# one-shot diagonalization is prone to catastrophic intermediate entry
# growth, while repeated Hermite passes keep entries near the size of the
# minors of the input.


def _bdiv(a, d):
    """Quotient leaving the remainder in (-|d|/2, |d|/2]."""
    q, rem = divmod(a, d)
    if d > 0:
        if 2 * rem > d:
            q += 1
    else:
        if 2 * rem < d:
            q += 1
    return q


def _row_hnf_int(M0, rr, cc):
    """(U, H) with U * M0 = H, U unimodular, H in row echelon form.

    Pivots are positive, entries above a pivot lie in [0, pivot).  Input is
    any iterable of integer rows; output rows are lists.
    """
    M = [list(map(int, row)) for row in M0]
    U = [[1 if i == j else 0 for j in range(rr)] for i in range(rr)]
    p = 0
    for j in range(cc):
        if p == rr:
            break
        while True:
            nz = [i for i in range(p, rr) if M[i][j] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(M[i][j]))
            if i0 != p:
                M[p], M[i0] = M[i0], M[p]
                U[p], U[i0] = U[i0], U[p]
            done = True
            Mp, Up = M[p], U[p]
            for i in range(p + 1, rr):
                if M[i][j] != 0:
                    q = _bdiv(M[i][j], Mp[j])
                    if q:
                        Mi, Ui = M[i], U[i]
                        for k in range(cc):
                            Mi[k] -= q * Mp[k]
                        for k in range(rr):
                            Ui[k] -= q * Up[k]
                    if M[i][j] != 0:
                        done = False
            if done:
                break
        if p < rr and M[p][j] != 0:
            if M[p][j] < 0:
                M[p] = [-x for x in M[p]]
                U[p] = [-x for x in U[p]]
            Mp, Up = M[p], U[p]
            for i in range(p):
                q = M[i][j] // Mp[j]
                if q:
                    Mi, Ui = M[i], U[i]
                    for k in range(cc):
                        Mi[k] -= q * Mp[k]
                    for k in range(rr):
                        Ui[k] -= q * Up[k]
            p += 1
    return U, M


def _mul_int(X, Y):
    cols = list(zip(*Y)) if Y else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in X]


def _transpose_int(M, rr, cc):
    return [[M[i][j] for i in range(rr)] for j in range(cc)]


_HNF_CACHE = {}


def _col_hnf(A):
    """(U, H) with H = U * A^T in row echelon form; cached per matrix.

    Columns of A relate to rows of H: row i of U is a kernel vector of A
    whenever row i of H is zero, and H^T = A * U^T is a column echelon
    form of A.
    """
    hit = _HNF_CACHE.get(A)
    if hit is not None:
        return hit
    r, c = shape(A)
    AT = _transpose_int(A, r, c)
    U, H = _row_hnf_int(AT, c, r)
    if len(_HNF_CACHE) > 4096:
        _HNF_CACHE.clear()
    _HNF_CACHE[A] = (U, H)
    return U, H


_SNF_CACHE = {}


def smith_normal_form(A, ring=Z):
    """U, D, V with U*A*V = D.

    Over Z: D is diagonal with nonnegative entries in a divisibility chain
    d1 | d2 | ... and U, V unimodular.  Over Q and F_p the same routine
    degenerates to the rank normal form diag(1, ..., 1, 0, ...).
    """
    r, c = shape(A)
    if ring.is_field:
        return _rank_normal_form(A, ring, r, c)
    hit = _SNF_CACHE.get(A)
    if hit is not None:
        return hit
    M = [[int(x) for x in row] for row in A]
    U = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    V = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    n = min(r, c)
    for _ in range(1000):
        # alternate row and column Hermite passes until diagonal
        P, M = _row_hnf_int(M, r, c)
        U = _mul_int(P, U)
        MT = _transpose_int(M, r, c)
        Q, K = _row_hnf_int(MT, c, r)
        M = _transpose_int(K, c, r)
        V = _mul_int(V, _transpose_int(Q, c, c))
        if any(M[i][j] for i in range(r) for j in range(c) if i != j):
            continue
        # diagonal: repair the divisibility chain one violation at a time
        viol = None
        for i in range(n):
            di = M[i][i]
            for j in range(i + 1, n):
                dj = M[j][j]
                if dj != 0 and (di == 0 or dj % di != 0):
                    viol = (i, j)
                    break
            if viol:
                break
        if viol is None:
            out = (mat(U), mat(M), mat(V))
            if len(_SNF_CACHE) > 4096:
                _SNF_CACHE.clear()
            _SNF_CACHE[A] = out
            return out
        i, j = viol
        for row in M:
            row[i] += row[j]
        for row in V:
            row[i] += row[j]
    raise RuntimeError("smith normal form did not converge")


def _rank_normal_form(A, ring, r, c):
    M = [[ring.normalize(x) for x in row] for row in A]
    o, z = ring.one, ring.zero
    U = [[o if i == j else z for j in range(r)] for i in range(r)]
    V = [[o if i == j else z for j in range(c)] for i in range(c)]
    t = 0
    n = min(r, c)
    while t < n:
        piv = None
        for i in range(t, r):
            for j in range(t, c):
                if M[i][j] != z:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        M[t], M[i0] = M[i0], M[t]
        U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for row in M:
                row[t], row[j0] = row[j0], row[t]
            for row in V:
                row[t], row[j0] = row[j0], row[t]
        inv = ring.inv(M[t][t])
        M[t] = [ring.mul(inv, x) for x in M[t]]
        U[t] = [ring.mul(inv, x) for x in U[t]]
        for i in range(r):
            if i != t and M[i][t] != z:
                q = ring.neg(M[i][t])
                M[i] = [ring.add(x, ring.mul(q, y)) for x, y in zip(M[i], M[t])]
                U[i] = [ring.add(x, ring.mul(q, y)) for x, y in zip(U[i], U[t])]
        for j in range(c):
            if j != t and M[t][j] != z:
                q = ring.neg(M[t][j])
                for row in M:
                    row[j] = ring.add(row[j], ring.mul(q, row[t]))
                for row in V:
                    row[j] = ring.add(row[j], ring.mul(q, row[t]))
        t += 1
    return mat(U), mat(M), mat(V)


class _SNF:
    """Cached decomposition used by the solvers below."""

    __slots__ = ("ring", "U", "D", "V", "r", "c", "diag")

    def __init__(self, A, ring):
        self.ring = ring
        self.U, self.D, self.V = smith_normal_form(A, ring)
        self.r, self.c = shape(A)
        n = min(self.r, self.c)
        self.diag = [self.D[i][i] for i in range(n)]


def solve(A, b, ring=Z):
    """One solution x of A x = b, or None.  b is a column vector (tuple)."""
    X = solve_matrix(A, tuple((v,) for v in b), ring)
    return None if X is None else tuple(row[0] for row in X)


def solve_matrix(A, B, ring=Z):
    """One solution X of A X = B with B a matrix, or None."""
    r, c = shape(A)
    rb, cb = shape(B)
    if rb != r:
        raise ValueError("incompatible shapes")
    if ring.is_field:
        return _solve_matrix_field(A, B, ring, r, c, cb)
    if c == 0:
        return () if is_zero_matrix(ring, B) else None
    U, H = _col_hnf(A)
    # H = U * A^T, so H^T = A * U^T is a column echelon form: solve
    # H^T y = b by forward substitution along the pivots, then x = U^T y
    pivots = []
    for i in range(c):
        lead = next((jj for jj in range(r) if H[i][jj] != 0), None)
        if lead is None:
            break
        pivots.append((i, lead))
    Y = [[0] * cb for _ in range(c)]
    for col in range(cb):
        for i, lead in pivots:
            s = B[lead][col]
            for j in range(i):
                if H[j][lead]:
                    s -= H[j][lead] * Y[j][col]
            d = H[i][lead]
            if s % d != 0:
                return None
            Y[i][col] = s // d
    X = [[sum(U[k][i] * Y[k][col] for k in range(c)) for col in range(cb)]
         for i in range(c)]
    # forward substitution only saw pivot rows; verify the rest
    for i in range(r):
        for col in range(cb):
            if sum(A[i][k] * X[k][col] for k in range(c)) != B[i][col]:
                return None
    return mat(X)


def _solve_matrix_field(A, B, ring, r, c, cb):
    s = _SNF(A, ring)
    C = mat_mul(ring, s.U, B)
    n = len(s.diag)
    z = ring.zero
    Zrows = []
    for i in range(r):
        d = s.diag[i] if i < n else z
        row = []
        for j in range(cb):
            ci = C[i][j]
            if d == z:
                if ring.normalize(ci) != z:
                    return None
                row.append(z)
            else:
                row.append(ring.mul(ring.inv(d), ci))
        if i < c:
            Zrows.append(row)
    while len(Zrows) < c:
        Zrows.append([z] * cb)
    return mat_mul(ring, s.V, mat(Zrows))


def kernel_basis(A, ring=Z):
    """Matrix whose columns generate {x : A x = 0}.

    Over Z the columns are a basis of the full kernel lattice (saturated),
    courtesy of the transform being unimodular.
    """
    r, c = shape(A)
    if c == 0:
        return tuple(() for _ in range(0))
    if ring.is_field:
        s = _SNF(A, ring)
        z = ring.zero
        n = len(s.diag)
        free = [i for i in range(c) if i >= n or s.diag[i] == z]
        cols = [tuple(s.V[i][j] for i in range(c)) for j in free]
        return from_columns(cols, nrows=c)
    U, H = _col_hnf(A)
    cols = [tuple(U[i]) for i in range(c) if not any(H[i])]
    return from_columns(cols, nrows=c)


def rank(A, ring=Z):
    if ring.is_field:
        s = _SNF(A, ring)
        return sum(1 for d in s.diag if d != ring.zero)
    r, c = shape(A)
    _, H = _col_hnf(A)
    return sum(1 for i in range(c) if any(H[i]))
