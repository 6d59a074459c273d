"""Independent reference implementations used only to check the package.

Everything here is written from first principles (determinantal divisors,
element-by-element enumeration of finite abelian groups, brute-force
closures) or delegates to sympy, and deliberately shares no code with
cosheaf itself.
"""

import itertools
import math
from fractions import Fraction

import sympy


# ---------------------------------------------------------------------------
# Smith normal form via determinantal divisors (integers only, small sizes)


def _minors_gcd(M, k):
    rows, cols = len(M), len(M[0]) if M else 0
    g = 0
    for rs in itertools.combinations(range(rows), k):
        for cs in itertools.combinations(range(cols), k):
            sub = sympy.Matrix([[M[i][j] for j in cs] for i in rs])
            g = math.gcd(g, int(sub.det()))
    return g


def snf_diagonal_by_minors(M):
    """Invariant factors d1 | d2 | ... of an integer matrix, via gcds of minors."""
    rows, cols = len(M), len(M[0]) if M else 0
    n = min(rows, cols)
    out = []
    prev = 1
    for k in range(1, n + 1):
        dk = _minors_gcd(M, k)
        if dk == 0:
            out.extend([0] * (n - k + 1))
            break
        out.append(dk // prev)
        prev = dk
    return out


def snf_diagonal_sympy(M, rows, cols):
    """Nonzero invariant factors by sympy, padded with zeros to min(rows, cols)."""
    if rows == 0 or cols == 0:
        return []
    from sympy.matrices.normalforms import smith_normal_form
    D = smith_normal_form(sympy.Matrix(M))
    n = min(rows, cols)
    out = []
    for i in range(n):
        v = int(D[i, i]) if i < D.rows and i < D.cols else 0
        out.append(abs(v))
    # sympy may push zeros around; normalize order: nonzero chain then zeros
    nz = [v for v in out if v]
    return nz + [0] * (n - len(nz))


# ---------------------------------------------------------------------------
# finite abelian groups as products of cyclic groups, element by element


class CyclicProduct:
    """The group Z/m1 x ... x Z/mk (mi >= 1), with element enumeration."""

    def __init__(self, moduli):
        self.moduli = tuple(int(m) for m in moduli)
        assert all(m >= 1 for m in self.moduli)

    def elements(self):
        return itertools.product(*[range(m) for m in self.moduli])

    def order(self):
        n = 1
        for m in self.moduli:
            n *= m
        return n

    def add(self, x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def element_order(self, x):
        return (math.lcm(*[m // math.gcd(m, a) for a, m in zip(x, self.moduli)])
                if self.moduli else 1)

    def order_histogram(self):
        h = {}
        for x in self.elements():
            o = self.element_order(x)
            h[o] = h.get(o, 0) + 1
        return h


def same_finite_group(moduli_a, moduli_b):
    """Isomorphism test for finite products of cyclics via order statistics.

    For finite abelian groups the multiset of element orders determines the
    isomorphism class.
    """
    A, B = CyclicProduct(moduli_a), CyclicProduct(moduli_b)
    if A.order() != B.order():
        return False
    return A.order_histogram() == B.order_histogram()


def invariant_factors_of_moduli(moduli):
    """Brute-force the invariant factors of Z/m1 x ... x Z/mk (all mi >= 1)."""
    moduli = [m for m in moduli if m > 1]
    # collect prime-power components, then zip largest-first
    comps = []
    for m in moduli:
        for p, e in sympy.factorint(m).items():
            comps.append(p ** e)
    by_prime = {}
    for c in comps:
        p = sympy.primefactors(c)[0]
        by_prime.setdefault(p, []).append(c)
    for p in by_prime:
        by_prime[p].sort(reverse=True)
    k = max((len(v) for v in by_prime.values()), default=0)
    factors = []
    for i in range(k):
        f = 1
        for p, v in by_prime.items():
            if i < len(v):
                f *= v[i]
        factors.append(f)
    factors.reverse()  # divisibility chain smallest first
    return factors


def count_homs_cyclic(ms, ns):
    """|Hom(Z/m1 x ..., Z/n1 x ...)| by the gcd formula (0 means Z)."""
    total = 1
    for m in ms:
        for n in ns:
            if m == 0 and n == 0:
                return None  # infinite
            if m == 0:
                total *= n  # Hom(Z, Z/n) = Z/n
            elif n == 0:
                total *= 1  # Hom(Z/m, Z) = 0
            else:
                total *= math.gcd(m, n)
    return total


# ---------------------------------------------------------------------------
# abelian-group homology by counting: |ker d_out| / |im d_in| etc.


def module_order_from_relations(g, relations):
    """Order of Z^g / row-span, or None if infinite (brute force via sympy)."""
    if g == 0:
        return 1
    M = sympy.Matrix(relations) if relations else sympy.zeros(0, g)
    from sympy.matrices.normalforms import smith_normal_form
    if M.rows == 0:
        return None
    S = smith_normal_form(M)
    n = min(S.rows, S.cols)
    diag = [abs(int(S[i, i])) for i in range(n)]
    nz = [d for d in diag if d]
    if len(nz) < g:
        return None
    total = 1
    for d in nz:
        total *= d
    return total


def fp_rank(M, p):
    """Rank of a matrix over F_p, by sympy over GF(p)."""
    if not M or not M[0]:
        return 0
    m = sympy.Matrix(M).applyfunc(lambda v: v % p)
    # Gaussian elimination mod p by hand to avoid field plumbing
    rows = [list(r) for r in m.tolist()]
    rank = 0
    ncols = len(rows[0])
    rpos = 0
    for c in range(ncols):
        piv = None
        for r in range(rpos, len(rows)):
            if rows[r][c] % p:
                piv = r
                break
        if piv is None:
            continue
        rows[rpos], rows[piv] = rows[piv], rows[rpos]
        inv = pow(rows[rpos][c], p - 2, p)
        rows[rpos] = [(v * inv) % p for v in rows[rpos]]
        for r in range(len(rows)):
            if r != rpos and rows[r][c] % p:
                f = rows[r][c]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rpos])]
        rpos += 1
        rank += 1
        if rpos == len(rows):
            break
    return rank


def q_rank(M):
    if not M or not M[0]:
        return 0
    return sympy.Matrix([[Fraction(v) for v in row] for row in M]).rank()
