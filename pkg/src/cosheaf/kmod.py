"""Finitely presented modules over Z, Q or F_p, with exact linear algebra.

A module is given by a number of generators and a relation matrix; maps are
matrices on generators.  Everything downstream (complexes, limits, spectral
sequences, towers) reduces to the handful of operations in this file, and
they in turn reduce to Smith normal form.

>>> M = PresentedModule(Z, 2, ((2, 4), (6, 8)))
>>> canonicalize(M)
CanonicalForm(free_rank=0, torsion_factors=(2, 4))
>>> two = ModuleMap(free_module(Z, 1), free_module(Z, 1), ((2,),))
>>> canonicalize(cokernel(two)[0])
CanonicalForm(free_rank=0, torsion_factors=(2,))
>>> canonicalize(kernel(two)[0])
CanonicalForm(free_rank=0, torsion_factors=())
>>> canonicalize(hom_module(cyclic_module(Z, 4), cyclic_module(Z, 6)))
CanonicalForm(free_rank=0, torsion_factors=(2,))
>>> is_isomorphic(direct_sum([cyclic_module(Z, 2), cyclic_module(Z, 3)])[0],
...               cyclic_module(Z, 6))
True
"""

from .matrix import (
    Fp,
    Q,
    Ring,
    Z,
    from_columns,
    hstack,
    identity,
    is_zero_matrix,
    kernel_basis,
    mat,
    mat_equal,
    mat_mul,
    mat_vec,
    shape,
    smith_normal_form,
    solve,
    solve_matrix,
    transpose,
    vstack,
    zeros,
)

__all__ = [
    "Z", "Q", "Fp", "Ring",
    "PresentedModule", "CanonicalForm", "ModuleMap",
    "RingMismatchError", "IllDefinedMapError", "CompositeNotZeroError",
    "smith_normal_form", "canonicalize", "kernel", "cokernel", "image",
    "homology_at", "homology_with_columns", "hom_module", "direct_sum",
    "is_isomorphic", "subquotient", "express_in_subquotient",
    "kernel_with_columns", "HomPresentation", "hom_presentation",
    "hom_induced",
    "free_module", "cyclic_module", "zero_module", "module_from_invariants",
    "identity_map", "zero_map", "compose", "map_add", "map_sub", "maps_equal",
    "element_equal", "is_zero_map", "is_well_defined",
]


class RingMismatchError(ValueError):
    pass


class IllDefinedMapError(ValueError):
    pass


class CompositeNotZeroError(ValueError):
    pass


class PresentedModule:
    """R^generators modulo the row span of `relations` (an r x g matrix).

    Elements are coordinate columns of length `generators`.  Presentations
    are never minimized behind the caller's back; `canonicalize` is the only
    normalizer.
    """

    __slots__ = ("ring", "generators", "relations")

    def __init__(self, ring, generators, relations=()):
        relations = mat(relations, ring)
        for row in relations:
            if len(row) != generators:
                raise ValueError(
                    "relation of length %d on %d generators" % (len(row), generators)
                )
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", int(generators))
        object.__setattr__(self, "relations", relations)

    def __setattr__(self, *a):
        raise AttributeError("PresentedModule is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, PresentedModule)
            and self.ring == other.ring
            and self.generators == other.generators
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.ring, self.generators, self.relations))

    def __repr__(self):
        return "PresentedModule(%r, %d, %d relations)" % (
            self.ring, self.generators, len(self.relations))

    def rel_cols(self):
        """Relations as columns of a g x r matrix."""
        return transpose(self.relations) if self.relations else ()


def free_module(ring, n):
    return PresentedModule(ring, n)


def zero_module(ring):
    return PresentedModule(ring, 0)


def cyclic_module(ring, n):
    return PresentedModule(ring, 1, ((n,),))


def module_from_invariants(ring, free_rank, torsion=()):
    """Z^free_rank + Z/t1 + Z/t2 + ... as one presentation."""
    g = free_rank + len(torsion)
    rows = []
    for i, t in enumerate(torsion):
        row = [ring.zero] * g
        row[free_rank + i] = ring.normalize(t)
        rows.append(row)
    return PresentedModule(ring, g, rows)


class CanonicalForm:
    """Invariant-factor shape: free rank plus a divisibility chain (each >= 2)."""

    __slots__ = ("free_rank", "torsion_factors")

    def __init__(self, free_rank, torsion_factors=()):
        object.__setattr__(self, "free_rank", int(free_rank))
        object.__setattr__(self, "torsion_factors", tuple(int(t) for t in torsion_factors))
        for a, b in zip(self.torsion_factors, self.torsion_factors[1:]):
            if b % a != 0:
                raise ValueError("torsion factors %r break the divisibility chain"
                                 % (self.torsion_factors,))
        if any(t < 2 for t in self.torsion_factors):
            raise ValueError("unit torsion factors must be dropped")

    def __setattr__(self, *a):
        raise AttributeError("CanonicalForm is immutable")

    def __eq__(self, other):
        return (isinstance(other, CanonicalForm)
                and self.free_rank == other.free_rank
                and self.torsion_factors == other.torsion_factors)

    def __hash__(self):
        return hash((self.free_rank, self.torsion_factors))

    def __repr__(self):
        return "CanonicalForm(free_rank=%d, torsion_factors=%r)" % (
            self.free_rank, self.torsion_factors)

    def describe(self, ring=Z):
        name = {"Z": "Z", "Q": "Q", "Fp": "F%d" % (ring.p or 0)}[ring.kind]
        parts = []
        if self.free_rank == 1:
            parts.append(name)
        elif self.free_rank > 1:
            parts.append("%s^%d" % (name, self.free_rank))
        parts.extend("Z/%d" % t for t in self.torsion_factors)
        return " + ".join(parts) if parts else "0"

    @property
    def order(self):
        """Number of elements, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for t in self.torsion_factors:
            n *= t
        return n


def canonicalize(module):
    """Invariant-factor decomposition; equal on isomorphic inputs."""
    _, D, _ = smith_normal_form(module.relations, module.ring) \
        if module.relations else (None, (), None)
    g = module.generators
    n = min(shape(D)) if D else 0
    diag = [D[i][i] for i in range(n)]
    if module.ring.is_field:
        nonzero = sum(1 for d in diag if d != module.ring.zero)
        return CanonicalForm(g - nonzero, ())
    nonzero = [abs(d) for d in diag if d != 0]
    return CanonicalForm(g - len(nonzero), tuple(d for d in nonzero if d != 1))


def is_isomorphic(M, N):
    if M.ring != N.ring:
        raise RingMismatchError("%r vs %r" % (M.ring, N.ring))
    return canonicalize(M) == canonicalize(N)


# ---------------------------------------------------------------------------
# degenerate-shape-safe matrix helpers.  A 0-row matrix is () and loses its
# column count, so dimensions are always passed explicitly here.


def _mul(ring, A, B, r, k, c):
    if r == 0 or c == 0:
        return tuple(() for _ in range(r))
    if k == 0:
        return zeros(r, c, ring)
    return mat_mul(ring, A, B)


def _kernel(ring, A, r, c):
    if c == 0:
        return ()
    if r == 0:
        return identity(c, ring)
    return kernel_basis(A, ring)


def _solve_matrix(ring, A, B, r, c, cb):
    """X (c x cb) with A X = B, or None; r x c ambient shape given."""
    if cb == 0:
        return tuple(() for _ in range(c))
    if r == 0:
        return zeros(c, cb, ring)
    if c == 0:
        return () if is_zero_matrix(ring, B) else None
    return solve_matrix(A, B, ring)


def _ncols(A, default=0):
    return len(A[0]) if A else default


class ModuleMap:
    """A homomorphism, as a (codomain.generators x domain.generators) matrix.

    Well-definedness (the matrix carries domain relations into the relation
    submodule of the codomain) is checked on construction unless check=False.
    """

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain, codomain, matrix, check=True):
        if domain.ring != codomain.ring:
            raise RingMismatchError("%r vs %r" % (domain.ring, codomain.ring))
        matrix = mat(matrix, domain.ring)
        r = len(matrix)
        if r != codomain.generators or (r and len(matrix[0]) != domain.generators):
            if not (r == 0 and codomain.generators == 0):
                raise ValueError("matrix shape %r does not match %d -> %d generators"
                                 % (shape(matrix), domain.generators, codomain.generators))
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "matrix", matrix)
        if check:
            bad = self._violated_relation()
            if bad is not None:
                raise IllDefinedMapError(
                    "matrix does not respect domain relation #%d" % bad)

    def _violated_relation(self):
        ring = self.domain.ring
        rd = self.domain.rel_cols()
        if not self.domain.relations:
            return None
        img = _mul(ring, self.matrix, rd,
                   self.codomain.generators, self.domain.generators,
                   len(self.domain.relations))
        rc = self.codomain.rel_cols()
        for j in range(len(self.domain.relations)):
            col = tuple((img[i][j],) for i in range(self.codomain.generators))
            ok = _solve_matrix(ring, rc, col,
                               self.codomain.generators, len(self.codomain.relations), 1)
            if ok is None:
                return j
        return None

    def __setattr__(self, *a):
        raise AttributeError("ModuleMap is immutable")

    def __repr__(self):
        return "ModuleMap(%d -> %d gens over %r)" % (
            self.domain.generators, self.codomain.generators, self.domain.ring)

    def __call__(self, x):
        """Apply to an element (coordinate tuple of the domain)."""
        if self.codomain.generators == 0:
            return ()
        if self.domain.generators == 0:
            return (self.domain.ring.zero,) * self.codomain.generators
        return mat_vec(self.domain.ring, self.matrix, x)


def is_well_defined(f):
    """Does f's matrix carry every domain relation into codomain relations?

    Maps built with check=False skip this on construction; diagram checks
    call it to reject components that are not homomorphisms at all.
    """
    return f._violated_relation() is None


def identity_map(M):
    return ModuleMap(M, M, identity(M.generators, M.ring), check=False)


def zero_map(M, N):
    return ModuleMap(M, N, zeros(N.generators, M.generators, M.ring), check=False)


def compose(g, f):
    """g after f."""
    if f.codomain.generators != g.domain.generators:
        raise ValueError("not composable")
    ring = f.domain.ring
    m = _mul(ring, g.matrix, f.matrix,
             g.codomain.generators, g.domain.generators, f.domain.generators)
    return ModuleMap(f.domain, g.codomain, m, check=False)


def map_add(f, g):
    if f.domain is not g.domain and f.domain != g.domain:
        raise ValueError("domain mismatch")
    ring = f.domain.ring
    m = tuple(tuple(ring.add(a, b) for a, b in zip(ra, rb))
              for ra, rb in zip(f.matrix, g.matrix))
    return ModuleMap(f.domain, f.codomain, m, check=False)


def map_sub(f, g):
    ring = f.domain.ring
    m = tuple(tuple(ring.sub(a, b) for a, b in zip(ra, rb))
              for ra, rb in zip(f.matrix, g.matrix))
    return ModuleMap(f.domain, f.codomain, m, check=False)


def element_equal(M, x, y):
    """Do two coordinate tuples name the same element of M?"""
    ring = M.ring
    d = tuple((ring.sub(a, b),) for a, b in zip(x, y))
    return _solve_matrix(ring, M.rel_cols(), d,
                         M.generators, len(M.relations), 1) is not None


def maps_equal(f, g):
    """Equality as homomorphisms (matrices may differ by codomain relations)."""
    if f.domain != g.domain or f.codomain != g.codomain:
        return False
    ring = f.domain.ring
    cod = f.codomain
    if cod.generators == 0 or f.domain.generators == 0:
        return True
    diff = tuple(tuple(ring.sub(a, b) for a, b in zip(ra, rb))
                 for ra, rb in zip(f.matrix, g.matrix))
    return _solve_matrix(ring, cod.rel_cols(), diff,
                         cod.generators, len(cod.relations),
                         f.domain.generators) is not None


def is_zero_map(f):
    return maps_equal(f, zero_map(f.domain, f.codomain))


# ---------------------------------------------------------------------------
# subquotients: the one computation everything else reduces to


def subquotient(ambient, z_cols, b_cols):
    """span(z) / (span(b) + relations), inside `ambient`.

    z_cols and b_cols are g x s and g x t matrices whose columns live in
    ambient coordinates (span(b) is usually inside span(z) + relations; the
    quotient ignores whatever of b sticks out, which never happens in the
    uses below).  Returns the presented module; its i-th generator is the
    i-th column of z_cols.
    """
    ring = ambient.ring
    g = ambient.generators
    s = _ncols(z_cols)
    t = _ncols(b_cols)
    r = len(ambient.relations)
    big = z_cols
    if t:
        big = hstack(big, b_cols) if s else b_cols
    rc = ambient.rel_cols()
    if r:
        big = hstack(big, rc) if big else rc
    ker = _kernel(ring, big, g, s + t + r)
    nk = _ncols(ker)
    rel_rows = tuple(tuple(ker[i][j] for i in range(s)) for j in range(nk))
    return PresentedModule(ring, s, rel_rows)


def express_in_subquotient(ambient, z_cols, b_cols, vectors):
    """Coordinates of ambient vectors in subquotient(ambient, z, b).

    vectors: g x m matrix of columns.  Returns an s x m matrix, or None if
    some column is not in span(z) + span(b) + relations.
    """
    ring = ambient.ring
    g = ambient.generators
    s = _ncols(z_cols)
    t = _ncols(b_cols)
    r = len(ambient.relations)
    m = _ncols(vectors)
    big = z_cols
    if t:
        big = hstack(big, b_cols) if s else b_cols
    rc = ambient.rel_cols()
    if r:
        big = hstack(big, rc) if big else rc
    sol = _solve_matrix(ring, big, vectors, g, s + t + r, m)
    if sol is None:
        return None
    return tuple(sol[i] for i in range(s)) if s else ()


def kernel_with_columns(f):
    """Columns (in domain coordinates) generating ker(f) as a submodule."""
    ring = f.domain.ring
    gM, gN = f.domain.generators, f.codomain.generators
    rN = len(f.codomain.relations)
    big = f.matrix if gM else ()
    rc = f.codomain.rel_cols()
    if rN:
        big = hstack(big, rc) if gM else rc
    ker = _kernel(ring, big, gN, gM + rN)
    cols = [tuple(ker[i][j] for i in range(gM)) for j in range(_ncols(ker))]
    return from_columns(cols, nrows=gM)


def kernel(f):
    """(K, incl) with K presented on generators that map to ker(f) in M."""
    X = kernel_with_columns(f)
    K = subquotient(f.domain, X, ())
    incl = ModuleMap(K, f.domain, X, check=False)
    return K, incl


def image(f):
    """(I, incl): the submodule of the codomain spanned by f's columns."""
    I = subquotient(f.codomain, f.matrix if f.domain.generators else (), ())
    incl = ModuleMap(I, f.codomain, f.matrix, check=False)
    return I, incl


def cokernel(f):
    """(C, proj): codomain / (image + relations)."""
    N = f.codomain
    extra = transpose(f.matrix) if f.domain.generators and N.generators else ()
    rel = vstack(N.relations, extra) if extra else N.relations
    C = PresentedModule(N.ring, N.generators, rel)
    proj = ModuleMap(N, C, identity(N.generators, N.ring), check=False)
    return C, proj


def homology_with_columns(f_in, f_out):
    """(H, z_cols): homology at the middle of  A --f_in--> B --f_out--> C.

    H's generators are the columns of z_cols, read in B's coordinates.
    """
    if f_in.codomain != f_out.domain:
        raise ValueError("maps do not meet in the middle")
    ring = f_in.domain.ring
    B = f_in.codomain
    comp = _mul(ring, f_out.matrix, f_in.matrix,
                f_out.codomain.generators, B.generators, f_in.domain.generators)
    C = f_out.codomain
    ok = _solve_matrix(ring, C.rel_cols(), comp,
                       C.generators, len(C.relations), f_in.domain.generators)
    if ok is None:
        for j in range(f_in.domain.generators):
            col = tuple((comp[i][j],) for i in range(C.generators))
            if _solve_matrix(ring, C.rel_cols(), col,
                             C.generators, len(C.relations), 1) is None:
                raise CompositeNotZeroError(
                    "f_out o f_in is nonzero on generator #%d" % j)
        raise CompositeNotZeroError("f_out o f_in is nonzero")
    X = kernel_with_columns(f_out)
    H = subquotient(B, X, f_in.matrix if f_in.domain.generators else ())
    return H, X


def homology_at(f_in, f_out):
    """ker(f_out) / im(f_in) as a presented module."""
    return homology_with_columns(f_in, f_out)[0]


# ---------------------------------------------------------------------------
# Hom modules


class HomPresentation:
    """hom_module output plus the generator matrices, for functorial use."""

    __slots__ = ("source", "target", "module", "gen_matrices")

    def __init__(self, source, target, module, gen_matrices):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "gen_matrices", tuple(gen_matrices))

    def __setattr__(self, *a):
        raise AttributeError("HomPresentation is immutable")

    def element_to_map(self, coords):
        """The homomorphism source -> target named by subquotient coordinates."""
        ring = self.source.ring
        gN, gM = self.target.generators, self.source.generators
        out = [[ring.zero] * gM for _ in range(gN)]
        for c, F in zip(coords, self.gen_matrices):
            if c == ring.zero:
                continue
            for i in range(gN):
                for j in range(gM):
                    out[i][j] = ring.add(out[i][j], ring.mul(c, F[i][j]))
        return ModuleMap(self.source, self.target, out, check=False)


def _vec(Fmatrix, gN, gM):
    """Column-major vectorization of a gN x gM matrix."""
    return tuple(Fmatrix[i][j] for j in range(gM) for i in range(gN))


def _unvec(v, gN, gM):
    return tuple(tuple(v[j * gN + i] for j in range(gM)) for i in range(gN))


def hom_presentation(M, N):
    if M.ring != N.ring:
        raise RingMismatchError("%r vs %r" % (M.ring, N.ring))
    ring = M.ring
    gM, gN = M.generators, N.generators
    u = gN * gM
    rM, rN = len(M.relations), len(N.relations)
    if u == 0:
        return HomPresentation(M, N, zero_module(ring), [])
    # constraints: for each domain relation rho, sum_j rho_j F[:, j] = 0 in N
    rows = []
    rcN = N.rel_cols()
    for t in range(rM):
        rho = M.relations[t]
        for i in range(gN):
            row = [ring.zero] * (u + rM * rN)
            for j in range(gM):
                row[j * gN + i] = rho[j]
            for cslack in range(rN):
                row[u + t * rN + cslack] = rcN[i][cslack]
            rows.append(row)
    ker = _kernel(ring, mat(rows), len(rows), u + rM * rN)
    L = tuple(tuple(ker[i][j] for i in range(u)) for j in range(_ncols(ker)))
    L_cols = from_columns(L, nrows=u)
    # maps that are zero as homomorphisms: columns land in the relation span
    T = []
    for j in range(gM):
        for cN in range(rN):
            v = [ring.zero] * u
            for i in range(gN):
                v[j * gN + i] = rcN[i][cN]
            T.append(tuple(v))
    T_cols = from_columns(T, nrows=u)
    ambient = free_module(ring, u)
    H = subquotient(ambient, L_cols, T_cols)
    gens = [_unvec(col, gN, gM) for col in L]
    return HomPresentation(M, N, H, gens)


def hom_module(M, N):
    """Presentation of the module of homomorphisms M -> N."""
    return hom_presentation(M, N).module


def hom_induced(hsrc, hdst, pre=None, post=None):
    """The map hsrc.module -> hdst.module sending F to post o F o pre.

    pre : hdst.source -> hsrc.source (or None for identity),
    post: hsrc.target -> hdst.target (or None for identity).
    """
    ring = hsrc.source.ring
    gN, gM = hsrc.target.generators, hsrc.source.generators
    gN2, gM2 = hdst.target.generators, hdst.source.generators
    u2 = gN2 * gM2
    imgs = []
    for F in hsrc.gen_matrices:
        G = F
        rr, cc = gN, gM
        if pre is not None:
            G = _mul(ring, G, pre.matrix, rr, cc, gM2)
            cc = gM2
        if post is not None:
            G = _mul(ring, post.matrix, G, gN2, rr, cc)
            rr = gN2
        imgs.append(_vec(G, gN2, gM2) if u2 else ())
    if u2 == 0:
        return zero_map(hsrc.module, hdst.module)
    # express each image in hdst's subquotient presentation
    ambient = free_module(ring, u2)
    L2 = from_columns([_vec(F, gN2, gM2) for F in hdst.gen_matrices], nrows=u2)
    rcN2 = hdst.target.rel_cols()
    T2 = []
    for j in range(gM2):
        for cN in range(len(hdst.target.relations)):
            v = [ring.zero] * u2
            for i in range(gN2):
                v[j * gN2 + i] = rcN2[i][cN]
            T2.append(tuple(v))
    coords = express_in_subquotient(ambient, L2, from_columns(T2, nrows=u2),
                                    from_columns(imgs, nrows=u2))
    if coords is None:
        raise RuntimeError("hom generator image escaped the target hom module")
    return ModuleMap(hsrc.module, hdst.module, coords, check=False)


# ---------------------------------------------------------------------------
# biproducts


def direct_sum(ms, ring=None):
    """(S, injections, projections) with the biproduct identities."""
    if not ms:
        if ring is None:
            raise ValueError("empty direct sum needs an explicit ring")
        return zero_module(ring), [], []
    ring = ms[0].ring
    for m in ms:
        if m.ring != ring:
            raise RingMismatchError("mixed rings in direct sum")
    g = sum(m.generators for m in ms)
    rows = []
    off = 0
    for m in ms:
        for row in m.relations:
            rows.append((ring.zero,) * off + tuple(row)
                        + (ring.zero,) * (g - off - m.generators))
        off += m.generators
    S = PresentedModule(ring, g, rows)
    injections, projections = [], []
    off = 0
    for m in ms:
        inj = [[ring.zero] * m.generators for _ in range(g)]
        prj = [[ring.zero] * g for _ in range(m.generators)]
        for i in range(m.generators):
            inj[off + i][i] = ring.one
            prj[i][off + i] = ring.one
        injections.append(ModuleMap(m, S, inj, check=False))
        projections.append(ModuleMap(S, m, prj, check=False))
        off += m.generators
    return S, injections, projections
