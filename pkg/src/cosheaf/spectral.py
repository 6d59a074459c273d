"""First-quadrant bicomplexes and their two spectral sequences.

The total complex carries the differential with the column-parity sign on
the vertical part.  Pages are computed as explicit subquotients of the
total complex: with ``A^r`` the chains of filtration ``p`` whose boundary
drops to filtration ``p - r``,

    E^r = A^r / (bd A^{r-1}[p+r-1] + A^{r-1}[p-1]),

which is the classical description and needs nothing beyond kernels and
subquotients.  ``vertical`` filters by column (inner differential is the
vertical one), ``horizontal`` by row; both converge to the homology of
the total complex, and `verify_convergence` checks that down to the
filtration quotients.
"""

from .matrix import from_columns, identity, transpose
from .kmod import (
    ModuleMap,
    canonicalize,
    cokernel,
    compose,
    direct_sum,
    express_in_subquotient,
    free_module,
    is_isomorphic,
    is_zero_map,
    subquotient,
    zero_map,
    zero_module,
)
from .cech import ChainComplex, _cech_data
from .satellite import resolve

__all__ = [
    "Bicomplex",
    "SpectralPage",
    "EInfinity",
    "ConvergenceReport",
    "total_complex",
    "total_data",
    "pages",
    "e_infinity",
    "verify_convergence",
    "edge_composite",
    "cech_of_resolution",
]

_ORIENTATIONS = ("vertical", "horizontal")


class Bicomplex:
    """Finitely supported first-quadrant double complex.

    `entries` maps (s, t) to modules; `horizontal` maps (s, t) to the map
    into (s-1, t); `vertical` maps (s, t) to the map into (s, t-1).  Both
    families square to zero and the squares commute on the nose.
    """

    __slots__ = ("ring", "entries", "h", "v", "s_max", "t_max")

    def __init__(self, ring, entries, horizontal, vertical, check=True):
        entries = {k: m for k, m in entries.items()}
        for (s, t) in entries:
            if s < 0 or t < 0:
                raise ValueError("entry at negative bidegree (%d, %d)" % (s, t))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "h", dict(horizontal))
        object.__setattr__(self, "v", dict(vertical))
        object.__setattr__(self, "s_max",
                           max((s for s, _ in entries), default=0))
        object.__setattr__(self, "t_max",
                           max((t for _, t in entries), default=0))
        if check:
            self._validate()

    def __setattr__(self, *a):
        raise AttributeError("Bicomplex is immutable")

    def __repr__(self):
        return "Bicomplex(%r, support %dx%d)" % (
            self.ring, self.s_max + 1, self.t_max + 1)

    def entry(self, s, t):
        M = self.entries.get((s, t))
        if M is None:
            return zero_module(self.ring)
        return M

    def hmap(self, s, t):
        f = self.h.get((s, t))
        if f is None:
            return zero_map(self.entry(s, t), self.entry(s - 1, t))
        return f

    def vmap(self, s, t):
        f = self.v.get((s, t))
        if f is None:
            return zero_map(self.entry(s, t), self.entry(s, t - 1))
        return f

    def _validate(self):
        for M in self.entries.values():
            if M.ring != self.ring:
                raise ValueError("entry over the wrong ring")
        for key, f in list(self.h.items()) + list(self.v.items()):
            if key not in self.entries and f.domain.generators:
                raise ValueError("map out of missing entry %r" % (key,))
        for s in range(self.s_max + 1):
            for t in range(self.t_max + 1):
                d = self.hmap(s, t)
                dd = self.vmap(s, t)
                if (d.domain != self.entry(s, t)
                        or d.codomain != self.entry(s - 1, t)):
                    raise ValueError("horizontal map at (%d, %d) has wrong "
                                     "endpoints" % (s, t))
                if (dd.domain != self.entry(s, t)
                        or dd.codomain != self.entry(s, t - 1)):
                    raise ValueError("vertical map at (%d, %d) has wrong "
                                     "endpoints" % (s, t))
                if not is_zero_map(compose(self.hmap(s - 1, t), d)):
                    raise ValueError("horizontal maps do not square to zero "
                                     "at (%d, %d)" % (s, t))
                if not is_zero_map(compose(self.vmap(s, t - 1), dd)):
                    raise ValueError("vertical maps do not square to zero "
                                     "at (%d, %d)" % (s, t))
                left = compose(self.vmap(s - 1, t), d)
                right = compose(self.hmap(s, t - 1), dd)
                if left.matrix != right.matrix:
                    raise ValueError("square at (%d, %d) does not commute"
                                     % (s, t))


def _antidiagonal(X, n):
    lo = max(0, n - X.t_max)
    hi = min(n, X.s_max)
    return [(s, n - s) for s in range(lo, hi + 1)]


def total_data(X):
    """(total ChainComplex, block offsets (s, t) -> column offset)."""
    ring = X.ring
    N = X.s_max + X.t_max
    modules = {}
    offsets = {}
    for n in range(N + 1):
        parts = _antidiagonal(X, n)
        modules[n], _, _ = direct_sum([X.entry(s, t) for s, t in parts],
                                      ring=ring)
        off = 0
        for s, t in parts:
            offsets[(s, t)] = off
            off += X.entry(s, t).generators
    boundaries = {}
    for n in range(1, N + 1):
        rows = [[ring.zero] * modules[n].generators
                for _ in range(modules[n - 1].generators)]
        for s, t in _antidiagonal(X, n):
            soff = offsets[(s, t)]
            for F, key, sign in (
                    (X.hmap(s, t).matrix, (s - 1, t), 1),
                    (X.vmap(s, t).matrix, (s, t - 1),
                     1 if s % 2 == 0 else -1)):
                toff = offsets.get(key)
                if toff is None:
                    continue
                for i, row in enumerate(F):
                    for j, x in enumerate(row):
                        if x != ring.zero:
                            rows[toff + i][soff + j] = ring.add(
                                rows[toff + i][soff + j],
                                x if sign > 0 else ring.sub(ring.zero, x))
        boundaries[n] = ModuleMap(modules[n], modules[n - 1], rows,
                                  check=False)
    return ChainComplex(ring, modules, boundaries), offsets


def total_complex(X):
    """The total chain complex, with the sign on the vertical part."""
    return total_data(X)[0]


def _cols_of(matrix):
    return [tuple(col) for col in transpose(matrix)] if matrix else []


class _SpectralEngine:
    """Shared state for one bicomplex and one filtration direction."""

    def __init__(self, X, orientation):
        if orientation not in _ORIENTATIONS:
            raise ValueError("orientation must be one of %r" % (_ORIENTATIONS,))
        self.X = X
        self.orientation = orientation
        self.cx, self.offsets = total_data(X)
        self.ring = X.ring
        self.N = X.s_max + X.t_max
        self.P = X.s_max if orientation == "vertical" else X.t_max
        self._inc = {}
        self._acols = {}
        self._win = {}

    def filt(self, s, t):
        return s if self.orientation == "vertical" else t

    def coords(self, p, n):
        return (p, n - p) if self.orientation == "vertical" else (n - p, p)

    def bidegree(self, r):
        return (-r, r - 1) if self.orientation == "vertical" else (r - 1, -r)

    def inclusion(self, p, n):
        """F_p T_n -> T_n as a map (blocks of filtration <= p)."""
        p = min(p, self.P)
        key = (p, n)
        hit = self._inc.get(key)
        if hit is not None:
            return hit
        Tn = self.cx.module(n)
        parts = [(s, t) for s, t in _antidiagonal(self.X, n)
                 if self.filt(s, t) <= p]
        F, _, _ = direct_sum([self.X.entry(s, t) for s, t in parts],
                             ring=self.ring)
        rows = [[self.ring.zero] * F.generators for _ in range(Tn.generators)]
        col = 0
        for s, t in parts:
            off = self.offsets[(s, t)]
            for j in range(self.X.entry(s, t).generators):
                rows[off + j][col] = self.ring.one
                col += 1
        inc = ModuleMap(F, Tn, rows, check=False)
        self._inc[key] = inc
        return inc

    def a_cols(self, r, p, n):
        """Columns in T_n coordinates generating A^r at filtration p."""
        if p < 0 or n < 0 or n > self.N:
            return ()
        p = min(p, self.P)
        key = (min(r, p + 1), p, n)  # for r > p the condition is "cycle"
        hit = self._acols.get(key)
        if hit is not None:
            return hit
        inc = self.inclusion(p, n)
        if key[0] <= 0:
            cols = inc.matrix
        else:
            f = compose(self.cx.boundary(n), inc)
            if p - key[0] >= 0:
                _, proj = cokernel(self.inclusion(p - key[0], n - 1))
                f = compose(proj, f)
            kcols = _kernel_cols(f)
            lift = compose(inc, ModuleMap(
                free_module(self.ring, _ncols(kcols)), inc.domain, kcols,
                check=False))
            cols = lift.matrix
        self._acols[key] = cols
        return cols

    def window(self, r, p, n):
        """(z_cols, b_cols, E^r module) at filtration p, total degree n."""
        key = (r, p, n)
        hit = self._win.get(key)
        if hit is not None:
            return hit
        Tn = self.cx.module(n)
        z = self.a_cols(r, p, n)
        b_parts = []
        up = self.a_cols(r - 1, p + r - 1, n + 1)
        if _ncols(up):
            carried = compose(self.cx.boundary(n + 1), ModuleMap(
                free_module(self.ring, _ncols(up)), self.cx.module(n + 1),
                up, check=False))
            b_parts.extend(_cols_of(carried.matrix))
        b_parts.extend(_cols_of(self.a_cols(r - 1, p - 1, n)))
        b = from_columns(b_parts, nrows=Tn.generators) if b_parts else ()
        E = subquotient(Tn, z, b)
        out = (z, b, E)
        self._win[key] = out
        return out

    def differential(self, r, p, n):
        """d^r out of (p, n), landing at (p - r, n - 1)."""
        z, _, E = self.window(r, p, n)
        zt, bt, Et = self.window(r, p - r, n - 1)
        if not _ncols(z):
            return zero_map(E, Et)
        carried = compose(self.cx.boundary(n), ModuleMap(
            free_module(self.ring, _ncols(z)), self.cx.module(n), z,
            check=False))
        coords = express_in_subquotient(self.cx.module(n - 1), zt, bt,
                                        carried.matrix)
        if coords is None:
            raise ValueError("boundary does not land in the next window "
                             "(internal error)")
        return ModuleMap(E, Et, coords, check=False)

    def page(self, r):
        entries = {}
        windows = {}
        diffs = {}
        for s in range(self.X.s_max + 1):
            for t in range(self.X.t_max + 1):
                p = self.filt(s, t)
                n = s + t
                z, b, E = self.window(r, p, n)
                entries[(s, t)] = E
                windows[(s, t)] = (z, b)
        for s in range(self.X.s_max + 1):
            for t in range(self.X.t_max + 1):
                p = self.filt(s, t)
                n = s + t
                ds, dt = self.bidegree(r)
                if 0 <= s + ds and 0 <= t + dt and n >= 1:
                    diffs[(s, t)] = self.differential(r, p, n)
        return SpectralPage(r, self.orientation, self.ring, entries, diffs,
                            windows)


def _kernel_cols(f):
    from .kmod import kernel_with_columns
    return kernel_with_columns(f)


def _ncols(matrix):
    return len(matrix[0]) if matrix else 0


class SpectralPage:
    """One page: entries, the d^r family, and generator representatives.

    `windows[(s, t)]` holds the pair (z_cols, b_cols) presenting the entry
    as a subquotient of the total complex in degree s + t; generator j of
    the entry is represented by column j of z_cols.
    """

    __slots__ = ("r", "orientation", "ring", "entries", "differentials",
                 "windows")

    def __init__(self, r, orientation, ring, entries, differentials, windows):
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "orientation", orientation)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "entries", dict(entries))
        object.__setattr__(self, "differentials", dict(differentials))
        object.__setattr__(self, "windows", dict(windows))

    def __setattr__(self, *a):
        raise AttributeError("SpectralPage is immutable")

    def __repr__(self):
        return "SpectralPage(r=%d, %s)" % (self.r, self.orientation)

    @property
    def bidegree(self):
        r = self.r
        return (-r, r - 1) if self.orientation == "vertical" else (r - 1, -r)

    def entry(self, s, t):
        M = self.entries.get((s, t))
        if M is None:
            return zero_module(self.ring)
        return M

    def differential(self, s, t):
        f = self.differentials.get((s, t))
        if f is None:
            ds, dt = self.bidegree
            return zero_map(self.entry(s, t), self.entry(s + ds, t + dt))
        return f

    def grid(self):
        """Canonical forms of all entries, keyed by (s, t)."""
        return {k: canonicalize(m) for k, m in self.entries.items()}


def _nested_e2(X, orientation):
    """E^2 by the two-step homology formula, computed independently."""
    ring = X.ring
    if orientation == "vertical":
        inner_len, outer_len = X.t_max, X.s_max

        def inner_cx(i):  # column i with the vertical differential
            return ChainComplex(ring,
                                {t: X.entry(i, t) for t in range(X.t_max + 1)},
                                {t: X.vmap(i, t) for t in range(1, X.t_max + 1)})

        def cross(i, j):  # the horizontal map at (i, j)
            return X.hmap(i, j)
    else:
        inner_len, outer_len = X.s_max, X.t_max

        def inner_cx(i):  # row i with the horizontal differential
            return ChainComplex(ring,
                                {s: X.entry(s, i) for s in range(X.s_max + 1)},
                                {s: X.hmap(s, i) for s in range(1, X.s_max + 1)})

        def cross(i, j):
            return X.vmap(j, i)
    columns = [inner_cx(i) for i in range(outer_len + 1)]
    result = {}
    for j in range(inner_len + 1):
        homs = []
        zs = []
        for i in range(outer_len + 1):
            H, z = columns[i].homology_data(j)
            homs.append(H)
            zs.append(z)
        maps = {}
        for i in range(1, outer_len + 1):
            src = columns[i]
            dst = columns[i - 1]
            carried = compose(cross(i, j), ModuleMap(
                homs[i], src.module(j), zs[i], check=False))
            coords = express_in_subquotient(dst.module(j), zs[i - 1],
                                            dst.boundary(j + 1).matrix,
                                            carried.matrix)
            if coords is None:
                raise ValueError("induced map does not descend (internal)")
            maps[i] = ModuleMap(homs[i], homs[i - 1], coords, check=False)
        outer = ChainComplex(ring, dict(enumerate(homs)), maps)
        for i in range(outer_len + 1):
            key = (i, j) if orientation == "vertical" else (j, i)
            result[key] = outer.homology(i)
    return result


def pages(X, orientation, r_max, check=True):
    """Pages E^0 .. E^r_max for one filtration direction.

    With `check`, E^2 is recomputed by the nested-homology formula and the
    page differentials are verified to square to zero.
    """
    if r_max < 2:
        raise ValueError("r_max must be at least 2")
    engine = _SpectralEngine(X, orientation)
    out = [engine.page(r) for r in range(r_max + 1)]
    if check:
        for page in out:
            ds, dt = page.bidegree
            for (s, t), f in page.differentials.items():
                g = page.differentials.get((s + ds, t + dt))
                if g is not None and not is_zero_map(compose(g, f)):
                    raise ValueError("d^%d does not square to zero at "
                                     "(%d, %d)" % (page.r, s, t))
        nested = _nested_e2(X, orientation)
        for key, M in nested.items():
            if not is_isomorphic(M, out[2].entry(*key)):
                raise ValueError("E^2 disagrees with nested homology at %r"
                                 % (key,))
    return out


class EInfinity:
    """The stable page: entries, and for each position the page index from
    which every differential touching it vanishes."""

    __slots__ = ("orientation", "ring", "entries", "stabilized_at",
                 "pages_used", "windows")

    def __init__(self, orientation, ring, entries, stabilized_at, pages_used,
                 windows):
        object.__setattr__(self, "orientation", orientation)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "entries", dict(entries))
        object.__setattr__(self, "stabilized_at", dict(stabilized_at))
        object.__setattr__(self, "pages_used", int(pages_used))
        object.__setattr__(self, "windows", dict(windows))

    def __setattr__(self, *a):
        raise AttributeError("EInfinity is immutable")

    def __repr__(self):
        return "EInfinity(%s, pages_used=%d)" % (self.orientation,
                                                 self.pages_used)

    def entry(self, s, t):
        M = self.entries.get((s, t))
        if M is None:
            return zero_module(self.ring)
        return M


def _e_infinity(engine):
    X = engine.X
    R = engine.P + 1
    page_list = [engine.page(r) for r in range(R + 1)]
    stabilized = {}
    for s in range(X.s_max + 1):
        for t in range(X.t_max + 1):
            r0 = 1
            for r in range(R, 0, -1):
                page = page_list[r]
                ds, dt = page.bidegree
                out_zero = is_zero_map(page.differential(s, t))
                inc_zero = is_zero_map(page.differential(s - ds, t - dt))
                if not (out_zero and inc_zero):
                    r0 = r + 1
                    break
            stabilized[(s, t)] = r0
    top = page_list[R]
    return EInfinity(engine.orientation, engine.ring, top.entries, stabilized,
                     R, top.windows)


def e_infinity(X, orientation):
    """Stable entries with per-position stabilization certificates."""
    return _e_infinity(_SpectralEngine(X, orientation))


class ConvergenceReport:
    """Outcome of `verify_convergence`: total homology, graded pieces per
    orientation, and any mismatches (which indicate an internal bug)."""

    __slots__ = ("ok", "failures", "homology", "graded")

    def __init__(self, ok, failures, homology, graded):
        object.__setattr__(self, "ok", bool(ok))
        object.__setattr__(self, "failures", tuple(failures))
        object.__setattr__(self, "homology", dict(homology))
        object.__setattr__(self, "graded", dict(graded))

    def __setattr__(self, *a):
        raise AttributeError("ConvergenceReport is immutable")

    def __repr__(self):
        return "ConvergenceReport(ok=%r, %d degrees)" % (
            self.ok, len(self.homology))


def verify_convergence(X):
    """Check both spectral sequences against the total homology.

    For every degree and both orientations, the filtration of H_n(Tot) by
    filtration-bounded cycles is computed and its successive quotients are
    compared with the stable entries; over a field the dimension count is
    checked as well.
    """
    failures = []
    homology = {}
    graded = {}
    engines = {o: _SpectralEngine(X, o) for o in _ORIENTATIONS}
    cx = engines["vertical"].cx
    N = X.s_max + X.t_max
    for n in range(N + 1):
        homology[n] = canonicalize(cx.homology(n))
    for o, engine in engines.items():
        einf = _e_infinity(engine)
        tot = engine.cx
        for n in range(N + 1):
            Hn, Zn = tot.homology_data(n)
            Bn = tot.boundary(n + 1).matrix
            prev = ()
            pieces = []
            for p in range(engine.P + 1):
                cyc = engine.a_cols(p + 1, p, n)
                if _ncols(cyc):
                    coords = express_in_subquotient(tot.module(n), Zn, Bn, cyc)
                    if coords is None:
                        raise ValueError("filtered cycle escapes homology "
                                         "(internal error)")
                else:
                    coords = ()
                piece = subquotient(Hn, coords, prev)
                pieces.append(canonicalize(piece))
                want = einf.entry(*engine.coords(p, n))
                if not is_isomorphic(piece, want):
                    failures.append(
                        "%s filtration quotient at degree %d, filtration %d: "
                        "%s vs E-infinity %s"
                        % (o, n, p, canonicalize(piece).describe(),
                           canonicalize(want).describe()))
                prev = coords
            graded[(o, n)] = tuple(pieces)
            if X.ring.is_field:
                dim = homology[n].free_rank
                total = sum(canonicalize(einf.entry(*engine.coords(p, n))
                                         ).free_rank
                            for p in range(engine.P + 1))
                if dim != total:
                    failures.append(
                        "%s dimension count at degree %d: %d vs %d"
                        % (o, n, total, dim))
    return ConvergenceReport(not failures, failures, homology, graded)


def edge_composite(X, orientation, n):
    """(E^1 corner entry, its edge map into H_n(Tot), H_n(Tot)).

    The corner is the filtration-0 position in total degree n: (0, n) for
    the vertical orientation, (n, 0) for the horizontal one.  Its E^1
    representatives are already cycles, and the edge map sends each to its
    homology class.
    """
    engine = _SpectralEngine(X, orientation)
    z, _, E1 = engine.window(1, 0, n)
    Hn, Zn = engine.cx.homology_data(n)
    Bn = engine.cx.boundary(n + 1).matrix
    if _ncols(z):
        coords = express_in_subquotient(engine.cx.module(n), Zn, Bn, z)
        if coords is None:
            raise ValueError("edge representative is not a cycle (internal)")
    else:
        coords = ()
    return E1, ModuleMap(E1, Hn, coords, check=False), Hn


def cech_of_resolution(cover, A, depth, s_max, normalized=True):
    """The double complex pairing a cover with a resolution of A.

    Row t evaluates the degree-t resolution level on the cover's iterated
    fiber products (the cover complex of that level); columns apply the
    resolution boundaries blockwise.  Horizontal homology of row t
    vanishes in positive degrees whenever the level is acyclic on the
    relevant sieves, which is what makes the horizontal E^2 collapse onto
    the bottom row.
    """
    res = resolve(A, depth)
    ring = A.ring
    data = {t: _cech_data(cover, res.level(t), s_max, normalized,
                          presheaf=False)
            for t in range(depth + 1)}
    objects = data[0].extra[0]
    entries = {}
    horizontal = {}
    vertical = {}
    for t in range(depth + 1):
        for s in range(s_max + 1):
            entries[(s, t)] = data[t].modules[s]
        for s in range(1, s_max + 1):
            horizontal[(s, t)] = data[t].maps[s]
    for t in range(1, depth + 1):
        d = res.boundary(t)
        for s in range(s_max + 1):
            src = data[t].modules[s]
            dst = data[t - 1].modules[s]
            rows = [[ring.zero] * src.generators
                    for _ in range(dst.generators)]
            for tau in data[t].simp[s]:
                soff = data[t].offsets[s][tau]
                toff = data[t - 1].offsets[s][tau]
                F = d.component(objects[tau]).matrix
                for i, row in enumerate(F):
                    for j, x in enumerate(row):
                        rows[toff + i][soff + j] = x
            vertical[(s, t)] = ModuleMap(src, dst, rows, check=False)
    return Bicomplex(ring, entries, horizontal, vertical)
