"""Roos and Čech complexes on a finite site, and everything they compute.

A sieve R on U yields the Roos chain complex: degree n is the sum of
A(dom x_0) over length-n composable chains in the comma category of R, and
the boundary alternates face maps (the 0th face acts by A, inner faces
compose arrows, the last face drops one).  A cover yields the Čech chain
complex over all index tuples, with iterated fiber products as entries and
projections as faces.  Both have presheaf-valued cochain duals.

On top of the complexes: sieve/cover homology in a single degree, Čech
homology of an object as a limit over covering sieves or covers (with
transition maps induced by inclusion and refinement chain maps), the plus
construction with its comparison map, cosheafification (plus twice), the
coseparated/cosheaf/flabby/flask predicates with failure witnesses, their
presheaf duals, and the constant cosheaf of a finite space.

The complex builders are literal — degenerate chains and repeated tuples
included.  Every homology-level function also accepts ``normalized``,
which drops degenerate simplices (identity arrows, adjacent repeats); that
is the classical normalization, it never changes homology, and the test
suite checks the equality on golden values and random instances.
"""

from .fincat import (
    CategoryError,
    SiteAxiomError,
    comma_sieve,
    composable_chains,
    connected_components,
    is_poset_category,
    open_label,
    poset_category,
    pullback,
)
from .kmod import (
    ModuleMap,
    cokernel,
    compose,
    direct_sum,
    express_in_subquotient,
    homology_with_columns,
    identity_map,
    is_isomorphic,
    is_zero_map,
    kernel,
    zero_map,
    zero_module,
)
from .diagram import (
    Precosheaf,
    PrecosheafMorphism,
    Presheaf,
    compose_morphisms,
    h0_presheaf_data,
    h0_sieve_data,
    lim,
)
from .matrix import identity

__all__ = [
    "ChainComplex", "CochainComplex",
    "roos_chain_complex", "roos_cochain_complex",
    "cech_chain_complex", "cech_cochain_complex",
    "h_n_sieve", "h_n_cover", "h_n_sieve_presheaf", "h_n_cover_presheaf",
    "induced_on_homology", "cech_H_n",
    "plus", "sharp", "plus_presheaf", "sharp_presheaf",
    "is_coseparated", "is_cosheaf", "is_separated", "is_sheaf",
    "is_flabby", "is_flask",
    "constant_cosheaf",
]


def _ring_of(F):
    ring = F.ring
    if ring is None:
        raise ValueError("diagram over the empty category has no ring")
    return ring


def _is_trivial(M):
    return is_isomorphic(M, zero_module(M.ring))


def _is_mono(f):
    return _is_trivial(kernel(f)[0])


def _is_epi(f):
    return _is_trivial(cokernel(f)[0])


def _is_iso(f):
    return _is_mono(f) and _is_epi(f)


# ---------------------------------------------------------------------------
# chain and cochain complexes


class ChainComplex:
    """Nonnegatively graded modules with boundaries d_n: C_n -> C_{n-1}.

    Degrees missing from `modules` are zero.  Construction verifies shapes
    and d∘d = 0; `homology(n)` is ker d_n / im d_{n+1} for the complex as
    given, so builders that truncate at n_max only vouch for n < n_max.
    """

    __slots__ = ("ring", "modules", "boundaries", "_hcache")

    def __init__(self, ring, modules, boundaries, check=True):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "modules", dict(modules))
        object.__setattr__(self, "boundaries", dict(boundaries))
        object.__setattr__(self, "_hcache", {})
        if check:
            self._validate()

    def __setattr__(self, *a):
        raise AttributeError("ChainComplex is immutable")

    def __repr__(self):
        return "ChainComplex(degrees %s)" % (sorted(self.modules),)

    def _validate(self):
        for n, M in self.modules.items():
            if n < 0:
                raise ValueError("negative degree %d" % n)
            if M.ring != self.ring:
                raise ValueError("degree %d module over the wrong ring" % n)
        for n, d in self.boundaries.items():
            if d.domain != self.module(n) or d.codomain != self.module(n - 1):
                raise ValueError("boundary %d has wrong (co)domain" % n)
        for n in sorted(self.boundaries):
            if n + 1 in self.boundaries:
                if not is_zero_map(compose(self.boundary(n),
                                           self.boundary(n + 1))):
                    raise ValueError("d_%d ∘ d_%d is not zero" % (n, n + 1))

    def top_degree(self):
        return max(self.modules) if self.modules else -1

    def module(self, n):
        M = self.modules.get(n)
        return M if M is not None else zero_module(self.ring)

    def boundary(self, n):
        d = self.boundaries.get(n)
        if d is not None:
            return d
        return zero_map(self.module(n), self.module(n - 1))

    def homology_data(self, n):
        """(H_n, cycle columns in C_n coordinates); cached."""
        got = self._hcache.get(n)
        if got is None:
            got = homology_with_columns(self.boundary(n + 1),
                                        self.boundary(n))
            self._hcache[n] = got
        return got

    def homology(self, n):
        return self.homology_data(n)[0]


class CochainComplex:
    """Nonnegatively graded modules with differentials d^n: C^n -> C^{n+1}."""

    __slots__ = ("ring", "modules", "differentials", "_hcache")

    def __init__(self, ring, modules, differentials, check=True):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "modules", dict(modules))
        object.__setattr__(self, "differentials", dict(differentials))
        object.__setattr__(self, "_hcache", {})
        if check:
            self._validate()

    def __setattr__(self, *a):
        raise AttributeError("CochainComplex is immutable")

    def __repr__(self):
        return "CochainComplex(degrees %s)" % (sorted(self.modules),)

    def _validate(self):
        for n, M in self.modules.items():
            if n < 0:
                raise ValueError("negative degree %d" % n)
            if M.ring != self.ring:
                raise ValueError("degree %d module over the wrong ring" % n)
        for n, d in self.differentials.items():
            if d.domain != self.module(n) or d.codomain != self.module(n + 1):
                raise ValueError("differential %d has wrong (co)domain" % n)
        for n in sorted(self.differentials):
            if n + 1 in self.differentials:
                if not is_zero_map(compose(self.differential(n + 1),
                                           self.differential(n))):
                    raise ValueError("d^%d ∘ d^%d is not zero" % (n + 1, n))

    def top_degree(self):
        return max(self.modules) if self.modules else -1

    def module(self, n):
        M = self.modules.get(n)
        return M if M is not None else zero_module(self.ring)

    def differential(self, n):
        d = self.differentials.get(n)
        if d is not None:
            return d
        return zero_map(self.module(n), self.module(n + 1))

    def cohomology_data(self, n):
        """(H^n, cocycle columns in C^n coordinates); cached."""
        got = self._hcache.get(n)
        if got is None:
            got = homology_with_columns(self.differential(n - 1),
                                        self.differential(n))
            self._hcache[n] = got
        return got

    def cohomology(self, n):
        return self.cohomology_data(n)[0]


# ---------------------------------------------------------------------------
# the Roos complex of a sieve
#
# Both orientations share the bookkeeping: _roos_basis lists the n-chains
# of the comma category per degree, _roos_faces enumerates the faces of one
# chain, and _add_block accumulates signed coefficient blocks (accumulate,
# not assign: distinct faces of one chain can land on the same target).


def _check_same_category(C, D, what):
    if C is D:
        return
    if C.objects == D.objects and C.morphisms == D.morphisms \
            and C.comp == D.comp:
        return
    raise CategoryError("%s lives on a different category" % what)


def _roos_basis(comma, n_max, normalized):
    simp = {0: list(comma.objects)}
    for n in range(1, n_max + 1):
        simp[n] = sorted(composable_chains(comma, n,
                                           skip_identities=normalized),
                         key=repr)
    return simp


def _roos_faces(comma, sigma):
    """(k, face, acting morphism or None) for each face of an n-chain."""
    n = len(sigma)
    first = sigma[1:] if n > 1 else comma.tgt[sigma[0]]
    yield 0, first, sigma[0][2]
    for k in range(1, n):
        glued = comma.comp[(sigma[k], sigma[k - 1])]
        yield k, sigma[:k - 1] + (glued,) + sigma[k + 1:], None
    last = sigma[:-1] if n > 1 else comma.src[sigma[0]]
    yield n, last, None


def _block_layout(ring, simp, value_of, n_max):
    """Per-degree direct sums and generator offsets of the listed simplices."""
    modules, offsets = {}, {}
    for n in range(n_max + 1):
        off, g = {}, 0
        for s in simp[n]:
            off[s] = g
            g += value_of(s).generators
        modules[n] = direct_sum([value_of(s) for s in simp[n]], ring=ring)[0]
        offsets[n] = off
    return modules, offsets


def _add_block(rows, ring, r0, c0, F, sign):
    add = ring.add if sign > 0 else ring.sub
    for i, row in enumerate(F):
        out = rows[r0 + i]
        for j, x in enumerate(row):
            if x != ring.zero:
                out[c0 + j] = add(out[c0 + j], x)


class _ComplexData:
    """One builder's worth of shared state: modules, maps, simplex lists,
    offsets, and per-simplex value lookup."""

    __slots__ = ("modules", "maps", "simp", "offsets", "value_of", "extra")

    def __init__(self, modules, maps, simp, offsets, value_of, extra=None):
        self.modules = modules
        self.maps = maps
        self.simp = simp
        self.offsets = offsets
        self.value_of = value_of
        self.extra = extra


def _roos_data(R, A, n_max, normalized, presheaf):
    C = A.category
    _check_same_category(C, R.category, "sieve")
    ring = _ring_of(A)
    comma = comma_sieve(C, R)
    simp = _roos_basis(comma, n_max, normalized)
    obj_set = set(comma.objects)

    def value_of(s):
        f = s if s in obj_set else comma.src[s[0]]
        return A.value(C.src[f])

    modules, offsets = _block_layout(ring, simp, value_of, n_max)
    maps = {}
    for n in range(1, n_max + 1):
        lo, hi = (n, n - 1) if presheaf else (n - 1, n)
        rows = [[ring.zero] * modules[hi].generators
                for _ in range(modules[lo].generators)]
        for sigma in simp[n]:
            for k, tau, beta in _roos_faces(comma, sigma):
                toff = offsets[n - 1].get(tau)
                if toff is None:
                    continue
                if beta is None:
                    F = identity(value_of(sigma).generators, ring)
                else:
                    F = A.action(beta).matrix
                sign = 1 if k % 2 == 0 else -1
                soff = offsets[n][sigma]
                if presheaf:
                    _add_block(rows, ring, soff, toff, F, sign)
                else:
                    _add_block(rows, ring, toff, soff, F, sign)
        maps[n - 1 if presheaf else n] = ModuleMap(
            modules[hi], modules[lo], rows, check=False)
    return _ComplexData(modules, maps, simp, offsets, value_of)


def roos_chain_complex(R, A, n_max, normalized=False):
    """The chain complex of a sieve with precosheaf coefficients.

    Degree n sums A at the chain's starting source over length-n chains in
    the comma category of R; d_n alternates the n+1 face maps.  Built for
    degrees 0..n_max.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    data = _roos_data(R, A, n_max, normalized, presheaf=False)
    return ChainComplex(A.ring, data.modules, data.maps)


def roos_cochain_complex(R, B, n_max, normalized=False):
    """The dual cochain complex of a sieve with presheaf coefficients."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    data = _roos_data(R, B, n_max, normalized, presheaf=True)
    return CochainComplex(B.ring, data.modules, data.maps)


# ---------------------------------------------------------------------------
# the Čech complex of a cover
#
# Index tuples are extended one position at a time; P[t] is the iterated
# fiber product of the legs named by t, s[t] its structure morphism to the
# target, projs[t] the per-position projections.  A face arrow is the
# unique morphism compatible with the retained projections.


def _cech_tuples(nlegs, n_max, normalized):
    tups = {0: [(i,) for i in range(nlegs)]}
    for n in range(1, n_max + 1):
        out = []
        for t in tups[n - 1]:
            for i in range(nlegs):
                if normalized and t[-1] == i:
                    continue
                out.append(t + (i,))
        tups[n] = out
    return tups


def _cech_products(cover, n_max, normalized):
    C = cover.category
    legs = cover.legs
    tups = _cech_tuples(len(legs), n_max, normalized)
    P, s, projs = {}, {}, {}
    for i, f in enumerate(legs):
        t = (i,)
        P[t], s[t] = C.src[f], f
        projs[t] = (C.ident[C.src[f]],)
    for n in range(1, n_max + 1):
        for t in tups[n]:
            prev = t[:-1]
            Q, p1, p2 = pullback(C, s[prev], legs[t[-1]],
                                 witnesses=cover.witnesses)
            P[t] = Q
            s[t] = C.comp[(s[prev], p1)]
            projs[t] = tuple(C.comp[(pr, p1)] for pr in projs[prev]) + (p2,)
    return tups, P, s, projs


def _unique_arrow(C, src, dst, wanted):
    """The morphism src -> dst whose composites match the wanted pairs.

    wanted: list of (morphism out of dst, required composite out of src).
    """
    found = [h for h in C.hom(src, dst)
             if all(C.comp[(p, h)] == q for p, q in wanted)]
    if len(found) != 1:
        raise CategoryError(
            "%d candidate arrows %r -> %r against the fiber-product cone"
            % (len(found), src, dst))
    return found[0]


def _cech_data(cover, A, n_max, normalized, presheaf):
    C = A.category
    _check_same_category(C, cover.category, "cover")
    ring = _ring_of(A)
    tups, P, s, projs = _cech_products(cover, n_max, normalized)

    def value_of(t):
        return A.value(P[t])

    modules, offsets = _block_layout(ring, tups, value_of, n_max)
    maps = {}
    for n in range(1, n_max + 1):
        lo, hi = (n, n - 1) if presheaf else (n - 1, n)
        rows = [[ring.zero] * modules[hi].generators
                for _ in range(modules[lo].generators)]
        for t in tups[n]:
            for k in range(n + 1):
                tau = t[:k] + t[k + 1:]
                toff = offsets[n - 1].get(tau)
                if toff is None:
                    continue
                wanted = [(projs[tau][a], projs[t][a if a < k else a + 1])
                          for a in range(len(tau))]
                h = _unique_arrow(C, P[t], P[tau], wanted)
                F = A.action(h).matrix
                sign = 1 if k % 2 == 0 else -1
                soff = offsets[n][t]
                if presheaf:
                    _add_block(rows, ring, soff, toff, F, sign)
                else:
                    _add_block(rows, ring, toff, soff, F, sign)
        maps[n - 1 if presheaf else n] = ModuleMap(
            modules[hi], modules[lo], rows, check=False)
    return _ComplexData(modules, maps, tups, offsets, value_of,
                        extra=(P, s, projs))


def cech_chain_complex(cover, A, n_max, normalized=False):
    """The chain complex of a cover: all index tuples, iterated fiber
    products as entries, projection-induced faces.  Degrees 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    data = _cech_data(cover, A, n_max, normalized, presheaf=False)
    return ChainComplex(A.ring, data.modules, data.maps)


def cech_cochain_complex(cover, B, n_max, normalized=False):
    """The dual cochain complex of a cover with presheaf coefficients."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    data = _cech_data(cover, B, n_max, normalized, presheaf=True)
    return CochainComplex(B.ring, data.modules, data.maps)


# ---------------------------------------------------------------------------
# homology of a single sieve or cover


def h_n_sieve(R, A, n, normalized=True):
    """H_n(R, A): degree-n homology of the sieve's chain complex."""
    if n < 0:
        raise ValueError("negative degree")
    return roos_chain_complex(R, A, n + 1, normalized).homology(n)


def h_n_cover(cover, A, n, normalized=True):
    """H_n of a cover's chain complex."""
    if n < 0:
        raise ValueError("negative degree")
    return cech_chain_complex(cover, A, n + 1, normalized).homology(n)


def h_n_sieve_presheaf(R, B, n, normalized=True):
    """H^n(R, B): degree-n cohomology of the sieve's cochain complex."""
    if n < 0:
        raise ValueError("negative degree")
    return roos_cochain_complex(R, B, n + 1, normalized).cohomology(n)


def h_n_cover_presheaf(cover, B, n, normalized=True):
    """H^n of a cover's cochain complex."""
    if n < 0:
        raise ValueError("negative degree")
    return cech_cochain_complex(cover, B, n + 1, normalized).cohomology(n)


# ---------------------------------------------------------------------------
# induced maps on homology, and Čech homology of an object as a limit


def induced_on_homology(src, dst, chain_maps, n):
    """The map H_n(src) -> H_n(dst) induced by a degreewise chain map.

    chain_maps: degree -> ModuleMap between the complexes' modules.  Only
    degree n is consulted (plus both complexes' cached cycle data), so the
    caller vouches for commutation with the boundaries.
    """
    Hs, Zs = src.homology_data(n)
    Hd, Zd = dst.homology_data(n)
    f = chain_maps.get(n)
    if f is None:
        f = zero_map(src.module(n), dst.module(n))
    carried = compose(f, ModuleMap(Hs, src.module(n), Zs, check=False))
    b = dst.boundary(n + 1)
    b_cols = b.matrix if b.domain.generators else ()
    coords = express_in_subquotient(dst.module(n), Zd, b_cols, carried.matrix)
    if coords is None:
        raise ValueError("chain map does not descend to homology")
    return ModuleMap(Hs, Hd, coords, check=False)


def _sieve_inclusion_maps(small, big, ring):
    """Chain maps embedding a smaller sieve's complex into a bigger one.

    Nested sieves with the same normalization: every simplex of the small
    complex reappears verbatim in the big one, so each degree embeds by
    identity blocks.
    """
    out = {}
    for n in small.simp:
        rows = [[ring.zero] * small.modules[n].generators
                for _ in range(big.modules[n].generators)]
        for sigma in small.simp[n]:
            r0 = big.offsets[n][sigma]
            c0 = small.offsets[n][sigma]
            for i in range(small.value_of(sigma).generators):
                rows[r0 + i][c0 + i] = ring.one
        out[n] = ModuleMap(small.modules[n], big.modules[n], rows,
                           check=False)
    return out


def _refinement(fine, coarse):
    """Per-leg (coarse index, factoring arrow) pairs, or None."""
    C = fine.category
    out = []
    for f in fine.legs:
        found = None
        for j, g in enumerate(coarse.legs):
            for e in C.hom(C.src[f], C.src[g]):
                if C.comp[(g, e)] == f:
                    found = (j, e)
                    break
            if found:
                break
        if found is None:
            return None
        out.append(found)
    return tuple(out)


def _cover_refinement_maps(fine, coarse, assignment, A):
    """Chain maps from a refining cover's complex into the refined one.

    assignment: per fine leg, (coarse leg index, factoring arrow).  Each
    fine tuple t maps to the coarse tuple of assigned indices through the
    unique arrow between the fiber products; tuples whose image is not in
    the coarse basis (normalization dropped it) contribute zero.
    """
    C = A.category
    ring = _ring_of(A)
    fP, _, fprojs = fine.extra
    cP, _, cprojs = coarse.extra
    out = {}
    for n in fine.simp:
        rows = [[ring.zero] * fine.modules[n].generators
                for _ in range(coarse.modules[n].generators)]
        for t in fine.simp[n]:
            T = tuple(assignment[i][0] for i in t)
            toff = coarse.offsets[n].get(T)
            if toff is None:
                continue
            wanted = [(cprojs[T][a],
                       C.comp[(assignment[t[a]][1], fprojs[t][a])])
                      for a in range(len(t))]
            h = _unique_arrow(C, fP[t], cP[T], wanted)
            _add_block(rows, ring, toff, fine.offsets[n][t],
                       A.action(h).matrix, 1)
        out[n] = ModuleMap(fine.modules[n], coarse.modules[n], rows,
                           check=False)
    return out


def cech_H_n(site, U, A, n, via="sieves", honest=True, normalized=True):
    """Čech homology of an object: the limit of H_n over covering sieves
    (via="sieves") or over the stored covers (via="covers").

    Transitions come from inclusion chain maps between sieve complexes and
    from refinement chain maps between cover complexes.  With honest=False
    the sieve route evaluates at the least covering sieve instead: the
    least sieve is initial among covering sieves, so the limit collapses
    onto its value there.
    """
    if n < 0:
        raise ValueError("negative degree")
    ring = _ring_of(A)
    if via == "sieves":
        if not honest:
            return h_n_sieve(site.least_covering_sieve(U), A, n, normalized)
        sieves = site.covering_sieves(U)
        if not sieves:
            raise CategoryError("no covering sieves on %r" % (U,))
        data = {R: _roos_data(R, A, n + 1, normalized, presheaf=False)
                for R in sieves}
        cx = {R: ChainComplex(ring, data[R].modules, data[R].maps)
              for R in sieves}
        I = poset_category(sieves, lambda a, b: a.members <= b.members)
        values = {R: cx[R].homology(n) for R in sieves}
        actions = {}
        for m in I.morphisms:
            a, b = I.src[m], I.tgt[m]
            if a == b:
                actions[m] = identity_map(values[a])
            else:
                emb = _sieve_inclusion_maps(data[a], data[b], ring)
                actions[m] = induced_on_homology(cx[a], cx[b], emb, n)
        return lim(I, Precosheaf(I, values, actions, ring=ring)).module
    if via == "covers":
        if not site.has_pretopology:
            raise CategoryError("site carries no pretopology; use via='sieves'")
        covers = site.covers_of(U)
        data = {c: _cech_data(c, A, n + 1, normalized, presheaf=False)
                for c in covers}
        cx = {c: ChainComplex(ring, data[c].modules, data[c].maps)
              for c in covers}
        assignments = {}
        for a in covers:
            for b in covers:
                assignments[(a, b)] = _refinement(a, b)
        I = poset_category(covers,
                           lambda a, b: assignments[(a, b)] is not None)
        values = {c: cx[c].homology(n) for c in covers}
        actions = {}
        for m in I.morphisms:
            a, b = I.src[m], I.tgt[m]
            if a == b:
                actions[m] = identity_map(values[a])
            else:
                cm = _cover_refinement_maps(data[a], data[b],
                                            assignments[(a, b)], A)
                actions[m] = induced_on_homology(cx[a], cx[b], cm, n)
        return lim(I, Precosheaf(I, values, actions, ring=ring)).module
    raise ValueError("via must be 'sieves' or 'covers'")


# ---------------------------------------------------------------------------
# the plus construction and cosheafification
#
# The value at U is H_0 over the least covering sieve — initial among
# covering sieves, so it equals the limit the definition asks for.  The
# action along m: U -> V sends the colimit leg of f to the leg of m∘f
# (pullback-stability of covering sieves puts m∘f into the least sieve on
# V whenever f is in the least sieve on U).


def plus(site, A):
    """(A₊, λ₊): objectwise H₀ of the least covering sieve, with the
    comparison morphism λ₊: A₊ -> A."""
    C = site.category
    _check_same_category(C, A.category, "precosheaf")
    colims, comparisons = {}, {}
    for U in C.objects:
        R = site.least_covering_sieve(U)
        colims[U], comparisons[U] = h0_sieve_data(A, R)
    values = {U: colims[U].module for U in C.objects}
    actions = {}
    for m in C.morphisms:
        U, V = C.src[m], C.tgt[m]
        if C.is_identity(m):
            actions[m] = identity_map(values[U])
            continue
        comps = {}
        for f in colims[U].order:
            leg = colims[V].cocone.get(C.comp[(m, f)])
            if leg is None:
                raise SiteAxiomError(
                    "GT-stability",
                    "%r composed into %r leaves the least covering sieve"
                    % (f, m))
            comps[f] = leg
        actions[m] = colims[U].induce(comps, values[V])
    P = Precosheaf(C, values, actions, ring=A.ring)
    return P, PrecosheafMorphism(P, A, comparisons)


def sharp(site, A):
    """(A_#, λ₊₊): the plus construction applied twice, with the composite
    comparison morphism A_# -> A."""
    P1, lam1 = plus(site, A)
    P2, lam2 = plus(site, P1)
    return P2, compose_morphisms(lam1, lam2)


def plus_presheaf(site, B):
    """(B⁺, λ⁺): objectwise H⁰ of the least covering sieve, with the
    comparison morphism λ⁺: B -> B⁺."""
    C = site.category
    _check_same_category(C, B.category, "presheaf")
    lims, comparisons = {}, {}
    for U in C.objects:
        R = site.least_covering_sieve(U)
        lims[U], comparisons[U] = h0_presheaf_data(B, R)
    values = {U: lims[U].module for U in C.objects}
    actions = {}
    for m in C.morphisms:
        U, V = C.src[m], C.tgt[m]
        if C.is_identity(m):
            actions[m] = identity_map(values[U])
            continue
        comps = {}
        for f in lims[U].order:
            leg = lims[V].cone.get(C.comp[(m, f)])
            if leg is None:
                raise SiteAxiomError(
                    "GT-stability",
                    "%r composed into %r leaves the least covering sieve"
                    % (f, m))
            comps[f] = leg
        actions[m] = lims[U].induce(comps, values[V])
    P = Presheaf(C, values, actions, ring=B.ring)
    return P, PrecosheafMorphism(B, P, comparisons)


def sharp_presheaf(site, B):
    """(B^#, λ⁺⁺): the presheaf plus construction applied twice."""
    P1, lam1 = plus_presheaf(site, B)
    P2, lam2 = plus_presheaf(site, P1)
    return P2, compose_morphisms(lam2, lam1)


# ---------------------------------------------------------------------------
# classification predicates


def _comparison_scan(site, A, accept):
    C = site.category
    _check_same_category(C, A.category, "precosheaf")
    for U in C.objects:
        for R in site.covering_sieves(U):
            _, cmp_map = h0_sieve_data(A, R)
            if not accept(cmp_map):
                return False, R
    return True, None


def is_coseparated(site, A):
    """Is H₀(R, A) -> A(U) epi for every covering sieve?  (ok, witness)."""
    return _comparison_scan(site, A, _is_epi)


def is_cosheaf(site, A):
    """Is H₀(R, A) -> A(U) iso for every covering sieve?  (ok, witness)."""
    return _comparison_scan(site, A, _is_iso)


def _presheaf_scan(site, B, accept):
    C = site.category
    _check_same_category(C, B.category, "presheaf")
    for U in C.objects:
        for R in site.covering_sieves(U):
            _, cmp_map = h0_presheaf_data(B, R)
            if not accept(cmp_map):
                return False, R
    return True, None


def is_separated(site, B):
    """Is B(U) -> H⁰(R, B) mono for every covering sieve?  (ok, witness)."""
    return _presheaf_scan(site, B, _is_mono)


def is_sheaf(site, B):
    """Is B(U) -> H⁰(R, B) iso for every covering sieve?  (ok, witness)."""
    return _presheaf_scan(site, B, _is_iso)


def is_flabby(A):
    """Are all action maps mono?  Poset sites only.  (ok, witness)."""
    C = A.category
    if not is_poset_category(C):
        raise CategoryError("flabbiness needs a poset of opens")
    for m in C.morphisms:
        if C.is_identity(m):
            continue
        if not _is_mono(A.action(m)):
            return False, m
    return True, None


def is_flask(site, A, n_max, normalized=True):
    """Does H_s(R, A) vanish for 0 < s <= n_max on every covering sieve?

    Returns (ok, witness) with witness = (R, s) on failure.
    """
    C = site.category
    _check_same_category(C, A.category, "precosheaf")
    ring = _ring_of(A)
    for U in C.objects:
        for R in site.covering_sieves(U):
            data = _roos_data(R, A, n_max + 1, normalized, presheaf=False)
            cx = ChainComplex(ring, data.modules, data.maps)
            for s in range(1, n_max + 1):
                if not _is_trivial(cx.homology(s)):
                    return False, (R, s)
    return True, None


# ---------------------------------------------------------------------------
# the constant cosheaf of a finite space


def constant_cosheaf(X, M, category=None):
    """The cosheaf U |-> M^(number of components of U) on the open poset.

    The action of U ⊆ V sends each component's copy of M identically onto
    the copy of the V-component containing it.  Pass the open-site category
    to share labels with an existing site; the default builds it afresh.
    """
    ring = M.ring
    labels = [open_label(o) for o in X.opens]
    if category is None:
        category = poset_category(labels, lambda u, v: set(u) <= set(v))
    elif set(category.objects) != set(labels):
        raise CategoryError("category does not match the space's opens")
    comps = {open_label(o): connected_components(X, o) for o in X.opens}
    g = M.generators
    values = {u: direct_sum([M] * len(comps[u]), ring=ring)[0]
              for u in category.objects}
    actions = {}
    for m in category.morphisms:
        u, v = category.src[m], category.tgt[m]
        rows = [[ring.zero] * values[u].generators
                for _ in range(values[v].generators)]
        for a, K in enumerate(comps[u]):
            b = next(i for i, K2 in enumerate(comps[v]) if K <= K2)
            _add_block(rows, ring, b * g, a * g, identity(g, ring), 1)
        actions[m] = ModuleMap(values[u], values[v], rows, check=False)
    return Precosheaf(category, values, actions, ring=ring)
