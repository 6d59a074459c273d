"""Finite categories, sieves, covers, Grothendieck sites, finite spaces.

Categories are given extensionally: object labels, morphism labels, source
and target maps, identities, and a composition table.  Everything a site
needs downstream (sieve closure, GT axioms, comma categories, pullbacks) is
decided by exhaustive enumeration over this finite data.

Label conventions used throughout the package:

* a finite space's open U becomes the object label ``tuple(sorted(U))``;
* the inclusion U ⊆ V becomes the morphism label ``(label_U, label_V)``;
* an object of a comma category C/U or C/R is the label of a morphism
  into U, and a comma morphism is a triple ``(f, g, beta)`` meaning
  beta: dom f -> dom g with g ∘ beta = f.
"""

import itertools

__all__ = [
    "FinCategory", "FinFunctor", "Sieve", "Cover", "Site", "FinSpace",
    "CategoryError", "SiteAxiomError", "MissingPullbackError",
    "poset_category", "identity_functor", "maximal_sieve", "empty_sieve",
    "sieve_closure", "sieve_generated_by", "pullback_sieve", "all_sieves",
    "topology_from_pretopology", "open_site", "open_label",
    "comma_over", "comma_sieve", "comma_projection", "pullback",
    "connected_components", "check_category", "check_gt",
    "is_poset_category", "composable_chains",
]


class CategoryError(ValueError):
    pass


class SiteAxiomError(ValueError):
    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = witness
        super().__init__("axiom %s fails: %s" % (axiom, witness))


class MissingPullbackError(ValueError):
    pass


class FinCategory:
    """A finite category as explicit tables.

    objects: tuple of labels; morphisms: tuple of labels;
    src, tgt: morphism -> object; ident: object -> morphism;
    comp: (g, f) -> g∘f for every pair with tgt(f) == src(g).
    """

    __slots__ = ("objects", "morphisms", "src", "tgt", "ident", "comp",
                 "_into", "_out", "_hom")

    def __init__(self, objects, morphisms, src, tgt, ident, comp):
        object.__setattr__(self, "objects", tuple(objects))
        object.__setattr__(self, "morphisms", tuple(morphisms))
        object.__setattr__(self, "src", dict(src))
        object.__setattr__(self, "tgt", dict(tgt))
        object.__setattr__(self, "ident", dict(ident))
        object.__setattr__(self, "comp", dict(comp))
        into = {u: [] for u in self.objects}
        out = {u: [] for u in self.objects}
        hom = {}
        for m in self.morphisms:
            s, t = self.src[m], self.tgt[m]
            into[t].append(m)
            out[s].append(m)
            hom.setdefault((s, t), []).append(m)
        object.__setattr__(self, "_into", {u: tuple(v) for u, v in into.items()})
        object.__setattr__(self, "_out", {u: tuple(v) for u, v in out.items()})
        object.__setattr__(self, "_hom", {k: tuple(v) for k, v in hom.items()})

    def __setattr__(self, *a):
        raise AttributeError("FinCategory is immutable")

    def __repr__(self):
        return "FinCategory(%d objects, %d morphisms)" % (
            len(self.objects), len(self.morphisms))

    def hom(self, u, v):
        return self._hom.get((u, v), ())

    def into(self, u):
        """All morphisms with target u."""
        return self._into[u]

    def out_of(self, u):
        return self._out[u]

    def compose(self, g, f):
        """g ∘ f (f first)."""
        return self.comp[(g, f)]

    def is_identity(self, m):
        return self.ident.get(self.src[m]) == m and self.src[m] == self.tgt[m]


def check_category(C):
    """Exhaustive validation; returns a list of violation strings (empty = ok)."""
    bad = []
    for m in C.morphisms:
        if C.src.get(m) not in C.objects or C.tgt.get(m) not in C.objects:
            bad.append("morphism %r has unknown endpoints" % (m,))
    for u in C.objects:
        e = C.ident.get(u)
        if e not in C.morphisms or C.src.get(e) != u or C.tgt.get(e) != u:
            bad.append("object %r lacks a proper identity" % (u,))
    for g in C.morphisms:
        for f in C.morphisms:
            defined = (g, f) in C.comp
            composable = C.tgt.get(f) == C.src.get(g)
            if composable and not defined:
                bad.append("composite of %r after %r missing" % (g, f))
            elif defined and not composable:
                bad.append("composite of %r after %r defined but not composable" % (g, f))
            elif defined:
                h = C.comp[(g, f)]
                if h not in C.morphisms or C.src.get(h) != C.src.get(f) \
                        or C.tgt.get(h) != C.tgt.get(g):
                    bad.append("composite of %r after %r has wrong endpoints" % (g, f))
    if bad:
        return bad
    for u in C.objects:
        e = C.ident[u]
        for f in C.into(u):
            if C.comp[(e, f)] != f:
                bad.append("identity of %r not left-neutral on %r" % (u, f))
        for f in C.out_of(u):
            if C.comp[(f, e)] != f:
                bad.append("identity of %r not right-neutral on %r" % (u, f))
    for f in C.morphisms:
        for g in C.out_of(C.tgt[f]):
            for h in C.out_of(C.tgt[g]):
                if C.comp[(h, C.comp[(g, f)])] != C.comp[(C.comp[(h, g)], f)]:
                    bad.append("associativity fails on (%r, %r, %r)" % (h, g, f))
    return bad


def is_poset_category(C):
    """Thin and antisymmetric: at most one arrow per hom-set, no 2-cycles."""
    for u in C.objects:
        for v in C.objects:
            if len(C.hom(u, v)) > 1:
                return False
            if u != v and C.hom(u, v) and C.hom(v, u):
                return False
    return True


def poset_category(elements, leq):
    """The thin category of a partial order; labels per module convention."""
    elements = tuple(elements)
    morphisms = []
    src, tgt, ident = {}, {}, {}
    for u in elements:
        for v in elements:
            if leq(u, v):
                m = (u, v)
                morphisms.append(m)
                src[m], tgt[m] = u, v
                if u == v:
                    ident[u] = m
    comp = {}
    for g in morphisms:
        for f in morphisms:
            if f[1] == g[0]:
                comp[(g, f)] = (f[0], g[1])
    return FinCategory(elements, morphisms, src, tgt, ident, comp)


class FinFunctor:
    __slots__ = ("source", "target", "on_objects", "on_morphisms")

    def __init__(self, source, target, on_objects, on_morphisms):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "on_objects", dict(on_objects))
        object.__setattr__(self, "on_morphisms", dict(on_morphisms))

    def __setattr__(self, *a):
        raise AttributeError("FinFunctor is immutable")

    def obj(self, u):
        return self.on_objects[u]

    def mor(self, m):
        return self.on_morphisms[m]

    def check(self):
        bad = []
        S, T = self.source, self.target
        for m in S.morphisms:
            fm = self.on_morphisms.get(m)
            if fm not in T.morphisms:
                bad.append("image of %r unknown" % (m,))
                continue
            if T.src[fm] != self.on_objects.get(S.src[m]) \
                    or T.tgt[fm] != self.on_objects.get(S.tgt[m]):
                bad.append("endpoints not preserved on %r" % (m,))
        if bad:
            return bad
        for u in S.objects:
            if self.on_morphisms[S.ident[u]] != T.ident[self.on_objects[u]]:
                bad.append("identity of %r not preserved" % (u,))
        for (g, f), h in S.comp.items():
            if T.comp[(self.on_morphisms[g], self.on_morphisms[f])] \
                    != self.on_morphisms[h]:
                bad.append("composition not preserved on (%r, %r)" % (g, f))
        return bad


def identity_functor(C):
    return FinFunctor(C, C, {u: u for u in C.objects},
                      {m: m for m in C.morphisms})


# ---------------------------------------------------------------------------
# sieves


class Sieve:
    """A set of morphisms into `target`, closed under precomposition."""

    __slots__ = ("category", "target", "members")

    def __init__(self, category, target, members, check=True):
        object.__setattr__(self, "category", category)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "members", frozenset(members))
        if check:
            C = category
            for f in self.members:
                if C.tgt[f] != target:
                    raise CategoryError("sieve member %r does not land in %r"
                                        % (f, target))
                for g in C.into(C.src[f]):
                    if C.comp[(f, g)] not in self.members:
                        raise CategoryError(
                            "sieve not closed: %r ∘ %r escapes" % (f, g))

    def __setattr__(self, *a):
        raise AttributeError("Sieve is immutable")

    def __eq__(self, other):
        return (isinstance(other, Sieve) and self.target == other.target
                and self.members == other.members)

    def __hash__(self):
        return hash((self.target, self.members))

    def __repr__(self):
        return "Sieve(on %r, %d members)" % (self.target, len(self.members))

    def __contains__(self, m):
        return m in self.members

    def __le__(self, other):
        return self.target == other.target and self.members <= other.members

    def sorted_members(self):
        return tuple(sorted(self.members, key=repr))


def maximal_sieve(C, U):
    """All morphisms into U (the representable sieve)."""
    if U not in C.objects:
        raise CategoryError("unknown object %r" % (U,))
    return Sieve(C, U, C.into(U), check=False)


def empty_sieve(C, U):
    return Sieve(C, U, (), check=False)


def sieve_closure(C, U, gens):
    """Smallest sieve on U containing the given morphisms into U."""
    members = set()
    for f in gens:
        if C.tgt[f] != U:
            raise CategoryError("generator %r does not land in %r" % (f, U))
        members.add(f)
        for g in C.into(C.src[f]):
            members.add(C.comp[(f, g)])
    return Sieve(C, U, members, check=False)


def pullback_sieve(C, R, f):
    """f*R: the sieve on dom(f) of morphisms g with f∘g ∈ R."""
    V = C.src[f]
    members = [g for g in C.into(V) if C.comp[(f, g)] in R.members]
    return Sieve(C, V, members, check=False)


def all_sieves(C, U):
    """Every sieve on U, by brute-force subset enumeration."""
    arrows = C.into(U)
    out = []
    for k in range(len(arrows) + 1):
        for sub in itertools.combinations(arrows, k):
            s = set(sub)
            ok = True
            for f in sub:
                for g in C.into(C.src[f]):
                    if C.comp[(f, g)] not in s:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(Sieve(C, U, s, check=False))
    return tuple(out)


# ---------------------------------------------------------------------------
# covers and pullbacks


class Cover:
    """A family of morphisms into a common target, with pullback witnesses.

    witnesses maps (f, g) -- f a leg, g any morphism into the target -- to a
    triple (P, p1, p2): an object with projections p1: P -> dom f,
    p2: P -> dom g forming the fiber product.  Poset sites synthesize
    witnesses from meets and may leave this empty.
    """

    __slots__ = ("category", "target", "legs", "witnesses")

    def __init__(self, category, target, legs, witnesses=None):
        for f in legs:
            if category.tgt[f] != target:
                raise CategoryError("cover leg %r does not land in %r" % (f, target))
        object.__setattr__(self, "category", category)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "legs", tuple(legs))
        object.__setattr__(self, "witnesses", dict(witnesses or {}))

    def __setattr__(self, *a):
        raise AttributeError("Cover is immutable")

    def __eq__(self, other):
        return (isinstance(other, Cover) and self.target == other.target
                and self.legs == other.legs)

    def __hash__(self):
        return hash((self.target, self.legs))

    def __repr__(self):
        return "Cover(of %r, %d legs)" % (self.target, len(self.legs))


def sieve_generated_by(cover):
    """Morphisms into the target factoring through some leg."""
    C = cover.category
    members = set()
    for leg in cover.legs:
        members.add(leg)
        for g in C.into(C.src[leg]):
            members.add(C.comp[(leg, g)])
    return Sieve(C, cover.target, members, check=False)


def _poset_meet(C, u, v):
    """The meet of u and v in a thin category, or None."""
    below = [w for w in C.objects if C.hom(w, u) and C.hom(w, v)]
    for w in below:
        if all(C.hom(x, w) for x in below):
            return w
    return None


def pullback(C, f, g, witnesses=None):
    """Fiber product of f and g over their common target.

    Returns (P, p1, p2) with f∘p1 = g∘p2, universal by enumeration.  Thin
    categories use meets; otherwise a witness table must supply the triple
    (it is verified here).
    """
    if C.tgt[f] != C.tgt[g]:
        raise CategoryError("%r and %r have different targets" % (f, g))
    trip = None
    if witnesses:
        trip = witnesses.get((f, g))
        if trip is None and (g, f) in witnesses:
            P, p2, p1 = witnesses[(g, f)]
            trip = (P, p1, p2)
    if trip is None:
        if is_poset_category(C):
            w = _poset_meet(C, C.src[f], C.src[g])
            if w is None:
                raise MissingPullbackError(
                    "no meet of %r and %r" % (C.src[f], C.src[g]))
            trip = (w, C.hom(w, C.src[f])[0], C.hom(w, C.src[g])[0])
        else:
            raise MissingPullbackError("no witness for (%r, %r)" % (f, g))
    P, p1, p2 = trip
    if C.comp[(f, p1)] != C.comp[(g, p2)]:
        raise CategoryError("pullback witness square does not commute")
    # universal property, checked exhaustively
    for W in C.objects:
        for u in C.hom(W, C.src[f]):
            for v in C.hom(W, C.src[g]):
                if C.comp[(f, u)] != C.comp[(g, v)]:
                    continue
                lifts = [h for h in C.hom(W, P)
                         if C.comp[(p1, h)] == u and C.comp[(p2, h)] == v]
                if len(lifts) != 1:
                    raise CategoryError(
                        "pullback witness not universal at %r (%d lifts)"
                        % (W, len(lifts)))
    return trip


# ---------------------------------------------------------------------------
# sites


class Site:
    """A finite category plus an extensional Grothendieck topology.

    covering: object -> frozenset of Sieve.  covers: optional pretopology
    data per object (the identity cover is implicit).  space: the FinSpace
    this site came from, when it did.  witnesses: pullback witness table
    for non-thin categories.
    """

    __slots__ = ("category", "covering", "covers", "space", "witnesses")

    def __init__(self, category, covering, covers=None, space=None, witnesses=None):
        object.__setattr__(self, "category", category)
        object.__setattr__(self, "covering",
                           {u: frozenset(v) for u, v in covering.items()})
        object.__setattr__(self, "covers",
                           {u: tuple(v) for u, v in (covers or {}).items()})
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "witnesses", dict(witnesses or {}))

    def __setattr__(self, *a):
        raise AttributeError("Site is immutable")

    def __repr__(self):
        n = sum(len(v) for v in self.covering.values())
        return "Site(%r, %d covering sieves)" % (self.category, n)

    @property
    def has_pretopology(self):
        return bool(self.covers)

    def covering_sieves(self, U):
        return tuple(sorted(self.covering.get(U, frozenset()),
                            key=lambda s: (len(s.members), repr(s.sorted_members()))))

    def is_covering(self, R):
        return R in self.covering.get(R.target, frozenset())

    def least_covering_sieve(self, U):
        """The intersection of all covering sieves on U (GT makes it covering)."""
        sieves = self.covering.get(U, frozenset())
        if not sieves:
            raise CategoryError("no covering sieves on %r" % (U,))
        members = frozenset.intersection(*[s.members for s in sieves])
        least = Sieve(self.category, U, members, check=False)
        if least not in sieves:
            raise SiteAxiomError("GT-intersection",
                                 "intersection of Cov(%r) is not covering" % (U,))
        return least

    def covers_of(self, U):
        """Pretopology covers of U, identity cover included."""
        C = self.category
        idc = Cover(C, U, (C.ident[U],))
        stored = self.covers.get(U, ())
        return (idc,) + tuple(c for c in stored if c != idc)


def check_gt(site):
    """Exhaustively verify GT1-GT4; returns a list of (axiom, witness) pairs."""
    C = site.category
    bad = []
    sieves_on = {U: all_sieves(C, U) for U in C.objects}
    for U in C.objects:
        cov = site.covering.get(U, frozenset())
        if maximal_sieve(C, U) not in cov:
            bad.append(("GT1", "maximal sieve on %r not covering" % (U,)))
        for R in cov:
            for S in sieves_on[U]:
                if R.members <= S.members and S not in cov:
                    bad.append(("GT2", "%r contains covering %r but is not covering"
                                % (S, R)))
        for R in cov:
            for f in C.into(U):
                fR = pullback_sieve(C, R, f)
                if fR not in site.covering.get(C.src[f], frozenset()):
                    bad.append(("GT3", "pullback of %r along %r not covering"
                                % (R, f)))
        for R in cov:
            for S in sieves_on[U]:
                if S in cov:
                    continue
                if all(pullback_sieve(C, S, f)
                       in site.covering.get(C.src[f], frozenset())
                       for f in R.members):
                    bad.append(("GT4", "%r locally covers along %r but is not covering"
                                % (S, R)))
    return bad


def topology_from_pretopology(C, covers_by_object, witnesses=None, space=None):
    """The topology generated by a pretopology: sieves containing a generated sieve.

    covers_by_object: object -> iterable of Cover (identity covers implicit).
    Raises SiteAxiomError if the result fails the GT axioms.
    """
    covering = {}
    for U in C.objects:
        gen = [maximal_sieve(C, U)]
        for cov in covers_by_object.get(U, ()):
            if cov.target != U:
                raise CategoryError("cover of %r filed under %r" % (cov.target, U))
            gen.append(sieve_generated_by(cov))
        covering[U] = frozenset(
            S for S in all_sieves(C, U)
            if any(g.members <= S.members for g in gen))
    site = Site(C, covering, covers=covers_by_object, space=space,
                witnesses=witnesses)
    bad = check_gt(site)
    if bad:
        raise SiteAxiomError(*bad[0])
    return site


# ---------------------------------------------------------------------------
# finite topological spaces


class FinSpace:
    """A finite topological space: points plus the family of open sets."""

    __slots__ = ("points", "opens")

    def __init__(self, points, opens):
        points = tuple(sorted(points))
        opens = tuple(sorted({frozenset(o) for o in opens},
                             key=lambda o: (len(o), tuple(sorted(o)))))
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "opens", opens)
        whole = frozenset(points)
        family = set(opens)
        if frozenset() not in family or whole not in family:
            raise CategoryError("opens must contain the empty set and the space")
        for a in opens:
            if not a <= whole:
                raise CategoryError("open %r contains unknown points" % (sorted(a),))
            for b in opens:
                if a | b not in family or a & b not in family:
                    raise CategoryError(
                        "opens not closed under union/intersection at %r, %r"
                        % (sorted(a), sorted(b)))

    def __setattr__(self, *a):
        raise AttributeError("FinSpace is immutable")

    def __repr__(self):
        return "FinSpace(%d points, %d opens)" % (len(self.points), len(self.opens))

    def minimal_open(self, x, within=None):
        """Smallest open containing x (intersected with `within` if given)."""
        out = None
        for o in self.opens:
            if x in o:
                out = o if out is None else out & o
        if within is not None:
            out = out & within
        return out


def connected_components(X, U):
    """Partition of the open U into connected components of the subspace."""
    U = frozenset(U)
    if U not in set(X.opens):
        raise CategoryError("%r is not open" % (sorted(U),))
    pts = sorted(U)
    parent = {x: x for x in pts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for x in pts:
        for y in X.minimal_open(x, within=U):
            union(x, y)
    groups = {}
    for x in pts:
        groups.setdefault(find(x), []).append(x)
    return tuple(sorted((frozenset(g) for g in groups.values()),
                        key=lambda s: tuple(sorted(s))))


def open_label(o):
    return tuple(sorted(o))


def open_site(X):
    """The standard site of a finite space.

    Objects are opens (labeled by sorted point tuples), morphisms are
    inclusions, covering sieves on U are the sieves whose members' sources
    union to U, and the stored pretopology consists of the minimal-
    neighborhood cover (cofinal among all open coverings) plus the identity.
    """
    labels = [open_label(o) for o in X.opens]
    by_label = {open_label(o): o for o in X.opens}
    C = poset_category(labels, lambda u, v: set(u) <= set(v))
    covering = {}
    for U in labels:
        sieves = []
        for S in all_sieves(C, U):
            covered = set()
            for m in S.members:
                covered.update(C.src[m])
            if covered == set(U):
                sieves.append(S)
        covering[U] = frozenset(sieves)
    covers = {}
    for U in labels:
        opens_U = by_label[U]
        legs = sorted({open_label(X.minimal_open(x, within=opens_U))
                       for x in opens_U})
        if legs:
            covers[U] = (Cover(C, U, tuple((l, U) for l in legs)),)
        else:
            covers[U] = ()
    return Site(C, covering, covers=covers, space=X)


# ---------------------------------------------------------------------------
# comma categories


def _comma_on(C, objects):
    """Comma category whose objects are the given morphisms into a fixed U."""
    objs = tuple(objects)
    obj_set = set(objs)
    morphisms = []
    src, tgt, ident, comp = {}, {}, {}, {}
    for f in objs:
        for g in objs:
            for beta in C.hom(C.src[f], C.src[g]):
                if C.comp[(g, beta)] == f:
                    m = (f, g, beta)
                    morphisms.append(m)
                    src[m], tgt[m] = f, g
    for f in objs:
        ident[f] = (f, f, C.ident[C.src[f]])
    for m2 in morphisms:
        for m1 in morphisms:
            if m1[1] == m2[0]:
                comp[(m2, m1)] = (m1[0], m2[1], C.comp[(m2[2], m1[2])])
    assert all(v in obj_set for v in src.values())
    return FinCategory(objs, morphisms, src, tgt, ident, comp)


def comma_over(C, U):
    """C/U: objects are morphisms into U; has the terminal object id_U."""
    if U not in C.objects:
        raise CategoryError("unknown object %r" % (U,))
    return _comma_on(C, C.into(U))


def comma_sieve(C, R):
    """C/R: objects are the members of the sieve R."""
    return _comma_on(C, sorted(R.members, key=repr))


def comma_projection(comma, C):
    """The functor comma -> C: object f |-> dom f, morphism (f,g,beta) |-> beta."""
    return FinFunctor(comma, C,
                      {f: C.src[f] for f in comma.objects},
                      {m: m[2] for m in comma.morphisms})


def composable_chains(C, n, skip_identities=False):
    """All length-n composable sequences (m_1, ..., m_n), m_{k+1} after m_k.

    n = 0 yields one empty tuple per object is NOT done here; degree-0 data
    is just C.objects.  With skip_identities, no identity appears anywhere.
    """
    if n == 0:
        yield ()
        return
    pool = [m for m in C.morphisms if not (skip_identities and C.is_identity(m))]
    if n == 1:
        for m in pool:
            yield (m,)
        return
    by_src = {}
    for m in pool:
        by_src.setdefault(C.src[m], []).append(m)
    stack = [((m,), C.tgt[m]) for m in pool]
    while stack:
        seq, end = stack.pop()
        if len(seq) == n:
            yield seq
            continue
        for m in by_src.get(end, ()):
            stack.append((seq + (m,), C.tgt[m]))
