"""Module-valued functors on finite categories and their (co)limit calculus.

A Precosheaf is a covariant functor to presented modules, a Presheaf a
contravariant one.  Colimits are cokernel presentations, limits are
matching-family submodules of finite products; both come with their
(co)cone maps and can induce the universal map to or from any other
(co)cone.  On top of that: comma-category H_0 of sieves, Kan extensions,
the Hom pairing into a fixed module, and the free objectwise cover.
"""

from .fincat import FinCategory, comma_sieve
from .kmod import (
    ModuleMap,
    PresentedModule,
    RingMismatchError,
    _kernel,
    _ncols,
    compose,
    express_in_subquotient,
    free_module,
    hom_induced,
    hom_presentation,
    identity_map,
    is_well_defined,
    kernel_with_columns,
    maps_equal,
    subquotient,
)
from .matrix import from_columns, mat

__all__ = [
    "Precosheaf", "Presheaf", "PrecosheafMorphism",
    "check_precosheaf", "check_presheaf", "check_morphism",
    "check_presheaf_morphism", "compose_morphisms",
    "opposite_category", "ColimResult", "LimResult", "colim", "lim",
    "h0_sieve", "h0_sieve_data", "h0_presheaf", "h0_presheaf_data",
    "left_kan", "right_kan", "restrict", "pairing", "pairing_with_data",
    "quasiprojective_cover", "precosheaf_kernel",
    "constant_precosheaf", "generator_cosheaf",
]


class Precosheaf:
    """Covariant: a morphism u -> v acts by a map value(u) -> value(v).

    `ring` is inferred from the values; pass it explicitly only for a
    diagram over the empty category, where nothing else determines it.
    """

    __slots__ = ("category", "values", "actions", "ring")

    def __init__(self, category, values, actions, ring=None):
        object.__setattr__(self, "category", category)
        object.__setattr__(self, "values", dict(values))
        object.__setattr__(self, "actions", dict(actions))
        rings = {m.ring for m in self.values.values()}
        if len(rings) > 1:
            raise RingMismatchError("mixed rings in one precosheaf")
        found = rings.pop() if rings else None
        if ring is not None and found is not None and ring != found:
            raise RingMismatchError("%r vs declared %r" % (found, ring))
        object.__setattr__(self, "ring", found if found is not None else ring)

    def __setattr__(self, *a):
        raise AttributeError("Precosheaf is immutable")

    def value(self, u):
        return self.values[u]

    def action(self, m):
        return self.actions[m]

    def __repr__(self):
        return "Precosheaf(on %r)" % (self.category,)


class Presheaf:
    """Contravariant: a morphism u -> v acts by a map value(v) -> value(u)."""

    __slots__ = ("category", "values", "actions", "ring")

    def __init__(self, category, values, actions, ring=None):
        object.__setattr__(self, "category", category)
        object.__setattr__(self, "values", dict(values))
        object.__setattr__(self, "actions", dict(actions))
        rings = {m.ring for m in self.values.values()}
        if len(rings) > 1:
            raise RingMismatchError("mixed rings in one presheaf")
        found = rings.pop() if rings else None
        if ring is not None and found is not None and ring != found:
            raise RingMismatchError("%r vs declared %r" % (found, ring))
        object.__setattr__(self, "ring", found if found is not None else ring)

    def __setattr__(self, *a):
        raise AttributeError("Presheaf is immutable")

    def value(self, u):
        return self.values[u]

    def action(self, m):
        return self.actions[m]

    def __repr__(self):
        return "Presheaf(on %r)" % (self.category,)


class PrecosheafMorphism:
    """A natural transformation, one component map per object."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "components", dict(components))

    def __setattr__(self, *a):
        raise AttributeError("PrecosheafMorphism is immutable")

    def component(self, u):
        return self.components[u]


def check_precosheaf(A):
    """Exhaustive functoriality check; list of violations (empty = ok)."""
    C = A.category
    bad = []
    for u in C.objects:
        if u not in A.values:
            bad.append("no value at %r" % (u,))
    for m in C.morphisms:
        f = A.actions.get(m)
        if f is None:
            bad.append("no action for %r" % (m,))
            continue
        if f.domain != A.values[C.src[m]] or f.codomain != A.values[C.tgt[m]]:
            bad.append("action of %r has wrong (co)domain" % (m,))
        elif not is_well_defined(f):
            bad.append("action of %r does not respect relations" % (m,))
    if bad:
        return bad
    for u in C.objects:
        if not maps_equal(A.action(C.ident[u]), identity_map(A.value(u))):
            bad.append("identity of %r does not act as identity" % (u,))
    for (g, f), h in C.comp.items():
        if not maps_equal(A.action(h), compose(A.action(g), A.action(f))):
            bad.append("action not functorial on (%r, %r)" % (g, f))
    return bad


def check_presheaf(B):
    C = B.category
    bad = []
    for m in C.morphisms:
        f = B.actions.get(m)
        if f is None:
            bad.append("no action for %r" % (m,))
            continue
        if f.domain != B.values[C.tgt[m]] or f.codomain != B.values[C.src[m]]:
            bad.append("action of %r has wrong (co)domain" % (m,))
        elif not is_well_defined(f):
            bad.append("action of %r does not respect relations" % (m,))
    if bad:
        return bad
    for u in C.objects:
        if not maps_equal(B.action(C.ident[u]), identity_map(B.value(u))):
            bad.append("identity of %r does not act as identity" % (u,))
    for (g, f), h in C.comp.items():
        if not maps_equal(B.action(h), compose(B.action(f), B.action(g))):
            bad.append("action not functorial on (%r, %r)" % (g, f))
    return bad


def check_morphism(phi):
    A, B = phi.source, phi.target
    C = A.category
    bad = []
    for u in C.objects:
        c = phi.components.get(u)
        if c is None or c.domain != A.value(u) or c.codomain != B.value(u):
            bad.append("bad component at %r" % (u,))
        elif not is_well_defined(c):
            bad.append("component at %r does not respect relations" % (u,))
    if bad:
        return bad
    for m in C.morphisms:
        left = compose(phi.component(C.tgt[m]), A.action(m))
        right = compose(B.action(m), phi.component(C.src[m]))
        if not maps_equal(left, right):
            bad.append("naturality fails on %r" % (m,))
    return bad


def check_presheaf_morphism(phi):
    """Like check_morphism, with the contravariant naturality square."""
    A, B = phi.source, phi.target
    C = A.category
    bad = []
    for u in C.objects:
        c = phi.components.get(u)
        if c is None or c.domain != A.value(u) or c.codomain != B.value(u):
            bad.append("bad component at %r" % (u,))
        elif not is_well_defined(c):
            bad.append("component at %r does not respect relations" % (u,))
    if bad:
        return bad
    for m in C.morphisms:
        left = compose(phi.component(C.src[m]), A.action(m))
        right = compose(B.action(m), phi.component(C.tgt[m]))
        if not maps_equal(left, right):
            bad.append("naturality fails on %r" % (m,))
    return bad


def compose_morphisms(outer, inner):
    """outer ∘ inner, componentwise."""
    comps = {u: compose(outer.component(u), inner.component(u))
             for u in inner.source.category.objects}
    return PrecosheafMorphism(inner.source, outer.target, comps)


def opposite_category(C):
    comp = {}
    for (g, f), h in C.comp.items():
        comp[(f, g)] = h
    return FinCategory(C.objects, C.morphisms, dict(C.tgt), dict(C.src),
                       dict(C.ident), comp)


# ---------------------------------------------------------------------------
# colimits and limits


class ColimResult:
    """Colimit presentation plus its cocone; unpacks as (module, cocone)."""

    __slots__ = ("module", "cocone", "order")

    def __init__(self, module, cocone, order):
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "cocone", cocone)
        object.__setattr__(self, "order", order)

    def __setattr__(self, *a):
        raise AttributeError("ColimResult is immutable")

    def __iter__(self):
        return iter((self.module, self.cocone))

    def induce(self, components, target):
        """The unique map out of the colimit agreeing with a compatible cocone."""
        ring = self.module.ring
        g = self.module.generators
        rows = [[ring.zero] * g for _ in range(target.generators)]
        for u in self.order:
            inj = self.cocone[u].matrix
            comp = components[u].matrix
            # columns of inj are distinct standard basis vectors
            for j in range(self.cocone[u].domain.generators):
                col = None
                for i in range(g):
                    if inj[i][j] != ring.zero:
                        col = i
                        break
                if col is None:
                    continue
                for i in range(target.generators):
                    rows[i][col] = comp[i][j]
        return ModuleMap(self.module, target, rows, check=False)


def colim(I, D):
    """Colimit of a covariant module diagram over a finite category.

    Presentation: one generator block per object, relations from each
    block's own relations plus x - D(m)(x) for every non-identity morphism.
    """
    ring = D.ring
    if ring is None:
        raise ValueError("diagram over the empty category needs an explicit ring")
    order = tuple(I.objects)
    offset = {}
    g = 0
    for u in order:
        offset[u] = g
        g += D.value(u).generators
    rows = []
    for u in order:
        for row in D.value(u).relations:
            out = [ring.zero] * g
            out[offset[u]: offset[u] + len(row)] = list(row)
            rows.append(out)
    for m in I.morphisms:
        if I.is_identity(m):
            continue
        u, v = I.src[m], I.tgt[m]
        F = D.action(m).matrix
        gu = D.value(u).generators
        gv = D.value(v).generators
        for j in range(gu):
            out = [ring.zero] * g
            out[offset[u] + j] = ring.one
            for i in range(gv):
                out[offset[v] + i] = ring.sub(out[offset[v] + i], F[i][j])
            rows.append(out)
    module = PresentedModule(ring, g, rows)
    cocone = {}
    for u in order:
        gu = D.value(u).generators
        inj = [[ring.zero] * gu for _ in range(g)]
        for j in range(gu):
            inj[offset[u] + j][j] = ring.one
        cocone[u] = ModuleMap(D.value(u), module, inj, check=False)
    return ColimResult(module, cocone, order)


class LimResult:
    """Limit presentation plus its cone; unpacks as (module, cone)."""

    __slots__ = ("module", "cone", "order", "ambient", "w_cols")

    def __init__(self, module, cone, order, ambient, w_cols):
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "cone", cone)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "w_cols", w_cols)

    def __setattr__(self, *a):
        raise AttributeError("LimResult is immutable")

    def __iter__(self):
        return iter((self.module, self.cone))

    def induce(self, components, source):
        """The unique map into the limit agreeing with a compatible cone."""
        ring = self.module.ring
        gs = source.generators
        amb = self.ambient.generators
        cols = []
        for j in range(gs):
            col = [ring.zero] * amb
            cols.append(col)
        pos = 0
        for u in self.order:
            comp = components[u].matrix
            gu = components[u].codomain.generators
            for i in range(gu):
                for j in range(gs):
                    cols[j][pos + i] = comp[i][j]
            pos += gu
        vectors = from_columns([tuple(c) for c in cols], nrows=amb)
        coords = express_in_subquotient(self.ambient, self.w_cols, (), vectors)
        if coords is None:
            raise ValueError("cone does not factor through the limit")
        return ModuleMap(source, self.module, coords, check=False)


def lim(I, D):
    """Limit of a covariant module diagram: matching families in the product."""
    ring = D.ring
    if ring is None:
        raise ValueError("diagram over the empty category needs an explicit ring")
    order = tuple(I.objects)
    offset = {}
    g = 0
    for u in order:
        offset[u] = g
        g += D.value(u).generators
    rel_rows = []
    for u in order:
        for row in D.value(u).relations:
            out = [ring.zero] * g
            out[offset[u]: offset[u] + len(row)] = list(row)
            rel_rows.append(out)
    ambient = PresentedModule(ring, g, rel_rows)
    # matching constraints: for m: u -> v, x_v - D(m) x_u ≡ 0 mod rel(value v)
    crows = []
    slack_cols = []
    for m in I.morphisms:
        if I.is_identity(m):
            continue
        u, v = I.src[m], I.tgt[m]
        F = D.action(m).matrix
        gu, gv = D.value(u).generators, D.value(v).generators
        base = len(crows)
        for i in range(gv):
            out = [ring.zero] * g
            out[offset[v] + i] = ring.one
            for j in range(gu):
                out[offset[u] + j] = ring.sub(out[offset[u] + j], F[i][j])
            crows.append(out)
        rcv = D.value(v).rel_cols()
        for t in range(len(D.value(v).relations)):
            slack_cols.append((base, [rcv[i][t] for i in range(gv)]))
    nrows = len(crows)
    if nrows == 0:
        w = tuple(tuple(ring.one if i == j else ring.zero for j in range(g))
                  for i in range(g))
    else:
        big_rows = [list(r) for r in crows]
        ncols = g + len(slack_cols)
        for r in big_rows:
            r.extend([ring.zero] * len(slack_cols))
        for sidx, (base, colvals) in enumerate(slack_cols):
            for i, val in enumerate(colvals):
                big_rows[base + i][g + sidx] = val
        ker = _kernel(ring, mat(big_rows), nrows, ncols)
        cols = [tuple(ker[i][j] for i in range(g)) for j in range(_ncols(ker))]
        w = from_columns(cols, nrows=g)
    module = subquotient(ambient, w, ())
    cone = {}
    s = module.generators
    for u in order:
        gu = D.value(u).generators
        rows = [[w[offset[u] + i][j] for j in range(s)] for i in range(gu)] \
            if s else [[] for _ in range(gu)]
        cone[u] = ModuleMap(module, D.value(u), rows, check=False)
    return LimResult(module, cone, order, ambient, w)


# ---------------------------------------------------------------------------
# sieve H_0 via comma categories


def _sieve_diagram(A, R):
    """A restricted along the projection of the comma category of R."""
    C = A.category
    CR = comma_sieve(C, R)
    values = {f: A.value(C.src[f]) for f in CR.objects}
    actions = {m: A.action(m[2]) for m in CR.morphisms}
    return CR, Precosheaf(CR, values, actions, ring=A.ring)


def h0_sieve_data(A, R):
    """(ColimResult over the comma category, comparison map to A(target))."""
    C = A.category
    CR, D = _sieve_diagram(A, R)
    res = colim(CR, D)
    target = A.value(R.target)
    components = {f: A.action(f) for f in CR.objects}
    comparison = res.induce(components, target)
    return res, comparison


def h0_sieve(A, R):
    """H_0(R, A): the colimit of A over the comma category of the sieve."""
    return h0_sieve_data(A, R)[0].module


def _sieve_op_diagram(B, R):
    C = B.category
    CR = comma_sieve(C, R)
    op = opposite_category(CR)
    values = {f: B.value(C.src[f]) for f in op.objects}
    actions = {m: B.action(m[2]) for m in op.morphisms}
    return op, Precosheaf(op, values, actions, ring=B.ring)


def h0_presheaf_data(B, R):
    """(LimResult over the opposite comma category, comparison from B(target))."""
    C = B.category
    op, D = _sieve_op_diagram(B, R)
    res = lim(op, D)
    source = B.value(R.target)
    components = {f: B.action(f) for f in op.objects}
    comparison = res.induce(components, source)
    return res, comparison


def h0_presheaf(B, R):
    """H^0(R, B): the limit of B over the comma category of the sieve."""
    return h0_presheaf_data(B, R)[0].module


# ---------------------------------------------------------------------------
# Kan extensions


def _comma_under_functor(phi, i):
    """phi ↓ i: objects (j, a: phi(j) -> i), morphisms u with a' ∘ phi(u) = a."""
    J, I = phi.source, phi.target
    objs = []
    for j in J.objects:
        for a in I.hom(phi.obj(j), i):
            objs.append((j, a))
    objs = tuple(sorted(objs, key=repr))
    morphisms = []
    src, tgt, ident, comp = {}, {}, {}, {}
    for o1 in objs:
        for o2 in objs:
            for u in J.hom(o1[0], o2[0]):
                if I.comp[(o2[1], phi.mor(u))] == o1[1]:
                    m = (o1, o2, u)
                    morphisms.append(m)
                    src[m], tgt[m] = o1, o2
    for o in objs:
        ident[o] = (o, o, J.ident[o[0]])
    for m2 in morphisms:
        for m1 in morphisms:
            if m1[1] == m2[0]:
                comp[(m2, m1)] = (m1[0], m2[1], J.comp[(m2[2], m1[2])])
    return FinCategory(objs, morphisms, src, tgt, ident, comp)


def _comma_over_functor(phi, i):
    """i ↓ phi: objects (j, a: i -> phi(j)), morphisms u with phi(u) ∘ a = a'."""
    J, I = phi.source, phi.target
    objs = []
    for j in J.objects:
        for a in I.hom(i, phi.obj(j)):
            objs.append((j, a))
    objs = tuple(sorted(objs, key=repr))
    morphisms = []
    src, tgt, ident, comp = {}, {}, {}, {}
    for o1 in objs:
        for o2 in objs:
            for u in J.hom(o1[0], o2[0]):
                if I.comp[(phi.mor(u), o1[1])] == o2[1]:
                    m = (o1, o2, u)
                    morphisms.append(m)
                    src[m], tgt[m] = o1, o2
    for o in objs:
        ident[o] = (o, o, J.ident[o[0]])
    for m2 in morphisms:
        for m1 in morphisms:
            if m1[1] == m2[0]:
                comp[(m2, m1)] = (m1[0], m2[1], J.comp[(m2[2], m1[2])])
    return FinCategory(objs, morphisms, src, tgt, ident, comp)


def left_kan(phi, A):
    """phi† A: value at i is the colimit over phi ↓ i."""
    I = phi.target
    results = {}
    for i in I.objects:
        K = _comma_under_functor(phi, i)
        D = Precosheaf(K, {o: A.value(o[0]) for o in K.objects},
                       {m: A.action(m[2]) for m in K.morphisms}, ring=A.ring)
        results[i] = colim(K, D)
    values = {i: results[i].module for i in I.objects}
    actions = {}
    for m in I.morphisms:
        i, i2 = I.src[m], I.tgt[m]
        res = results[i]
        components = {}
        for (j, a) in res.order:
            components[(j, a)] = results[i2].cocone[(j, I.comp[(m, a)])]
        actions[m] = res.induce(components, values[i2])
    return Precosheaf(I, values, actions)


def right_kan(phi, A):
    """phi‡ A: value at i is the limit over i ↓ phi."""
    I = phi.target
    results = {}
    for i in I.objects:
        K = _comma_over_functor(phi, i)
        D = Precosheaf(K, {o: A.value(o[0]) for o in K.objects},
                       {m: A.action(m[2]) for m in K.morphisms}, ring=A.ring)
        results[i] = lim(K, D)
    values = {i: results[i].module for i in I.objects}
    actions = {}
    for m in I.morphisms:
        i, i2 = I.src[m], I.tgt[m]
        res2 = results[i2]
        components = {}
        for (j, a) in res2.order:
            components[(j, a)] = results[i].cone[(j, I.comp[(a, m)])]
        actions[m] = res2.induce(components, values[i])
    return Precosheaf(I, values, actions)


def restrict(phi, A):
    """phi_* A: precompose with phi."""
    J = phi.source
    values = {j: A.value(phi.obj(j)) for j in J.objects}
    actions = {m: A.action(phi.mor(m)) for m in J.morphisms}
    return Precosheaf(J, values, actions)


# ---------------------------------------------------------------------------
# pairing and covers


def pairing_with_data(A, T):
    """(Presheaf ⟨A, T⟩, hom presentations per object)."""
    if A.ring is not None and A.ring != T.ring:
        raise RingMismatchError("%r vs %r" % (A.ring, T.ring))
    C = A.category
    hps = {u: hom_presentation(A.value(u), T) for u in C.objects}
    values = {u: hps[u].module for u in C.objects}
    actions = {}
    for m in C.morphisms:
        u, v = C.src[m], C.tgt[m]
        actions[m] = hom_induced(hps[v], hps[u], pre=A.action(m))
    return Presheaf(C, values, actions), hps


def pairing(A, T):
    """The presheaf U |-> Hom(A(U), T), acting by precomposition."""
    return pairing_with_data(A, T)[0]


def quasiprojective_cover(B):
    """(P, epi): P(U) is free on one block per morphism V -> U, per B(V)'s
    generators; the epi sends the block of m to B(m) on generators.
    """
    C = B.category
    ring = B.ring
    blocks = {u: tuple(C.into(u)) for u in C.objects}
    sizes = {m: B.value(C.src[m]).generators for m in C.morphisms}
    values = {}
    offsets = {}
    for u in C.objects:
        off = {}
        g = 0
        for m in blocks[u]:
            off[m] = g
            g += sizes[m]
        values[u] = free_module(ring, g)
        offsets[u] = off
    actions = {}
    for f in C.morphisms:
        u, v = C.src[f], C.tgt[f]
        rows = [[ring.zero] * values[u].generators
                for _ in range(values[v].generators)]
        for m in blocks[u]:
            fm = C.comp[(f, m)]
            for t in range(sizes[m]):
                rows[offsets[v][fm] + t][offsets[u][m] + t] = ring.one
        actions[f] = ModuleMap(values[u], values[v], rows, check=False)
    P = Precosheaf(C, values, actions)
    comps = {}
    for u in C.objects:
        gB = B.value(u).generators
        rows = [[ring.zero] * values[u].generators for _ in range(gB)]
        for m in blocks[u]:
            F = B.action(m).matrix
            for t in range(sizes[m]):
                for i in range(gB):
                    rows[i][offsets[u][m] + t] = F[i][t]
        comps[u] = ModuleMap(values[u], B.value(u), rows, check=False)
    return P, PrecosheafMorphism(P, B, comps)


def precosheaf_kernel(phi):
    """(K, incl): objectwise kernels with the induced functorial actions."""
    A = phi.source
    C = A.category
    kcols = {u: kernel_with_columns(phi.component(u)) for u in C.objects}
    values = {u: subquotient(A.value(u), kcols[u], ()) for u in C.objects}
    incl = {u: ModuleMap(values[u], A.value(u), kcols[u], check=False)
            for u in C.objects}
    actions = {}
    for m in C.morphisms:
        u, v = C.src[m], C.tgt[m]
        img = compose(A.action(m), incl[u])
        coords = express_in_subquotient(A.value(v), kcols[v], (), img.matrix)
        if coords is None:
            raise ValueError("kernel not preserved along %r" % (m,))
        actions[m] = ModuleMap(values[u], values[v], coords, check=False)
    K = Precosheaf(C, values, actions)
    return K, PrecosheafMorphism(K, A, incl)


def constant_precosheaf(C, M):
    values = {u: M for u in C.objects}
    actions = {m: identity_map(M) for m in C.morphisms}
    return Precosheaf(C, values, actions, ring=M.ring)


def generator_cosheaf(C, V, M):
    """The left Kan extension of M along the inclusion of the object V:
    value at U is one copy of M per morphism V -> U.
    """
    ring = M.ring
    homs = {u: tuple(C.hom(V, u)) for u in C.objects}
    values = {}
    offsets = {}
    for u in C.objects:
        off = {}
        g = 0
        for a in homs[u]:
            off[a] = g
            g += M.generators
        rel = []
        for a in homs[u]:
            for row in M.relations:
                out = [ring.zero] * g
                out[off[a]: off[a] + M.generators] = list(row)
                rel.append(out)
        values[u] = PresentedModule(ring, g, rel)
        offsets[u] = off
    actions = {}
    for f in C.morphisms:
        u, v = C.src[f], C.tgt[f]
        rows = [[ring.zero] * values[u].generators
                for _ in range(values[v].generators)]
        for a in homs[u]:
            fa = C.comp[(f, a)]
            for t in range(M.generators):
                rows[offsets[v][fa] + t][offsets[u][a] + t] = ring.one
        actions[f] = ModuleMap(values[u], values[v], rows, check=False)
    return Precosheaf(C, values, actions, ring=ring)
