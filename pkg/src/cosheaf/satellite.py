"""Resolutions by levelwise-free precosheaves and left satellites.

`resolve` builds an objectwise-free resolution of a precosheaf by
repeatedly covering kernels; `left_satellite` applies an additive functor
handle to the resolution and takes homology, so that ``L_n H0(R, -)``
recovers sieve homology and ``L_0 F`` recovers ``F`` itself whenever ``F``
is right exact.  `cosheaf_h_low` packages the exact low-degree relations
between a cosheaf's homology and its Čech homology.
"""

from .fincat import comma_sieve
from .kmod import (
    canonicalize,
    compose,
    is_isomorphic,
    is_zero_map,
    map_add,
    maps_equal,
    zero_map,
    zero_module,
)
from .diagram import (
    PrecosheafMorphism,
    check_morphism,
    compose_morphisms,
    h0_sieve,
    h0_sieve_data,
    precosheaf_kernel,
    quasiprojective_cover,
)
from .cech import ChainComplex, cech_H_n, is_cosheaf, is_flask

__all__ = [
    "Resolution",
    "FunctorHandle",
    "resolve",
    "check_resolution",
    "left_satellite",
    "satellite_table",
    "evaluation_functor",
    "h0_functor",
    "LowDegreeHomology",
    "cosheaf_h_low",
]


class Resolution:
    """A finite complex of levelwise-free precosheaves over a target.

    `levels` maps degrees 0..depth to precosheaves, `boundaries` maps
    degrees 1..depth to the connecting morphisms, and `augmentation` sends
    the degree-0 level onto the target.  The augmented complex is
    objectwise exact in degrees below `depth`.
    """

    __slots__ = ("target", "levels", "boundaries", "augmentation", "depth")

    def __init__(self, target, levels, boundaries, augmentation, depth):
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "levels", dict(levels))
        object.__setattr__(self, "boundaries", dict(boundaries))
        object.__setattr__(self, "augmentation", augmentation)
        object.__setattr__(self, "depth", int(depth))

    def __setattr__(self, *a):
        raise AttributeError("Resolution is immutable")

    def __repr__(self):
        return "Resolution(depth=%d over %r)" % (self.depth, self.target)

    def level(self, n):
        return self.levels[n]

    def boundary(self, n):
        return self.boundaries[n]

    def complex_at(self, u):
        """The resolution evaluated at one object, as a chain complex."""
        ring = self.target.ring
        modules = {n: P.value(u) for n, P in self.levels.items()}
        maps = {n: d.component(u) for n, d in self.boundaries.items()}
        return ChainComplex(ring, modules, maps)

    def augmented_complex_at(self, u):
        """As `complex_at`, shifted up one degree with the target at 0."""
        ring = self.target.ring
        modules = {0: self.target.value(u)}
        maps = {1: self.augmentation.component(u)}
        for n, P in self.levels.items():
            modules[n + 1] = P.value(u)
        for n, d in self.boundaries.items():
            maps[n + 1] = d.component(u)
        return ChainComplex(ring, modules, maps)


def resolve(A, depth=3):
    """An objectwise-free resolution of A, exact in degrees < depth.

    Level 0 covers A; each later level covers the kernel of the map
    before it, so images and kernels agree everywhere they must.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    P0, augmentation = quasiprojective_cover(A)
    levels = {0: P0}
    boundaries = {}
    onto = augmentation
    for n in range(1, depth + 1):
        K, incl = precosheaf_kernel(onto)
        Pn, onto = quasiprojective_cover(K)
        levels[n] = Pn
        boundaries[n] = compose_morphisms(incl, onto)
    return Resolution(A, levels, boundaries, augmentation, depth)


def check_resolution(res):
    """All violated invariants, as strings; empty when valid."""
    bad = []
    C = res.target.category
    for n in range(res.depth + 1):
        P = res.levels.get(n)
        if P is None:
            bad.append("missing level %d" % n)
            continue
        for u in C.objects:
            if P.value(u).relations != ():
                bad.append("level %d not free at %r" % (n, u))
    if bad:
        return bad
    bad.extend(check_morphism(res.augmentation))
    for n in range(1, res.depth + 1):
        bad.extend(check_morphism(res.boundaries[n]))
    if bad:
        return bad
    zero = zero_module(res.target.ring)
    for u in C.objects:
        cx = res.augmented_complex_at(u)
        for k in range(res.depth + 1):
            if not is_isomorphic(cx.homology(k), zero):
                bad.append("augmented complex not exact at %r in degree %d"
                           % (u, k - 1))
    return bad


class FunctorHandle:
    """An additive functor given by evaluators on objects and morphisms."""

    __slots__ = ("name", "on_value", "on_morphism")

    def __init__(self, name, on_value, on_morphism):
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "on_value", on_value)
        object.__setattr__(self, "on_morphism", on_morphism)

    def __setattr__(self, *a):
        raise AttributeError("FunctorHandle is immutable")

    def __repr__(self):
        return "FunctorHandle(%s)" % self.name

    def __call__(self, A):
        return self.on_value(A)

    def map(self, phi):
        return self.on_morphism(phi)


def evaluation_functor(U):
    """Evaluation at one object; exact, so higher satellites vanish."""
    return FunctorHandle("ev@%r" % (U,),
                         lambda A: A.value(U),
                         lambda phi: phi.component(U))


def h0_functor(R):
    """H_0(R, -): the colimit over the comma category of the sieve."""
    def on_morphism(phi):
        C = phi.source.category
        src = h0_sieve_data(phi.source, R)[0]
        dst = h0_sieve_data(phi.target, R)[0]
        comps = {f: compose(dst.cocone[f], phi.component(C.src[f]))
                 for f in comma_sieve(C, R).objects}
        return src.induce(comps, dst.module)
    return FunctorHandle("H0@%r" % (R,),
                         lambda A: h0_sieve(A, R),
                         on_morphism)


def _zero_morphism(phi):
    comps = {u: zero_map(phi.source.value(u), phi.target.value(u))
             for u in phi.source.category.objects}
    return PrecosheafMorphism(phi.source, phi.target, comps)


def _double_morphism(phi):
    comps = {u: map_add(phi.component(u), phi.component(u))
             for u in phi.source.category.objects}
    return PrecosheafMorphism(phi.source, phi.target, comps)


def _spot_check_additive(F, res):
    phi = res.boundaries.get(1, res.augmentation)
    doubled = F.map(_double_morphism(phi))
    single = F.map(phi)
    if not maps_equal(doubled, map_add(single, single)):
        raise ValueError("functor handle %s fails additivity: F(f+f) != F(f)+F(f)"
                         % F.name)
    if not is_zero_map(F.map(_zero_morphism(phi))):
        raise ValueError("functor handle %s does not send zero to zero" % F.name)


def left_satellite(F, A, n, depth=None, resolution=None):
    """L_n F (A): homology of F applied to a resolution of A.

    A prebuilt `resolution` may be supplied; the answer does not depend on
    which valid resolution is used.
    """
    if n < 0:
        raise ValueError("satellite degree must be nonnegative")
    if resolution is None:
        resolution = resolve(A, max(n + 1, 3 if depth is None else depth))
    if resolution.depth < n + 1:
        raise ValueError("resolution of depth %d cannot see degree %d"
                         % (resolution.depth, n))
    _spot_check_additive(F, resolution)
    modules = {k: F.on_value(resolution.levels[k])
               for k in range(resolution.depth + 1)}
    maps = {k: F.map(resolution.boundaries[k])
            for k in range(1, resolution.depth + 1)}
    ring = modules[0].ring
    return ChainComplex(ring, modules, maps).homology(n)


def satellite_table(F, A, n_max, depth=None):
    """Canonical forms of L_0 F(A) .. L_{n_max} F(A), one resolution."""
    resolution = resolve(A, max(n_max + 1, 3 if depth is None else depth))
    return tuple(canonicalize(left_satellite(F, A, n, resolution=resolution))
                 for n in range(n_max + 1))


class LowDegreeHomology:
    """Čech values with the labels the low-degree relations justify.

    Degrees 0 and 1 are the cosheaf homology on the nose; degree 2 is in
    general only a quotient of it.  When the cosheaf is flask up to the
    reported degree, every listed value is the homology exactly and
    `flask` carries the certificate.
    """

    __slots__ = ("values", "labels", "flask")

    def __init__(self, values, labels, flask):
        object.__setattr__(self, "values", tuple(values))
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "flask", bool(flask))

    def __setattr__(self, *a):
        raise AttributeError("LowDegreeHomology is immutable")

    def __repr__(self):
        inside = ", ".join("%s=%s" % (lbl, canonicalize(v).describe())
                           for lbl, v in zip(self.labels, self.values))
        return "LowDegreeHomology(%s)" % inside

    @property
    def h0(self):
        return self.values[0]

    @property
    def h1(self):
        return self.values[1]

    @property
    def h2_bound(self):
        return self.values[2]


def cosheaf_h_low(site, U, A):
    """(H_0, H_1, quotient of H_2) of a cosheaf, via Čech homology."""
    ok, witness = is_cosheaf(site, A)
    if not ok:
        raise ValueError("not a cosheaf: comparison fails on the covering "
                         "sieve %r" % (witness,))
    values = [cech_H_n(site, U, A, k) for k in range(3)]
    flask = is_flask(site, A, 2)[0]
    labels = (("H_0", "H_1", "H_2") if flask
              else ("H_0", "H_1", "quotient of H_2"))
    return LowDegreeHomology(values, labels, flask)
