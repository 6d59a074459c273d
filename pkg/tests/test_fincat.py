import itertools
import random

import pytest

from cosheaf.fincat import (
    CategoryError,
    Cover,
    FinCategory,
    FinSpace,
    MissingPullbackError,
    Sieve,
    all_sieves,
    check_category,
    check_gt,
    comma_over,
    comma_projection,
    comma_sieve,
    composable_chains,
    connected_components,
    is_poset_category,
    maximal_sieve,
    open_label,
    open_site,
    poset_category,
    pullback,
    pullback_sieve,
    sieve_closure,
    sieve_generated_by,
    topology_from_pretopology,
)

PSEUDOCIRCLE_OPENS = [
    (), ("a",), ("c",), ("a", "c"), ("a", "b", "c"), ("a", "c", "d"),
    ("a", "b", "c", "d"),
]


def pseudocircle():
    return FinSpace("abcd", [frozenset(o) for o in PSEUDOCIRCLE_OPENS])


def brute_force_sieve_closure(C, U, gens):
    """Fixpoint closure, independent of the library's one-step formula."""
    members = set(gens)
    changed = True
    while changed:
        changed = False
        for f in list(members):
            for g in C.morphisms:
                if C.tgt[g] == C.src[f]:
                    h = C.comp[(f, g)]
                    if h not in members:
                        members.add(h)
                        changed = True
    return members


def random_space(rng, max_points=4):
    pts = "wxyz"[: rng.randint(1, max_points)]
    base = [frozenset(), frozenset(pts)]
    for _ in range(rng.randint(0, 3)):
        base.append(frozenset(p for p in pts if rng.random() < 0.5))
    # close under union and intersection
    family = set(base)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(family), 2):
            for c in (a | b, a & b):
                if c not in family:
                    family.add(c)
                    changed = True
    return FinSpace(pts, family)


class TestCategory:
    def test_poset_category_valid(self):
        C = poset_category(["x", "y", "z"], lambda u, v: u <= v)
        assert check_category(C) == []
        assert is_poset_category(C)
        assert len(C.morphisms) == 6  # 3 identities + x<=y, x<=z, y<=z

    def test_broken_associativity_detected(self):
        # two objects, one non-identity loop with wrong composition
        objs = ["u"]
        mors = ["id", "f"]
        src = {"id": "u", "f": "u"}
        tgt = dict(src)
        ident = {"u": "id"}
        comp = {("id", "id"): "id", ("id", "f"): "f", ("f", "id"): "f",
                ("f", "f"): "id"}
        C = FinCategory(objs, mors, src, tgt, ident, comp)
        assert check_category(C) == []  # f∘f = id is associative (Z/2 monoid)
        comp_bad = dict(comp)
        comp_bad[("f", "f")] = "f"
        # now f∘f = f but (f∘f)∘f = f∘(f∘f) still holds; break neutrality instead
        comp_bad2 = dict(comp)
        comp_bad2[("f", "id")] = "id"
        C2 = FinCategory(objs, mors, src, tgt, ident, comp_bad2)
        assert any("neutral" in msg for msg in check_category(C2))

    def test_missing_composite_detected(self):
        objs = ["u", "v"]
        mors = ["iu", "iv", "f"]
        src = {"iu": "u", "iv": "v", "f": "u"}
        tgt = {"iu": "u", "iv": "v", "f": "v"}
        ident = {"u": "iu", "v": "iv"}
        comp = {("iu", "iu"): "iu", ("iv", "iv"): "iv", ("f", "iu"): "f"}
        C = FinCategory(objs, mors, src, tgt, ident, comp)
        assert any("missing" in m for m in check_category(C))


class TestSieves:
    def test_maximal_sieve_pseudocircle(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        R = maximal_sieve(C, X)
        assert len(R.members) == 7  # one inclusion from each open

    def test_generated_sieve_matches_brute_force(self):
        rng = random.Random(3)
        for _ in range(25):
            X = random_space(rng)
            site = open_site(X)
            C = site.category
            U = C.objects[rng.randrange(len(C.objects))]
            arrows = C.into(U)
            gens = [a for a in arrows if rng.random() < 0.5]
            got = sieve_closure(C, U, gens)
            want = brute_force_sieve_closure(C, U, gens)
            assert got.members == frozenset(want)

    def test_generated_sieve_is_smallest(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        legs = tuple((open_label(frozenset(s)), X)
                     for s in ("a", "c", "abc", "acd"))
        cov = Cover(C, X, legs)
        R = sieve_generated_by(cov)
        # the generated sieve consists of the 6 proper opens' inclusions
        assert len(R.members) == 6
        assert (X, X) not in R.members
        # smallest: every sieve containing the legs contains R
        for S in all_sieves(C, X):
            if all(l in S.members for l in legs):
                assert R.members <= S.members

    def test_pullback_sieve(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        abc = open_label(frozenset("abc"))
        legs = tuple((open_label(frozenset(s)), X) for s in ("a", "c"))
        R = sieve_closure(C, X, legs)
        f = (abc, X)
        fR = pullback_sieve(C, R, f)
        assert fR.target == abc
        srcs = {C.src[m] for m in fR.members}
        # {a,c} itself does not factor through {a} or {c}, so it is absent
        assert srcs == {open_label(frozenset()), open_label(frozenset("a")),
                        open_label(frozenset("c"))}

    def test_sieve_validation(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        abc = open_label(frozenset("abc"))
        with pytest.raises(CategoryError):
            Sieve(C, X, [(abc, X)])  # not closed: ({a}, X) missing


class TestSite:
    def test_open_site_pseudocircle_passes_gt(self):
        site = open_site(pseudocircle())
        assert check_gt(site) == []
        assert len(site.category.objects) == 7

    def test_covering_criterion(self):
        site = open_site(pseudocircle())
        X = open_label(frozenset("abcd"))
        for R in site.covering_sieves(X):
            covered = set()
            for m in R.members:
                covered.update(site.category.src[m])
            assert covered == set("abcd")

    def test_least_covering_sieve_is_generated_by_minimal_cover(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        least = site.least_covering_sieve(X)
        cov = site.covers_of(X)[-1]  # the minimal-neighborhood cover
        assert set(cov.legs) == {(open_label(frozenset(s)), X)
                                 for s in ("a", "c", "abc", "acd")}
        assert least == sieve_generated_by(cov)

    def test_random_spaces_pass_gt(self):
        rng = random.Random(7)
        for _ in range(15):
            site = open_site(random_space(rng))
            assert check_gt(site) == []

    def test_two_point_indiscrete(self):
        X = FinSpace("xy", [frozenset(), frozenset("xy")])
        site = open_site(X)
        U = open_label(frozenset("xy"))
        assert len(site.covering_sieves(U)) == 1  # only the maximal sieve

    def test_discrete_topology_from_pretopology(self):
        # discrete site on 2 objects: every sieve covers
        C = poset_category(["u", "v"], lambda a, b: a == b)
        covers = {
            "u": (Cover(C, "u", ()),),
            "v": (Cover(C, "v", ()),),
        }
        site = topology_from_pretopology(C, covers)
        for U in ("u", "v"):
            assert len(site.covering_sieves(U)) == len(all_sieves(C, U))

    def test_unstable_pretopology_rejected(self):
        # cover of the top of a V-poset by one branch is not stable along
        # the other branch: pullback of the generated sieve is empty there
        C = poset_category(["l", "r", "t"],
                           lambda a, b: a == b or b == "t")
        covers = {"t": (Cover(C, "t", (("l", "t"),)),)}
        with pytest.raises(Exception) as exc:
            topology_from_pretopology(C, covers)
        assert "GT" in str(exc.value)


class TestComma:
    def test_comma_over_has_terminal(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        CU = comma_over(C, X)
        assert check_category(CU) == []
        terminals = [o for o in CU.objects
                     if all(len(CU.hom(p, o)) == 1 for p in CU.objects)]
        assert terminals == [(X, X)]

    def test_comma_sieve_pseudocircle_counts(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        R = site.least_covering_sieve(X)
        CR = comma_sieve(C, R)
        assert check_category(CR) == []
        assert len(CR.objects) == 6
        assert len(CR.morphisms) == 19
        proj = comma_projection(CR, C)
        assert proj.check() == []

    def test_comma_sieve_of_maximal_is_comma_over(self):
        site = open_site(pseudocircle())
        C = site.category
        U = open_label(frozenset("abc"))
        CU = comma_over(C, U)
        CR = comma_sieve(C, maximal_sieve(C, U))
        assert set(CU.objects) == set(CR.objects)
        assert set(CU.morphisms) == set(CR.morphisms)

    def test_chain_counts_pseudocircle(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        R = site.least_covering_sieve(X)
        CR = comma_sieve(C, R)
        counts = [sum(1 for _ in composable_chains(CR, n, skip_identities=True))
                  for n in range(4)]
        # identity-free composable chains: objects are counted at n = 0 lower down
        assert counts[0] == 1  # the empty chain marker
        assert counts[1] == 13
        assert counts[2] == 12
        assert counts[3] == 4


class TestPullback:
    def test_poset_meet(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        f = (open_label(frozenset("abc")), X)
        g = (open_label(frozenset("acd")), X)
        P, p1, p2 = pullback(C, f, g)
        assert P == open_label(frozenset("ac"))

    def test_pullback_along_identity(self):
        site = open_site(pseudocircle())
        C = site.category
        X = open_label(frozenset("abcd"))
        f = (open_label(frozenset("abc")), X)
        P, p1, p2 = pullback(C, f, C.ident[X])
        assert P == open_label(frozenset("abc"))

    def test_disjoint_opens(self):
        X = FinSpace("xy", [frozenset(), frozenset("x"), frozenset("y"),
                            frozenset("xy")])
        site = open_site(X)
        C = site.category
        top = open_label(frozenset("xy"))
        f = (open_label(frozenset("x")), top)
        g = (open_label(frozenset("y")), top)
        P, _, _ = pullback(C, f, g)
        assert P == ()

    def test_missing_witness_raises(self):
        # non-thin category: two parallel arrows, no witnesses supplied
        objs = ["a", "b"]
        mors = ["ia", "ib", "f", "g"]
        src = {"ia": "a", "ib": "b", "f": "a", "g": "a"}
        tgt = {"ia": "a", "ib": "b", "f": "b", "g": "b"}
        ident = {"a": "ia", "b": "ib"}
        comp = {}
        for m in mors:
            comp[(m, ident[src[m]])] = m
            comp[(ident[tgt[m]], m)] = m
        C = FinCategory(objs, mors, src, tgt, ident, comp)
        assert check_category(C) == []
        with pytest.raises(MissingPullbackError):
            pullback(C, "f", "g")


class TestSpace:
    def test_pseudocircle_components(self):
        X = pseudocircle()
        assert len(connected_components(X, frozenset("ac"))) == 2
        assert len(connected_components(X, frozenset("abcd"))) == 1
        assert len(connected_components(X, frozenset())) == 0
        assert len(connected_components(X, frozenset("abc"))) == 1

    def test_components_against_open_cover_reachability(self):
        # oracle: two points are connected iff linked by a chain of opens
        # (within U) with pairwise nonempty intersections
        rng = random.Random(11)
        for _ in range(20):
            X = random_space(rng)
            for U in X.opens:
                comps = connected_components(X, U)
                # brute force: component of x = closure under "shares an open
                # subset of U" among minimal opens
                pts = sorted(U)
                reach = {x: {x} for x in pts}
                changed = True
                while changed:
                    changed = False
                    for x in pts:
                        for y in pts:
                            if y in reach[x]:
                                continue
                            mx = X.minimal_open(x, within=U)
                            my = X.minimal_open(y, within=U)
                            if mx & my:
                                reach[x].add(y)
                                changed = True
                            else:
                                for z in reach[x].copy():
                                    if y in reach[z]:
                                        reach[x].add(y)
                                        changed = True
                for x in pts:
                    changed = True
                    while changed:
                        changed = False
                        for y in reach[x].copy():
                            if not reach[y] <= reach[x]:
                                reach[x] |= reach[y]
                                changed = True
                want = {frozenset(reach[x]) for x in pts}
                assert set(comps) == want

    def test_bad_space_rejected(self):
        with pytest.raises(CategoryError):
            FinSpace("xy", [frozenset(), frozenset("x"), frozenset("xy"),
                            frozenset("y"), frozenset("z")])
        with pytest.raises(CategoryError):
            FinSpace("xyz", [frozenset(), frozenset("xy"), frozenset("yz"),
                             frozenset("xyz")])  # missing intersection {y}
