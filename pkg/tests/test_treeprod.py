import itertools
import random

import pytest

from coxkit.treeprod import (Edge, SubgroupAsGroup, TreeError, TreeOfGroups,
                             TreeProduct, check_subtree_conditions, contract,
                             fold)


@pytest.fixture(scope="module")
def z2_free(cache):
    A = cache.group("s", cache.ctx.gallery("s"))
    B = cache.group("t", cache.ctx.gallery("t"))
    triv = SubgroupAsGroup(A, {0}, "1")
    tog = TreeOfGroups({"a": A, "b": B},
                       [Edge("a", "b", triv, {0: 0}, {0: 0})])
    return tog, TreeProduct(tog)


@pytest.fixture(scope="module")
def theorem_tree(cache):
    ctx = cache.ctx
    U_sr, U_trt = cache.group("sr"), cache.group("trt")
    amb = cache.group("stst")
    V = SubgroupAsGroup(amb, cache.v_subgroup("", "st").elements, "V")
    us, ut = amb.root_mask(amb.roots[0]), amb.root_mask(amb.roots[3])
    e1 = Edge("0", "1", cache.group("s"),
              {0: 0, 1: U_sr.root_mask(U_sr.roots[0])}, {0: 0, 1: us})
    e2 = Edge("1", "2", cache.group("t"),
              {0: 0, 1: ut}, {0: 0, 1: U_trt.root_mask(U_trt.roots[0])})
    tog = TreeOfGroups({"0": U_sr, "1": V, "2": U_trt}, [e1, e2])
    return tog, TreeProduct(tog)


def test_free_product_word(z2_free):
    tog, P = z2_free
    el = P.eval_word([("a", 1), ("b", 1), ("a", 1)])
    assert P.syllables(el) == 3
    assert not P.is_identity(el)


def test_validate_rejects_kernel(cache):
    A = cache.group("st")
    B = cache.group("sr")
    E = cache.group("s")
    # into_u collapses both edge elements onto the identity
    bad = Edge("a", "b", E, {0: 0, 1: 0}, {0: 0, 1: B.root_mask(B.roots[0])})
    tog = TreeOfGroups({"a": A, "b": B}, [bad])
    assert any("injective" in issue for issue in tog.validate())


def test_validate_rejects_cycles(cache):
    A, B = cache.group("s", cache.ctx.gallery("s")), cache.group("t")
    triv = SubgroupAsGroup(A, {0}, "1")
    tog = TreeOfGroups({"a": A, "b": B},
                       [Edge("a", "b", triv, {0: 0}, {0: 0}),
                        Edge("b", "a", triv, {0: 0}, {0: 0})])
    assert tog.validate()


def test_collapsing_word(theorem_tree, cache):
    tog, H = theorem_tree
    U_sr = tog.vertices["0"]
    amb = cache.group("stst")
    u_sr = U_sr.root_mask(U_sr.roots[1])
    us = amb.root_mask(amb.roots[0])
    el = H.eval_word([("0", u_sr), ("1", us), ("0", u_sr)])
    assert H.key(el) == H.key(H.include("1", us))
    assert H.syllables(el) == 1


def test_batteries(theorem_tree):
    tog, H = theorem_tree
    rng = random.Random(0)
    for _ in range(10000):
        word = H.random_word(rng, rng.randint(1, 6))
        if not word:
            continue
        el = H.eval_word(word)
        assert not H.is_identity(el)
        assert H.is_identity(H.mul(el, H.inv(el)))
    for _ in range(10000):
        a = H.eval_word(H.random_word(rng, rng.randint(1, 4)))
        b = H.eval_word(H.random_word(rng, rng.randint(1, 4)))
        # normal forms respect multiplication: recombining the normal
        # forms gives the same element as multiplying directly
        assert H.key(H.mul(a, b)) == H.key(H.mul(H.mul(a, H.identity), b))


def _count_ball(product, tog, bound, vertex_names, translate=None):
    seen = set()
    for length in range(bound + 1):
        for vs in itertools.product(vertex_names, repeat=length):
            if any(vs[i] == vs[i + 1] for i in range(len(vs) - 1)):
                continue
            pools = [sorted(x for x in tog.vertices[v].elements())
                     for v in vs]
            for letters in itertools.product(*pools):
                word = list(zip(vs, letters))
                if translate:
                    word = translate(word)
                seen.add(product.key(product.eval_word(word)))
    return len(seen)


def test_contract_preserves_counts(z2_free):
    tog, P = z2_free
    tog2, name, sub = contract(tog, {"b"})
    P2 = TreeProduct(tog2)
    bound = 4
    n1 = _count_ball(P, tog, bound, ("a", "b"))

    def translate(word):
        return [(name, sub.include(v, x)) if v == "b" else (v, x)
                for v, x in word]
    n2 = _count_ball(P2, tog, bound, ("a", "b"), translate)
    assert n1 == n2


def test_contract_single_vertex_is_identity_move(theorem_tree):
    tog, H = theorem_tree
    tog2, name, sub = contract(tog, {"2"})
    P2 = TreeProduct(tog2)
    rng = random.Random(4)
    for _ in range(500):
        word = H.random_word(rng, rng.randint(1, 5))
        el = H.eval_word(word)
        w2 = [(name, sub.include(v, x)) if v == "2" else (v, x)
              for v, x in word]
        el2 = P2.eval_word(w2)
        assert P2.is_identity(el2) == H.is_identity(el)


def test_contract_and_fold_round_trip(theorem_tree, cache):
    tog, H = theorem_tree
    groups = {id(g): v for v, g in tog.vertices.items()}
    # contract the second edge
    tog2, name, sub = contract(tog, {"1", "2"})
    P2 = TreeProduct(tog2)
    rng = random.Random(11)
    for _ in range(2000):
        word = H.random_word(rng, rng.randint(1, 5))
        el = H.eval_word(word)
        w2 = [(name, sub.include(v, x)) if v in ("1", "2") else (v, x)
              for v, x in word]
        el2 = P2.eval_word(w2)
        back = [(groups[id(g)], x) for g, x in P2.flatten(el2, deep=True)]
        assert H.key(H.eval_word(back)) == H.key(el)
    # fold the first edge at its own edge-group image (redundant vertex)
    U_sr = tog.vertices["0"]
    Hsub = SubgroupAsGroup(U_sr, {0, U_sr.root_mask(U_sr.roots[0])}, "U_s")
    tog3 = fold(tog, "0", "1", Hsub, "x")
    assert not tog3.validate()
    P3 = TreeProduct(tog3)
    groups3 = dict(groups)
    groups3[id(Hsub)] = "0"
    for _ in range(2000):
        word = H.random_word(rng, rng.randint(1, 5))
        el = H.eval_word(word)
        el3 = P3.eval_word(word)
        back = [(groups3[id(g)], x) for g, x in P3.flatten(el3, deep=True)]
        assert H.key(H.eval_word(back)) == H.key(el)


def test_fold_counts_match(z2_free, cache):
    tog, P = z2_free
    A = tog.vertices["a"]
    Hsub = SubgroupAsGroup(A, {0, 1}, "all-of-A")
    tog2 = fold(tog, "a", "b", Hsub, "x")
    P2 = TreeProduct(tog2)
    bound = 4
    n1 = _count_ball(P, tog, bound, ("a", "b"))
    n2 = _count_ball(P2, tog, bound, ("a", "b"), None)
    assert n1 == n2


def test_fold_requires_intermediate(theorem_tree, cache):
    tog, _ = theorem_tree
    U_sr = tog.vertices["0"]
    bad = SubgroupAsGroup(U_sr, {0}, "1")
    with pytest.raises(TreeError):
        fold(tog, "0", "1", bad, "x")


def test_fold_with_full_vertex(theorem_tree):
    tog, H = theorem_tree
    U_sr = tog.vertices["0"]
    full = SubgroupAsGroup(U_sr, set(U_sr.elements()), "U_sr")
    tog2 = fold(tog, "0", "1", full, "x")
    assert not tog2.validate()


def test_check_subtree_conditions(theorem_tree, cache):
    tog, _ = theorem_tree
    amb = cache.group("stst")
    us, ut = amb.root_mask(amb.roots[0]), amb.root_mask(amb.roots[3])
    ok = check_subtree_conditions(
        tog, {"0", "1", "2"},
        {"0": frozenset(cache.group("sr").elements()),
         "1": frozenset(cache.v_subgroup("", "st").elements),
         "2": frozenset(cache.group("trt").elements())})
    assert ok["pass"]
    # deliberately enlarged edge subgroup fails condition (iii)
    bad = check_subtree_conditions(
        tog, {"0", "1", "2"},
        {"0": frozenset({0}), "1": frozenset({0, us}), "2": frozenset({0})},
        edge_groups={frozenset(("0", "1")): frozenset({0, 1})})
    assert not bad["pass"]


def test_subproduct_extraction(theorem_tree, cache):
    tog, _ = theorem_tree
    H2 = TreeProduct(tog, inner={"1", "2"})
    amb = cache.group("stst")
    us, ut = amb.root_mask(amb.roots[0]), amb.root_mask(amb.roots[3])
    U_trt = tog.vertices["2"]
    el = H2.eval_word([("1", us), ("2", U_trt.root_mask(U_trt.roots[1]))])
    assert H2.subproduct_value(el, {"1", "2"}) is not None
    u_sr = tog.vertices["0"].root_mask(tog.vertices["0"].roots[1])
    assert H2.subproduct_value(H2.include("0", u_sr), {"1", "2"}) is None
    # edge elements extract to both sides
    assert H2.subproduct_value(H2.include("1", ut), {"1", "2"}) is not None
    with pytest.raises(TreeError):
        H2.subproduct_value(el, {"0", "2"})


def test_elements_not_enumerable(theorem_tree):
    _, H = theorem_tree
    with pytest.raises(TreeError):
        H.elements()


def test_ball_intersection_vertex_cases(theorem_tree, cache):
    from coxkit.treeprod import ball_intersection
    tog, H = theorem_tree
    # U_sr cap V = U_s inside U_sr * V * U_trt
    got = ball_intersection(tog, {"0"}, {"1"}, 4)
    assert got["mode"] == "exhaustive"
    amb = cache.group("stst")
    us = amb.root_mask(amb.roots[0])
    P = got["product"]
    expect = {P.key(P.include("1", x)) for x in (0, us)}
    assert set(got["elements"]) == expect
    # A cap A = A
    got = ball_intersection(tog, {"0"}, {"0"}, 2)
    assert len(got["elements"]) == 4


def test_ball_intersection_full_edge(cache):
    from coxkit.treeprod import ball_intersection
    # a segment whose edge group is everything: the two sides coincide
    A = cache.group("s", cache.ctx.gallery("s"))
    B = cache.group("t", cache.ctx.gallery("t"))
    full = SubgroupAsGroup(A, {0, 1}, "C")
    tog = TreeOfGroups({"a": A, "b": B},
                       [Edge("a", "b", full, {0: 0, 1: 1}, {0: 0, 1: 1})])
    got = ball_intersection(tog, {"a"}, {"b"}, 3)
    assert len(got["elements"]) == 2


def test_ball_intersection_sampling_cap(theorem_tree):
    from coxkit.treeprod import ball_intersection
    tog, _ = theorem_tree
    got = ball_intersection(tog, {"0", "1", "2"}, {"1"}, 4, cap=50)
    assert got["mode"] == "sampled"
