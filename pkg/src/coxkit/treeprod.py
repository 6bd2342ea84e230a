"""Trees of finite groups and the word problem in their tree products.

Vertex groups are "computable groups": objects with identity, mul, inv,
key (a deterministic string token) and, when finite, elements().  Edge
groups must be finite.  A tree product is realized by contracting edges
one at a time, each contraction an amalgamated product whose elements are
canonical normal forms c * t1 * ... * tn with alternating transversal
letters; uniqueness is the classical normal form theorem, and it needs
nothing beyond a canonical coset representative per edge-group coset,
chosen here as the key-least element (preferring a designated priority
subgroup when one is installed, which is what makes membership in a
compatible subgroup family readable off the letters).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

__all__ = [
    "SubgroupAsGroup", "Edge", "TreeOfGroups", "Amalgam", "TreeProduct",
    "contract", "fold", "check_subtree_conditions", "ball_intersection",
    "TreeError",
]


class TreeError(ValueError):
    pass


class SubgroupAsGroup:
    """A finite subgroup handle promoted to a standalone computable group."""

    def __init__(self, parent, elems, name: str = ""):
        self.parent = parent
        self._elems = tuple(sorted(elems, key=parent.key))
        self._set = frozenset(self._elems)
        self.name = name
        self.identity = parent.identity
        assert self.identity in self._set
        for x in self._elems:
            assert parent.inv(x) in self._set
            for y in self._elems:
                assert parent.mul(x, y) in self._set, "not closed"

    @property
    def order(self) -> int:
        return len(self._elems)

    def elements(self):
        return self._elems

    def mul(self, x, y):
        return self.parent.mul(x, y)

    def inv(self, x):
        return self.parent.inv(x)

    def key(self, x) -> str:
        return self.parent.key(x) if isinstance(self.parent.key(x), str) \
            else repr(self.parent.key(x))

    def __contains__(self, x) -> bool:
        return x in self._set

    def __repr__(self) -> str:
        return self.name or f"SubgroupAsGroup(order {self.order})"


def _key_of(group, x) -> str:
    k = group.key(x)
    return k if isinstance(k, str) else repr(k)


@dataclass
class Edge:
    u: str
    v: str
    group: object              # finite computable group
    into_u: dict               # edge elem -> G_u elem
    into_v: dict               # edge elem -> G_v elem

    def endpoint_map(self, vertex: str) -> dict:
        if vertex == self.u:
            return self.into_u
        if vertex == self.v:
            return self.into_v
        raise KeyError(vertex)

    def other(self, vertex: str) -> str:
        return self.v if vertex == self.u else self.u


class TreeOfGroups:
    def __init__(self, vertices: dict, edges: list):
        self.vertices = dict(vertices)
        self.edges = list(edges)

    def neighbors(self, v: str):
        return [e.other(v) for e in self.edges if v in (e.u, e.v)]

    def edge_between(self, a: str, b: str) -> Edge:
        for e in self.edges:
            if {e.u, e.v} == {a, b}:
                return e
        raise KeyError((a, b))

    def validate(self) -> list:
        """Tree-ness, distinct vertex groups, boundary maps injective homs."""
        issues = []
        names = list(self.vertices)
        if len({id(g) for g in self.vertices.values()}) != len(names):
            issues.append("vertex groups must be distinct objects")
        if len(self.edges) != len(names) - 1:
            issues.append("edge count is not |V| - 1")
        reach = {names[0]}
        frontier = [names[0]]
        while frontier:
            v = frontier.pop()
            for w in self.neighbors(v):
                if w not in reach:
                    reach.add(w)
                    frontier.append(w)
        if reach != set(names):
            issues.append("underlying graph is not connected")
        for e in self.edges:
            if e.u == e.v:
                issues.append(f"self loop at {e.u}")
            for vertex, mapping in ((e.u, e.into_u), (e.v, e.into_v)):
                G = self.vertices[vertex]
                elems = list(e.group.elements())
                if set(mapping) != set(elems):
                    issues.append(f"boundary map {e.u}-{e.v} into {vertex}: "
                                  "domain mismatch")
                    continue
                if len({_key_of(G, mapping[c]) for c in elems}) != len(elems):
                    issues.append(f"boundary map into {vertex} not injective")
                for c in elems:
                    for d in elems:
                        lhs = mapping[e.group.mul(c, d)]
                        rhs = G.mul(mapping[c], mapping[d])
                        if _key_of(G, lhs) != _key_of(G, rhs):
                            issues.append(
                                f"boundary map into {vertex} not a homomorphism")
                            break
                    else:
                        continue
                    break
        return issues


class Amalgam:
    """A *_C B with canonical normal forms ('nf', carry, letters).

    carry is an edge-group element; letters are (side, tau) with side 0
    for A and 1 for B, tau a canonical nontrivial coset representative,
    sides alternating.
    """

    def __init__(self, A, B, C, c_into_a: dict, c_into_b: dict,
                 priority=(None, None)):
        self.sides = (A, B)
        self.C = C
        self.embed_maps = (c_into_a, c_into_b)
        self.priority = priority   # per side: None or rank callable -> tuple
        self._unembed = (
            {_key_of(A, v): c for c, v in c_into_a.items()},
            {_key_of(B, v): c for c, v in c_into_b.items()},
        )
        self._decomp_cache: dict = {}
        self.identity = ("nf", C.identity, ())

    def embed(self, c, side: int):
        return self.embed_maps[side][c]

    def _decompose(self, side: int, x):
        """x = embed(c) * tau with tau the canonical rep of the coset Cx."""
        G = self.sides[side]
        cache_key = (side, _key_of(G, x))
        got = self._decomp_cache.get(cache_key)
        if got is None:
            rank_fn = self.priority[side]
            best = None
            for c in self.C.elements():
                tau = G.mul(self.embed(c, side), x)
                rank = ((rank_fn(tau) if rank_fn is not None else ()),
                        _key_of(G, tau))
                if best is None or rank < best[0]:
                    best = (rank, c, tau)
            _, c, tau = best
            got = (self.C.inv(c), tau)
            self._decomp_cache[cache_key] = got
        return got

    def nf(self, letters) -> tuple:
        """Normal form of a word of (side, element) letters."""
        merged = []
        for side, x in letters:
            if merged and merged[-1][0] == side:
                x = self.sides[side].mul(merged.pop()[1], x)
            merged.append((side, x))
        stack = []  # letters right of the cursor, rightmost first
        carry = self.C.identity
        for side, x in reversed(merged):
            G = self.sides[side]
            x = G.mul(x, self.embed(carry, side))
            carry = self.C.identity
            while True:
                if stack and stack[-1][0] == side:
                    x = G.mul(x, stack.pop()[1])
                key = _key_of(G, x)
                if key == _key_of(G, G.identity):
                    break
                un = self._unembed[side].get(key)
                if un is not None:
                    carry = un
                    break
                c, tau = self._decompose(side, x)
                stack.append((side, tau))
                carry = c
                break
        return ("nf", carry, tuple(reversed(stack)))

    # -- computable group interface ---------------------------------------

    def letters_of(self, el) -> list:
        tag, carry, letters = el
        out = [(0, self.embed(carry, 0))]
        out.extend(letters)
        return out

    def mul(self, x, y):
        return self.nf(self.letters_of(x) + self.letters_of(y))

    def inv(self, x):
        out = []
        for side, v in reversed(self.letters_of(x)):
            out.append((side, self.sides[side].inv(v)))
        return self.nf(out)

    def key(self, x) -> str:
        tag, carry, letters = x
        parts = [_key_of(self.C, carry)]
        parts.extend(f"{side}:{_key_of(self.sides[side], v)}"
                     for side, v in letters)
        return "nf[" + "|".join(parts) + "]"

    def include(self, side: int, x):
        return self.nf([(side, x)])

    def side_value(self, el, side: int):
        """The side-group element el represents, or None."""
        tag, carry, letters = el
        if not letters:
            return self.embed(carry, side)
        if len(letters) == 1 and letters[0][0] == side:
            G = self.sides[side]
            return G.mul(self.embed(carry, side), letters[0][1])
        return None

    def __repr__(self) -> str:
        return f"Amalgam({self.sides[0]!r} * {self.sides[1]!r})"


class TreeProduct:
    """Tree product realized by contracting edges in a deterministic order.

    inner, when given, names a connected vertex set contracted first, so
    that subproduct_value can extract elements supported on it.  priority
    maps vertices to a tuple of membership predicates (most specific
    first, same length everywhere); coset representatives then prefer
    elements satisfying the earlier predicates, which is what makes
    membership in each predicate family readable off normal-form letters
    once the family passes the subtree conditions.
    """

    def __init__(self, tog: TreeOfGroups, priority: dict | None = None,
                 inner=None, name: str = ""):
        issues = tog.validate()
        if issues:
            raise TreeError("; ".join(issues))
        self.tog = tog
        self.name = name
        self.priority = {}
        if priority:
            for v, preds in priority.items():
                self.priority[v] = tuple(preds) if isinstance(preds, (tuple, list)) \
                    else (preds,)
            lengths = {len(p) for p in self.priority.values()}
            if len(lengths) > 1 or set(self.priority) != set(tog.vertices):
                raise TreeError("priority must cover all vertices with "
                                "equally many levels")
        self._vertex_images: dict = {}
        plan = self._plan(tog, frozenset(inner or ()))
        self._build(plan)

    @staticmethod
    def _plan(tog: TreeOfGroups, inner: frozenset) -> list:
        ranked = sorted(tog.edges,
                        key=lambda e: (not ({e.u, e.v} <= inner),
                                       min(e.u, e.v), max(e.u, e.v)))
        return ranked

    def _build(self, plan) -> None:
        tog = self.tog
        cluster_of = {v: frozenset([v]) for v in tog.vertices}
        group_of = {frozenset([v]): g for v, g in tog.vertices.items()}
        self.clusters = group_of   # shared, so rank closures see new clusters
        emb = {v: (lambda x: x) for v in tog.vertices}
        for e in plan:
            ca, cb = cluster_of[e.u], cluster_of[e.v]
            A, B = group_of[ca], group_of[cb]
            emb_u, emb_v = emb[e.u], emb[e.v]
            into_a = {c: emb_u(x) for c, x in e.into_u.items()}
            into_b = {c: emb_v(x) for c, x in e.into_v.items()}
            pred_a = self._family_pred(ca, emb)
            pred_b = self._family_pred(cb, emb)
            am = Amalgam(A, B, e.group, into_a, into_b, (pred_a, pred_b))
            cu = ca | cb
            group_of[cu] = am
            for v in ca:
                old = emb[v]
                emb[v] = (lambda x, f=old, a=am: a.include(0, f(x)))
                cluster_of[v] = cu
            for v in cb:
                old = emb[v]
                emb[v] = (lambda x, f=old, a=am: a.include(1, f(x)))
                cluster_of[v] = cu
        (top,) = {cluster_of[v] for v in tog.vertices}
        self.group = group_of[top]
        self._emb = emb
        self.identity = self.group.identity

    def _family_pred(self, cluster: frozenset, emb):
        if not self.priority:
            return None
        levels = len(next(iter(self.priority.values())))

        def rank(el, cluster=cluster):
            return tuple(
                0 if self._in_family_cluster(self.clusters[cluster], el, lvl)
                else 1
                for lvl in range(levels))
        return rank

    # -- elements ------------------------------------------------------------

    def include(self, vertex: str, x):
        return self._emb[vertex](x)

    def eval_word(self, word):
        acc = self.identity
        for vertex, x in word:
            acc = self.mul(acc, self.include(vertex, x))
        return acc

    def mul(self, x, y):
        return self.group.mul(x, y)

    def inv(self, x):
        return self.group.inv(x)

    def key(self, x) -> str:
        return _key_of(self.group, x)

    def is_identity(self, x) -> bool:
        return self.key(x) == _key_of(self.group, self.identity)

    def elements(self):
        raise TreeError("tree products are not enumerable")

    # -- structure queries ------------------------------------------------------

    def _flatten(self, group, el, out, deep: bool) -> None:
        if any(group is g for g in self.tog.vertices.values()):
            if deep and isinstance(group, TreeProduct):
                group._flatten(group.group, el, out, deep)
                return
            if _key_of(group, el) != _key_of(group, group.identity):
                out.append((group, el))
            return
        if isinstance(group, Amalgam):
            tag, carry, letters = el
            if _key_of(group.C, carry) != _key_of(group.C, group.C.identity):
                self._flatten(group.sides[0], group.embed(carry, 0), out, deep)
            for side, v in letters:
                self._flatten(group.sides[side], v, out, deep)
        elif isinstance(group, TreeProduct):
            group._flatten(group.group, el, out, deep)
        else:
            if _key_of(group, el) != _key_of(group, group.identity):
                out.append((group, el))

    def flatten(self, el, deep: bool = False) -> list:
        """Nontrivial vertex-group letters whose product is el.

        With deep=True, letters at vertices that are themselves tree
        products are expanded down to their own leaves."""
        out: list = []
        self._flatten(self.group, el, out, deep)
        merged: list = []
        for group, v in out:
            if merged and merged[-1][0] is group:
                v = group.mul(merged.pop()[1], v)
            if _key_of(group, v) != _key_of(group, group.identity):
                merged.append((group, v))
        return merged

    def syllables(self, el) -> int:
        return len(self.flatten(el))

    def vertex_of_group(self, group) -> str:
        for v, g in self.tog.vertices.items():
            if g is group:
                return v
        raise KeyError(group)

    def flatten_word(self, el) -> list:
        return [(self.vertex_of_group(g), v) for g, v in self.flatten(el)]

    def _in_family_cluster(self, group, el, level: int) -> bool:
        out: list = []
        self._flatten(group, el, out, deep=False)
        for g, v in out:
            vertex = self.vertex_of_group(g)
            preds = self.priority.get(vertex)
            if preds is None or not preds[level](v):
                return False
        return True

    def in_family(self, el, level: int = 0) -> bool:
        """All letters lie in the installed priority subgroups at `level`."""
        if not self.priority:
            raise TreeError("no subgroup family installed")
        return self._in_family_cluster(self.group, el, level)

    def subproduct_value(self, el, vertices):
        """The element of the sub tree product on `vertices` equal to el,
        or None.  That vertex set must have been contracted as one cluster
        (pass inner= at construction)."""
        want = frozenset(vertices)
        if want not in self.clusters:
            raise TreeError(f"{sorted(want)} was not folded as a cluster")
        group, current = self.group, el
        while True:
            if group is self.clusters[want]:
                return current
            if not isinstance(group, Amalgam):
                return None
            for side in (0, 1):
                val = group.side_value(current, side)
                if val is not None and self._contains_cluster(
                        group.sides[side], want):
                    group, current = group.sides[side], val
                    break
            else:
                return None

    def _contains_cluster(self, group, want: frozenset) -> bool:
        if group is self.clusters.get(want):
            return True
        if isinstance(group, Amalgam):
            return (self._contains_cluster(group.sides[0], want)
                    or self._contains_cluster(group.sides[1], want))
        return False

    def vertex_value(self, el, vertex: str):
        """The G_vertex element equal to el, or None (finite groups only)."""
        images = self._vertex_images.get(vertex)
        if images is None:
            G = self.tog.vertices[vertex]
            images = {self.key(self.include(vertex, x)): x
                      for x in G.elements()}
            self._vertex_images[vertex] = images
        return images.get(self.key(el))

    # -- batteries ----------------------------------------------------------

    def random_word(self, rng: random.Random, length: int) -> list:
        """A random reduced word: a walk on the tree whose letters avoid
        the edge group toward the previous vertex."""
        tog = self.tog
        verts = sorted(tog.vertices)
        word = []
        prev = None
        v = rng.choice(verts)
        for _ in range(length):
            G = tog.vertices[v]
            elems = list(G.elements())
            if prev is None:
                banned = {_key_of(G, G.identity)}
            else:
                e = tog.edge_between(prev, v)
                banned = {_key_of(G, x) for x in e.endpoint_map(v).values()}
            pool = [x for x in elems if _key_of(G, x) not in banned]
            if not pool:
                break
            word.append((v, rng.choice(pool)))
            prev, v = v, rng.choice(tog.neighbors(v))
        return word


def contract(tog: TreeOfGroups, sub, name: str | None = None,
             priority: dict | None = None):
    """Contract a connected subtree to one vertex carrying its tree product.

    Returns (new tree, new vertex name, sub product).  Boundary maps of
    crossing edges compose with the inclusion into the sub product.
    """
    sub = frozenset(sub)
    keep = [v for v in tog.vertices if v not in sub]
    sub_edges = [e for e in tog.edges if e.u in sub and e.v in sub]
    if len(sub_edges) != len(sub) - 1:
        raise TreeError("vertex set is not a connected subtree")
    sub_tog = TreeOfGroups({v: tog.vertices[v] for v in sub}, sub_edges)
    subprod = TreeProduct(sub_tog, priority=priority)
    name = name or "(" + "+".join(sorted(sub)) + ")"
    vertices = {v: tog.vertices[v] for v in keep}
    vertices[name] = subprod
    edges = []
    for e in tog.edges:
        if e.u in sub and e.v in sub:
            continue
        if e.u in sub:
            edges.append(Edge(name, e.v,
                              e.group,
                              {c: subprod.include(e.u, x)
                               for c, x in e.into_u.items()},
                              e.into_v))
        elif e.v in sub:
            edges.append(Edge(e.u, name, e.group, e.into_u,
                              {c: subprod.include(e.v, x)
                               for c, x in e.into_v.items()}))
        else:
            edges.append(e)
    return TreeOfGroups(vertices, edges), name, subprod


def fold(tog: TreeOfGroups, a: str, b: str, H, new_vertex: str):
    """Subdivide the edge a-b at an intermediate subgroup H of G_a.

    H is a SubgroupAsGroup over G_a containing the a-side image of the
    edge group; the new vertex carries H, its edge toward a carries H
    itself and its edge toward b carries the old edge group.
    """
    e = tog.edge_between(a, b)
    img = {_key_of(tog.vertices[a], x) for x in e.endpoint_map(a).values()}
    hkeys = {_key_of(tog.vertices[a], x) for x in H.elements()}
    if not img <= hkeys:
        raise TreeError("H does not contain the edge-group image")
    vertices = dict(tog.vertices)
    vertices[new_vertex] = H
    edges = [x for x in tog.edges if x is not e]
    edges.append(Edge(a, new_vertex, H,
                      {h: h for h in H.elements()},
                      {h: h for h in H.elements()}))
    edges.append(Edge(new_vertex, b, e.group,
                      dict(e.endpoint_map(a)), dict(e.endpoint_map(b))))
    return TreeOfGroups(vertices, edges)


def ball_intersection(tog: TreeOfGroups, a_vertices, b_vertices,
                      syllables: int, cap: int = 20000, seed: int = 0) -> dict:
    """Elements of the subproduct on a_vertices, up to the given syllable
    count, that lie in the subproduct on b_vertices.

    Exhaustive while the enumeration stays under `cap` words; beyond that
    it switches to seeded sampling of the same word space and records the
    mode.  b_vertices must span a connected subtree (it is folded as a
    cluster so membership is decidable by extraction)."""
    import itertools

    a_vertices = frozenset(a_vertices)
    b_vertices = frozenset(b_vertices)
    product = TreeProduct(tog, inner=b_vertices)
    names = sorted(a_vertices)

    def vertex_walks(length):
        for vs in itertools.product(names, repeat=length):
            if all(vs[i] != vs[i + 1] for i in range(len(vs) - 1)):
                yield vs

    found = {}
    count = 0
    exhaustive = True
    for length in range(syllables + 1):
        for vs in vertex_walks(length):
            pools = [sorted(tog.vertices[v].elements(),
                            key=lambda x, g=tog.vertices[v]: _key_of(g, x))
                     for v in vs]
            for letters in itertools.product(*pools):
                count += 1
                if count > cap:
                    exhaustive = False
                    break
                el = product.eval_word(list(zip(vs, letters)))
                val = product.subproduct_value(el, b_vertices)
                if val is not None:
                    found[product.key(el)] = el
            if not exhaustive:
                break
        if not exhaustive:
            break
    if not exhaustive:
        rng = random.Random(seed)
        found = {}
        for _ in range(cap):
            length = rng.randint(1, syllables)
            vs = [rng.choice(names)]
            while len(vs) < length:
                nxt = rng.choice(names)
                if nxt != vs[-1]:
                    vs.append(nxt)
            word = [(v, rng.choice(sorted(
                tog.vertices[v].elements(),
                key=lambda x, g=tog.vertices[v]: _key_of(g, x)))) for v in vs]
            el = product.eval_word(word)
            if product.subproduct_value(el, b_vertices) is not None:
                found[product.key(el)] = el
    return {"mode": "exhaustive" if exhaustive else "sampled",
            "elements": found, "product": product, "words_seen": count}


def check_subtree_conditions(tog: TreeOfGroups, sub, members: dict,
                             edge_groups: dict | None = None) -> dict:
    """The injectivity conditions for a subgroup family over a subtree.

    members maps each subtree vertex to a membership oracle (a frozenset
    of elements or a callable); edge_groups, when given, maps frozenset
    edge keys to the claimed edge subgroups, checked against the computed
    preimages.  Returns a dict report with per-edge preimage sizes.
    """
    sub = frozenset(sub)
    report = {"vertices": sorted(sub), "edges": [], "pass": True}

    def belongs(v, x):
        m = members[v]
        if callable(m):
            return m(x)
        G = tog.vertices[v]
        keys = {_key_of(G, y) for y in m}
        return _key_of(G, x) in keys

    for v in sub:
        G = tog.vertices[v]
        m = members[v]
        entry = {"vertex": v}
        if not callable(m):
            closed = all(belongs(v, G.mul(x, y)) for x in m for y in m)
            entry["subgroup"] = bool(closed and belongs(v, G.identity))
            if not entry["subgroup"]:
                report["pass"] = False
        else:
            entry["subgroup"] = "oracle"
        report.setdefault("vertex_checks", []).append(entry)
    for e in tog.edges:
        if e.u not in sub or e.v not in sub:
            continue
        pre_u = {c for c in e.group.elements() if belongs(e.u, e.into_u[c])}
        pre_v = {c for c in e.group.elements() if belongs(e.v, e.into_v[c])}
        keyed_u = {_key_of(e.group, c) for c in pre_u}
        keyed_v = {_key_of(e.group, c) for c in pre_v}
        entry = {"edge": (e.u, e.v), "preimage_size": len(keyed_u),
                 "preimages_equal": keyed_u == keyed_v}
        if not entry["preimages_equal"]:
            report["pass"] = False
        if edge_groups is not None:
            claimed = edge_groups.get(frozenset((e.u, e.v)))
            if claimed is not None:
                ck = {_key_of(e.group, c) for c in claimed}
                entry["matches_claimed_edge_group"] = ck == keyed_u
                if not entry["matches_claimed_edge_group"]:
                    report["pass"] = False
        report["edges"].append(entry)
    return report
