"""The named tree products over rank-2 residues and the colimit data.

Each construction is a path of vertex groups: full blueprint groups U_w
and index-2 subgroups V (generated by the root generators of the two
gate-adjacent U's).  Edge groups are always the subgroup generated by the
common generating roots of adjacent vertices, with boundary maps matched
root-by-root, which is exactly the hat-star convention.

The colimit side computes the prefix sets C and gate sets D that define
the three direct limits, together with their generator counts; those
groups have no word-problem oracle here and are carried as presentations
plus the amalgam decompositions certified in coxkit.pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

from coxkit.blueprint import BlueprintGroup, GroupCache
from coxkit.certs import Certificate
from coxkit.coxeter import Coxeter, Residue
from coxkit.treeprod import Edge, SubgroupAsGroup, TreeOfGroups

KINDS = ("V_R", "O_R", "V_Rs", "O_Rs", "H_R", "K_Rs")


class PreconditionError(ValueError):
    """A construction was requested for a residue outside its class."""


@dataclass(frozen=True)
class ResidueClassTag:
    residue: Residue
    i: int
    in_R_i: bool
    in_T_i1: bool


def residue_letters(R: Residue, s: str | None = None):
    """(s, t, d): the chosen type letter, the other one, the third letter."""
    types = sorted(R.types)
    if len(types) != 2:
        raise PreconditionError("constructions need rank-2 residues")
    (d,) = set("rst") - set(types)
    if s is None:
        s, t = types
    else:
        if s not in types:
            raise PreconditionError(f"{s!r} is not in the type of {R}")
        (t,) = set(types) - {s}
    return s, t, d


def classify_residue(ctx: Coxeter, R: Residue) -> ResidueClassTag:
    s, t, d = residue_letters(R)
    g = R.gate
    i = len(g)
    in_t = (len(ctx.mult(g, s, d)) == i + 2 and len(ctx.mult(g, t, d)) == i + 2)
    return ResidueClassTag(R, i, R.rank == 2, in_t)


@dataclass
class VertexSpec:
    name: str
    label: str
    group: object
    ambient: BlueprintGroup
    roots: frozenset


@dataclass
class Construction:
    kind: str
    residue: Residue
    s: str
    specs: list
    tog: TreeOfGroups

    def spec(self, name: str) -> VertexSpec:
        for sp in self.specs:
            if sp.name == name:
                return sp
        raise KeyError(name)

    def orders(self) -> tuple:
        return tuple(sp.group.order for sp in self.specs)

    def edge_orders(self) -> tuple:
        return tuple(e.group.order for e in self.tog.edges)


class Builder:
    def __init__(self, cache: GroupCache | None = None):
        if cache is None:
            from coxkit.coxeter import standard_coxeter
            cache = GroupCache(standard_coxeter())
        self.cache = cache
        self.ctx = cache.ctx
        self._subgroup_cache: dict = {}
        self._vgroup_cache: dict = {}

    # -- groups and subgroup images -----------------------------------------

    def u_spec(self, name: str, w: str) -> VertexSpec:
        grp = self.cache.group(w)
        return VertexSpec(name, f"U[{grp.w}]", grp, grp, frozenset(grp.roots))

    def v_spec(self, name: str, gate: str, types) -> VertexSpec:
        ctx = self.ctx
        u, v = sorted(types)
        gate = ctx.normalize(gate)
        key = (gate, u, v)
        got = self._vgroup_cache.get(key)
        if got is None:
            ambient = self.cache.group(ctx.mult(gate, ctx.longest({u, v})))
            roots = (frozenset(self.cache.phi(ctx.mult(gate, u)))
                     | frozenset(self.cache.phi(ctx.mult(gate, v))))
            elems = self.subgroup_in(ambient, roots)
            grp = SubgroupAsGroup(ambient, elems, f"V[{gate}|{u}{v}]")
            assert grp.order * 2 == ambient.order, "V must have index 2"
            got = (grp, ambient, roots)
            self._vgroup_cache[key] = got
        grp, ambient, roots = got
        return VertexSpec(name, grp.name, grp, ambient, roots)

    def subgroup_in(self, ambient: BlueprintGroup, roots) -> frozenset:
        key = (id(ambient), frozenset(roots))
        got = self._subgroup_cache.get(key)
        if got is None:
            gens = [ambient.root_mask(root) for root in roots]
            elems = {0}
            frontier = [0]
            while frontier:
                x = frontier.pop()
                for gmask in gens:
                    y = ambient.mul(gmask, x)
                    if y not in elems:
                        elems.add(y)
                        frontier.append(y)
            got = frozenset(elems)
            self._subgroup_cache[key] = got
        return got

    def image_of_u(self, w: str, ambient: BlueprintGroup) -> frozenset:
        return self.subgroup_in(ambient, self.cache.phi(self.ctx.normalize(w)))

    def image_of_v(self, gate: str, types, ambient: BlueprintGroup) -> frozenset:
        ctx = self.ctx
        u, v = sorted(types)
        roots = (frozenset(self.cache.phi(ctx.mult(gate, u)))
                 | frozenset(self.cache.phi(ctx.mult(gate, v))))
        return self.subgroup_in(ambient, roots)

    # -- edges ------------------------------------------------------------

    def edge(self, a: VertexSpec, b: VertexSpec) -> Edge:
        common = a.roots & b.roots
        if not common:
            raise PreconditionError(
                f"no common generating roots between {a.label} and {b.label}")
        gens = sorted(common, key=lambda root: (root.refl, root.positive))
        amask = [a.ambient.root_mask(root) for root in gens]
        bmask = [b.ambient.root_mask(root) for root in gens]
        words = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for gi, gmask in enumerate(amask):
                    y = a.ambient.mul(x, gmask)
                    if y not in words:
                        words[y] = words[x] + (gi,)
                        nxt.append(y)
            frontier = sorted(nxt)
        elems = sorted(words)
        group = SubgroupAsGroup(a.ambient, elems,
                                f"E[{a.label}^{b.label}]")
        into_a = {}
        into_b = {}
        for x in elems:
            into_a[x] = x
            acc = 0
            for gi in words[x]:
                acc = b.ambient.mul(acc, bmask[gi])
            into_b[x] = acc
        for x in elems:
            if hasattr(a.group, "__contains__"):
                assert into_a[x] in a.group, "edge not inside left vertex group"
            if hasattr(b.group, "__contains__"):
                assert into_b[x] in b.group, "edge not inside right vertex group"
        return Edge(a.name, b.name, group, into_a, into_b)

    # -- the constructions ---------------------------------------------------

    def vertex_plan(self, kind: str, R: Residue, s: str | None = None):
        ctx = self.ctx
        s, t, d = residue_letters(R, s)
        g = R.gate
        m = ctx.mult
        r_J = ctx.longest({s, t})
        r_dt = ctx.longest({d, t})
        r_ds = ctx.longest({d, s})
        if kind == "V_R":
            return s, [("U", m(g, s, d)), ("V", g, (s, t)), ("U", m(g, t, d))]
        if kind == "O_R":
            return s, [("V", m(g, s), (d, t)), ("U", m(g, r_J)),
                       ("V", m(g, t), (d, s))]
        if kind == "V_Rs":
            return s, [("U", m(g, s, d, s)), ("V", g, (s, t)), ("U", m(g, t, d))]
        if kind == "O_Rs":
            return s, [("U", m(g, s, d, s)), ("V", m(g, s), (d, t)),
                       ("U", m(g, r_J)), ("V", m(g, t), (d, s))]
        if kind == "H_R":
            return s, [("U", m(g, s, r_dt)), ("V", m(g, s, t), (d, s)),
                       ("U", m(g, r_J)), ("V", m(g, t, s), (d, t)),
                       ("U", m(g, t, r_ds))]
        if kind == "K_Rs":
            return s, [("U", m(g, s, r_dt)), ("V", m(g, s, t), (d, s)),
                       ("U", m(g, r_J)), ("V", m(g, t), (d, s))]
        raise PreconditionError(f"unknown construction kind {kind!r}")

    def construction(self, kind: str, R: Residue, s: str | None = None) -> Construction:
        ctx = self.ctx
        tag = classify_residue(ctx, R)
        if not tag.in_T_i1:
            raise PreconditionError(
                f"{R} violates l(w_R s r) = l(w_R)+2 = l(w_R t r)")
        s_chosen, plan = self.vertex_plan(kind, R, s)
        if kind in ("V_Rs", "O_Rs", "K_Rs"):
            s2, t2, d2 = residue_letters(R, s_chosen)
            if kind in ("V_Rs", "O_Rs") and \
                    len(ctx.mult(R.gate, s2, d2, s2)) != len(R.gate) + 3:
                raise PreconditionError(
                    f"{R} with s={s_chosen} violates l(w_R srs) = l(w_R)+3")
        specs = []
        for idx, entry in enumerate(plan):
            name = f"v{idx}"
            if entry[0] == "U":
                specs.append(self.u_spec(name, entry[1]))
            else:
                specs.append(self.v_spec(name, entry[1], entry[2]))
        edges = [self.edge(specs[i], specs[i + 1]) for i in range(len(specs) - 1)]
        tog = TreeOfGroups({sp.name: sp.group for sp in specs}, edges)
        issues = tog.validate()
        if issues:
            raise PreconditionError("; ".join(issues))
        return Construction(kind, R, s_chosen, specs, tog)


# -- colimit data ------------------------------------------------------------


@dataclass
class ColimitPresentation:
    """Generators and relations of one of the three direct limits.

    The group itself has no word-problem oracle here; this is the
    bookkeeping object that the certificates compare against the explicit
    gate lists and the generator counts."""

    kind: str
    C: frozenset
    D: frozenset
    generators: tuple
    relations: frozenset

    @property
    def generator_count(self) -> int:
        return len(self.generators)


def build_colimit(cache: GroupCache, kind: str) -> ColimitPresentation:
    ctx = cache.ctx
    if kind == "G_st":
        C = c_set_r(ctx, ("s", "t"))
    elif kind == "G_-1":
        C = c_set_minus1(ctx)
    elif kind == "G_0":
        C = c_set_0(ctx)
    else:
        raise ValueError(f"unknown colimit kind {kind!r}")
    gens = tuple(sorted(roots_violated(cache, C),
                        key=lambda root: (root.refl, root.positive)))
    rels = frozenset(harvest_relations(cache, C))
    gen_set = set(gens)
    for a, b, mids in rels:
        assert a in gen_set and b in gen_set
        assert all(c in gen_set for c in mids)
    return ColimitPresentation(kind, C, d_set(ctx, C), gens, rels)


def pair_labelings():
    return (("s", "t"), ("r", "s"), ("r", "t"))


def c_set_r(ctx: Coxeter, pair) -> frozenset:
    """C for the two-letter colimit of the pair {s,t}: prefixes of the
    longest elements of the two parabolic types containing the third letter."""
    (d,) = set("rst") - set(pair)
    out = set()
    for x in pair:
        out |= ctx.prefix_set(ctx.longest({d, x}))
    return frozenset(out)


def c_set_minus1(ctx: Coxeter) -> frozenset:
    out = set()
    for pair in pair_labelings():
        out |= ctx.prefix_set(ctx.longest(set(pair)))
    return frozenset(out)


def c_set_0(ctx: Coxeter) -> frozenset:
    out = set(c_set_minus1(ctx))
    for pair in pair_labelings():
        (d,) = set("rst") - set(pair)
        out |= ctx.prefix_set(ctx.mult(d, ctx.longest(set(pair))))
    return frozenset(out)


def d_set(ctx: Coxeter, C: frozenset) -> frozenset:
    """Gates w_R of rank-2 residues with both w_R*u, w_R*v in C, recorded
    as the elements w_R * r_J."""
    out = set()
    for w in C:
        for pair in pair_labelings():
            u, v = pair
            wu, wv = ctx.mult(w, u), ctx.mult(w, v)
            if len(wu) == len(w) + 1 and len(wv) == len(w) + 1 \
                    and wu in C and wv in C:
                out.add(ctx.mult(w, ctx.longest({u, v})))
    return frozenset(out)


def roots_violated(cache: GroupCache, C) -> frozenset:
    """The roots alpha with C not contained in alpha: the generator set of
    the colimit presentation over C."""
    out = set()
    for w in C:
        out |= set(cache.phi(w))
    return frozenset(out)


def harvest_relations(cache: GroupCache, C) -> set:
    """Deduplicated commutator relations of all U_w, w in C, as root tuples."""
    rels = set()
    for w in sorted(C):
        for gal in cache.ctx.min_galleries(w):
            roots = cache.rsys.inversion_sequence(gal)
            for i in range(len(roots)):
                for j in range(i + 1, len(roots)):
                    mids = cache.blueprint.value(gal, roots[i], roots[j])
                    rels.add((roots[i], roots[j], tuple(mids)))
    return rels


def dset_certificate(cache: GroupCache) -> Certificate:
    """The explicit D_r, D_-1, D_0 lists and the generator counts."""
    ctx = cache.ctx
    cert = Certificate("colimit_generating_data")
    m = ctx.mult
    r_st, r_rs, r_rt = ctx.longest("st"), ctx.longest("rs"), ctx.longest("rt")
    C_r = c_set_r(ctx, ("s", "t"))
    C_m1 = c_set_minus1(ctx)
    C_0 = c_set_0(ctx)
    d_r = {ctx.normalize(x) for x in (r_rs, r_st, r_rt, m("r", r_st))}
    cert.check("D_r matches the explicit four-element list",
               d_set(ctx, C_r) == frozenset(d_r),
               got=sorted(d_set(ctx, C_r)), expected=sorted(d_r))
    d_m1 = set(d_r) | {m("s", r_rt), m("t", r_rs)}
    cert.check("D_-1 matches the explicit six-element list",
               d_set(ctx, C_m1) == frozenset(d_m1),
               got=sorted(d_set(ctx, C_m1)), expected=sorted(d_m1))
    d_0 = set(d_m1) | {m("rs", r_rt), m("rt", r_rs), m("sr", r_st),
                       m("st", r_rs), m("tr", r_st), m("ts", r_rt)}
    cert.check("D_0 matches the explicit twelve-element list",
               d_set(ctx, C_0) == frozenset(d_0),
               got=sorted(d_set(ctx, C_0)), expected=sorted(d_0))
    n7 = len(roots_violated(cache, C_r))
    cert.check("the two-letter colimit has seven generators", n7 == 7, got=n7)
    n9 = len(roots_violated(cache, C_m1))
    cert.check("the middle colimit has nine generators", n9 == 9, got=n9)
    pairs12 = sum(len(cache.phi(ctx.longest(set(p)))) for p in pair_labelings())
    cert.check("twelve generators indexed by the r_J groups", pairs12 == 12,
               got=pairs12)
    pairs15 = 0
    for p in pair_labelings():
        (d,) = set("rst") - set(p)
        pairs15 += len(cache.phi(m(d, ctx.longest(set(p)))))
    cert.check("fifteen generators indexed by the r*r_J groups", pairs15 == 15,
               got=pairs15)
    n15 = len(roots_violated(cache, C_0))
    cert.check("fifteen roots do not contain all of C_0", n15 == 15, got=n15)
    small = set()
    for p in pair_labelings():
        small |= set(cache.phi(ctx.longest(set(p))))
    big = set()
    for p in pair_labelings():
        (d,) = set("rst") - set(p)
        big |= set(cache.phi(m(d, ctx.longest(set(p)))))
    cert.check("every r_J generator is also an r*r_J generator", small <= big)
    rels = harvest_relations(cache, C_0)
    gens = roots_violated(cache, C_0)
    ok = all(a in gens and b in gens and all(c in gens for c in mids)
             for a, b, mids in rels)
    cert.check("every harvested relation is supported on the generators", ok,
               relations=len(rels))
    cert.data["c_sizes"] = {"C_r": len(C_r), "C_-1": len(C_m1), "C_0": len(C_0)}
    return cert
