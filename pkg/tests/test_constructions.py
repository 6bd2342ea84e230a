import pytest

from coxkit.constructions import (Builder, PreconditionError, c_set_0,
                                  c_set_minus1, c_set_r, classify_residue,
                                  d_set, dset_certificate, pair_labelings,
                                  roots_violated)


@pytest.fixture(scope="module")
def builder(cache):
    return Builder(cache)


def test_residue_classes(ctx):
    tag = classify_residue(ctx, ctx.residue("st", ""))
    assert tag.i == 0 and tag.in_T_i1
    tag = classify_residue(ctx, ctx.residue("st", "r"))
    assert tag.i == 1 and tag.in_T_i1
    # rsr is the gate of its st-residue but both gate*s*r and gate*t*r drop
    tag = classify_residue(ctx, ctx.residue("st", ctx.normalize("rsr")))
    assert tag.i == 3 and not tag.in_T_i1


def test_construction_orders(ctx, builder):
    R = ctx.residue("st", "")
    assert builder.construction("V_R", R).orders() == (4, 8, 4)
    assert builder.construction("V_R", R).edge_orders() == (2, 2)
    assert builder.construction("O_R", R).orders() == (16, 16, 16)
    assert builder.construction("H_R", R).orders() == (32, 32, 16, 32, 32)
    assert builder.construction("K_Rs", R, "s").orders() == (32, 32, 16, 16)
    assert builder.construction("O_Rs", R, "s").orders() == (8, 16, 16, 16)


def test_vrs_precondition(ctx, builder):
    R2 = ctx.residue("st", "r")
    cons = builder.construction("V_Rs", R2, "s")
    assert cons.orders()[0] == 16
    # outside the residue class entirely
    with pytest.raises(PreconditionError):
        builder.construction("V_R", ctx.residue("st", ctx.normalize("rsr")))
    # in the class, but l(w_R srs) = l(w_R)+3 fails for this s
    with pytest.raises(PreconditionError):
        builder.construction("V_Rs", ctx.residue("st", ctx.normalize("sr")), "s")


def test_edge_groups_are_common_root_subgroups(ctx, builder):
    R = ctx.residue("st", "")
    cons = builder.construction("O_R", R)
    for edge, expected in zip(cons.tog.edges, ("st", "ts")):
        img = builder.image_of_u(ctx.normalize(expected),
                                 cons.spec(edge.u).ambient)
        assert frozenset(edge.group.elements()) == img
    assert not cons.tog.validate()


def test_v_spec_index_two(ctx, builder):
    sp = builder.v_spec("x", "r", "st")
    assert sp.group.order * 2 == sp.ambient.order


def test_c_sets(ctx):
    C_r = c_set_r(ctx, ("s", "t"))
    assert "" in C_r and ctx.normalize("srs") in C_r and "tr" in C_r
    assert len(C_r) == 14
    C1 = c_set_minus1(ctx)
    assert ctx.normalize("rsrs") in C1 and ctx.normalize("rtr") in C1
    assert len(C1) == 19
    C0 = c_set_0(ctx)
    assert len(C0) == 34
    assert C1 <= C0
    # prefix closure
    for w in C0:
        for e in ctx.reduced_words(w):
            assert ctx.canon_reduced(e[:-1]) in C0 or not e


def test_d_sets_match_lists(ctx):
    m = ctx.mult
    assert d_set(ctx, c_set_r(ctx, ("s", "t"))) == frozenset({
        ctx.longest("rs"), ctx.longest("st"), ctx.longest("rt"),
        m("r", ctx.longest("st"))})
    d1 = d_set(ctx, c_set_minus1(ctx))
    assert m("s", ctx.longest("rt")) in d1 and m("t", ctx.longest("rs")) in d1
    assert len(d1) == 6
    assert len(d_set(ctx, c_set_0(ctx))) == 12


def test_generator_counts(cache, ctx):
    assert len(roots_violated(cache, c_set_r(ctx, ("s", "t")))) == 7
    assert len(roots_violated(cache, c_set_minus1(ctx))) == 9
    assert len(roots_violated(cache, c_set_0(ctx))) == 15


def test_dset_certificate(cache):
    cert = dset_certificate(cache)
    assert cert.passed
    assert len(cert.checks) == 10


def test_labelings_cover_all_pairs():
    assert {frozenset(p) for p in pair_labelings()} == {
        frozenset("st"), frozenset("rs"), frozenset("rt")}


def test_build_colimit(cache):
    from coxkit.constructions import build_colimit
    for kind, count in (("G_st", 7), ("G_-1", 9), ("G_0", 15)):
        pres = build_colimit(cache, kind)
        assert pres.generator_count == count
        assert pres.relations
    import pytest as _pytest
    with _pytest.raises(ValueError):
        build_colimit(cache, "G_1")
