import pytest

from coxkit.coxeter import Coxeter, ResourceLimit


def test_normalize_examples(ctx):
    assert ctx.normalize("ss") == ""
    assert ctx.normalize("tsts") == "stst"
    assert ctx.normalize("ststs") == "tst"
    assert ctx.normalize(["s", "t"]) == "st"
    assert ctx.normalize(ctx.normalize("tsrrst")) == ctx.normalize("tsrrst")


def test_multiply_invert_length(ctx):
    assert len(ctx.normalize("stst")) == 4
    assert ctx.inv("st") == "ts"
    assert ctx.mult("stst", "s") == "tst"
    for w in ctx.ball(8):
        assert len(ctx.inv(w)) == len(w)
    for w in ctx.ball(6):
        assert ctx.mult(w, ctx.inv(w)) == ""


def test_ball_sizes_and_oracle(ctx):
    sizes = [len(ctx.ball(L)) for L in range(9)]
    assert sizes[2] == 10
    assert sizes[4] == 43
    for L in range(7):
        assert len(ctx.ball(L)) == ctx.ball_oracle_size(L)
    ball = ctx.ball(5)
    assert ball == tuple(sorted(ball, key=lambda w: (len(w), w)))
    assert len(set(ball)) == len(ball)


def test_ball_radius_cap():
    small = Coxeter(max_radius=3)
    assert len(small.ball(3)) == 22
    with pytest.raises(ResourceLimit):
        small.ball(4)


def test_parabolic_and_longest(ctx):
    assert len(ctx.parabolic("st")) == 8
    assert ctx.longest("st") == "stst"
    assert ctx.longest("rt") == "rtrt"
    assert len(ctx.parabolic("s")) == 2
    with pytest.raises(ValueError):
        ctx.parabolic("rst")


def test_residues_and_projection(ctx):
    R = ctx.residue("st", "")
    assert ctx.proj(R, "") == ""
    assert ctx.gate(ctx.residue("st", "r")) == "r"
    assert ctx.proj(ctx.residue("st", ""), ctx.normalize("str")) == "st"
    # gate condition: ascents at both letters
    for u in "st":
        assert len(ctx.mult(R.gate, u)) == len(R.gate) + 1


def test_projection_gate_property(ctx):
    # delta(x, y) = delta(x, proj) * delta(proj, y), additively in length
    import itertools
    for types in itertools.combinations("rst", 2):
        for base in ctx.ball(4):
            R = ctx.residue(types, base)
            for x in ctx.ball(6)[::7]:
                z = ctx.proj(R, x)
                dxz = len(ctx.mult(ctx.inv(x), z))
                for y in ctx.chambers(R):
                    dxy = len(ctx.mult(ctx.inv(x), y))
                    dzy = len(ctx.mult(ctx.inv(z), y))
                    assert dxy == dxz + dzy


def test_prefix_order(ctx):
    for w in ctx.ball(5):
        assert ctx.prefix_leq("", w)
    assert len(ctx.prefix_set("stst")) == 8
    assert ctx.prefix_leq("st", "stst")
    assert not ctx.prefix_leq("rs", "stst")


def test_galleries(ctx):
    gals = ctx.min_galleries("stst")
    assert {g.type_word for g in gals} == {"stst", "tsts"}
    g = ctx.gallery("st")
    assert ctx.gallery_chambers(g) == ("", "s", "st")
    with pytest.raises(ValueError):
        ctx.gallery("ss")
    # the shift operation in both directions
    assert ctx.gallery_shift("s", ctx.gallery("st")).type_word == "t"
    assert ctx.gallery_shift("r", ctx.gallery("st")).type_word == "rst"
    assert ctx.min_galleries_s("stst", "s")[0].type_word == "stst"


def test_descents(ctx):
    assert ctx.has_left_descent("stst", "t")
    assert ctx.has_left_descent("stst", "s")
    assert not ctx.has_left_descent("st", "t")
    assert ctx.last_letters("stst") == {"s", "t"}
