import random

import pytest

from coxkit.roots import IntervalNotExact, RootSystem


@pytest.fixture(scope="module")
def rs(ctx):
    return RootSystem(ctx)


def test_root_examples(ctx, rs):
    a_s = rs.simple("s")
    assert rs.member("", a_s)
    rt = rs.root_from("r", "t")
    assert rt.refl == "rtr" and rt.positive
    assert rs.root_from("s", "s") == rs.opposite(a_s)
    assert rs.opposite(rs.opposite(a_s)) == a_s


def test_membership_cross_checks(ctx, rs):
    roots = {rs.root_from(w, g) for w in ctx.ball(4) for g in "rst"}
    for w in ctx.ball(5):
        for a in roots:
            assert rs.member(w, a) == rs.member_vec(w, a)
    small = {rs.root_from(w, g) for w in ctx.ball(2) for g in "rst"}
    for w in ctx.ball(8):
        for a in small:
            assert rs.member(w, a) != rs.member(w, rs.opposite(a))


def test_action(ctx, rs):
    a_t = rs.simple("t")
    b = rs.act("r", a_t)
    assert b == rs.root_from("r", "t")
    assert rs.act("s", rs.simple("s")) == rs.opposite(rs.simple("s"))


def test_pair_class_finite(ctx, rs):
    pc = rs.pair_class(rs.simple("s"), rs.simple("t"))
    assert pc.kind == "finite" and pc.order == 4
    assert rs.prenilpotent(rs.root_from("r", "s"), rs.root_from("r", "t"))
    assert not rs.prenilpotent(rs.simple("s"), rs.opposite(rs.simple("s")))
    # orthogonal pair inside a rank-2 gallery
    seq = rs.inversion_sequence(ctx.gallery("stst"))
    pc = rs.pair_class(seq[0], seq[2])
    assert pc.kind == "finite" and pc.order == 2


def test_inversion_sequence(ctx, rs):
    for w in ctx.ball(6):
        for g in ctx.min_galleries(w):
            seq = rs.inversion_sequence(g)
            assert len(seq) == len(w)
            assert all(a.positive for a in seq)
        # the crossed-root set does not depend on the gallery
        sets = {frozenset(rs.inversion_sequence(g))
                for g in ctx.min_galleries(w)}
        assert len(sets) == 1


def test_intervals_rank2(ctx, rs):
    g = ctx.gallery("stst")
    seq = rs.inversion_sequence(g)
    assert rs.open_interval(seq[0], seq[3], g) == (seq[1], seq[2])
    assert rs.open_interval(seq[0], seq[1], g) == ()
    assert rs.interval(seq[1], seq[1], g) == (seq[1],)
    with pytest.raises(ValueError):
        rs.interval(seq[3], seq[0], g)
    with pytest.raises(ValueError):
        rs.interval(seq[0], rs.root_from("r", "s"), g)


def test_interval_definitional_cross_check(ctx, rs):
    # cone-test intervals agree with the defining containments on a ball
    ball = ctx.ball(6)
    for type_word in ("stst", "rstr", "tsrt"):
        g = ctx.gallery(type_word)
        seq = rs.inversion_sequence(g)
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if rs.pair_class(seq[i], seq[j]).kind != "finite":
                    continue
                closed = set(rs.interval(seq[i], seq[j], g))
                for c in seq:
                    ball_in = all(
                        rs.member(w, c)
                        for w in ball
                        if rs.member(w, seq[i]) and rs.member(w, seq[j]))
                    ball_out = all(
                        not rs.member(w, c)
                        for w in ball
                        if not rs.member(w, seq[i]) and not rs.member(w, seq[j]))
                    if c in closed:
                        assert ball_in and ball_out
                    else:
                        assert not (ball_in and ball_out)


def _nested_pairs(ctx, rs, radius=5):
    out = []
    for w in ctx.ball(radius):
        g = ctx.min_galleries(w)[0]
        seq = rs.inversion_sequence(g)
        for i, a in enumerate(seq):
            for b in seq[i + 1:]:
                if rs.pair_class(a, b).kind == "nested":
                    out.append((g, a, b))
    return out


def test_interval_nested_not_exact(ctx, rs):
    nested = _nested_pairs(ctx, rs)
    assert nested
    g, a, b = nested[0]
    with pytest.raises(IntervalNotExact):
        rs.interval(a, b, g)
    roots, exact = rs.interval_ball(a, b, g, 6)
    assert not exact and a in roots and b in roots


def test_nested_orientation_against_ball_oracle(ctx, rs):
    rng = random.Random(7)
    ball6 = ctx.ball(6)
    ball8 = ctx.ball(8)
    full = set(ball8)
    checked = 0
    while checked < 200:
        a = rs.root_from(rng.choice(ball6), rng.choice("rst"))
        b = rs.root_from(rng.choice(ball6), rng.choice("rst"))
        if a == b or a.refl == b.refl:
            continue
        pc = rs.pair_class(a, b)
        if pc.kind == "finite":
            continue
        A = {w for w in ball8 if rs.member(w, a)}
        B = {w for w in ball8 if rs.member(w, b)}
        if pc.kind == "nested":
            small, large = (A, B) if pc.contained == a else (B, A)
            assert small <= large
        elif pc.detail == "disjoint":
            assert not (A & B)
        else:
            assert A | B == full
        checked += 1


def test_emptiness_certificate(ctx, rs):
    # for w in C_0 every nested pair of Phi(w) has a certifiably empty
    # open interval; outside C_0 that can fail (rstrs carries a nested
    # pair whose interval contains a third root)
    from coxkit.constructions import c_set_0
    checked = 0
    for w in sorted(c_set_0(ctx)):
        g = ctx.min_galleries(w)[0]
        seq = rs.inversion_sequence(g)
        for i, a in enumerate(seq):
            for b in seq[i + 1:]:
                if rs.pair_class(a, b).kind != "nested":
                    continue
                ok, data = rs.open_interval_empty_certificate(a, b, g, 8)
                assert ok, (g, a, b, data)
                checked += 1
    assert checked > 0
    # and the counterexample outside C_0 stays a counterexample
    g = ctx.min_galleries("rstrs")[0]
    seq = rs.inversion_sequence(g)
    pairs = [(a, b) for i, a in enumerate(seq) for b in seq[i + 1:]
             if rs.pair_class(a, b).kind == "nested"]
    assert any(not rs.open_interval_empty_certificate(a, b, g, 8)[0]
               for a, b in pairs)
