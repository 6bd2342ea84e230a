import random

import pytest

from coxkit.reduction import (RT, RTTR, SR, TR, ConstraintError,
                              trace_word)


def test_tree_product_shape(theorem_setup):
    s = theorem_setup
    assert s.U_sr.order == 4
    assert s.V.order == 8
    assert s.U_trt.order == 8
    # the Klein triple inside U_trt
    assert s.U_trt.mul(s.u_tr, s.u_rt) == s.U_trt.mul(s.u_rt, s.u_tr)


def test_parse_and_format(theorem_setup):
    s = theorem_setup
    word = s.parse("u_sr,1,u_sr,u_t")
    assert word[0] == 0 and len(word[1]) == 2
    assert s.format_word(word) == "u_sr,1,u_sr,u_t"
    word = s.parse("u_s*u_t,u_rt*u_tr,u_t")
    assert word[0] == s.v_mask("st")
    with pytest.raises(ConstraintError):
        s.parse("u_s,u_t")   # two V letters in a row


def test_reduce_rule_a(theorem_setup):
    s = theorem_setup
    out, steps = s.reduce(s.parse("u_sr,1,u_sr,u_t"))
    assert steps == 1
    assert s.format_word(out) == "u_t"


def test_reduce_rule_b_merge(theorem_setup):
    s = theorem_setup
    out, steps = s.reduce(s.parse("u_rt,u_t,u_tr"))
    assert steps == 1
    h0, pairs = out
    assert len(pairs) == 1 and pairs[0][0] == RTTR


def test_reduce_fixed_point(theorem_setup):
    s = theorem_setup
    word = s.parse("u_sr,u_t,u_tr,u_s")
    out, steps = s.reduce(word)
    assert steps == 0 and out == word


def test_reduce_battery(theorem_setup):
    s = theorem_setup
    rng = random.Random(11)
    velems = sorted(s._v_words)
    for _ in range(10000):
        n = rng.randint(1, 6)
        pairs = tuple((rng.choice((SR, TR, RT, RTTR)), rng.choice(velems))
                      for _ in range(n))
        word = (rng.choice(velems), pairs)
        out, steps = s.reduce(word)   # element preservation asserted inside
        assert s.constrained(out)
        assert len(out[1]) <= n


def test_constrained_enumeration_counts(theorem_setup):
    s = theorem_setup
    words = list(s.enumerate_constrained(2))
    assert len(words) == 32 + 864
    assert all(s.constrained(w) for w in words)


def test_trace_base_cases(theorem_setup):
    s = theorem_setup
    cert = trace_word(s, s.parse("u_sr,u_s"))
    assert cert.passed and cert.data["final_counter"] == 2
    cert = trace_word(s, s.parse("u_rt,u_t"))
    assert cert.passed and cert.data["final_counter"] == 3
    cert = trace_word(s, s.parse("u_rt*u_tr,u_t"))
    assert cert.passed


def test_trace_counter_strictly_increases(theorem_setup):
    s = theorem_setup
    cert = trace_word(s, s.parse("u_sr,u_t,u_sr,u_s,u_tr,1"))
    assert cert.passed
    counters = cert.data["counters"]
    assert all(b > a for a, b in zip(counters, counters[1:]))
    assert cert.data["final_counter"] > 0


def test_trace_rejects_bad_words(theorem_setup):
    s = theorem_setup
    with pytest.raises(ConstraintError):
        trace_word(s, s.parse("u_sr,1,u_sr,u_t"))   # violates the constraint
    with pytest.raises(ConstraintError):
        trace_word(s, s.parse("u_s,u_sr,u_t"))      # leading V letter
    with pytest.raises(ConstraintError):
        trace_word(s, (0, ()))


def test_trace_all_short_words(theorem_setup):
    s = theorem_setup
    for word in s.enumerate_constrained(2):
        cert = trace_word(s, word)
        assert cert.passed, s.format_word(word)
        assert not s.product.is_identity(s.eval_word(word))
