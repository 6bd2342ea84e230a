import json

import pytest

from coxkit import lemmas


def test_wordsincoxetergroup_instance(ctx):
    # w = 1, w' = st, f = 1: l(str) = 3
    assert len(ctx.mult("", "st", "r", "")) == 0 + 2 + 1 + 0


def test_not_both_down_instance(ctx):
    assert len(ctx.mult("r", "s", "r")) == len("r") + 2 or \
        len(ctx.mult("r", "t", "r")) == len("r") + 2


def test_sweeps_pass_at_small_radius(ctx):
    # fast versions; the default radii run in the acceptance suite
    assert lemmas.verify_wordsincoxetergroup(ctx, 4).passed
    rep = lemmas.verify_not_both_down(ctx, 5)
    assert rep.passed and rep.notes["clause2_vacuous"] > 0
    assert lemmas.verify_mingallinrep(ctx, 5).passed
    rep = lemmas.verify_subset_lemma(ctx, 6)
    assert rep.passed and rep.notes["boundary_cases"] == 6


def test_every_mutant_fires_at_radius_4(ctx):
    for name, mutants in lemmas.MUTANTS.items():
        fn = lemmas.SWEEPS[name][0]
        for mutant in mutants:
            rep = fn(ctx, 4, mutant=mutant)
            assert len(rep.violations) >= 1, (name, mutant)


def test_unknown_mutant_rejected(ctx):
    with pytest.raises(ValueError):
        lemmas.verify_subset_lemma(ctx, 5, mutant="nope")


def test_radius_preconditions(ctx):
    with pytest.raises(ValueError):
        lemmas.verify_wordsincoxetergroup(ctx, 1)
    with pytest.raises(ValueError):
        lemmas.verify_mingallinrep(ctx, 3)


def test_report_determinism(ctx):
    a = lemmas.verify_not_both_down(ctx, 5).to_dict()
    b = lemmas.verify_not_both_down(ctx, 5).to_dict()
    a.pop("elapsed")
    b.pop("elapsed")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_serialization_fields(ctx):
    rep = lemmas.verify_wordsincoxetergroup(ctx, 3)
    doc = json.loads(rep.to_json())
    for field in ("lemma", "radius", "tuples_checked", "violations", "pass"):
        assert field in doc
