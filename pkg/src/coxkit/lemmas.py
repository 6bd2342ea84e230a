"""Exhaustive ball sweeps for the length/root lemmas of the (4,4,4) system.

Each sweep quantifies over a ball in W and all six ordered labelings of
the generators, reports every concrete counterexample tuple, and carries
its radius: a clean sweep is evidence on that ball, not a proof over W.

Every sweep accepts a registered mutant name which perturbs the claim;
the mutation harness checks that each mutant produces violations at
radius 4, guarding against vacuous quantifier ranges.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field

from coxkit.coxeter import Coxeter
from coxkit.roots import RootSystem

LABELINGS = tuple("".join(p) for p in itertools.permutations("rst"))

MUTANTS = {
    "wordsincoxetergroup": ("plus_two",),
    "not_both_down": ("both_up",),
    "mingallinrep": ("swap_containment",),
    "subset_lemma": ("opposite_target",),
}


@dataclass
class SweepReport:
    lemma: str
    radius: int
    tuples_checked: int = 0
    violations: list = field(default_factory=list)
    elapsed: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "radius": self.radius,
            "tuples_checked": self.tuples_checked,
            "violations": self.violations,
            "pass": self.passed,
            "notes": self.notes,
            "elapsed": round(self.elapsed, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _unknown_mutant(lemma: str, mutant) -> None:
    if mutant is not None and mutant not in MUTANTS[lemma]:
        raise ValueError(f"unknown mutant {mutant!r} for {lemma}")


def verify_wordsincoxetergroup(ctx: Coxeter, radius: int,
                               mutant: str | None = None) -> SweepReport:
    """l(w w' r f) = l(w) + l(w') + 1 + l(f) whenever l(ws) = l(w)+1 = l(wt),
    w' in <s,t> with l(w') >= 2 and f in {1, s, t}."""
    _unknown_mutant("wordsincoxetergroup", mutant)
    if radius < 2:
        raise ValueError("radius must be >= 2")
    rep = SweepReport("wordsincoxetergroup", radius)
    t0 = time.perf_counter()
    bump = 2 if mutant == "plus_two" else 1
    ball = ctx.ball(radius)
    for lab in LABELINGS:
        r, s, t = lab
        dihedral = [x for x in ctx.parabolic({s, t}) if len(x) >= 2]
        for w in ball:
            if len(ctx.mult_gen(w, s)) != len(w) + 1:
                continue
            if len(ctx.mult_gen(w, t)) != len(w) + 1:
                continue
            for wp in dihedral:
                base = ctx.mult(w, wp, r)
                for f in ("", s, t):
                    rep.tuples_checked += 1
                    expect = len(w) + len(wp) + bump + len(f)
                    got = len(ctx.mult(base, f))
                    if got != expect:
                        rep.violations.append(
                            {"labeling": lab, "w": w, "w'": wp, "f": f,
                             "expected": expect, "got": got})
    rep.elapsed = time.perf_counter() - t0
    return rep


def verify_not_both_down(ctx: Coxeter, radius: int,
                         mutant: str | None = None) -> SweepReport:
    """l(w)+2 in {l(wsr), l(wtr)}; and if l(wsr) = l(w) then l(wsrt) = l(w)+1."""
    _unknown_mutant("not_both_down", mutant)
    if radius < 1:
        raise ValueError("radius must be >= 1")
    rep = SweepReport("not_both_down", radius)
    t0 = time.perf_counter()
    vacuous = 0
    ball = ctx.ball(radius)
    for lab in LABELINGS:
        r, s, t = lab
        for w in ball:
            if len(ctx.mult_gen(w, s)) != len(w) + 1:
                continue
            if len(ctx.mult_gen(w, t)) != len(w) + 1:
                continue
            rep.tuples_checked += 1
            lsr = len(ctx.mult(w, s, r))
            ltr = len(ctx.mult(w, t, r))
            if mutant == "both_up":
                ok = lsr == len(w) + 2 and ltr == len(w) + 2
            else:
                ok = len(w) + 2 in (lsr, ltr)
            if not ok:
                rep.violations.append(
                    {"labeling": lab, "w": w, "clause": 1,
                     "l(wsr)": lsr, "l(wtr)": ltr})
            if lsr == len(w):
                rep.tuples_checked += 1
                if len(ctx.mult(w, s, r, t)) != len(w) + 1:
                    rep.violations.append(
                        {"labeling": lab, "w": w, "clause": 2,
                         "l(wsrt)": len(ctx.mult(w, s, r, t))})
            else:
                vacuous += 1
    rep.notes["clause2_vacuous"] = vacuous
    rep.elapsed = time.perf_counter() - t0
    return rep


def verify_mingallinrep(ctx: Coxeter, radius: int,
                        mutant: str | None = None) -> SweepReport:
    """For minimal galleries of type (r,s,t,r): the first crossed root
    (oriented to contain the start chamber) is strictly contained in the
    third-step and fourth-step roots.  Checked both by membership on the
    ball and by the exact form criterion; the two verdicts must agree."""
    _unknown_mutant("mingallinrep", mutant)
    if radius < 4:
        raise ValueError("radius must be >= 4")
    rep = SweepReport("mingallinrep", radius)
    t0 = time.perf_counter()
    rs = RootSystem(ctx)
    ball = ctx.ball(radius)
    for lab in LABELINGS:
        r, s, t = lab
        for d0 in ctx.ball(radius - 4):
            beta = rs.root_from(d0, r)
            d2 = ctx.mult(d0, r, s)
            d3 = ctx.mult(d2, t)
            gammas = [rs.root_from(d2, t), rs.root_from(d3, r)]
            for which, gamma in enumerate(gammas):
                rep.tuples_checked += 1
                if mutant == "swap_containment":
                    small, large = gamma, beta
                else:
                    small, large = beta, gamma
                if small.refl == large.refl:
                    rep.violations.append(
                        {"labeling": lab, "d0": d0, "gamma": which,
                         "reason": "walls coincide"})
                    continue
                counterexample = next(
                    (x for x in ball
                     if rs.member(x, small) and not rs.member(x, large)), None)
                pc = rs.pair_class(small, large)
                form_nested = pc.kind == "nested" and pc.contained == small
                if counterexample is not None or not form_nested:
                    rep.violations.append(
                        {"labeling": lab, "d0": d0, "gamma": which,
                         "ball_counterexample": counterexample,
                         "form_kind": pc.kind})
                elif (counterexample is None) != form_nested:
                    rep.violations.append(
                        {"labeling": lab, "d0": d0, "gamma": which,
                         "reason": "ball and form verdicts disagree"})
    rep.elapsed = time.perf_counter() - t0
    return rep


def verify_subset_lemma(ctx: Coxeter, radius: int,
                        mutant: str | None = None) -> SweepReport:
    """tstr*alpha_s  intersect  stsr*alpha_t, minus the single chamber
    r_{st}r, is contained in r_{st}*alpha_r."""
    _unknown_mutant("subset_lemma", mutant)
    if radius < 5 and mutant is None:
        raise ValueError("radius must be >= 5")
    rep = SweepReport("subset_lemma", radius)
    t0 = time.perf_counter()
    rs = RootSystem(ctx)
    ball = ctx.ball(radius)
    boundary = 0
    for lab in LABELINGS:
        r, s, t = lab
        hyp1 = rs.root_from(ctx.normalize(t + s + t + r), s)
        hyp2 = rs.root_from(ctx.normalize(s + t + s + r), t)
        r_st = ctx.longest({s, t})
        excluded = ctx.mult(r_st, r)
        target = rs.root_from(r_st, r)
        if mutant == "opposite_target":
            target = rs.opposite(target)
        for w in ball:
            rep.tuples_checked += 1
            if not (rs.member(w, hyp1) and rs.member(w, hyp2)):
                continue
            if w == excluded:
                boundary += 1
                continue
            if not rs.member(w, target):
                rep.violations.append({"labeling": lab, "w": w})
    rep.notes["boundary_cases"] = boundary
    rep.elapsed = time.perf_counter() - t0
    return rep


SWEEPS = {
    "wordsincoxetergroup": (verify_wordsincoxetergroup, 6),
    "not_both_down": (verify_not_both_down, 7),
    "mingallinrep": (verify_mingallinrep, 8),
    "subset_lemma": (verify_subset_lemma, 10),
}


def run_all(ctx: Coxeter, radii: dict | None = None) -> list[SweepReport]:
    radii = radii or {}
    return [fn(ctx, radii.get(name, default))
            for name, (fn, default) in SWEEPS.items()]
