"""Suite runners shared by the command line and the acceptance tests.

Each runner returns a JSON-ready dict with a top-level "pass" flag;
emit_report aggregates them into one deterministic document (equal runs
differ only in the elapsed fields).
"""

from __future__ import annotations

import time

import coxkit
from coxkit import lemmas, wordops
from coxkit.blueprint import GroupCache, gallery_independence
from coxkit.coxeter import Coxeter
from coxkit.pipeline import section4_pipeline
from coxkit.quadrangle import build_model, verify_rt_relabel

BALL_PINS = {2: 10, 4: 43}


def run_coxeter(ctx: Coxeter, radius: int = 8, sweep_radii: dict | None = None) -> dict:
    out = {"suite": "coxeter", "radius": radius}
    t0 = time.perf_counter()
    balls = []
    ok = True
    for L in range(radius + 1):
        got = len(ctx.ball(L))
        oracle = ctx.ball_oracle_size(L)
        pinned = BALL_PINS.get(L)
        good = got == oracle and (pinned is None or got == pinned)
        ok = ok and good
        balls.append({"radius": L, "size": got, "oracle": oracle, "pass": good})
    out["ball_checks"] = balls
    sweeps = {}
    for name, (fn, default) in lemmas.SWEEPS.items():
        rad = (sweep_radii or {}).get(name, default)
        rep = fn(ctx, rad)
        sweeps[name] = rep.to_dict()
        ok = ok and rep.passed
    out["sweeps"] = sweeps
    out["pass"] = ok
    out["elapsed"] = round(time.perf_counter() - t0, 3)
    return out


def run_blueprint(ctx: Coxeter, max_length: int = 7) -> dict:
    out = {"suite": "blueprint", "max_length": max_length}
    t0 = time.perf_counter()
    cache = GroupCache(ctx)
    ok = True
    orders = []
    for w in ctx.ball(max_length):
        grp = cache.group(w)
        good = grp.order == 2 ** len(w)
        try:
            grp.certify_order(all_galleries=True)
        except Exception as exc:   # noqa: BLE001 - recorded, not raised
            good = False
            orders.append({"w": w, "error": str(exc)})
        ok = ok and good
    out["groups_certified"] = len(ctx.ball(max_length))
    gi_bound = min(max_length - 1, 6)
    gi_fail = [w for w in ctx.ball(gi_bound) if not gallery_independence(cache, w)]
    ok = ok and not gi_fail
    out["gallery_independence_radius"] = gi_bound
    out["gallery_independence_failures"] = gi_fail
    v = cache.v_subgroup("", "st")
    amb = cache.group("stst")
    us, ut = amb.root_mask(amb.roots[0]), amb.root_mask(amb.roots[3])
    listing = {0, us, ut, amb.mul(us, ut), amb.mul(ut, us),
               amb.mul(amb.mul(us, ut), us), amb.mul(amb.mul(ut, us), ut),
               amb.mul(amb.mul(us, ut), amb.mul(us, ut))}
    v_ok = v.elements == frozenset(listing) and v.order == 8 \
        and amb.order // v.order == 2
    ok = ok and v_ok
    out["v_listing"] = v_ok
    out["problems"] = orders
    out["pass"] = ok
    out["elapsed"] = round(time.perf_counter() - t0, 3)
    return out


def run_quadrangle() -> dict:
    out = {"suite": "quadrangle"}
    t0 = time.perf_counter()
    model = build_model(("s", "t"))
    ok = (len(model.elems) == 720 and len(model.borel_plus) == 16
          and len(model.chambers(-1)) == 45
          and len(model.panel(model.c_minus, "s")) == 3)
    out["model"] = {"group": len(model.elems), "borel": len(model.borel_plus),
                    "chambers": 45, "panel": 3, "pass": ok}
    reports = {}
    for name, rep in (("axioms", model.verify_axioms()),
                      ("diagram", model.verify_diagram()),
                      ("uplus", model.verify_lemma_uplus()),
                      ("root_fixings", model.verify_root_group_fixings()),
                      ("rt_relabel", verify_rt_relabel())):
        reports[name] = rep.to_dict()
        ok = ok and rep.passed
    out["reports"] = reports
    out["pass"] = ok
    out["elapsed"] = round(time.perf_counter() - t0, 3)
    return out


def run_section4(ctx: Coxeter, residues: list | None = None) -> dict:
    out = {"suite": "section4"}
    t0 = time.perf_counter()
    certs = section4_pipeline(GroupCache(ctx), residues)
    out["certificates"] = [c.to_dict() for c in certs]
    out["assumptions"] = sorted({a for c in certs for a in c.assumptions})
    out["pass"] = all(c.passed for c in certs)
    out["elapsed"] = round(time.perf_counter() - t0, 3)
    return out


SUITE_RUNNERS = {
    "coxeter": lambda ctx, cfg: run_coxeter(ctx, cfg.get("radius", 8)),
    "blueprint": lambda ctx, cfg: run_blueprint(ctx, cfg.get("max_length", 7)),
    "quadrangle": lambda ctx, cfg: run_quadrangle(),
    "section4": lambda ctx, cfg: run_section4(ctx, cfg.get("residues")),
}


def emit_report(results: dict, config: dict) -> dict:
    return {
        "tool": f"coxkit {coxkit.__version__}",
        "kernel": wordops.IMPL,
        "config": {k: config[k] for k in sorted(config)},
        "suites": {k: results[k] for k in sorted(results)},
        "pass": all(r.get("pass") for r in results.values()),
    }
