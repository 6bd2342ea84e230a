import json
import subprocess
import sys

from coxkit.cli import main

TREE_FILE = """\
# the subgroup theorem tree product
vertex v0 U sr
vertex v1 V :st
vertex v2 U trt
edge v0 v1
edge v1 v2
"""


def run_cli(args):
    return main(args)


def test_reduce_command(capsys):
    assert run_cli(["reduce", "--word", "u_sr,1,u_sr,u_t"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "u_t"


def test_trace_command(capsys):
    assert run_cli(["trace", "--word", "u_rt,u_t"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pass"] and doc["data"]["final_counter"] > 0


def test_trace_constraint_violation(capsys):
    assert run_cli(["trace", "--word", "u_s,u_sr"]) == 1


def test_radius_cap(capsys):
    assert run_cli(["verify", "coxeter", "--radius", "99"]) == 2


def test_blueprint_cap(capsys):
    assert run_cli(["verify", "blueprint", "--max-length", "99"]) == 2


def test_bad_residue_spec(capsys):
    assert run_cli(["verify", "section4", "--residue", "zz"]) == 2


def test_usage_error_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "coxkit.cli", "frobnicate"],
        capture_output=True)
    assert proc.returncode == 2


def test_nf_command(tmp_path, capsys):
    tree = tmp_path / "tree.txt"
    tree.write_text(TREE_FILE)
    assert run_cli(["nf", "--tree", str(tree),
                    "--word", "u_sr,u_s,u_sr"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["identity"] is False and doc["syllables"] == 1
    assert run_cli(["nf", "--tree", str(tree),
                    "--word", "u_sr,u_sr"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["identity"] is True
    assert run_cli(["nf", "--tree", str(tree), "--word", "u_xy"]) == 2


def test_report_requires_out(capsys):
    assert run_cli(["report"]) == 2


def test_verify_quadrangle_and_report_determinism(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert run_cli(["verify", "quadrangle", "--out", str(out1)]) == 0
    assert run_cli(["verify", "quadrangle", "--out", str(out2)]) == 0
    capsys.readouterr()

    def strip(doc):
        if isinstance(doc, dict):
            return {k: strip(v) for k, v in doc.items() if k != "elapsed"}
        if isinstance(doc, list):
            return [strip(x) for x in doc]
        return doc

    d1 = strip(json.loads(out1.read_text()))
    d2 = strip(json.loads(out2.read_text()))
    assert d1 == d2


def test_cache_roundtrip(tmp_path, capsys):
    cachedir = tmp_path / "cache"
    assert run_cli(["--cache-dir", str(cachedir), "reduce",
                    "--word", "u_sr,u_t"]) == 0
    assert (cachedir / "normal_forms.tsv").exists()
    first = capsys.readouterr().out
    # second run seeded from the cache gives identical output
    assert run_cli(["--cache-dir", str(cachedir), "reduce",
                    "--word", "u_sr,u_t"]) == 0
    assert capsys.readouterr().out == first
    # and results are identical with the cache deleted
    (cachedir / "normal_forms.tsv").unlink()
    assert run_cli(["reduce", "--word", "u_sr,u_t"]) == 0
    assert capsys.readouterr().out == first


def test_cache_format(tmp_path):
    from coxkit.cache import load, save
    from coxkit.coxeter import Coxeter
    ctx = Coxeter()
    ctx.normalize("tsts")
    path = save(ctx, str(tmp_path))
    lines = open(path).read().splitlines()
    assert lines[0].startswith("coxkit-normal-forms\tv1\torder=rst")
    assert any("\t" in line for line in lines[1:])
    fresh = Coxeter()
    assert load(fresh, str(tmp_path)) > 0
    assert fresh.normalize("tsts") == ctx.normalize("tsts")
