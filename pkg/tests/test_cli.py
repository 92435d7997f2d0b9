"""Batch driver: exit codes, isolation, determinism, explain output."""

import filecmp
import json
import os

from fatbundles.cli import main
from fatbundles.catalog import InstanceSpec, builtin_catalog, run_instance
from fatbundles.serialize import dumps_canonical, parse_vec, vec_to_json


def run_cli(args):
    return main(args)


def test_builtin_catalog_passes(tmp_path, capsys):
    out = tmp_path / "certs"
    assert run_cli(["run", "paper_examples", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "5/5 instances passed" in text
    files = sorted(p.name for p in out.iterdir())
    assert files == ["b2_shift_unit_square.json", "pinched_n2.json",
                     "so41_so4_J.json", "so5_so4_J.json",
                     "so5_u2_J_coupling.json"]
    payload = json.loads((out / "so5_so4_J.json").read_text())
    assert payload["passed"]
    assert payload["certificate"]["verdicts"] == {
        "roots": "fat", "oracle": "fat", "centralizer": "fat"}
    assert payload["certificate"]["min_sv"] == 6.0


def test_failing_expectation_gives_exit_one(tmp_path, capsys):
    catalog = [{
        "id": "so4_so3_wrong",
        "g": {"family": "so", "params": [4]},
        "h": {"type": "so", "params": [3]},
        "Xu": ["1"],
        "run": ["oracle", "centralizer"],
        "expect": "fat",
    }]
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(catalog))
    out = tmp_path / "certs"
    assert run_cli(["run", str(path), "--out", str(out)]) == 1
    payload = json.loads((out / "so4_so3_wrong.json").read_text())
    assert not payload["passed"]
    cert = payload["certificate"]
    assert cert["verdicts"]["oracle"] == "not_fat"
    assert cert["note"] == "odd dimension"
    assert payload["certificate"]["min_sv"] == 0.0


def test_failing_instance_does_not_abort_batch(tmp_path, capsys):
    catalog = [
        {"id": "broken", "g": {"family": "nope", "params": [3]},
         "h": {"type": "so", "params": [2]}, "Xu": ["1"],
         "run": ["oracle"]},
        {"id": "good", "g": {"family": "so", "params": [5]},
         "h": {"type": "so", "params": [4]}, "Xu": ["1", "1"],
         "run": ["roots", "oracle", "centralizer"], "expect": "fat"},
    ]
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(catalog))
    out = tmp_path / "certs"
    assert run_cli(["run", str(path), "--out", str(out), "--jobs", "1"]) == 1
    good = json.loads((out / "good.json").read_text())
    assert good["passed"]
    broken = json.loads((out / "broken.json").read_text())
    assert not broken["passed"] and "error" in broken


def test_empty_catalog_passes(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("[]")
    assert run_cli(["run", str(path), "--out", str(tmp_path / "c")]) == 0
    assert "0/0 instances passed" in capsys.readouterr().out


def test_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('[{"id": "x",}]')
    assert run_cli(["run", str(path), "--out", str(tmp_path / "c")]) == 2
    err = capsys.readouterr().err
    assert "bad.json:1" in err


def test_duplicate_ids_exit_two(tmp_path):
    path = tmp_path / "dup.json"
    entry = {"id": "a", "g": {"family": "so", "params": [4]},
             "h": {"type": "so", "params": [3]}, "Xu": ["1"],
             "run": ["oracle"]}
    path.write_text(json.dumps([entry, entry]))
    assert run_cli(["run", str(path), "--out", str(tmp_path / "c")]) == 2


def test_missing_catalog_exit_two(tmp_path):
    assert run_cli(["run", str(tmp_path / "nope.json"),
                    "--out", str(tmp_path / "c")]) == 2


def test_determinism_byte_identical(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    assert run_cli(["run", "paper_examples", "--out", str(out1)]) == 0
    assert run_cli(["run", "paper_examples", "--out", str(out2)]) == 0
    for name in os.listdir(out1):
        assert filecmp.cmp(out1 / name, out2 / name, shallow=False), name


def test_explain_outputs(tmp_path, capsys):
    out = tmp_path / "certs"
    run_cli(["run", "paper_examples", "--out", str(out)])
    capsys.readouterr()
    assert run_cli(["explain", "so5_so4_J", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "forbidden walls" in text
    assert "alpha(Xu)" in text
    assert "centralizer dimension" in text
    assert run_cli(["explain", "pinched_n2", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "per-frame margins" in text
    assert run_cli(["explain", "b2_shift_unit_square", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "verified: True" in text
    assert run_cli(["explain", "missing_id", "--out", str(out)]) == 2


def test_list_builtins(capsys):
    assert run_cli(["list-builtins"]) == 0
    text = capsys.readouterr().out
    assert "paper_examples" in text and "so5_so4_J" in text


def test_explain_not_fat_witness(tmp_path, capsys):
    catalog = [{
        "id": "wall",
        "g": {"family": "so", "params": [5]},
        "h": {"type": "so", "params": [4]},
        "Xu": ["1", "0"],
        "run": ["roots", "oracle", "centralizer"],
        "expect": "not_fat",
    }]
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(catalog))
    out = tmp_path / "certs"
    assert run_cli(["run", str(path), "--out", str(out)]) == 0
    capsys.readouterr()
    run_cli(["explain", "wall", "--out", str(out)])
    text = capsys.readouterr().out
    assert "witness_root" in text
    assert "<-- wall" in text


def test_instance_spec_round_trip():
    for spec in builtin_catalog("paper_examples"):
        again = InstanceSpec.from_json(spec.to_json())
        assert again == spec


def test_run_instance_samples_batch():
    spec = InstanceSpec(
        id="batched", g_family="so", g_params=(5,), h_type="so",
        h_params=(4,), xu_torus=parse_vec(["1", "1"]), expect="fat",
        samples=25, seed=3)
    ok, payload = run_instance(spec)
    assert ok
    assert payload["batch"]["samples"] == 25
    assert payload["batch"]["fat"] + payload["batch"]["not_fat"] == 25


def test_canonical_json_stable():
    obj = {"b": 1.5, "a": [1, 2], "c": {"y": None, "x": "1/2"}}
    assert dumps_canonical(obj) == dumps_canonical(json.loads(
        dumps_canonical(obj)))


def test_vec_serialization_round_trip():
    from fractions import Fraction as Q
    v = (Q(1, 2), Q(-3), Q(0), Q(7, 3))
    assert parse_vec(vec_to_json(v)) == v


def test_triple_equivalence_builtin_catalog(tmp_path):
    out = tmp_path / "certs"
    assert run_cli(["run", "triple_equivalence", "--out", str(out)]) == 0
    payload = json.loads((out / "so7_so6.json").read_text())
    assert payload["passed"]
    assert payload["batch"]["samples"] == 200


def test_duality_builtin_catalog_and_explain(tmp_path, capsys):
    out = tmp_path / "certs"
    assert run_cli(["run", "duality", "--out", str(out)]) == 0
    payload = json.loads((out / "dual_so41.json").read_text())
    assert payload["dual"]["fraction"] == 1.0
    capsys.readouterr()
    assert run_cli(["explain", "dual_so41", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "200/200 agree" in text


def test_negative_tolerance_rejected(tmp_path):
    catalog = [{"id": "x", "g": {"family": "so", "params": [4]},
                "h": {"type": "so", "params": [3]}, "Xu": ["1"],
                "run": ["oracle"], "tol": -1.0}]
    path = tmp_path / "bad_tol.json"
    path.write_text(json.dumps(catalog))
    assert run_cli(["run", str(path), "--out", str(tmp_path / "c")]) == 2


def test_unknown_run_kind_rejected(tmp_path):
    catalog = [{"id": "x", "g": {"family": "so", "params": [4]},
                "h": {"type": "so", "params": [3]}, "Xu": ["1"],
                "run": ["orackle"]}]
    path = tmp_path / "bad_run.json"
    path.write_text(json.dumps(catalog))
    assert run_cli(["run", str(path), "--out", str(tmp_path / "c")]) == 2


def test_coupling_payload_is_strict_json(tmp_path):
    out = tmp_path / "certs"
    run_cli(["run", "paper_examples", "--out", str(out)])
    text = (out / "so5_u2_J_coupling.json").read_text()
    assert "Infinity" not in text and "NaN" not in text
    payload = json.loads(text)
    assert payload["coupling"]["blocks"]["fiber_min_sv"] is None
