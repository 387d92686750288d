import csv
import json
from pathlib import Path

import pytest

from residuevc.cli import main
from residuevc.field import log2_floor
from residuevc.primes import primes_in_range


def read_csv(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_vcdim_empty_range(tmp_path):
    out = tmp_path / "v"
    assert main(["vcdim", "--range", "14:16", "--out-dir", str(out)]) == 0
    rows = read_csv(out / "vcdim.csv")
    assert rows == []
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "vcdim"
    for artifact in manifest["outputs"]:
        assert Path(artifact).exists()


def test_vcdim_small_range(tmp_path):
    out = tmp_path / "v"
    assert main(["vcdim", "--range", "5:31", "--convention", "zero-in",
                 "--out-dir", str(out)]) == 0
    rows = read_csv(out / "vcdim.csv")
    assert [int(r["q"]) for r in rows] == primes_in_range(5, 31)
    for r in rows:
        q, vcdim = int(r["q"]), int(r["vcdim"])
        assert vcdim in (log2_floor(q) - 1, log2_floor(q))
        assert r["convention"] == "zero-in"
        assert r["exact"] == "true"
        witness = [int(v) for v in r["witness"].split(";")]
        assert len(witness) == vcdim
    svg = (out / "vcdim.svg").read_text()
    assert svg.startswith("<?xml") and "<circle" in svg and "<polyline" in svg


def test_vcdim_resume_completes_missing(tmp_path):
    out = tmp_path / "v"
    assert main(["vcdim", "--range", "5:13", "--out-dir", str(out)]) == 0
    first = read_csv(out / "vcdim.csv")
    assert main(["vcdim", "--range", "5:31", "--resume",
                 "--out-dir", str(out)]) == 0
    rows = read_csv(out / "vcdim.csv")
    assert sorted(int(r["q"]) for r in rows) == primes_in_range(5, 31)
    assert len(rows) == len(set(r["q"] for r in rows))
    assert rows[: len(first)] == first  # old rows untouched


def test_vcdim_early_exit_lower_bounds(tmp_path):
    out = tmp_path / "v"
    assert main(["vcdim", "--range", "5:120", "--early-exit",
                 "--out-dir", str(out)]) == 0
    for r in read_csv(out / "vcdim.csv"):
        assert int(r["vcdim"]) >= log2_floor(int(r["q"])) - 1


def test_ap_rows(tmp_path):
    out = tmp_path / "a"
    assert main(["ap", "--range", "5:11", "--out-dir", str(out)]) == 0
    rows = read_csv(out / "ap.csv")
    assert [int(r["q"]) for r in rows] == [5, 7, 11]
    for r in rows:
        assert 1 <= int(r["longest"]) <= log2_floor(int(r["q"]))
    assert (out / "ap.svg").exists()


def test_prob_deterministic_and_empty(tmp_path):
    out1, out2 = tmp_path / "p1", tmp_path / "p2"
    args = ["prob", "--n", "5:5", "--trials", "30", "--density", "6",
            "--seed", "42"]
    assert main(args + ["--out-dir", str(out1)]) == 0
    assert main(args + ["--out-dir", str(out2)]) == 0
    a = (out1 / "prob_n5.csv").read_bytes()
    b = (out2 / "prob_n5.csv").read_bytes()
    assert a == b  # byte-identical reruns
    out3 = tmp_path / "p3"
    assert main(["prob", "--n", "5:5", "--density", "0",
                 "--out-dir", str(out3)]) == 0
    assert read_csv(out3 / "prob_n5.csv") == []


def test_prob_csv_schema(tmp_path):
    out = tmp_path / "p"
    assert main(["prob", "--n", "5:5", "--trials", "20", "--density", "5",
                 "--seed", "1", "--out-dir", str(out)]) == 0
    rows = read_csv(out / "prob_n5.csv")
    for r in rows:
        assert r["n"] == "5"
        assert 0.7 <= float(r["ratio"]) <= 0.85
        assert 0.0 <= float(r["p_hat"]) <= 1.0
        assert int(r["hits"]) <= int(r["trials"])


def test_verify_exit_zero(tmp_path):
    out = tmp_path / "w"
    assert main(["verify", "--q-max", "31", "--r", "2,3", "--n-max", "2",
                 "--samples", "100", "--out-dir", str(out)]) == 0
    rows = read_csv(out / "verify.csv")
    assert all(r["status"] == "ok" for r in rows)
    assert {r["check"] for r in rows} == {"weil", "equidistribution",
                                          "shattering"}


def test_verify_trivial_range(tmp_path):
    out = tmp_path / "w"
    assert main(["verify", "--q-max", "3", "--out-dir", str(out)]) == 0
    assert read_csv(out / "verify.csv") == []


def test_verify_skips_non_dividing_r(tmp_path):
    out = tmp_path / "w"
    assert main(["verify", "--q-max", "11", "--r", "5", "--n-max", "2",
                 "--out-dir", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    skipped = [i for i in manifest["items"] if i["status"] == "skipped"]
    # 5 divides q-1 only for q = 11 in this range
    assert {i["q"] for i in skipped} == {5, 7}
    rows = read_csv(out / "verify.csv")
    assert {int(r["q"]) for r in rows} == {11}


def test_manifest_references_every_artifact(tmp_path):
    out = tmp_path / "m"
    assert main(["prob", "--n", "5:6", "--trials", "10", "--density", "3",
                 "--seed", "2", "--out-dir", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    listed = {Path(p).name for p in manifest["outputs"]}
    produced = {p.name for p in out.iterdir()} - {"manifest.json"}
    assert listed == produced
    assert manifest["tool_version"]
    assert manifest["started_at"] and manifest["finished_at"]


def test_bad_range_rejected():
    with pytest.raises(SystemExit):
        main(["vcdim", "--range", "oops"])


def test_out_dir_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("RESIDUEVC_OUT", str(tmp_path / "envout"))
    assert main(["ap", "--range", "5:7"]) == 0
    assert (tmp_path / "envout" / "ap" / "ap.csv").exists()
