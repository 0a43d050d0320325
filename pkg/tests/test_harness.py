import json
import subprocess
import sys
from fractions import Fraction

import pytest

from gaudinlab.cache import cache_gc, cached_irrep
from gaudinlab.cli import main
from gaudinlab.config import EXPERIMENTS, ConfigError, load_config, parse_config
from gaudinlab.experiments import REGISTRY, describe
from gaudinlab.harness import dumps_csv, dumps_report, run
from gaudinlab.liealg import build_sl


def test_config_defaults_and_rank():
    cfg = parse_config({"experiment": "commutativity", "algebra": {"family": "sl", "rank": 2}})
    assert cfg.r == 3
    assert parse_config({"experiment": "commutativity", "algebra": {"r": 3}}).r == 3
    with pytest.raises(ConfigError) as exc:
        parse_config({"experiment": "commutativity", "algebra": {"r": 3, "rank": 1}})
    assert exc.value.path == "algebra.rank"


@pytest.mark.parametrize(
    "doc,path",
    [
        ({"experiment": "commutativity", "z": [0, 1, 1]}, "z"),
        ({"experiment": "nope"}, "experiment"),
        ({"experiment": "spectrum", "z": [0, 0.5]}, "z[1]"),
        ({"experiment": "spectrum", "mu": {"q": 1}}, "mu.q"),
        ({"experiment": "spectrum", "weights": [[1, 0]]}, "weights[0]"),
        ({"experiment": "spectrum", "weights": [[-1]]}, "weights[0]"),
        ({"experiment": "spectrum", "colour": 1}, "colour"),
        ({"experiment": "spectrum", "tolerance": {"gap": -1}}, "tolerance.gap"),
        ({"experiment": "spectrum", "family": "cubic"}, "family"),
        ({"experiment": "spectrum", "weights": [1, 1], "z": [0, 1, 2]}, "z"),
        ({}, "experiment"),
    ],
)
def test_config_errors_name_the_field(doc, path):
    with pytest.raises(ConfigError) as exc:
        parse_config(doc)
    assert exc.value.path == path


def test_config_hash_and_file(tmp_path):
    doc = {"experiment": "spectrum", "weights": [1, 1], "z": ["0", "1/2"], "mu": {"h": 1}, "seed": 3}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(doc))
    cfg = load_config(p)
    assert cfg.z == (Fraction(0), Fraction(1, 2))
    assert cfg.hash() == parse_config(dict(doc, jobs=4, output="x")).hash()
    assert cfg.hash() != parse_config(dict(doc, seed=4)).hash()
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)


def test_every_experiment_is_registered():
    assert set(REGISTRY) == set(EXPERIMENTS)
    assert "Theorem 6" in describe("verma-limit")
    for name in EXPERIMENTS:
        assert describe(name).startswith(name)


@pytest.mark.parametrize("name", ["commutativity", "spectrum", "translation-check", "one-point"])
def test_reports_are_byte_identical(name, tmp_path):
    cfg = parse_config({"experiment": name, "seed": 11})
    a = run(cfg, tmp_path / "a")
    b = run(cfg, tmp_path / "b")
    for k in ("json", "csv"):
        with open(a.paths[k], "rb") as fa, open(b.paths[k], "rb") as fb:
            assert fa.read() == fb.read()
    assert a.exit_code == 0
    assert a.paths["json"].endswith(f"{name}-{cfg.hash()}.json")
    rec = json.loads(open(a.paths["record"]).read())
    assert rec["status"] == "ok" and rec["finished"] >= rec["started"]


def test_report_content(tmp_path):
    cfg = parse_config({"experiment": "spectrum", "weights": [1, 1], "z": [0, 1], "mu": {"h": 0}})
    rec = run(cfg, tmp_path)
    report = json.loads(open(rec.paths["json"]).read())
    assert report["schema_version"] == 1
    assert report["config_hash"] == cfg.hash()
    assert "started" not in report
    csv_text = open(rec.paths["csv"]).read().splitlines()
    assert len(csv_text) == 1 + 2  # header plus the two singular eigenvectors


def test_dumps_report_format():
    text = dumps_report({"b": 0.1, "a": [1, float("nan")], "c": {"x": True}})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text
    assert "null" in text
    assert json.loads(text)["c"] == {"x": True}


def test_dumps_csv():
    assert dumps_csv(["a", "b"], [[1, 0.5], [2, float("inf")]]) == "a,b\n1,0.5\n2,\n"


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["commutativity", "--out", str(tmp_path)]) == 0
    assert main(["commutativity", "--z", "0,1,1"]) == 2
    err = capsys.readouterr().err
    assert "usage error" in err and "z" in err
    assert main(["spectrum", "--weights", "1", "1", "--z", "0,1", "--mu", "h=1", "--print"]) == 0
    assert main(["describe", "verma-limit"]) == 0
    assert "Theorem 6" in capsys.readouterr().out
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_cli_config_override(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"experiment": "spectrum", "weights": [[1], [1]], "z": [0, 1], "seed": 5}))
    assert main(["spectrum", "--config", str(p), "--seed", "6", "--out", str(tmp_path)]) == 0
    files = list(tmp_path.glob("spectrum-*.json"))
    report = json.loads([f for f in files if not f.name.endswith(".run.json")][0].read_text())
    assert report["config"]["seed"] == 6


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "gaudinlab", "describe", "gt-limit"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("gt-limit")


def test_cache_gc(tmp_path):
    assert cache_gc(tmp_path)["entries"] == 0
    with pytest.raises(FileNotFoundError):
        cache_gc(tmp_path / "missing")
    cached_irrep(build_sl(2), 2, tmp_path)
    cached_irrep(build_sl(3), (1, 0), tmp_path)
    info = cache_gc(tmp_path, prefix="irrep-sl2")
    assert info["entries"] == 1 and info["keys"][0].startswith("irrep-sl2-2-")
    all_info = cache_gc(tmp_path, delete=True)
    assert all_info["entries"] == 2 and all_info["deleted"]
    assert cache_gc(tmp_path)["entries"] == 0
