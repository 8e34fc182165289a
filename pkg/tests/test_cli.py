import json
import os

import pytest

from iltlab.cli import ConfigError, load_config, main, validate


def _write(tmp_path, text):
    path = tmp_path / "config.toml"
    path.write_text(text)
    return str(path)


def test_defaults_load_without_config():
    cfg = load_config(None, {})
    validate(cfg)
    assert cfg["mc"]["process"] == "brownian"
    assert cfg["verify"]["criteria"] == list(range(1, 11))


def test_overrides_apply():
    cfg = load_config(None, {"out": "elsewhere", "seed": 5, "threads": 3})
    assert cfg["output"]["out_dir"] == "elsewhere"
    assert cfg["mc"]["seed"] == 5 and cfg["verify"]["seed"] == 5
    assert cfg["mc"]["threads"] == 3 and cfg["verify"]["threads"] == 3


def test_unknown_section_and_key_rejected(tmp_path):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "[nope]\nx = 1\n"), {})
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "[mc]\nnope = 1\n"), {})


def test_validation_rules():
    cfg = load_config(None, {})
    cfg["mc"]["epsilons"] = [0.01, 0.02]
    with pytest.raises(ConfigError):
        validate(cfg)
    cfg = load_config(None, {})
    cfg["mc"]["process"] = "cauchy"
    with pytest.raises(ConfigError):
        validate(cfg)
    cfg = load_config(None, {})
    cfg["verify"]["criteria"] = [0, 11]
    with pytest.raises(ConfigError):
        validate(cfg)


def test_bad_config_exits_2_without_outputs(tmp_path):
    cfg = _write(tmp_path, "[mc]\nepsilons = [-0.01]\n")
    out = tmp_path / "out"
    rc = main(["mc", "--config", cfg, "--out", str(out)])
    assert rc == 2
    assert not out.exists()


def test_comb_subcommand_end_to_end(tmp_path):
    cfg = _write(tmp_path, "[comb]\nn_max = 3\nsample_ns = [4]\n"
                           "n_samples = 50\n")
    out = tmp_path / "out"
    rc = main(["comb", "--config", cfg, "--out", str(out)])
    assert rc == 0
    with open(out / "combinatorics.json") as fh:
        summary = json.load(fh)
    assert summary["span_failures"] == []
    assert (out / "effective-config.json").exists()


def test_mc_subcommand_caches_byte_identical(tmp_path):
    cfg = _write(tmp_path, f"""
[output]
cache_dir = "{tmp_path / 'cache'}"

[mc]
epsilons = [0.05, 0.02, 0.01]
n_paths = 100
""")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["mc", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["mc", "--config", cfg, "--out", str(out2)]) == 0
    for name in ("moments.csv", "scaling-fit.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    assert (out1 / "moment-scaling.png").exists()
    assert os.listdir(tmp_path / "cache")
