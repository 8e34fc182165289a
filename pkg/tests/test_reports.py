import json

from iltlab import reports


def test_write_text_atomic(tmp_path):
    path = tmp_path / "sub" / "a.txt"
    reports.write_text(str(path), "hello\n")
    assert path.read_text() == "hello\n"
    assert not (tmp_path / "sub" / "a.txt.tmp").exists()


def test_write_json_deterministic(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    reports.write_json(str(p1), {"b": 2, "a": 1})
    reports.write_json(str(p2), {"a": 1, "b": 2})
    assert p1.read_bytes() == p2.read_bytes()
    assert json.loads(p1.read_text()) == {"a": 1, "b": 2}


def test_figures_render_to_files(tmp_path):
    eps = [0.05, 0.02, 0.01]
    reports.figure_moment_scaling(eps, [0.04, 0.06, 0.08],
                                  [0.001] * 3, 0.07, 0.03, "log_linear",
                                  str(tmp_path / "f1.png"))
    reports.figure_moment_scaling(eps, [0.04, 0.06, 0.08],
                                  [0.001] * 3, 1.0, -2.0, "power",
                                  str(tmp_path / "f2.png"))
    reports.figure_epsilon_ladder(eps, [1.0, 1.1, 1.2], "A(eps)",
                                  str(tmp_path / "f3.png"))
    reports.figure_asymptotic_fit([1e3, 1e4, 1e5], [1.0, 2.0, 3.0],
                                  0.1, 0.2, 0.3, "case",
                                  str(tmp_path / "f4.png"))
    entries = [{"eps": e, "a": a, "value": 1.0, "scaled": 1.0 + a}
               for e in eps for a in (0.0, 1.0)]
    reports.figure_lemma_probe(entries, "bnd2", str(tmp_path / "f5.png"))
    for name in ("f1", "f2", "f3", "f4", "f5"):
        f = tmp_path / f"{name}.png"
        assert f.exists() and f.stat().st_size > 1000
    assert not list(tmp_path.glob("*.tmp.png"))


def test_identical_figures_are_byte_identical(tmp_path):
    args = ([0.05, 0.02, 0.01], [1.0, 1.1, 1.2], "A(eps)")
    reports.figure_epsilon_ladder(*args, str(tmp_path / "x.png"))
    reports.figure_epsilon_ladder(*args, str(tmp_path / "y.png"))
    assert (tmp_path / "x.png").read_bytes() == (tmp_path / "y.png").read_bytes()
