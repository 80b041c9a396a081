import json
import os

import pytest

from hbdiff.cli import main
from hbdiff.formats import read_graph

SMALL = {
    "n_max": 300, "n_components": 3, "n_interconnect": 4, "important_per_group": [3, 5, 2],
    "n_hbedges": 40, "max_support_cardinality": 8, "seed": 7,
}
DATA_FILES = ["graph.json", "trace.csv", "walk.csv", "sweep.csv", "vertices.csv", "hbedges.csv",
              "graph.dot", "summary.json"]


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(SMALL))
    return str(p)


def test_subcommands_chain(tmp_path, cfg_path, capsys):
    g = str(tmp_path / "g.json")
    tr = str(tmp_path / "t.csv")
    wk = str(tmp_path / "w.csv")
    assert main(["generate", "--config", cfg_path, "--out", g]) == 0
    assert main(["diffuse", "--graph", g, "--steps", "5", "--trace", tr]) == 0
    assert main(["walk", "--graph", g, "--walks", "3", "--seed", "1", "--out", wk]) == 0
    assert main(["eval", "--graph", g, "--trace", tr, "--walk", wk, "--out", str(tmp_path / "s.csv"),
                 "--vertices", str(tmp_path / "v.csv"), "--hbedges", str(tmp_path / "e.csv")]) == 0
    assert main(["export", "--graph", g, "--trace", tr, "--dot", str(tmp_path / "g.dot")]) == 0
    out = capsys.readouterr().out
    assert "spearman_alpha_mdegree" in out
    doc = read_graph(g)
    assert doc.provenance["seed"] == 7
    assert doc.labels is not None
    assert (tmp_path / "g.dot").read_text().startswith("graph hbgraph {")


def test_seed_override(tmp_path, cfg_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["generate", "--config", cfg_path, "--seed", "11", "--out", a]) == 0
    assert main(["generate", "--config", cfg_path, "--seed", "12", "--out", b]) == 0
    assert read_graph(a).provenance["seed"] == 11
    assert read_graph(a).graph != read_graph(b).graph


def test_pipeline_deterministic(tmp_path, cfg_path):
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    for d in (d1, d2):
        assert main(["pipeline", "--config", cfg_path, "--walks", "5", "--out-dir", str(d)]) == 0
    for name in DATA_FILES:
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes(), name


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["diffuse", "--graph", "x.json", "--steps", "0", "--trace", "t.csv"],
        ["walk", "--graph", "x.json", "--beta", "1.5", "--out", "w.csv"],
        ["walk", "--graph", "x.json", "--walks", "many", "--out", "w.csv"],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == 2


def test_io_error(tmp_path):
    assert main(["diffuse", "--graph", str(tmp_path / "missing.json"), "--trace", "t.csv"]) == 3


def test_domain_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert main(["diffuse", "--graph", str(bad), "--trace", str(tmp_path / "t.csv")]) == 4
    assert "error[domain]: ParseError" in capsys.readouterr().err
    bad.write_text(json.dumps({"schema_version": 1, "vertices": [{"id": "a"}],
                               "hbedges": [{"id": "e", "weight": 0, "members": {"a": 1}}]}))
    assert main(["diffuse", "--graph", str(bad), "--trace", str(tmp_path / "t.csv")]) == 4
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({**SMALL, "n_interconnect": 1}))
    assert main(["generate", "--config", str(cfg), "--out", str(tmp_path / "g.json")]) == 4
    assert not os.path.exists(tmp_path / "g.json")
