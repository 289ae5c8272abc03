import json
import subprocess
import sys
from pathlib import Path

import pytest

from semqg.cli import main

from conftest import DOCS, GOLDEN


def run_cli(args, **kwargs):
    return main(list(args))


def test_build_graph_dp_matches_tagged_golden(tmp_path):
    out = tmp_path / "g.json"
    code = run_cli(
        [
            "build-graph",
            "--format",
            "dp",
            "--in",
            str(DOCS / "f04_shared_argument.json"),
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert out.read_bytes() == (GOLDEN / "f04_shared_argument.dp.tagged.json").read_bytes()


def test_build_graph_srl_and_dot(tmp_path):
    out = tmp_path / "g.json"
    dot = tmp_path / "g.dot"
    code = run_cli(
        ["build-graph", "--format", "srl", "--in", str(DOCS / "f01_minimal_tuple.json"),
         "--out", str(out), "--dot", str(dot)]
    )
    assert code == 0
    assert dot.read_text().startswith("digraph semantic_graph {")
    graph = json.loads(out.read_text())
    assert {n["type"] for n in graph["nodes"]} == {"ARGUMENT", "VERB", "MODIFIER"}
    # answer tagging ran: "yesterday" is the answer
    assert any(n["answer"] for n in graph["nodes"])


def test_build_graph_prune_rels_flag(tmp_path):
    out = tmp_path / "g.json"
    code = run_cli(
        ["build-graph", "--format", "dp", "--in", str(DOCS / "f05_appendix_triple.json"),
         "--out", str(out), "--prune-rels", "punct,prep"]
    )
    assert code == 0
    graph = json.loads(out.read_text())
    texts = {tuple(n["text"]) for n in graph["nodes"]}
    assert ("a", "leading", "member") in texts


def test_build_graph_validation_failure_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    doc = json.loads((DOCS / "f01_minimal_tuple.json").read_text())
    doc["coref"] = [{"mentions": [{"s": 0, "start": 0, "end": 1}]}]
    bad.write_text(json.dumps(doc))
    code = run_cli(["build-graph", "--format", "dp", "--in", str(bad), "--out", str(tmp_path / "x")])
    assert code == 1
    assert "violation" in capsys.readouterr().err


def test_build_graph_schema_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"sentences": []}')
    code = run_cli(["build-graph", "--format", "dp", "--in", str(bad), "--out", str(tmp_path / "x")])
    assert code == 1
    assert "srl" in capsys.readouterr().err


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build-graph", "--nonsense"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_gradcheck_module_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gradcheck", "--module", "bogus"])
    assert exc.value.code == 2


def test_byte_identical_reruns(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        assert run_cli(
            ["build-graph", "--format", "dp", "--in", str(DOCS / "f03_airports.json"), "--out", str(out)]
        ) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_stats_table(tmp_path, capsys):
    g1 = tmp_path / "a.json"
    g2 = tmp_path / "b.json"
    run_cli(["build-graph", "--format", "dp", "--in", str(DOCS / "f03_airports.json"), "--out", str(g1)])
    run_cli(["build-graph", "--format", "srl", "--in", str(DOCS / "f03_airports.json"), "--out", str(g2)])
    capsys.readouterr()
    code = run_cli(["stats", "--in", str(g1), str(g2)])
    assert code == 0
    out = capsys.readouterr().out
    assert "nodes" in out and "tok/node" in out and "TOTAL" in out


def _write_synth_dataset(path: Path, n: int):
    from semqg.annotations import to_json
    from semqg.synthdata import make_corpus

    path.mkdir(parents=True, exist_ok=True)
    for name, doc in make_corpus(n):
        (path / f"{name}.json").write_bytes(to_json(doc))


TRAIN_CFG = {
    "learning_rate": 0.01,
    "batch_size": 4,
    "max_epochs": 2,
    "seed": 5,
    "word_dim": 6,
    "enc_hidden": 4,
    "dec_hidden": 8,
    "K": 1,
    "graph_format": "srl",
    "dropout_encoder": 0.0,
    "dropout_decoder": 0.0,
    "dropout_attention": 0.0,
}


def test_train_eval_analyze_roundtrip(tmp_path, capsys):
    data = tmp_path / "data"
    _write_synth_dataset(data, 6)
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(TRAIN_CFG))
    ckpt = tmp_path / "model.ckpt"

    code = run_cli(["train", "--data", str(data), "--config", str(cfg_path), "--out", str(ckpt)])
    assert code == 0
    assert ckpt.exists()
    metrics_lines = (tmp_path / "model.ckpt.metrics.jsonl").read_text().strip().splitlines()
    assert len(metrics_lines) == 2
    rec = json.loads(metrics_lines[-1])
    assert {"epoch", "train_loss", "val_loss", "cs_accuracy", "ratio", "entropy"} <= set(rec)
    capsys.readouterr()

    code = run_cli(["eval", "--ckpt", str(ckpt), "--data", str(data), "--max-len", "12"])
    assert code == 0
    result = json.loads(capsys.readouterr().out)
    assert set(result) == {"bleu1", "bleu2", "bleu3", "bleu4", "examples"}
    assert result["examples"] == 6

    code = run_cli(["analyze", "--ckpt", str(ckpt), "--data", str(data)])
    assert code == 0
    analysis = json.loads(capsys.readouterr().out)
    assert set(analysis) == {"ratio", "entropy"}


def test_train_flag_overrides_config(tmp_path, capsys):
    data = tmp_path / "data"
    _write_synth_dataset(data, 4)
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(TRAIN_CFG))
    ckpt = tmp_path / "m.ckpt"
    code = run_cli(
        ["train", "--data", str(data), "--config", str(cfg_path), "--out", str(ckpt), "--epochs", "1"]
    )
    assert code == 0
    lines = (tmp_path / "m.ckpt.metrics.jsonl").read_text().strip().splitlines()
    assert len(lines) == 1


def test_train_determinism_byte_identical_checkpoints(tmp_path, capsys):
    data = tmp_path / "data"
    _write_synth_dataset(data, 4)
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(TRAIN_CFG))
    c1, c2 = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
    for ck in (c1, c2):
        assert run_cli(["train", "--data", str(data), "--config", str(cfg_path), "--out", str(ck)]) == 0
    assert c1.read_bytes() == c2.read_bytes()


def test_gradcheck_cli_pass(capsys):
    code = run_cli(["gradcheck", "--module", "gru"])
    assert code == 0
    out = capsys.readouterr().out
    assert "gru" in out and "PASS" in out


def test_cli_entrypoint_subprocess():
    # the console script path: python -m behavior through the module
    proc = subprocess.run(
        [sys.executable, "-c", "import semqg.cli, sys; sys.exit(semqg.cli.main(['gradcheck','--module','primitives']))"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "primitives" in proc.stdout


def test_env_seed_fallback(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SEMGRAPH_SEED", "17")
    code = run_cli(["gradcheck", "--module", "gru"])
    assert code == 0
