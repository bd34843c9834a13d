import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from ncc.interfaces.cli import main
from ncc.interfaces.pipeline import preprocess, run_eval, run_training
from ncc.interfaces.server import ModelCatalog, create_app

CORPUS = Path(__file__).resolve().parent.parent / "data" / "toy" / "corpus.jsonl"


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory):
    """Full pipeline on the toy corpus: preprocess, train all three tasks."""
    root = tmp_path_factory.mktemp("pipeline")
    prep = root / "prep"

    summary = preprocess({
        "input": str(CORPUS),
        "output_dir": str(prep),
        "tokenizer": "space",
        "fields": ["code", "docstring"],
    })

    def train_cfg(task, model, dims, save_dir, max_epoch=2):
        return {
            "optimization": {"lr": 0.01, "min_lr": 1e-6, "max_epoch": max_epoch,
                             "max_update": 200, "seed": 1},
            "data": {"paths": {"data": str(prep), "save_dir": str(save_dir)},
                     "batch_size": 8},
            "model": {"name": model, "dims": dims},
            "task": {"name": task},
        }

    ngram_dir = root / "model_ngram"
    nbow_dir = root / "model_nbow"
    s2s_dir = root / "model_s2s"
    run_training(train_cfg("completion", "ngram", {"order": 2}, ngram_dir))
    run_training(train_cfg("retrieval", "nbow", {"embed_dim": 16}, nbow_dir))
    run_training(train_cfg("summarization", "seq2seq",
                           {"embed_dim": 8, "hidden_dim": 8, "max_decode_len": 8},
                           s2s_dir, max_epoch=1))

    catalog_path = root / "models.json"
    catalog_path.write_text(json.dumps({"models": [
        {"id": "toy_ngram", "task": "complete", "description": "bigram LM",
         "dir": "model_ngram"},
        {"id": "toy_nbow", "task": "search", "description": "retrieval encoder",
         "dir": "model_nbow"},
        {"id": "toy_s2s", "task": "summarize", "description": "comment generator",
         "dir": "model_s2s"},
    ]}), encoding="utf-8")

    return {"root": root, "prep": prep, "summary": summary,
            "ngram_dir": ngram_dir, "nbow_dir": nbow_dir, "s2s_dir": s2s_dir,
            "catalog_path": catalog_path}


@pytest.fixture(scope="module")
def client(artifacts):
    catalog = ModelCatalog.from_file(artifacts["catalog_path"])
    return TestClient(create_app(catalog))


# --- preprocess -------------------------------------------------------------------

def test_preprocess_summary(artifacts):
    summary = artifacts["summary"]
    assert summary["records"] == 20
    assert summary["malformed"] == 0
    assert summary["fields"]["code"]["sequences"] == 20
    assert summary["fields"]["code"]["vocab_size"] > 4


def test_preprocess_outputs_exist(artifacts):
    prep = artifacts["prep"]
    for name in ("vocab.txt", "vocab_docstring.txt", "code.bin", "docstring.bin", "meta.json"):
        assert (prep / name).exists(), name
    meta = json.loads((prep / "meta.json").read_text())
    assert len(meta["paths"]) == 20


# --- model directories -----------------------------------------------------------

def test_model_dir_layout(artifacts):
    for key in ("ngram_dir", "nbow_dir", "s2s_dir"):
        d = artifacts[key]
        assert (d / "config.json").exists()
        assert (d / "model.ckpt").exists()
    assert (artifacts["nbow_dir"] / "index.json").exists()


def test_run_eval_report(artifacts, tmp_path):
    out = tmp_path / "report.json"
    report = run_eval({"model_dir": str(artifacts["ngram_dir"]),
                       "data_dir": str(artifacts["prep"]),
                       "output": str(out)})
    assert report["task"] == "completion"
    assert report["model"] == "ngram"
    assert report["metric"] == "mrr"
    assert 0.0 <= report["value"] <= 1.0
    assert report["extra_metrics"]["perplexity"] > 1.0
    assert json.loads(out.read_text()) == report


# --- CLI ---------------------------------------------------------------------------

def test_cli_predict_complete(artifacts, capsys):
    rc = main(["predict", "-m", str(artifacts["ngram_dir"]), "-t", "complete",
               "-i", "def add (", "-k", "3"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    token, prob = lines[0].split("\t")
    assert float(prob) > 0.0


def test_cli_predict_json_matches_http(artifacts, client, capsys):
    rc = main(["predict", "-m", str(artifacts["ngram_dir"]), "-t", "complete",
               "-i", "def add (", "-k", "3", "--json"])
    assert rc == 0
    cli_body = json.loads(capsys.readouterr().out)
    http = client.post("/api/complete",
                       json={"model_id": "toy_ngram", "text": "def add (", "k": 3})
    assert http.status_code == 200
    assert http.json() == cli_body


def test_cli_predict_summarize(artifacts, capsys):
    rc = main(["predict", "-m", str(artifacts["s2s_dir"]), "-t", "summarize",
               "-i", "def add ( a , b ) :"])
    assert rc == 0


def test_cli_predict_search(artifacts, capsys):
    rc = main(["predict", "-m", str(artifacts["nbow_dir"]), "-t", "search",
               "-i", "add two numbers", "-k", "2"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    path, score = lines[0].split("\t")
    assert path.startswith("toy/")


def test_cli_exit_2_on_missing_model(tmp_path, capsys):
    rc = main(["predict", "-m", str(tmp_path / "nope"), "-t", "complete", "-i", "x"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_cli_exit_3_on_bad_input(artifacts, capsys):
    rc = main(["predict", "-m", str(artifacts["ngram_dir"]), "-t", "complete", "-i", "  "])
    assert rc == 3
    assert "error" in capsys.readouterr().err


def test_cli_list_models_and_tasks(capsys):
    assert main(["--list-models"]) == 0
    out = capsys.readouterr().out
    for name in ("ngram", "rnn_lm", "nbow", "seq2seq"):
        assert any(line.split()[1] == name for line in out.strip().splitlines())
    assert main(["--list-tasks"]) == 0
    out = capsys.readouterr().out
    for name in ("completion", "retrieval", "summarization"):
        assert any(line.split()[1] == name for line in out.strip().splitlines())


def test_cli_linearize(tmp_path, capsys):
    src = tmp_path / "f.py"
    src.write_text("def f():\n  return 1\n", encoding="utf-8")
    assert main(["linearize", str(src)]) == 0
    out = capsys.readouterr().out.split()
    assert "<INDENT>" in out and "<DEDENT>" in out


# --- HTTP service -----------------------------------------------------------------

def test_http_models_catalog(client):
    body = client.get("/api/models").json()
    ids = {m["id"] for m in body["models"]}
    assert ids == {"toy_ngram", "toy_nbow", "toy_s2s"}
    assert all({"id", "task", "description"} <= set(m) for m in body["models"])


def test_http_complete_with_tokens(client):
    r = client.post("/api/complete",
                    json={"model_id": "toy_ngram", "tokens": ["def", "add", "("], "k": 2})
    assert r.status_code == 200
    cands = r.json()["candidates"]
    assert len(cands) == 2
    assert cands[0]["prob"] >= cands[1]["prob"] > 0.0


def test_http_summarize(client):
    r = client.post("/api/summarize",
                    json={"model_id": "toy_s2s", "code": "def add ( a , b ) :"})
    assert r.status_code == 200
    assert "summary" in r.json()


def test_http_search(client):
    r = client.post("/api/search",
                    json={"model_id": "toy_nbow", "query": "add two numbers", "k": 3})
    assert r.status_code == 200
    results = r.json()["results"]
    assert len(results) == 3
    scores = [h["score"] for h in results]
    assert scores == sorted(scores, reverse=True)


def test_http_404_unknown_model(client):
    r = client.post("/api/complete", json={"model_id": "nope", "text": "x"})
    assert r.status_code == 404
    body = r.json()
    assert "error" in body
    assert body["known_models"] == ["toy_nbow", "toy_ngram", "toy_s2s"]


def test_http_400_malformed(client):
    assert client.post("/api/complete", content=b"{not json").status_code == 400
    assert client.post("/api/complete", json=["a", "list"]).status_code == 400
    assert client.post("/api/complete", json={"text": "x"}).status_code == 400  # no model_id
    assert client.post("/api/complete",
                       json={"model_id": "toy_ngram", "text": "x", "k": 0}).status_code == 400
    assert client.post("/api/complete",
                       json={"model_id": "toy_ngram", "tokens": [1, 2]}).status_code == 400


def test_http_422_empty_payload(client):
    assert client.post("/api/complete",
                       json={"model_id": "toy_ngram", "tokens": []}).status_code == 422
    assert client.post("/api/summarize",
                       json={"model_id": "toy_s2s", "code": "   "}).status_code == 422
    assert client.post("/api/search",
                       json={"model_id": "toy_nbow"}).status_code == 422


def test_http_cors_headers(client):
    r = client.get("/api/models", headers={"Origin": "http://localhost:5173"})
    assert r.headers.get("access-control-allow-origin") == "*"


def test_http_serves_static_ui(artifacts, tmp_path):
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>demo</title>", encoding="utf-8")
    catalog = ModelCatalog.from_file(artifacts["catalog_path"])
    app = create_app(catalog, ui_dir=ui)
    with TestClient(app) as c:
        r = c.get("/")
        assert r.status_code == 200
        assert "demo" in r.text
        # API endpoints still take precedence over the static mount
        assert c.get("/api/models").status_code == 200
