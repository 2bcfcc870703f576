import json
from pathlib import Path

import numpy as np
import pytest

import fselect
from fselect.association import cvtest
from fselect.cli import run
from fselect.dataset import DiscretizerSpec, discretize, load_csv
from fselect.selector import relevance_vector
from fselect.engine import EngineConfig, ParallelEngine
from fselect.synthetic import duplicate_feature_dataset
from oracles import greedy_bruteforce

GOLDEN = Path(__file__).parent / "golden"
IRIS = fselect.sample_csv_path()
TIMING_KEYS = ("samples", "median_seconds", "speedup")


def invoke(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = run([*args, "--output", str(out)])
    return code, out


def strip_timing(doc):
    for row in doc["rows"]:
        for key in TIMING_KEYS:
            row.pop(key)
    return doc


RANK_ARGS = ["rank", "--input", IRIS, "--label-col", "species", "--method", "mmaiq", "--k", "2", "--bins", "8"]
CV_ARGS = ["cv", "--input", IRIS, "--label-col", "species", "--bins", "8", "--folds", "5", "--seed", "42"]
BENCH_ARGS = ["bench", "--input", IRIS, "--label-col", "species", "--bins", "8",
              "--workers-list", "1,2,4", "--repeats", "1"]


def test_sample_csv_shape():
    raw = load_csv(IRIS, "species")
    assert (raw.r, raw.m) == (150, 4)


def test_rank_golden(tmp_path):
    code, out = invoke(tmp_path, *RANK_ARGS)
    assert code == 0
    assert out.read_bytes() == (GOLDEN / "rank_iris.json").read_bytes()


def test_rank_golden_matches_oracle():
    data = discretize(load_csv(IRIS, "species"), DiscretizerSpec("equal_frequency", 8))
    with ParallelEngine(EngineConfig(1)) as eng:
        rel = list(relevance_vector(data, eng))

    def v_pair(i, j):
        return cvtest(data.column(i), data.column(j), data.cards[i], data.cards[j]).v

    ranking, scores = greedy_bruteforce(data, "mmaiq", 1.0, 2, v_pair, rel=rel)
    doc = json.loads((GOLDEN / "rank_iris.json").read_text())
    assert [r["index"] for r in doc["ranking"]] == ranking
    assert [r["score"] for r in doc["ranking"]] == scores


def test_cv_golden(tmp_path):
    code, out = invoke(tmp_path, *CV_ARGS)
    assert code == 0
    assert out.read_bytes() == (GOLDEN / "cv_iris.json").read_bytes()
    doc = json.loads(out.read_text())
    acc = [row["accuracy"] for row in doc["cv"]["accuracy"]]
    assert doc["cv"]["best_k"] == int(np.argmax(acc)) + 1


def test_bench_golden(tmp_path):
    code, out = invoke(tmp_path, *BENCH_ARGS)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["rows"][0]["speedup"] == 1.0
    golden = json.loads((GOLDEN / "bench_iris.json").read_text())
    assert strip_timing(doc) == golden
    assert len({row["cvtest_calls"] for row in golden["rows"]}) == 1


@pytest.mark.parametrize("args", [RANK_ARGS, CV_ARGS])
def test_byte_identical_across_threads(tmp_path, args):
    _, a = invoke(tmp_path, *args, "--threads", "1", name="a.json")
    _, b = invoke(tmp_path, *args, "--threads", "4", "--par-threshold", "0", name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_json_round_trip(tmp_path):
    _, out = invoke(tmp_path, *CV_ARGS)
    text = out.read_text()
    assert json.dumps(json.loads(text), indent=2, ensure_ascii=False) + "\n" == text


@pytest.mark.parametrize(
    "args",
    [
        ["rank", "--input", IRIS, "--label-col", "species", "--k", "0"],
        ["rank", "--input", IRIS, "--label-col", "species", "--k", "many"],
        ["cv", "--input", IRIS, "--label-col", "species", "--folds", "1"],
        ["rank", "--input", IRIS, "--method", "mrmr"],
        ["rank", "--input", IRIS, "--label-col", "species", "--lambda", "-1", "--method", "mmais"],
        ["rank", "--input", IRIS, "--label-col", "species", "--threads", "0"],
        ["rank", "--label-col", "species"],
        ["bench", "--workers-list", "0,2"],
    ],
)
def test_invalid_config_exit_3(args, capsys):
    assert run(args) == 3
    assert "error" in capsys.readouterr().err


def test_k_message(capsys):
    run(["rank", "--input", IRIS, "--k", "0"])
    assert "k must be" in capsys.readouterr().err


def test_io_errors_exit_2(tmp_path):
    assert run(["rank", "--input", str(tmp_path / "missing.csv")]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,x\n2\n")
    assert run(["rank", "--input", str(bad), "--label-col", "b"]) == 2
    assert run(["rank", "--input", IRIS, "--label-col", "nope"]) == 2


def test_lambda_recorded(tmp_path):
    dup = tmp_path / "dup.csv"
    data = duplicate_feature_dataset(seed=1, noise_features=2)
    rows = ["x0,x1,x2,x3,x4,label"] + [
        ",".join(map(str, list(data.codes[i]) + [data.label_codes[i]])) for i in range(data.r)
    ]
    dup.write_text("\n".join(rows) + "\n")
    for lam in ("0.5", "2.0"):
        code, out = invoke(tmp_path, "rank", "--input", str(dup), "--label-col", "label",
                           "--method", "mmais", "--lambda", lam, "--k", "3", name=f"l{lam}.json")
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["objective"] == {"kind": "mmais", "lambda": float(lam)}


def test_auto_k_truncates_at_best(tmp_path):
    code, out = invoke(tmp_path, "rank", "--input", IRIS, "--label-col", "species", "--bins", "8")
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["k"] == doc["cv"]["best_k"] == len(doc["ranking"])


@pytest.mark.parametrize("fmt", ["csv", "text"])
def test_other_formats(tmp_path, fmt):
    for args in (RANK_ARGS, CV_ARGS, BENCH_ARGS):
        code, out = invoke(tmp_path, *args, "--format", fmt, name=f"o.{fmt}")
        assert code == 0
        assert out.read_text().strip()


def test_csv_rank_columns(tmp_path):
    _, out = invoke(tmp_path, *RANK_ARGS, "--format", "csv", name="r.csv")
    lines = out.read_text().splitlines()
    assert lines[0] == "rank,index,name,score,relevance,mean_redundancy,A,R"
    assert lines[1].startswith("1,3,petal_width,")


def test_warnings_surface(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("const,a,y\n1,1,p\n1,2,q\n1,1,p\n1,2,q\n1,1,p\n1,2,q\n")
    code, out = invoke(tmp_path, "rank", "--input", str(path), "--label-col", "y", "--k", "2")
    assert code == 0
    doc = json.loads(out.read_text())
    assert any("constant" in w for w in doc["warnings"])
    assert any("truncated" in w for w in doc["warnings"])
    code, out = invoke(tmp_path, "cv", "--input", str(path), "--label-col", "y", "--folds", "4", name="cv.json")
    assert code == 0
    assert any("stratified" in w for w in json.loads(out.read_text())["warnings"])


def test_env_workers(tmp_path, monkeypatch):
    monkeypatch.setenv("FSELECT_WORKERS", "3")
    code, out = invoke(tmp_path, *RANK_ARGS)
    assert code == 0
    assert out.read_bytes() == (GOLDEN / "rank_iris.json").read_bytes()


def test_small_synthetic_bench_completes(tmp_path):
    # twelve features: no speedup is expected at this size
    code, out = invoke(tmp_path, "bench", "--synthetic-features", "12", "--synthetic-rows", "2000",
                       "--synthetic-informative", "4", "--workers-list", "1,2,4", "--repeats", "1")
    assert code == 0
    doc = json.loads(out.read_text())
    assert [row["workers"] for row in doc["rows"]] == [1, 2, 4]
    assert len({row["cvtest_calls"] for row in doc["rows"]}) == 1


def test_cv_reselect_flag(tmp_path):
    code, out = invoke(tmp_path, *CV_ARGS, "--cv-reselect")
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["cv"]["reselect"] is True
    assert len(doc["cv"]["fold_accuracies"]) == 5
