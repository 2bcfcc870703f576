"""Serialization of selection, cross-validation and timing results.

JSON is the canonical format: keys are emitted in a fixed order and
floats use Python's shortest round-trip repr, so the same results always
produce the same bytes.
"""

from __future__ import annotations

import csv
import io
import json

from .bench import TimingReport
from .cv import CvCurve
from .dataset import DiscreteDataset
from .selector import SelectionReport, score_curve

FORMAT_VERSION = 1
FORMATS = ("json", "csv", "text")


def dataset_info(data: DiscreteDataset, source: str | None) -> dict:
    return {"source": source, "r": data.r, "m": data.m, "C": data.C}


def selection_dict(report: SelectionReport) -> dict:
    curve = score_curve(report) if report.ranking else []
    return {
        "objective": {"kind": report.objective.kind, "lambda": report.objective.lam},
        "k_requested": report.k_requested,
        "k": len(report.ranking),
        "ranking": [
            {
                "rank": pos + 1,
                "index": f.index,
                "name": f.name,
                "score": f.score,
                "relevance": f.relevance,
                "mean_redundancy": f.mean_redundancy,
            }
            for pos, f in enumerate(report.ranking)
        ],
        "score_curve": [{"k": k, "A": a, "R": r} for k, a, r in curve],
    }


def cv_dict(curve: CvCurve) -> dict:
    return {
        "folds": curve.K,
        "seed": curve.seed,
        "reselect": curve.reselect,
        "best_k": curve.best_k,
        "accuracy": [{"k": k + 1, "accuracy": float(a)} for k, a in enumerate(curve.accuracy)],
        "fold_accuracies": [[float(a) for a in row] for row in curve.fold_accuracies],
    }


def timing_dict(timing: TimingReport) -> dict:
    speedup = timing.speedup
    return {
        "k": timing.k,
        "ranking_indices": timing.ranking,
        "rows": [
            {
                "workers": t.workers,
                "samples": t.samples,
                "median_seconds": t.median_seconds,
                "speedup": speedup[t.workers],
                "cvtest_calls": calls,
            }
            for t, calls in zip(timing.rows, timing.calls)
        ],
    }


def envelope(command: str, data_info: dict, body: dict, warnings: list[str]) -> dict:
    doc = {"format_version": FORMAT_VERSION, "command": command, "dataset": data_info}
    doc.update(body)
    doc["warnings"] = list(dict.fromkeys(warnings))
    return doc


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if doc["command"] == "bench":
        w.writerow(["workers", "median_seconds", "speedup", "cvtest_calls"])
        for row in doc["rows"]:
            w.writerow([row["workers"], repr(row["median_seconds"]), repr(row["speedup"]), row["cvtest_calls"]])
    elif doc["command"] == "cv":
        w.writerow(["k", "accuracy", "best"])
        best = doc["cv"]["best_k"]
        for row in doc["cv"]["accuracy"]:
            w.writerow([row["k"], repr(row["accuracy"]), int(row["k"] == best)])
    else:
        w.writerow(["rank", "index", "name", "score", "relevance", "mean_redundancy", "A", "R"])
        for row, c in zip(doc["ranking"], doc["score_curve"]):
            w.writerow([row["rank"], row["index"], row["name"], repr(row["score"]),
                        repr(row["relevance"]), repr(row["mean_redundancy"]),
                        repr(c["A"]), repr(c["R"])])
    return buf.getvalue()


def to_text(doc: dict) -> str:
    ds = doc["dataset"]
    lines = [f"{doc['command']}: {ds['source'] or 'synthetic'} (r={ds['r']}, m={ds['m']}, C={ds['C']})"]
    if "ranking" in doc:
        obj = doc["objective"]
        lines.append(f"objective {obj['kind']} (lambda={obj['lambda']:g}), {doc['k']} feature(s)")
        lines.append(f"{'rank':>4}  {'feature':<20} {'score':>12} {'relevance':>10} {'redund.':>8}")
        for row in doc["ranking"]:
            lines.append(
                f"{row['rank']:>4}  {row['name']:<20} {row['score']:>12.6g} "
                f"{row['relevance']:>10.4f} {row['mean_redundancy']:>8.4f}"
            )
    if "cv" in doc:
        cv = doc["cv"]
        lines.append(f"{cv['folds']}-fold CV (seed {cv['seed']}): best k = {cv['best_k']}")
        for row in cv["accuracy"]:
            mark = " *" if row["k"] == cv["best_k"] else ""
            lines.append(f"  k={row['k']:<4} accuracy={row['accuracy']:.4f}{mark}")
    if "rows" in doc:
        lines.append(f"{'workers':>7} {'median s':>10} {'speedup':>8} {'calls':>8}")
        for row in doc["rows"]:
            lines.append(
                f"{row['workers']:>7} {row['median_seconds']:>10.4f} {row['speedup']:>8.2f} {row['cvtest_calls']:>8}"
            )
    for w in doc["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(doc)
    if fmt == "csv":
        return to_csv(doc)
    if fmt == "text":
        return to_text(doc)
    raise ValueError(f"unknown format {fmt!r}")
