"""JSON and CSV serialization of evaluation reports.

The JSON report is canonical: keys sorted, floats rounded to 12 significant
digits, so identical runs produce byte-identical files.
"""

import csv
import io
import json
from pathlib import Path

from .errors import IOFailureError
from .metrics import EvaluationReport

SIG_DIGITS = 12


def _round(x: float) -> float:
    return float(f"{x:.{SIG_DIGITS}g}")


def report_to_dict(report: EvaluationReport) -> dict:
    return {
        "config": {
            k: (_round(v) if isinstance(v, float) else v)
            for k, v in report.config_echo.to_dict().items()
        },
        "pairs": [
            {
                "video": p.video_id,
                "auto": p.auto_label,
                "user": p.user_label,
                "n_auto": p.n_auto,
                "n_user": p.n_user,
                "n_matched": p.n_matched,
                "precision": _round(p.precision),
                "recall": _round(p.recall),
                "f": _round(p.f_measure),
            }
            for p in report.pairs
        ],
        "per_video_mean_f": {k: _round(v) for k, v in report.per_video_mean_f.items()},
        "overall_mean_f": _round(report.overall_mean_f),
    }


def report_to_json(report: EvaluationReport) -> str:
    return json.dumps(report_to_dict(report), sort_keys=True, indent=2) + "\n"


CSV_COLUMNS = ["row", "video", "auto", "user", "n_auto", "n_user", "n_matched", "precision", "recall", "f"]


def report_to_csv(report: EvaluationReport) -> str:
    """One ``pair`` row per evaluated pair, then ``video_mean`` rows and an ``overall`` row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in report.pairs:
        w.writerow(
            ["pair", p.video_id, p.auto_label, p.user_label, p.n_auto, p.n_user, p.n_matched,
             f"{p.precision:.6f}", f"{p.recall:.6f}", f"{p.f_measure:.6f}"]
        )
    for vid in sorted(report.per_video_mean_f):
        w.writerow(["video_mean", vid, "", "", "", "", "", "", "", f"{report.per_video_mean_f[vid]:.6f}"])
    w.writerow(["overall", "", "", "", "", "", "", "", "", f"{report.overall_mean_f:.6f}"])
    return buf.getvalue()


def write_text(path, text: str):
    try:
        path = Path(path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IOFailureError(f"cannot write {path}: {exc}") from exc
