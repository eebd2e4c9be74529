"""Command-line interface: ``evaluate``, ``features`` and ``make-fixture``.

Exit codes: 0 success, 2 usage error, otherwise the ``exit_code`` of the
raised :class:`~vsumeval.errors.EvaluationError` (1 for unexpected errors).
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .cache import directory_fingerprint, write_cache
from .dataset_io import load_manifest
from .errors import EvaluationError
from .features import black_frame_warnings, extract_directory
from .fixtures import FixtureKind, make_fixture
from .pipeline import RunArtifacts, default_jobs, run_evaluation
from .report import report_to_csv, report_to_json, write_text
from .similarity import DEFAULT_THRESHOLD, Aggregation, EvalConfig, MatchMode

log = logging.getLogger("vsumeval")


def _threshold(text: str) -> float:
    try:
        t = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < t <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold must be in (0, 1], got {t}")
    return t


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vsumeval",
        description="Score automatic video summaries against user summaries "
        "(color histogram + Haar texture keyframe matching).",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="evaluate the pairs listed in a manifest")
    ev.add_argument("--manifest", required=True, type=Path)
    ev.add_argument("--color-threshold", type=_threshold, default=DEFAULT_THRESHOLD)
    ev.add_argument("--texture-threshold", type=_threshold, default=DEFAULT_THRESHOLD)
    ev.add_argument(
        "--match-mode",
        choices=[m.value for m in MatchMode],
        default=MatchMode.COLOR_AND_TEXTURE.value,
    )
    ev.add_argument(
        "--aggregation",
        choices=[a.value for a in Aggregation],
        default=Aggregation.PER_VIDEO.value,
        help="overall mean over per-video means (default) or over all pairs",
    )
    ev.add_argument("--report-json", type=Path, help="JSON report path (default: stdout)")
    ev.add_argument("--report-csv", type=Path)
    ev.add_argument("--cache", type=Path, help="feature cache directory")
    ev.add_argument("--jobs", type=_positive_int, default=None, help="worker threads (default: CPU count)")

    ft = sub.add_parser("features", help="write a feature cache for one summary directory")
    ft.add_argument("--dir", required=True, type=Path)
    ft.add_argument("--out", required=True, type=Path)
    ft.add_argument("--jobs", type=_positive_int, default=None)

    fx = sub.add_parser("make-fixture", help="generate a synthetic dataset with manifest")
    fx.add_argument("--kind", required=True, choices=[k.value for k in FixtureKind])
    fx.add_argument("--out", required=True, type=Path)
    fx.add_argument("--seed", type=int, default=0)
    return parser


def cmd_evaluate(args) -> RunArtifacts:
    config = EvalConfig(
        color_threshold=args.color_threshold,
        texture_threshold=args.texture_threshold,
        match_mode=args.match_mode,
        aggregation=args.aggregation,
    )
    job = load_manifest(args.manifest, config)
    run = run_evaluation(job, cache_dir=args.cache, jobs=args.jobs)
    text = report_to_json(run.report)
    if args.report_json is not None:
        write_text(args.report_json, text)
    else:
        sys.stdout.write(text)
    if args.report_csv is not None:
        write_text(args.report_csv, report_to_csv(run.report))
    log.info("overall mean F-measure: %.4f over %d pair(s)", run.report.overall_mean_f, len(run.report.pairs))
    return run


def cmd_features(args) -> Path:
    if not args.dir.is_dir():
        raise EvaluationError(f"not a directory: {args.dir}")
    with ThreadPoolExecutor(max_workers=args.jobs or default_jobs()) as pool:
        frames = extract_directory(args.dir, pool)
    for w in black_frame_warnings(args.dir, frames):
        log.warning(w)
    write_cache(args.out, directory_fingerprint(args.dir), frames)
    log.info("wrote %d record(s) to %s", len(frames), args.out)
    return args.out


def cmd_make_fixture(args) -> Path:
    manifest = make_fixture(args.kind, args.out, seed=args.seed)
    print(manifest)
    return manifest


COMMANDS = {
    "evaluate": cmd_evaluate,
    "features": cmd_features,
    "make-fixture": cmd_make_fixture,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        COMMANDS[args.command](args)
    except EvaluationError as exc:
        log.error("%s", exc)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        log.exception("unexpected error: %s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
