"""End-to-end evaluation: features -> matching -> metrics."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .cache import CacheDirectory, directory_fingerprint
from .dataset_io import EvaluationJob
from .features import ExtractedFrame, black_frame_warnings, extract_directory, to_summary_set
from .matching import match_summaries
from .metrics import EvaluationReport, aggregate, pair_scores

log = logging.getLogger(__name__)


@dataclass
class RunArtifacts:
    report: EvaluationReport
    feature_cache_path: Path | None = None
    log: list[str] = field(default_factory=list)


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def run_evaluation(job: EvaluationJob, cache_dir=None, jobs: int | None = None) -> RunArtifacts:
    """Evaluate every (automatic, user) pair of ``job``.

    Each distinct summary directory is featurized once. With ``cache_dir``,
    features are looked up by directory fingerprint and stored on a miss.
    """
    jobs = jobs or default_jobs()
    cache = CacheDirectory(cache_dir) if cache_dir is not None else None
    warnings: list[str] = []

    dirs: list[Path] = []
    for entry in job.video_entries:
        for ref in (*entry.automatic, *entry.user):
            if ref.dir not in dirs:
                dirs.append(ref.dir)

    features: dict[Path, list[ExtractedFrame]] = {}
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for d in dirs:
            frames = None
            fp = None
            if cache is not None:
                fp = directory_fingerprint(d)
                frames = cache.get(fp)
                if frames is not None:
                    log.debug("feature cache hit for %s", d)
            if frames is None:
                frames = extract_directory(d, pool)
                if cache is not None:
                    cache.put(fp, frames)
            features[d] = frames
            warnings.extend(black_frame_warnings(d, frames))

        sets = {}

        def summary_set(video_id, kind, ref):
            key = (video_id, ref.label)
            if key not in sets:
                sets[key] = to_summary_set(video_id, kind, ref.label, features[ref.dir])
            return sets[key]

        tasks = []
        for video_id, auto_ref, user_ref in job.pairs():
            a = summary_set(video_id, "automatic", auto_ref)
            u = summary_set(video_id, "user", user_ref)
            fut = pool.submit(match_summaries, a, u, job.config)
            tasks.append((video_id, auto_ref.label, user_ref.label, fut))

        scores = [pair_scores(fut.result(), vid, al, ul) for vid, al, ul, fut in tasks]

    for w in warnings:
        log.warning(w)
    report = aggregate(scores, job.config)
    return RunArtifacts(
        report=report,
        feature_cache_path=Path(cache_dir) if cache_dir is not None else None,
        log=warnings,
    )
