"""Precision, recall and F-measure per pair, plus dataset aggregation."""

from dataclasses import dataclass, field

from .errors import EmptySummaryError
from .similarity import Aggregation, EvalConfig


@dataclass(frozen=True)
class PairScores:
    video_id: str
    auto_label: str
    user_label: str
    n_auto: int
    n_user: int
    n_matched: int
    precision: float
    recall: float
    f_measure: float


@dataclass
class EvaluationReport:
    pairs: list[PairScores]
    per_video_mean_f: dict[str, float]
    overall_mean_f: float
    config_echo: EvalConfig = field(default_factory=EvalConfig)


def f_measure(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def scores_from_counts(n_matched: int, n_auto: int, n_user: int) -> tuple[float, float, float]:
    if n_auto < 1 or n_user < 1:
        raise EmptySummaryError("precision/recall undefined for an empty summary")
    p = n_matched / n_auto
    r = n_matched / n_user
    return p, r, f_measure(p, r)


def pair_scores(outcome, video_id: str, auto_label: str, user_label: str) -> PairScores:
    p, r, f = scores_from_counts(outcome.n_matched, outcome.n_auto, outcome.n_user)
    return PairScores(
        video_id=video_id,
        auto_label=auto_label,
        user_label=user_label,
        n_auto=outcome.n_auto,
        n_user=outcome.n_user,
        n_matched=outcome.n_matched,
        precision=p,
        recall=r,
        f_measure=f,
    )


def _mean(xs):
    return sum(xs) / len(xs)


def aggregate(pairs, config: EvalConfig | None = None) -> EvaluationReport:
    """Per-video mean F, then the overall mean.

    With ``Aggregation.PER_VIDEO`` (default) the overall value is the mean of
    the per-video means, so videos with many user summaries do not dominate.
    ``Aggregation.FLAT`` averages over all pairs instead.
    """
    pairs = list(pairs)
    if not pairs:
        raise EmptySummaryError("cannot aggregate an empty list of pair scores")
    config = config or EvalConfig()

    by_video: dict[str, list[float]] = {}
    for ps in pairs:
        by_video.setdefault(ps.video_id, []).append(ps.f_measure)
    per_video = {vid: _mean(fs) for vid, fs in by_video.items()}

    if config.aggregation is Aggregation.FLAT:
        overall = _mean([ps.f_measure for ps in pairs])
    else:
        overall = _mean(list(per_video.values()))
    return EvaluationReport(
        pairs=pairs, per_video_mean_f=per_video, overall_mean_f=overall, config_echo=config
    )
