"""Greedy frame matching between one automatic and one user summary."""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySummaryError
from .similarity import EvalConfig, MatchMode, bhattacharyya


@dataclass(frozen=True)
class FrameFeatures:
    frame_id: int
    color: np.ndarray
    texture: np.ndarray
    name: str = ""


@dataclass
class SummarySet:
    video_id: str
    kind: str  # "automatic" or "user"
    label: str
    frames: list[FrameFeatures] = field(default_factory=list)

    def __post_init__(self):
        self.frames = sorted(self.frames, key=lambda f: (f.frame_id, f.name))
        ids = [f.frame_id for f in self.frames]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate frame ids in summary {self.label!r}")


@dataclass(frozen=True)
class MatchedPair:
    auto_frame_id: int
    user_frame_id: int
    color_score: float
    texture_score: float


@dataclass
class MatchOutcome:
    pairs: list[MatchedPair]
    n_auto: int
    n_user: int

    @property
    def n_matched(self) -> int:
        return len(self.pairs)


def _predicate(auto: FrameFeatures, user: FrameFeatures, cfg: EvalConfig):
    """Evaluate the mode predicate; return ``(matched, color_score, texture_score)``.

    Scores not needed to decide are computed lazily, then filled in for
    matched pairs so the report always carries both.
    """
    mode = cfg.match_mode
    color = texture = None

    if mode is not MatchMode.TEXTURE_ONLY:
        color = bhattacharyya(auto.color, user.color)
        color_ok = color > cfg.color_threshold
        if mode is MatchMode.COLOR_ONLY:
            matched = color_ok
        elif mode is MatchMode.COLOR_AND_TEXTURE and not color_ok:
            return False, color, None
        elif mode is MatchMode.COLOR_OR_TEXTURE and color_ok:
            matched = True
        else:
            texture = bhattacharyya(auto.texture, user.texture)
            matched = texture > cfg.texture_threshold
    else:
        texture = bhattacharyya(auto.texture, user.texture)
        matched = texture > cfg.texture_threshold

    if matched:
        if color is None:
            color = bhattacharyya(auto.color, user.color)
        if texture is None:
            texture = bhattacharyya(auto.texture, user.texture)
    return matched, color, texture


def match_summaries(auto: SummarySet, user: SummarySet, cfg: EvalConfig) -> MatchOutcome:
    """Pair automatic frames with user frames, consuming each user frame once.

    Automatic frames are visited in frame-id order. For each one the remaining
    user frames are scanned in frame-id order and the first that satisfies the
    configured predicate is paired and removed. The scan stops once every user
    frame has been consumed. This is a first-match greedy pass, not an optimal
    assignment, so the result depends on frame order.
    """
    if not auto.frames:
        raise EmptySummaryError(f"automatic summary {auto.label!r} has no frames")
    if not user.frames:
        raise EmptySummaryError(f"user summary {user.label!r} has no frames")

    remaining = list(user.frames)
    pairs = []
    for a in auto.frames:
        if not remaining:
            break
        for k, u in enumerate(remaining):
            matched, cs, ts = _predicate(a, u, cfg)
            if matched:
                pairs.append(MatchedPair(a.frame_id, u.frame_id, cs, ts))
                del remaining[k]
                break
    return MatchOutcome(pairs=pairs, n_auto=len(auto.frames), n_user=len(user.frames))
