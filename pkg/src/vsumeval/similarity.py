"""Bhattacharyya coefficient and the color/texture match predicates.

The coefficient is a similarity: 1 for identical distributions, 0 for
disjoint supports. Two frames match on a feature when the coefficient is
strictly greater than the configured threshold.
"""

from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .errors import SimilarityInputError

DEFAULT_THRESHOLD = 0.97
NORMALIZATION_TOL = 1e-6


class MatchMode(str, Enum):
    COLOR_AND_TEXTURE = "color_and_texture"
    COLOR_ONLY = "color_only"
    TEXTURE_ONLY = "texture_only"
    COLOR_OR_TEXTURE = "color_or_texture"


class Aggregation(str, Enum):
    PER_VIDEO = "per-video"
    FLAT = "flat"


@dataclass(frozen=True)
class EvalConfig:
    color_threshold: float = DEFAULT_THRESHOLD
    texture_threshold: float = DEFAULT_THRESHOLD
    match_mode: MatchMode = MatchMode.COLOR_AND_TEXTURE
    aggregation: Aggregation = Aggregation.PER_VIDEO

    def __post_init__(self):
        for name in ("color_threshold", "texture_threshold"):
            t = getattr(self, name)
            if not 0.0 < t <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {t}")
        object.__setattr__(self, "match_mode", MatchMode(self.match_mode))
        object.__setattr__(self, "aggregation", Aggregation(self.aggregation))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["match_mode"] = self.match_mode.value
        d["aggregation"] = self.aggregation.value
        return d


def bhattacharyya(p, q) -> float:
    """Bhattacharyya coefficient ``sum(sqrt(p_i * q_i))`` of two distributions.

    Inputs must have equal length, be nonnegative and each sum to 1 within
    1e-6. The residual normalization error is divided out, so identical
    inputs score exactly 1.0 and the result never leaves [0, 1].

    Raises:
        SimilarityInputError: on length mismatch or non-normalized input.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.ndim != 1 or p.shape != q.shape or p.size == 0:
        raise SimilarityInputError(f"length mismatch: {p.shape} vs {q.shape}")
    if (p < 0).any() or (q < 0).any():
        raise SimilarityInputError("distributions must be nonnegative")
    sp, sq = p.sum(), q.sum()
    if abs(sp - 1.0) > NORMALIZATION_TOL or abs(sq - 1.0) > NORMALIZATION_TOL:
        raise SimilarityInputError(f"distributions must sum to 1 (got {sp!r}, {sq!r})")
    bc = np.sqrt(p * q).sum() / np.sqrt(sp * sq)
    return float(min(bc, 1.0))


def is_color_matched(a, b, cfg: EvalConfig) -> bool:
    return bhattacharyya(a, b) > cfg.color_threshold


def is_texture_matched(a, b, cfg: EvalConfig) -> bool:
    return bhattacharyya(a, b) > cfg.texture_threshold
