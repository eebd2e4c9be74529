"""Keyframe-matching evaluation of automatic video summaries.

Frames are compared with a joint HSV color histogram and a Haar wavelet
texture descriptor under the Bhattacharyya coefficient; matched counts give
precision, recall and F-measure per (automatic, user) summary pair.
"""

from .color_features import color_histogram, quantize_hsv
from .dataset_io import FrameImage, HsvImage, decode_frame, load_manifest, rgb_to_hsv
from .matching import FrameFeatures, MatchOutcome, SummarySet, match_summaries
from .metrics import EvaluationReport, PairScores, aggregate, pair_scores
from .pipeline import run_evaluation
from .similarity import EvalConfig, MatchMode, bhattacharyya, is_color_matched, is_texture_matched
from .texture_features import haar_approx, resize_to_64, texture_descriptor

__version__ = "0.1.0"

__all__ = [
    "EvalConfig",
    "EvaluationReport",
    "FrameFeatures",
    "FrameImage",
    "HsvImage",
    "MatchMode",
    "MatchOutcome",
    "PairScores",
    "SummarySet",
    "aggregate",
    "bhattacharyya",
    "color_histogram",
    "decode_frame",
    "haar_approx",
    "is_color_matched",
    "is_texture_matched",
    "load_manifest",
    "match_summaries",
    "pair_scores",
    "quantize_hsv",
    "resize_to_64",
    "rgb_to_hsv",
    "run_evaluation",
    "texture_descriptor",
]
