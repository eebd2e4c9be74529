"""Haar wavelet texture descriptor.

The frame (already in HSV) is box-filtered down to 64x64, each channel goes
through a 3-level 2-D Haar analysis, and the three 8x8 approximation
subbands are concatenated and L1-normalized into a 192-value descriptor.

The averaging Haar convention is used (approximation ``(a + b) / 2``,
detail ``(a - b) / 2``), so approximation coefficients stay in the input
range and the level-3 subband equals the 8x8 block means of the input.
"""

import logging

import numpy as np

from .dataset_io import HsvImage
from .errors import FeatureError

log = logging.getLogger(__name__)

TARGET_SIZE = 64
LEVELS = 3
APPROX_SIZE = TARGET_SIZE >> LEVELS
N_TEXTURE_VALUES = 3 * APPROX_SIZE * APPROX_SIZE


def _box_weights(n_src: int, n_dst: int) -> np.ndarray:
    """``(n_dst, n_src)`` matrix of area weights for a 1-D box-filter resample."""
    # interval boundaries i * n_src / n_dst, in source pixel units
    edges = np.arange(n_dst + 1, dtype=np.float64) * n_src / n_dst
    lo = edges[:-1, None]
    hi = edges[1:, None]
    src_lo = np.arange(n_src, dtype=np.float64)[None, :]
    overlap = np.clip(np.minimum(hi, src_lo + 1.0) - np.maximum(lo, src_lo), 0.0, None)
    return overlap / (hi - lo)


def resize_to_64(img: HsvImage) -> HsvImage:
    """Area-weighted (box filter) resample to 64x64, per channel.

    Hue is averaged as a plain scalar. A 64x64 input is returned unchanged.
    """
    if img.width < 1 or img.height < 1:
        raise FeatureError("cannot resize an empty image")
    if img.width == TARGET_SIZE and img.height == TARGET_SIZE:
        return HsvImage(TARGET_SIZE, TARGET_SIZE, img.pixels.copy())
    wr = _box_weights(img.height, TARGET_SIZE)
    wc = _box_weights(img.width, TARGET_SIZE)
    rows = np.tensordot(wr, img.pixels, axes=(1, 0))  # (64, W, 3)
    out = np.tensordot(wc, rows, axes=(1, 1)).transpose(1, 0, 2)
    return HsvImage(TARGET_SIZE, TARGET_SIZE, out)


def haar_step(grid: np.ndarray):
    """One level of the 2-D averaging Haar analysis.

    Returns ``(approx, (horizontal, vertical, diagonal))``, each half the size
    of ``grid`` in both dimensions.
    """
    a = grid[0::2, 0::2]
    b = grid[0::2, 1::2]
    c = grid[1::2, 0::2]
    d = grid[1::2, 1::2]
    # rows first, then columns
    lo_top, hi_top = (a + b) / 2.0, (a - b) / 2.0
    lo_bot, hi_bot = (c + d) / 2.0, (c - d) / 2.0
    approx = (lo_top + lo_bot) / 2.0
    horizontal = (lo_top - lo_bot) / 2.0
    vertical = (hi_top + hi_bot) / 2.0
    diagonal = (hi_top - hi_bot) / 2.0
    return approx, (horizontal, vertical, diagonal)


def haar_approx(channel: np.ndarray, levels: int = LEVELS) -> np.ndarray:
    """Approximation subband after ``levels`` Haar steps on a 64x64 grid.

    Detail subbands are computed at each step and dropped.
    """
    grid = np.asarray(channel, dtype=np.float64)
    if grid.shape != (TARGET_SIZE, TARGET_SIZE):
        raise FeatureError(f"expected a {TARGET_SIZE}x{TARGET_SIZE} grid, got {grid.shape}")
    if not 1 <= levels <= 6:
        raise FeatureError(f"decomposition level must be in 1..6, got {levels}")
    for _ in range(levels):
        grid, _details = haar_step(grid)
    return grid


def texture_descriptor(img64: HsvImage) -> np.ndarray:
    """192-value L1-normalized descriptor from a 64x64 HSV image.

    Channels enter as H/360, S, V (all in [0, 1]) and are concatenated in that
    order. An identically black frame yields the uniform vector.
    """
    if img64.pixels.shape != (TARGET_SIZE, TARGET_SIZE, 3):
        raise FeatureError(
            f"expected a {TARGET_SIZE}x{TARGET_SIZE} HSV image, got {img64.pixels.shape}"
        )
    px = img64.pixels
    channels = (px[..., 0] / 360.0, px[..., 1], px[..., 2])
    values = np.concatenate([haar_approx(ch).ravel() for ch in channels])
    total = values.sum()
    if total <= 0.0:
        log.warning("all-zero texture coefficients (black frame); using uniform descriptor")
        return np.full(N_TEXTURE_VALUES, 1.0 / N_TEXTURE_VALUES)
    return values / total


def is_zero_frame(hsv: HsvImage) -> bool:
    """True when every channel of every pixel is zero (the uniform-descriptor case)."""
    return not np.any(hsv.pixels)
