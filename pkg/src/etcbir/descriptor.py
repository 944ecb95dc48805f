"""Per-image retrieval descriptors: visual-word histograms with tf-idf weight.

An image's histogram counts, over its non-overlapping 16x16 blocks, how many
patch descriptors fall on each visual word. Because the patch descriptor sees
only pixel multisets and counting is order-free, the histogram of an EtC image
equals that of its plain original exactly, integer for integer; the weighted
descriptor inherits that equality bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codebook import Codebook, assign_batch
from .errors import ValidationError
from .image import partition_blocks
from .scd import scd_batch

LOG_BASE = "e"  # natural logarithm throughout the weighting formula


@dataclass(frozen=True)
class WordHistogram:
    """Counts per visual word for one image; total is the image's block count."""

    counts: np.ndarray
    total: int


@dataclass(frozen=True)
class CorpusStats:
    """Corpus size N and document frequency df(m) per visual word."""

    n: int
    df: np.ndarray


def image_patch_descriptors(img: np.ndarray) -> np.ndarray:
    """Patch descriptors of every 16x16 block of an image, raster order."""
    return scd_batch(partition_blocks(img).blocks)


def image_word_histogram(img: np.ndarray, codebook: Codebook) -> WordHistogram:
    """Histogram of visual-word assignments over an image's blocks."""
    words = assign_batch(image_patch_descriptors(img), codebook)
    counts = np.bincount(words, minlength=codebook.m).astype(np.int64)
    return WordHistogram(counts=counts, total=int(counts.sum()))


def compute_corpus_stats(histograms: list[WordHistogram]) -> CorpusStats:
    """N and df over the stored corpus histograms."""
    if not histograms:
        raise ValidationError("corpus statistics need at least one histogram")
    stacked = np.stack([h.counts for h in histograms])
    return CorpusStats(n=len(histograms), df=(stacked > 0).sum(axis=0).astype(np.int64))


def weight(histogram: WordHistogram, stats: CorpusStats) -> np.ndarray:
    """tf-idf weighting followed by l2 normalization.

    Component m is (1 + ln tf) * ln(N / df) when both tf and df are positive
    and exactly 0 otherwise; a vector with no positive component stays all
    zero instead of being normalized.
    """
    if stats.n < 1:
        raise ValidationError("corpus statistics are empty")
    tf = np.asarray(histogram.counts, dtype=np.int64)
    df = np.asarray(stats.df, dtype=np.int64)
    if tf.shape != df.shape:
        raise ValidationError(
            f"histogram has {tf.shape[0]} words but stats cover {df.shape[0]}"
        )
    raw = np.zeros(tf.shape[0], dtype=np.float64)
    active = (tf > 0) & (df > 0)
    if np.any(active):
        raw[active] = (1.0 + np.log(tf[active])) * np.log(stats.n / df[active])
    norm = float(np.sqrt(np.sum(raw * raw)))
    if norm > 0.0:
        raw /= norm
    return raw


def describe(img: np.ndarray, codebook: Codebook, stats: CorpusStats) -> np.ndarray:
    """Weighted descriptor of one image against frozen database statistics.

    Queries pass the stats of the stored corpus; the query's own counts never
    update df or N.
    """
    return weight(image_word_histogram(img, codebook), stats)
