"""Deterministic k-means: canonical ordering, clustering oracle, assignment."""

import itertools

import numpy as np
import pytest

from etcbir.codebook import (
    ClusteringConfig,
    Codebook,
    assign,
    assign_batch,
    canonicalize_patch_set,
    kmeans,
)
from etcbir.crypto import KeySet, encrypt
from etcbir.descriptor import image_patch_descriptors
from etcbir.errors import ValidationError

from conftest import make_group_corpus, random_seed64


def brute_force_two_means(points: np.ndarray) -> float:
    """Optimal 2-means objective by enumerating every bipartition."""
    n = len(points)
    best = np.inf
    for size in range(1, n):
        for left in itertools.combinations(range(n), size):
            mask = np.zeros(n, dtype=bool)
            mask[list(left)] = True
            wcss = 0.0
            for side in (points[mask], points[~mask]):
                center = side.mean(axis=0)
                wcss += float(((side - center) ** 2).sum())
            if wcss < best:
                best = wcss
    return best


def test_canonicalize_keeps_sorted_input_unchanged():
    arr = np.array([[0.0, 1.0], [0.0, 2.0], [1.0, 0.0]])
    assert np.array_equal(canonicalize_patch_set(arr), arr)


def test_canonicalize_normalizes_any_ordering():
    rng = np.random.default_rng(0)
    arr = rng.normal(size=(40, 8))
    shuffled = arr[rng.permutation(40)]
    assert np.array_equal(canonicalize_patch_set(arr), canonicalize_patch_set(shuffled))


def test_canonicalize_keeps_duplicates():
    arr = np.array([[1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])
    out = canonicalize_patch_set(arr)
    assert np.array_equal(out, np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 1.0]]))


def test_canonical_patch_set_identical_for_plain_and_encrypted_corpus():
    corpus = make_group_corpus(seed=3, groups=2, members=3, width=64, height=48)
    rng = np.random.default_rng(1)
    plain_patches = []
    etc_patches = []
    for _, _, _, img in corpus[:5]:
        keys = KeySet(k1=random_seed64(rng), k2=random_seed64(rng))
        plain_patches.append(image_patch_descriptors(img))
        etc_patches.append(image_patch_descriptors(encrypt(img, keys)))
    plain_canon = canonicalize_patch_set(np.vstack(plain_patches))
    etc_canon = canonicalize_patch_set(np.vstack(etc_patches))
    assert np.array_equal(plain_canon, etc_canon)


def test_single_cluster_is_the_mean():
    rng = np.random.default_rng(2)
    points = rng.normal(size=(30, 6))
    book = kmeans(points, ClusteringConfig(m=1, seed=9))
    assert np.allclose(book.words[0], points.mean(axis=0), rtol=0, atol=1e-12)


def test_two_separated_clusters_match_brute_force_optimum():
    rng = np.random.default_rng(3)
    left = rng.normal(loc=0.0, scale=0.05, size=(4, 3))
    right = rng.normal(loc=5.0, scale=0.05, size=(4, 3))
    points = canonicalize_patch_set(np.vstack([left, right]))
    book = kmeans(points, ClusteringConfig(m=2, seed=4))

    labels = assign_batch(points, book)
    wcss = 0.0
    for j in range(2):
        member = points[labels == j]
        assert len(member) > 0
        wcss += float(((member - member.mean(axis=0)) ** 2).sum())
        assert np.allclose(book.words[j], member.mean(axis=0), rtol=0, atol=1e-12)
    assert abs(wcss - brute_force_two_means(points)) < 1e-9


def test_kmeans_rerun_is_bitwise_identical():
    rng = np.random.default_rng(4)
    points = canonicalize_patch_set(rng.normal(size=(120, 16)))
    config = ClusteringConfig(m=8, seed=77)
    first = kmeans(points, config)
    second = kmeans(points, config)
    assert np.array_equal(first.words, second.words)
    assert first.iterations == second.iterations
    assert first.words.tobytes() == second.words.tobytes()


def test_kmeans_requires_enough_descriptors():
    with pytest.raises(ValidationError):
        kmeans(np.zeros((3, 4)), ClusteringConfig(m=5, seed=0))


def test_kmeans_handles_duplicate_heavy_input():
    # only two distinct values but three clusters: empty-cluster repair must fire
    points = np.array([[0.0, 0.0]] * 6 + [[9.0, 9.0]] * 6)
    book = kmeans(points, ClusteringConfig(m=3, seed=1))
    assert book.words.shape == (3, 2)
    assert np.all(np.isfinite(book.words))
    again = kmeans(points, ClusteringConfig(m=3, seed=1))
    assert np.array_equal(book.words, again.words)


def test_wcss_history_never_increases():
    rng = np.random.default_rng(5)
    points = canonicalize_patch_set(rng.normal(size=(200, 12)))
    book = kmeans(points, ClusteringConfig(m=6, seed=2, max_iters=40))
    history = book.wcss_history
    assert len(history) >= 1
    assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))


def test_assign_exact_word_and_tie_break():
    words = np.array([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0], [1.0, 0.0]])
    book = Codebook(words=words, seed=0, iterations=0)
    assert assign(np.array([3.0, 0.0]), book) == 2
    # equidistant between words 1 and 3 (identical): lowest index wins
    assert assign(np.array([1.0, 0.0]), book) == 1
    # halfway between words 0 and 1: tie breaks to 0
    assert assign(np.array([0.5, 0.0]), book) == 0


def test_assign_matches_exhaustive_scan_oracle():
    rng = np.random.default_rng(6)
    words = rng.normal(size=(4, 10))
    book = Codebook(words=words, seed=0, iterations=0)
    for _ in range(200):
        d = rng.normal(size=10)
        expected = min(
            range(4), key=lambda j: (float(((words[j] - d) ** 2).sum()), j)
        )
        assert assign(d, book) == expected
