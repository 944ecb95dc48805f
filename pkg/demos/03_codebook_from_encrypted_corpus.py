# A third party clustering encrypted uploads builds the same codebook it
# would have built from the plain images.
#
# Encryption reorders the corpus patch multiset, and k-means cares about
# order. Clustering therefore runs on a canonically sorted copy of the patch
# set, with every random choice driven by a seeded SplitMix64 stream: the
# result is bitwise reproducible and blind to encryption.

import numpy as np

from etcbir import (
    ClusteringConfig,
    KeySet,
    canonicalize_patch_set,
    encrypt,
    image_patch_descriptors,
    kmeans,
)
from demo_corpus import build_corpus

corpus = build_corpus(seed=2, groups=4, members=3)
images = [pixels for _, _, _, pixels in corpus]
print(f"corpus: {len(images)} images")

rng = np.random.default_rng(3)
etc_images = [
    encrypt(img, KeySet(k1=int(rng.integers(2**63)), k2=int(rng.integers(2**63))))
    for img in images
]

plain_patches = canonicalize_patch_set(
    np.vstack([image_patch_descriptors(img) for img in images])
)
etc_patches = canonicalize_patch_set(
    np.vstack([image_patch_descriptors(img) for img in etc_images])
)
print("canonical patch sequences equal:", np.array_equal(plain_patches, etc_patches))

config = ClusteringConfig(m=12, seed=99)
plain_book = kmeans(plain_patches, config)
etc_book = kmeans(etc_patches, config)
print("codebooks bitwise equal:",
      plain_book.words.tobytes() == etc_book.words.tobytes())
print(f"({plain_book.m} words, converged after {plain_book.iterations} iterations)")
