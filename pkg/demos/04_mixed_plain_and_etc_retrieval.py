# Mixed use: a plain-image database queried with an encrypted image.
#
# The user encrypts the query with their own key, one the database owner has
# never seen. Because descriptors are encryption-invariant, the ranked result
# list is identical to querying with the plain image.

import numpy as np

from etcbir import (
    ClusteringConfig,
    IndexEntry,
    KeySet,
    build_index,
    canonicalize_patch_set,
    compute_corpus_stats,
    describe,
    encrypt,
    image_patch_descriptors,
    image_word_histogram,
    kmeans,
    weight,
)
from demo_corpus import build_corpus

corpus = build_corpus(seed=4, groups=5, members=4)
print(f"indexing {len(corpus)} plain images")

images = {image_id: pixels for image_id, _, _, pixels in corpus}
patches = np.vstack([image_patch_descriptors(p) for p in images.values()])
codebook = kmeans(canonicalize_patch_set(patches), ClusteringConfig(m=12, seed=5))

histograms = {i: image_word_histogram(p, codebook) for i, p in images.items()}
stats = compute_corpus_stats(list(histograms.values()))
index = build_index(
    [
        IndexEntry(image_id=image_id, owner_id=owner_id,
                   values=weight(histograms[image_id], stats))
        for image_id, _, owner_id, _ in corpus
    ]
)

query_id = corpus[0][0]
plain_query = describe(images[query_id], codebook, stats)

user_keys = KeySet(k1=0xA5A5A5A5, k2=0x5A5A5A5A)  # the user's own key set
etc_query = describe(encrypt(images[query_id], user_keys), codebook, stats)
print("query descriptors bitwise equal:", np.array_equal(plain_query, etc_query))

plain_hits = index.query(plain_query, k=5)
etc_hits = index.query(etc_query, k=5)
print("ranked lists identical:", plain_hits == etc_hits)
print(f"top 5 for query {query_id} (its group mates are the other img0*):")
for hit in etc_hits:
    print(f"  rank {hit.rank}: {hit.image_id} (owner {hit.owner_id}) "
          f"distance {hit.distance:.6f}")
