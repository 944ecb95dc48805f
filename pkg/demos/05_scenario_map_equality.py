# The headline experiment at desk scale: plain-vs-plain, EtC-vs-EtC, and
# EtC-query-vs-plain-store all score the same mAP.
#
# On the lossless path the equality is exact, because every descriptor in
# every scenario is bitwise identical. With JPEG in the loop the guarantee
# relaxes to a tolerance (the codec is not rotation-invariant); on this
# corpus the colors sit far from histogram-bin edges, so codec error never
# moves a bin and the scores still agree.

import tempfile

from etcbir import ClusteringConfig, ScenarioConfig, load_manifest, run_scenario
from demo_corpus import build_corpus, write_corpus_to

workdir = tempfile.mkdtemp(prefix="etcbir-demo-")
manifest = write_corpus_to(workdir, build_corpus(seed=6, groups=8, members=4))
rows = load_manifest(manifest)
print(f"corpus of {len(rows)} images in {workdir}")

SCENARIOS = (
    ("plain images vs plain images", "plain", "plain"),
    ("EtC images vs EtC images", "etc", "etc"),
    ("EtC images vs plain images", "plain", "etc"),  # stored plain, query EtC
)


def score(stored, query, jpeg_quality=None):
    config = ScenarioConfig(
        stored_kind=stored,
        query_kind=query,
        clustering=ClusteringConfig(m=16, seed=11),
        store_key_seed=1234,   # database keys ...
        query_key_seed=5678,   # ... never shared with the querying user
        jpeg_quality=jpeg_quality,
    )
    return run_scenario(rows, config).mean_average_precision


print("\nlossless path:")
lossless = {}
for label, stored, query in SCENARIOS:
    lossless[label] = score(stored, query)
    print(f"  {label:34s} mAP = {lossless[label]:.10f}")
print("all three exactly equal:", len(set(lossless.values())) == 1)

print("\nJPEG quality 90 path:")
jpeg = {}
for label, stored, query in SCENARIOS:
    jpeg[label] = score(stored, query, jpeg_quality=90)
    print(f"  {label:34s} mAP = {jpeg[label]:.10f}")
spread = max(jpeg.values()) - min(jpeg.values())
print(f"spread across scenarios: {spread:.6f} (tolerance 0.02)")
