"""Privacy-preserving content-based image retrieval over EtC images.

Images are encrypted with block scrambling plus per-block rotation/inversion
(EtC images); patch descriptors are Haar-transformed HSV color histograms of
the same 16x16 blocks, so every retrieval artifact built from encrypted
images matches the plain-image artifact bit for bit on the lossless path.
"""

from .codebook import (
    ClusteringConfig,
    Codebook,
    assign,
    assign_batch,
    canonicalize_patch_set,
    kmeans,
)
from .crypto import (
    KeySet,
    apply_dihedral,
    decrypt,
    derive_dihedral_codes,
    derive_image_keys,
    derive_permutation,
    encrypt,
    invert_dihedral,
    load_key_file,
    save_key_file,
)
from .descriptor import (
    CorpusStats,
    WordHistogram,
    compute_corpus_stats,
    describe,
    image_patch_descriptors,
    image_word_histogram,
    weight,
)
from .errors import (
    ArtifactMismatchError,
    DimensionError,
    EtcbirError,
    ValidationError,
)
from .evaluation import (
    ScenarioConfig,
    ScenarioReport,
    average_precision,
    mean_ap,
    run_scenario,
)
from .image import (
    BlockGrid,
    assemble_blocks,
    crop_to_blocks,
    jpeg_cycle,
    load_image,
    partition_blocks,
    rgb_to_hsv,
    rgb_to_hsv_array,
    save_image,
)
from .manifest import ManifestRow, group_members, load_manifest, write_manifest
from .retrieval import Index, IndexEntry, RankedHit, build_index
from .rng import Splitmix64, fisher_yates_permutation
from .scd import block_histogram, block_histograms, haar_transform, scd, scd_batch
from .store import (
    check_codebook_reference,
    file_sha256,
    load_codebook,
    load_index,
    save_codebook,
    save_index,
)

__version__ = "0.1.0"

__all__ = [
    "ArtifactMismatchError",
    "BlockGrid",
    "ClusteringConfig",
    "Codebook",
    "CorpusStats",
    "DimensionError",
    "EtcbirError",
    "Index",
    "IndexEntry",
    "KeySet",
    "ManifestRow",
    "RankedHit",
    "ScenarioConfig",
    "ScenarioReport",
    "Splitmix64",
    "ValidationError",
    "WordHistogram",
    "apply_dihedral",
    "assemble_blocks",
    "assign",
    "assign_batch",
    "average_precision",
    "block_histogram",
    "block_histograms",
    "build_index",
    "canonicalize_patch_set",
    "check_codebook_reference",
    "compute_corpus_stats",
    "crop_to_blocks",
    "decrypt",
    "derive_dihedral_codes",
    "derive_image_keys",
    "derive_permutation",
    "describe",
    "encrypt",
    "file_sha256",
    "fisher_yates_permutation",
    "group_members",
    "haar_transform",
    "image_patch_descriptors",
    "image_word_histogram",
    "invert_dihedral",
    "jpeg_cycle",
    "kmeans",
    "load_codebook",
    "load_image",
    "load_index",
    "load_key_file",
    "load_manifest",
    "mean_ap",
    "partition_blocks",
    "rgb_to_hsv",
    "rgb_to_hsv_array",
    "run_scenario",
    "save_codebook",
    "save_image",
    "save_index",
    "save_key_file",
    "scd",
    "scd_batch",
    "weight",
    "write_manifest",
]
