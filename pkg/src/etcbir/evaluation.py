"""Retrieval scoring (average precision, mAP) and whole-pipeline scenarios.

A scenario fixes what kind of images sit in the database and what kind arrive
as queries (plain or EtC, in any mix), builds the codebook and index from the
stored corpus, runs every query, and reports mAP. On the lossless path the
three plain/EtC combinations produce bitwise-identical descriptor stores and
therefore exactly equal mAP scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .codebook import ClusteringConfig, canonicalize_patch_set, kmeans
from .crypto import derive_image_keys, encrypt
from .descriptor import (
    LOG_BASE,
    compute_corpus_stats,
    image_patch_descriptors,
    image_word_histogram,
    weight,
)
from .errors import ValidationError
from .image import crop_to_blocks, jpeg_cycle, load_image
from .manifest import ManifestRow, group_members
from .retrieval import IndexEntry, build_index

STORED_KINDS = ("plain", "etc")


def average_precision(
    ranking: Sequence[str],
    relevant: Iterable[str],
    group_size: int,
    database_size: int,
) -> float:
    """Average precision of one ranked result list.

    Sums precision-at-n over the ranks n holding a relevant image and divides
    by the ground-truth group size. The ranking must cover the whole database.
    """
    relevant_set = frozenset(relevant)
    if len(ranking) != database_size:
        raise ValidationError(
            f"ranking covers {len(ranking)} images, database holds {database_size}"
        )
    if len(relevant_set) != group_size:
        raise ValidationError(
            f"relevant set has {len(relevant_set)} ids, group size says {group_size}"
        )
    if group_size < 1:
        raise ValidationError("ground-truth group must have at least one member")
    hits = 0
    total = 0.0
    for position, image_id in enumerate(ranking, start=1):
        if image_id in relevant_set:
            hits += 1
            total += hits / position
    return total / group_size


def mean_ap(aps: Sequence[float]) -> float:
    """Arithmetic mean of per-query average precisions."""
    if len(aps) == 0:
        raise ValidationError("mAP needs at least one query")
    return float(sum(aps) / len(aps))


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one evaluation run depends on.

    stored_kind and query_kind select plain or EtC materialization; per-image
    keys derive from the two master seeds, so stored and query encryptions use
    independent key sets. query_ids of None means every stored image queries
    in manifest order.
    """

    stored_kind: str
    query_kind: str
    clustering: ClusteringConfig
    store_key_seed: int = 0
    query_key_seed: int = 1
    count_self_match: bool = True
    jpeg_quality: int | None = None
    query_ids: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        for label, kind in (("stored", self.stored_kind), ("query", self.query_kind)):
            if kind not in STORED_KINDS:
                raise ValidationError(
                    f"{label} kind must be one of {STORED_KINDS}, got {kind!r}"
                )

    def echo(self, query_count: int) -> dict:
        return {
            "stored_kind": self.stored_kind,
            "query_kind": self.query_kind,
            "codebook_size": self.clustering.m,
            "clustering_seed": self.clustering.seed,
            "max_iters": self.clustering.max_iters,
            "tol": self.clustering.tol,
            "store_key_seed": self.store_key_seed,
            "query_key_seed": self.query_key_seed,
            "count_self_match": self.count_self_match,
            "jpeg_quality": self.jpeg_quality,
            "log_base": LOG_BASE,
            "query_count": query_count,
        }


@dataclass(frozen=True)
class ScenarioReport:
    config: dict
    per_query: tuple[tuple[str, float], ...]
    mean_average_precision: float


def _materialize(
    img: np.ndarray, kind: str, keys, jpeg_quality: int | None
) -> np.ndarray:
    out = crop_to_blocks(img)
    if kind == "etc":
        out = encrypt(out, keys)
    if jpeg_quality is not None:
        out = jpeg_cycle(out, jpeg_quality)
    return out


def run_scenario(rows: list[ManifestRow], config: ScenarioConfig) -> ScenarioReport:
    """Build the database per the scenario and score every query's AP.

    Pipeline: materialize the stored corpus, cluster the canonicalized patch
    set into the codebook, freeze corpus statistics, index the weighted
    descriptors, then describe each query with the frozen stats and rank the
    whole database.
    """
    if not rows:
        raise ValidationError("scenario needs a non-empty manifest")
    plain: dict[str, np.ndarray] = {row.image_id: load_image(row.path) for row in rows}
    row_index = {row.image_id: i for i, row in enumerate(rows)}

    stored: dict[str, np.ndarray] = {}
    for i, row in enumerate(rows):
        keys = derive_image_keys(config.store_key_seed, i)
        stored[row.image_id] = _materialize(
            plain[row.image_id], config.stored_kind, keys, config.jpeg_quality
        )

    patches = np.vstack([image_patch_descriptors(stored[row.image_id]) for row in rows])
    codebook = kmeans(canonicalize_patch_set(patches), config.clustering)

    histograms = [
        image_word_histogram(stored[row.image_id], codebook) for row in rows
    ]
    stats = compute_corpus_stats(histograms)
    index = build_index(
        [
            IndexEntry(
                image_id=row.image_id,
                owner_id=row.owner_id,
                values=weight(histograms[i], stats),
            )
            for i, row in enumerate(rows)
        ]
    )

    groups = group_members(rows)
    group_of = {row.image_id: row.group_id for row in rows}
    query_ids = (
        list(config.query_ids)
        if config.query_ids is not None
        else [row.image_id for row in rows]
    )

    per_query: list[tuple[str, float]] = []
    for query_id in query_ids:
        if query_id not in row_index:
            raise ValidationError(f"query id {query_id!r} is not in the manifest")
        keys = derive_image_keys(config.query_key_seed, row_index[query_id])
        query_img = _materialize(
            plain[query_id], config.query_kind, keys, config.jpeg_quality
        )
        descriptor = weight(image_word_histogram(query_img, codebook), stats)
        ranking = [hit.image_id for hit in index.query(descriptor, k=len(index))]
        relevant = set(groups[group_of[query_id]])
        if not config.count_self_match:
            relevant.discard(query_id)
            ranking = [image_id for image_id in ranking if image_id != query_id]
        if not relevant:
            raise ValidationError(
                f"query {query_id!r} has no relevant images once the self match "
                "is excluded"
            )
        ap = average_precision(ranking, relevant, len(relevant), len(ranking))
        per_query.append((query_id, ap))

    return ScenarioReport(
        config=config.echo(len(query_ids)),
        per_query=tuple(per_query),
        mean_average_precision=mean_ap([ap for _, ap in per_query]),
    )
