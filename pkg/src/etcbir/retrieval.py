"""Exhaustive nearest-neighbor index over weighted descriptors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class IndexEntry:
    """One stored image: ids plus its weighted descriptor."""

    image_id: str
    owner_id: str
    values: np.ndarray


@dataclass(frozen=True)
class RankedHit:
    image_id: str
    owner_id: str
    distance: float
    rank: int


class Index:
    """Immutable list of entries answering ranked l2 queries by full scan."""

    def __init__(self, entries: list[IndexEntry]):
        seen: set[str] = set()
        for entry in entries:
            if entry.image_id in seen:
                raise ValidationError(f"duplicate image id {entry.image_id!r}")
            seen.add(entry.image_id)
        self._entries = tuple(entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    @property
    def entries(self) -> tuple[IndexEntry, ...]:
        return self._entries

    def query(self, descriptor: np.ndarray, k: int) -> list[RankedHit]:
        """Top-k entries by l2 distance, ascending; ties break by image id.

        Distances are computed against every stored descriptor; at most
        min(k, len(index)) hits come back.
        """
        if k < 1:
            raise ValueError("k must be at least 1")
        q = np.asarray(descriptor, dtype=np.float64)
        scored = []
        for entry in self._entries:
            diff = entry.values - q
            distance = float(np.sqrt(np.sum(diff * diff)))
            scored.append((distance, entry.image_id, entry.owner_id))
        scored.sort(key=lambda item: (item[0], item[1]))
        return [
            RankedHit(image_id=image_id, owner_id=owner_id, distance=distance, rank=pos)
            for pos, (distance, image_id, owner_id) in enumerate(scored[:k], start=1)
        ]


def build_index(entries: list[IndexEntry]) -> Index:
    """Construct an index, rejecting duplicate image ids."""
    return Index(entries)
