"""On-disk containers for codebooks and descriptor indexes.

Both formats are versioned JSON with float payloads packed as little-endian
IEEE-754 doubles in base64, so a reload is bitwise lossless and rewriting an
unchanged artifact reproduces the identical file bytes. Writes go through a
temp file and an atomic rename.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .codebook import Codebook
from .descriptor import LOG_BASE, CorpusStats
from .errors import ArtifactMismatchError, ValidationError
from .retrieval import Index, IndexEntry, build_index

CODEBOOK_FORMAT = "etcbir-codebook"
INDEX_FORMAT = "etcbir-index"
FORMAT_VERSION = 1


def _pack(values: np.ndarray) -> str:
    return base64.b64encode(
        np.ascontiguousarray(values, dtype="<f8").tobytes()
    ).decode("ascii")


def _unpack(blob: str, shape: tuple[int, ...]) -> np.ndarray:
    data = np.frombuffer(base64.b64decode(blob), dtype="<f8")
    return data.reshape(shape).astype(np.float64)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def save_codebook(path: str | Path, codebook: Codebook, stats: CorpusStats) -> None:
    """Write a codebook plus the corpus statistics of the corpus it came from."""
    payload = {
        "format": CODEBOOK_FORMAT,
        "version": FORMAT_VERSION,
        "m": codebook.m,
        "dim": codebook.dim,
        "words": _pack(codebook.words),
        "provenance": {"seed": codebook.seed, "iterations": codebook.iterations},
        "stats": {
            "n": stats.n,
            "df": [int(v) for v in stats.df],
            "log_base": LOG_BASE,
        },
    }
    _write_atomic(Path(path), _dump(payload))


def _load_json(path: Path, expected_format: str) -> dict:
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != expected_format:
        raise ValidationError(f"{path} is not a {expected_format} file")
    if payload.get("version") != FORMAT_VERSION:
        raise ValidationError(
            f"{path} has unsupported version {payload.get('version')!r}"
        )
    return payload


def _stats_from_payload(payload: dict, path: Path) -> CorpusStats:
    stats = payload.get("stats")
    if not isinstance(stats, dict):
        raise ValidationError(f"{path} is missing corpus statistics")
    if stats.get("log_base") != LOG_BASE:
        raise ValidationError(
            f"{path} was weighted with log base {stats.get('log_base')!r}, "
            f"this build uses {LOG_BASE!r}"
        )
    return CorpusStats(
        n=int(stats["n"]), df=np.asarray(stats["df"], dtype=np.int64)
    )


def load_codebook(path: str | Path) -> tuple[Codebook, CorpusStats]:
    """Read a codebook file back; words reload bitwise."""
    file_path = Path(path)
    payload = _load_json(file_path, CODEBOOK_FORMAT)
    m, dim = int(payload["m"]), int(payload["dim"])
    words = _unpack(payload["words"], (m, dim))
    provenance = payload.get("provenance", {})
    codebook = Codebook(
        words=words,
        seed=int(provenance.get("seed", 0)),
        iterations=int(provenance.get("iterations", 0)),
    )
    return codebook, _stats_from_payload(payload, file_path)


def save_index(
    path: str | Path,
    index: Index,
    stats: CorpusStats,
    codebook_sha256: str,
) -> None:
    """Write the descriptor store: entries in insertion order, stats, and the
    hash of the codebook file the descriptors were computed with."""
    payload = {
        "format": INDEX_FORMAT,
        "version": FORMAT_VERSION,
        "codebook_sha256": codebook_sha256,
        "m": len(stats.df),
        "stats": {
            "n": stats.n,
            "df": [int(v) for v in stats.df],
            "log_base": LOG_BASE,
        },
        "entries": [
            {
                "image_id": entry.image_id,
                "owner_id": entry.owner_id,
                "values": _pack(entry.values),
            }
            for entry in index
        ],
    }
    _write_atomic(Path(path), _dump(payload))


def load_index(path: str | Path) -> tuple[Index, CorpusStats, str]:
    """Read a descriptor store; returns (index, stats, codebook hash)."""
    file_path = Path(path)
    payload = _load_json(file_path, INDEX_FORMAT)
    m = int(payload["m"])
    entries = [
        IndexEntry(
            image_id=item["image_id"],
            owner_id=item["owner_id"],
            values=_unpack(item["values"], (m,)),
        )
        for item in payload.get("entries", [])
    ]
    stats = _stats_from_payload(payload, file_path)
    return build_index(entries), stats, str(payload["codebook_sha256"])


def check_codebook_reference(index_hash: str, codebook_path: str | Path) -> None:
    """Refuse to pair an index with a codebook file it was not built from."""
    actual = file_sha256(codebook_path)
    if actual != index_hash:
        raise ArtifactMismatchError(
            f"index was built with codebook {index_hash[:12]}..., "
            f"but {codebook_path} hashes to {actual[:12]}..."
        )
