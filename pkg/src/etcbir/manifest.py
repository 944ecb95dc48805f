"""Corpus manifests: one TSV row per image with id, group, and owner."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError


@dataclass(frozen=True)
class ManifestRow:
    path: Path
    image_id: str
    group_id: str
    owner_id: str


def load_manifest(path: str | Path) -> list[ManifestRow]:
    """Parse a manifest TSV.

    Columns: image path, image id, group id, owner id. Lines starting with '#'
    and blank lines are ignored. Relative image paths resolve against the
    manifest's own directory. Image ids must be unique.
    """
    manifest_path = Path(path)
    base = manifest_path.parent
    rows: list[ManifestRow] = []
    seen: set[str] = set()
    for lineno, line in enumerate(
        manifest_path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 4:
            raise ValidationError(
                f"{manifest_path}:{lineno}: expected 4 tab-separated fields, "
                f"got {len(fields)}"
            )
        raw_path, image_id, group_id, owner_id = (f.strip() for f in fields)
        if not raw_path or not image_id or not group_id or not owner_id:
            raise ValidationError(f"{manifest_path}:{lineno}: empty field")
        if image_id in seen:
            raise ValidationError(
                f"{manifest_path}:{lineno}: duplicate image id {image_id!r}"
            )
        seen.add(image_id)
        image_path = Path(raw_path)
        if not image_path.is_absolute():
            image_path = base / image_path
        rows.append(
            ManifestRow(
                path=image_path,
                image_id=image_id,
                group_id=group_id,
                owner_id=owner_id,
            )
        )
    if not rows:
        raise ValidationError(f"{manifest_path}: manifest lists no images")
    return rows


def write_manifest(path: str | Path, rows: list[ManifestRow]) -> None:
    """Write rows in manifest TSV form.

    Image paths are stored relative to the manifest's directory (the form
    load_manifest resolves them from), so a corpus directory can be moved or
    mounted elsewhere as long as it moves as a whole.
    """
    manifest_path = Path(path)
    base = manifest_path.resolve().parent
    lines = ["# path\timage_id\tgroup_id\towner_id"]
    for row in rows:
        rel = os.path.relpath(row.path.resolve(), base)
        lines.append(f"{rel}\t{row.image_id}\t{row.group_id}\t{row.owner_id}")
    manifest_path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def group_members(rows: list[ManifestRow]) -> dict[str, list[str]]:
    """Image ids per group id, in manifest order."""
    groups: dict[str, list[str]] = {}
    for row in rows:
        groups.setdefault(row.group_id, []).append(row.image_id)
    return groups
