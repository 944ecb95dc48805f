"""Command-line surface: encrypt, decrypt, build-codebook, index, query,
evaluate.

Exit codes: 0 success, 1 usage error, 2 validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .codebook import ClusteringConfig, canonicalize_patch_set, kmeans
from .crypto import (
    decrypt,
    derive_image_keys,
    encrypt,
    load_key_file,
    save_key_file,
)
from .descriptor import (
    compute_corpus_stats,
    describe,
    image_patch_descriptors,
    image_word_histogram,
    weight,
)
from .errors import EtcbirError, ValidationError
from .evaluation import ScenarioConfig, ScenarioReport, run_scenario
from .image import load_image, save_image
from .manifest import ManifestRow, load_manifest, write_manifest
from .retrieval import IndexEntry, build_index
from .store import (
    check_codebook_reference,
    file_sha256,
    load_codebook,
    load_index,
    save_codebook,
    save_index,
)

_LOSSY_SUFFIXES = {".jpg", ".jpeg"}


class _UsageError(Exception):
    """Missing or inconsistent arguments that argparse alone cannot express."""


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _require_lossless(path: Path) -> Path:
    if path.suffix.lower() in _LOSSY_SUFFIXES:
        raise ValidationError(
            f"{path}: EtC images must be written to a lossless format (PNG/PPM)"
        )
    return path


def _cmd_encrypt(args: argparse.Namespace) -> int:
    if args.manifest is not None:
        if args.master_key_seed is None or args.out_dir is None or args.keys_dir is None:
            raise _UsageError(
                "manifest encryption needs --master-key-seed, --out-dir, and --keys-dir"
            )
        rows = load_manifest(args.manifest)
        out_dir = Path(args.out_dir)
        keys_dir = Path(args.keys_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        keys_dir.mkdir(parents=True, exist_ok=True)
        encrypted_rows = []
        for i, row in enumerate(rows):
            keys = derive_image_keys(args.master_key_seed, i)
            save_key_file(keys_dir / f"{row.image_id}.key.json", keys)
            out_path = out_dir / f"{row.image_id}.png"
            save_image(out_path, encrypt(load_image(row.path), keys))
            encrypted_rows.append(
                ManifestRow(
                    path=out_path,
                    image_id=row.image_id,
                    group_id=row.group_id,
                    owner_id=row.owner_id,
                )
            )
        write_manifest(out_dir / "manifest.tsv", encrypted_rows)
        print(f"encrypted {len(rows)} images into {out_dir}")
        return 0

    if args.input is None or args.output is None:
        raise _UsageError("single-image mode needs INPUT and OUTPUT paths")
    key_path = Path(args.key_file) if args.key_file else None
    if key_path is not None and key_path.exists():
        keys = load_key_file(key_path)
    elif args.master_key_seed is not None:
        keys = derive_image_keys(args.master_key_seed, args.image_index)
        if key_path is not None:
            save_key_file(key_path, keys)
    else:
        raise _UsageError(
            "no key source: pass --key-file pointing at an existing key file, "
            "or --master-key-seed to derive one"
        )
    out_path = _require_lossless(Path(args.output))
    save_image(out_path, encrypt(load_image(args.input), keys))
    return 0


def _cmd_decrypt(args: argparse.Namespace) -> int:
    keys = load_key_file(args.key_file)
    save_image(args.output, decrypt(load_image(args.input), keys))
    return 0


def _clustering_config(args: argparse.Namespace) -> ClusteringConfig:
    return ClusteringConfig(
        m=args.codebook_size,
        seed=args.seed,
        max_iters=args.max_iters,
        tol=args.tol,
    )


def _cmd_build_codebook(args: argparse.Namespace) -> int:
    rows = load_manifest(args.manifest)
    images = [load_image(row.path) for row in rows]
    patches = np.vstack([image_patch_descriptors(img) for img in images])
    codebook = kmeans(canonicalize_patch_set(patches), _clustering_config(args))
    histograms = [image_word_histogram(img, codebook) for img in images]
    save_codebook(args.output, codebook, compute_corpus_stats(histograms))
    print(f"codebook of {codebook.m} words from {patches.shape[0]} patches -> {args.output}")
    return 0


def _cmd_index(args: argparse.Namespace) -> int:
    rows = load_manifest(args.manifest)
    codebook, _ = load_codebook(args.codebook)
    histograms = []
    for row in rows:
        histograms.append(image_word_histogram(load_image(row.path), codebook))
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
    save_index(args.output, index, stats, file_sha256(args.codebook))
    print(f"indexed {len(index)} images -> {args.output}")
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    index, stats, codebook_hash = load_index(args.index)
    check_codebook_reference(codebook_hash, args.codebook)
    codebook, _ = load_codebook(args.codebook)
    descriptor = describe(load_image(args.image), codebook, stats)
    for hit in index.query(descriptor, k=args.top_k):
        print(f"{hit.rank}\t{hit.image_id}\t{hit.owner_id}\t{hit.distance:.17g}")
    return 0


def _report_lines(report: ScenarioReport) -> list[str]:
    lines = [
        "# config\t" + json.dumps(report.config, sort_keys=True),
        "# query_id\tap",
    ]
    for query_id, ap in report.per_query:
        lines.append(f"{query_id}\t{ap:.17g}")
    lines.append(f"mAP\t{report.mean_average_precision:.17g}")
    return lines


def _cmd_evaluate(args: argparse.Namespace) -> int:
    rows = load_manifest(args.manifest)
    query_ids: tuple[str, ...] | None = None
    if args.queries is not None:
        listed = [
            line.strip()
            for line in Path(args.queries).read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.strip().startswith("#")
        ]
        query_ids = tuple(listed)
    config = ScenarioConfig(
        stored_kind=args.stored_kind,
        query_kind=args.query_kind,
        clustering=_clustering_config(args),
        store_key_seed=args.master_key_seed,
        query_key_seed=args.query_key_seed,
        count_self_match=args.count_self_match,
        jpeg_quality=args.jpeg_quality,
        query_ids=query_ids,
    )
    report = run_scenario(rows, config)
    text = "\n".join(_report_lines(report)) + "\n"
    sys.stdout.write(text)
    if args.report is not None:
        Path(args.report).write_text(text, encoding="utf-8")
    return 0


def _add_clustering_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--codebook-size", type=int, required=True, help="number of visual words M")
    parser.add_argument("--seed", type=int, default=0, help="clustering seed")
    parser.add_argument("--max-iters", type=int, default=100)
    parser.add_argument("--tol", type=float, default=1e-9)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="etcbir", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encrypt", help="encrypt one image or a whole manifest")
    p.add_argument("input", nargs="?", help="plain image path (single-image mode)")
    p.add_argument("output", nargs="?", help="EtC image path (single-image mode)")
    p.add_argument("--key-file", help="key file to load, or to write when deriving")
    p.add_argument("--master-key-seed", type=int, help="derive keys from this seed")
    p.add_argument("--image-index", type=int, default=0, help="key index under the master seed")
    p.add_argument("--manifest", help="encrypt every image listed here")
    p.add_argument("--out-dir", help="directory for encrypted images (manifest mode)")
    p.add_argument("--keys-dir", help="directory for key files (manifest mode)")
    p.set_defaults(func=_cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt an EtC image with its key file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--key-file", required=True)
    p.set_defaults(func=_cmd_decrypt)

    p = sub.add_parser("build-codebook", help="cluster a corpus into visual words")
    p.add_argument("manifest")
    p.add_argument("output")
    _add_clustering_flags(p)
    p.set_defaults(func=_cmd_build_codebook)

    p = sub.add_parser("index", help="describe a corpus against a codebook")
    p.add_argument("manifest")
    p.add_argument("codebook")
    p.add_argument("output")
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("query", help="rank indexed images against a query image")
    p.add_argument("index")
    p.add_argument("codebook")
    p.add_argument("image")
    p.add_argument("--top-k", type=int, default=10)
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("evaluate", help="run one stored/query scenario and report mAP")
    p.add_argument("manifest")
    _add_clustering_flags(p)
    p.add_argument("--stored-kind", choices=("plain", "etc"), default="plain")
    p.add_argument("--query-kind", choices=("plain", "etc"), default="plain")
    p.add_argument("--master-key-seed", type=int, default=0, help="seed for stored-image keys")
    p.add_argument("--query-key-seed", type=int, default=1, help="seed for query-image keys")
    p.add_argument(
        "--count-self-match",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="treat the query itself as a ground-truth hit",
    )
    p.add_argument("--jpeg-quality", type=int, default=None, help="route images through JPEG")
    p.add_argument("--queries", help="file of query image ids, one per line")
    p.add_argument("--report", help="also write the report TSV here")
    p.set_defaults(func=_cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"etcbir: {exc}", file=sys.stderr)
        return 1
    except EtcbirError as exc:
        print(f"etcbir: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"etcbir: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
