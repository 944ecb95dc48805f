# The whole pipeline through the command-line surface.
#
# Mirrors the system model: the owner encrypts and uploads, the third party
# builds the codebook and index from what it received, a user queries with an
# image encrypted under their own key, and an evaluation run reports mAP.

import tempfile
from pathlib import Path

from etcbir.cli import main
from demo_corpus import build_corpus, write_corpus_to

root = Path(tempfile.mkdtemp(prefix="etcbir-demo-cli-"))
manifest = write_corpus_to(root / "plain", build_corpus(seed=8, groups=4, members=4))
print(f"workspace: {root}")


def run(*argv):
    printable = " ".join(str(a) for a in argv)
    print(f"\n$ etcbir {printable}")
    status = main([str(a) for a in argv])
    print(f"(exit {status})")
    assert status == 0, printable


# the data owner encrypts the whole corpus; keys stay on the owner side
run("encrypt", "--manifest", manifest, "--out-dir", root / "etc",
    "--keys-dir", root / "keys", "--master-key-seed", "20240901")

# the third party works only with the EtC uploads
etc_manifest = root / "etc" / "manifest.tsv"
run("build-codebook", etc_manifest, root / "codebook.json",
    "--codebook-size", "12", "--seed", "3")
run("index", etc_manifest, root / "codebook.json", root / "index.json")

# the user queries with a fresh key the third party never sees
query_plain = root / "plain" / "img00.png"
run("encrypt", query_plain, root / "query.png", "--master-key-seed", "555")
run("query", root / "index.json", root / "codebook.json", root / "query.png",
    "--top-k", "4")

# decrypting a retrieved EtC image with the owner's key file
run("decrypt", root / "etc" / "img00.png", root / "img00_recovered.png",
    "--key-file", root / "keys" / "img00.key.json")

# the evaluation harness over the same corpus
run("evaluate", manifest, "--codebook-size", "12", "--seed", "3",
    "--stored-kind", "etc", "--query-kind", "etc",
    "--master-key-seed", "1", "--query-key-seed", "2")
