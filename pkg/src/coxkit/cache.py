"""Advisory on-disk cache of the normalization table.

Versioned text format: a header line carrying the format version and the
generator order, then one record per line, word<TAB>normal_form.  The
cache only seeds the memo tables; results are identical with it deleted.
"""

from __future__ import annotations

import os

from coxkit.coxeter import GENS, Coxeter

FORMAT_VERSION = 1
FILENAME = "normal_forms.tsv"


def cache_path(directory: str) -> str:
    return os.path.join(directory, FILENAME)


def save(ctx: Coxeter, directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = cache_path(directory)
    lines = [f"coxkit-normal-forms\tv{FORMAT_VERSION}\torder={GENS}"]
    for word in sorted(ctx._canon):
        lines.append(f"{word}\t{ctx._canon[word]}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def load(ctx: Coxeter, directory: str) -> int:
    """Seed the context's memo table; returns the number of records used."""
    path = cache_path(directory)
    if not os.path.exists(path):
        return 0
    with open(path, encoding="ascii") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if len(header) != 3 or header[0] != "coxkit-normal-forms" \
                or header[1] != f"v{FORMAT_VERSION}" or header[2] != f"order={GENS}":
            return 0
        count = 0
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                continue
            word, canon = parts
            if set(word) <= set(GENS) and set(canon) <= set(GENS):
                ctx._canon.setdefault(word, canon)
                count += 1
    return count
