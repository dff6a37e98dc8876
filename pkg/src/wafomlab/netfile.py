"""Reading and writing the ``wafomnet v1`` text format.

::

    wafomnet v1 <m_1,...,m_k> <s> <n> <d>
    <d blocks of s lines, each with n whitespace separated entries>

Cyclic entries are single residues; product-group entries are comma-joined
residue tuples such as ``1,2``.  Blank lines and ``#`` comments are ignored.
Generating matrices C_1..C_s are stored through their basis X_1..X_d.
"""

from __future__ import annotations

import os
from typing import IO

import numpy as np

from .abelian import GroupSpec
from .errors import NetFormatError
from .netgen import GeneratingMatrices, GeneratorSet

MAGIC = "wafomnet"
VERSION = "v1"


def format_net(obj: GeneratorSet | GeneratingMatrices) -> str:
    gens = obj.to_generator_set() if isinstance(obj, GeneratingMatrices) else obj
    group = gens.group
    lines = [f"{MAGIC} {VERSION} {group} {gens.s} {gens.n} {gens.d}"]
    for k, mat in enumerate(gens.generators):
        if k:
            lines.append("")
        for row in mat:
            if group.is_cyclic:
                lines.append(" ".join(str(int(x)) for x in row))
            else:
                lines.append(" ".join(",".join(map(str, group.decode(x))) for x in row))
    return "\n".join(lines) + "\n"


def write_net_file(obj: GeneratorSet | GeneratingMatrices, dest: str | os.PathLike | IO[str]) -> None:
    text = format_net(obj)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def parse_net_text(text: str) -> GeneratorSet:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    if not rows:
        raise NetFormatError("empty net file")
    head = rows[0].split()
    if len(head) != 6 or head[0] != MAGIC or head[1] != VERSION:
        raise NetFormatError(f"malformed header {rows[0]!r}; expected "
                             f"'{MAGIC} {VERSION} <moduli> <s> <n> <d>'")
    try:
        group = GroupSpec.parse(head[2])
        s, n, d = (int(x) for x in head[3:])
    except ValueError as exc:
        raise NetFormatError(f"malformed header {rows[0]!r}: {exc}") from exc
    if s < 1 or n < 1:
        raise NetFormatError(f"s and n must be positive, got s={s}, n={n}")
    if d < 1:
        raise NetFormatError("empty generator list (d must be >= 1)")
    body = rows[1:]
    if len(body) != d * s:
        raise NetFormatError(f"truncated or oversized body: expected {d * s} matrix rows, got {len(body)}")
    gens = np.zeros((d, s, n), dtype=group.dtype)
    for r, line in enumerate(body):
        k, i = divmod(r, s)
        tokens = line.split()
        if len(tokens) != n:
            raise NetFormatError(f"generator {k + 1}, row {i + 1}: expected {n} entries, got {len(tokens)}")
        for j, tok in enumerate(tokens):
            gens[k, i, j] = _parse_entry(group, tok, k, i, j)
    return GeneratorSet(group, s, n, gens)


def _parse_entry(group: GroupSpec, tok: str, k: int, i: int, j: int) -> int:
    where = f"generator {k + 1}, row {i + 1}, column {j + 1}"
    try:
        residues = tuple(int(x) for x in tok.split(","))
    except ValueError:
        raise NetFormatError(f"{where}: cannot parse entry {tok!r}") from None
    if len(residues) != group.rank:
        raise NetFormatError(f"{where}: entry {tok!r} needs {group.rank} residue(s)")
    for r, m in zip(residues, group.moduli):
        if not 0 <= r < m:
            raise NetFormatError(f"{where}: digit {r} out of range for modulus {m}")
    return group.encode(residues)


def parse_net_file(src: str | os.PathLike | IO[str]) -> GeneratorSet:
    if hasattr(src, "read"):
        return parse_net_text(src.read())
    with open(src, encoding="utf-8") as fh:
        return parse_net_text(fh.read())

