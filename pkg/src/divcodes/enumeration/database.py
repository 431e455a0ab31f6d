"""Persistent store of canonical code representatives keyed by ``(n, k)``."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path

from ..gf2 import FormatError, GeneratorMatrix, format_matrix_line, parse_matrix_line
from ..spectra import WeightDistribution, weight_distribution
from .canonical import CanonicalKey

__all__ = ["CodeRecord", "CodeDatabase", "CorruptDatabase", "format_table"]


class CorruptDatabase(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class CodeRecord:
    key: CanonicalKey
    aut: int

    @property
    def n(self) -> int:
        return self.key.n

    @property
    def k(self) -> int:
        return self.key.k

    @property
    def matrix(self) -> GeneratorMatrix:
        return self.key.matrix()

    @property
    def weights(self) -> WeightDistribution:
        return weight_distribution(self.matrix)

    @property
    def projective(self) -> bool:
        cols = self.key.columns
        return 0 not in cols and len(set(cols)) == len(cols)

    def line(self) -> str:
        return format_matrix_line(self.matrix, canonical=True, extra=f"key={self.key.hex()} aut={self.aut}")


class CodeDatabase:
    """Deduplicated records plus run parameters and a resumption frontier."""

    def __init__(self, params: dict | None = None):
        self.params: dict[str, str] = {str(k): str(v) for k, v in (params or {}).items()}
        self.frontier: list[str] = []
        self._buckets: dict[tuple[int, int], dict[CanonicalKey, CodeRecord]] = {}
        self._lock = threading.Lock()

    def insert(self, record: CodeRecord) -> bool:
        """Insert if absent; returns False for a duplicate canonical key."""
        with self._lock:
            bucket = self._buckets.setdefault((record.n, record.k), {})
            if record.key in bucket:
                return False
            bucket[record.key] = record
            return True

    def __contains__(self, key: CanonicalKey) -> bool:
        return key in self._buckets.get((key.n, key.k), {})

    def __len__(self) -> int:
        return sum(len(b) for b in self._buckets.values())

    def records(self, n: int | None = None, k: int | None = None) -> list[CodeRecord]:
        out = []
        for (nn, kk), bucket in self._buckets.items():
            if (n is None or nn == n) and (k is None or kk == k):
                out.extend(bucket.values())
        return sorted(out, key=lambda r: r.key)

    def __iter__(self):
        return iter(self.records())

    def filtered(self, predicate) -> "CodeDatabase":
        db = CodeDatabase(self.params)
        for r in self.records():
            if predicate(r):
                db.insert(r)
        return db

    def counts(self) -> dict[tuple[int, int], int]:
        return {nk: len(b) for nk, b in sorted(self._buckets.items()) if b}

    def to_text(self) -> str:
        lines = [f"# param {k}={v}" for k, v in sorted(self.params.items())]
        lines += [f"# frontier {f}" for f in self.frontier]
        lines += [r.line() for r in self.records()]
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(self.to_text())
        tmp.replace(path)

    @classmethod
    def from_text(cls, text: str) -> "CodeDatabase":
        db = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("param "):
                    key, sep, value = body[6:].partition("=")
                    if not sep:
                        raise CorruptDatabase(lineno, f"malformed parameter {body!r}")
                    db.params[key.strip()] = value.strip()
                elif body.startswith("frontier "):
                    db.frontier.append(body[9:].strip())
                continue
            try:
                g, extra = parse_matrix_line(line)
            except FormatError as exc:
                raise CorruptDatabase(lineno, str(exc)) from None
            try:
                aut = int(extra["aut"])
                stored = extra["key"]
            except (KeyError, ValueError):
                raise CorruptDatabase(lineno, "record needs key=<hex> and aut=<int>") from None
            key = CanonicalKey(g.n, g.k, tuple(sorted(g.columns())))
            if key.hex() != stored:
                raise CorruptDatabase(lineno, f"key mismatch: stored {stored}, computed {key.hex()}")
            if not db.insert(CodeRecord(key, aut)):
                raise CorruptDatabase(lineno, "duplicate record")
        return db

    @classmethod
    def read(cls, path) -> "CodeDatabase":
        return cls.from_text(Path(path).read_text())

    def table(self, fmt: str = "paper-table") -> str:
        return format_table(self.counts(), fmt)


def format_table(counts: dict[tuple[int, int], int], fmt: str = "paper-table") -> str:
    """Render ``(n, k) -> count`` as a k-by-n grid.

    Columns without any code are dropped; in each row, cells left of the
    first length admitting a code of that dimension are blank.
    """
    if not counts:
        return ""
    lengths = sorted({n for (n, _), c in counts.items() if c})
    dims = sorted({k for (_, k), c in counts.items() if c})
    first = {k: min(n for (n, kk), c in counts.items() if kk == k and c) for k in dims}
    rows = [["k/n"] + [str(n) for n in lengths]]
    for k in range(min(dims), max(dims) + 1):
        row = [str(k)]
        for n in lengths:
            if k not in first or n < first[k]:
                row.append("")
            else:
                row.append(str(counts.get((n, k), 0)))
        rows.append(row)
    if fmt == "tsv":
        return "\n".join("\t".join(r) for r in rows) + "\n"
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join(" ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip() for r in rows) + "\n"
