"""Corpus loading and word tokenization.

A corpus is a directory of UTF-8 ``.txt`` files plus a tab-separated
metadata table with the header ``filename<TAB>doc_id<TAB>year``.
"""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from comention.errors import DataError

# After masking, only letters, hyphens and spaces remain; a single hyphen
# joins two letter runs.
_TOKEN_RE = re.compile(r"[^\s-]+(?:-[^\s-]+)*")

METADATA_COLUMNS = ("filename", "doc_id", "year")


def tokenize(text: str) -> list[str]:
    """Split ``text`` into word tokens, preserving case.

    >>> tokenize("Lévi-Strauss und Habermas")
    ['Lévi-Strauss', 'und', 'Habermas']
    """
    # str.isalpha is exactly Unicode category L*; \w would also admit digits like "¹"
    masked = "".join(ch if ch.isalpha() or ch == "-" else " " for ch in text)
    return _TOKEN_RE.findall(masked)


@dataclass(frozen=True)
class Document:
    doc_id: str
    year: int
    text: str
    tokens: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(tokenize(self.text)))


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    ref: str = ""

    def __post_init__(self):
        if not self.documents:
            raise DataError("empty corpus")
        docs = tuple(sorted(self.documents, key=lambda d: d.doc_id))
        for a, b in zip(docs, docs[1:]):
            if a.doc_id == b.doc_id:
                raise DataError(f"duplicate doc_id {a.doc_id!r}")
        object.__setattr__(self, "documents", docs)

    @classmethod
    def from_texts(cls, items: Iterable[tuple[str, int, str]], ref: str = "") -> "Corpus":
        """Build a corpus from ``(doc_id, year, text)`` triples."""
        return cls(tuple(Document(doc_id, year, text) for doc_id, year, text in items), ref)

    @property
    def doc_count(self) -> int:
        return len(self.documents)

    @property
    def total_tokens(self) -> int:
        return sum(len(d.tokens) for d in self.documents)

    @property
    def mean_tokens(self) -> Fraction:
        return Fraction(self.total_tokens, self.doc_count)

    def __iter__(self):
        return iter(self.documents)

    def __len__(self):
        return len(self.documents)


def _read_text(path: Path) -> str:
    raw = path.read_bytes()
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        # offset relative to the raw file, BOM included
        offset = exc.start + (3 if raw.startswith(b"\xef\xbb\xbf") else 0)
        raise DataError(f"undecodable UTF-8 in {path.name} at byte offset {offset}") from None


def read_metadata(metadata_file: str | Path) -> list[tuple[str, str, int]]:
    """Parse the metadata table into ``(filename, doc_id, year)`` rows."""
    metadata_file = Path(metadata_file)
    if not metadata_file.is_file():
        raise DataError(f"missing metadata file {metadata_file}")
    rows = []
    with open(metadata_file, encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != METADATA_COLUMNS:
            raise DataError(
                f"{metadata_file.name}: header must be {'<TAB>'.join(METADATA_COLUMNS)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise DataError(f"{metadata_file.name}:{lineno}: expected 3 columns, got {len(row)}")
            filename, doc_id, year = (c.strip() for c in row)
            try:
                year_value = int(year)
            except ValueError:
                raise DataError(f"{metadata_file.name}:{lineno}: invalid year {year!r}") from None
            if not filename or not doc_id:
                raise DataError(f"{metadata_file.name}:{lineno}: empty filename or doc_id")
            rows.append((filename, doc_id, year_value))
    return rows


def load_corpus(corpus_dir: str | Path, metadata_file: str | Path) -> Corpus:
    """Load every document listed in ``metadata_file`` from ``corpus_dir``.

    Documents are returned in ascending ``doc_id`` order.
    """
    corpus_dir = Path(corpus_dir)
    rows = read_metadata(metadata_file)
    if not rows:
        raise DataError("empty corpus: metadata lists no documents")
    seen: set[str] = set()
    docs = []
    for filename, doc_id, year in rows:
        if doc_id in seen:
            raise DataError(f"duplicate doc_id {doc_id!r}")
        seen.add(doc_id)
        path = corpus_dir / filename
        if not path.is_file():
            raise DataError(f"missing document file {filename}")
        docs.append(Document(doc_id, year, _read_text(path)))
    return Corpus(tuple(docs), ref=str(corpus_dir))
