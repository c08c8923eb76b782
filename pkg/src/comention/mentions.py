"""Per-author mention profiles: multisets of documents."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from comention.corpus import Corpus, Document
from comention.errors import DataError
from comention.lexicon import Lexicon


@dataclass(frozen=True)
class MentionProfile:
    """Documents mentioning one author, each weighted by its mention count.

    Documents with zero mentions are not stored.
    """

    lemma: str
    counts: Mapping[str, int]
    total: int = field(init=False)

    def __post_init__(self):
        counts = {d: int(c) for d, c in sorted(self.counts.items()) if c}
        if any(c < 0 for c in counts.values()):
            raise ValueError(f"negative mention count in profile {self.lemma!r}")
        object.__setattr__(self, "counts", MappingProxyType(counts))
        object.__setattr__(self, "total", sum(counts.values()))

    def as_multiset(self) -> Counter:
        return Counter(dict(self.counts))


@dataclass(frozen=True)
class ProfileSet:
    profiles: tuple[MentionProfile, ...]
    corpus_ref: str = ""

    def __post_init__(self):
        profiles = tuple(sorted(self.profiles, key=lambda p: p.lemma))
        for a, b in zip(profiles, profiles[1:]):
            if a.lemma == b.lemma:
                raise DataError(f"duplicate profile for {a.lemma!r}")
        object.__setattr__(self, "profiles", profiles)

    @property
    def lemmas(self) -> list[str]:
        return [p.lemma for p in self.profiles]

    def totals(self) -> dict[str, int]:
        return {p.lemma: p.total for p in self.profiles}

    def __getitem__(self, lemma: str) -> MentionProfile:
        for p in self.profiles:
            if p.lemma == lemma:
                return p
        raise KeyError(lemma)

    def __iter__(self):
        return iter(self.profiles)

    def __len__(self):
        return len(self.profiles)


def scan_document(doc: Document, lexicon: Lexicon, index: Mapping[str, str] | None = None) -> dict[str, int]:
    """Count lexicon matches in one document, keyed by lemma.

    ``index`` is the lexicon's variant index; pass it when scanning many
    documents to avoid rebuilding it.
    """
    if index is None:
        index = lexicon.variant_index()
    counts: Counter = Counter()
    for token in doc.tokens:
        lemma = index.get(token)
        if lemma is not None:
            counts[lemma] += 1
    return dict(sorted(counts.items()))


def build_profiles(corpus: Corpus, lexicon: Lexicon) -> ProfileSet:
    index = lexicon.variant_index()
    per_lemma: dict[str, dict[str, int]] = {lemma: {} for lemma in lexicon.lemmas}
    for doc in corpus:
        for lemma, n in scan_document(doc, lexicon, index).items():
            per_lemma[lemma][doc.doc_id] = n
    return ProfileSet(
        tuple(MentionProfile(lemma, counts) for lemma, counts in per_lemma.items()),
        corpus_ref=corpus.ref,
    )


def filter_min_mentions(profiles: ProfileSet, min_total: int = 11) -> ProfileSet:
    """Keep profiles with at least ``min_total`` mentions (inclusive)."""
    kept = tuple(p for p in profiles if p.total >= min_total)
    if len(kept) < 2:
        raise DataError(
            f"only {len(kept)} author(s) with at least {min_total} mentions; "
            "a co-mention matrix needs at least 2"
        )
    return ProfileSet(kept, profiles.corpus_ref)


def write_profiles(profiles: ProfileSet, path: str | Path, header: str | None = None) -> None:
    """Dump ``lemma<TAB>doc_id<TAB>count`` rows sorted by (lemma, doc_id)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(header + "\n")
        fh.write("lemma\tdoc_id\tcount\n")
        for p in profiles:
            for doc_id, n in p.counts.items():
                fh.write(f"{p.lemma}\t{doc_id}\t{n}\n")


def read_profiles(path: str | Path, lemmas: Iterable[str] = ()) -> ProfileSet:
    """Read a profile dump; ``lemmas`` adds empty profiles for unmentioned authors."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing profile file {path}")
    per_lemma: dict[str, dict[str, int]] = {lemma: {} for lemma in lemmas}
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n") for line in fh if not line.startswith("#")]
    if not rows or rows[0] != "lemma\tdoc_id\tcount":
        raise DataError(f"{path.name}: bad profile header")
    for line in rows[1:]:
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not parts[2].isdigit():
            raise DataError(f"{path.name}: malformed profile row {line!r}")
        per_lemma.setdefault(parts[0], {})[parts[1]] = int(parts[2])
    return ProfileSet(tuple(MentionProfile(l, c) for l, c in per_lemma.items()))
