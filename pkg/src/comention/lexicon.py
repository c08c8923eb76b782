"""Surname lexicon: candidate import, pruning, lemmatization and curation.

Surnames are matched as single tokens, case-sensitively. Each lemma also
matches its German attributive forms: the genitive ``-s`` and the
adjectival ``-sche``, ``-schen``, ``-schem``, ``-scher``, ``-sches``.
"""
from __future__ import annotations

import csv
import enum
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from comention.corpus import Corpus, tokenize
from comention.errors import DataError

VARIANT_SUFFIXES = ("s", "sche", "schen", "schem", "scher", "sches")
# longest first, so "Freudschen" strips "schen" rather than "s"-less nonsense
_STRIP_ORDER = tuple(sorted(VARIANT_SUFFIXES, key=len, reverse=True))


class Status(str, enum.Enum):
    CANDIDATE = "candidate"
    ACCEPTED = "accepted"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class CandidateSurname:
    surface: str
    source_count: int

    def __post_init__(self):
        if not self.surface:
            raise ValueError("candidate surname must be non-empty")


@dataclass(frozen=True)
class LexiconEntry:
    lemma: str
    corpus_count: int
    status: Status = Status.ACCEPTED
    variants: frozenset[str] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variants", expand_variants(self.lemma))


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[LexiconEntry, ...]
    min_length: int = 3
    min_candidate_freq: int = 25
    min_final_mentions: int = 11

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e.lemma)))
        check_disjoint(e.lemma for e in self.entries)

    @property
    def lemmas(self) -> list[str]:
        return [e.lemma for e in self.entries]

    def variant_index(self) -> dict[str, str]:
        """Map every variant form to the lemma it belongs to."""
        return {v: e.lemma for e in self.entries for v in e.variants}

    def __len__(self):
        return len(self.entries)


def expand_variants(lemma: str) -> frozenset[str]:
    """Return ``lemma`` together with its inflected forms.

    >>> sorted(expand_variants("Marx"))[:3]
    ['Marx', 'Marxs', 'Marxsche']
    """
    if not lemma:
        raise ValueError("lemma must be non-empty")
    return frozenset([lemma] + [lemma + suffix for suffix in VARIANT_SUFFIXES])


def check_disjoint(lemmas: Iterable[str]) -> None:
    """Raise DataError naming both lemmas if any two variant sets overlap."""
    owner: dict[str, str] = {}
    for lemma in lemmas:
        for v in expand_variants(lemma):
            other = owner.get(v)
            if other is not None and other != lemma:
                raise DataError(
                    f"lemma collision: {other!r} and {lemma!r} share variant form {v!r}"
                )
            owner[v] = lemma


def load_candidates(freq_file: str | Path) -> list[CandidateSurname]:
    """Read a ``surname<TAB>count`` table; repeated surnames are summed.

    Returns candidates in first-appearance order.
    """
    freq_file = Path(freq_file)
    if not freq_file.is_file():
        raise DataError(f"missing candidates file {freq_file}")
    counts: dict[str, int] = {}
    with open(freq_file, encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["surname", "count"]:
            raise DataError(f"{freq_file.name}:1: header must be surname<TAB>count")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2 or not row[0].strip():
                raise DataError(f"{freq_file.name}:{lineno}: malformed row {row!r}")
            surname, raw_count = row[0].strip(), row[1].strip()
            try:
                count = int(raw_count)
            except ValueError:
                raise DataError(f"{freq_file.name}:{lineno}: invalid count {raw_count!r}") from None
            if count < 0:
                raise DataError(f"{freq_file.name}:{lineno}: negative count {count}")
            counts[surname] = counts.get(surname, 0) + count
    return [CandidateSurname(s, c) for s, c in counts.items()]


def read_lemma_file(path: str | Path) -> list[str]:
    """Read a curation file: one lemma per line, ``#`` comments ignored."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing curation file {path}")
    lemmas = []
    with open(path, encoding="utf-8-sig") as fh:
        for line in fh:
            line = line.rstrip()
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            lemmas.append(line.strip())
    return lemmas


def lemmatize(surface: str, known: Iterable[str] | set[str]) -> str:
    """Strip a variant suffix from ``surface`` if the remaining base is in ``known``.

    A word that merely ends in ``s`` (Parsons, Elias) is its own lemma unless
    the shortened form is itself a known surname.
    """
    known = known if isinstance(known, (set, frozenset)) else set(known)
    for suffix in _STRIP_ORDER:
        if surface.endswith(suffix) and len(surface) > len(suffix):
            base = surface[: -len(suffix)]
            if base in known:
                return base
    return surface


def count_corpus_frequency(lemma: str, corpus: Corpus | Mapping[str, int]) -> int:
    """Total number of tokens in ``corpus`` matching any variant of ``lemma``.

    ``corpus`` may also be a precomputed token counter.
    """
    counts = corpus if isinstance(corpus, Mapping) else token_counts(corpus)
    return sum(counts.get(v, 0) for v in expand_variants(lemma))


def token_counts(corpus: Corpus) -> Counter:
    counts: Counter = Counter()
    for doc in corpus:
        counts.update(doc.tokens)
    return counts


def _is_well_formed(word: str, min_length: int) -> bool:
    return (
        len(word) >= min_length
        and word[:1].isupper()
        and tokenize(word) == [word]
    )


def build_lexicon(
    candidates: Iterable[CandidateSurname],
    corpus: Corpus,
    min_length: int = 3,
    min_candidate_freq: int = 25,
    include_file: str | Path | None = None,
    exclude_file: str | Path | None = None,
    min_final_mentions: int = 11,
) -> Lexicon:
    """Prune, lemmatize and curate candidate surnames into a Lexicon.

    Steps, in order: drop candidates without an uppercase initial; drop
    candidates shorter than ``min_length``; lemmatize and merge; drop lemmas
    whose corpus frequency (all variants) is below ``min_candidate_freq``;
    remove lemmas listed in ``exclude_file``; force-add lemmas listed in
    ``include_file``. An include entry overrides an exclude entry.

    ``min_final_mentions`` is only recorded on the Lexicon; the mention
    threshold itself is applied by :func:`comention.mentions.filter_min_mentions`.
    """
    surfaces = [c.surface for c in candidates]
    surfaces = [s for s in surfaces if s[:1].isupper()]
    surfaces = [s for s in surfaces if len(s) >= min_length]
    pool = set(surfaces)
    lemmas = sorted({lemmatize(s, pool) for s in surfaces})

    counts = token_counts(corpus)
    corpus_count = {lemma: count_corpus_frequency(lemma, counts) for lemma in lemmas}
    kept = {lemma for lemma in lemmas if corpus_count[lemma] >= min_candidate_freq}

    def curated(path) -> list[str]:
        entries = read_lemma_file(path)
        for entry in entries:
            if not _is_well_formed(entry, min_length) or lemmatize(entry, pool) != entry:
                raise DataError(f"{Path(path).name}: {entry!r} is not a valid lemma")
        return entries

    if exclude_file is not None:
        kept.difference_update(curated(exclude_file))
    if include_file is not None:
        for lemma in curated(include_file):
            kept.add(lemma)
            if lemma not in corpus_count:
                corpus_count[lemma] = count_corpus_frequency(lemma, counts)

    entries = tuple(LexiconEntry(lemma, corpus_count[lemma]) for lemma in sorted(kept))
    return Lexicon(entries, min_length, min_candidate_freq, min_final_mentions)
