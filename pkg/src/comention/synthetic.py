"""Synthetic corpora with planted author communities.

Each document belongs to one community and mentions that community's
authors heavily; authors of other communities appear only as occasional
single mentions. A few background authors, mentioned across the whole
corpus, belong to no community; they supply the general component real
co-mention data has. Without them the centred community blocks are
linearly dependent and the leading factor turns bipolar. Used for the bundled mini-corpus and recovery tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

SURNAMES = (
    "Adorno", "Bahrdt", "Blau", "Bourdieu", "Coleman", "Dahrendorf", "Durkheim",
    "Elias", "Freud", "Gehlen", "Goffman", "Habermas", "Homans", "Horkheimer",
    "Lazarsfeld", "Luhmann", "Mannheim", "Marx", "Mead", "Merton", "Parsons",
    "Plessner", "Popper", "Schelsky", "Schutz", "Simmel", "Sombart", "Weber",
)

# lower-case function words and capitalized nouns, as in German prose
FILLER = (
    "die", "der", "und", "in", "zu", "den", "das", "nicht", "von", "sie", "ist",
    "des", "sich", "mit", "dem", "dass", "er", "es", "ein", "auch", "auf", "eine",
    "Gesellschaft", "Theorie", "Analyse", "Arbeit", "Familie", "Staat", "Klasse",
    "Handeln", "System", "Struktur", "Gruppe", "Rolle", "Wandel", "Forschung",
    "Methode", "Begriff", "Sinn", "Ordnung", "Macht", "Herrschaft", "Schicht",
    "Vogel", "Jahre", "Fragen", "Ob", "Kritik",
)

# attributive forms used when a mention is inflected
_INFLECTIONS = ("s", "schen", "sche", "scher")


@dataclass(frozen=True)
class SyntheticCorpus:
    docs: tuple[tuple[str, int, str], ...]  # (doc_id, year, text)
    community: dict[str, int]  # surname -> community index
    background: tuple[str, ...] = ()


def planted_corpus(
    n_communities: int,
    authors_per_community: int = 5,
    docs_per_community: int = 30,
    mention_prob: float = 0.8,
    mean_mentions: float = 3.0,
    popularity_spread: float = 0.3,
    background_authors: int = 2,
    background_rate: float = 3.0,
    leak_prob: float = 0.05,
    filler_tokens: int = 120,
    inflect_prob: float = 0.15,
    seed: int = 0,
    surnames: tuple[str, ...] = SURNAMES,
) -> SyntheticCorpus:
    """Generate a corpus whose authors form ``n_communities`` co-mention blocks.

    The first ``background_authors`` names drawn are mentioned in every
    document at ``background_rate``; the rest are split into communities.
    Mentions are occasionally written in an inflected form (``Webers``,
    ``Weberschen``) so lemmatization is exercised.
    """
    needed = n_communities * authors_per_community + background_authors
    if needed > len(surnames):
        raise ValueError(f"only {len(surnames)} surnames available, {needed} requested")
    rng = np.random.default_rng(seed)
    drawn = [str(n) for n in rng.permutation(surnames)[:needed]]
    background, names = drawn[:background_authors], drawn[background_authors:]
    community = {name: i // authors_per_community for i, name in enumerate(names)}
    # lognormal popularity: some authors are mentioned far more often than others
    rate = {n: mean_mentions * float(np.exp(popularity_spread * rng.standard_normal())) for n in names}
    rate.update({n: background_rate for n in background})

    docs = []
    n_docs = n_communities * docs_per_community
    for d in range(n_docs):
        c = d % n_communities
        words = list(rng.choice(FILLER, size=filler_tokens))
        for name in background + names:
            if name in background or community[name] == c:
                if rng.random() >= mention_prob:
                    continue
                times = 1 + rng.poisson(max(rate[name] - 1, 0.0))
            elif rng.random() < leak_prob:
                times = 1
            else:
                continue
            for _ in range(times):
                form = name
                if rng.random() < inflect_prob:
                    form = name + str(rng.choice(_INFLECTIONS))
                words.insert(int(rng.integers(0, len(words) + 1)), form)
        text = _sentences(words, rng)
        docs.append((f"d{d + 1:03d}", 1960 + d % 26, text))
    return SyntheticCorpus(tuple(docs), community, tuple(background))


def _sentences(words: list[str], rng) -> str:
    out, sentence = [], []
    for w in words:
        sentence.append(w)
        if len(sentence) >= 6 and rng.random() < 0.15:
            out.append(" ".join(sentence) + ".")
            sentence = []
    if sentence:
        out.append(" ".join(sentence) + ".")
    return "\n".join(out) + "\n"


def write_corpus(corpus: SyntheticCorpus, directory: str | Path) -> tuple[Path, Path]:
    """Write ``<dir>/texts/*.txt`` and ``<dir>/metadata.tsv``; return (texts dir, metadata)."""
    directory = Path(directory)
    texts = directory / "texts"
    texts.mkdir(parents=True, exist_ok=True)
    meta = directory / "metadata.tsv"
    with open(meta, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("filename\tdoc_id\tyear\n")
        for doc_id, year, text in corpus.docs:
            (texts / f"{doc_id}.txt").write_text(text, encoding="utf-8", newline="\n")
            fh.write(f"{doc_id}.txt\t{doc_id}\t{year}\n")
    return texts, meta


def write_candidates(surnames, path: str | Path, counts=None) -> Path:
    """Write a ``surname<TAB>count`` candidate file."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("surname\tcount\n")
        for i, name in enumerate(surnames):
            fh.write(f"{name}\t{counts[i] if counts is not None else 100}\n")
    return path
