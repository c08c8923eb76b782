"""Regenerate the bundled 12-document mini-corpus under tests/data/mini/.

Three planted communities of three authors each, plus two background
authors mentioned everywhere. The candidate list also carries the cases
the lexicon must prune: a lower-case entry, a two-letter entry, an
inflected duplicate ("Freuds") and a concept word ("Vogel") that is
frequent enough to pass the thresholds and is removed by the exclude file.

    python scripts/make_mini_corpus.py [--seed N] [--out DIR]
"""
import argparse
from pathlib import Path

from comention.synthetic import planted_corpus, write_candidates, write_corpus

CAST = ("Adorno", "Freud", "Habermas", "Luhmann", "Marx", "Mead",
        "Parsons", "Simmel", "Weber", "Durkheim", "Goffman")

CONFIG = """\
# mini-corpus pipeline configuration; paths are relative to this file
corpus_dir = texts
metadata_file = metadata.tsv
candidates_file = candidates.tsv
exclude_file = exclude.txt
min_candidate_freq = 5
min_total_mentions = 5
k = 3
"""


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=2)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "tests/data/mini")
    args = ap.parse_args()

    sc = planted_corpus(3, authors_per_community=3, docs_per_community=4,
                        background_authors=2, seed=args.seed, surnames=CAST)
    write_corpus(sc, args.out)
    authors = sorted(sc.community) + sorted(sc.background)
    noise = ["weber", "Ob", "Freuds", "Vogel", "Kritik", "Xu"]
    write_candidates(authors + noise, args.out / "candidates.tsv",
                     counts=[50 + 10 * i for i in range(len(authors))] + [40, 300, 12, 80, 9, 5])
    (args.out / "exclude.txt").write_text(
        "# concept words that pass the frequency thresholds\nVogel\nKritik\n", encoding="utf-8")
    (args.out / "mini.conf").write_text(CONFIG, encoding="utf-8")
    with open(args.out / "communities.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("surname\tcommunity\n")
        for name in sorted(sc.community):
            fh.write(f"{name}\t{sc.community[name] + 1}\n")
        for name in sorted(sc.background):
            fh.write(f"{name}\tbackground\n")
    print(f"wrote {len(sc.docs)} documents to {args.out}")


if __name__ == "__main__":
    main()
