"""Command-line pipeline: ``lexicon``, ``matrix``, ``factor``, ``export``, ``run``.

Every stage writes its artifacts into ``output_dir`` and later stages read
them back, so a curation loop (edit the exclude file, rerun ``lexicon``
and onwards) never recomputes more than it has to.
"""
from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from dataclasses import fields
from pathlib import Path

import numpy as np

from comention import __version__
from comention.config import (
    EIGENVALUES, GRAPH, LEXICON, MATRIX, PATTERN, PHI, PROFILES, REPORT,
    ROTATION_LOG, SUMMARY, UNROTATED, PipelineConfig, make_config, read_config_file,
)
from comention.corpus import load_corpus
from comention.errors import ComentionError, DataError
from comention.export import build_graph, write_pajek, write_summary
from comention.factors import (
    correlation_matrix, eigen_spectrum, extract_loadings, factor_report,
    fill_diagonal_mean, read_loadings_csv, select_k, write_eigenvalues,
    write_loadings_csv, write_report, write_rotation_log,
)
from comention.lexicon import Lexicon, LexiconEntry, build_lexicon, load_candidates
from comention.matrix import build_matrix, read_matrix_csv, write_matrix_csv
from comention.mentions import build_profiles, filter_min_mentions, read_profiles, write_profiles
from comention.rotation import FactorSolution, oblimin_rotate

log = logging.getLogger("comention")

EXIT_OK = 0
EXIT_WARNING = 4


class StageWarning(Exception):
    """Artifacts were written but the result is degenerate (e.g. empty lexicon)."""


@contextmanager
def _artifacts(written: list[Path]):
    """Remove whatever a stage wrote if the stage fails."""
    start = len(written)
    try:
        yield written
    except BaseException:
        for path in written[start:]:
            path.unlink(missing_ok=True)
        del written[start:]
        raise


def _write_lexicon(lexicon: Lexicon, path: Path, header: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        fh.write("lemma\tcorpus_count\tvariants\n")
        for e in lexicon.entries:
            fh.write(f"{e.lemma}\t{e.corpus_count}\t{','.join(sorted(e.variants))}\n")


def read_lexicon(path: Path, config: PipelineConfig) -> Lexicon:
    entries = []
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n") for line in fh if not line.startswith("#")]
    if not rows or rows[0] != "lemma\tcorpus_count\tvariants":
        raise DataError(f"{path.name}: bad lexicon header")
    for line in rows[1:]:
        parts = line.split("\t")
        if len(parts) != 3 or not parts[1].isdigit():
            raise DataError(f"{path.name}: malformed lexicon row {line!r}")
        entries.append(LexiconEntry(parts[0], int(parts[1])))
    return Lexicon(tuple(entries), config.min_length, config.min_candidate_freq,
                   config.min_total_mentions)


def _lexicon(config: PipelineConfig, corpus=None) -> Lexicon:
    corpus = corpus if corpus is not None else load_corpus(config.corpus_dir, config.metadata_file)
    return build_lexicon(
        load_candidates(config.candidates_file),
        corpus,
        min_length=config.min_length,
        min_candidate_freq=config.min_candidate_freq,
        include_file=config.include_file,
        exclude_file=config.exclude_file,
        min_final_mentions=config.min_total_mentions,
    )


def cmd_lexicon(config: PipelineConfig, written: list[Path] | None = None) -> list[Path]:
    config.validate("lexicon")
    written = [] if written is None else written
    lexicon = _lexicon(config)
    Path(config.output_dir).mkdir(parents=True, exist_ok=True)
    with _artifacts(written):
        path = config.out(LEXICON)
        written.append(path)
        _write_lexicon(lexicon, path, config.header())
    log.info("lexicon: %d accepted lemmas", len(lexicon))
    if not len(lexicon):
        raise StageWarning("lexicon is empty; lower min_candidate_freq or extend the include file")
    return written


def cmd_matrix(config: PipelineConfig, written: list[Path] | None = None) -> list[Path]:
    config.validate("matrix")
    written = [] if written is None else written
    corpus = load_corpus(config.corpus_dir, config.metadata_file)
    if config.out(LEXICON).is_file():
        lexicon = read_lexicon(config.out(LEXICON), config)
    else:
        lexicon = _lexicon(config, corpus)
    profiles = build_profiles(corpus, lexicon)
    kept = filter_min_mentions(profiles, config.min_total_mentions)
    matrix = build_matrix(kept)
    Path(config.output_dir).mkdir(parents=True, exist_ok=True)
    with _artifacts(written):
        written.append(config.out(PROFILES))
        write_profiles(kept, config.out(PROFILES), config.header())
        written.append(config.out(MATRIX))
        write_matrix_csv(matrix, config.out(MATRIX), config.header())
    log.info("matrix: %d x %d over %d documents", matrix.n, matrix.n, corpus.doc_count)
    return written


def cmd_factor(config: PipelineConfig, written: list[Path] | None = None) -> list[Path]:
    config.validate("factor")
    written = [] if written is None else written
    matrix = read_matrix_csv(config.out(MATRIX))
    profiles = read_profiles(config.out(PROFILES), matrix.labels) if config.out(PROFILES).is_file() else None
    R = correlation_matrix(fill_diagonal_mean(matrix))
    spectrum = eigen_spectrum(R)
    k = select_k(spectrum, config.mode, config.k)
    header = config.header()
    with _artifacts(written):
        # the scree data is useful even when Kaiser's rule selects nothing
        written.append(config.out(EIGENVALUES))
        write_eigenvalues(spectrum, config.out(EIGENVALUES), header)
        if k < 1:
            raise DataError("Kaiser's rule retained no factors (no eigenvalue > 1); pass an explicit --k")
        unrotated = extract_loadings(spectrum, k)
        sol = oblimin_rotate(unrotated, config.gamma, config.max_iter, config.tol, labels=matrix.labels)
        if not sol.converged:
            log.warning("rotation stopped after %d iterations without converging", sol.iterations)
        report = factor_report(_rounded(sol), profiles, config.membership_threshold)
        for name, labels, values, prefix in (
            (UNROTATED, matrix.labels, sol.unrotated, "F"),
            (PATTERN, matrix.labels, sol.pattern, "F"),
            (PHI, [f"F{c + 1}" for c in range(k)], sol.phi, "F"),
        ):
            written.append(config.out(name))
            write_loadings_csv(labels, values, config.out(name), header, prefix)
        written.append(config.out(ROTATION_LOG))
        write_rotation_log(sol, config.out(ROTATION_LOG), header)
        written.append(config.out(REPORT))
        write_report(report, config.out(REPORT), header)
    log.info("factor: k=%d, %d iterations, converged=%s", k, sol.iterations, sol.converged)
    return written


def _rounded(sol: FactorSolution) -> FactorSolution:
    """The solution as later stages see it after the 6-decimal CSV round trip."""
    return FactorSolution(sol.labels, np.round(sol.unrotated, 6), np.round(sol.pattern, 6),
                          np.round(sol.phi, 6), sol.iterations, sol.converged, sol.criterion,
                          sol.transform, sol.log)


def cmd_export(config: PipelineConfig, written: list[Path] | None = None) -> list[Path]:
    config.validate("export")
    written = [] if written is None else written
    labels, pattern = read_loadings_csv(config.out(PATTERN))
    _, unrotated = read_loadings_csv(config.out(UNROTATED))
    _, phi = read_loadings_csv(config.out(PHI))
    profiles = read_profiles(config.out(PROFILES), labels)
    sol = FactorSolution(labels, unrotated, pattern, phi, 0, True, float("nan"), np.eye(phi.shape[0]))
    report = factor_report(sol, profiles, config.membership_threshold)
    graph = build_graph(sol, report, profiles, config.display_threshold)
    with _artifacts(written):
        prefix = config.out(GRAPH)
        for suffix in (".net", ".clu", ".vec"):
            written.append(prefix.with_name(prefix.name + suffix))
        write_pajek(graph, prefix)
        written.append(config.out(SUMMARY))
        write_summary(report, graph, config.out(SUMMARY), config.header())
    log.info("export: %d vertices, %d edges", graph.vertex_count, len(graph.edges))
    return written


def cmd_run(config: PipelineConfig) -> list[Path]:
    config.validate("run")
    written: list[Path] = []
    for name, stage in (("lexicon", cmd_lexicon), ("matrix", cmd_matrix),
                        ("factor", cmd_factor), ("export", cmd_export)):
        try:
            stage(config, written)
        except StageWarning as exc:
            log.warning("%s: %s", name, exc)
        except ComentionError as exc:
            raise type(exc)(f"{name} stage: {exc}") from exc
    return written


COMMANDS = {
    "lexicon": cmd_lexicon,
    "matrix": cmd_matrix,
    "factor": cmd_factor,
    "export": cmd_export,
    "run": cmd_run,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value configuration file")
    for f in fields(PipelineConfig):
        common.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None,
                            metavar=f.name.upper())
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="comention", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        file_values = read_config_file(args.config) if args.config else {}
        overrides = {f.name: getattr(args, f.name) for f in fields(PipelineConfig)}
        config = make_config(file_values, overrides)
        stage = COMMANDS[args.command]
        written = stage(config)
    except StageWarning as exc:
        print(f"comention: warning: {exc}", file=sys.stderr)
        return EXIT_WARNING
    except ComentionError as exc:
        print(f"comention: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"comention: error: {exc}", file=sys.stderr)
        return DataError.exit_code
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
