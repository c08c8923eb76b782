import math
import re
import shutil

import numpy as np
import pytest

from comention.cli import cmd_run, main
from comention.config import PipelineConfig, make_config, read_config_file
from comention.errors import ConfigError
from comention.factors import read_loadings_csv

ARTIFACTS = ("lexicon.tsv", "profiles.tsv", "matrix.csv", "eigenvalues.tsv", "unrotated.csv",
             "pattern.csv", "phi.csv", "rotation_log.tsv", "factor_report.tsv",
             "graph.net", "graph.clu", "graph.vec", "summary.txt")
NUMBER = re.compile(r"-?\d+\.\d+(?:e-?\d+)?")


def run(mini, out, *extra, command="run"):
    return main([command, "--config", str(mini / "mini.conf"), "--output-dir", str(out), *extra])


def data_lines(path):
    """File lines without the provenance header."""
    lines = path.read_text(encoding="utf-8").splitlines()
    return lines[1:] if lines and lines[0].startswith("# comention ") else lines


def same_up_to_rounding(a, b, tol=1e-6):
    """Line-by-line equality, allowing last-digit float differences."""
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        if NUMBER.sub("#", x) != NUMBER.sub("#", y):
            return False
        for u, v in zip(NUMBER.findall(x), NUMBER.findall(y)):
            if not math.isclose(float(u), float(v), rel_tol=tol, abs_tol=tol):
                return False
    return True


def test_config_precedence(tmp_path):
    conf = tmp_path / "c.conf"
    conf.write_text("# comment\nk = 4\ngamma = 0.5\ncorpus_dir = texts\nmin-length = 4\n")
    values = read_config_file(conf)
    assert values["corpus_dir"] == tmp_path / "texts"
    cfg = make_config(values, {"k": "2", "gamma": None})
    assert (cfg.k, cfg.gamma, cfg.min_length, cfg.min_candidate_freq) == (2, 0.5, 4, 25)
    assert cfg.mode == "explicit" and PipelineConfig().mode == "kaiser"
    with pytest.raises(ConfigError, match="unknown"):
        make_config({}, {"colour": "1"})
    conf.write_text("k = many\n")
    with pytest.raises(ConfigError, match="k"):
        read_config_file(conf)


def test_defaults():
    c = PipelineConfig()
    assert (c.min_length, c.min_candidate_freq, c.min_total_mentions, c.max_iter,
            c.membership_threshold, c.display_threshold, c.gamma, c.tol) == (3, 25, 11, 250, 0.3, 0.3, 0.0, 1e-6)


def test_missing_output_dir_fails_before_work(mini, capsys):
    assert main(["run", "--config", str(mini / "mini.conf")]) == 1
    assert "output_dir" in capsys.readouterr().err


def test_missing_candidates_names_path(mini, tmp_path, capsys):
    missing = tmp_path / "nope.tsv"
    assert run(mini, tmp_path / "out", "--candidates-file", str(missing), command="lexicon") != 0
    assert str(missing) in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


def test_empty_lexicon_warning(mini, tmp_path):
    out = tmp_path / "out"
    assert run(mini, out, "--min-candidate-freq", str(10 ** 9), command="lexicon") == 4
    assert data_lines(out / "lexicon.tsv") == ["lemma\tcorpus_count\tvariants"]


def test_lexicon_stage(mini, tmp_path):
    out = tmp_path / "out"
    assert run(mini, out, command="lexicon") == 0
    lemmas = [l.split("\t")[0] for l in data_lines(out / "lexicon.tsv")[1:]]
    assert lemmas == ["Adorno", "Durkheim", "Freud", "Goffman", "Habermas", "Luhmann",
                      "Marx", "Mead", "Parsons", "Simmel", "Weber"]


def test_stages_match_golden(mini, tmp_path):
    out = tmp_path / "out"
    for stage in ("lexicon", "matrix", "factor", "export"):
        assert run(mini, out, command=stage) == 0, stage
    for name in ARTIFACTS:
        assert same_up_to_rounding(data_lines(out / name), data_lines(mini / "golden" / name)), name
    assert "converged=true" in (out / "rotation_log.tsv").read_text()


def test_run_matches_golden_and_headers(mini, tmp_path):
    out = tmp_path / "out"
    assert run(mini, out) == 0
    header = (out / "lexicon.tsv").read_text().splitlines()[0]
    assert re.fullmatch(r"# comention 0\.1\.0 config=[0-9a-f]{16}", header)
    for name in ARTIFACTS:
        first = (out / name).read_text().splitlines()[0]
        assert (first == header) != name.startswith("graph."), name
        assert same_up_to_rounding(data_lines(out / name), data_lines(mini / "golden" / name)), name


def test_min_total_zero_keeps_all_lemmas(mini, tmp_path):
    out = tmp_path / "out"
    assert run(mini, out, "--min-total-mentions", "0", command="lexicon") == 0
    assert run(mini, out, "--min-total-mentions", "0", command="matrix") == 0
    assert data_lines(out / "matrix.csv")[0].count(",") == 11


def test_too_few_profiles(mini, tmp_path, capsys):
    assert run(mini, tmp_path / "out", "--min-total-mentions", "20") == 2
    err = capsys.readouterr().err
    assert "matrix stage" in err and "at least 2" in err
    # the lexicon stage succeeded and keeps its artifact; the failed stage left nothing
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["lexicon.tsv"]


def test_k_bounds(mini, tmp_path):
    out = tmp_path / "out"
    assert run(mini, out, "--k", "12") == 2
    assert not (out / "eigenvalues.tsv").exists()
    assert run(mini, out, "--k", "0") == 1


def test_k1_pattern_equals_unrotated(mini, tmp_path):
    out = tmp_path / "out"
    assert run(mini, out, "--k", "1") == 0
    assert data_lines(out / "pattern.csv") == data_lines(out / "unrotated.csv")


def test_display_threshold_above_one(mini, tmp_path, capsys):
    out = tmp_path / "out"
    for stage in ("lexicon", "matrix", "factor"):
        assert run(mini, out, command=stage) == 0
    capsys.readouterr()
    assert run(mini, out, "--display-threshold", "1.1", command="export") == 2
    assert "no displayable nodes" in capsys.readouterr().err
    # the failed export removed its own partial output
    assert not any((out / n).exists() for n in ("graph.net", "graph.clu", "graph.vec", "summary.txt"))
    assert (out / "pattern.csv").exists()


def test_constant_matrix_is_a_data_error(tmp_path, capsys):
    # equal off-diagonal counts fill to a constant matrix: nothing to correlate
    out = tmp_path / "out"
    out.mkdir()
    (out / "matrix.csv").write_text(",A,B,C\nA,,1,1\nB,1,,1\nC,1,1,\n")
    assert main(["factor", "--output-dir", str(out)]) == 2
    assert "zero variance" in capsys.readouterr().err


def test_kaiser_selects_nothing(tmp_path, capsys, monkeypatch):
    import comention.cli as cli
    from comention.factors import EigenSpectrum

    monkeypatch.setattr(cli, "eigen_spectrum", lambda r: EigenSpectrum(np.ones(3), np.eye(3)))
    out = tmp_path / "out"
    out.mkdir()
    (out / "matrix.csv").write_text(",A,B,C\nA,,1,2\nB,1,,3\nC,2,3,\n")
    assert main(["factor", "--output-dir", str(out)]) == 2
    assert "explicit" in capsys.readouterr().err
    assert sorted(p.name for p in out.iterdir()) == ["matrix.csv"]


def test_rerun_is_byte_identical(mini, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(mini, a) == 0
    assert run(mini, a) == 0
    first = {n: (a / n).read_bytes() for n in ARTIFACTS}
    assert run(mini, a) == 0
    assert first == {n: (a / n).read_bytes() for n in ARTIFACTS}
    # a different output_dir changes the config hash only
    assert run(mini, b) == 0
    for n in ARTIFACTS:
        assert data_lines(a / n) == data_lines(b / n)


def test_cmd_run_api(mini, tmp_path):
    cfg = make_config(read_config_file(mini / "mini.conf"), {"output_dir": str(tmp_path)})
    written = cmd_run(cfg)
    assert sorted(p.name for p in written) == sorted(ARTIFACTS)
    labels, P = read_loadings_csv(tmp_path / "pattern.csv")
    assert P.shape == (11, 3)


def test_config_file_copy_is_relocatable(mini, tmp_path):
    # paths in a config file resolve against the file, not the working dir
    shutil.copytree(mini, tmp_path / "mini", ignore=shutil.ignore_patterns("golden"))
    assert main(["run", "--config", str(tmp_path / "mini" / "mini.conf"),
                 "--output-dir", str(tmp_path / "out")]) == 0
