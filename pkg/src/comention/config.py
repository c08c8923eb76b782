"""Pipeline configuration: flat ``key = value`` files overridden by CLI flags."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from comention import __version__
from comention.errors import ConfigError

STAGES = ("lexicon", "matrix", "factor", "export", "run")

# artifact names inside output_dir
LEXICON = "lexicon.tsv"
PROFILES = "profiles.tsv"
MATRIX = "matrix.csv"
EIGENVALUES = "eigenvalues.tsv"
UNROTATED = "unrotated.csv"
PATTERN = "pattern.csv"
PHI = "phi.csv"
ROTATION_LOG = "rotation_log.tsv"
REPORT = "factor_report.tsv"
GRAPH = "graph"
SUMMARY = "summary.txt"


@dataclass
class PipelineConfig:
    output_dir: Path | None = None
    corpus_dir: Path | None = None
    metadata_file: Path | None = None
    candidates_file: Path | None = None
    include_file: Path | None = None
    exclude_file: Path | None = None
    min_length: int = 3
    min_candidate_freq: int = 25
    min_total_mentions: int = 11
    factor_mode: str | None = None  # "explicit" | "kaiser"; inferred from k when unset
    k: int | None = None
    gamma: float = 0.0
    max_iter: int = 250
    tol: float = 1e-6
    membership_threshold: float = 0.3
    display_threshold: float = 0.3

    @property
    def mode(self) -> str:
        if self.factor_mode is not None:
            return self.factor_mode
        return "explicit" if self.k is not None else "kaiser"

    def out(self, name: str) -> Path:
        return Path(self.output_dir) / name

    def digest(self) -> str:
        data = {k: (str(v) if isinstance(v, Path) else v) for k, v in asdict(self).items()}
        blob = json.dumps(data, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:16]

    def header(self) -> str:
        """Provenance comment line written at the top of text artifacts."""
        return f"# comention {__version__} config={self.digest()}"

    def validate(self, stage: str) -> None:
        """Check everything ``stage`` needs, without writing anything."""
        if stage not in STAGES:
            raise ConfigError(f"unknown stage {stage!r}")
        if self.output_dir is None:
            raise ConfigError("output_dir is required")
        out = Path(self.output_dir)
        if out.exists() and not out.is_dir():
            raise ConfigError(f"output_dir {out} is not a directory")

        needs_corpus = stage in ("lexicon", "matrix", "run")
        if needs_corpus:
            for key in ("corpus_dir", "metadata_file"):
                if getattr(self, key) is None:
                    raise ConfigError(f"{key} is required for {stage}")
            if not Path(self.corpus_dir).is_dir():
                raise ConfigError(f"corpus_dir {self.corpus_dir} does not exist")
            if not Path(self.metadata_file).is_file():
                raise ConfigError(f"metadata_file {self.metadata_file} does not exist")
        needs_candidates = stage in ("lexicon", "run") or (
            stage == "matrix" and not self.out(LEXICON).is_file()
        )
        if needs_candidates:
            if self.candidates_file is None:
                raise ConfigError(f"candidates_file is required for {stage}")
            if not Path(self.candidates_file).is_file():
                raise ConfigError(f"candidates_file {self.candidates_file} does not exist")
            for key in ("include_file", "exclude_file"):
                path = getattr(self, key)
                if path is not None and not Path(path).is_file():
                    raise ConfigError(f"{key} {path} does not exist")
        if stage == "factor" and not self.out(MATRIX).is_file():
            raise ConfigError(f"{self.out(MATRIX)} not found; run the matrix stage first")
        if stage == "export":
            for name in (PATTERN, UNROTATED, PHI, PROFILES):
                if not self.out(name).is_file():
                    raise ConfigError(f"{self.out(name)} not found; run the factor stage first")

        if self.min_length < 1:
            raise ConfigError("min_length must be at least 1")
        if self.min_candidate_freq < 0 or self.min_total_mentions < 0:
            raise ConfigError("frequency thresholds must be nonnegative")
        if self.mode not in ("explicit", "kaiser"):
            raise ConfigError(f"factor_mode must be 'explicit' or 'kaiser', got {self.mode!r}")
        if self.mode == "explicit" and stage in ("factor", "run"):
            if self.k is None or self.k < 1:
                raise ConfigError("explicit factor_mode needs k >= 1")
        if not math.isfinite(self.gamma):
            raise ConfigError("gamma must be finite")
        if self.max_iter < 1 or not self.tol > 0:
            raise ConfigError("max_iter must be >= 1 and tol > 0")
        for key in ("membership_threshold", "display_threshold"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be positive")


def _converter(name: str):
    ftype = {f.name: f.type for f in fields(PipelineConfig)}[name]
    if "Path" in ftype:
        return Path
    if ftype.startswith("int"):
        return int
    if ftype.startswith("float"):
        return float
    return str


def coerce(name: str, raw) -> object:
    names = {f.name for f in fields(PipelineConfig)}
    if name not in names:
        raise ConfigError(f"unknown config key {name!r}")
    if raw is None or isinstance(raw, str) and raw.strip().lower() in ("", "none"):
        return None
    try:
        return _converter(name)(raw if not isinstance(raw, str) else raw.strip())
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {name}: {raw!r}") from None


def read_config_file(path: str | Path) -> dict[str, object]:
    """Parse ``key = value`` lines; ``#`` starts a comment line."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist")
    values = {}
    with open(path, encoding="utf-8-sig") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path.name}:{lineno}: expected key = value")
            key = key.strip().replace("-", "_")
            values[key] = coerce(key, value)
    # relative paths in a config file are relative to the file
    for key, value in values.items():
        if isinstance(value, Path) and not value.is_absolute():
            values[key] = path.parent / value
    return values


def make_config(file_values: dict | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Defaults, then config-file values, then command-line overrides."""
    merged = dict(file_values or {})
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = coerce(key, value)
    return PipelineConfig(**merged)
