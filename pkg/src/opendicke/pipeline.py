"""Run configuration and the build -> diag -> converge -> scan pipeline.

Every artifact of a model lives in a directory named after the sector and
the cache key, so runs with different parameters never collide. Commands
that need an upstream artifact raise :class:`DependencyError` naming the
command that produces it.
"""
from __future__ import annotations

import contextlib
import csv
import fcntl
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import container
from .chaometrics.ensembles import calibrate
from .chaometrics.windows import window_scan, write_scan_csv
from .convergence import liouvillian_converged, write_report_csv, write_summary_json
from .errors import ConfigError, DependencyError, ProvenanceError
from .liouvillian import SECTORS, build_sector, load_matrix, save_matrix
from .model import ModelParams
from .spectra import (
    diagonalize_liouvillian,
    load_spectrum,
    save_spectrum,
    write_eigenvalue_csv,
)

log = logging.getLogger("opendicke")

CACHE_POLICIES = ("use", "refresh")
MIN_WINDOW = 50
LOCK_NAME = ".opendicke.lock"
CONFIG_KEYS = (
    "model", "sector", "delta", "window_size", "window_step",
    "seed", "output_dir", "cache_policy", "trials",
)


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams = field(default_factory=ModelParams)
    sector: str = "+"
    delta: float = 1e-3
    window_size: int = 300
    window_step: int | None = None  # None: a tenth of the window
    seed: int = 42
    output_dir: str = "runs"
    cache_policy: str = "use"
    trials: int = 20

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise ConfigError(f"sector must be one of {SECTORS}, got {self.sector!r}")
        if not 0 < self.delta <= 1:
            raise ConfigError(f"tolerance must lie in (0, 1], got {self.delta}")
        if int(self.window_size) != self.window_size or self.window_size < MIN_WINDOW:
            raise ConfigError(f"window_size must be an integer >= {MIN_WINDOW}")
        if self.window_step is not None and (
            int(self.window_step) != self.window_step or self.window_step < 0
        ):
            raise ConfigError("window_step must be a non-negative integer")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.cache_policy not in CACHE_POLICIES:
            raise ConfigError(f"cache_policy must be one of {CACHE_POLICIES}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError("trials must be a positive integer")

    @property
    def step(self) -> int:
        return self.window_size // 10 if self.window_step is None else int(self.window_step)

    def replace(self, **changes) -> "RunConfig":
        doc = self.to_dict()
        model = changes.pop("model", None)
        doc.update(changes)
        if model is not None:
            doc["model"] = model.to_dict() if isinstance(model, ModelParams) else model
        return RunConfig.from_dict(doc)

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "sector": self.sector,
            "delta": self.delta,
            "window_size": self.window_size,
            "window_step": self.window_step,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "cache_policy": self.cache_policy,
            "trials": self.trials,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        doc = dict(doc)
        model = doc.pop("model", {})
        if not isinstance(model, dict):
            raise ConfigError("'model' must be an object")
        try:
            return cls(model=ModelParams.from_dict(model), **doc)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed config: {exc}") from None
        return cls.from_dict(doc)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_json(text)


def cache_key(cfg: RunConfig) -> str:
    """Hash of the model, the sector and the container format version."""
    return cfg.model.digest(cfg.sector, f"v{container.FORMAT_VERSION}")


def _sector_tag(sector: str) -> str:
    return {"+": "plus", "-": "minus", "full": "full"}[sector]


def _tol_tag(x: float) -> str:
    return format(x, ".6g")


class Artifacts:
    """Paths of all files a configuration produces."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.key = cache_key(cfg)
        self.root = Path(cfg.output_dir)
        self.model_dir = self.root / f"{_sector_tag(cfg.sector)}-{self.key[:16]}"

    @property
    def matrix(self) -> Path:
        return self.model_dir / "liouvillian.bin"

    @property
    def spectrum(self) -> Path:
        return self.model_dir / "spectrum.bin"

    @property
    def eigenvalues(self) -> Path:
        return self.model_dir / "eigenvalues.csv"

    @property
    def params(self) -> Path:
        return self.model_dir / "params.json"

    @property
    def convergence(self) -> Path:
        return self.model_dir / f"convergence_delta{_tol_tag(self.cfg.delta)}.csv"

    @property
    def summary(self) -> Path:
        return self.model_dir / f"convergence_delta{_tol_tag(self.cfg.delta)}.json"

    @property
    def scan(self) -> Path:
        c = self.cfg
        return self.model_dir / (
            f"scan_delta{_tol_tag(c.delta)}_w{c.window_size}_s{c.step}.csv"
        )

    @property
    def calibration(self) -> Path:
        return self.root / f"calibration_seed{self.cfg.seed}_trials{self.cfg.trials}.json"


@contextlib.contextmanager
def output_lock(root: Path):
    """Advisory exclusive lock serializing commands on one output directory."""
    root.mkdir(parents=True, exist_ok=True)
    with open(root / LOCK_NAME, "a") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def _cached(path: Path, cfg: RunConfig, kind: str, key: str) -> bool:
    if cfg.cache_policy != "use" or not path.exists():
        return False
    try:
        header, _ = container.read(path, kind=kind)
        container.check_hash(header, key)
    except ProvenanceError as exc:
        log.info("stale cache entry %s (%s)", path, exc)
        return False
    log.info("cache hit: %s", path)
    return True


def _require(path: Path, producer: str):
    if not path.exists():
        raise DependencyError(f"missing {path}; run `opendicke {producer}` first")


def cmd_build(cfg: RunConfig) -> Path:
    """Assemble the Liouvillian sector and persist it with its label map."""
    art = Artifacts(cfg)
    with output_lock(art.root):
        art.model_dir.mkdir(parents=True, exist_ok=True)
        art.params.write_text(cfg.model.to_json() + "\n")
        if _cached(art.matrix, cfg, "liouvillian", art.key):
            return art.matrix
        L = build_sector(cfg.model, cfg.sector)
        save_matrix(art.matrix, L)
        log.info("built %s sector, dimension %d -> %s", cfg.sector, L.dimension, art.matrix)
    return art.matrix


def cmd_diag(cfg: RunConfig) -> Path:
    """Diagonalize the persisted matrix; reuses a spectrum with the same key."""
    art = Artifacts(cfg)
    with output_lock(art.root):
        if _cached(art.spectrum, cfg, "spectrum", art.key):
            return art.spectrum
        _require(art.matrix, "build")
        L = load_matrix(art.matrix, cfg.model, cfg.sector)
        spec = diagonalize_liouvillian(L)
        save_spectrum(art.spectrum, spec)
        write_eigenvalue_csv(art.eigenvalues, spec)
        log.info("diagonalized dimension %d, max residual %.3g", spec.dimension, spec.max_residual)
    return art.spectrum


def cmd_converge(cfg: RunConfig) -> Path:
    """Tail-weight convergence report (CSV plus JSON summary)."""
    art = Artifacts(cfg)
    with output_lock(art.root):
        _require(art.spectrum, "diag")
        spec = load_spectrum(art.spectrum, expected_hash=art.key)
        report = liouvillian_converged(spec, cfg.delta)
        write_report_csv(art.convergence, report)
        write_summary_json(art.summary, report)
        log.info("N_CES = %d of %d", report.n_converged, report.n_total)
    return art.convergence


def read_converged(path) -> np.ndarray:
    """Accepted eigenvalues from a convergence CSV, in modulus order."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["accepted"] == "1":
                out.append(complex(float(row["re"]), float(row["im"])))
    return np.asarray(out, dtype=complex)


def cmd_scan(cfg: RunConfig) -> Path:
    """Moving-window statistics over the converged eigenvalues."""
    art = Artifacts(cfg)
    with output_lock(art.root):
        _require(art.convergence, "converge")
        lam = read_converged(art.convergence)
        result = window_scan(lam, cfg.window_size, cfg.step)
        write_scan_csv(art.scan, result)
        log.info("%d windows -> %s", len(result.windows), art.scan)
    return art.scan


def cmd_calibrate(cfg: RunConfig) -> Path:
    """Calibration of the statistics on Ginibre and planar-Poisson clouds."""
    art = Artifacts(cfg)
    with output_lock(art.root):
        doc = {
            name: calibrate(name, trials=cfg.trials, seed=cfg.seed).to_dict()
            for name in ("ginibre", "poisson")
        }
        art.calibration.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        log.info("calibration report -> %s", art.calibration)
    return art.calibration


def run_all(cfg: RunConfig) -> dict[str, Path]:
    """Full physics pipeline for one configuration."""
    return {
        "build": cmd_build(cfg),
        "diag": cmd_diag(cfg),
        "converge": cmd_converge(cfg),
        "scan": cmd_scan(cfg),
    }
