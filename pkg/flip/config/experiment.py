"""
Experiment configuration files.

    {
        "model": {"path": "models/fma1.json"},
        "basis": {"kind": "covariance-eigenbasis", "resolution": 256},
        "algorithm": {"kind": "increasing", "schedule": "floor-sqrt"},
        "run": {"n_max": 50, "mc_runs": 2000, "seed": 7},
        "study": {"n_grid": [10, 50, 200], "D_grid": [1, 2, 4]}
    }

The model section is either a model document inline or {"path": ...}.
Relative paths resolve against the config file's directory.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from flip.errors import ConfigError, DimensionError
from flip.hilbert import BASIS_KINDS, DEFAULT_RESOLUTION, Grid, OrthonormalBasis, fourier_basis, read_basis
from flip.innovations import SCHEDULE_KINDS, Schedule, constant_schedule, parse_schedule, rate_sequence
from flip.innovations.recursion import DEFAULT_PIVOT_TOL
from flip.innovations.schedule import RATE_SEQUENCES
from flip.models import LinearProcessModel, load_model, model_from_dict

ALGORITHM_KINDS = ("fixed", "fma", "increasing")
OUTPUT_FORMATS = ("csv", "table")


def _resolve(path: Optional[str], root: Path, key: str) -> Optional[Path]:
    if path is None:
        return None
    resolved = Path(path)
    if not resolved.is_absolute():
        resolved = root / resolved
    if not resolved.exists():
        raise ConfigError(key, f"file `{path}` does not exist")
    return resolved


def _positive_int(value, key: str, allow_zero: bool = False) -> int:
    lower = 0 if allow_zero else 1
    if isinstance(value, bool) or not isinstance(value, int) or value < lower:
        raise ConfigError(key, f"expected an integer >= {lower}, got {value!r}")
    return value


@dataclass
class BasisArguments:
    kind: str = field(default="fourier")
    D: Optional[int] = field(default=None)
    resolution: int = field(default=DEFAULT_RESOLUTION)
    path: Optional[str] = field(default=None)

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ConfigError("basis.kind", f"unknown kind `{self.kind}`, expected one of {BASIS_KINDS}")
        if self.D is not None:
            _positive_int(self.D, "basis.D")
        _positive_int(self.resolution, "basis.resolution")
        if self.kind == "user-supplied" and self.path is None:
            raise ConfigError("basis.path", "required for a user-supplied basis")


@dataclass
class AlgorithmArguments:
    kind: str = field(default="fixed")
    D: Optional[int] = field(default=None)
    schedule: Union[str, List[int], dict] = field(default="constant")

    def __post_init__(self):
        if self.kind not in ALGORITHM_KINDS:
            raise ConfigError(
                "algorithm.kind", f"unknown kind `{self.kind}`, expected one of {ALGORITHM_KINDS}"
            )
        if self.D is not None:
            _positive_int(self.D, "algorithm.D")
        if isinstance(self.schedule, str) and self.schedule not in SCHEDULE_KINDS:
            raise ConfigError(
                "algorithm.schedule",
                f"unknown schedule `{self.schedule}`, expected one of {SCHEDULE_KINDS}",
            )


@dataclass
class RunArguments:
    n_max: int = field(default=50)
    mc_runs: int = field(default=2000)
    seed: int = field(default=0)
    pivot_tol: float = field(default=DEFAULT_PIVOT_TOL)
    omega_grid: int = field(default=512)
    output: Optional[str] = field(default=None)
    predictions: Optional[str] = field(default=None)
    state: Optional[str] = field(default=None)
    report_dir: Optional[str] = field(default=None)

    def __post_init__(self):
        _positive_int(self.n_max, "run.n_max")
        _positive_int(self.mc_runs, "run.mc_runs", allow_zero=True)
        _positive_int(self.seed, "run.seed", allow_zero=True)
        _positive_int(self.omega_grid, "run.omega_grid")
        if self.omega_grid < 2:
            raise ConfigError("run.omega_grid", "needs at least 2 points")
        if not isinstance(self.pivot_tol, (int, float)) or not 0 < self.pivot_tol < 1:
            raise ConfigError("run.pivot_tol", f"expected a number in (0, 1), got {self.pivot_tol!r}")


@dataclass
class StudyArguments:
    n_grid: List[int] = field(default_factory=lambda: [10, 50, 200])
    D_grid: Optional[List[int]] = field(default=None)
    H: int = field(default=10)
    lemma_n: int = field(default=10)
    m_of_n: str = field(default="ceil-sqrt")
    truncation: int = field(default=200)

    def __post_init__(self):
        if not self.n_grid:
            raise ConfigError("study.n_grid", "must not be empty")
        for idx, n in enumerate(self.n_grid):
            _positive_int(n, f"study.n_grid[{idx}]")
        if self.D_grid is not None:
            for idx, D in enumerate(self.D_grid):
                _positive_int(D, f"study.D_grid[{idx}]")
        _positive_int(self.H, "study.H", allow_zero=True)
        _positive_int(self.lemma_n, "study.lemma_n")
        _positive_int(self.truncation, "study.truncation")
        if self.m_of_n not in RATE_SEQUENCES:
            raise ConfigError(
                "study.m_of_n", f"unknown rate sequence `{self.m_of_n}`, expected one of {tuple(RATE_SEQUENCES)}"
            )


def _section(data: dict, name: str, cls):
    section = data.get(name, {})
    if not isinstance(section, dict):
        raise ConfigError(name, "must be an object")
    known = set(cls.__dataclass_fields__)
    unknown = sorted(set(section) - known)
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}", "unknown key")
    return cls(**section)


@dataclass
class ExperimentConfig:
    model: LinearProcessModel
    basis: BasisArguments = field(default_factory=BasisArguments)
    algorithm: AlgorithmArguments = field(default_factory=AlgorithmArguments)
    run: RunArguments = field(default_factory=RunArguments)
    study: StudyArguments = field(default_factory=StudyArguments)
    root: Path = field(default=Path("."))

    def __post_init__(self):
        ambient = self.model.dim
        if self.basis.D is not None and self.basis.D != ambient:
            raise ConfigError("basis.D", f"model has dimension {ambient}, basis declares {self.basis.D}")
        if self.basis.resolution < ambient:
            raise ConfigError("basis.resolution", f"must be at least the model dimension {ambient}")
        if self.algorithm.D is not None and self.algorithm.D > ambient:
            raise ConfigError("algorithm.D", f"exceeds the model dimension {ambient}")
        if self.study.D_grid is not None and max(self.study.D_grid) > ambient:
            raise ConfigError("study.D_grid", f"values exceed the model dimension {ambient}")
        try:
            self.schedule().dims(self.run.n_max + 1)
        except (ValueError, DimensionError) as e:
            raise ConfigError("algorithm.schedule", str(e))
        if self.basis.path is not None:
            _resolve(self.basis.path, self.root, "basis.path")

    @property
    def D(self) -> int:
        """Projection dimension of the fixed-dimension algorithms."""
        return self.algorithm.D if self.algorithm.D is not None else self.model.dim

    def schedule(self) -> Schedule:
        if self.algorithm.kind != "increasing":
            return constant_schedule(self.D)
        return parse_schedule(self.algorithm.schedule, self.model.dim)

    def rate_sequence(self):
        return rate_sequence(self.study.m_of_n)

    def ambient_basis(self) -> OrthonormalBasis:
        if self.basis.kind == "user-supplied":
            basis = read_basis(_resolve(self.basis.path, self.root, "basis.path"))
            if basis.size < self.model.dim:
                raise ConfigError("basis.path", f"basis has {basis.size} functions, model needs {self.model.dim}")
            return basis
        return fourier_basis(Grid(self.basis.resolution), self.model.dim)

    def output_path(self, name: str, override: Optional[str] = None) -> Optional[Path]:
        if override is not None:
            return Path(override)
        value = getattr(self.run, name)
        if value is None:
            return None
        path = Path(value)
        return path if path.is_absolute() else self.root / path

    @classmethod
    def from_dict(cls, data: dict, root: Union[str, Path] = ".") -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config", "must be a JSON object")
        root = Path(root)
        unknown = sorted(set(data) - {"model", "basis", "algorithm", "run", "study"})
        if unknown:
            raise ConfigError(unknown[0], "unknown section")
        if "model" not in data:
            raise ConfigError("model", "missing")

        model_section = data["model"]
        if not isinstance(model_section, dict):
            raise ConfigError("model", "must be an object")
        if "path" in model_section:
            path = _resolve(model_section["path"], root, "model.path")
            try:
                model = load_model(path)
            except json.JSONDecodeError as e:
                raise ConfigError("model.path", f"invalid JSON ({e})")
        else:
            model = model_from_dict(model_section)

        return cls(
            model=model,
            basis=_section(data, "basis", BasisArguments),
            algorithm=_section(data, "algorithm", AlgorithmArguments),
            run=_section(data, "run", RunArguments),
            study=_section(data, "study", StudyArguments),
            root=root,
        )

    @classmethod
    def from_file(cls, path: Union[str, Path], seed: Optional[int] = None) -> "ExperimentConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError("config", f"file `{path}` does not exist")
        try:
            with open(path) as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError("config", f"invalid JSON ({e})")
        if seed is not None and isinstance(data, dict):
            data.setdefault("run", {})["seed"] = seed
        return cls.from_dict(data, path.parent)
