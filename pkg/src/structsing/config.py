"""Run configuration files and MatrixMarket I/O.

A config is an INI file read with :mod:`configparser`. Relative paths are
resolved against the directory of the config file. Sections::

    [structure]
    kind = toeplitz          # toeplitz | hankel | symmetric | full |
                             # sparse-pattern | custom
    n = 100                  # optional, defaults to the matrix order
    pattern = 1 1; 1 2; 2 2  # sparse-pattern only, 1-based (row col) pairs;
                             # omitted: the stored entries of the matrix file
    basis = B1.mtx, B2.mtx   # custom only, orthonormalized on load

    [solver]                 # any SolverConfig field
    algorithm = tikhonov
    strategy = right-kernel
    epsilon0 = 1e-2

    [solve]
    matrix = A.mtx

    [bench]
    sizes = 50, 100, 200
    samples = 40
    kind = toeplitz          # toeplitz | sparse
    p = 0.4                  # sparse only
    seed = 0                 # sample s of every size uses seed + s
    output = medians.csv     # raw records go to medians_records.csv
    workers = 1
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse as sp

from .algorithms import SolverConfig
from .structures import (
    full_basis,
    hankel_basis,
    orthonormalize,
    sparse_pattern_basis,
    symmetric_basis,
    toeplitz_basis,
)

STRUCTURE_KINDS = ("toeplitz", "hankel", "symmetric", "full", "sparse-pattern", "custom")
BENCH_KINDS = ("toeplitz", "sparse")


class ConfigError(ValueError):
    """Bad config or input file; the message names the offending file."""


@dataclass
class StructureSpec:
    kind: str = "toeplitz"
    n: int | None = None
    pattern: list | None = None  # 0-based
    basis_files: list = field(default_factory=list)


@dataclass
class BenchSpec:
    sizes: list = field(default_factory=lambda: [100])
    samples: int = 40
    kind: str = "toeplitz"
    p: float = 0.4
    seed: int = 0
    output: Path | None = None
    workers: int = 1

    def __post_init__(self):
        if not self.sizes or min(self.sizes) < 2:
            raise ValueError("bench sizes must all be at least 2")
        if self.samples < 1:
            raise ValueError("bench samples must be at least 1")
        if self.kind not in BENCH_KINDS:
            raise ValueError(f"bench kind must be one of {BENCH_KINDS}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError("bench p must lie in (0, 1]")
        if self.workers < 1:
            raise ValueError("bench workers must be at least 1")


@dataclass
class RunConfig:
    command: str
    matrix_path: Path | None = None
    structure: StructureSpec = field(default_factory=StructureSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    bench: BenchSpec | None = None
    source: Path | None = None


# -- MatrixMarket -------------------------------------------------------------


def read_matrix(path):
    """Read a square real MatrixMarket matrix.

    Returns ``(A, stored)`` where ``stored`` lists the 0-based positions held
    by a coordinate-format file (None for array format).
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"{path}: no such file")
    try:
        M = scipy.io.mmread(str(path))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"{path}: cannot read MatrixMarket file ({exc})") from exc
    stored = None
    if sp.issparse(M):
        coo = sp.coo_matrix(M)
        stored = sorted(set(zip(coo.row.tolist(), coo.col.tolist())))
        M = coo.toarray()
    M = np.asarray(M)
    if np.iscomplexobj(M):
        raise ConfigError(f"{path}: complex matrices are not supported")
    M = M.astype(float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ConfigError(f"{path}: matrix must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ConfigError(f"{path}: matrix has non-finite entries")
    return M, stored


def write_matrix(path, A, pattern=None):
    """Write A in array format, or in coordinate format on ``pattern``."""
    A = np.asarray(A, dtype=float)
    if pattern is None:
        scipy.io.mmwrite(str(path), A)
        return
    rows = np.array([i for i, _ in pattern], dtype=int)
    cols = np.array([j for _, j in pattern], dtype=int)
    M = sp.coo_matrix((A[rows, cols], (rows, cols)), shape=A.shape)
    scipy.io.mmwrite(str(path), M)


# -- config parsing -----------------------------------------------------------


def _parse_pattern(text):
    pairs = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.replace(",", " ").split()
        if not chunk:
            continue
        if len(chunk) != 2:
            raise ValueError(f"pattern entry {' '.join(chunk)!r} is not a (row col) pair")
        i, j = (int(x) for x in chunk)
        if i < 1 or j < 1:
            raise ValueError("pattern indices are 1-based")
        pairs.append((i - 1, j - 1))
    return pairs


def _split_list(text):
    return [x for x in text.replace(",", " ").split() if x]


def _solver_from(section) -> SolverConfig:
    kw = {}
    types = {f.name: f.type for f in dataclasses.fields(SolverConfig)}
    for key, raw in section.items():
        if key not in types:
            raise ValueError(f"unknown solver option {key!r}")
        t = str(types[key])
        if "bool" in t:
            kw[key] = section.getboolean(key)
        elif "int" in t:
            kw[key] = int(raw)
        elif "float" in t:
            kw[key] = float(raw)
        else:
            kw[key] = raw.strip()
    return SolverConfig(**kw)


def load_config(path, command: str) -> RunConfig:
    """Parse the config file for ``command`` ("solve" or "bench")."""
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";;"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: malformed config ({exc})") from exc
    base = path.parent
    try:
        structure = StructureSpec()
        if parser.has_section("structure"):
            sec = parser["structure"]
            structure.kind = sec.get("kind", "toeplitz").strip()
            if structure.kind not in STRUCTURE_KINDS:
                raise ValueError(f"unknown structure kind {structure.kind!r}")
            if "n" in sec:
                structure.n = sec.getint("n")
            if "pattern" in sec:
                structure.pattern = _parse_pattern(sec["pattern"])
            if "basis" in sec:
                structure.basis_files = [base / f for f in _split_list(sec["basis"])]
        solver = _solver_from(parser["solver"]) if parser.has_section("solver") else SolverConfig()
        cfg = RunConfig(command=command, structure=structure, solver=solver, source=path)
        if command == "solve":
            if not parser.has_option("solve", "matrix"):
                raise ValueError("[solve] needs a 'matrix' entry")
            cfg.matrix_path = base / parser["solve"]["matrix"].strip()
        elif command == "bench":
            sec = parser["bench"] if parser.has_section("bench") else {}
            out = sec.get("output", "bench.csv").strip()
            cfg.bench = BenchSpec(
                sizes=[int(x) for x in _split_list(sec.get("sizes", "100"))],
                samples=int(sec.get("samples", 40)),
                kind=sec.get("kind", "toeplitz").strip(),
                p=float(sec.get("p", 0.4)),
                seed=int(sec.get("seed", 0)),
                output=base / out,
                workers=int(sec.get("workers", 1)),
            )
        else:
            raise ValueError(f"no config-driven command {command!r}")
    except (ValueError, KeyError, configparser.Error) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return cfg


def build_basis(spec: StructureSpec, n: int, stored=None, where="config"):
    """Orthonormal basis for ``spec`` at order n.

    A sparse-pattern spec without an explicit pattern uses ``stored``, the
    positions held by the matrix file.
    """
    if spec.n is not None and spec.n != n:
        raise ConfigError(f"{where}: structure n = {spec.n} but the matrix has order {n}")
    kind = spec.kind
    if kind == "toeplitz":
        return toeplitz_basis(n)
    if kind == "hankel":
        return hankel_basis(n)
    if kind == "symmetric":
        return symmetric_basis(n)
    if kind == "full":
        return full_basis(n)
    if kind == "sparse-pattern":
        pattern = spec.pattern if spec.pattern is not None else stored
        if not pattern:
            raise ConfigError(f"{where}: sparse-pattern structure needs a pattern or a coordinate-format matrix")
        try:
            return sparse_pattern_basis(pattern, n=n)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    if not spec.basis_files:
        raise ConfigError(f"{where}: custom structure needs 'basis' files")
    raw = []
    for f in spec.basis_files:
        B, _ = read_matrix(f)
        if B.shape != (n, n):
            raise ConfigError(f"{f}: basis element has shape {B.shape}, expected {(n, n)}")
        raw.append(B)
    return orthonormalize(raw)
