"""Instance construction: parametric families and the on-disk format.

Instance files are JSON objects with integer fields "N" and "M", an N x M
table "nu" of outcome probabilities (each row a distribution), an N x M table
"f" of 0/1 rewards, and an optional length-N list "alpha" of real arm
amplitudes (uniform when absent).  Index convention: nu[x][y] is the chance
arm x lands on environment state y, and y = 0 is the first column.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import Callable

import numpy as np

from .bandits import BanditInstance
from .errors import InstanceFormatError, RenormalizationWarning

ALPHA_FILE_TOL = 1e-9      # accepted as-is
ALPHA_RENORM_TOL = 1e-6    # rescaled with a warning
_KEYS = {"N", "M", "nu", "f", "alpha"}


def bernoulli_instance(values: np.ndarray | list[float]) -> BanditInstance:
    """Arms with the given expected rewards, realized over two outcomes.

    Arm x lands on the rewarded first outcome with probability values[x].
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"values must be a vector, got shape {v.shape}")
    if np.any((v < 0) | (v > 1)):
        raise ValueError("values must lie in [0, 1]")
    nu = np.stack([v, 1.0 - v], axis=1)
    f = np.zeros_like(nu, dtype=np.int64)
    f[:, 0] = 1
    return BanditInstance(nu=nu, f=f)


def one_good_arm(n_arms: int, *, good_value: float = 0.5) -> BanditInstance:
    """One arm worth good_value, every other arm worthless."""
    if n_arms < 1:
        raise ValueError(f"n_arms must be positive, got {n_arms}")
    values = np.zeros(n_arms)
    values[0] = good_value
    return bernoulli_instance(values)


def two_tier(n_arms: int, *, top: float = 0.5, rest: float = 0.25) -> BanditInstance:
    """One arm worth top, every other arm worth rest."""
    if n_arms < 1:
        raise ValueError(f"n_arms must be positive, got {n_arms}")
    values = np.full(n_arms, rest)
    values[0] = top
    return bernoulli_instance(values)


FAMILIES: dict[str, Callable[[int], BanditInstance]] = {
    "one-good-arm": one_good_arm,
    "two-tier": two_tier,
}


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InstanceFormatError(message)


def _as_table(raw: object, n: int, m: int, field: str) -> np.ndarray:
    _require(isinstance(raw, list) and len(raw) == n,
             f"field '{field}': expected {n} rows")
    rows = []
    for i, row in enumerate(raw):  # type: ignore[arg-type]
        _require(isinstance(row, list) and len(row) == m,
                 f"field '{field}' row {i}: expected {m} entries")
        _require(all(isinstance(v, (int, float)) and not isinstance(v, bool)
                     for v in row),
                 f"field '{field}' row {i}: entries must be numbers")
        rows.append(row)
    return np.array(rows, dtype=np.float64)


def load_instance(path: str | Path) -> tuple[BanditInstance, np.ndarray | None]:
    """Parse an instance file; returns the instance and its alpha (or None).

    Parse and schema problems raise InstanceFormatError with the offending
    line or field named.  Probability rows follow the renormalization policy
    of BanditInstance; alpha follows the same policy on its squared norm.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InstanceFormatError(f"{path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    _require(isinstance(data, dict), f"{path}: top level must be an object")
    unknown = set(data) - _KEYS
    _require(not unknown, f"{path}: unknown field(s) {sorted(unknown)}")
    for key in ("N", "M", "nu", "f"):
        _require(key in data, f"{path}: missing field '{key}'")
    n, m = data["N"], data["M"]
    _require(isinstance(n, int) and not isinstance(n, bool) and n >= 1,
             "field 'N': must be a positive integer")
    _require(isinstance(m, int) and not isinstance(m, bool) and m >= 1,
             "field 'M': must be a positive integer")
    nu = _as_table(data["nu"], n, m, "nu")
    f = _as_table(data["f"], n, m, "f")
    _require(bool(np.isin(f, (0, 1)).all()), "field 'f': entries must be 0 or 1")
    try:
        inst = BanditInstance(nu=nu, f=f.astype(np.int64))
    except ValueError as exc:
        raise InstanceFormatError(f"field 'nu': {exc}") from exc
    alpha = None
    if "alpha" in data:
        raw = data["alpha"]
        _require(isinstance(raw, list) and len(raw) == n,
                 f"field 'alpha': expected {n} entries")
        _require(all(isinstance(v, (int, float)) and not isinstance(v, bool)
                     for v in raw),
                 "field 'alpha': entries must be numbers")
        alpha = np.array(raw, dtype=np.float64)
        off = abs(float((alpha ** 2).sum()) - 1.0)
        if off > ALPHA_RENORM_TOL:
            raise InstanceFormatError(
                f"field 'alpha': squared norm off by {off:.3e}, more than "
                f"{ALPHA_RENORM_TOL}"
            )
        if off > ALPHA_FILE_TOL:
            warnings.warn(
                f"rescaled alpha off normalization by {off:.3e}",
                RenormalizationWarning,
                stacklevel=2,
            )
            alpha = alpha / np.linalg.norm(alpha)
    return inst, alpha


def save_instance(
    inst: BanditInstance, path: str | Path, *, alpha: np.ndarray | None = None
) -> None:
    """Write an instance file that load_instance reads back value-identical."""
    data: dict[str, object] = {
        "N": inst.n_arms,
        "M": inst.n_env,
        "nu": [[float(v) for v in row] for row in inst.nu],
        "f": [[int(v) for v in row] for row in inst.f],
    }
    if alpha is not None:
        a = np.asarray(alpha, dtype=np.float64)
        if a.shape != (inst.n_arms,):
            raise ValueError(f"alpha has shape {a.shape}, expected ({inst.n_arms},)")
        data["alpha"] = [float(v) for v in a]
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
