"""File formats.

* points: CSV, one point per line, ``D`` comma-separated reals, no header
* metric: first line ``n``, then ``n`` lines of ``n`` space-separated reals
* coreset: CSV with header ``id,weight``; sidecar JSON metadata; optional
  ``id,rep`` CSV with the representative of every source point
* centers: a report JSON with a ``centers`` list, or ids one per line

Floats are written with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import Dataset, EuclideanPoints, ExplicitMetric
from .exceptions import ContractViolation


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def format_points(X) -> str:
    buf = _io.StringIO()
    np.savetxt(buf, np.atleast_2d(np.asarray(X, dtype=np.float64)), fmt="%.17g", delimiter=",")
    return buf.getvalue()


def write_points(path, X) -> None:
    atomic_write(path, format_points(X))


def read_points(path) -> EuclideanPoints:
    try:
        X = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise ContractViolation(f"{path}: not a numeric point CSV ({exc})") from exc
    return EuclideanPoints(X)


def format_metric(M) -> str:
    M = np.asarray(M, dtype=np.float64)
    buf = _io.StringIO()
    buf.write(f"{M.shape[0]}\n")
    np.savetxt(buf, M, fmt="%.17g", delimiter=" ")
    return buf.getvalue()


def write_metric(path, M) -> None:
    atomic_write(path, format_metric(M))


def read_metric(path) -> ExplicitMetric:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 1:
            raise ContractViolation(f"{path}: first line must hold the point count")
        n = int(header[0])
        M = np.loadtxt(fh, ndmin=2, dtype=np.float64)
    if M.shape != (n, n):
        raise ContractViolation(f"{path}: expected a {n} x {n} matrix, got {M.shape}")
    return ExplicitMetric(M)


def read_dataset(path, fmt: str = "csv") -> Dataset:
    if fmt == "csv":
        return read_points(path)
    if fmt == "metric":
        return read_metric(path)
    raise ContractViolation(f"unknown input format {fmt!r}")


def format_coreset(cs) -> str:
    rows = "".join(f"{int(i)},{int(w)}\n" for i, w in zip(cs.points, cs.weights))
    return "id,weight\n" + rows


def format_rep_map(cs) -> str:
    return "id,rep\n" + "".join(f"{p},{int(r)}\n" for p, r in enumerate(cs.rep_map))


def read_coreset(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, dtype=np.int64)
    with open(path) as fh:
        if fh.readline().strip() != "id,weight":
            raise ContractViolation(f"{path}: missing 'id,weight' header")
    return data[:, 0], data[:, 1]


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".meta.json")


def read_centers(path) -> np.ndarray:
    text = Path(path).read_text().strip()
    if text.startswith("{"):
        obj = json.loads(text)
        if "centers" not in obj:
            raise ContractViolation(f"{path}: JSON has no 'centers' field")
        return np.asarray(obj["centers"], dtype=np.intp)
    tokens = text.replace(",", " ").split()
    try:
        return np.asarray([int(t) for t in tokens], dtype=np.intp)
    except ValueError as exc:
        raise ContractViolation(f"{path}: centers must be integer ids") from exc


def read_truth(path) -> dict:
    return json.loads(Path(path).read_text())
