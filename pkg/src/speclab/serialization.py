"""JSON carriers for matrices, vectors and operator pairs."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import MalformedInputError


def _pair(v):
    c = complex(v)
    return [float(c.real), float(c.imag)]


def _complex(e, what):
    if isinstance(e, (int, float)):
        return complex(e)
    if isinstance(e, (list, tuple)) and len(e) == 2 and all(isinstance(u, (int, float)) for u in e):
        return complex(e[0], e[1])
    raise MalformedInputError(f"malformed {what}: entry {e!r} is not [re, im]")


def matrix_to_dict(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"dim": int(M.shape[0]), "entries": [_pair(v) for v in M.reshape(-1)]}


def vector_to_dict(x) -> dict:
    x = np.asarray(x, dtype=complex).reshape(-1)
    return {"entries": [_pair(v) for v in x]}


def matrix_from_dict(d) -> np.ndarray:
    if not isinstance(d, dict) or "entries" not in d:
        raise MalformedInputError("malformed matrix: expected {\"dim\", \"entries\"}")
    entries = d["entries"]
    if not isinstance(entries, list) or not entries:
        raise MalformedInputError("malformed matrix: no entries")
    vals = np.array([_complex(e, "matrix") for e in entries])
    n = d.get("dim")
    if n is None:
        n = int(round(np.sqrt(len(vals))))
    if not isinstance(n, int) or n < 1 or n * n != len(vals):
        raise MalformedInputError(f"malformed matrix: dim {n!r} does not match {len(vals)} entries")
    M = vals.reshape(n, n)
    if not np.all(np.isfinite(M)):
        raise MalformedInputError("malformed matrix: non-finite entries")
    return M


def vector_from_dict(d) -> np.ndarray:
    if not isinstance(d, dict) or not isinstance(d.get("entries"), list) or not d["entries"]:
        raise MalformedInputError("malformed vector")
    x = np.array([_complex(e, "vector") for e in d["entries"]])
    if not np.all(np.isfinite(x)):
        raise MalformedInputError("malformed vector: non-finite entries")
    return x


def _load(path, what):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInputError(f"cannot read {what} file {path}: {exc.strerror}") from exc
    if not text.strip():
        raise MalformedInputError(f"malformed {what}: empty file")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"malformed {what}: {exc.msg}") from exc


def load_matrix(path) -> np.ndarray:
    return matrix_from_dict(_load(path, "matrix"))


def load_vector(path) -> np.ndarray:
    d = _load(path, "vector")
    return vector_from_dict(d)


def load_pair(path) -> tuple[np.ndarray, np.ndarray]:
    """A pair file holds {"A": matrix, "T": matrix} for derivations or {"T": matrix, "x": vector}."""
    d = _load(path, "pair")
    if not isinstance(d, dict):
        raise MalformedInputError("malformed pair")
    if "A" in d and "T" in d:
        A, T = matrix_from_dict(d["A"]), matrix_from_dict(d["T"])
        if A.shape != T.shape:
            raise MalformedInputError("malformed pair: A and T differ in size")
        return A, T
    if "T" in d and "x" in d:
        T, x = matrix_from_dict(d["T"]), vector_from_dict(d["x"])
        if T.shape[0] != x.shape[0]:
            raise MalformedInputError("malformed pair: T and x differ in size")
        return T, x
    raise MalformedInputError("malformed pair: expected keys A,T or T,x")


def pair_kind(path) -> str:
    d = _load(path, "pair")
    return "derivation" if isinstance(d, dict) and "A" in d else "orbit"


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
