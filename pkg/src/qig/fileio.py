"""JSON documents for matrices, probability vectors, mixtures and models."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .matcore import ValidationError


def _load(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return doc


def _real_array(value, name, path) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: field {name!r} is not a numeric array") from exc
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{path}: field {name!r} has non-finite entries")
    return arr


def matrix_from_doc(doc: dict, path="<doc>") -> np.ndarray:
    """``{"dim": n, "re": n x n, "im": n x n}``; ``im`` may be omitted."""
    if "dim" not in doc or "re" not in doc:
        raise ValidationError(f"{path}: matrix document needs 'dim' and 're'")
    n = doc["dim"]
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"{path}: 'dim' must be a positive integer")
    re = _real_array(doc["re"], "re", path)
    im = _real_array(doc.get("im", np.zeros((n, n))), "im", path)
    for name, arr in (("re", re), ("im", im)):
        if arr.shape != (n, n):
            raise ValidationError(f"{path}: field {name!r} has shape {arr.shape}, expected ({n}, {n})")
    return re + 1j * im


def matrix_to_doc(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError("only square matrices can be written")
    return {"dim": M.shape[0], "re": M.real.tolist(), "im": M.imag.tolist()}


def read_matrix(path) -> np.ndarray:
    return matrix_from_doc(_load(path), path)


def write_matrix(path, M) -> None:
    Path(path).write_text(json.dumps(matrix_to_doc(M)))


def read_probability(path) -> np.ndarray:
    doc = _load(path)
    if "p" not in doc:
        raise ValidationError(f"{path}: probability document needs 'p'")
    p = _real_array(doc["p"], "p", path)
    if p.ndim != 1:
        raise ValidationError(f"{path}: 'p' must be a flat array")
    return p


def read_mixture(path) -> tuple[np.ndarray, np.ndarray]:
    doc = _load(path)
    if "nodes" not in doc or "weights" not in doc:
        raise ValidationError(f"{path}: mixture document needs 'nodes' and 'weights'")
    return _real_array(doc["nodes"], "nodes", path), _real_array(doc["weights"], "weights", path)


def read_model(path):
    """Model document; matrix references are paths relative to the document.

    ``{"kind": "affine", "rho": file, "generators": [files], "estimators": [files]}``
    ``{"kind": "sld-exp", "rho": file, "T": file, "estimators": [files]}``
    ``{"kind": "km-exp", "H": file, "T": file, "estimators": [files]}``

    Returns ``(model, estimators)``; ``estimators`` may be ``None``.
    """
    from .estimation import affine_family, km_exp_family, sld_exp_family

    doc = _load(path)
    base = Path(path).parent

    def mat(key):
        if key not in doc:
            raise ValidationError(f"{path}: model document needs {key!r}")
        return read_matrix(base / doc[key])

    kind = doc.get("kind")
    try:
        if kind == "affine":
            model = affine_family(mat("rho"), [read_matrix(base / g) for g in doc.get("generators", [])])
        elif kind == "sld-exp":
            model = sld_exp_family(mat("rho"), mat("T"))
        elif kind == "km-exp":
            model = km_exp_family(mat("H"), mat("T"))
        else:
            raise ValidationError(f"{path}: unknown model kind {kind!r}")
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    est = doc.get("estimators")
    if est is not None:
        est = [read_matrix(base / e) for e in est]
    return model, est
