"""JSON encodings shared by the CLI and any file-based caller.

Matrix wire format (row-major, IEEE-754 doubles):

    {"rows": n, "cols": k, "re": [[...], ...], "im": [[...], ...]}

State file:

    {"hbar": 1.0, "rho": <matrix>, "spectrum": {"values": [...], "mults": [...]}}

The spectrum block is optional; when absent the caller must supply one (the
CLI exposes flags for it). Observable files are flat name -> matrix maps.
All dumps are key-sorted so equal inputs produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict
from typing import Any

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import BadDims
from .states import DensityState, Spectrum, density_state, make_spectrum
from .uncertainty import BoundReport

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "spectrum_to_json",
    "spectrum_from_json",
    "load_state",
    "load_observables",
    "matrix_digest",
    "bound_report_to_json",
    "dumps",
]


def matrix_to_json(m: np.ndarray) -> dict[str, Any]:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise BadDims(f"matrix encoding needs a 2-d array, got shape {m.shape}")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj: Any, name: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise BadDims(f"{name}: expected a matrix object, got {type(obj).__name__}")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise BadDims(f"{name}: malformed matrix object ({exc})") from exc
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise BadDims(
            f"{name}: declared shape ({rows}, {cols}) does not match entries "
            f"{re.shape} / {im.shape}"
        )
    m = re + 1j * im
    if not np.all(np.isfinite(re)) or not np.all(np.isfinite(im)):
        raise BadDims(f"{name}: non-finite entries")
    return m


def spectrum_to_json(sigma: Spectrum) -> dict[str, Any]:
    return {"values": list(sigma.values), "mults": list(sigma.mults)}


def spectrum_from_json(obj: Any, tol: Tolerances | None = None) -> Spectrum:
    if not isinstance(obj, dict) or "values" not in obj:
        raise BadDims("spectrum block must be an object with 'values' (and optional 'mults')")
    return make_spectrum(obj["values"], obj.get("mults"), tol)


def load_state(obj: Any, spectrum: Spectrum | None = None,
               tol: Tolerances | None = None) -> tuple[float, DensityState]:
    """Parse a state object; returns (hbar, validated state).

    ``spectrum`` overrides/supplies the spectrum block.
    """
    tol = tol or default_tolerances()
    if not isinstance(obj, dict) or "rho" not in obj:
        raise BadDims("state file must be an object with an 'rho' matrix")
    hbar = float(obj.get("hbar", 1.0))
    rho = matrix_from_json(obj["rho"], "rho")
    sigma = spectrum
    if sigma is None:
        if "spectrum" not in obj:
            raise BadDims("state file has no spectrum block; supply one explicitly")
        sigma = spectrum_from_json(obj["spectrum"], tol)
    return hbar, density_state(rho, sigma, tol)


def load_observables(obj: Any) -> dict[str, np.ndarray]:
    """Flat name -> matrix map."""
    if not isinstance(obj, dict) or not obj:
        raise BadDims("observable file must be a nonempty object of name -> matrix")
    return {str(name): matrix_from_json(mat, f"obs {name!r}") for name, mat in obj.items()}


def matrix_digest(m: np.ndarray) -> str:
    """Stable content hash of a matrix (shape + canonical bytes)."""
    m = np.ascontiguousarray(np.asarray(m, dtype=complex))
    h = hashlib.sha256()
    h.update(str(m.shape).encode())
    h.update(m.tobytes())
    return h.hexdigest()[:16]


def bound_report_to_json(report: BoundReport, *, hbar: float,
                         inputs: dict[str, str] | None = None,
                         tol: Tolerances | None = None) -> dict[str, Any]:
    """Flat report plus input hashes and the tolerance configuration."""
    out = asdict(report)
    out["hbar"] = hbar
    if inputs:
        out["inputs"] = dict(inputs)
    if tol is not None:
        out["tolerances"] = asdict(tol)
    return out


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, 2-space indent, newline)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
