"""Centralized tolerance configuration.

All numerical gates used across the toolkit live in one frozen record so a
verification campaign has a single knob. The environment variable
``QGEO_TOL_SCALE`` (a positive real, default 1) multiplies every tolerance;
it does not touch the finite-difference step size, which is a discretization
parameter rather than a gate.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_TOL_SCALE = "QGEO_TOL_SCALE"


@dataclass(frozen=True)
class Tolerances:
    """Numerical gates, grouped by what they police."""

    herm: float = 1e-12        # relative Hermiticity defect
    eig: float = 1e-10         # eigensystem reconstruction, x max(1, |M|_F)
    roundtrip: float = 1e-9    # eigensystem campaign round-trip gate
    unitary: float = 1e-10     # U†U = I defect for computed unitaries
    group_law: float = 1e-9    # exp((s+t)X) vs exp(sX)exp(tX)
    sampler: float = 1e-12     # V†V = I defect for sampled isometries
    trace: float = 1e-12       # unit-trace / normalization defects
    spec: float = 1e-9         # absolute eigenvalue-vs-spectrum deviation
    frame: float = 1e-10       # |psi†psi - P|_F
    fiber: float = 1e-8        # fiber-transitivity reconstruction gate
    gauge: float = 1e-12       # anti-Hermiticity and [.,P] defects
    tangent: float = 1e-10     # |X†psi + psi†X|_F, x max(1, scale)
    connection: float = 1e-10  # reproducing/annihilating contract
    partial_trace: float = 1e-10  # reduced projector vs psi psi†
    closed_form: float = 1e-10 # spin closed forms vs generic pipeline
    identity: float = 1e-8     # algebraic identity residuals, x scale
    invariance: float = 1e-9   # gauge/representative invariance of scalars
    dominance: float = 1e-9    # permitted negative slack in bound checks
    classify: float = 1e-9     # parallel/perpendicular norm ratio
    demo: float = 1e-9         # worked-example targets
    fd: float = 1e-5           # finite-difference residuals, x scale
    flow: float = 1e-4         # trajectory flow-derivative gate
    tie: float = 1e-12         # winner tie window, x max(1, dA*dB)
    fd_step: float = 1e-5      # central-difference step (not scaled)

    def scaled(self, factor: float) -> "Tolerances":
        """Return a copy with every gate (but not fd_step) multiplied."""
        if factor <= 0:
            raise ValueError(f"tolerance scale must be positive, got {factor}")
        if factor == 1.0:
            return self
        updates = {
            f.name: getattr(self, f.name) * factor
            for f in fields(self)
            if f.name != "fd_step"
        }
        return replace(self, **updates)


def env_tol_scale() -> float:
    raw = os.environ.get(ENV_TOL_SCALE, "1")
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_TOL_SCALE} must be a real number, got {raw!r}") from exc
    return value


def default_tolerances() -> Tolerances:
    """Tolerances with the environment scale applied."""
    return Tolerances().scaled(env_tol_scale())
