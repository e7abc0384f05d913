"""Uncertainty statistics, the three lower bounds, and orbit-preserving
evolution.

For observables A, B at a mixed state rho with purification psi:

  * Robertson-Schrodinger bound:  sqrt(cov(A,B)^2 + com(A,B)^2) from the
    symmetric/antisymmetric product expectations.
  * Geometric bound:  (hbar/2) sqrt({A,B}_g^2 + {A,B}_w^2) from the metric
    and symplectic brackets on the isospectral orbit.
  * Combined bound:  (hbar/2) sqrt({A,B}_g^2 + {A,B}_w^2
                        + max(0, 2 {A,B}_g xiA_perp.xiB_perp
                                  + (xiA_perp.xiB_perp)^2)),
    which equals max(geometric, RS) pointwise.

The two bounds differ exactly by the xi_perp cross term, which measures the
classical covariance content hidden in the gauge directions; the
decomposition report exposes every term and self-checks the underlying
product identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .config import Tolerances
from .errors import IdentityViolation, SpectrumDrift
from .geometry import (
    GeometryContext,
    ambient_forms,
    brackets,
    hamiltonian_lift,
    inertia_inner,
    split,
    xi_field,
)
from .linalg import check_hermitian, frobenius, hermitian_eigensystem, unitary_exponential_family
from .states import DensityState, PurificationFrame, frame_from_eigensystem, frame_to_state

__all__ = [
    "BoundReport",
    "moments",
    "rs_bound",
    "geometric_bound",
    "combined_bound",
    "decomposition",
    "classify",
    "EvolutionResult",
    "evolve",
]


@dataclass(frozen=True)
class BoundReport:
    """All scalars of a two-observable comparison at one state.

    Field names double as the wire format. ``winner`` is decided with a tie
    window of tol.tie * max(1, dA*dB) so round-off never flips the headline.
    """

    expA: float
    expB: float
    dA: float
    dB: float
    rs_bound: float
    geo_bound: float
    combined_bound: float
    g_bracket: float
    w_bracket: float
    xiAperp_xiBperp: float
    xiAperp_sq: float
    xiBperp_sq: float
    winner: str


def _expect(a: np.ndarray, rho: np.ndarray) -> float:
    return float(np.real(np.trace(a @ rho)))


def moments(a, state: DensityState, tol: Tolerances | None = None) -> tuple[float, float]:
    """Expectation value and uncertainty sqrt(<A^2> - <A>^2).

    Negative round-off under the square root is clamped to zero.
    """
    a = check_hermitian(np.asarray(a, dtype=complex), tol, "observable")
    exp = _expect(a, state.rho)
    second = _expect(a @ a, state.rho)
    return exp, float(np.sqrt(max(0.0, second - exp * exp)))


def rs_bound(a, b, state: DensityState, tol: Tolerances | None = None) -> float:
    """Robertson-Schrodinger lower bound for dA*dB at the state."""
    a = check_hermitian(np.asarray(a, dtype=complex), tol, "observable A")
    b = check_hermitian(np.asarray(b, dtype=complex), tol, "observable B")
    rho = state.rho
    sym = _expect(0.5 * (a @ b + b @ a), rho)
    com = float(np.real(np.trace((a @ b - b @ a) @ rho) / 2j))
    cov = sym - _expect(a, rho) * _expect(b, rho)
    return float(np.hypot(cov, com))


def geometric_bound(a, b, psi: PurificationFrame,
                    ctx: GeometryContext | None = None) -> float:
    """(hbar/2) sqrt(g^2 + w^2) from the orbit brackets."""
    ctx = ctx or GeometryContext()
    g, w = brackets(a, b, psi, ctx)
    return 0.5 * ctx.hbar * float(np.hypot(g, w))


def combined_bound(a, b, psi: PurificationFrame,
                   ctx: GeometryContext | None = None) -> float:
    """Pointwise maximum of the geometric and RS bounds, in bracket form.

    Also verifies the decomposition identity
    rs^2 = geo^2 + (hbar^2/4) (2 g xiAB + xiAB^2) that makes the maximum
    itself a bracket-level quantity.
    """
    ctx = ctx or GeometryContext()
    g, w = brackets(a, b, psi, ctx)
    _, pa = xi_field(a, psi, ctx)
    _, pb = xi_field(b, psi, ctx)
    cross = inertia_inner(pa, pb, ctx)
    diff = 2.0 * g * cross + cross * cross
    geo = 0.5 * ctx.hbar * float(np.hypot(g, w))
    rs = rs_bound(a, b, frame_to_state(psi), ctx.tol)
    resid = abs(rs * rs - (geo * geo + 0.25 * ctx.hbar**2 * diff))
    scale = max(1.0, rs * rs, geo * geo)
    if resid > ctx.tol.identity * scale:
        raise IdentityViolation(
            f"bound-difference identity residual {resid:.3e} exceeds budget"
        )
    return 0.5 * ctx.hbar * float(np.sqrt(g * g + w * w + max(0.0, diff)))


def _winner(geo: float, rs: float, da: float, db: float, tol: Tolerances) -> str:
    window = tol.tie * max(1.0, da * db)
    if geo > rs + window:
        return "geometric"
    if rs > geo + window:
        return "robertson_schrodinger"
    return "tie"


def decomposition(a, b, psi: PurificationFrame,
                  ctx: GeometryContext | None = None) -> BoundReport:
    """Full term-by-term comparison of the bounds at one state.

    Self-checks the two product identities behind the comparison: the
    diagonal one,

      dA^2 dB^2 = (hbar^2/4)(gAA gBB + gAA xiBp^2 + gBB xiAp^2
                              + xiAp^2 xiBp^2),

    and the cross one,

      cov^2 + com^2 = (hbar^2/4)(gAB^2 + wAB^2 + 2 gAB xiABp + xiABp^2).

    Raises IdentityViolation if either residual exceeds
    tol.identity * max(1, |lhs|, |rhs|).
    """
    ctx = ctx or GeometryContext()
    hbar = ctx.hbar
    a = check_hermitian(np.asarray(a, dtype=complex), ctx.tol, "observable A")
    b = check_hermitian(np.asarray(b, dtype=complex), ctx.tol, "observable B")
    state = frame_to_state(psi)

    exp_a, d_a = moments(a, state, ctx.tol)
    exp_b, d_b = moments(b, state, ctx.tol)

    lift_a = hamiltonian_lift(a, psi, ctx)
    lift_b = hamiltonian_lift(b, psi, ctx)
    hor_a, _ = split(psi, lift_a, ctx)
    hor_b, _ = split(psi, lift_b, ctx)
    g_ab = ambient_forms(hor_a, hor_b, ctx).g
    w_ab = ambient_forms(lift_a, lift_b, ctx).w
    g_aa = ambient_forms(hor_a, hor_a, ctx).g
    g_bb = ambient_forms(hor_b, hor_b, ctx).g

    _, perp_a = xi_field(a, psi, ctx)
    _, perp_b = xi_field(b, psi, ctx)
    cross = inertia_inner(perp_a, perp_b, ctx)
    sq_a = inertia_inner(perp_a, perp_a, ctx)
    sq_b = inertia_inner(perp_b, perp_b, ctx)

    quarter = 0.25 * hbar * hbar
    lhs1 = (d_a * d_b) ** 2
    rhs1 = quarter * (g_aa * g_bb + g_aa * sq_b + g_bb * sq_a + sq_a * sq_b)
    if abs(lhs1 - rhs1) > ctx.tol.identity * max(1.0, abs(lhs1), abs(rhs1)):
        raise IdentityViolation(
            f"uncertainty-product identity residual {abs(lhs1 - rhs1):.3e}"
        )

    rs = rs_bound(a, b, state, ctx.tol)
    lhs2 = rs * rs
    rhs2 = quarter * (g_ab**2 + w_ab**2 + 2.0 * g_ab * cross + cross**2)
    if abs(lhs2 - rhs2) > ctx.tol.identity * max(1.0, abs(lhs2), abs(rhs2)):
        raise IdentityViolation(
            f"covariance-commutator identity residual {abs(lhs2 - rhs2):.3e}"
        )

    geo = 0.5 * hbar * float(np.hypot(g_ab, w_ab))
    diff = 2.0 * g_ab * cross + cross * cross
    combined = 0.5 * hbar * float(np.sqrt(g_ab**2 + w_ab**2 + max(0.0, diff)))

    return BoundReport(
        expA=exp_a,
        expB=exp_b,
        dA=d_a,
        dB=d_b,
        rs_bound=rs,
        geo_bound=geo,
        combined_bound=combined,
        g_bracket=g_ab,
        w_bracket=w_ab,
        xiAperp_xiBperp=cross,
        xiAperp_sq=sq_a,
        xiBperp_sq=sq_b,
        winner=_winner(geo, rs, d_a, d_b, ctx.tol),
    )


def classify(a, psi: PurificationFrame, ctx: GeometryContext | None = None) -> str:
    """'parallel' (lift horizontal), 'perpendicular' (lift vertical), or
    'generic', by the relative norms of the split. The zero lift counts as
    parallel."""
    ctx = ctx or GeometryContext()
    lift = hamiltonian_lift(a, psi, ctx)
    total = frobenius(lift.x)
    if total == 0.0:
        return "parallel"
    hor, vert = split(psi, lift, ctx)
    if frobenius(vert.x) <= ctx.tol.classify * total:
        return "parallel"
    if frobenius(hor.x) <= ctx.tol.classify * total:
        return "perpendicular"
    return "generic"


@dataclass(frozen=True)
class EvolutionResult:
    """Trajectory data from a conjugation flow rho_j = U_j rho U_j†."""

    times: np.ndarray
    states: tuple[DensityState, ...]
    expectations: dict[str, np.ndarray]
    flow_residuals: dict[str, np.ndarray]
    spectrum_drift: np.ndarray

    @property
    def max_drift(self) -> float:
        return float(np.max(self.spectrum_drift))

    @property
    def max_flow_residual(self) -> float:
        if not self.flow_residuals:
            return 0.0
        return max(float(np.max(r)) if r.size else 0.0
                   for r in self.flow_residuals.values())


def evolve(h, state: DensityState, t: float, steps: int,
           ctx: GeometryContext | None = None,
           probes: Mapping[str, np.ndarray] | None = None) -> EvolutionResult:
    """Conjugation flow rho_j = U_j rho U_j† with U_j = exp(-i H t_j / hbar).

    Exact exponentials per sample point (one shared eigendecomposition of
    the generator), so staying on the isospectral orbit is an identity, not
    an integrator property. Every rho_j is certified against the declared
    spectrum; drift beyond tol.spec raises SpectrumDrift.

    For each probe observable B the flow derivative d<B>/dt is compared to
    the symplectic bracket {B, H}_w at interior points by central
    differences; residuals are returned per probe.
    """
    ctx = ctx or GeometryContext()
    h = check_hermitian(np.asarray(h, dtype=complex), ctx.tol, "hamiltonian")
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    probes = dict(probes or {})
    for name, mat in probes.items():
        probes[name] = check_hermitian(np.asarray(mat, dtype=complex), ctx.tol, f"probe {name!r}")

    flow = unitary_exponential_family(h / (1j * ctx.hbar), ctx.tol)
    times = np.linspace(0.0, t, steps + 1)
    sigma = state.sigma
    padded = sigma.padded(state.n)

    states: list[DensityState] = []
    frames: list[PurificationFrame] = []
    drift = np.zeros(steps + 1)
    for j, tj in enumerate(times):
        u = flow(float(tj))
        rho_j = u @ state.rho @ u.conj().T
        rho_j = 0.5 * (rho_j + rho_j.conj().T)
        values, vectors = hermitian_eigensystem(rho_j, ctx.tol)
        drift[j] = float(np.max(np.abs(values - padded)))
        if drift[j] > ctx.tol.spec:
            raise SpectrumDrift(
                f"state left its orbit at t={tj}: eigenvalue drift {drift[j]:.3e}"
            )
        states.append(DensityState(rho_j, sigma))
        frames.append(frame_from_eigensystem(values, vectors, sigma, ctx.tol))

    expectations = {
        name: np.array([_expect(mat, s.rho) for s in states])
        for name, mat in probes.items()
    }
    residuals: dict[str, np.ndarray] = {}
    if steps >= 2 and probes:
        dt = times[1] - times[0]
        for name, mat in probes.items():
            series = expectations[name]
            res = np.zeros(steps - 1)
            for j in range(1, steps):
                fd = (series[j + 1] - series[j - 1]) / (2.0 * dt)
                w = brackets(mat, h, frames[j], ctx).w
                res[j - 1] = abs(fd - w)
            residuals[name] = res
    elif probes:
        residuals = {name: np.zeros(0) for name in probes}

    return EvolutionResult(
        times=times,
        states=tuple(states),
        expectations=expectations,
        flow_residuals=residuals,
        spectrum_drift=drift,
    )
