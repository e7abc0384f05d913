"""Metric and symplectic geometry of the purification bundle.

The ambient operator space carries the pairings

    G(X, Y) = hbar Tr(X†Y + Y†X),      W(X, Y) = -i hbar Tr(X†Y - Y†X),

i.e. 2*hbar times the real/imaginary parts of the Hilbert-Schmidt product.
Frames psi with psi†psi = P form a bundle over the isospectral orbit whose
gauge directions are psi*xi for block-diagonal anti-Hermitian xi. The
mechanical connection

    A_psi(X) = sum_j Pi_j psi†X Pi_j P^-1

projects a tangent onto the gauge algebra; its kernel is the horizontal
subspace, which descends isometrically to the orbit. Observables A lift to
X_A(psi) = A psi / (i hbar); their connection values xi_A and the split of
xi_A along/against the unit central direction chi = 1/(i sqrt(2 hbar))
carry all expectation and covariance data.

Gauge covariance: xi_A transforms by conjugation U† xi_A U under
psi -> psi U, so only Ad-invariant contractions of xi-fields (inner products,
chi-projections) are well-defined scalars on the orbit; those are what this
module exports alongside the brackets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import (
    BasepointMismatch,
    IdentityViolation,
    NonPositive,
    NotTangent,
    SpectrumMismatch,
)
from .linalg import (
    check_anti_hermitian,
    check_finite,
    check_hermitian,
    frobenius,
    hermitian_eigensystem,
)
from .states import GaugeElement, PurificationFrame, Spectrum

__all__ = [
    "GeometryContext",
    "AmbientTangent",
    "ambient_tangent",
    "random_tangent",
    "AmbientForms",
    "BracketValue",
    "chi",
    "ambient_forms",
    "inertia_inner",
    "momentum_map",
    "connection",
    "split",
    "hamiltonian_lift",
    "xi_field",
    "brackets",
    "pushforward",
    "omega_rank",
]


@dataclass(frozen=True)
class GeometryContext:
    """hbar, optional pinned spectrum, and the tolerance record.

    When ``sigma`` is set, operations reject inputs carrying a different
    spectrum; when None, the spectrum is taken from the inputs.
    """

    hbar: float = 1.0
    sigma: Spectrum | None = None
    tol: Tolerances = field(default_factory=default_tolerances)

    def __post_init__(self) -> None:
        if not self.hbar > 0:
            raise NonPositive(f"hbar must be positive, got {self.hbar}")

    def check_sigma(self, sigma: Spectrum) -> None:
        if self.sigma is not None and self.sigma != sigma:
            raise SpectrumMismatch("input spectrum differs from the context's")


@dataclass(frozen=True)
class AmbientTangent:
    """Tangent vector X at a frame: X†psi + psi†X = 0."""

    x: np.ndarray
    base: PurificationFrame


class AmbientForms(NamedTuple):
    g: float
    w: float


class BracketValue(NamedTuple):
    g: float
    w: float


def _tangency_defect(x: np.ndarray, psi: np.ndarray) -> float:
    return frobenius(x.conj().T @ psi + psi.conj().T @ x)


def ambient_tangent(x, base: PurificationFrame,
                    tol: Tolerances | None = None) -> AmbientTangent:
    """Validate tangency of x at the frame and wrap."""
    tol = tol or default_tolerances()
    x = check_finite(np.asarray(x, dtype=complex), "tangent")
    if x.shape != base.psi.shape:
        raise NotTangent(f"tangent shape {x.shape} != frame shape {base.psi.shape}")
    scale = max(1.0, frobenius(x) * frobenius(base.psi))
    defect = _tangency_defect(x, base.psi)
    if defect > tol.tangent * scale:
        raise NotTangent(f"|X†psi + psi†X|_F = {defect:.3e} exceeds {tol.tangent:.3e} x scale")
    return AmbientTangent(x, base)


def random_tangent(base: PurificationFrame, rng: np.random.Generator) -> AmbientTangent:
    """Gaussian tangent vector at the frame.

    A raw Gaussian matrix is corrected by psi*M where M solves
    MP + PM = X†psi + psi†X entrywise (possible since p_i + p_j > 0),
    which lands exactly on the tangency constraint.
    """
    n, k = base.psi.shape
    raw = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) * np.sqrt(0.5)
    h = raw.conj().T @ base.psi + base.psi.conj().T @ raw
    p = base.sigma.full
    m = h / (p[:, None] + p[None, :])
    return AmbientTangent(raw - base.psi @ m, base)


def _resolve_tangent(psi: PurificationFrame, x, tol: Tolerances) -> AmbientTangent:
    if isinstance(x, AmbientTangent):
        if x.base.psi is not psi.psi and not np.array_equal(x.base.psi, psi.psi):
            raise BasepointMismatch("tangent is anchored at a different frame")
        return x
    return ambient_tangent(x, psi, tol)


def _resolve_gauge(xi, sigma: Spectrum) -> np.ndarray:
    if isinstance(xi, GaugeElement):
        if xi.sigma != sigma:
            raise SpectrumMismatch("gauge element carries a different spectrum")
        return xi.xi
    return np.asarray(xi, dtype=complex)


def chi(sigma: Spectrum, hbar: float = 1.0) -> GaugeElement:
    """The unit central gauge direction 1/(i sqrt(2 hbar)); chi . chi = 1."""
    xi = np.eye(sigma.k, dtype=complex) / (1j * np.sqrt(2.0 * hbar))
    return GaugeElement(xi, sigma)


def ambient_forms(x: AmbientTangent, y: AmbientTangent,
                  ctx: GeometryContext | None = None) -> AmbientForms:
    """Metric and symplectic pairings of two tangents at the same frame.

    Both values are exactly real: they are 2*hbar times the real and
    imaginary parts of the Hilbert-Schmidt inner product Tr(X†Y).
    """
    ctx = ctx or GeometryContext()
    if x.base.psi is not y.base.psi and not np.array_equal(x.base.psi, y.base.psi):
        raise BasepointMismatch("tangents live at different frames")
    # both traces are combined so g is exactly symmetric and w exactly
    # antisymmetric (a single trace leaves FMA residue in Tr(X†X))
    xy = complex(np.vdot(x.x, y.x))
    yx = complex(np.vdot(y.x, x.x))
    return AmbientForms(ctx.hbar * (xy.real + yx.real), ctx.hbar * (xy.imag - yx.imag))


def inertia_inner(xi, eta, ctx: GeometryContext | None = None) -> float:
    """Bi-invariant metric on the gauge algebra:
    xi . eta = hbar Tr((xi†eta + eta†xi) P).

    Coincides with G(psi xi, psi eta) at every frame (locked inertia)."""
    ctx = ctx or GeometryContext()
    if isinstance(xi, GaugeElement) and isinstance(eta, GaugeElement):
        if xi.sigma != eta.sigma:
            raise SpectrumMismatch("gauge elements carry different spectra")
        sigma = xi.sigma
    elif isinstance(xi, GaugeElement):
        sigma = xi.sigma
    elif isinstance(eta, GaugeElement):
        sigma = eta.sigma
    else:
        raise SpectrumMismatch("at least one argument must be a GaugeElement")
    ctx.check_sigma(sigma)
    a = _resolve_gauge(xi, sigma)
    b = _resolve_gauge(eta, sigma)
    diag = np.einsum("ij,ij->j", a.conj(), b)
    return float(2.0 * ctx.hbar * np.real(np.sum(diag * sigma.full)))


def momentum_map(psi, xi, ctx: GeometryContext | None = None) -> float:
    """J(psi)(xi) = i hbar Tr(psi†psi xi) for anti-Hermitian xi.

    Defined for any linear map psi (the frame constraint is not needed), so
    equivariance J(psi U)(xi) = J(psi)(U xi U†) can be probed with arbitrary
    unitaries U on the ancilla.
    """
    ctx = ctx or GeometryContext()
    mat = psi.psi if isinstance(psi, PurificationFrame) else np.asarray(psi, dtype=complex)
    x = xi.xi if isinstance(xi, GaugeElement) else np.asarray(xi, dtype=complex)
    check_anti_hermitian(x, ctx.tol, "momentum argument")
    value = 1j * ctx.hbar * np.trace(mat.conj().T @ mat @ x)
    return float(value.real)


def connection(psi: PurificationFrame, x, ctx: GeometryContext | None = None) -> GaugeElement:
    """Mechanical connection A_psi(X) = sum_j Pi_j psi†X Pi_j P^-1.

    The result is anti-Hermitian and commutes with P; both facts follow from
    tangency and the block structure, and the first is asserted numerically.
    Reproduces gauge directions (A_psi(psi xi) = xi) and annihilates
    horizontal ones.
    """
    ctx = ctx or GeometryContext()
    ctx.check_sigma(psi.sigma)
    xt = _resolve_tangent(psi, x, ctx.tol)
    m = psi.psi.conj().T @ xt.x
    out = np.zeros_like(m)
    for b, value in zip(psi.sigma.blocks, psi.sigma.values):
        out[b, b] = m[b, b] / value
    defect = frobenius(out + out.conj().T)
    if defect > ctx.tol.gauge * max(1.0, frobenius(out)):
        raise IdentityViolation(
            f"connection value not anti-Hermitian: defect {defect:.3e}"
        )
    out = 0.5 * (out - out.conj().T)
    return GaugeElement(out, psi.sigma)


def split(psi: PurificationFrame, x, ctx: GeometryContext | None = None
          ) -> tuple[AmbientTangent, AmbientTangent]:
    """Horizontal/vertical decomposition X = hor + psi A_psi(X).

    The sum reproduces X exactly; the horizontal part is G-orthogonal to
    every gauge direction.
    """
    ctx = ctx or GeometryContext()
    xt = _resolve_tangent(psi, x, ctx.tol)
    xi = connection(psi, xt, ctx)
    vert = AmbientTangent(psi.psi @ xi.xi, psi)
    hor = AmbientTangent(xt.x - vert.x, psi)
    return hor, vert


def hamiltonian_lift(a, psi: PurificationFrame,
                     ctx: GeometryContext | None = None) -> AmbientTangent:
    """Gauge-invariant lift X_A(psi) = A psi / (i hbar) of an observable.

    Tangency holds automatically for Hermitian A and is checked.
    """
    ctx = ctx or GeometryContext()
    a = check_hermitian(np.asarray(a, dtype=complex), ctx.tol, "observable")
    if a.shape[0] != psi.n:
        raise NotTangent(f"observable is {a.shape[0]} x {a.shape[0]}, frame lives in dimension {psi.n}")
    return ambient_tangent((a @ psi.psi) / (1j * ctx.hbar), psi, ctx.tol)


def xi_field(a, psi: PurificationFrame, ctx: GeometryContext | None = None
             ) -> tuple[GaugeElement, GaugeElement]:
    """Gauge-algebra value of an observable's lift and its chi-orthogonal part.

    Returns (xi_A, xi_A_perp) in the gauge of the supplied frame. Only
    Ad-invariant contractions of these (inertia inner products and
    chi-projections) are frame-independent scalars.
    """
    ctx = ctx or GeometryContext()
    xi = connection(psi, hamiltonian_lift(a, psi, ctx), ctx)
    c = chi(psi.sigma, ctx.hbar)
    coeff = inertia_inner(c, xi, ctx)
    perp = GaugeElement(xi.xi - coeff * c.xi, psi.sigma)
    return xi, perp


def brackets(a, b, psi: PurificationFrame,
             ctx: GeometryContext | None = None) -> BracketValue:
    """Metric and symplectic brackets of two observables at a state.

    The metric bracket pairs the horizontal parts of the lifts (the
    submersion is isometric only horizontally); the symplectic bracket may
    use the full lifts, since vertical contributions cancel in the reduced
    form. Both are gauge invariant.
    """
    ctx = ctx or GeometryContext()
    lift_a = hamiltonian_lift(a, psi, ctx)
    lift_b = hamiltonian_lift(b, psi, ctx)
    hor_a, _ = split(psi, lift_a, ctx)
    hor_b, _ = split(psi, lift_b, ctx)
    g = ambient_forms(hor_a, hor_b, ctx).g
    w = ambient_forms(lift_a, lift_b, ctx).w
    return BracketValue(g, w)


def pushforward(psi: PurificationFrame, x,
                ctx: GeometryContext | None = None) -> np.ndarray:
    """Tangent to the orbit represented at rho: d(pi)(X) = X psi† + psi X†.

    Hermitian and traceless; vanishes exactly on vertical vectors.
    """
    ctx = ctx or GeometryContext()
    xt = _resolve_tangent(psi, x, ctx.tol)
    out = xt.x @ psi.psi.conj().T + psi.psi @ xt.x.conj().T
    return 0.5 * (out + out.conj().T)


def omega_rank(psi: PurificationFrame, ctx: GeometryContext | None = None,
               rel_cut: float = 1e-9) -> tuple[int, int]:
    """Diagnostic rank of the reduced symplectic form at a state.

    Builds lifts of a full Hermitian operator basis, forms the Gram matrices
    of the symplectic pairing (on full lifts) and the metric pairing (on
    horizontal parts), and counts eigenvalues above a relative cut. The
    metric rank equals the orbit dimension, so nondegeneracy of the reduced
    form shows up as equal ranks. Not an acceptance gate.
    """
    ctx = ctx or GeometryContext()
    n = psi.n
    basis: list[np.ndarray] = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(e)
            f = np.zeros((n, n), dtype=complex)
            f[i, j] = 1j / np.sqrt(2.0)
            f[j, i] = -1j / np.sqrt(2.0)
            basis.append(f)
    lifts = [hamiltonian_lift(a, psi, ctx) for a in basis]
    hors = [split(psi, x, ctx)[0] for x in lifts]
    d = len(basis)
    gram_w = np.zeros((d, d))
    gram_g = np.zeros((d, d))
    for i in range(d):
        for j in range(i, d):
            gram_w[i, j] = ambient_forms(lifts[i], lifts[j], ctx).w
            gram_w[j, i] = -gram_w[i, j]
            gram_g[i, j] = ambient_forms(hors[i], hors[j], ctx).g
            gram_g[j, i] = gram_g[i, j]

    def _rank(sym: np.ndarray) -> int:
        values, _ = hermitian_eigensystem(sym.astype(complex), ctx.tol)
        top = np.max(np.abs(values)) if values.size else 0.0
        if top == 0.0:
            return 0
        return int(np.sum(np.abs(values) > rel_cut * top))

    return _rank(1j * gram_w), _rank(gram_g)
