"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or in the
captured output of a failing run). Criteria 1-3 share one batch of 1000
random instances; the trace-level statistics computed inline act as the
oracle against the bracket/xi-field pipeline.
"""

import time

import numpy as np
import pytest

from qgeo.geometry import (
    AmbientTangent,
    GeometryContext,
    ambient_forms,
    chi,
    connection,
    hamiltonian_lift,
    inertia_inner,
    momentum_map,
    random_tangent,
    split,
    xi_field,
)
from qgeo.linalg import (
    frobenius,
    sample_haar_unitary,
    sample_hermitian,
    trial_rng,
)
from qgeo.spin import abcd_experiment, build_ensemble, build_spin, closed_forms, ensemble_spec
from qgeo.states import (
    frame_to_state,
    gauge_act,
    random_frame,
    random_gauge,
    random_gauge_algebra,
    rank_one_partial_trace,
)
from qgeo.uncertainty import classify, evolve, moments, rs_bound
from qgeo.verify import (
    parallel_observable,
    random_instance,
    random_spectrum,
    representative_scalars,
)

SEED = 42
N_MAIN = 1000
N_SMALL = 200
N_EVOLVE = 50
DIM_MAX = 8


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num:>2} {'PASS' if ok else 'FAIL'}  {name}: {detail}")


def _scaled(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


@pytest.fixture(scope="module")
def main_batch():
    """Shared instances for criteria 1 and 2, with per-instance terms."""
    t0 = time.time()
    rows = []
    for trial in range(N_MAIN):
        rng = trial_rng(SEED, 1001, trial)
        hbar = 1.0 if trial % 2 == 0 else 0.32
        ctx = GeometryContext(hbar=hbar)
        frame, a, b = random_instance(rng, DIM_MAX)
        rho = frame_to_state(frame).rho

        exp_a = float(np.real(np.trace(a @ rho)))
        exp_b = float(np.real(np.trace(b @ rho)))
        sym = float(np.real(np.trace(0.5 * (a @ b + b @ a) @ rho)))
        com = float(np.real(np.trace((a @ b - b @ a) @ rho) / 2j))
        second_a = float(np.real(np.trace(a @ a @ rho)))
        second_b = float(np.real(np.trace(b @ b @ rho)))
        d_a = np.sqrt(max(0.0, second_a - exp_a**2))
        d_b = np.sqrt(max(0.0, second_b - exp_b**2))

        lift_a = hamiltonian_lift(a, frame, ctx)
        lift_b = hamiltonian_lift(b, frame, ctx)
        hor_a, _ = split(frame, lift_a, ctx)
        hor_b, _ = split(frame, lift_b, ctx)
        xi_a, perp_a = xi_field(a, frame, ctx)
        xi_b, perp_b = xi_field(b, frame, ctx)
        c = chi(frame.sigma, hbar)
        rows.append({
            "hbar": hbar,
            "exp_a": exp_a, "exp_b": exp_b, "sym": sym, "com": com,
            "d_a": d_a, "d_b": d_b,
            "g_ab": ambient_forms(hor_a, hor_b, ctx).g,
            "w_ab": ambient_forms(lift_a, lift_b, ctx).w,
            "g_aa": ambient_forms(hor_a, hor_a, ctx).g,
            "g_bb": ambient_forms(hor_b, hor_b, ctx).g,
            "xa_xb": inertia_inner(xi_a, xi_b, ctx),
            "pa_pb": inertia_inner(perp_a, perp_b, ctx),
            "pa_pa": inertia_inner(perp_a, perp_a, ctx),
            "pb_pb": inertia_inner(perp_b, perp_b, ctx),
            "chi_a": inertia_inner(c, xi_a, ctx),
            "chi_b": inertia_inner(c, xi_b, ctx),
        })
    return rows, time.time() - t0


def test_criterion_1_identity_suite(main_batch):
    rows, elapsed = main_batch
    worst = 0.0
    for r in rows:
        hbar = r["hbar"]
        root = np.sqrt(0.5 * hbar)
        half = 0.5 * hbar
        quarter = 0.25 * hbar * hbar
        cov = r["sym"] - r["exp_a"] * r["exp_b"]
        worst = max(
            worst,
            _scaled(r["exp_a"], root * r["chi_a"]),
            _scaled(r["exp_b"], root * r["chi_b"]),
            _scaled(r["sym"], half * (r["g_ab"] + r["xa_xb"])),
            _scaled(r["com"], half * r["w_ab"]),
            _scaled(cov, half * (r["g_ab"] + r["pa_pb"])),
            _scaled((r["d_a"] * r["d_b"]) ** 2,
                    quarter * (r["g_aa"] * r["g_bb"] + r["g_aa"] * r["pb_pb"]
                               + r["g_bb"] * r["pa_pa"] + r["pa_pa"] * r["pb_pb"])),
            _scaled(cov**2 + r["com"] ** 2,
                    quarter * (r["g_ab"] ** 2 + r["w_ab"] ** 2
                               + 2 * r["g_ab"] * r["pa_pb"] + r["pa_pb"] ** 2)),
        )
    ok = worst <= 1e-8 and elapsed < 60.0
    _report(1, "identity suite", ok,
            f"{len(rows)} instances, worst residual {worst:.2e}, build {elapsed:.1f}s")
    assert worst <= 1e-8
    assert elapsed < 60.0


def test_criterion_2_bound_dominance(main_batch):
    rows, _ = main_batch
    worst_slack = 0.0
    worst_max = 0.0
    for r in rows:
        half = 0.5 * r["hbar"]
        cov = r["sym"] - r["exp_a"] * r["exp_b"]
        rs = float(np.hypot(cov, r["com"]))
        geo = half * float(np.hypot(r["g_ab"], r["w_ab"]))
        diff = 2 * r["g_ab"] * r["pa_pb"] + r["pa_pb"] ** 2
        combined = half * float(np.sqrt(r["g_ab"] ** 2 + r["w_ab"] ** 2 + max(0.0, diff)))
        product = r["d_a"] * r["d_b"]
        scale = max(1.0, product)
        worst_slack = max(worst_slack,
                          (geo - product) / scale,
                          (rs - product) / scale,
                          (combined - product) / scale)
        worst_max = max(worst_max, abs(combined - max(geo, rs)) / scale)
    ok = worst_slack <= 1e-9 and worst_max <= 1e-9
    _report(2, "bound dominance + combined=max", ok,
            f"worst dominance slack {worst_slack:.2e}, worst |combined-max| {worst_max:.2e}")
    assert worst_slack <= 1e-9
    assert worst_max <= 1e-9


def test_criterion_3_pure_and_parallel_collapse():
    worst = 0.0
    for trial in range(N_SMALL):
        rng = trial_rng(SEED, 1003, trial)
        hbar = 1.0 if trial % 2 == 0 else 0.32
        ctx = GeometryContext(hbar=hbar)

        frame, a, b = random_instance(rng, DIM_MAX, k=1)
        geo, rs = _geo_rs(a, b, frame, ctx)
        worst = max(worst, abs(geo - rs) / max(1.0, rs))

        frame, a, b = random_instance(rng, DIM_MAX)
        while frame.sigma.l == 1 and frame.sigma.k == frame.n:
            frame, a, b = random_instance(rng, DIM_MAX)
        par = parallel_observable(a, frame, ctx)
        assert classify(par, frame, ctx) == "parallel"
        geo, rs = _geo_rs(par, b, frame, ctx)
        worst = max(worst, abs(geo - rs) / max(1.0, rs))
    ok = worst <= 1e-9
    _report(3, "pure-state and parallel collapse", ok,
            f"2x{N_SMALL} instances, worst |geo-rs| {worst:.2e}")
    assert worst <= 1e-9


def _geo_rs(a, b, frame, ctx):
    lift_a = hamiltonian_lift(a, frame, ctx)
    lift_b = hamiltonian_lift(b, frame, ctx)
    hor_a, _ = split(frame, lift_a, ctx)
    hor_b, _ = split(frame, lift_b, ctx)
    g = ambient_forms(hor_a, hor_b, ctx).g
    w = ambient_forms(lift_a, lift_b, ctx).w
    geo = 0.5 * ctx.hbar * float(np.hypot(g, w))
    return geo, rs_bound(a, b, frame_to_state(frame))


def test_criterion_4_gauge_and_representative_invariance():
    worst = 0.0
    for trial in range(N_SMALL):
        rng = trial_rng(SEED, 1004, trial)
        ctx = GeometryContext(hbar=1.0)
        frame, a, b = random_instance(rng, DIM_MAX)

        def scalars(fr):
            lift_a = hamiltonian_lift(a, fr, ctx)
            lift_b = hamiltonian_lift(b, fr, ctx)
            hor_a, _ = split(fr, lift_a, ctx)
            hor_b, _ = split(fr, lift_b, ctx)
            xi_a, perp_a = xi_field(a, fr, ctx)
            xi_b, perp_b = xi_field(b, fr, ctx)
            c = chi(fr.sigma, ctx.hbar)
            return {
                "g_ab": ambient_forms(hor_a, hor_b, ctx).g,
                "w_ab": ambient_forms(lift_a, lift_b, ctx).w,
                "xa_xb": inertia_inner(xi_a, xi_b, ctx),
                "pa_pb": inertia_inner(perp_a, perp_b, ctx),
                "chi_a": inertia_inner(c, xi_a, ctx),
            }

        base = scalars(frame)
        moved = scalars(gauge_act(frame, random_gauge(frame.sigma, rng)))
        tilde = representative_scalars(
            a, b, frame, sample_haar_unitary(frame.sigma.k, rng), ctx.hbar)
        for key in base:
            scale = max(1.0, abs(base[key]))
            worst = max(worst, abs(base[key] - moved[key]) / scale,
                        abs(base[key] - tilde[key]) / scale)
    ok = worst <= 1e-9
    _report(4, "gauge/representative invariance", ok,
            f"{N_SMALL} instances, worst deviation {worst:.2e}")
    assert worst <= 1e-9


def test_criterion_5_connection_contract():
    worst = 0.0
    for trial in range(N_MAIN):
        rng = trial_rng(SEED, 1005, trial)
        ctx = GeometryContext(hbar=1.0)
        frame, _, _ = random_instance(rng, DIM_MAX)
        xi = random_gauge_algebra(frame.sigma, rng)
        vertical = AmbientTangent(frame.psi @ xi.xi, frame)
        reproduced = connection(frame, vertical, ctx)
        worst = max(worst, frobenius(reproduced.xi - xi.xi) / max(1.0, frobenius(xi.xi)))
        tangent = random_tangent(frame, rng)
        hor, _ = split(frame, tangent, ctx)
        worst = max(worst, frobenius(connection(frame, hor, ctx).xi)
                    / max(1.0, frobenius(tangent.x)))
    ok = worst <= 1e-10
    _report(5, "connection contract", ok,
            f"{N_MAIN} samples, worst residual {worst:.2e}")
    assert worst <= 1e-10


def test_criterion_6_momentum_map():
    worst = 0.0
    ctx = GeometryContext(hbar=1.0)
    h = ctx.tol.fd_step
    for trial in range(N_SMALL):
        rng = trial_rng(SEED, 1006, trial)
        frame, _, _ = random_instance(rng, DIM_MAX)
        k = frame.sigma.k
        u = sample_haar_unitary(k, rng)
        anti = 1j * sample_hermitian(k, rng)
        lhs = momentum_map(frame.psi @ u, anti, ctx)
        rhs = momentum_map(frame, u @ anti @ u.conj().T, ctx)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))

        xi = random_gauge_algebra(frame.sigma, rng)
        x = random_tangent(frame, rng)
        fd = (momentum_map(frame.psi + h * x.x, xi, ctx)
              - momentum_map(frame.psi - h * x.x, xi, ctx)) / (2 * h)
        target = ambient_forms(AmbientTangent(frame.psi @ xi.xi, frame), x, ctx).w
        worst = max(worst, abs(fd - target) / max(1.0, abs(target)))
    ok = worst <= 1e-5
    _report(6, "momentum map equivariance + differential", ok,
            f"{N_SMALL} samples, worst residual {worst:.2e}")
    assert worst <= 1e-5


def test_criterion_7_spin_demo():
    ctx = GeometryContext(hbar=1.0)
    spec = ensemble_spec(1.0, (1.0, 0.0), (0.7, 0.3))
    demo = abcd_experiment(spec, 0.25, ctx)
    targets = {
        "sxsy_omega": (demo.closed.sxsy_omega, 0.7),
        "sxsx_g": (demo.closed.sxsx_g, 1.3),
        "xi_sz_perp_sq": (demo.closed.xi_sz_perp_sq, 0.42),
        "AB product": (demo.report_ab.dA * demo.report_ab.dB, 0.7025),
        "AB geo": (demo.report_ab.geo_bound, 0.65),
        "AB rs": (demo.report_ab.rs_bound, 0.5975),
        "CD product": (demo.report_cd.dA * demo.report_cd.dB, 0.86),
        "CD geo": (demo.report_cd.geo_bound, 0.35),
        "CD rs": (demo.report_cd.rs_bound, 0.4081666326391711),
        "product dSx*dSy": (demo.sxsy_product, 0.65),
        "bracket floor": (demo.sxsy_floor, 0.35),
    }
    worst = max(abs(value - target) for value, target in targets.values())
    winners = (demo.report_ab.winner == "geometric"
               and demo.report_cd.winner == "robertson_schrodinger"
               and demo.report_ab.geo_bound > demo.report_ab.rs_bound
               and demo.report_cd.rs_bound > demo.report_cd.geo_bound
               and demo.sxsy_product >= demo.sxsy_floor)
    ok = worst <= 1e-9 and winners and demo.window_holds
    _report(7, "spin demo targets", ok,
            f"worst |value-target| {worst:.2e}, winners {'match' if winners else 'WRONG'}")
    assert worst <= 1e-9
    assert winners


def test_criterion_8_closed_form_agreement():
    worst = 0.0
    ctx = GeometryContext(hbar=1.0)
    for trial in range(N_SMALL):
        rng = trial_rng(SEED, 1008, trial)
        s = int(rng.integers(1, 8)) / 2.0
        dim = int(round(2 * s + 1))
        k = int(rng.integers(1, dim + 1))
        slots = rng.choice(dim, size=k, replace=False)
        m_list = [s - int(i) for i in slots]
        raw = np.cumsum(rng.uniform(0.2, 1.0, size=k))[::-1]
        spec = ensemble_spec(s, m_list, raw / raw.sum())
        forms = closed_forms(spec, ctx)
        spin = build_spin(s)
        state, frame = build_ensemble(spec)
        lift_x = hamiltonian_lift(spin.sx, frame, ctx)
        lift_y = hamiltonian_lift(spin.sy, frame, ctx)
        hor_x, _ = split(frame, lift_x, ctx)
        _, perp = xi_field(spin.sz, frame, ctx)
        machine = {
            "sxsy_omega": ambient_forms(lift_x, lift_y, ctx).w,
            "sxsx_g": ambient_forms(hor_x, hor_x, ctx).g,
            "xi_sz_perp_sq": inertia_inner(perp, perp, ctx),
            "sz_exp": moments(spin.sz, state)[0],
        }
        for name, value in machine.items():
            target = getattr(forms, name)
            worst = max(worst, abs(value - target) / max(1.0, abs(target)))
    ok = worst <= 1e-9
    _report(8, "closed-form agreement", ok,
            f"{N_SMALL} ensembles (s <= 7/2), worst residual {worst:.2e}")
    assert worst <= 1e-9


def test_criterion_9_evolution():
    worst_drift = 0.0
    worst_flow = 0.0
    ctx = GeometryContext(hbar=1.0)
    for trial in range(N_EVOLVE):
        rng = trial_rng(SEED, 1009, trial)
        frame, h, b = random_instance(rng, DIM_MAX)
        h = h / max(1.0, frobenius(h))
        b = b / max(1.0, frobenius(b))
        result = evolve(h, frame_to_state(frame), t=0.1, steps=100,
                        ctx=ctx, probes={"B": b})
        worst_drift = max(worst_drift, result.max_drift)
        worst_flow = max(worst_flow, result.max_flow_residual)
    ok = worst_drift <= 1e-9 and worst_flow <= 1e-4
    _report(9, "evolution drift + flow derivative", ok,
            f"{N_EVOLVE} x 100-step trajectories, drift {worst_drift:.2e}, "
            f"flow residual {worst_flow:.2e}")
    assert worst_drift <= 1e-9
    assert worst_flow <= 1e-4


def test_criterion_10_partial_trace_identity():
    worst = 0.0
    for trial in range(N_SMALL):
        rng = trial_rng(SEED, 1010, trial)
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, min(n, 4) + 1))
        sigma = random_spectrum(rng, k)
        frame = random_frame(sigma, n, rng)
        worst = max(worst, frobenius(rank_one_partial_trace(frame)
                                     - frame_to_state(frame).rho))
    ok = worst <= 1e-10
    _report(10, "partial-trace identity", ok,
            f"{N_SMALL} frames (n <= 6, k <= 4), worst deviation {worst:.2e}")
    assert worst <= 1e-10
