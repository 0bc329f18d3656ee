"""Acceptance battery: analytic fixtures, sandwich oracles, property suites.

One test per criterion, each at its stated tolerance. Random instances are
seeded so every run exercises the same ensemble.
"""

import functools

import numpy as np
import pytest

from helpers import point_mass_model, random_density, random_grid_model, random_spd
from qbayes.closedform import rld_bound, sld_bound
from qbayes.conic import (
    ConicProgram,
    SolveOptions,
    holevo_lemma_sdp_value,
    holevo_lemma_value,
    holevo_lemma_suite,
    solve,
)
from qbayes.matcore import ExtendedOperator
from qbayes.model import (
    BayesMoments,
    ExtendedMoments,
    GridPoint,
    StatisticalModel,
    WeightSpec,
    build_extended_moments,
    build_moments,
    classical_binary,
    correlated_pair,
    model_zoo,
    random_model,
    with_weight,
)
from qbayes.sdpbounds import (
    f_family_pinned_example,
    f_family_suite,
    holevo_type_bound,
    nagaoka_hayashi_bound,
)
from qbayes.verify import (
    bayes_risk,
    ordering_audit,
    personick_optimal_measurement,
    seesaw,
)

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


def test_point_mass_collapse():
    """A one-point prior is exactly learnable: every bound 0, risk 0."""
    rng = np.random.default_rng(101)
    worst_bound = 0.0
    worst_risk = 0.0
    for n, d in ((1, 2), (2, 3), (3, 4), (2, 2), (3, 2)):
        model = point_mass_model(rng, n, d)
        mom = build_moments(model)
        em = build_extended_moments(model)
        values = (sld_bound(mom, np.eye(n))[0],
                  rld_bound(mom, np.eye(n))[0],
                  holevo_type_bound(em).value,
                  nagaoka_hayashi_bound(em).value)
        worst_bound = max(worst_bound, max(abs(v) for v in values))
        worst_risk = max(worst_risk, seesaw(model, iters=4, seed=0).risk)
    assert worst_bound <= 1e-7
    assert worst_risk <= 1e-9


def test_single_parameter_tightness():
    """All bounds meet at m - K for one parameter, and the spectral
    measurement of the averaged logarithmic derivative attains it."""
    rng = np.random.default_rng(202)
    models = [classical_binary(1.0, 0.6)]
    for _ in range(20):
        d = int(rng.integers(2, 5))
        g = int(rng.integers(2, 5))
        models.append(random_grid_model(rng, 1, d, g))
    for i, model in enumerate(models):
        mom = build_moments(model)
        em = build_extended_moments(model)
        target = sld_bound(mom, np.eye(1))[0]
        assert abs(nagaoka_hayashi_bound(em).value - target) <= 1e-6
        assert abs(holevo_type_bound(em).value - target) <= 1e-6
        meas = personick_optimal_measurement(mom)
        achieved = bayes_risk(model, meas.povm, meas.estimates)
        assert abs(achieved - target) <= 1e-9
        if i == 0:
            assert abs(target - 0.64) < 1e-12


def test_correlated_pair_fixture():
    """Perfectly correlated coordinates double the scalar value to 1.28."""
    model = correlated_pair(1.0, 0.6)
    mom = build_moments(model)
    em = build_extended_moments(model)
    assert abs(sld_bound(mom, np.eye(2))[0] - 1.28) <= 1e-5
    assert abs(nagaoka_hayashi_bound(em).value - 1.28) <= 1e-5
    assert seesaw(model, iters=25, seed=0).risk <= 1.28 + 1e-5


def test_ordering_chain_on_random_models():
    """seesaw >= block bound >= trace-norm bound >= both quadratic bounds."""
    rng = np.random.default_rng(404)
    worst = np.inf
    for _ in range(50):
        n = int(rng.integers(2, 4))
        d = int(rng.integers(2, 4))
        g = int(rng.integers(2, 4))
        model = random_grid_model(rng, n, d, g, W=random_spd(rng, n))
        audit = ordering_audit(model, iters=8, seed=0)
        worst = min(worst, audit["min_margin"])
    assert worst >= -1e-6


def test_tensor_equivalence_and_functional_chain():
    """f_sdp = f1 on tensor instances; the relaxation chain stays ordered."""
    res = f_family_suite(trials=100, seed=0)
    for r in res:
        assert r["eq_gap"] <= 1e-6 * max(1.0, abs(r["f1"]))
        assert r["margin_sdp_f3"] >= -1e-7
        assert r["margin_f3_f4"] >= -1e-7
        assert r["margin_sdp_f5"] >= -1e-7
    pinned = f_family_pinned_example()
    assert abs(pinned["f_sdp"] - 2.0) < 1e-6
    assert abs(pinned["f1"] - 2.0) < 1e-12


def test_trace_norm_identity_suite():
    """Closed form Tr(WA) + TrAbs(WB) against its SDP twin, 50 triples."""
    deep = SolveOptions(gap_tol=1e-10)
    rows = holevo_lemma_suite(trials=50, seed=0, options=deep)
    assert all(r["status"] == "optimal" for r in rows)
    assert max(r["abs_diff"] for r in rows) <= 1e-7
    W = np.eye(2)
    A = np.diag([1.0, 2.0])
    B = np.array([[0.0, 0.5], [-0.5, 0.0]])
    assert abs(holevo_lemma_value(W, A, B) - 4.0) < 1e-12
    sol = holevo_lemma_sdp_value(W, A, B, deep)
    assert abs(sol.primal_value - 4.0) <= 1e-7


def test_right_derivative_fixture_is_strictly_tighter():
    """Moments where the complex quadratic bound beats the symmetric one."""
    mom = BayesMoments(S_B=np.diag([0.75, 0.25]).astype(complex),
                       D_B=np.stack([0.1 * SX, 0.1 * SY]),
                       M=0.1 * np.eye(2), theta_bar=np.zeros(2), w_bar=0.2)
    c_sld = sld_bound(mom, np.eye(2))[0]
    c_rld = rld_bound(mom, np.eye(2))[0]
    assert abs(c_sld - 0.12) <= 1e-6
    assert abs(c_rld - 11.0 / 75.0) <= 1e-6
    W = np.eye(2)
    blocks = W[:, :, None, None] * mom.S_B[None, None, :, :]
    em = ExtendedMoments(S_bar=ExtendedOperator(blocks), D_bar=mom.D_B,
                         w_bar=0.2, per_point_S=(ExtendedOperator(blocks),),
                         pi=np.array([1.0]), states=mom.S_B[None],
                         thetas=np.zeros((1, 2)),
                         weight_spec=WeightSpec(constant=W))
    assert holevo_type_bound(em).value >= 11.0 / 75.0 - 1e-6


@functools.lru_cache(maxsize=1)
def per_point_vs_collapsed_ensemble():
    """Both trace-norm program variants on 20 seeded constant-weight models.

    Returns (worst ordering violation, worst absolute disagreement)."""
    rng = np.random.default_rng(808)
    worst_order = np.inf
    worst_gap = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 4))
        g = int(rng.integers(2, 4))
        model = random_grid_model(rng, n, 2, g, W=random_spd(rng, n))
        em = build_extended_moments(model)
        vc = holevo_type_bound(em).value
        vg = holevo_type_bound(em, force_general=True).value
        worst_order = min(worst_order, vg - vc)
        worst_gap = max(worst_gap, abs(vg - vc))
    return worst_order, worst_gap


def test_per_point_form_never_drops_below_collapsed():
    """The per-point program dominates the collapsed one on every draw."""
    worst_order, _ = per_point_vs_collapsed_ensemble()
    assert worst_order >= -1e-7


@pytest.mark.xfail(
    strict=True,
    reason="the per-point program charges sum_m pi_m TrAbs(Im Z_m) while the "
           "collapsed program charges TrAbs of the averaged imaginary part; "
           "the trace norm is convex, so the per-point value is >= and "
           "strictly exceeds it whenever the optimizer cannot align the "
           "per-point imaginary parts (about a fifth of random draws, gaps "
           "up to ~3e-3). Agreement within 1e-7 on generic models is "
           "therefore not attainable; see notes/decisions.md.")
def test_per_point_and_collapsed_forms_agree():
    """Per-point and collapsed trace-norm programs within 1e-7 on 20 draws."""
    _, worst_gap = per_point_vs_collapsed_ensemble()
    assert worst_gap <= 1e-7


def test_invariance_suite():
    """Weight scaling, unitary conjugation, grid reordering: <= 1e-7 relative."""
    models = [model_zoo("qubit_xy", (0.5,), grid_size=4),
              random_model(2, 2, seed=5),
              random_model(3, 2, seed=6)]
    rng = np.random.default_rng(909)
    c = 7.3
    for model in models:
        em = build_extended_moments(model)
        base = {"nh": nagaoka_hayashi_bound(em).value,
                "holevo": holevo_type_bound(em).value}

        scaled = build_extended_moments(
            with_weight(model, c * model.weight_spec.constant))
        assert abs(nagaoka_hayashi_bound(scaled).value - c * base["nh"]) \
            <= 1e-7 * max(1.0, abs(c * base["nh"]))
        assert abs(holevo_type_bound(scaled).value - c * base["holevo"]) \
            <= 1e-7 * max(1.0, abs(c * base["holevo"]))

        A = rng.standard_normal((model.d, model.d)) \
            + 1j * rng.standard_normal((model.d, model.d))
        Q, R = np.linalg.qr(A)
        U = Q * (np.diag(R) / np.abs(np.diag(R)))
        pts = tuple(GridPoint(theta=p.theta, weight=p.weight,
                              state=U @ p.state @ U.conj().T)
                    for p in model.points)
        rotated = build_extended_moments(StatisticalModel(
            n=model.n, d=model.d, points=pts, weight_spec=model.weight_spec))
        assert abs(nagaoka_hayashi_bound(rotated).value - base["nh"]) \
            <= 1e-7 * max(1.0, abs(base["nh"]))
        assert abs(holevo_type_bound(rotated).value - base["holevo"]) \
            <= 1e-7 * max(1.0, abs(base["holevo"]))

        perm = rng.permutation(len(model.points))
        shuffled = build_extended_moments(StatisticalModel(
            n=model.n, d=model.d,
            points=tuple(model.points[i] for i in perm),
            weight_spec=model.weight_spec))
        assert abs(nagaoka_hayashi_bound(shuffled).value - base["nh"]) \
            <= 1e-7 * max(1.0, abs(base["nh"]))
        assert abs(holevo_type_bound(shuffled).value - base["holevo"]) \
            <= 1e-7 * max(1.0, abs(base["holevo"]))


def test_solver_conformance():
    """Optimal solves certify gap and primal residual; infeasibility is
    reported as such rather than as a value."""
    rng = np.random.default_rng(111)
    diagnostics = []
    for seed in (1, 2):
        model = random_grid_model(rng, 2, 2, 2, W=random_spd(rng, 2))
        em = build_extended_moments(model)
        diagnostics.append(nagaoka_hayashi_bound(em).diagnostics)
        diagnostics.append(holevo_type_bound(em).diagnostics)
    for trial in holevo_lemma_suite(trials=6, seed=3):
        assert trial["status"] == "optimal"
    for diag in diagnostics:
        assert diag.status == "optimal"
        assert diag.gap <= 1e-8
        assert diag.feas_primal <= 1e-8
        assert diag.dual_value <= diag.primal_value + 1e-9

    probe = ConicProgram()
    blk = probe.add_psd_block(2)
    probe.add_eq({blk: np.eye(2)}, rhs=-1.0)
    probe.set_objective({blk: np.eye(2)})
    assert solve(probe).status == "infeasible"
