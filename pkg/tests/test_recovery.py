import math

import numpy as np
import pytest
from scipy.stats import spearmanr

from sampling_recovery.classes import ClassParamsW, generate_W
from sampling_recovery.discretization import draw_points, verify_ud
from sampling_recovery.index_sets import IndexSet, full_cube, hyperbolic_cross
from sampling_recovery.recovery import (RecoveryConfig, default_dictionary, empirical_rho,
                                        layered_alpha, layered_approx, layered_schedule,
                                        prepare_points, recover)
from sampling_recovery.trig import SparseCoefFn


def test_single_term_exact():
    f = SparseCoefFn.single(2, 0.3 - 1j)
    cfg = RecoveryConfig(d=1, v=1, m_rule="explicit", m=3, dictionary=full_cube(3, 1),
                         verify=False, seed=1)
    approx, rep = recover(f, cfg)
    assert rep.err_lp <= 1e-8
    assert approx.pruned(1e-12).to_dict().keys() == {(2,)}


def test_oracle_sparse_interpolation():
    rng = np.random.default_rng(2)
    J = hyperbolic_cross(2, 2)
    v = 2
    for seed in range(5):
        rows = rng.choice(len(J), size=v, replace=False)
        f = SparseCoefFn(J.array[rows], rng.standard_normal(v) + 1j, d=2)
        xi = draw_points(60, 2, seed=seed)
        ud = verify_ud(xi, J, 2 * v)
        assert ud.worst_lower > 0
        cfg = RecoveryConfig(d=2, v=v, algorithm="oracle_bv", dictionary=J, verify=False,
                             m_rule="explicit", m=60)
        _, rep = recover(f, cfg, xi=xi)
        assert rep.err_l2_disc <= 1e-10
        # continuous error bounded by (discrete residual) / sqrt(lambda_min)
        assert rep.err_lp <= 1e-8


def test_default_dictionary_size():
    for d in (1, 2):
        for v in (1, 4, 9):
            Q = default_dictionary(v, d)
            assert len(Q) >= 4 * v
    assert len(default_dictionary(1, 1)) == 7  # Q_2 = {-3..3}


def test_redraws_recorded():
    cfg = RecoveryConfig(d=1, v=2, m_rule="explicit", m=3, redraws=4, ud_trials=20)
    xi, rep, redraws = prepare_points(cfg, full_cube(6, 1))
    assert not rep.passed and redraws == 3
    cfg = RecoveryConfig(d=1, v=1, m_rule="explicit", m=400, redraws=4, ud_trials=20)
    xi, rep, redraws = prepare_points(cfg, full_cube(3, 1))
    assert rep.passed and redraws == 0


def test_config_validation():
    with pytest.raises(ValueError):
        RecoveryConfig(p=1.5)
    with pytest.raises(ValueError):
        RecoveryConfig(m_rule="explicit")
    with pytest.raises(ValueError):
        RecoveryConfig(algorithm="lasso")
    cfg = RecoveryConfig(v=5, c_iter=2)
    assert cfg.u == 15 and cfg.iterations == 10


def test_report_is_deterministic():
    params = ClassParamsW(1.0)
    f = generate_W(params, 1, 8, seed=3)
    cfg = RecoveryConfig(d=1, v=4, seed=11, ud_trials=50)
    rows = [recover(f, cfg, class_params=params)[1].csv_row() for _ in range(2)]
    for r in rows:
        r.pop("ms")
    assert rows[0] == rows[1]


# layered approximant

def test_layered_alpha_rule():
    assert layered_alpha(ClassParamsW(1.0, 0, 1.0), 2) == pytest.approx(1.0)
    assert layered_alpha(ClassParamsW(2.0, 0, 0.5), 2) == pytest.approx(2.0 / 3.0)


def test_layered_schedule_formula():
    vj = layered_schedule(3, 1.0, 2, 6)
    assert vj == {j: math.floor(2 ** (3 - (j - 3)) * j) for j in range(4, 7)}


def test_layered_returns_f_inside_cross():
    rng = np.random.default_rng(0)
    Q = hyperbolic_cross(2, 1)
    f = SparseCoefFn(Q.array, rng.standard_normal(len(Q)), d=1)
    assert layered_approx(f, 2 * len(Q), ClassParamsW(1.0)).allclose(f)


def test_layered_budget_and_decay():
    params = ClassParamsW(1.0, 0.0, 1.0)
    f = generate_W(params, 2, 8, seed=5)
    errs = []
    for v in (8, 16, 32, 64, 128):
        cfg = RecoveryConfig(d=2, v=v, algorithm="layered")
        approx, rep = recover(f, cfg, class_params=params)
        assert len(approx) <= v
        errs.append(rep.err_lp)
    assert all(b <= a for a, b in zip(errs, errs[1:]))


def test_layered_needs_w_params():
    with pytest.raises(ValueError):
        recover(SparseCoefFn.single(0), RecoveryConfig(algorithm="layered"))


# empirical rho

def test_rho_constant_class():
    rng = np.random.default_rng(1)

    def members(v, trial):
        c = rng.uniform(0, 1) * np.exp(2j * np.pi * rng.uniform())
        return SparseCoefFn.single(0, c)

    # a single sample cannot tell psi_0 from other unimodular columns, so the
    # small-m cases use the one-element dictionary {0}
    for m in (1, 2, 3):
        cfg = RecoveryConfig(d=1, m_rule="explicit", m=m, verify=False,
                             dictionary=IndexSet([[0]]))
        rows = empirical_rho(ClassParamsW(1.0), cfg, [1], trials=5, members=members)
        assert float(rows[0]["err_lp"]) <= 1e-8
    cfg = RecoveryConfig(d=1, m_rule="explicit", m=20, verify=False)
    rows = empirical_rho(ClassParamsW(1.0), cfg, [1], trials=5, members=members)
    assert float(rows[0]["err_lp"]) <= 1e-8


def test_rho_decreasing_trend():
    params = ClassParamsW(1.0)
    cfg = RecoveryConfig(d=1, verify=False)
    vs = [2, 4, 8, 16]
    rows = empirical_rho(params, cfg, vs, trials=2, seed=3, j_max=8)
    errs = [float(r["err_lp"]) for r in rows]
    assert spearmanr(vs, errs).statistic < 0


def test_rho_rows_deterministic():
    params = ClassParamsW(1.0)
    cfg = RecoveryConfig(d=1, ud_trials=30)
    a = empirical_rho(params, cfg, [2, 4], seed=9, j_max=6)
    b = empirical_rho(params, cfg, [2, 4], seed=9, j_max=6)
    for r in a + b:
        r.pop("ms")
    assert a == b
