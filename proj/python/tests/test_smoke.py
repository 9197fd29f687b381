import math

import numpy as np
import pytest

import gsbp


def test_lgl_element():
    e = gsbp.build_lgl(2)
    np.testing.assert_allclose(e.nodes, [-1.0, 0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(e.weights, [1 / 3, 4 / 3, 1 / 3], rtol=1e-14)
    # Differentiates quadratics exactly.
    np.testing.assert_allclose(e.diff @ e.nodes**2, 2 * e.nodes, atol=1e-13)


def test_operator_pair_identities():
    e = gsbp.build_lgl(3)
    mesh = gsbp.uniform_mesh(-math.pi, math.pi, 10)
    ops = gsbp.OperatorSet(e, mesh, 0.25, gsbp.Topology.periodic)
    m = np.diag(ops.norm)
    dm = ops.d_minus.toarray()
    dp = ops.d_plus.toarray()
    np.testing.assert_allclose(m @ dp + dm.T @ m, 0.0, atol=1e-12)
    np.testing.assert_allclose(ops.d2().toarray(), dm @ dp, atol=1e-12)
    assert np.linalg.eigvalsh(ops.dissipation.toarray()).max() < 1e-12
    assert gsbp.verify_axioms(ops).all_passed()


def test_bounded_certification_and_bad_theta():
    e = gsbp.build_lgl(1)
    mesh = gsbp.uniform_mesh(0.0, 1.0, 4)
    assert gsbp.verify_axioms(gsbp.OperatorSet(e, mesh, 0.5, gsbp.Topology.bounded)).all_passed()
    with pytest.raises(ValueError):
        gsbp.OperatorSet(e, mesh, 0.7, gsbp.Topology.bounded)


def test_tableaux():
    for order in (1, 2, 3):
        t = gsbp.tableau(order)
        assert t.order == order
        assert abs(t.b_explicit.sum() - 1.0) < 1e-14


def scan_config(ta, td, order, k):
    p = gsbp.AdvDiffConfig()
    p.a, p.c, p.theta_adv, p.theta_diff, p.degree, p.num_cells = 0.1, 0.1, ta, td, 1, k
    return gsbp.StabilityConfig(p, order, 100.0)


def test_incompatible_scan_scales_with_dx():
    r40, r80 = gsbp.run_scans([scan_config(0.5, 0.0, 1, 40), scan_config(0.5, 0.0, 1, 80)])
    assert r40.status == gsbp.ScanStatus.bounded
    assert r40.tau / r80.tau == pytest.approx(2.0, abs=0.3)
    assert "order,N,K" in gsbp.stability_csv([r40, r80])


def test_theorem_floor_is_stable():
    cfg = scan_config(0.5, 0.5, 2, 20)
    dt = gsbp.theorem_tau_floor(2) / cfg.tau_scale
    assert gsbp.is_stable(cfg, dt)


def test_convergence_rows():
    cfg = gsbp.ConvergenceConfig()
    rows = gsbp.run_convergence(cfg, [20, 40])
    assert rows[0].eoc is None
    assert rows[1].eoc == pytest.approx(2.13, abs=0.1)
    assert gsbp.convergence_csv(cfg, rows).splitlines()[1].startswith("N,K,")


def test_burgers():
    cfg = gsbp.BurgersConfig()
    cfg.num_cells = 50
    r = gsbp.run_burgers_demo(cfg)
    assert r.completed
    assert max(r.energy) <= r.energy[0] * (1 + 1e-12)
    assert [s[0] for s in r.snapshots] == pytest.approx([0.0, 1.0, 2.0])


def test_config_and_dispatch(tmp_path):
    cfg = gsbp.parse_config(gsbp.Subcommand.verify, None,
                            {"N": 2, "K": 4, "out": tmp_path})
    assert gsbp.parse_config_text(gsbp.serialize(cfg)) == cfg
    code, log = gsbp.dispatch(cfg)
    assert code == 0
    assert (tmp_path / "certification.csv").exists()
    with pytest.raises(gsbp.ConfigError):
        gsbp.parse_config(gsbp.Subcommand.verify, None, {"theta": 0.7})
