import numpy as np
import pytest

from octoks import experiments, geometry as geo
from octoks.cli import RunConfig


def make_cfg(experiment, **kw):
    cfg = RunConfig(experiment=experiment, **kw)
    cfg.validate()
    return cfg


def by_name(report):
    return {c.name: c for c in report.checks}


def test_registry_covers_all_thirteen_experiments():
    assert len(experiments.RUNNERS) == 13
    for name, runner in experiments.RUNNERS.items():
        assert callable(runner), name


def test_algebra_suite_passes_and_embeds_config():
    rep = experiments.run_algebra_suite(make_cfg("algebra-suite", trials=2000, seed=3))
    assert rep.passed
    assert rep.config["trials"] == 2000
    checks = by_name(rep)
    assert checks["associator_e1_e2_e3"].value == 0.0
    assert checks["moufang"].value <= 1e-12


def test_algebra_suite_tolerance_override_can_fail():
    cfg = make_cfg("algebra-suite", trials=500, tolerances={"identity": 0.0})
    rep = experiments.run_algebra_suite(cfg)
    assert not rep.passed


def test_monogenicity_suite_passes():
    rep = experiments.run_monogenicity_suite(make_cfg("monogenicity-suite", seed=1))
    assert rep.passed
    checks = by_name(rep)
    assert checks["linear_pair_residual"].value <= 1e-10
    assert checks["twisted_pair_defect_vs_2e5"].value <= 1e-8
    assert checks["kernel_left_residual_annulus"].value <= 1e-8
    assert checks["kernel_right_residual_annulus"].value <= 1e-8


def test_cauchy_reproduction_passes_on_default_mesh():
    rep = experiments.run_cauchy_reproduction(make_cfg("cauchy-reproduction", n=20000, seed=1))
    assert rep.passed
    checks = by_name(rep)
    assert checks["constant_at_origin"].value <= 1e-12
    assert checks["linear_at_03e1_relative"].value <= 0.05
    assert rep.mesh["domain_tag"] == "unit_ball"


def test_cauchy_theorem_keeps_counterexample_as_info():
    rep = experiments.run_cauchy_theorem(make_cfg("cauchy-theorem", n=8000, seed=2))
    assert rep.passed
    checks = by_name(rep)
    assert checks["counterexample_residual"].status == "info"
    # the non-monogenic field leaves a moment near pi^4 / 12
    assert abs(checks["counterexample_residual"].value - np.pi**4 / 12) < 0.5


def test_parenthesization_gap_is_an_honest_fail_at_the_stated_point():
    rep = experiments.run_parenthesization_gap(
        make_cfg("parenthesization-gap", n=20000, seed=1))
    checks = by_name(rep)
    # the advertised point sits in a quaternion subalgebra, so the measured
    # mean is statistically zero and the floor check cannot clear
    assert checks["gap_sigmas_at_03e1"].status == "fail"
    assert checks["gap_sigmas_at_03e1"].value < 5.0
    assert checks["gap_sigmas_at_witness_point"].status == "pass"
    assert checks["right_multiplier_gap_sigmas"].status == "pass"
    assert checks["real_multiplier_gap"].status == "pass"
    assert checks["real_valued_field_gap"].status == "pass"
    assert not rep.passed


def test_ks_vanishing_sphere_pairs_small_at_good_seed():
    rep = experiments.run_ks_vanishing(make_cfg("ks-vanishing", pairs=10000, seed=9))
    assert rep.passed
    assert by_name(rep)["max_kernel_norm_random_sphere_pairs"].value <= 1e-12


def test_ks_vanishing_ellipsoid_floor():
    rep = experiments.run_ks_vanishing(
        make_cfg("ks-vanishing", mesh="ellipsoid", n=500, pairs=3000, seed=2))
    assert rep.passed
    check = by_name(rep)["max_kernel_norm_node_pairs"]
    assert check.direction == "lower"
    assert check.value >= 1e-3


def test_ks_vanishing_wall_pairs_vanish():
    rep = experiments.run_ks_vanishing(
        make_cfg("ks-vanishing", mesh="halfspace", n=500, pairs=3000, seed=2))
    assert rep.passed
    assert by_name(rep)["max_kernel_norm_node_pairs"].value <= 1e-12


def test_ks_vanishing_spherical_file_mesh_uses_vanishing_check(tmp_path):
    mesh = geo.make_sphere_mesh(400, seed=5)
    path = tmp_path / "ball.mesh"
    geo.save_mesh(mesh, path)
    rep = experiments.run_ks_vanishing(
        make_cfg("ks-vanishing", mesh="file", mesh_path=str(path), pairs=2000, seed=9))
    assert by_name(rep)["max_kernel_norm_node_pairs"].tolerance == 1e-12


@pytest.mark.parametrize("mesh_kw", [
    {"mesh": "sphere", "n": 600},
    {"mesh": "ellipsoid", "n": 600},
    {"mesh": "halfspace", "n": 600},
])
def test_ks_skew_symmetry_on_each_mesh(mesh_kw):
    rep = experiments.run_ks_skew(make_cfg("ks-skew", pairs=3000, seed=4, **mesh_kw))
    assert rep.passed


def test_ks_halfspace_poisson_within_two_percent():
    rep = experiments.run_ks_halfspace(make_cfg("ks-halfspace", n=20000, seed=4))
    assert rep.passed
    checks = by_name(rep)
    assert checks["poisson_constant_error"].value <= 0.02
    assert checks["poisson_truncation_tail_bound"].status == "info"
    assert checks["max_kernel_norm_wall_pairs"].value == 0.0


def test_plemelj_identities_on_ball_mesh():
    rep = experiments.run_plemelj(make_cfg("plemelj", n=200, seed=3))
    assert rep.passed
    checks = by_name(rep)
    assert checks["sum_recovers_identity"].value == 0.0
    assert checks["difference_recovers_hilbert"].value == 0.0
    assert checks["plus_projector_is_direct_transform"].value == 0.0
    assert checks["skew_blocks_vanish_on_ball"].value <= 1e-12


def test_plemelj_skips_ball_only_check_off_the_ball():
    rep = experiments.run_plemelj(make_cfg("plemelj", mesh="ellipsoid", n=200, seed=3))
    assert rep.passed
    assert "skew_blocks_vanish_on_ball" not in by_name(rep)


def test_adjoint_check_equal_weights_asserts_skewness():
    rep = experiments.run_adjoint_check(make_cfg("adjoint-check", mesh="sphere", n=200, seed=2))
    assert rep.passed
    checks = by_name(rep)
    assert checks["skew_adjoint_defect"].status == "pass"
    assert checks["skew_adjoint_defect"].value <= 1e-10
    assert checks["pairing_transfer_all_kinds"].value <= 1e-12


def test_adjoint_check_unequal_weights_reports_skewness_as_info():
    rep = experiments.run_adjoint_check(
        make_cfg("adjoint-check", mesh="ellipsoid", n=200, seed=2))
    assert rep.passed
    checks = by_name(rep)
    assert checks["skew_adjoint_defect"].status == "info"
    assert checks["pairing_transfer_all_kinds"].value <= 1e-12


def test_szego_ball_projection_matches_interior_transform():
    rep = experiments.run_szego_ball(make_cfg("szego-ball", n=3000, seed=5))
    assert rep.passed
    checks = by_name(rep)
    assert checks["projection_vs_interior_transform_sigmas_one"].value <= 2.0
    assert checks["inner_product_hermitian"].value <= 1e-12
    assert checks["self_pairing_is_squared_norm"].value <= 1e-12


def test_szego_halfspace_limit_within_truncation_budget():
    rep = experiments.run_szego_halfspace(make_cfg("szego-halfspace", n=20000, seed=4))
    assert rep.passed
    checks = by_name(rep)
    assert checks["zero_field_projects_to_zero"].value == 0.0
    assert 0.4 <= checks["constant_value"].value <= 0.5


def test_neumann_series_ball_increments_vanish():
    rep = experiments.run_neumann_series(make_cfg("neumann-series", n=150, terms=2, seed=3))
    assert rep.passed
    assert rep.experiment == "neumann-series"
    assert rep.config["terms"] == 2
    checks = by_name(rep)
    assert checks["increment_norm_term_1"].value <= 1e-12
    assert checks["increment_norm_term_2"].value <= 1e-12


def test_neumann_series_ellipsoid_is_info_only():
    cfg = make_cfg("neumann-series", mesh="ellipsoid",
                   axes=(1.2, 1, 1, 1, 1, 1, 1, 1), n=150, terms=3, seed=3)
    rep = experiments.run_neumann_series(cfg)
    assert rep.passed
    checks = by_name(rep)
    assert checks["increment_norm_term_1"].status == "info"
    # increments should decay roughly geometrically with the operator norm
    assert checks["increment_norm_term_2"].value < checks["increment_norm_term_1"].value


def test_unknown_mesh_kind_raises():
    cfg = RunConfig(experiment="plemelj", mesh="torus")
    with pytest.raises(ValueError):
        experiments.run_plemelj(cfg)
