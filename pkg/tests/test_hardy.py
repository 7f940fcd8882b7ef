"""Inner product, Szego projection, and series-experiment tests."""

import numpy as np
import pytest

import octoks.algebra as alg
from octoks.algebra import Octonion
from octoks import functions as fn
from octoks import geometry as geo
from octoks import hardy
from octoks import operators as ops
from octoks.errors import DomainError

REFS = {f.name: f for f in fn.reference_functions()}
E = np.eye(8)


@pytest.fixture(scope="module")
def sphere4000():
    return geo.make_sphere_mesh(4000, seed=8)


@pytest.fixture(scope="module")
def sphere300():
    return geo.make_sphere_mesh(300, seed=2)


@pytest.fixture(scope="module")
def random_fields(sphere4000):
    rng = np.random.default_rng(3)
    F = ops.OctonionField(sphere4000, rng.standard_normal((4000, 8)))
    G = ops.OctonionField(sphere4000, rng.standard_normal((4000, 8)))
    return F, G


# ---------------------------------------------------------------------------
# inner products


def test_unit_constant_has_unit_norm(sphere4000):
    f = ops.OctonionField(sphere4000, np.tile(E[1], (4000, 1)))
    rep = hardy.octonion_inner_product(f, f)
    assert abs(rep.value - Octonion(E[0])) <= 1e-12
    assert np.array_equal(rep.parts, rep.value.coords)


def test_hermitian_symmetry(random_fields):
    F, G = random_fields
    fg = hardy.octonion_inner_product(F, G).value
    gf = hardy.octonion_inner_product(G, F).value
    assert abs(Octonion(alg.conj(fg.coords)) - gf) <= 1e-12


def test_self_pairing_is_squared_norm(random_fields, sphere4000):
    F, _ = random_fields
    rep = hardy.octonion_inner_product(F, F)
    norm2 = ops.NORMALIZATION * float(
        np.sum(sphere4000.weights * np.sum(F.values**2, axis=1))
    )
    assert abs(float(rep.parts[0]) - norm2) <= 1e-12 * max(1.0, norm2)
    assert np.abs(rep.parts[1:]).max() <= 1e-12


def test_real_part_normal_invariance(random_fields, sphere4000):
    F, G = random_fields
    nF = ops.OctonionField(sphere4000, alg.mul(sphere4000.normals, F.values))
    nG = ops.OctonionField(sphere4000, alg.mul(sphere4000.normals, G.values))
    a = hardy.real_inner_product(nF, nG)
    b = hardy.real_inner_product(F, G)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


def test_real_part_two_ways(random_fields, sphere4000):
    F, G = random_fields
    via_parts = hardy.real_inner_product(F, G, 0)
    direct = ops.NORMALIZATION * float(
        np.sum(sphere4000.weights * np.sum(G.values * F.values, axis=1))
    )
    assert abs(via_parts - direct) <= 1e-12 * max(1.0, abs(direct))


def test_halfspace_normals_collapse():
    mesh = geo.make_halfspace_mesh(2.0, 500, seed=7)
    rng = np.random.default_rng(1)
    F = ops.OctonionField(mesh, rng.standard_normal((500, 8)))
    G = ops.OctonionField(mesh, rng.standard_normal((500, 8)))
    rep = hardy.octonion_inner_product(F, G)
    terms = alg.mul(alg.conj(G.values), F.values)
    expected, _ = geo.monte_carlo_sum(mesh.weights, terms)
    assert np.abs(rep.value.coords - ops.NORMALIZATION * expected).max() <= 1e-15


def test_inner_product_argument_errors(sphere4000, sphere300):
    f = ops.OctonionField(sphere4000, np.zeros((4000, 8)))
    g = ops.OctonionField(sphere300, np.zeros((300, 8)))
    with pytest.raises(ValueError):
        hardy.octonion_inner_product(f, g)
    with pytest.raises(ValueError):
        hardy.real_inner_product(f, f, 8)
    with pytest.raises(ValueError):
        hardy.real_inner_product(f, f, -1)


# ---------------------------------------------------------------------------
# ball projection


def test_ball_projection_reproduces_monogenic(sphere4000):
    f = ops.OctonionField.from_function(sphere4000, REFS["coordinate_pair"])
    v, sigma = hardy.szego_projection_ball_stats(f, Octonion(0.3 * E[1]))
    assert abs(v - Octonion(0.3 * E[0])) <= 5 * sigma
    v0, sigma0 = hardy.szego_projection_ball_stats(f, Octonion(np.zeros(8)))
    assert abs(v0) <= 5 * sigma0


def test_ball_projection_is_interior_transform(sphere4000):
    # the composite kernel conj(y S(y, x)) collapses to the point-difference
    # kernel whenever |y| = 1, so the two evaluations agree to rounding at
    # any interior point, not merely within Monte Carlo error
    f = ops.OctonionField.from_function(sphere4000, REFS["coordinate_pair"])
    rng = np.random.default_rng(12)
    for _ in range(20):
        xc = rng.standard_normal(8)
        xc *= rng.uniform(0.05, 0.9) / np.linalg.norm(xc)
        a = hardy.szego_projection_ball(f, Octonion(xc))
        b = ops.cauchy_transform_interior(f, Octonion(xc))
        assert abs(a - b) <= 1e-12


def test_ball_projection_domain_errors(sphere4000):
    f = ops.OctonionField.from_function(sphere4000, REFS["one"])
    with pytest.raises(DomainError):
        hardy.szego_projection_ball(f, Octonion(E[1]))
    wall = geo.make_halfspace_mesh(2.0, 50, seed=0)
    g = ops.OctonionField(wall, np.zeros((50, 8)))
    with pytest.raises(DomainError):
        hardy.szego_projection_ball(g, Octonion(0.3 * E[1]))


def test_projection_fixes_projected_fields(sphere300):
    # project a non-monogenic field once with the assembled transform, then
    # project again at an interior point: the second pass must return the
    # same element within the correlated Monte Carlo error bars
    C = ops.assemble_operator("cauchy", sphere300)
    f = ops.OctonionField.from_function(sphere300, REFS["coordinate_pair_times_e3"])
    g = C.apply(f)
    x = Octonion(0.3 * E[1])
    a, s1 = hardy.szego_projection_ball_stats(g, x)
    b, s2 = ops.cauchy_transform_interior_stats(f, x)
    assert abs(a - b) <= 2 * (s1 + s2)


# ---------------------------------------------------------------------------
# half-space projection


def test_halfspace_projection_zero_field():
    mesh = geo.make_halfspace_mesh(20.0, 2000, seed=4, focus=1.0)
    z = ops.OctonionField(mesh, np.zeros((2000, 8)))
    assert abs(hardy.szego_projection_halfspace(z, Octonion(E[0]))) == 0.0


def test_halfspace_projection_constant_limit():
    # truncated wall integral of the kernel section heads to 1/2: the kernel
    # is half the Poisson kernel plus an odd tangential part
    mesh = geo.make_halfspace_mesh(20.0, 20000, seed=4, focus=1.0)
    f = ops.OctonionField(mesh, np.tile(E[0], (20000, 1)))
    v, sigma = hardy.szego_projection_halfspace_stats(f, Octonion(E[0]))
    tail = 0.5 * ops.poisson_tail_bound(1.0, 20.0)
    assert abs(abs(v) - 0.5) <= tail + 5 * sigma
    assert 0.40 <= abs(v) <= 0.48


def test_halfspace_truncation_sweep_monotone():
    errs = []
    for radius, seed in ((10.0, 21), (20.0, 22), (40.0, 23)):
        mesh = geo.make_halfspace_mesh(radius, 20000, seed=seed, focus=1.0)
        f = ops.OctonionField(mesh, np.tile(E[0], (20000, 1)))
        v, sigma = hardy.szego_projection_halfspace_stats(f, Octonion(E[0]))
        err = abs(abs(v) - 0.5)
        assert err <= 0.5 * ops.poisson_tail_bound(1.0, radius) + 5 * sigma
        errs.append(err)
    assert errs[0] > errs[1] > errs[2]


def test_halfspace_projection_domain_errors(sphere300):
    mesh = geo.make_halfspace_mesh(2.0, 50, seed=0)
    f = ops.OctonionField(mesh, np.zeros((50, 8)))
    with pytest.raises(DomainError):
        hardy.szego_projection_halfspace(f, Octonion(-E[0]))
    with pytest.raises(DomainError):
        hardy.szego_projection_halfspace(f, Octonion(E[1]))
    g = ops.OctonionField(sphere300, np.zeros((300, 8)))
    with pytest.raises(DomainError):
        hardy.szego_projection_halfspace(g, Octonion(E[0]))


# ---------------------------------------------------------------------------
# total projection


def test_total_projection_matches_global_kernel(sphere4000):
    f = ops.OctonionField.from_function(sphere4000, REFS["coordinate_pair"])
    xc = 0.3 * E[1]
    section = ops.OctonionField(sphere4000, fn.szego_kernel_ball_array(sphere4000.points, xc))
    total = hardy.total_szego_projection(f, [section] * 8)
    direct = hardy.szego_projection_ball(f, Octonion(xc))
    assert abs(total - direct) == 0.0


def test_total_projection_is_real_linear(sphere4000, random_fields):
    F, G = random_fields
    xc = 0.2 * E[2]
    section = ops.OctonionField(sphere4000, fn.szego_kernel_ball_array(sphere4000.points, xc))
    kernels = [section] * 8
    combo = ops.OctonionField(sphere4000, 2.0 * F.values - G.values)
    lhs = hardy.total_szego_projection(combo, kernels)
    rhs = hardy.total_szego_projection(F, kernels) * 2.0 - hardy.total_szego_projection(G, kernels)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_total_projection_zero_and_errors(sphere4000, sphere300):
    z = ops.OctonionField(sphere4000, np.zeros((4000, 8)))
    section = ops.OctonionField(sphere4000, fn.szego_kernel_ball_array(sphere4000.points, 0.1 * E[1]))
    assert abs(hardy.total_szego_projection(z, [section] * 8)) == 0.0
    with pytest.raises(ValueError):
        hardy.total_szego_projection(z, [section] * 7)
    other = ops.OctonionField(sphere300, np.zeros((300, 8)))
    with pytest.raises(ValueError):
        hardy.total_szego_projection(z, [other] * 8)


# ---------------------------------------------------------------------------
# assembled ball projection


def test_ball_operator_matches_direct_transform(sphere300):
    S = hardy.ball_szego_operator(sphere300)
    C = ops.assemble_operator("cauchy", sphere300)
    assert np.abs(S.blocks - C.blocks).max() <= 1e-12


def test_ball_operator_rejects_other_meshes():
    mesh = geo.make_ellipsoid_mesh((1.2, 1, 1, 1, 1, 1, 1, 1), 50, seed=6)
    with pytest.raises(DomainError):
        hardy.ball_szego_operator(mesh)


# ---------------------------------------------------------------------------
# series experiment


def test_neumann_ball_collapses(sphere300):
    f = ops.OctonionField.from_function(sphere300, REFS["coordinate_pair"])
    report = hardy.neumann_series_experiment(sphere300, 3, f, seed=1)
    assert report.passed
    by_name = {c.name: c for c in report.checks}
    for j in (1, 2, 3):
        c = by_name[f"increment_norm_term_{j}"]
        assert c.status == "pass"
        assert c.value <= 1e-12
    assert by_name["ball_matches_szego_operator"].status == "pass"
    assert report.mesh["domain_tag"] == "unit_ball"


def test_neumann_zero_terms_is_plain_transform():
    mesh = geo.make_ellipsoid_mesh((1.2, 1, 1, 1, 1, 1, 1, 1), 100, seed=6)
    f = ops.OctonionField.from_function(mesh, REFS["coordinate_pair"])
    report = hardy.neumann_series_experiment(mesh, 0, f, seed=1)
    C = ops.assemble_operator("cauchy", mesh)
    expected = float(np.linalg.norm(C.apply(f).values, axis=1).max())
    by_name = {c.name: c for c in report.checks}
    assert abs(by_name["partial_sum_field_norm"].value - expected) <= 1e-15
    assert not any(c.name.startswith("increment") for c in report.checks)


def test_neumann_ellipsoid_reports_decay():
    mesh = geo.make_ellipsoid_mesh((1.2, 1, 1, 1, 1, 1, 1, 1), 150, seed=6)
    f = ops.OctonionField.from_function(mesh, REFS["coordinate_pair"])
    report = hardy.neumann_series_experiment(mesh, 2, f, seed=1)
    by_name = {c.name: c for c in report.checks}
    assert by_name["ks_operator_norm"].status == "info"
    assert by_name["increment_norm_term_2"].value < by_name["increment_norm_term_1"].value
    assert report.passed


def test_neumann_rejects_negative_terms(sphere300):
    f = ops.OctonionField(sphere300, np.zeros((300, 8)))
    with pytest.raises(ValueError):
        hardy.neumann_series_experiment(sphere300, -1, f)
