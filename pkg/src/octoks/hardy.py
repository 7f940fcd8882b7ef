"""Hardy-space machinery: inner products, Szego projections, series probes.

The octonion-valued inner product weights boundary values by the outward
normal before pairing them, which is what makes monogenic boundary traces
reproducible by kernel sections. Projections exist in closed form for the
unit ball and the half-space wall; everything else takes caller-supplied
kernel fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from . import functions as fn
from . import geometry as geo
from . import operators as ops
from . import reports
from .algebra import Octonion
from .errors import DomainError

__all__ = [
    "InnerProductReport",
    "octonion_inner_product",
    "real_inner_product",
    "szego_projection_ball",
    "szego_projection_ball_stats",
    "szego_projection_halfspace",
    "szego_projection_halfspace_stats",
    "total_szego_projection",
    "ball_szego_operator",
    "neumann_series_experiment",
]


def _require_same_mesh(f: ops.OctonionField, g: ops.OctonionField) -> geo.BoundaryMesh:
    if f.mesh is g.mesh:
        return f.mesh
    if f.mesh.n == g.mesh.n and np.array_equal(f.mesh.points, g.mesh.points):
        return f.mesh
    raise ValueError("fields live on different meshes")


@dataclass(frozen=True)
class InnerProductReport:
    """Full octonion pairing (f, g) plus its eight real coordinates.

    parts[i] is exactly the i-coordinate of value; sigma is the Monte Carlo
    standard error of the estimate, useful for tolerance decisions downstream.
    """

    value: Octonion
    parts: np.ndarray
    sigma: float


def octonion_inner_product(f: ops.OctonionField, g: ops.OctonionField) -> InnerProductReport:
    """(3/pi^4) sum_j w_j conj(n_j g_j) (n_j f_j), multiplication order as written."""
    mesh = _require_same_mesh(f, g)
    nf = alg.mul(mesh.normals, f.values)
    ng = alg.mul(mesh.normals, g.values)
    terms = alg.mul(alg.conj(ng), nf)
    total, sigma = geo.monte_carlo_sum(mesh.weights, terms)
    value = Octonion(ops.NORMALIZATION * total)
    return InnerProductReport(value=value, parts=value.coords, sigma=ops.NORMALIZATION * sigma)


def real_inner_product(f: ops.OctonionField, g: ops.OctonionField, i: int = 0) -> float:
    """i-coordinate of the octonion inner product; i = 0 is the real part."""
    if not 0 <= i <= 7:
        raise ValueError(f"coordinate index must be in 0..7, got {i}")
    return float(octonion_inner_product(f, g).parts[i])


def _ball_section(mesh: geo.BoundaryMesh, x_coords: np.ndarray) -> ops.OctonionField:
    return ops.OctonionField(mesh, fn.szego_kernel_ball_array(mesh.points, x_coords))


def szego_projection_ball_stats(f: ops.OctonionField, x: Octonion):
    """(value, sigma) of the ball Szego projection of f at interior x."""
    xc = alg.as_coords(x)
    if float(np.dot(xc, xc)) >= 1.0:
        raise DomainError("ball projection needs an interior point, |x| < 1")
    if f.mesh.domain_tag != "unit_ball":
        raise DomainError(f"ball projection needs a unit sphere mesh, got {f.mesh.domain_tag!r}")
    rep = octonion_inner_product(f, _ball_section(f.mesh, xc))
    return rep.value, rep.sigma


def szego_projection_ball(f: ops.OctonionField, x: Octonion) -> Octonion:
    """Pair f against the kernel section at x; reproduces monogenic f."""
    return szego_projection_ball_stats(f, x)[0]


def szego_projection_halfspace_stats(f: ops.OctonionField, x: Octonion):
    """(value, sigma) of the half-space Szego projection of f at x, Re(x) > 0."""
    xc = alg.as_coords(x)
    if xc[0] <= 0.0:
        raise DomainError("half-space projection needs Re(x) > 0")
    if not f.mesh.domain_tag.startswith("halfspace"):
        raise DomainError(f"half-space projection needs a wall mesh, got {f.mesh.domain_tag!r}")
    section = ops.OctonionField(f.mesh, fn.szego_kernel_halfspace_array(f.mesh.points, xc))
    rep = octonion_inner_product(f, section)
    return rep.value, rep.sigma


def szego_projection_halfspace(f: ops.OctonionField, x: Octonion) -> Octonion:
    return szego_projection_halfspace_stats(f, x)[0]


def total_szego_projection(f: ops.OctonionField, component_kernels) -> Octonion:
    """Componentwise assembly sum_i <f, K_i>_i e_i from eight kernel sections.

    The caller supplies one kernel field per coordinate (on the ball and the
    half-space wall all eight coincide with the global kernel section; no
    closed form exists elsewhere, so the components stay caller input).
    """
    kernels = list(component_kernels)
    if len(kernels) != 8:
        raise ValueError(f"need exactly 8 component kernels, got {len(kernels)}")
    coords = np.zeros(8)
    for i, k in enumerate(kernels):
        _require_same_mesh(f, k)
        coords[i] = real_inner_product(f, k, i)
    return Octonion(coords)


# ---------------------------------------------------------------------------
# discrete ball projection as a block operator


def ball_szego_operator(mesh: geo.BoundaryMesh, eps=None) -> ops.BlockOperator:
    """Assemble the boundary Szego projection of the unit ball as blocks.

    Off-diagonal blocks act as f_j -> c w_j conj(n_j S(y_j, y_i)) (n_j f_j)
    with the same eps exclusion and half-identity jump convention as the
    direct transform. On the exact sphere the composite kernel collapses to
    the point-difference kernel, so this matrix coincides with the assembled
    direct transform up to rounding.
    """
    if mesh.domain_tag != "unit_ball":
        raise DomainError(f"ball operator needs a unit sphere mesh, got {mesh.domain_tag!r}")
    if eps is None:
        eps = geo.default_eps(mesh.points)
    eps = float(eps)
    if eps <= 0:
        raise ValueError("eps must be a positive exclusion radius")
    pts, norms, w = mesh.points, mesh.normals, mesh.weights
    n = mesh.n
    diffs = pts[None, :, :] - pts[:, None, :]
    mask = np.sum(diffs * diffs, axis=-1) >= eps * eps
    u = alg.mul(alg.conj(pts[None, :, :]), pts[:, None, :])
    u = -u
    u[..., 0] += 1.0
    k2 = np.sum(u * u, axis=-1)
    inv = np.where(mask & (k2 > 0), 1.0 / np.where(k2 > 0, k2, 1.0) ** 4, 0.0)
    section = u * inv[..., None]
    composite = alg.conj(alg.mul(norms[None, :, :], section))
    blocks = np.einsum(
        "pqab,qbc->pqac",
        alg.left_mul_matrix(composite),
        alg.left_mul_matrix(norms),
    )
    blocks *= (ops.NORMALIZATION * w)[None, :, None, None]
    blocks[np.arange(n), np.arange(n)] += 0.5 * np.eye(8)
    return ops.BlockOperator(mesh, blocks, "szego_ball")


def _operator_from_flat(mesh: geo.BoundaryMesh, flat: np.ndarray, label: str) -> ops.BlockOperator:
    n = mesh.n
    blocks = flat.reshape(n, 8, n, 8).transpose(0, 2, 1, 3).copy()
    return ops.BlockOperator(mesh, blocks, label)


def neumann_series_experiment(mesh: geo.BoundaryMesh, n_terms: int,
                              f: ops.OctonionField, eps=None, seed: int = 0) -> reports.ExperimentReport:
    """Partial sums of the direct transform composed with skew-term powers.

    Builds P_N = C (I - A + A^2 - ...) through N powers and reports the skew
    operator norm, per-term increment norms, the projection defect of P_N,
    and (on the ball, where the closed-form projection exists) how far P_N f
    sits from the assembled projection. Measurement only: convergence of the
    series on general domains is an open question, so nothing beyond the
    ball's exact collapse is asserted.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be nonnegative")
    if eps is None:
        eps = geo.default_eps(mesh.points)
    report = reports.ExperimentReport(
        experiment="neumann-series",
        config={"n_terms": n_terms, "eps": float(eps), "seed": seed},
        mesh=mesh.descriptor(),
        seeds={"mesh": mesh.seed, "probe": seed},
    )
    C = ops.assemble_operator("cauchy", mesh, eps)
    A = ops.assemble_operator("ks", mesh, eps)
    is_ball = mesh.domain_tag == "unit_ball"
    report.add(reports.Check.info(
        "ks_operator_norm",
        ops.operator_norm_estimate(A, iters=60, seed=seed),
        "skew part; zero on the exact ball",
    ))
    flat_C = C.flat()
    flat_negA = -A.flat()
    power = np.eye(flat_C.shape[0])
    partial = flat_C.copy()
    for j in range(1, n_terms + 1):
        power = power @ flat_negA
        increment = flat_C @ power
        partial += increment
        inc_norm = ops.operator_norm_estimate(
            _operator_from_flat(mesh, increment, f"increment_{j}"), iters=40, seed=seed
        )
        if is_ball:
            report.add(reports.Check.bounded(
                f"increment_norm_term_{j}", inc_norm, 1e-12,
                "ball: skew term vanishes, so every later increment must too",
            ))
        else:
            report.add(reports.Check.info(f"increment_norm_term_{j}", inc_norm))
    P = _operator_from_flat(mesh, partial, f"partial_sum_{n_terms}")
    rng = np.random.default_rng(seed)
    probe = ops.OctonionField(mesh, rng.standard_normal((mesh.n, 8)))
    once = P.apply(probe)
    twice = P.apply(once)
    defect = np.linalg.norm(twice.values - once.values, axis=1).max()
    scale = max(1.0, np.linalg.norm(once.values, axis=1).max())
    report.add(reports.Check.info(
        "projection_defect", defect / scale,
        "relative max-node norm of P(Pg) - Pg on a random field",
    ))
    Pf = P.apply(f)
    report.add(reports.Check.info(
        "partial_sum_field_norm",
        float(np.linalg.norm(Pf.values, axis=1).max()),
    ))
    if is_ball:
        S = ball_szego_operator(mesh, eps)
        gap = np.linalg.norm(Pf.values - S.apply(f).values, axis=1).max()
        report.add(reports.Check.bounded(
            "ball_matches_szego_operator", gap, 1e-10,
            "P_N f against the assembled ball projection, max node norm",
        ))
    return report
