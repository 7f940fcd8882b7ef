"""Discretized boundary integral transforms and their block-matrix form.

Every transform here is a weighted sum over mesh nodes of compositions of
octonion left-multiplications. Because the algebra is not associative the
grouping is semantic: the normal always multiplies the function value first,
then the kernel factor multiplies the product. Operators therefore act as
R-linear maps stored (when materialized) as dense 8x8 real blocks.

Kernel conventions, writing d = y - x and c = 3 / pi^4:

* direct transform factor:  conj(d) / |d|^8
* dual transform factor:    (conj(n(x)) (x - y) / |d|^8) conj(n(y))
* skew kernel:              A(x, y) = conj(n(y)) d / |d|^8 - (conj(-d) / |d|^8) n(x)
  acting through conj(A(x, y)) conj(n(y)), so the skew operator equals the
  direct minus the dual transform.

Principal values are realized by dropping node pairs closer than eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import algebra as alg
from . import functions as fn
from . import geometry as geo
from .algebra import Octonion
from .errors import SingularityError

__all__ = [
    "NORMALIZATION",
    "OctonionField",
    "BlockOperator",
    "OPERATOR_KINDS",
    "cauchy_transform_interior",
    "cauchy_transform_interior_stats",
    "cauchy_theorem_residual",
    "cauchy_theorem_residual_stats",
    "parenthesization_gap",
    "parenthesization_gap_stats",
    "right_multiplier_gap_stats",
    "cauchy_transform_boundary",
    "dual_cauchy_transform_boundary",
    "hilbert_transform",
    "ks_kernel",
    "assemble_operator",
    "identity_operator",
    "plemelj_projectors",
    "adjoint_operator",
    "operator_norm_estimate",
    "transform_values",
    "halfspace_ks_poisson_check",
    "halfspace_ks_poisson_stats",
    "poisson_tail_bound",
    "save_operator",
    "load_operator_matrix",
]

#: 3 / pi^4, the reproducing normalization of the dimension-8 Cauchy kernel.
NORMALIZATION = 3.0 / np.pi**4

OPERATOR_KINDS = ("cauchy", "dual_cauchy", "ks", "hilbert")


@dataclass(frozen=True)
class OctonionField:
    """One octonion value per mesh node."""

    mesh: geo.BoundaryMesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.mesh.n, 8):
            raise ValueError(
                f"field needs shape ({self.mesh.n}, 8), got {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, mesh: geo.BoundaryMesh, func) -> "OctonionField":
        """Sample a PointFunction (or plain callable on Octonion) on the mesh."""
        if hasattr(func, "sample"):
            vals = func.sample(mesh.points)
        else:
            vals = np.stack([alg.as_coords(func(Octonion(p))) for p in mesh.points])
        return cls(mesh, vals)

    def node(self, i: int) -> Octonion:
        return Octonion(self.values[i])


def _check_eps(eps: float) -> float:
    if eps is None or eps <= 0:
        raise ValueError("eps must be a positive exclusion radius")
    return float(eps)


def _pair_kernels(kind, eval_pts, eval_norms, src_pts, src_norms, eps2):
    """Kernel factors K[p, q] for all pair combinations, excluded pairs zeroed.

    Returns (K, mask) with K of shape (P, Q, 8); mask is True where the pair
    survives the exclusion |y_q - x_p|^2 >= eps2.
    """
    diffs = src_pts[None, :, :] - eval_pts[:, None, :]
    d2 = np.sum(diffs * diffs, axis=-1)
    mask = d2 >= eps2
    inv = 1.0 / (np.where(mask, d2, 1.0) ** 4)
    inv[~mask] = 0.0
    if kind in ("cauchy", "hilbert"):
        K = alg.conj(diffs) * inv[..., None]
    elif kind == "dual_cauchy":
        inner = alg.mul(alg.conj(eval_norms)[:, None, :], -diffs * inv[..., None])
        K = alg.mul(inner, alg.conj(src_norms)[None, :, :])
    elif kind == "ks":
        first = alg.mul(alg.conj(src_norms)[None, :, :], diffs)
        second = alg.mul(alg.conj(-diffs), eval_norms[:, None, :])
        A = (first - second) * inv[..., None]
        K = alg.mul(alg.conj(A), alg.conj(src_norms)[None, :, :])
    else:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {OPERATOR_KINDS}")
    return K, mask


# ---------------------------------------------------------------------------
# pointwise transforms


def _interior_terms(f: OctonionField, x: Octonion):
    """Per-node contributions of the interior transform at x (weights folded in)."""
    mesh = f.mesh
    kernels = fn.cauchy_kernel_array(mesh.points - alg.as_coords(x))
    g = alg.mul(mesh.normals, f.values)
    return NORMALIZATION * mesh.weights[:, None] * alg.mul(kernels, g)


def cauchy_transform_interior(f: OctonionField, x: Octonion) -> Octonion:
    """Reproducing integral (3/pi^4) sum_j w_j q(y_j - x) (n_j f_j) at interior x."""
    total, _ = geo.monte_carlo_sum(np.ones(f.mesh.n), _interior_terms(f, x))
    return Octonion(total)


def cauchy_transform_interior_stats(f: OctonionField, x: Octonion):
    """Interior transform together with the Monte Carlo standard error."""
    terms = _interior_terms(f, x)
    total, sigma = geo.monte_carlo_sum(np.ones(f.mesh.n), terms)
    return Octonion(total), sigma


def cauchy_theorem_residual(f: OctonionField) -> float:
    """Norm of sum_j w_j n_j f_j, which vanishes for monogenic integrands."""
    return cauchy_theorem_residual_stats(f)[0]


def cauchy_theorem_residual_stats(f: OctonionField):
    mesh = f.mesh
    total, sigma = geo.monte_carlo_sum(mesh.weights, alg.mul(mesh.normals, f.values))
    return float(np.linalg.norm(total)), sigma


def parenthesization_gap(f: OctonionField, x: Octonion) -> float:
    """Gap between the two bracketings of the interior transform at x."""
    return parenthesization_gap_stats(f, x)[0]


def parenthesization_gap_stats(f: OctonionField, x: Octonion):
    """(gap, sigma): norm of the bracketing difference and its standard error.

    The difference per node is q (n f) - (q n) f, an associator, so the gap
    measures how far the integrand leaves the associative world.
    """
    mesh = f.mesh
    kernels = fn.cauchy_kernel_array(mesh.points - alg.as_coords(x))
    inner_first = alg.mul(kernels, alg.mul(mesh.normals, f.values))
    outer_first = alg.mul(alg.mul(kernels, mesh.normals), f.values)
    deltas = NORMALIZATION * (inner_first - outer_first)
    total, sigma = geo.monte_carlo_sum(mesh.weights, deltas)
    return float(np.linalg.norm(total)), sigma


def right_multiplier_gap_stats(f: OctonionField, x: Octonion, multiplier):
    """(gap, sigma) for transforming f * m versus right-multiplying by m after.

    Both sums run over the same mesh, so the difference is estimated term by
    term and sigma reflects the correlated estimator, not two independent
    error bars added together.
    """
    m = alg.as_coords(multiplier)
    mesh = f.mesh
    kernels = fn.cauchy_kernel_array(mesh.points - alg.as_coords(x))
    g = alg.mul(mesh.normals, f.values)
    shifted = alg.mul(kernels, alg.mul(mesh.normals, alg.mul(f.values, m)))
    plain = alg.mul(alg.mul(kernels, g), m)
    deltas = NORMALIZATION * (shifted - plain)
    total, sigma = geo.monte_carlo_sum(mesh.weights, deltas)
    return float(np.linalg.norm(total)), sigma


def _boundary_pv(kind: str, f: OctonionField, i: int, eps: float) -> np.ndarray:
    mesh = f.mesh
    eps = _check_eps(eps)
    K, _ = _pair_kernels(
        kind,
        mesh.points[i : i + 1],
        mesh.normals[i : i + 1],
        mesh.points,
        mesh.normals,
        eps * eps,
    )
    g = alg.mul(mesh.normals, f.values)
    terms = mesh.weights[:, None] * alg.mul(K[0], g)
    total, _ = geo.monte_carlo_sum(np.ones(mesh.n), terms)
    return NORMALIZATION * total


def cauchy_transform_boundary(f: OctonionField, i: int, eps: float) -> Octonion:
    """Boundary value f/2 plus the eps-excluded principal value sum at node i."""
    return Octonion(0.5 * f.values[i] + _boundary_pv("cauchy", f, i, eps))


def dual_cauchy_transform_boundary(f: OctonionField, i: int, eps: float) -> Octonion:
    """Boundary value of the dual transform at node i, same exclusion rule."""
    return Octonion(0.5 * f.values[i] + _boundary_pv("dual_cauchy", f, i, eps))


def hilbert_transform(f: OctonionField, i: int, eps: float) -> Octonion:
    """Twice the principal value part, no identity term."""
    return Octonion(2.0 * _boundary_pv("cauchy", f, i, eps))


def ks_kernel(x, n_x, y, n_y) -> Octonion:
    """Skew kernel A(x, y) = conj(n_y)(y - x)/|y - x|^8 - (conj(x - y)/|y - x|^8) n_x."""
    xc, yc = alg.as_coords(x), alg.as_coords(y)
    d = yc - xc
    d2 = float(np.dot(d, d))
    if d2 == 0.0:
        raise SingularityError("kernel singularity: skew kernel needs x != y")
    first = alg.mul(alg.conj(n_y), d)
    second = alg.mul(alg.conj(-d), alg.as_coords(n_x))
    return Octonion((first - second) / d2**4)


# ---------------------------------------------------------------------------
# assembled block operators


@dataclass(frozen=True)
class BlockOperator:
    """Dense R-linear operator: one 8x8 real block per node pair.

    Block (i, j) maps the coordinates of f(y_j) to its contribution at node
    i, quadrature weight included. apply() is additive and commutes with
    real scalars; it does not commute with octonion multipliers.
    """

    mesh: geo.BoundaryMesh
    blocks: np.ndarray
    label: str = ""

    def __post_init__(self):
        n = self.mesh.n
        if self.blocks.shape != (n, n, 8, 8):
            raise ValueError(f"blocks must have shape ({n}, {n}, 8, 8)")

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j]

    def flat(self) -> np.ndarray:
        """Row-major (8n, 8n) matrix acting on stacked coordinate vectors."""
        n = self.mesh.n
        return self.blocks.transpose(0, 2, 1, 3).reshape(8 * n, 8 * n)

    def apply(self, f):
        """Apply to an OctonionField (or a raw (n, 8) array of coordinates)."""
        if isinstance(f, OctonionField):
            return OctonionField(self.mesh, self.apply(f.values))
        vals = np.asarray(f, dtype=float)
        return np.einsum("pqab,qb->pa", self.blocks, vals)

    def adjoint(self) -> "BlockOperator":
        return adjoint_operator(self)

    def __add__(self, other):
        return BlockOperator(self.mesh, self.blocks + other.blocks,
                             f"({self.label}+{other.label})")

    def __sub__(self, other):
        return BlockOperator(self.mesh, self.blocks - other.blocks,
                             f"({self.label}-{other.label})")

    def __mul__(self, scalar):
        return BlockOperator(self.mesh, self.blocks * float(scalar),
                             f"{scalar}*{self.label}")

    __rmul__ = __mul__


def identity_operator(mesh: geo.BoundaryMesh) -> BlockOperator:
    blocks = np.zeros((mesh.n, mesh.n, 8, 8))
    idx = np.arange(mesh.n)
    blocks[idx, idx] = np.eye(8)
    return BlockOperator(mesh, blocks, "identity")


def assemble_operator(kind: str, mesh: geo.BoundaryMesh, eps: Optional[float] = None) -> BlockOperator:
    """Materialize one transform as dense blocks.

    Block (i, j) is (3/pi^4) w_j L(K_ij) L(n_j) where K is the kernel factor
    of the requested kind; the direct and dual transforms add the boundary
    half-identity on the diagonal, the skew and Hilbert kinds have a zero
    diagonal. eps defaults to twice the mean nearest-neighbor spacing.
    """
    if kind not in OPERATOR_KINDS:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {OPERATOR_KINDS}")
    if eps is None:
        eps = geo.default_eps(mesh.points)
    eps = _check_eps(eps)
    base = "cauchy" if kind == "hilbert" else kind
    K, _ = _pair_kernels(base, mesh.points, mesh.normals, mesh.points, mesh.normals, eps * eps)
    LK = alg.left_mul_matrix(K)
    Ln = alg.left_mul_matrix(mesh.normals)
    blocks = np.einsum("pqab,qbc->pqac", LK, Ln)
    blocks *= (NORMALIZATION * mesh.weights)[None, :, None, None]
    if kind == "hilbert":
        blocks *= 2.0
    if kind in ("cauchy", "dual_cauchy"):
        idx = np.arange(mesh.n)
        blocks[idx, idx] += 0.5 * np.eye(8)
    return BlockOperator(mesh, blocks, kind)


def plemelj_projectors(mesh: geo.BoundaryMesh, eps: Optional[float] = None):
    """Projector pair (plus, minus) built from the Hilbert blocks.

    plus = (H + I)/2 and minus = (-H + I)/2, so plus + minus recovers the
    identity and plus - minus recovers H bit-for-bit: halving and negating
    float matrices are exact operations.
    """
    H = assemble_operator("hilbert", mesh, eps)
    I = identity_operator(mesh)
    plus = BlockOperator(mesh, 0.5 * H.blocks + 0.5 * I.blocks, "plemelj_plus")
    minus = BlockOperator(mesh, -0.5 * H.blocks + 0.5 * I.blocks, "plemelj_minus")
    return plus, minus


def adjoint_operator(M: BlockOperator) -> BlockOperator:
    """Adjoint for the weighted real inner product sum_i w_i <f_i, g_i>.

    Blocks transform as M*(i, j) = (w_j / w_i) transpose(M(j, i)), which
    makes <Mf, g> = <f, M*g> an exact rearrangement of the same products.
    """
    w = M.mesh.weights
    scale = (w[None, :] / w[:, None])[:, :, None, None]
    blocks = M.blocks.transpose(1, 0, 3, 2) * scale
    return BlockOperator(M.mesh, blocks, M.label + "*")


def operator_norm_estimate(M: BlockOperator, iters: int = 60, seed: int = 0) -> float:
    """Largest singular value of M in the weighted l2 metric, by power iteration.

    The metric |f|^2 = sum_i w_i |f_i|^2 turns into the plain euclidean one
    after scaling coordinates by sqrt(w_i), so the estimate is the top
    singular value of D M D^{-1} with D = diag(sqrt(w)) repeated per
    component. Estimates are nondecreasing in iters up to rounding.
    """
    if iters < 1:
        raise ValueError("iters must be at least 1")
    G = M.flat().copy()
    d = np.sqrt(np.repeat(M.mesh.weights, 8))
    G *= d[:, None]
    G /= d[None, :]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(G.shape[0])
    norm_v = np.linalg.norm(v)
    estimate = 0.0
    for _ in range(iters):
        u = G @ (v / norm_v)
        estimate = float(np.linalg.norm(u))
        if estimate == 0.0:
            return 0.0
        v = G.T @ u
        norm_v = np.linalg.norm(v)
        if norm_v == 0.0:
            return estimate
    return estimate


def transform_values(kind: str, mesh: geo.BoundaryMesh, values: np.ndarray,
                     eps: float, chunk: int = 256) -> np.ndarray:
    """Principal-value part of a transform applied to (n, 8) values, streaming.

    Matches the assembled blocks without materializing them: row chunks of
    the kernel are built, applied, and discarded, so meshes far beyond the
    dense-assembly budget still get matrix-vector products. No half-identity
    term is added for any kind; the skew kind is complete as is and the
    Hilbert kind is doubled.
    """
    if kind not in OPERATOR_KINDS:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {OPERATOR_KINDS}")
    eps = _check_eps(eps)
    values = np.asarray(values, dtype=float)
    base = "cauchy" if kind == "hilbert" else kind
    g = alg.mul(mesh.normals, values)
    wg = mesh.weights[:, None] * g
    out = np.empty((mesh.n, 8))
    for start in range(0, mesh.n, chunk):
        stop = min(start + chunk, mesh.n)
        K, _ = _pair_kernels(
            base,
            mesh.points[start:stop],
            mesh.normals[start:stop],
            mesh.points,
            mesh.normals,
            eps * eps,
        )
        out[start:stop] = alg.mul(K, wg[None, :, :]).sum(axis=1)
    out *= NORMALIZATION
    if kind == "hilbert":
        out *= 2.0
    return out


# ---------------------------------------------------------------------------
# half-space specifics


def poisson_tail_bound(x0: float, radius: float, tangent_norm: float = 0.0) -> float:
    """Truncation bound for the wall integral of the x0-direction kernel.

    Outside the truncation ball the kernel is at most x0 / r_eff^8 with
    r_eff = r - |tangent|, and int_R^inf r^6 r_eff^-8 dr <= 1/(R - |tangent|)
    up to the surface factor, giving (6/pi^4) |S^6| x0 / (R - |tangent|).
    """
    if radius <= tangent_norm:
        raise ValueError("truncation radius must exceed the tangent offset")
    return 6.0 / np.pi**4 * geo.UNIT_SPHERE_AREA_S6 * x0 / (radius - tangent_norm)


def _poisson_terms(mesh: geo.BoundaryMesh, f: OctonionField, x0: float, x_tangent) -> np.ndarray:
    if x0 <= 0:
        raise ValueError("x0 must be a positive interior offset")
    tangent = alg.as_coords(x_tangent)
    if tangent[0] != 0.0:
        raise ValueError("x_tangent must be purely imaginary (zero real part)")
    x = tangent.copy()
    x[0] = x0
    d2 = np.sum((mesh.points - x) ** 2, axis=1)
    kernel = 6.0 / np.pi**4 * x0 / d2**4
    return (mesh.weights * kernel)[:, None] * f.values


def halfspace_ks_poisson_check(mesh: geo.BoundaryMesh, f: OctonionField,
                               x0: float, x_tangent) -> Octonion:
    """Interior-offset skew operator on the wall: the x0-direction Poisson sum.

    Evaluates (6/pi^4) sum_j w_j x0 / |y_j - x|^8 f(y_j) at x = x0 + x_tangent,
    which tends to f(x_tangent) as x0 -> 0+.
    """
    total, _ = geo.monte_carlo_sum(np.ones(mesh.n), _poisson_terms(mesh, f, x0, x_tangent))
    return Octonion(total)


def halfspace_ks_poisson_stats(mesh: geo.BoundaryMesh, f: OctonionField,
                               x0: float, x_tangent, center=None):
    """(value, sigma, tail_bound) for the Poisson sum at x0 + x_tangent.

    center names the wall point the mesh was truncated around (default the
    origin); the tail bound then uses the distance from x_tangent to the
    unsampled region outside that truncation ball.
    """
    terms = _poisson_terms(mesh, f, x0, x_tangent)
    total, sigma = geo.monte_carlo_sum(np.ones(mesh.n), terms)
    c = np.zeros(8) if center is None else alg.as_coords(center)
    radius = np.linalg.norm(mesh.points - c, axis=1).max()
    offset = float(np.linalg.norm(alg.as_coords(x_tangent) - c))
    bound = poisson_tail_bound(x0, radius, offset)
    return Octonion(total), sigma, bound


# ---------------------------------------------------------------------------
# operator dumps


def save_operator(M: BlockOperator, path) -> None:
    """Write the flat matrix as structured text: header lines, then rows.

    Format: first line "octonion operator dump v1", then "label: ...",
    "nodes: n", "block: 8", then 8n lines of 8n %.17g entries each,
    row-major over (node, component).
    """
    flat = M.flat()
    with open(path, "w") as fh:
        fh.write("octonion operator dump v1\n")
        fh.write(f"label: {M.label}\n")
        fh.write(f"nodes: {M.mesh.n}\n")
        fh.write("block: 8\n")
        for row in flat:
            fh.write(" ".join("%.17g" % v for v in row) + "\n")


def load_operator_matrix(path):
    """Read a dump back as (label, flat matrix) for external inspection."""
    with open(path) as fh:
        magic = fh.readline().strip()
        if magic != "octonion operator dump v1":
            raise ValueError(f"not an operator dump: first line {magic!r}")
        label = fh.readline().split(":", 1)[1].strip()
        n = int(fh.readline().split(":", 1)[1])
        block = int(fh.readline().split(":", 1)[1])
        flat = np.loadtxt(fh, ndmin=2)
    expected = (block * n, block * n)
    if flat.shape != expected:
        raise ValueError(f"dump matrix has shape {flat.shape}, expected {expected}")
    return label, flat
