"""Boundary meshes for the unit sphere, ellipsoids, and the flat half-space wall.

A mesh is a Monte Carlo quadrature rule on a 7-dimensional boundary inside
R^8: random nodes, outward unit normals, and per-node weights such that
sum_j w_j f(y_j) estimates the surface integral of f. Meshes serialize to a
small JSON format that round-trips floats exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import MeshParseError, MeshValidationError

__all__ = [
    "UNIT_SPHERE_AREA_S7",
    "UNIT_SPHERE_AREA_S6",
    "ball7_volume",
    "BoundaryMesh",
    "make_sphere_mesh",
    "make_ellipsoid_mesh",
    "make_halfspace_mesh",
    "save_mesh",
    "load_mesh",
    "monte_carlo_sum",
    "default_eps",
]

#: Surface area of the unit sphere S^7 in R^8.
UNIT_SPHERE_AREA_S7 = math.pi**4 / 3.0

#: Surface area of the unit sphere S^6 in R^7.
UNIT_SPHERE_AREA_S6 = 16.0 * math.pi**3 / 15.0


def ball7_volume(radius: float) -> float:
    """Volume of the radius-R ball in R^7."""
    return 16.0 * math.pi**3 * radius**7 / 105.0


@dataclass(frozen=True)
class BoundaryMesh:
    """Monte Carlo boundary quadrature: nodes, outward normals, weights."""

    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    domain_tag: str
    seed: Optional[int] = None

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def validate(self) -> None:
        """Raise MeshValidationError when the node data is structurally off."""
        pts, nms, wts = self.points, self.normals, self.weights
        if pts.ndim != 2 or pts.shape[1] != 8:
            raise MeshValidationError("points must be an (n, 8) array")
        if nms.shape != pts.shape:
            raise MeshValidationError("normals must match the shape of points")
        if wts.shape != (pts.shape[0],):
            raise MeshValidationError("weights must be a length-n vector")
        if not (np.isfinite(pts).all() and np.isfinite(nms).all() and np.isfinite(wts).all()):
            raise MeshValidationError("mesh arrays must be finite")
        lengths = np.linalg.norm(nms, axis=1)
        bad = np.nonzero(np.abs(lengths - 1.0) > 1e-12)[0]
        if bad.size:
            raise MeshValidationError(
                f"node {bad[0]}: normal has length {lengths[bad[0]]!r}, expected 1"
            )
        nonpos = np.nonzero(wts <= 0.0)[0]
        if nonpos.size:
            raise MeshValidationError(
                f"node {nonpos[0]}: weight {wts[nonpos[0]]!r} is not positive"
            )

    def descriptor(self) -> dict:
        """Small dict describing the mesh for reports."""
        return {
            "domain_tag": self.domain_tag,
            "nodes": int(self.n),
            "seed": self.seed,
            "total_weight": float(self.weights.sum()),
        }


def _unit_vectors(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def make_sphere_mesh(n: int, seed: int = 0) -> BoundaryMesh:
    """Uniform nodes on the unit sphere in R^8 with equal weights.

    The outward normal at a sphere point is the point itself, and the equal
    weights sum exactly to the sphere area pi^4 / 3.
    """
    if n <= 0:
        raise ValueError("mesh needs at least one node")
    rng = np.random.default_rng(seed)
    pts = _unit_vectors(rng, n, 8)
    weights = np.full(n, UNIT_SPHERE_AREA_S7 / n)
    mesh = BoundaryMesh(pts, pts.copy(), weights, "unit_ball", seed)
    mesh.validate()
    return mesh


def make_ellipsoid_mesh(axes, n: int, seed: int = 0) -> BoundaryMesh:
    """Mesh of the ellipsoid sum_i (x_i / a_i)^2 = 1.

    Nodes come from pushing uniform sphere samples u through x = a * u. The
    area element of that map is (prod a) * sqrt(sum u_i^2 / a_i^2) times the
    sphere element, which becomes the per-node weight; normals follow the
    gradient x_i / a_i^2, normalized.
    """
    axes = np.asarray(axes, dtype=float)
    if axes.shape != (8,):
        raise ValueError("axes must be 8 positive semi-axis lengths")
    if not (axes > 0).all():
        raise ValueError("axes must be 8 positive semi-axis lengths")
    if n <= 0:
        raise ValueError("mesh needs at least one node")
    rng = np.random.default_rng(seed)
    u = _unit_vectors(rng, n, 8)
    pts = u * axes
    grad = pts / axes**2
    normals = grad / np.linalg.norm(grad, axis=1, keepdims=True)
    jacobian = axes.prod() * np.sqrt(np.sum((u / axes) ** 2, axis=1))
    weights = UNIT_SPHERE_AREA_S7 / n * jacobian
    tag = "ellipsoid(" + ",".join("%.17g" % a for a in axes) + ")"
    mesh = BoundaryMesh(pts, normals, weights, tag, seed)
    mesh.validate()
    return mesh


def _sin6_antiderivative(theta):
    """Integral of sin^6 from 0 to theta."""
    t = np.asarray(theta, dtype=float)
    return (10.0 * t - 7.5 * np.sin(2.0 * t) + 1.5 * np.sin(4.0 * t) - np.sin(6.0 * t) / 6.0) / 32.0


def _sample_sin6_angles(rng, n, theta_max):
    """Draw angles with density sin^6 on [0, theta_max] by bisecting the CDF."""
    targets = rng.random(n) * _sin6_antiderivative(theta_max)
    lo = np.zeros(n)
    hi = np.full(n, theta_max)
    for _ in range(55):
        mid = 0.5 * (lo + hi)
        below = _sin6_antiderivative(mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def make_halfspace_mesh(
    radius: float,
    n: int,
    seed: int = 0,
    focus: Optional[float] = None,
    center=None,
) -> BoundaryMesh:
    """Mesh of the wall x0 = 0 truncated to |y - center| <= radius.

    Normals point out of the half-space x0 > 0, so they are all -1 (minus
    the real unit). With focus=None nodes are uniform in the radius-R ball
    of R^7 around center (default the origin) and weights are the equal
    share of its volume.

    With focus=s > 0, nodes concentrate where kernels based at height s
    above center are large: the radial angle theta = atan(r / s) is drawn
    with density sin^6 on [0, atan(R / s)], which makes the weight
    Z * |S^6| * (r^2 + s^2)^4 / (n * s) with Z the sin^6 mass. The estimator
    stays unbiased for every integrand; for the reproducing-kernel decay
    (r^2 + s^2)^-4 itself the per-node contributions are constant, so the
    sampling noise vanishes where the uniform mesh drowns in it.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n <= 0:
        raise ValueError("mesh needs at least one node")
    if focus is not None and focus <= 0:
        raise ValueError("focus must be a positive height above the wall")
    if center is None:
        center = np.zeros(8)
    else:
        center = np.asarray(getattr(center, "coords", center), dtype=float)
        if center.shape != (8,):
            raise ValueError("center must be an 8-vector on the wall")
        if center[0] != 0.0:
            raise ValueError("center must lie on the wall (zero real part)")
    rng = np.random.default_rng(seed)
    directions = _unit_vectors(rng, n, 7)
    if focus is None:
        r = radius * rng.random(n) ** (1.0 / 7.0)
        weights = np.full(n, ball7_volume(radius) / n)
    else:
        theta_max = math.atan2(radius, focus)
        theta = _sample_sin6_angles(rng, n, theta_max)
        r = focus * np.tan(theta)
        norm_const = float(_sin6_antiderivative(theta_max))
        weights = norm_const * UNIT_SPHERE_AREA_S6 * (r**2 + focus**2) ** 4 / (n * focus)
    pts = np.zeros((n, 8))
    pts[:, 1:] = directions * r[:, None]
    pts += center
    normals = np.zeros((n, 8))
    normals[:, 0] = -1.0
    mesh = BoundaryMesh(pts, normals, weights, "halfspace(%.17g)" % radius, seed)
    mesh.validate()
    return mesh


def monte_carlo_sum(weights: np.ndarray, values: np.ndarray):
    """Weighted sum and its standard error.

    values has shape (n,) or (n, k); the error estimate treats the n terms
    w_j * v_j as independent draws, so sigma = sqrt(n * var(terms)), taken
    componentwise and reduced to one number by the euclidean norm.
    """
    weights = np.asarray(weights, dtype=float)
    values = np.asarray(values, dtype=float)
    terms = weights[:, None] * values if values.ndim == 2 else weights * values
    # plain float64 accumulation drifts by ~1e-12 over 1e5 near-equal terms,
    # which is visible next to the exact-normalization identities; fsum is
    # cheap at these sizes and makes the reduction exactly rounded
    if terms.ndim == 2:
        total = np.array([math.fsum(terms[:, k]) for k in range(terms.shape[1])])
    else:
        total = math.fsum(terms)
    n = weights.shape[0]
    if n < 2:
        return total, float("inf")
    var = terms.var(axis=0, ddof=1)
    sigma = float(np.sqrt(n * var.sum()))
    return total, sigma


def default_eps(points: np.ndarray) -> float:
    """Twice the mean nearest-neighbor distance, a safe exclusion radius."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if n < 2:
        raise ValueError("need at least two points to size an exclusion radius")
    nearest = np.empty(n)
    chunk = max(1, int(2**24 // max(n, 1)))
    for start in range(0, n, chunk):
        block = pts[start : start + chunk]
        d2 = np.sum((block[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
        for i in range(block.shape[0]):
            d2[i, start + i] = np.inf
        nearest[start : start + chunk] = np.sqrt(d2.min(axis=1))
    return 2.0 * float(nearest.mean())


# ---------------------------------------------------------------------------
# serialization


def save_mesh(mesh: BoundaryMesh, path) -> None:
    """Write a mesh as JSON with %.17g floats (exact float round trip)."""
    mesh.validate()

    def vec(v):
        return "[" + ", ".join("%.17g" % x for x in v) + "]"

    lines = [
        "{",
        '  "version": 1,',
        '  "domain_tag": %s,' % json.dumps(mesh.domain_tag),
        '  "seed": %s,' % json.dumps(mesh.seed),
        '  "nodes": [',
    ]
    body = []
    for p, nm, w in zip(mesh.points, mesh.normals, mesh.weights):
        body.append(
            '    {"point": %s, "normal": %s, "weight": %s}'
            % (vec(p), vec(nm), "%.17g" % w)
        )
    lines.append(",\n".join(body))
    lines.append("  ]")
    lines.append("}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _node_vector(node: dict, index: int, key: str) -> np.ndarray:
    if key not in node:
        raise MeshParseError(f"node {index}: missing field '{key}'")
    val = node[key]
    if not isinstance(val, list) or len(val) != 8:
        raise MeshParseError(f"node {index}: '{key}' must be a list of 8 numbers")
    try:
        return np.array([float(x) for x in val])
    except (TypeError, ValueError):
        raise MeshParseError(f"node {index}: '{key}' contains a non-numeric entry")


def load_mesh(path) -> BoundaryMesh:
    """Read a mesh written by save_mesh, with field-level error messages."""
    with open(path) as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MeshParseError(f"mesh file is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise MeshParseError("mesh file must contain a JSON object")
    for key in ("version", "domain_tag", "nodes"):
        if key not in doc:
            raise MeshParseError(f"mesh file missing field '{key}'")
    if doc["version"] != 1:
        raise MeshParseError(f"unsupported mesh format version {doc['version']!r}")
    if not isinstance(doc["domain_tag"], str):
        raise MeshParseError("'domain_tag' must be a string")
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not nodes:
        raise MeshParseError("'nodes' must be a non-empty list")
    seed = doc.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise MeshParseError("'seed' must be an integer or null")
    n = len(nodes)
    pts = np.empty((n, 8))
    nms = np.empty((n, 8))
    wts = np.empty(n)
    for i, node in enumerate(nodes):
        if not isinstance(node, dict):
            raise MeshParseError(f"node {i}: expected an object")
        pts[i] = _node_vector(node, i, "point")
        nms[i] = _node_vector(node, i, "normal")
        if "weight" not in node:
            raise MeshParseError(f"node {i}: missing field 'weight'")
        try:
            wts[i] = float(node["weight"])
        except (TypeError, ValueError):
            raise MeshParseError(f"node {i}: 'weight' is not a number")
    mesh = BoundaryMesh(pts, nms, wts, doc["domain_tag"], seed)
    mesh.validate()
    return mesh
