"""Reference functions, reproducing kernels, and Cauchy-Riemann operators.

The generalized Cauchy-Riemann operator used throughout is
D f = d f/dx0 + sum_i e_i d f/dx_i, approximated by central differences.
A function is called left monogenic when D f = 0 on its domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import algebra as alg
from .algebra import Octonion
from .errors import SingularityError

__all__ = [
    "PointFunction",
    "cauchy_kernel",
    "cauchy_kernel_array",
    "szego_kernel_ball",
    "szego_kernel_ball_array",
    "szego_kernel_halfspace",
    "szego_kernel_halfspace_array",
    "cr_operator",
    "conj_cr_operator",
    "right_cr_operator",
    "right_conj_cr_operator",
    "richardson",
    "reference_functions",
]


@dataclass(frozen=True)
class PointFunction:
    """A pointwise octonion-valued function with bookkeeping for tests.

    monogenic is one of "left", "no", "unknown"; domain is a human-readable
    description of where func is defined. array_func, when present, evaluates
    the same function on an (n, 8) coordinate array in one call.
    """

    func: Callable[[Octonion], Octonion]
    name: str
    monogenic: str = "unknown"
    domain: str = "all of R^8"
    array_func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __call__(self, x: Octonion) -> Octonion:
        return self.func(x)

    def sample(self, points: np.ndarray) -> np.ndarray:
        """Evaluate on an (n, 8) array, preferring the vectorized path."""
        if self.array_func is not None:
            return np.asarray(self.array_func(points), dtype=float)
        return np.stack([self.func(Octonion(p)).coords for p in points])


def cauchy_kernel_array(d: np.ndarray) -> np.ndarray:
    """conj(d) / |d|^8 on an (..., 8) array of nonzero offsets."""
    d = np.asarray(d, dtype=float)
    n2 = np.sum(d * d, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise SingularityError("kernel singularity: evaluation at the origin")
    return alg.conj(d) / n2**4


def cauchy_kernel(x: Octonion) -> Octonion:
    """Cauchy kernel conj(x) / |x|^8; singular at the origin."""
    return Octonion(cauchy_kernel_array(alg.as_coords(x)))


def szego_kernel_ball_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(1 - conj(x) y) / |1 - conj(x) y|^8 with numpy broadcasting."""
    u = alg.mul(alg.conj(x), y)
    k = -u
    k[..., 0] += 1.0
    n2 = np.sum(k * k, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise SingularityError("kernel singularity: Szego kernel pole at conj(x) y = 1")
    return k / n2**4


def szego_kernel_ball(x: Octonion, y: Octonion) -> Octonion:
    """Szego kernel of the unit ball."""
    return Octonion(szego_kernel_ball_array(alg.as_coords(x), alg.as_coords(y)))


def szego_kernel_halfspace_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(conj(x) + y) / |conj(x) + y|^8 with numpy broadcasting."""
    k = alg.conj(x) + alg.as_coords(y)
    n2 = np.sum(k * k, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise SingularityError("kernel singularity: Szego kernel pole at conj(x) + y = 0")
    return k / n2**4


def szego_kernel_halfspace(x: Octonion, y: Octonion) -> Octonion:
    """Szego kernel of the half-space Re(x) > 0."""
    return Octonion(szego_kernel_halfspace_array(alg.as_coords(x), alg.as_coords(y)))


def _stencil(f, x: Octonion, h: float) -> np.ndarray:
    """Central-difference partials: row i approximates d f / dx_i at x."""
    if h <= 0:
        raise ValueError("step size h must be positive")
    xc = x.coords
    rows = np.empty((8, 8))
    for i in range(8):
        step = np.zeros(8)
        step[i] = h
        fp = f(Octonion(xc + step))
        fm = f(Octonion(xc - step))
        rows[i] = (fp.coords - fm.coords) / (2.0 * h)
    return rows

# Left and right compositions of the stencil with the basis fold to one
# einsum each: left sums e_i d_i, right sums d_i e_i.


def cr_operator(f, x: Octonion, h: float = 1e-4) -> Octonion:
    """Central-difference D f = sum_i e_i (f(x + h e_i) - f(x - h e_i)) / (2h)."""
    d = _stencil(f, x, h)
    return Octonion(np.einsum("ij,ijk->k", d, alg.STRUCTURE))


def conj_cr_operator(f, x: Octonion, h: float = 1e-4) -> Octonion:
    """Central-difference conjugate operator d0 f - sum_{i>=1} e_i d_i f."""
    d = _stencil(f, x, h)
    out = d[0] - np.einsum("ij,ijk->k", d[1:], alg.STRUCTURE[1:])
    return Octonion(out)


def right_cr_operator(f, x: Octonion, h: float = 1e-4) -> Octonion:
    """Mirrored operator f D = sum_i (d_i f) e_i with the basis on the right."""
    d = _stencil(f, x, h)
    return Octonion(np.einsum("ij,jik->k", d, alg.STRUCTURE))


def right_conj_cr_operator(f, x: Octonion, h: float = 1e-4) -> Octonion:
    """Mirrored conjugate operator d0 f - sum_{i>=1} (d_i f) e_i."""
    d = _stencil(f, x, h)
    out = d[0] - np.einsum("ij,jik->k", d[1:], alg.STRUCTURE[:, 1:])
    return Octonion(out)


def richardson(operator, f, x: Octonion, h: float = 1e-4) -> Octonion:
    """Richardson extrapolation of a central-difference operator.

    Combines evaluations at h and h/2 to cancel the h^2 truncation term,
    which plain stencils need for steep kernels such as the Cauchy kernel
    near its pole.
    """
    coarse = operator(f, x, h)
    fine = operator(f, x, h / 2.0)
    return Octonion((4.0 * fine.coords - coarse.coords) / 3.0)


def _coordinate_pair(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    out[..., 0] = x[..., 1]
    out[..., 4] = -x[..., 2]
    return out


def reference_functions(
    pole: Octonion | None = None,
    szego_point: Octonion | None = None,
) -> list[PointFunction]:
    """Test battery of named point functions.

    Includes the eight constants, the linear left-monogenic pair
    f(x) = x1 - x2 e4, its right multiple f e3 (not monogenic), the Cauchy
    kernel shifted to the caller's exterior pole, and sections of the ball
    Szego kernel at the caller's interior point.

    Measured behavior of the kernel sections (central differences plus
    Richardson, residuals below 1e-10): the section in the second argument
    is not left monogenic; it is annihilated by the mirrored conjugate
    operator instead. The section in the first argument is left monogenic,
    so it carries monogenic="left" and the second-argument section carries
    monogenic="no".
    """
    pole = Octonion.from_real(2.0) if pole is None else pole
    szego_point = Octonion(0.3 * Octonion.unit(1).coords) if szego_point is None else szego_point
    pc = pole.coords
    sc = szego_point.coords

    funcs: list[PointFunction] = []
    for i in range(8):
        e = Octonion.unit(i)
        funcs.append(
            PointFunction(
                func=lambda x, e=e: e,
                name="one" if i == 0 else f"const_e{i}",
                monogenic="left",
                array_func=lambda pts, e=e: np.broadcast_to(e.coords, pts.shape).copy(),
            )
        )
    funcs.append(
        PointFunction(
            func=lambda x: Octonion(_coordinate_pair(x.coords)),
            name="coordinate_pair",
            monogenic="left",
            array_func=_coordinate_pair,
        )
    )
    e3 = Octonion.unit(3).coords
    funcs.append(
        PointFunction(
            func=lambda x: Octonion(alg.mul(_coordinate_pair(x.coords), e3)),
            name="coordinate_pair_times_e3",
            monogenic="no",
            array_func=lambda pts: alg.mul(_coordinate_pair(pts), e3),
        )
    )
    funcs.append(
        PointFunction(
            func=lambda x: Octonion(cauchy_kernel_array(x.coords - pc)),
            name="cauchy_kernel_shifted",
            monogenic="left",
            domain=f"x != {pole!r}",
            array_func=lambda pts: cauchy_kernel_array(pts - pc),
        )
    )
    funcs.append(
        PointFunction(
            func=lambda x: Octonion(szego_kernel_ball_array(sc, x.coords)),
            name="ball_szego_section",
            monogenic="no",
            domain="y away from the kernel pole",
            array_func=lambda pts: szego_kernel_ball_array(sc, pts),
        )
    )
    funcs.append(
        PointFunction(
            func=lambda x: Octonion(szego_kernel_ball_array(x.coords, sc)),
            name="ball_szego_section_in_x",
            monogenic="left",
            domain="x away from the kernel pole",
            array_func=lambda pts: szego_kernel_ball_array(pts, sc),
        )
    )
    return funcs
