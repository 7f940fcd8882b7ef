"""Exact octonion arithmetic over numpy coordinate arrays.

Octonions are stored as length-8 float vectors (1, e1, ..., e7). The product
is driven by a signed index table, kept as data rather than code so it can be
validated at import time against the generating relations e4 = e1 e2,
e5 = e1 e3, e6 = e2 e3, e7 = e4 e3.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

__all__ = [
    "Octonion",
    "SIGNED_MUL_TABLE",
    "STRUCTURE",
    "as_coords",
    "mul",
    "conj",
    "norm",
    "inv",
    "dot",
    "assoc",
    "left_mul_matrix",
    "multiply",
    "conjugate",
    "inverse",
    "scalar_product",
    "associator",
    "random_octonions",
    "basis",
]

# Entry [i][j] encodes e_i * e_j = sign(entry) * e_(|entry| - 1); index 0 is
# the real unit.  Data, not code: validated below before first use.
SIGNED_MUL_TABLE = np.array(
    [
        [1, 2, 3, 4, 5, 6, 7, 8],
        [2, -1, 5, 6, -3, -4, -8, 7],
        [3, -5, -1, 7, 2, 8, -4, -6],
        [4, -6, -7, -1, -8, 2, 3, 5],
        [5, 3, -2, 8, -1, -7, 6, -4],
        [6, 4, -8, -2, 7, -1, -5, 3],
        [7, 8, 4, -3, -6, 5, -1, -2],
        [8, -7, 6, -5, 4, -3, 2, -1],
    ],
    dtype=np.int64,
)


def _structure_constants(table: np.ndarray) -> np.ndarray:
    """Expand the signed index table into C[i, j, k] with e_i e_j = sum_k C e_k."""
    c = np.zeros((8, 8, 8))
    idx = np.abs(table) - 1
    sgn = np.sign(table)
    for i in range(8):
        for j in range(8):
            c[i, j, idx[i, j]] = sgn[i, j]
    return c


def _validate_table(table: np.ndarray) -> None:
    """Check the generating relations before the table is trusted.

    Raises ValueError on any violation so a corrupted table cannot be used
    silently.
    """
    if table.shape != (8, 8):
        raise ValueError("multiplication table must be 8x8")
    idx = np.abs(table) - 1
    if idx.min() < 0 or idx.max() > 7:
        raise ValueError("table entries must be signed indices in 1..8")
    for j in range(8):
        if table[0, j] != j + 1 or table[j, 0] != j + 1:
            raise ValueError("the real unit must act as identity")
    for i in range(1, 8):
        if table[i, i] != -1:
            raise ValueError(f"e{i}^2 must equal -1")
        for j in range(1, 8):
            if i != j and table[i, j] != -table[j, i]:
                raise ValueError(f"e{i} e{j} must anticommute")
        if sorted(idx[i].tolist()) != list(range(8)):
            raise ValueError(f"row e{i} must be a signed permutation of the basis")
    generating = {(1, 2): 5, (1, 3): 6, (2, 3): 7, (4, 3): 8}
    for (i, j), signed in generating.items():
        if table[i, j] != signed:
            raise ValueError(f"generating relation e{i} e{j} violated")


_validate_table(SIGNED_MUL_TABLE)

#: C[i, j, k] with e_i e_j = sum_k C[i, j, k] e_k.
STRUCTURE = _structure_constants(SIGNED_MUL_TABLE)


def _coords(x) -> np.ndarray:
    if isinstance(x, Octonion):
        return x._c
    a = np.asarray(x, dtype=float)
    if a.ndim == 0:
        out = np.zeros(8)
        out[0] = a
        return out
    if a.shape[-1] != 8:
        raise ValueError("octonion coordinate arrays must have trailing length 8")
    return a


#: Public name for coercing Octonion or array-like input to coordinates.
def as_coords(x) -> np.ndarray:
    return _coords(x)


def mul(a, b) -> np.ndarray:
    """Octonion product on (..., 8) coordinate arrays, broadcasting like numpy."""
    a = _coords(a)
    b = _coords(b)
    return np.einsum("...i,...j,ijk->...k", a, b, STRUCTURE)


def conj(a) -> np.ndarray:
    """Octonion conjugate: negate the seven imaginary coordinates."""
    a = _coords(a)
    out = -a.copy()
    out[..., 0] = a[..., 0]
    return out


def norm(a) -> np.ndarray:
    """Euclidean norm of the coordinate vector(s)."""
    return np.linalg.norm(_coords(a), axis=-1)


def dot(a, b) -> np.ndarray:
    """Real scalar product sum_i a_i b_i, equal to Re(a conj(b))."""
    return np.sum(_coords(a) * _coords(b), axis=-1)


def inv(a) -> np.ndarray:
    """Multiplicative inverse conj(a) / |a|^2."""
    a = _coords(a)
    n2 = np.sum(a * a, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise DomainError("division by zero octonion")
    return conj(a) / n2


def assoc(a, b, c) -> np.ndarray:
    """Associator (a b) c - a (b c); identically zero only on associative triples."""
    return mul(mul(a, b), c) - mul(a, mul(b, c))


def left_mul_matrix(a) -> np.ndarray:
    """Real 8x8 matrix L with L @ vec(b) = vec(a b); column j is vec(a e_j)."""
    a = _coords(a)
    return np.einsum("...i,ijk->...kj", a, STRUCTURE)


class Octonion:
    """Immutable octonion wrapping an 8-vector of float coordinates."""

    __slots__ = ("_c",)

    def __init__(self, coords):
        c = np.array(coords, dtype=float).reshape(8)
        c.setflags(write=False)
        object.__setattr__(self, "_c", c)

    @classmethod
    def zero(cls) -> "Octonion":
        return cls(np.zeros(8))

    @classmethod
    def one(cls) -> "Octonion":
        return cls.from_real(1.0)

    @classmethod
    def from_real(cls, t: float) -> "Octonion":
        c = np.zeros(8)
        c[0] = t
        return cls(c)

    @classmethod
    def unit(cls, i: int) -> "Octonion":
        """Basis element: unit(0) is the real unit, unit(i) is e_i."""
        if not 0 <= i <= 7:
            raise ValueError("basis index must be in 0..7")
        c = np.zeros(8)
        c[i] = 1.0
        return cls(c)

    @property
    def coords(self) -> np.ndarray:
        return self._c

    @property
    def real(self) -> float:
        return float(self._c[0])

    def conj(self) -> "Octonion":
        return Octonion(conj(self._c))

    def norm(self) -> float:
        return float(np.linalg.norm(self._c))

    def inverse(self) -> "Octonion":
        return Octonion(inv(self._c))

    def __add__(self, other):
        return Octonion(self._c + _coerce(other)._c)

    __radd__ = __add__

    def __sub__(self, other):
        return Octonion(self._c - _coerce(other)._c)

    def __rsub__(self, other):
        return Octonion(_coerce(other)._c - self._c)

    def __neg__(self):
        return Octonion(-self._c)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Octonion(self._c * other)
        return Octonion(mul(self._c, _coerce(other)._c))

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Octonion(self._c * other)
        return Octonion(mul(_coerce(other)._c, self._c))

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            if other == 0:
                raise DomainError("division by zero octonion")
            return Octonion(self._c / other)
        return Octonion(mul(self._c, inv(_coerce(other)._c)))

    def __rtruediv__(self, other):
        return Octonion(mul(_coerce(other)._c, inv(self._c)))

    def __abs__(self) -> float:
        return self.norm()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float)):
            other = Octonion.from_real(other)
        if not isinstance(other, Octonion):
            return NotImplemented
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self) -> str:
        terms = []
        for i, v in enumerate(self._c):
            if v == 0.0:
                continue
            label = "" if i == 0 else f" e{i}"
            sign = "-" if v < 0 else "+"
            terms.append((sign, f"{abs(v):g}{label}"))
        if not terms:
            return "Octonion(0)"
        head_sign, head = terms[0]
        body = ("-" if head_sign == "-" else "") + head
        for sign, term in terms[1:]:
            body += f" {sign} {term}"
        return f"Octonion({body})"

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return bool(np.linalg.norm(self._c - _coerce(other)._c) <= tol)


def _coerce(x) -> Octonion:
    if isinstance(x, Octonion):
        return x
    if isinstance(x, (int, float)):
        return Octonion.from_real(float(x))
    return Octonion(x)


def basis() -> list[Octonion]:
    """The eight basis octonions 1, e1, ..., e7."""
    return [Octonion.unit(i) for i in range(8)]


def multiply(a: Octonion, b: Octonion) -> Octonion:
    """Product of two octonions."""
    return _coerce(a) * _coerce(b)


def conjugate(a: Octonion) -> Octonion:
    """Conjugate of an octonion."""
    return _coerce(a).conj()


def inverse(a: Octonion) -> Octonion:
    """Inverse; raises DomainError for the zero octonion."""
    return _coerce(a).inverse()


def scalar_product(a: Octonion, b: Octonion) -> float:
    """Real scalar product of the coordinate vectors."""
    return float(dot(_coerce(a)._c, _coerce(b)._c))


def associator(a: Octonion, b: Octonion, c: Octonion) -> Octonion:
    """Associator (a b) c - a (b c)."""
    return Octonion(assoc(_coerce(a)._c, _coerce(b)._c, _coerce(c)._c))


def random_octonions(rng: np.random.Generator, shape=(), scale: float = 1.0) -> np.ndarray:
    """Standard-normal coordinate draws with the given leading shape."""
    if isinstance(shape, int):
        shape = (shape,)
    return scale * rng.standard_normal(tuple(shape) + (8,))
