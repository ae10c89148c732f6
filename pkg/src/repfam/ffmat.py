"""Dense linear algebra over prime fields.

Matrices are numpy arrays. When the modulus is below 2**31 every product of
two reduced entries fits in int64, so the fast path uses int64 arrays.
Larger moduli fall back to object arrays holding Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MERSENNE61 = (1 << 61) - 1
MERSENNE31 = (1 << 31) - 1
DEFAULT_MODULUS = MERSENNE61
INT64_MAX = (1 << 63) - 1

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DimensionError(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    c = max(2, n + 1)
    while not is_prime(c):
        c += 1
    return c


@dataclass(frozen=True)
class PrimeField:
    modulus: int = DEFAULT_MODULUS

    def __post_init__(self):
        m = self.modulus
        if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
            raise TypeError("modulus must be an integer")
        if m >= (1 << 61) or not is_prime(int(m)):
            raise ValueError(f"modulus {m} is not a prime below 2**61")
        object.__setattr__(self, "modulus", int(m))

    @property
    def dtype(self):
        return np.int64 if self.modulus < (1 << 31) else object

    def inv(self, a: int) -> int:
        a = int(a) % self.modulus
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.modulus - 2, self.modulus)

    def asarray(self, data) -> np.ndarray:
        """Reduce an integer array-like into this field's working dtype."""
        arr = np.asarray(data, dtype=object)
        if arr.size:
            arr = np.asarray(np.frompyfunc(lambda x: int(x) % self.modulus, 1, 1)(arr), dtype=object)
        return arr.astype(self.dtype)

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is np.int64:
            return np.zeros(shape, dtype=np.int64)
        z = np.empty(shape, dtype=object)
        z.fill(0)
        return z


SMALL_FIELD = PrimeField(MERSENNE31)
BIG_FIELD = PrimeField(MERSENNE61)


class PrimeFieldMatrix:
    """Immutable dense matrix over a prime field."""

    __slots__ = ("_a", "field")

    def __init__(self, entries, field: PrimeField | None = None, *, _trusted: bool = False):
        self.field = field or BIG_FIELD
        if _trusted:
            a = entries
        else:
            a = self.field.asarray(entries)
            if a.ndim == 1 and a.size == 0:
                a = a.reshape(0, 0)
        if a.ndim != 2:
            raise DimensionError("matrix entries must be two-dimensional")
        a.flags.writeable = False
        self._a = a

    @classmethod
    def _wrap(cls, a: np.ndarray, field: PrimeField) -> "PrimeFieldMatrix":
        return cls(a, field, _trusted=True)

    @classmethod
    def identity(cls, k: int, field: PrimeField | None = None):
        field = field or BIG_FIELD
        a = field.zeros((k, k))
        for i in range(k):
            a[i, i] = 1
        return cls._wrap(a, field)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self):
        return self._a.shape

    def tolist(self):
        return [[int(x) for x in row] for row in self._a]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PrimeFieldMatrix":
        a = self._a[np.ix_(list(rows), list(cols))] if len(rows) and len(cols) else self.field.zeros((len(rows), len(cols)))
        return PrimeFieldMatrix._wrap(np.array(a), self.field)

    def __matmul__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise DimensionError("inner dimensions differ")
        return PrimeFieldMatrix._wrap(matmul(self._a, other._a, self.field.modulus), self.field)

    def __eq__(self, other):
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.tolist() == other.tolist()

    def __hash__(self):
        return hash((self.field.modulus, self.shape, tuple(map(tuple, self.tolist()))))

    def __repr__(self):
        return f"PrimeFieldMatrix({self.tolist()}, P={self.field.modulus})"


def matmul(a: np.ndarray, b: np.ndarray, P: int) -> np.ndarray:
    if a.dtype == object or b.dtype == object or P >= (1 << 31):
        return (a.astype(object) @ b.astype(object)) % P
    # split b so partial sums stay below 2**63
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = max(1, ((1 << 62) // ((P - 1) * (P - 1) + 1)))
    for s in range(0, a.shape[1], step):
        out = (out + a[:, s:s + step] @ b[s:s + step]) % P
    return out


def _as_array(M) -> tuple[np.ndarray, int]:
    if isinstance(M, PrimeFieldMatrix):
        return M.array, M.field.modulus
    raise TypeError("expected a PrimeFieldMatrix")


def echelon(a: np.ndarray, P: int, reduced: bool = False) -> tuple[np.ndarray, list[int]]:
    """Row echelon form of a copy of ``a``; returns (matrix, pivot columns).

    Pivot rows are chosen as the first nonzero entry at or below the current
    row, so results are deterministic.
    """
    a = np.array(a, copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), P - 2, P)
        a[r, c:] = a[r, c:] * inv % P
        lo = 0 if reduced else r + 1
        idx = np.flatnonzero(a[lo:, c] != 0) + lo
        idx = idx[idx != r]
        if idx.size:
            f = a[idx, c:c + 1]
            a[np.ix_(idx, np.arange(c, cols))] = (a[idx, c:] - f * a[r, c:]) % P
        pivots.append(c)
        r += 1
    return a, pivots


def det(M: PrimeFieldMatrix) -> int:
    a, P = _as_array(M)
    n, m = a.shape
    if n != m:
        raise DimensionError(f"det of non-square {n}x{m} matrix")
    a = np.array(a, copy=True)
    d = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c] != 0)
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            a[[c, i]] = a[[i, c]]
            d = -d
        piv = int(a[c, c])
        d = d * piv % P
        if c + 1 < n:
            inv = pow(piv, P - 2, P)
            f = a[c + 1:, c:c + 1] * inv % P
            a[c + 1:, c:] = (a[c + 1:, c:] - f * a[c, c:]) % P
    return d % P


def minor_det(M: PrimeFieldMatrix, I: Iterable[int], J: Iterable[int]) -> int:
    I, J = list(I), list(J)
    if len(I) != len(J):
        raise DimensionError("row and column index sets differ in size")
    if not I:
        return 1
    for i in I:
        if not 0 <= i < M.rows:
            raise IndexError(f"row index {i} out of range")
    for j in J:
        if not 0 <= j < M.cols:
            raise IndexError(f"column index {j} out of range")
    return det(M.submatrix(I, J))


def rank(M: PrimeFieldMatrix) -> int:
    a, P = _as_array(M)
    if a.size == 0:
        return 0
    return len(echelon(a, P)[1])


def rank_of_columns(M: PrimeFieldMatrix, cols: Sequence[int]) -> int:
    cols = list(cols)
    if not cols or M.rows == 0:
        return 0
    a, P = _as_array(M)
    return len(echelon(a[:, cols], P)[1])


def rref(M: PrimeFieldMatrix) -> tuple[PrimeFieldMatrix, list[int]]:
    a, P = _as_array(M)
    r, piv = echelon(a, P, reduced=True)
    return PrimeFieldMatrix._wrap(r, M.field), piv


def checked_sum(values: Iterable[int]) -> int:
    """Sum of non-negative integers, refusing to leave the int64 range."""
    s = 0
    for v in values:
        s += int(v)
        if s > INT64_MAX:
            raise OverflowError("weight sum exceeds 64-bit range")
    return s


def greedy_order(weights: Sequence[int], sense: str = "min") -> list[int]:
    """Indices sorted by weight (ascending for min, descending for max), ties by index."""
    if sense == "min":
        return sorted(range(len(weights)), key=lambda i: (weights[i], i))
    if sense == "max":
        return sorted(range(len(weights)), key=lambda i: (-weights[i], i))
    raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")


def column_basis_in_order(a: np.ndarray, P: int, order: Sequence[int]) -> list[int]:
    """Greedy basis: scan columns in ``order``, keep those that raise the rank."""
    if a.shape[0] == 0 or not len(order):
        return []
    _, piv = echelon(a[:, list(order)], P)
    return [order[c] for c in piv]


def weighted_column_basis(M: PrimeFieldMatrix, w: Sequence[int], sense: str = "min") -> list[int]:
    """Optimal-weight column basis via the matroid greedy algorithm.

    Returns the chosen column indices in ascending order.
    """
    if len(w) != M.cols:
        raise DimensionError("one weight per column required")
    for x in w:
        if int(x) < 0:
            raise ValueError("weights must be non-negative")
    a, P = _as_array(M)
    order = greedy_order([int(x) for x in w], sense)
    return sorted(column_basis_in_order(a, P, order))
