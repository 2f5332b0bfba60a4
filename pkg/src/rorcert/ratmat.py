"""Dense matrices over the field of rational functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .exactalg import RatFunc, ZeroDivisorError
from .stablering import StabilityVerdict, in_S

__all__ = [
    "DimensionError",
    "RatMat",
    "SingularMatrixError",
    "block",
    "mat_det",
    "mat_inv",
    "mat_is_stable",
    "scalar_mul",
]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ZeroDivisorError):
    """Inverse requested for a matrix with zero determinant."""


def _rf(x) -> RatFunc:
    return x if isinstance(x, RatFunc) else RatFunc._lift(x)


@dataclass(frozen=True)
class RatMat:
    rows: int
    cols: int
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMat":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, tuple(_rf(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMat":
        z = RatFunc(0)
        return cls(rows, cols, (z,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMat":
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "RatMat":
        n = len(values)
        z = RatFunc(0)
        ent = [z] * (n * n)
        for i, v in enumerate(values):
            ent[i * n + i] = _rf(v)
        return cls(n, n, tuple(ent))

    @classmethod
    def build(cls, rows: int, cols: int, fn: Callable[[int, int], RatFunc]) -> "RatMat":
        return cls(rows, cols, tuple(_rf(fn(i, j)) for i in range(rows) for j in range(cols)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> RatFunc:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[RatFunc]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def items(self) -> Iterable[tuple[tuple[int, int], RatFunc]]:
        for k, e in enumerate(self.entries):
            yield divmod(k, self.cols), e

    def map(self, fn: Callable[[RatFunc], RatFunc]) -> "RatMat":
        return RatMat(self.rows, self.cols, tuple(fn(e) for e in self.entries))

    def T(self) -> "RatMat":
        return RatMat.build(self.cols, self.rows, lambda i, j: self[j, i])

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "RatMat":
        return RatMat.build(r1 - r0, c1 - c0, lambda i, j: self[r0 + i, c0 + j])

    # -- arithmetic ---------------------------------------------------------

    def _same_shape(self, other: "RatMat", what: str) -> None:
        if self.shape != other.shape:
            raise DimensionError(f"cannot {what} {self.shape} and {other.shape}")

    def __add__(self, other: "RatMat") -> "RatMat":
        self._same_shape(other, "add")
        return RatMat(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMat") -> "RatMat":
        self._same_shape(other, "subtract")
        return RatMat(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMat":
        return self.map(lambda e: -e)

    def __matmul__(self, other: "RatMat") -> "RatMat":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            arow = self.row(i)
            for j in range(other.cols):
                acc = RatFunc(0)
                for k in range(self.cols):
                    a = arow[k]
                    if a:
                        b = other.entries[k * other.cols + j]
                        if b:
                            acc = acc + a * b
                out.append(acc)
        return RatMat(self.rows, other.cols, tuple(out))

    def __mul__(self, other):
        if isinstance(other, RatMat):
            return self @ other
        return scalar_mul(_rf(other), self)

    def __rmul__(self, other):
        return scalar_mul(_rf(other), self)

    def __str__(self):
        width = max((len(str(e)) for e in self.entries), default=1)
        lines = ["[" + ", ".join(str(e).rjust(width) for e in self.row(i)) + "]" for i in range(self.rows)]
        return "\n".join(lines)


def block(blocks: Sequence[Sequence[RatMat]]) -> RatMat:
    """Assemble a block matrix from a grid of conformable blocks."""
    heights = [row[0].rows for row in blocks]
    widths = [b.cols for b in blocks[0]]
    for r, row in enumerate(blocks):
        if len(row) != len(widths):
            raise DimensionError("ragged block grid")
        for c, b in enumerate(row):
            if b.shape != (heights[r], widths[c]):
                raise DimensionError(f"block ({r},{c}) has shape {b.shape}")
    rows = []
    for r, row in enumerate(blocks):
        for i in range(heights[r]):
            line = []
            for b in row:
                line.extend(b.row(i))
            rows.append(line)
    return RatMat(sum(heights), sum(widths), tuple(x for line in rows for x in line))


def scalar_mul(f: RatFunc, A: RatMat) -> RatMat:
    return A.map(lambda e: f * e)


def _eliminate(A: RatMat, rhs: RatMat | None):
    """Gauss-Jordan over F(S).  Returns (det, solution or None)."""
    if A.rows != A.cols:
        raise DimensionError(f"square matrix required, got {A.shape}")
    n = A.rows
    M = A.to_rows()
    R = rhs.to_rows() if rhs is not None else None
    det = RatFunc(1)
    for c in range(n):
        # prefer the simplest nonzero pivot to keep degrees down
        cands = [r for r in range(c, n) if M[r][c]]
        if not cands:
            return RatFunc(0), None
        p = min(cands, key=lambda r: (M[r][c].num.degree + M[r][c].den.degree, r))
        if p != c:
            M[c], M[p] = M[p], M[c]
            if R is not None:
                R[c], R[p] = R[p], R[c]
            det = -det
        piv = M[c][c]
        det = det * piv
        inv = piv.inverse()
        M[c] = [e * inv for e in M[c]]
        if R is not None:
            R[c] = [e * inv for e in R[c]]
        for r in range(n):
            if r == c or not M[r][c]:
                continue
            f = M[r][c]
            M[r] = [a - f * b for a, b in zip(M[r], M[c])]
            if R is not None:
                R[r] = [a - f * b for a, b in zip(R[r], R[c])]
    return det, R


def mat_det(A: RatMat) -> RatFunc:
    if A.rows != A.cols:
        raise DimensionError(f"determinant of non-square {A.shape} matrix")
    n = A.rows
    if n == 0:
        return RatFunc(1)
    if n == 1:
        return A.entries[0]
    if n == 2:
        return A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    return _eliminate(A, None)[0]


def mat_inv(A: RatMat) -> RatMat:
    if A.rows != A.cols:
        raise DimensionError(f"inverse of non-square {A.shape} matrix")
    n = A.rows
    if n == 1:
        if A.entries[0].is_zero():
            raise SingularMatrixError("singular 1x1 matrix")
        return RatMat(1, 1, (A.entries[0].inverse(),))
    if n == 2:
        d = mat_det(A)
        if d.is_zero():
            raise SingularMatrixError("singular 2x2 matrix")
        di = d.inverse()
        a, b, c, e = A.entries
        return RatMat(2, 2, (e * di, -b * di, -c * di, a * di))
    det, sol = _eliminate(A, RatMat.identity(n))
    if sol is None:
        raise SingularMatrixError(f"singular {n}x{n} matrix")
    return RatMat.from_rows(sol)


def mat_is_stable(A: RatMat) -> tuple[bool, list[tuple[tuple[int, int], StabilityVerdict]]]:
    """Entrywise membership in S; returns the failing ``(index, verdict)`` pairs."""
    failures = []
    for ij, e in A.items():
        v = in_S(e)
        if not v.stable:
            failures.append((ij, v))
    return not failures, failures
