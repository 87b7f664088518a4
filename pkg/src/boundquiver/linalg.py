"""Exact linear algebra over the rationals and prime fields.

Matrices act on row vectors: a map ``V -> W`` with ``dim V = m`` and
``dim W = n`` is an ``m x n`` matrix and ``x |-> x @ A``.  This matches the
right-module convention used throughout the package, where a path ``a*b``
acts as ``A @ B``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2


class Field:
    """Base class for the two supported exact fields."""

    characteristic: int = 0
    name: str = ""

    def __call__(self, value):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text: str):
        if "/" in text:
            num, den = text.split("/", 1)
            return self(int(num)) / self(int(den))
        return self(int(text))

    def fmt(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class Rationals(Field):
    characteristic = 0
    name = "QQ"

    def __call__(self, value):
        if isinstance(value, Fraction):
            return gmpy2.mpq(value.numerator, value.denominator)
        return gmpy2.mpq(value)

    def fmt(self, x) -> str:
        x = gmpy2.mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"


class ModP:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> int:
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError("mixing elements of different prime fields")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other) % self.p
        if o == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return ModP(self._coerce(other), self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pow__(self, n: int):
        return ModP(pow(self.v, n, self.p), self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __str__(self):
        return str(self.v)

    __repr__ = __str__


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.name = f"Fp({p})"

    def __call__(self, value):
        if isinstance(value, ModP):
            return value
        if isinstance(value, Fraction):
            return ModP(value.numerator, self.characteristic) / value.denominator
        return ModP(int(value), self.characteristic)


QQ = Rationals()


def field_from_name(name: str) -> Field:
    if name == "QQ":
        return QQ
    if name.startswith("Fp(") and name.endswith(")"):
        return PrimeField(int(name[3:-1]))
    raise ValueError(f"unknown field {name!r}")


class Mat:
    """Dense matrix over an exact field that remembers its shape."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows: list | None = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = field.zero
            rows = [[z] * ncols for _ in range(nrows)]
        self.rows = rows

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Mat":
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        m = cls(field, n, n)
        one = field.one
        for i in range(n):
            m.rows[i][i] = one
        return m

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> "Mat":
        rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(field, len(rows), ncols, rows)

    def copy(self) -> "Mat":
        return Mat(self.field, self.nrows, self.ncols, [list(r) for r in self.rows])

    # arithmetic ---------------------------------------------------------
    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        z = self.field.zero
        n = other.ncols
        out = []
        orows = other.rows
        for r in self.rows:
            acc = [z] * n
            for k, a in enumerate(r):
                if a:
                    ok = orows[k]
                    for j in range(n):
                        b = ok[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Mat(self.field, self.nrows, n, out)

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.field, self.nrows, self.ncols,
                   [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.field, self.nrows, self.ncols,
                   [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        return Mat(self.field, self.nrows, self.ncols, [[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Mat":
        return Mat(self.field, self.nrows, self.ncols, [[c * a for a in r] for r in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    __hash__ = None  # type: ignore[assignment]

    def _same_shape(self, other: "Mat") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self.ncols, self.nrows,
                   [list(col) for col in zip(*self.rows)] if self.nrows else
                   [[] for _ in range(self.ncols)])

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def row(self, i: int) -> "Mat":
        return Mat(self.field, 1, self.ncols, [list(self.rows[i])])

    def select_rows(self, idx: Iterable[int]) -> "Mat":
        idx = list(idx)
        return Mat(self.field, len(idx), self.ncols, [list(self.rows[i]) for i in idx])

    def select_cols(self, idx: Iterable[int]) -> "Mat":
        idx = list(idx)
        return Mat(self.field, self.nrows, len(idx), [[r[j] for j in idx] for r in self.rows])

    def vstack(self, other: "Mat") -> "Mat":
        if self.ncols != other.ncols:
            raise ValueError("vstack column mismatch")
        return Mat(self.field, self.nrows + other.nrows, self.ncols,
                   [list(r) for r in self.rows] + [list(r) for r in other.rows])

    def hstack(self, other: "Mat") -> "Mat":
        if self.nrows != other.nrows:
            raise ValueError("hstack row mismatch")
        return Mat(self.field, self.nrows, self.ncols + other.ncols,
                   [list(r) + list(s) for r, s in zip(self.rows, other.rows)])

    def flat(self) -> list:
        return [a for r in self.rows for a in r]

    def trace(self):
        t = self.field.zero
        for i in range(min(self.nrows, self.ncols)):
            t = t + self.rows[i][i]
        return t

    # elimination --------------------------------------------------------
    def rref(self) -> tuple["Mat", list[int]]:
        rows = [list(r) for r in self.rows]
        pivots: list[int] = []
        pr = 0
        n = self.ncols
        for c in range(n):
            if pr == len(rows):
                break
            sel = next((i for i in range(pr, len(rows)) if rows[i][c]), None)
            if sel is None:
                continue
            rows[pr], rows[sel] = rows[sel], rows[pr]
            piv = rows[pr]
            inv = self.field.one / piv[c]
            if piv[c] != 1:
                piv = [a * inv for a in piv]
                rows[pr] = piv
            for i in range(len(rows)):
                if i != pr:
                    f = rows[i][c]
                    if f:
                        ri = rows[i]
                        rows[i] = [a - f * b if b else a for a, b in zip(ri, piv)]
            pivots.append(c)
            pr += 1
        return Mat(self.field, len(rows), n, rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def row_basis(self) -> "Mat":
        """Nonzero rows of the reduced echelon form (a basis of the row space)."""
        r, piv = self.rref()
        return Mat(self.field, len(piv), self.ncols, r.rows[: len(piv)])

    def right_kernel(self) -> "Mat":
        """Rows z spanning ``{z : self @ z^T = 0}``."""
        r, piv = self.rref()
        pivset = set(piv)
        free = [c for c in range(self.ncols) if c not in pivset]
        z, one = self.field.zero, self.field.one
        out = []
        for f in free:
            v = [z] * self.ncols
            v[f] = one
            for i, p in enumerate(piv):
                a = r.rows[i][f]
                if a:
                    v[p] = -a
            out.append(v)
        return Mat(self.field, len(out), self.ncols, out)

    def left_kernel(self) -> "Mat":
        """Rows x spanning ``{x : x @ self = 0}``."""
        return self.T.right_kernel()

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "Mat":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug, piv = self.hstack(Mat.identity(self.field, n)).rref()
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return aug.select_cols(range(n, 2 * n))

    def solve_left(self, b: "Mat") -> "Mat":
        """Return C with ``C @ self == b``; ``self`` must have independent rows."""
        k = self.nrows
        if k == 0:
            if not b.is_zero():
                raise ValueError("vector not in the span")
            return Mat(self.field, b.nrows, 0)
        _, piv = self.rref()
        if len(piv) != k:
            raise ValueError("solve_left needs independent rows")
        sq = self.select_cols(piv)
        c = b.select_cols(piv) @ sq.inverse()
        if c @ self != b:
            raise ValueError("vector not in the span")
        return c

    def solve_any_left(self, b: "Mat") -> "Mat":
        """Some C with ``C @ self == b``; rows of ``self`` may be dependent."""
        r, piv = self.T.hstack(b.T).rref()
        n = self.nrows
        if any(p >= n for p in piv):
            raise ValueError("vector not in the span")
        z = self.field.zero
        out = [[z] * n for _ in range(b.nrows)]
        for i, p in enumerate(piv):
            for k in range(b.nrows):
                out[k][p] = r.rows[i][n + k]
        return Mat(self.field, b.nrows, n, out)

    def extend_to_basis(self) -> "Mat":
        """Rows completing the (independent) rows of self to a basis of K^n.

        Completion vectors are standard unit vectors chosen greedily.
        """
        n = self.ncols
        r, piv = self.rref()
        pivset = set(piv)
        one = self.field.one
        out = []
        for c in range(n):
            if c not in pivset:
                v = [self.field.zero] * n
                v[c] = one
                out.append(v)
        return Mat(self.field, len(out), n, out)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.fmt(a) for a in r) for r in self.rows)
        return f"Mat{self.shape}[{body}]"


def block_diag(field: Field, blocks: Sequence[Mat]) -> Mat:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    out = Mat(field, nr, nc)
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            out.rows[r0 + i][c0: c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return out
