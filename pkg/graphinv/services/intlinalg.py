"""Exact integer linear algebra on sympy ``DomainMatrix`` over ``ZZ``.

Matrices are immutable ``IntMatrix`` values backed by a cached domain matrix.
The Smith normal form comes from sympy with unimodular ``U``, ``V`` (and their
inverses) satisfying ``U * A * V = D``; the certificate and the divisibility
chain are checked on every call.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from graphinv.errors import check
from graphinv.metrics import SNF_TOTAL

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        check(len(self.entries) == self.rows, "row count mismatch", rows=self.rows)
        check(
            all(len(r) == self.cols for r in self.entries),
            "column count mismatch",
            cols=self.cols,
        )

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        data = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(rows, len(columns), data)

    @classmethod
    def from_domain(cls, dm: DomainMatrix) -> "IntMatrix":
        rows, cols = dm.shape
        return cls.from_rows(dm.to_list(), cols) if rows else cls.zeros(0, cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @cached_property
    def domain_matrix(self) -> DomainMatrix:
        if not (self.rows and self.cols):
            return DomainMatrix.zeros((self.rows, self.cols), ZZ)
        return DomainMatrix([[ZZ(x) for x in r] for r in self.entries], (self.rows, self.cols), ZZ)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def apply(self, vector: Sequence[int]) -> Vector:
        check(len(vector) == self.cols, "vector length mismatch", cols=self.cols)
        return tuple(sum(a * x for a, x in zip(r, vector)) for r in self.entries)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        check(self.cols == other.rows, "shape mismatch in product")
        if not (self.rows and self.cols and other.cols):
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix.from_domain(self.domain_matrix.matmul(other.domain_matrix))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        check((self.rows, self.cols) == (other.rows, other.cols), "shape mismatch in sum")
        if not (self.rows and self.cols):
            return self
        return IntMatrix.from_domain(self.domain_matrix + other.domain_matrix)

    def __neg__(self) -> "IntMatrix":
        if not (self.rows and self.cols):
            return self
        return IntMatrix.from_domain(-self.domain_matrix)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def hstack(*blocks: IntMatrix, rows: int | None = None) -> IntMatrix:
    """Concatenate matrices with equal row counts side by side."""
    if rows is None:
        rows = blocks[0].rows if blocks else 0
    columns = [c for b in blocks for c in b.columns()]
    return IntMatrix.from_columns(columns, rows)


def block_diagonal(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    columns = []
    offset = 0
    for b in blocks:
        for c in b.columns():
            columns.append((0,) * offset + c + (0,) * (rows - offset - b.rows))
        offset += b.rows
    return IntMatrix.from_columns(columns, rows)


@dataclass(frozen=True)
class SmithForm:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix
    diagonal: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _unimodular_inverse(u: DomainMatrix) -> IntMatrix:
    # integral because det(u) = +-1; convert_to(ZZ) fails otherwise
    return IntMatrix.from_domain(u.convert_to(QQ).inv().convert_to(ZZ))


@lru_cache(maxsize=4096)
def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Smith normal form with unimodular certificates."""
    SNF_TOTAL.inc()
    m, n = a.rows, a.cols
    if not (m and n):
        eye_m, eye_n = IntMatrix.identity(m), IntMatrix.identity(n)
        return SmithForm(eye_m, IntMatrix.zeros(m, n), eye_n, eye_m, eye_n, ())

    d, s, t = smith_normal_decomp(a.domain_matrix)
    diagonal_form = IntMatrix.from_domain(d)
    form = SmithForm(
        U=IntMatrix.from_domain(s),
        D=diagonal_form,
        V=IntMatrix.from_domain(t),
        U_inv=_unimodular_inverse(s),
        V_inv=_unimodular_inverse(t),
        diagonal=tuple(x for x in (diagonal_form[k, k] for k in range(min(m, n))) if x),
    )
    check(form.U @ a @ form.V == form.D, "Smith certificate does not reproduce D", rows=m, cols=n)
    check(
        all(x > 0 for x in form.diagonal)
        and all(y % x == 0 for x, y in zip(form.diagonal, form.diagonal[1:]))
        and all(form.D[k, k] == 0 for k in range(form.rank, min(m, n))),
        "invariant factors do not form a divisibility chain",
        diagonal=list(form.diagonal),
    )
    logger.debug("snf_computed", extra={"rows": m, "cols": n, "rank": form.rank})
    return form


def solve(a: IntMatrix, b: Sequence[int]) -> Vector | None:
    """Some integer y with a * y = b, or None when no integer solution exists."""
    form = smith_normal_form(a)
    c = form.U.apply(b)
    z = [0] * a.cols
    for k, d in enumerate(form.diagonal):
        if c[k] % d:
            return None
        z[k] = c[k] // d
    if any(c[k] for k in range(form.rank, a.rows)):
        return None
    return form.V.apply(z)


def hermite_basis(vectors: Iterable[Sequence[int]], dim: int) -> list[Vector]:
    """Canonical basis of the lattice spanned by ``vectors``.

    Each basis vector leads with a positive pivot, pivots move right along the
    list, and every other vector's entry at a pivot position lies in
    [0, pivot), so equal lattices give equal bases.
    """
    spanning = [tuple(v) for v in vectors if any(v)]
    if not spanning:
        return []
    # sympy pivots on the last row of each column; reversing the coordinates
    # turns those into leading pivots
    columns = IntMatrix.from_columns([v[::-1] for v in spanning], dim)
    hnf = IntMatrix.from_domain(hermite_normal_form(columns.domain_matrix))
    return [c[::-1] for c in reversed(hnf.columns())]


def kernel_basis(a: IntMatrix) -> list[Vector]:
    """Canonical Z-basis of {y : a * y = 0}.

    The trailing columns of V span the kernel over Z, not only over Q.
    """
    form = smith_normal_form(a)
    spanning = [form.V.column(j) for j in range(form.rank, a.cols)]
    return hermite_basis(spanning, a.cols)


def image_rank(a: IntMatrix) -> int:
    return smith_normal_form(a).rank


def det(a: IntMatrix) -> int:
    check(a.rows == a.cols, "determinant of a non-square matrix")
    if a.rows == 0:
        return 1
    return int(a.domain_matrix.det())
