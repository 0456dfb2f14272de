"""Dense exact rational linear algebra: RREF, kernels, solving, symmetric LDL.

Scalars are GMP rationals when gmpy2 is available (it is ~3x faster on the
166x166 Gram eliminations) and ``fractions.Fraction`` otherwise.  Matrices are
dense; the largest ones here are 166x166, where simplicity beats sparsity.
All operations normalise to lowest terms implicitly via the scalar type, and
nothing ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

Q0 = QQ(0)
Q1 = QQ(1)


def qq(value, denom=None) -> "QQ":
    """Coerce to the rational scalar type; accepts ``"p/q"`` strings."""
    if denom is not None:
        return QQ(value) / QQ(denom)
    if isinstance(value, str):
        if "/" in value:
            num, den = value.split("/")
            return QQ(int(num)) / QQ(int(den))
        return QQ(int(value))
    return QQ(value)


def qstr(value) -> str:
    """Canonical ``"p/q"`` (or ``"p"``) serialization."""
    s = str(QQ(value))
    return s


class QMatrix:
    """Dense rational matrix, row-major list of lists."""

    __slots__ = ("data",)

    def __init__(self, data):
        self.data = [[QQ(x) for x in row] for row in data]
        if self.data and any(len(r) != len(self.data[0]) for r in self.data):
            raise ValueError("ragged rows")

    @staticmethod
    def zeros(rows: int, cols: int) -> "QMatrix":
        return QMatrix([[Q0] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "QMatrix":
        m = QMatrix.zeros(n, n)
        for i in range(n):
            m.data[i][i] = Q1
        return m

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    def copy(self) -> "QMatrix":
        return QMatrix([row[:] for row in self.data])

    def transpose(self) -> "QMatrix":
        return QMatrix([list(col) for col in zip(*self.data)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.data == other.data

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        bt = list(zip(*other.data))
        return QMatrix(
            [[_dot(row, col) for col in bt] for row in self.data]
        )

    def mulvec(self, v):
        if self.cols != len(v):
            raise ValueError("dimension mismatch")
        return [_dot(row, v) for row in self.data]

    def is_symmetric(self) -> bool:
        return all(
            self.data[i][j] == self.data[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def to_json(self):
        return [[qstr(x) for x in row] for row in self.data]

    @staticmethod
    def from_json(rows) -> "QMatrix":
        return QMatrix([[qq(x) for x in row] for row in rows])


def _dot(u, v):
    total = Q0
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def rref(m: QMatrix) -> tuple[QMatrix, tuple[int, ...], int]:
    """Reduced row echelon form with deterministic pivoting.

    The pivot is always the first row with a nonzero entry in the leftmost
    unfinished column.  Returns (R, pivot_columns, rank).
    """
    a = [row[:] for row in m.data]
    n_rows, n_cols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = Q1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c]:
                f = a[i][c]
                ar = a[r]
                a[i] = [x - f * y for x, y in zip(a[i], ar)]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return QMatrix(a), tuple(pivots), r


def rank(m: QMatrix) -> int:
    return rref(m)[2]


def kernel_basis(m: QMatrix) -> list[list]:
    """Basis of the right kernel, one vector per free column of the RREF."""
    red, pivots, rk = rref(m)
    n_cols = m.cols
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Q0] * n_cols
        v[fc] = Q1
        for r_idx, pc in enumerate(pivots):
            v[pc] = -red.data[r_idx][fc]
        basis.append(v)
    return basis


@dataclass
class LDLReport:
    """Outcome of pivoted symmetric elimination plus a kernel certificate."""

    rank: int
    pivots: list
    psd: bool
    kernel_basis: list = field(repr=False)
    completed: bool = True
    lower: QMatrix | None = field(default=None, repr=False)
    permutation: tuple[int, ...] = ()


def ldl_symmetric(m: QMatrix) -> LDLReport:
    """Exact LDL^T with diagonal pivoting (largest remaining entry, ties by
    lowest index).

    For PSD input the elimination always completes and ``psd`` certifies that
    no negative pivot occurred.  If the elimination stalls on a nonzero
    remainder with an all-zero diagonal (only possible for indefinite input),
    the report falls back to RREF for rank and kernel and flags ``psd=False``.
    """
    if not m.is_symmetric():
        raise ValueError("ldl_symmetric needs a symmetric matrix")
    n = m.rows
    a = [row[:] for row in m.data]
    perm = list(range(n))
    lower = QMatrix.identity(n)
    pivots = []
    psd = True
    for step in range(n):
        best, best_val = None, None
        for i in range(step, n):
            d = a[i][i]
            if d and (best is None or d > best_val):
                best, best_val = i, d
        if best is None:
            if any(a[i][j] for i in range(step, n) for j in range(step, n)):
                # indefinite with zero diagonal block: no diagonal pivot exists
                report = LDLReport(
                    rank=rank(m),
                    pivots=pivots,
                    psd=False,
                    kernel_basis=kernel_basis(m),
                    completed=False,
                )
                return report
            break
        _swap_sym(a, lower.data, perm, step, best)
        d = a[step][step]
        if d < 0:
            psd = False
        pivots.append(d)
        inv = Q1 / d
        row_s = a[step]
        for i in range(step + 1, n):
            f = a[i][step] * inv
            if f:
                lower.data[i][step] = f
                row_i = a[i]
                for j in range(step + 1, n):
                    if row_s[j]:
                        row_i[j] -= f * row_s[j]
    rk = len(pivots)
    return LDLReport(
        rank=rk,
        pivots=pivots,
        psd=psd,
        kernel_basis=kernel_basis(m),
        completed=True,
        lower=lower,
        permutation=tuple(perm),
    )


def _swap_sym(a, lower, perm, i, j):
    if i == j:
        return
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]
    lower[i], lower[j] = lower[j], lower[i]
    for row in lower:
        row[i], row[j] = row[j], row[i]
    perm[i], perm[j] = perm[j], perm[i]


def ldl_reconstruct(m: QMatrix, report: LDLReport) -> QMatrix:
    """P^T L D L^T P for a completed report; equals the input exactly."""
    if not report.completed:
        raise ValueError("elimination did not complete")
    n = m.rows
    d = QMatrix.zeros(n, n)
    for i, p in enumerate(report.pivots):
        d.data[i][i] = p
    ldlt = report.lower @ d @ report.lower.transpose()
    out = QMatrix.zeros(n, n)
    perm = report.permutation
    for i in range(n):
        for j in range(n):
            out.data[perm[i]][perm[j]] = ldlt.data[i][j]
    return out


@dataclass
class SolveResult:
    """Classification of a linear system A x = b."""

    status: str  # "unique" | "underdetermined" | "inconsistent"
    solution: list | None = None
    nullspace: list = field(default_factory=list)


def solve(a: QMatrix, b) -> SolveResult:
    """Exact solve returning a particular solution and the null space."""
    if len(b) != a.rows:
        raise ValueError("dimension mismatch")
    aug = QMatrix([row + [bv] for row, bv in zip(a.data, [QQ(x) for x in b])])
    red, pivots, rk = rref(aug)
    n_cols = a.cols
    if n_cols in pivots:
        return SolveResult(status="inconsistent")
    x = [Q0] * n_cols
    for r_idx, pc in enumerate(pivots):
        x[pc] = red.data[r_idx][n_cols]
    null = kernel_basis(a)
    if null:
        return SolveResult(status="underdetermined", solution=x, nullspace=null)
    return SolveResult(status="unique", solution=x)
