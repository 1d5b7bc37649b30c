"""Exact integer and rational linear algebra.

Everything here works on Python ints (arbitrary precision) and
``fractions.Fraction``; nothing ever touches floating point.  Matrices are
small (a few dozen rows) so clarity wins over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class DegenerateLatticeError(ValueError):
    """Raised when a set of vectors spans a sublattice of rank < 2."""

    def __init__(self, rank: int):
        super().__init__(f"generated sublattice of Z^2 has rank {rank} < 2")
        self.rank = rank


@dataclass(frozen=True)
class IntMatrix:
    """Row-major integer matrix with explicit shape.

    The shape is stored separately so that 0 x n and n x 0 matrices (which
    show up for presentations without relators) keep their column count.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols_other = other.transpose().entries
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols_other) for r in self.entries),
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(tuple(r[j] for r in self.entries) for j in range(self.cols)),
        )

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self.entries) for j, v in enumerate(r) if i != j)

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def det(self) -> int:
        """Determinant via Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` in Smith form."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.S.diagonal() if d != 0]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, pivoting on the smallest entry."""
    m, n = A.rows, A.cols
    S = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        S[i], S[k] = S[k], S[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for M in (S, V):
            for r in M:
                r[j], r[k] = r[k], r[j]

    def add_row(src, dst, q):  # row[dst] += q * row[src]
        for M in (S, U):
            rs, rd = M[src], M[dst]
            for j in range(len(rd)):
                rd[j] += q * rs[j]

    def add_col(src, dst, q):  # col[dst] += q * col[src]
        for M in (S, V):
            for r in M:
                r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = S[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(t, i, -(S[i][t] // p))
                    dirty = dirty or S[i][t] != 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(t, j, -(S[t][j] // p))
                    dirty = dirty or S[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if S[t][t] < 0:
            for r in (S[t], U[t]):
                for j in range(len(r)):
                    r[j] = -r[j]
    return SmithDecomposition(
        IntMatrix.from_rows(U, m), IntMatrix.from_rows(S, n), IntMatrix.from_rows(V, n)
    )


def _rref(A: IntMatrix) -> tuple[list[list[Fraction]], list[int]]:
    R = [[Fraction(x) for x in r] for r in A.entries]
    pivots: list[int] = []
    row = 0
    for col in range(A.cols):
        piv = next((i for i in range(row, A.rows) if R[i][col]), None)
        if piv is None:
            continue
        R[row], R[piv] = R[piv], R[row]
        inv = 1 / R[row][col]
        R[row] = [x * inv for x in R[row]]
        for i in range(A.rows):
            if i != row and R[i][col]:
                f = R[i][col]
                R[i] = [a - f * b for a, b in zip(R[i], R[row])]
        pivots.append(col)
        row += 1
        if row == A.rows:
            break
    return R, pivots


def rational_rank(A: IntMatrix) -> int:
    return len(_rref(A)[1])


def primitive(v: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def rational_kernel_basis(A: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the rational null space ``{v : A v = 0}``.

    One vector per free column of the reduced row echelon form, scaled to a
    primitive integer vector whose free coordinate is positive.
    """
    R, pivots = _rref(A)
    free = [j for j in range(A.cols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * A.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(primitive(v))
    return basis


@dataclass(frozen=True)
class Lattice2:
    """Finite-index sublattice of Z^2 given by its Hermite basis.

    Rows ``(a, b)`` and ``(0, d)`` with ``a, d > 0`` and ``0 <= b < d``.
    """

    a: int
    b: int
    d: int

    @property
    def basis(self) -> IntMatrix:
        return IntMatrix.from_rows([[self.a, self.b], [0, self.d]])

    @property
    def index(self) -> int:
        return self.a * self.d

    def __contains__(self, v: tuple[int, int]) -> bool:
        p, q = v
        if p % self.a:
            return False
        return (q - (p // self.a) * self.b) % self.d == 0

    def axis_vector(self, axis: int) -> tuple[int, int]:
        """Smallest positive lattice vector on coordinate axis 0 or 1."""
        if axis == 1:
            return (0, self.d)
        return (self.a * self.d // gcd(self.b, self.d), 0)


def hermite_lattice(vectors: Iterable[Sequence[int]]) -> Lattice2:
    rows = [[int(v[0]), int(v[1])] for v in vectors]
    # Euclid on the first coordinate across all rows.
    while True:
        nz = [r for r in rows if r[0]]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda r: abs(r[0]))
        p = nz[0]
        for r in nz[1:]:
            q = r[0] // p[0]
            r[0] -= q * p[0]
            r[1] -= q * p[1]
    head = next((r for r in rows if r[0]), None)
    d = 0
    for r in rows:
        if r is not head:
            d = gcd(d, r[1])
    if head is None:
        raise DegenerateLatticeError(1 if d else 0)
    if d == 0:
        raise DegenerateLatticeError(1)
    a, b = head
    if a < 0:
        a, b = -a, -b
    return Lattice2(a, b % d, d)


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{0, ..., degree-1}``; ``images[i]`` is the image of ``i``.

    Products compose left to right: ``(p * q)(i) == q(p(i))``, matching the
    right action of words on cosets.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images do not form a bijection")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i]
            out.append(tuple(cyc))
        return out


def cycle_decomposition(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths as a sorted tuple."""
    return tuple(sorted(len(c) for c in p.cycles()))


def mod_p_permutation(M: Sequence[Sequence[int]], p: int) -> Permutation:
    """Action ``v -> M v (mod p)`` on ``(Z/p)^2``; point ``(a, b)`` has index ``a*p + b``."""
    (m00, m01), (m10, m11) = M
    if (m00 * m11 - m01 * m10) % p == 0:
        raise ValueError(f"matrix is singular mod {p}")
    images = []
    for a in range(p):
        for b in range(p):
            images.append(((m00 * a + m01 * b) % p) * p + (m10 * a + m11 * b) % p)
    return Permutation(tuple(images))
