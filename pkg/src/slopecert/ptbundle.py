"""Punctured-torus bundles and their nine-fold Z/3 x Z/3 covers.

The fiber group is free on ``x`` (generator 0) and ``y`` (generator 1);
the mapping torus adds ``t`` (generator 2).  Automorphisms are stored by the
images of ``x`` and ``y``.  Their abelianization has the exponent vector of
``f(x)`` as first column and that of ``f(y)`` as second column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exactlin import cycle_decomposition, mod_p_permutation, Permutation
from .fpgroup import (
    CosetTable,
    Presentation,
    Word,
    coset_table_from_action,
    commutator,
    cyclic_reduce,
    dehn_filled_homology,
    exponent_sums,
    free_reduce,
    inverse,
    presentation,
    substitute,
)

X, Y, T = 1, 2, 3
COMMUTATOR: Word = commutator((X,), (Y,))

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


class NotHyperbolicError(ValueError):
    """Monodromy is not pseudo-Anosov (|trace| <= 2)."""


class OrientationError(ValueError):
    """Automorphism sends [x, y] to a conjugate of its inverse."""


def matmul2(A: Matrix2, B: Matrix2) -> Matrix2:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def matpow2(A: Matrix2, k: int) -> Matrix2:
    if k < 0:
        (a, b), (c, d) = A  # det 1
        A, k = ((d, -b), (-c, a)), -k
    out: Matrix2 = ((1, 0), (0, 1))
    for _ in range(k):
        out = matmul2(out, A)
    return out


GENERATORS: dict[str, Matrix2] = {
    "R": ((1, 1), (0, 1)),
    "L": ((1, 0), (1, 1)),
    "-I": ((-1, 0), (0, -1)),
}


@dataclass(frozen=True)
class Monodromy:
    matrix: Matrix2

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        object.__setattr__(self, "matrix", ((int(a), int(b)), (int(c), int(d))))
        if a * d - b * c != 1:
            raise ValueError(f"monodromy {self.matrix} does not have determinant 1")

    @classmethod
    def from_entries(cls, a: int, b: int, c: int, d: int) -> "Monodromy":
        return cls(((a, b), (c, d)))

    @property
    def trace(self) -> int:
        return self.matrix[0][0] + self.matrix[1][1]

    @property
    def is_pseudo_anosov(self) -> bool:
        return abs(self.trace) > 2

    def inverse(self) -> Matrix2:
        (a, b), (c, d) = self.matrix
        return ((d, -b), (-c, a))


def factor_sl2z(M: Monodromy) -> list[tuple[str, int]]:
    """Write ``M`` as a product of powers of R, L and -I.

    Column Euclid: right multiplication by ``R^k`` adds ``k`` times column 0
    to column 1 and ``L^k`` adds ``k`` times column 1 to column 0.  Reduce the
    top row to ``(+-1, 0)``; what is left is ``L^c`` or ``-I L^-c``.
    """
    (a, b), (c, d) = M.matrix
    ops: list[tuple[str, int]] = []

    def right(name, k):
        nonlocal a, b, c, d
        if name == "R":
            b, d = b + k * a, d + k * c
        else:
            a, c = a + k * b, c + k * d
        ops.append((name, k))

    while b != 0:
        if a == 0:
            right("L", b)
        elif abs(a) > abs(b):
            right("L", -(a // b))
        else:
            right("R", -(b // a))
    word: list[tuple[str, int]] = [("-I", 1), ("L", -c)] if a == -1 else [("L", c)]
    word += [(name, -k) for name, k in reversed(ops)]
    merged: list[tuple[str, int]] = []
    for name, k in word:
        if merged and merged[-1][0] == name:
            k += merged.pop()[1]
        if name == "-I":
            k %= 2
        if k:
            merged.append((name, k))
    return merged


def factor_product(factors: Sequence[tuple[str, int]]) -> Matrix2:
    out: Matrix2 = ((1, 0), (0, 1))
    for name, k in factors:
        out = matmul2(out, matpow2(GENERATORS[name], k))
    return out


@dataclass(frozen=True)
class F2Automorphism:
    x_image: Word
    y_image: Word

    def __call__(self, w: Sequence[int]) -> Word:
        return substitute(w, (self.x_image, self.y_image))

    def then(self, other: "F2Automorphism") -> "F2Automorphism":
        """``self`` composed with ``other`` applied first: ``w -> self(other(w))``."""
        return F2Automorphism(self(other.x_image), self(other.y_image))

    @property
    def matrix(self) -> Matrix2:
        ex, ey = exponent_sums(self.x_image, 2), exponent_sums(self.y_image, 2)
        return ((ex[0], ey[0]), (ex[1], ey[1]))


IDENTITY_AUT = F2Automorphism((X,), (Y,))

_LIFTS = {
    ("R", 1): F2Automorphism((X,), (Y, X)),
    ("R", -1): F2Automorphism((X,), (Y, -X)),
    ("L", 1): F2Automorphism((X, Y), (Y,)),
    ("L", -1): F2Automorphism((X, -Y), (Y,)),
    ("-I", 1): F2Automorphism((-X,), (-Y,)),
}


def lift_to_automorphism(factors: Sequence[tuple[str, int]]) -> F2Automorphism:
    f = IDENTITY_AUT
    for name, k in factors:
        step = _LIFTS[(name, 1 if k > 0 else -1)] if name != "-I" else _LIFTS[("-I", 1)]
        for _ in range(abs(k)):
            f = f.then(step)
    return f


def conjugator_to_commutator(w: Sequence[int]) -> Word:
    """Return ``g`` with ``w == g [x,y] g^-1`` (free equality).

    Raises OrientationError if ``w`` is conjugate to ``[x,y]^-1``.
    """
    w = free_reduce(w)
    core = cyclic_reduce(w)
    k = (len(w) - len(core)) // 2
    u = w[:k]
    c = COMMUTATOR
    for target, err in ((c, None), (inverse(c), OrientationError)):
        for r in range(len(target)):
            if core == target[r:] + target[:r]:
                if err is not None:
                    raise err("image of [x,y] is conjugate to [x,y]^-1")
                # core = p^-1 c p with p the length-r prefix of c
                return free_reduce(u + inverse(c[:r]))
    raise ValueError(f"{w} is not conjugate to [x,y]^(+-1)")


def normalize_commutator(f: F2Automorphism) -> F2Automorphism:
    g = conjugator_to_commutator(f(COMMUTATOR))
    gi = inverse(g)
    out = F2Automorphism(free_reduce(gi + f.x_image + g), free_reduce(gi + f.y_image + g))
    assert out(COMMUTATOR) == COMMUTATOR
    return out


def bundle_presentation(f: F2Automorphism) -> tuple[Presentation, Word, Word]:
    """Mapping torus ``<x, y, t | t x t^-1 = f(x), t y t^-1 = f(y)>`` with m = t, l = [x, y]."""
    if f(COMMUTATOR) != COMMUTATOR:
        raise ValueError("automorphism must fix [x,y] exactly")
    rels = [(T, g, -T) + inverse(img) for g, img in ((X, f.x_image), (Y, f.y_image))]
    return presentation(3, rels), (T,), COMMUTATOR


@dataclass(frozen=True)
class Bundle:
    """Everything derived from one monodromy matrix."""

    monodromy: Monodromy
    factors: tuple[tuple[str, int], ...]
    automorphism: F2Automorphism
    presentation: Presentation
    meridian: Word
    longitude: Word


def build_bundle(M: Monodromy) -> Bundle:
    factors = factor_sl2z(M)
    f = normalize_commutator(lift_to_automorphism(factors))
    if f.matrix != M.matrix:
        raise AssertionError(f"lift has abelianization {f.matrix}, expected {M.matrix}")
    pres, m, l = bundle_presentation(f)
    return Bundle(M, tuple(factors), f, pres, m, l)


def label_index(a: int, b: int) -> int:
    return (a % 3) * 3 + b % 3


def nine_fold_cover(M: Monodromy, bundle: Bundle | None = None) -> CosetTable:
    """Cover from ``x -> (1,0)``, ``y -> (0,1)`` in Z/3 x Z/3, with ``t`` acting by ``f*^-1``."""
    if not M.is_pseudo_anosov:
        raise NotHyperbolicError(f"|trace| = {abs(M.trace)} <= 2")
    if bundle is None:
        bundle = build_bundle(M)
    shift_x = Permutation(tuple(label_index(a + 1, b) for a in range(3) for b in range(3)))
    shift_y = Permutation(tuple(label_index(a, b + 1) for a in range(3) for b in range(3)))
    t_action = mod_p_permutation(M.inverse(), 3)
    table = coset_table_from_action(bundle.presentation, [shift_x, shift_y, t_action])
    for w in ((X,) * 3, (Y,) * 3, COMMUTATOR, (T,)):
        assert table.act(0, w) == 0
    assert table.act(0, (X,)) != 0 and table.act(0, (Y,)) != 0
    return table


def zero_filled_betti(M: Monodromy, bundle: Bundle | None = None, table: CosetTable | None = None) -> int:
    """First Betti number of the nine-fold cover with every torus filled along the lift of l."""
    if bundle is None:
        bundle = build_bundle(M)
    if table is None:
        table = nine_fold_cover(M, bundle)
    return dehn_filled_homology(bundle.presentation, table, bundle.meridian, bundle.longitude, axis=1).betti


@dataclass(frozen=True)
class CycleRow:
    representatives: tuple[Matrix2, ...]
    cycles: tuple[int, ...]
    printed: str
    note: str = field(default="")


_TABLE_ROWS: list[tuple[tuple[Matrix2, ...], str]] = [
    ((((1, 0), (0, 1)),), "1,1,1,1,1,1,1,1,1,1"),
    ((((1, 1), (0, 1)), ((1, 2), (0, 1))), "1,1,1,3,3"),
    ((((2, 0), (0, 2)),), "1,2,2,2,2"),
    ((((2, 1), (0, 2)), ((2, 2), (0, 2))), "1,2,6"),
    ((((0, 2), (1, 0)),), "1,4,4"),
]


def cycle_table() -> list[CycleRow]:
    """Cycle types of the mod-3 action, one row per conjugacy class representative set."""
    rows = []
    for reps, printed in _TABLE_ROWS:
        types = {cycle_decomposition(mod_p_permutation(M, 3)) for M in reps}
        if len(types) != 1:
            raise AssertionError(f"representatives {reps} disagree: {types}")
        cycles = types.pop()
        note = ""
        if ",".join(map(str, cycles)) != printed:
            note = (f"originally printed as {printed} ({printed.count(',') + 1} entries); "
                    f"Z/3 x Z/3 has 9 points, so the identity has nine fixed points")
        rows.append(CycleRow(reps, cycles, printed, note))
    return rows
