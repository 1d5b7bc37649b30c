"""Finitely presented groups and their finite-index subgroups.

Words are tuples of nonzero ints: letter ``k > 0`` is generator ``k - 1``
and ``-k`` its inverse (the usual "Tietze word" encoding).  Generators are
never named in this module.

Cosets are acted on from the right, so a word acts on a coset by applying
its letters left to right.  Coset 0 is always the base coset (the
subgroup itself).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Sequence

from .exactlin import (
    IntMatrix,
    Lattice2,
    Permutation,
    hermite_lattice,
    smith_normal_form,
)

Word = tuple[int, ...]


class RelatorError(ValueError):
    """Generator images or actions do not satisfy a relator."""


class NotInSubgroupError(ValueError):
    """A word that should fix the base coset moves it."""


class PeripheralError(RuntimeError):
    """Peripheral data is inconsistent (a bug upstream, not a math outcome)."""


def free_reduce(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def power(w: Sequence[int], k: int) -> Word:
    base = tuple(w) if k >= 0 else inverse(w)
    return free_reduce(base * abs(k))


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """``u v u^-1 v^-1``."""
    return free_reduce(tuple(u) + tuple(v) + inverse(u) + inverse(v))


def exponent_sums(w: Sequence[int], ngens: int) -> list[int]:
    v = [0] * ngens
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def substitute(w: Sequence[int], images: Sequence[Word]) -> Word:
    """Image of ``w`` under the homomorphism sending generator i to ``images[i]``."""
    out: list[int] = []
    for x in w:
        out.extend(images[x - 1] if x > 0 else inverse(images[-x - 1]))
    return free_reduce(out)


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        for r in self.relators:
            if any(abs(x) > self.ngens or x == 0 for x in r):
                raise ValueError(f"relator {r} uses a letter outside {self.ngens} generators")


def presentation(ngens: int, relators: Iterable[Sequence[int]]) -> Presentation:
    """Build a presentation with freely and cyclically reduced relators."""
    return Presentation(ngens, tuple(cyclic_reduce(r) for r in relators))


def evaluate(w: Sequence[int], images: Sequence[Any], identity: Any) -> Any:
    """Evaluate a word in a group whose elements support ``*`` and ``inverse()``."""
    inverses = [g.inverse() for g in images]
    acc = identity
    for x in w:
        acc = acc * (images[x - 1] if x > 0 else inverses[-x - 1])
    return acc


# -- coset tables ---------------------------------------------------------


@dataclass(frozen=True)
class CosetTable:
    """Right action of each generator on ``size`` cosets."""

    actions: tuple[Permutation, ...]

    @property
    def size(self) -> int:
        return self.actions[0].degree if self.actions else 1

    @property
    def ngens(self) -> int:
        return len(self.actions)

    def act(self, coset: int, w: Sequence[int]) -> int:
        for x in w:
            coset = self.actions[x - 1](coset) if x > 0 else self.inverses[-x - 1](coset)
        return coset

    @cached_property
    def inverses(self) -> tuple[Permutation, ...]:
        return tuple(p.inverse() for p in self.actions)

    def word_permutation(self, w: Sequence[int]) -> Permutation:
        return Permutation(tuple(self.act(c, w) for c in range(self.size)))

    def is_transitive(self) -> bool:
        seen = {0}
        queue = [0]
        while queue:
            c = queue.pop()
            for p in self.actions + self.inverses:
                if p(c) not in seen:
                    seen.add(p(c))
                    queue.append(p(c))
        return len(seen) == self.size


def coset_table_from_action(pres: Presentation, actions: Sequence[Permutation]) -> CosetTable:
    if len(actions) != pres.ngens:
        raise ValueError("need one permutation per generator")
    if len({p.degree for p in actions}) > 1:
        raise ValueError("permutations have different degrees")
    table = CosetTable(tuple(actions))
    for r in pres.relators:
        if not table.word_permutation(r).is_identity():
            raise RelatorError(f"relator {r} acts nontrivially")
    if not table.is_transitive():
        raise ValueError("action is not transitive")
    return table


def coset_table_from_hom(pres: Presentation, images: Sequence[Any], subgroup: Iterable[Any]) -> CosetTable:
    """Table of the right action on cosets ``H g`` of ``subgroup`` in the image group.

    ``images`` are elements of a finite group supporting ``*``,
    ``inverse()``, equality and hashing.  Cosets are numbered in
    breadth-first order from ``H`` using generators in index order.
    """
    if len(images) != pres.ngens or not images:
        raise ValueError("need one image per generator")
    identity = images[0] * images[0].inverse()
    for r in pres.relators:
        if evaluate(r, images, identity) != identity:
            raise RelatorError(f"relator {r} is not satisfied by the images")
    H = frozenset(subgroup) | {identity}
    if any(h * k not in H for h in H for k in H):
        raise ValueError("subgroup is not closed under multiplication")

    def key(g):
        return frozenset(h * g for h in H)

    reps = [identity]
    index = {key(identity): 0}
    images_of: list[list[int]] = [[] for _ in images]
    i = 0
    while i < len(reps):
        g = reps[i]
        for gen, x in enumerate(images):
            k = key(g * x)
            if k not in index:
                index[k] = len(reps)
                reps.append(g * x)
            images_of[gen].append(index[k])
        i += 1
    return CosetTable(tuple(Permutation(tuple(a)) for a in images_of))


# -- Reidemeister-Schreier -------------------------------------------------


@dataclass(frozen=True)
class SchreierData:
    """Schreier transversal and the nontrivial Schreier generators.

    ``generators[k] = (coset, gen)`` is subgroup generator ``k``, the element
    ``T(coset) g T(coset . g)^-1``; ``words[k]`` is that element in the base
    group.  ``labels`` maps ``(coset, gen)`` to ``k``, absent for pairs that
    are trivial because they are tree edges.
    """

    transversal: tuple[Word, ...]
    generators: tuple[tuple[int, int], ...]
    words: tuple[Word, ...]
    labels: dict

    @property
    def ngens(self) -> int:
        return len(self.generators)


def schreier_transversal(table: CosetTable) -> SchreierData:
    n, g = table.size, table.ngens
    letters = [s * (i + 1) for i in range(g) for s in (1, -1)]
    trans: list[Word | None] = [None] * n
    trans[0] = ()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in letters:
            d = table.act(c, (x,))
            if trans[d] is None:
                trans[d] = trans[c] + (x,)
                queue.append(d)
    if any(t is None for t in trans):
        raise ValueError("coset table is not transitive")
    gens, words, labels = [], [], {}
    for c in range(n):
        for i in range(g):
            d = table.actions[i](c)
            w = free_reduce(trans[c] + (i + 1,) + inverse(trans[d]))
            if w:
                labels[(c, i)] = len(gens)
                gens.append((c, i))
                words.append(w)
    return SchreierData(tuple(trans), tuple(gens), tuple(words), labels)


def rewrite_word(data: SchreierData, table: CosetTable, w: Sequence[int], start: int = 0) -> Word:
    """Rewrite a word fixing coset ``start`` as a word in Schreier generators.

    With ``start != 0`` the result represents ``T(start) w T(start)^-1``.
    """
    c = start
    out = []
    for x in w:
        if x > 0:
            k = data.labels.get((c, x - 1))
            if k is not None:
                out.append(k + 1)
            c = table.actions[x - 1](c)
        else:
            c = table.inverses[-x - 1](c)
            k = data.labels.get((c, -x - 1))
            if k is not None:
                out.append(-(k + 1))
    if c != start:
        raise NotInSubgroupError(f"word ends at coset {c}, not {start}")
    return free_reduce(out)


def schreier_to_base(data: SchreierData, w: Sequence[int]) -> Word:
    """Evaluate a word in Schreier generators back in the base group."""
    return substitute(w, data.words)


def subgroup_presentation(pres: Presentation, table: CosetTable, data: SchreierData | None = None) -> Presentation:
    """Reidemeister-Schreier presentation: one rewritten relator per (coset, relator)."""
    if data is None:
        data = schreier_transversal(table)
    rels = [rewrite_word(data, table, r, start=c) for c in range(table.size) for r in pres.relators]
    return presentation(data.ngens, rels)


# -- homology ---------------------------------------------------------------


@dataclass(frozen=True)
class HomologySummary:
    betti: int
    torsion: tuple[int, ...]

    def __str__(self):
        parts = [] if self.betti == 0 else ["Z" if self.betti == 1 else f"Z^{self.betti}"]
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def relator_matrix(pres: Presentation) -> IntMatrix:
    return IntMatrix.from_rows([exponent_sums(r, pres.ngens) for r in pres.relators], pres.ngens)


def abelianization(pres: Presentation) -> HomologySummary:
    factors = smith_normal_form(relator_matrix(pres)).invariant_factors
    return HomologySummary(pres.ngens - len(factors), tuple(d for d in factors if d > 1))


def h1_image(pres_sub: Presentation, words: Sequence[Sequence[int]]) -> IntMatrix:
    """Exponent-sum vectors of ``words`` as columns (ngens x len(words))."""
    cols = [exponent_sums(w, pres_sub.ngens) for w in words]
    return IntMatrix.from_rows(cols, pres_sub.ngens).transpose() if cols else IntMatrix.zeros(pres_sub.ngens, 0)


# -- peripheral structure ---------------------------------------------------


@dataclass(frozen=True)
class PeripheralTorus:
    """One boundary torus of a cover, seen as an orbit of ``<m, l>`` on cosets.

    ``stabilizer`` is the lattice of ``(p, q)`` with ``base . m^p l^q = base``
    in Hermite form; ``base_words`` are ``T(base) m^p l^q T(base)^-1`` for its
    two basis rows and ``words`` are the same elements in Schreier
    generators.
    """

    orbit: tuple[int, ...]
    base: int
    stabilizer: Lattice2
    base_words: tuple[Word, Word]
    words: tuple[Word, Word]

    @property
    def degree(self) -> int:
        return self.stabilizer.index

    def axis_word(self, data: SchreierData, table: CosetTable, m: Word, l: Word, axis: int) -> Word:
        """Primitive lift of ``m`` (axis 0) or ``l`` (axis 1), in Schreier generators."""
        p, q = self.stabilizer.axis_vector(axis)
        return rewrite_word(data, table, power(m, p) + power(l, q), start=self.base)


def peripheral_tori(table: CosetTable, data: SchreierData, m: Sequence[int], l: Sequence[int]) -> list[PeripheralTorus]:
    m, l = free_reduce(m), free_reduce(l)
    pm, pl = table.word_permutation(m), table.word_permutation(l)
    if pm * pl != pl * pm:
        raise PeripheralError("meridian and longitude do not commute on cosets")
    moves = [((1, 0), pm), ((-1, 0), pm.inverse()), ((0, 1), pl), ((0, -1), pl.inverse())]
    tori = []
    seen: set[int] = set()
    for base in range(table.size):
        if base in seen:
            continue
        coords = {base: (0, 0)}
        returns = []
        queue = deque([base])
        while queue:
            c = queue.popleft()
            x, y = coords[c]
            for (dx, dy), p in moves:
                d = p(c)
                if d in coords:
                    u, v = coords[d]
                    returns.append((x + dx - u, y + dy - v))
                else:
                    coords[d] = (x + dx, y + dy)
                    queue.append(d)
        orbit = tuple(sorted(coords))
        seen.update(orbit)
        lattice = hermite_lattice(returns)
        if lattice.index != len(orbit):
            raise PeripheralError(f"stabilizer index {lattice.index} != orbit size {len(orbit)}")
        t = data.transversal[base]
        base_words, words = [], []
        for p, q in ((lattice.a, lattice.b), (0, lattice.d)):
            loop = power(m, p) + power(l, q)
            base_words.append(free_reduce(t + loop + inverse(t)))
            words.append(rewrite_word(data, table, loop, start=base))
        tori.append(PeripheralTorus(orbit, base, lattice, tuple(base_words), tuple(words)))
    return tori


def dehn_filled_homology(pres: Presentation, table: CosetTable, m: Sequence[int], l: Sequence[int],
                         axis: int, data: SchreierData | None = None) -> HomologySummary:
    """H_1 of the cover with every boundary torus filled along the lift of m (0) or l (1)."""
    if data is None:
        data = schreier_transversal(table)
    sub = subgroup_presentation(pres, table, data)
    tori = peripheral_tori(table, data, m, l)
    extra = [t.axis_word(data, table, free_reduce(m), free_reduce(l), axis) for t in tori]
    return abelianization(presentation(sub.ngens, sub.relators + tuple(extra)))


# -- dihedral groups --------------------------------------------------------


@dataclass(frozen=True, order=True)
class DihedralElement:
    """Element ``r^rotation s^flip`` of the dihedral group of order ``2n``.

    Multiplication: ``(r1, f1)(r2, f2) = (r1 + (-1)^f1 r2, f1 xor f2)``.
    """

    n: int
    rotation: int
    flip: bool

    def __post_init__(self):
        object.__setattr__(self, "rotation", self.rotation % self.n)
        object.__setattr__(self, "flip", bool(self.flip))

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        r = self.rotation - other.rotation if self.flip else self.rotation + other.rotation
        return DihedralElement(self.n, r, self.flip != other.flip)

    def inverse(self) -> "DihedralElement":
        return self if self.flip else DihedralElement(self.n, -self.rotation, False)

    @property
    def is_identity(self) -> bool:
        return self.rotation == 0 and not self.flip


def dihedral_group(n: int) -> list[DihedralElement]:
    return [DihedralElement(n, r, f) for f in (False, True) for r in range(n)]


def generated_subgroup(gens: Sequence[Any]) -> set:
    identity = gens[0] * gens[0].inverse()
    out = {identity}
    frontier = [identity]
    while frontier:
        g = frontier.pop()
        for x in gens:
            h = g * x
            if h not in out:
                out.add(h)
                frontier.append(h)
    return out


def double_cosets_dihedral(n: int) -> list[list[DihedralElement]]:
    """Partition of D_2n into (A, A)-double cosets, A generated by the flip ``s``.

    Each class is sorted; classes are ordered by their smallest element, so
    ``A`` itself comes first.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    s = DihedralElement(n, 0, True)
    A = [DihedralElement(n, 0, False), s]
    classes, seen = [], set()
    for g in dihedral_group(n):
        if g in seen:
            continue
        dc = sorted({a * g * b for a in A for b in A})
        seen.update(dc)
        classes.append(dc)
    return sorted(classes, key=lambda c: c[0])
