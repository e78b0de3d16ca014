"""Canonical subspaces of GF(p)^n and Grassmannian enumeration/sampling.

A subspace is stored as its reduced-row-echelon basis, so equality is a
plain comparison and sets of subspaces deduplicate for free.  Enumeration
order is fixed once and for all: pivot-column sets in lexicographic order
(one Schubert cell per set), then the free entries of the RREF basis in
lexicographic order, row-major.  Every "first counterexample" or "first
witness" promise downstream refers to this order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator

from .errors import BudgetExceeded
from .gfp import FieldSpec, Gf2RowSpan, Matrix, kernel_basis, make_row_span, pack_bits, rref

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "Subspace",
    "span_of",
    "apply_map",
    "intersect",
    "kernel",
    "grassmann_count",
    "subspace_cells",
    "cell_subspaces",
    "enumerate_subspaces",
    "sample_subspace",
]

DEFAULT_ENUMERATION_CAP = 10**8


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)^ambient, identified by its canonical RREF basis."""

    field: FieldSpec
    ambient: int
    basis: Matrix

    def __post_init__(self) -> None:
        b = self.basis
        if b.field != self.field:
            raise ValueError("basis field does not match")
        if b.cols != self.ambient:
            raise ValueError("basis width does not match the ambient dimension")
        _check_canonical_basis(b)

    @property
    def dim(self) -> int:
        return self.basis.rows

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, Matrix(field, 0, n, ()))

    @classmethod
    def full(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, Matrix.identity(field, n))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        stacked = Matrix(
            self.field,
            self.dim + other.dim,
            self.ambient,
            self.basis.entries + other.basis.entries,
        )
        return span_of(stacked)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __le__(self, other: "Subspace") -> bool:
        """Containment: self is a subspace of other."""
        self._check_compatible(other)
        span = make_row_span(self.field.modulus)
        for i in range(other.dim):
            span.add(_prep_vector(self.field.modulus, other.basis.row(i)))
        return all(
            span.contains(_prep_vector(self.field.modulus, self.basis.row(i)))
            for i in range(self.dim)
        )

    def __contains__(self, vector) -> bool:
        vec = tuple(x % self.field.modulus for x in vector)
        if len(vec) != self.ambient:
            raise ValueError("vector length does not match the ambient dimension")
        span = make_row_span(self.field.modulus)
        for i in range(self.dim):
            span.add(_prep_vector(self.field.modulus, self.basis.row(i)))
        return span.contains(_prep_vector(self.field.modulus, vec))

    def _check_compatible(self, other: "Subspace") -> None:
        if self.field != other.field or self.ambient != other.ambient:
            raise ValueError("subspaces live in different spaces")


def _prep_vector(p: int, vec):
    return pack_bits(vec) if p == 2 else vec


def _check_canonical_basis(b: Matrix) -> None:
    """Validate a full-row-rank RREF basis (cheap structural check)."""
    last = -1
    for i in range(b.rows):
        row = b.row(i)
        lead = None
        for j, x in enumerate(row):
            if x:
                lead = j
                break
        if lead is None:
            raise ValueError("basis contains a zero row")
        if lead <= last:
            raise ValueError("basis pivots are not strictly increasing")
        if row[lead] != 1:
            raise ValueError("basis pivot is not normalized to 1")
        for k in range(b.rows):
            if k != i and b.at(k, lead):
                raise ValueError("basis pivot column is not clean")
        last = lead


# ----------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------


def span_of(vectors: Matrix) -> Subspace:
    """Canonical subspace spanned by the rows of `vectors`."""
    red = rref(vectors)
    basis = Matrix(
        vectors.field, red.rank, vectors.cols, red.matrix.entries[: red.rank * vectors.cols]
    )
    return Subspace(vectors.field, vectors.cols, basis)


def apply_map(m: Matrix, u: Subspace) -> Subspace:
    """Image subspace {m v : v in u}."""
    if m.field != u.field:
        raise ValueError("mixed fields")
    if m.cols != u.ambient:
        raise ValueError("map domain does not match the subspace's ambient space")
    p = m.field.modulus
    rows = []
    for i in range(u.dim):
        v = u.basis.row(i)
        rows.append([sum(m.at(j, k) * v[k] for k in range(m.cols)) % p for j in range(m.rows)])
    return span_of(Matrix.from_rows(m.field, rows, cols=m.rows))


def annihilator(u: Subspace) -> Subspace:
    """All w with <v, w> = 0 for every v in u (standard bilinear form)."""
    return Subspace(u.field, u.ambient, kernel_basis(u.basis))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection, computed as the kernel of the stacked annihilators."""
    a._check_compatible(b)
    ann_a = annihilator(a)
    ann_b = annihilator(b)
    stacked = Matrix(
        a.field,
        ann_a.dim + ann_b.dim,
        a.ambient,
        ann_a.basis.entries + ann_b.basis.entries,
    )
    return Subspace(a.field, a.ambient, kernel_basis(stacked))


def kernel(m: Matrix) -> Subspace:
    """Canonical kernel subspace {v : m v = 0}."""
    return Subspace(m.field, m.cols, kernel_basis(m))


# ----------------------------------------------------------------------
# enumeration
# ----------------------------------------------------------------------


def grassmann_count(n: int, s: int, p: int) -> int:
    """Number of s-dimensional subspaces of GF(p)^n (Gaussian binomial)."""
    if not 0 <= s <= n:
        return 0
    num = 1
    den = 1
    for i in range(s):
        num *= p ** (n - i) - 1
        den *= p ** (s - i) - 1
    return num // den


def subspace_cells(n: int, s: int, p: int):
    """Schubert cells in canonical order: (pivots, free positions, size).

    Free positions are listed row-major; a cell holds p**len(free) subspaces.
    """
    cells = []
    for pivots in itertools.combinations(range(n), s):
        pivset = set(pivots)
        free = [
            (i, c)
            for i in range(s)
            for c in range(pivots[i] + 1, n)
            if c not in pivset
        ]
        cells.append((pivots, tuple(free), p ** len(free)))
    return cells


def cell_subspaces(
    field: FieldSpec, n: int, pivots: tuple[int, ...], free: tuple[tuple[int, int], ...]
) -> Iterator[Subspace]:
    """All subspaces of one Schubert cell, free entries in lexicographic order."""
    p = field.modulus
    s = len(pivots)
    base = [0] * (s * n)
    for i, c in enumerate(pivots):
        base[i * n + c] = 1
    for values in itertools.product(range(p), repeat=len(free)):
        entries = list(base)
        for (i, c), v in zip(free, values):
            entries[i * n + c] = v
        yield Subspace(field, n, Matrix(field, s, n, tuple(entries)))


def enumerate_subspaces(
    n: int,
    s: int,
    field: FieldSpec,
    *,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[Subspace]:
    """All s-dimensional subspaces of GF(p)^n in canonical order.

    Raises BudgetExceeded up front when the Grassmannian is larger than the
    cap; there is never a silent truncation.
    """
    if not 0 <= s <= n:
        raise ValueError(f"dimension {s} is not between 0 and {n}")
    count = grassmann_count(n, s, field.modulus)
    if count > enumeration_cap:
        raise BudgetExceeded("subspace enumeration", count, enumeration_cap)

    def generate() -> Iterator[Subspace]:
        for pivots, free, _ in subspace_cells(n, s, field.modulus):
            yield from cell_subspaces(field, n, pivots, free)

    return generate()


# ----------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------


def sample_with_rng(n: int, s: int, field: FieldSpec, rng: random.Random) -> Subspace:
    """Uniform s-dimensional subspace drawn from an existing RNG stream.

    Rejection sampling: draw s x n matrices with iid uniform entries until
    one has full row rank, then canonicalize.  Uniformity follows because
    every s-dimensional subspace has the same number of ordered bases.
    """
    if not 0 <= s <= n:
        raise ValueError(f"dimension {s} is not between 0 and {n}")
    p = field.modulus
    if s == 0:
        return Subspace.zero(field, n)
    while True:
        rows = [[rng.randrange(p) for _ in range(n)] for _ in range(s)]
        m = Matrix.from_rows(field, rows, cols=n)
        u = span_of(m)
        if u.dim == s:
            return u


def sample_subspace(n: int, s: int, field: FieldSpec, seed: int) -> Subspace:
    """Uniform s-dimensional subspace of GF(p)^n, deterministic in the seed."""
    return sample_with_rng(n, s, field, random.Random(seed))
