"""Order-3 tensors over prime fields, stored as stacks of matrix slices,
with exact rank computation.

The rank search walks combinations of projectively-normalized rank-one
matrices and asks whether r of them span every slice; the least such r is
the tensor rank.  The search is exhaustive over candidate classes, so both
answers it returns are certificates: a witness decomposition when the rank
is at most the cap, and a proof of "rank exceeds the cap" otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded, DecompositionMismatch, SpanFailure
from .gfp import FieldSpec, Matrix, make_row_span, solve

__all__ = [
    "DEFAULT_POOL_CAP",
    "DEFAULT_STEP_CAP",
    "Tensor3",
    "RankOneTerm",
    "Decomposition",
    "slice_tensor",
    "eval_decomposition",
    "min_spanning_rank_ones",
    "reconstruct_decomposition",
    "tensor_rank",
]

DEFAULT_POOL_CAP = 10**4
DEFAULT_STEP_CAP = 10**8


@dataclass(frozen=True)
class Tensor3:
    """Dense order-3 tensor; entries row-major with the first index slowest."""

    field: FieldSpec
    d1: int
    d2: int
    d3: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if min(self.d1, self.d2, self.d3) < 1:
            raise ValueError("tensor dimensions must be positive")
        if len(self.entries) != self.d1 * self.d2 * self.d3:
            raise ValueError(
                f"expected {self.d1 * self.d2 * self.d3} entries, got {len(self.entries)}"
            )
        p = self.field.modulus
        for x in self.entries:
            if not isinstance(x, int) or not 0 <= x < p:
                raise ValueError(f"entry {x!r} is not a reduced residue mod {p}")

    @classmethod
    def zeros(cls, field: FieldSpec, d1: int, d2: int, d3: int) -> "Tensor3":
        return cls(field, d1, d2, d3, (0,) * (d1 * d2 * d3))

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.d1, self.d2, self.d3)

    def at(self, i: int, j: int, k: int) -> int:
        return self.entries[(i * self.d2 + j) * self.d3 + k]

    def slice(self, i: int) -> Matrix:
        """The i-th frontal slice T(i, *, *) as a d2 x d3 matrix."""
        block = self.d2 * self.d3
        return Matrix(self.field, self.d2, self.d3, self.entries[i * block : (i + 1) * block])

    def slices(self) -> tuple[Matrix, ...]:
        return tuple(self.slice(i) for i in range(self.d1))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __add__(self, other: "Tensor3") -> "Tensor3":
        if self.field != other.field or self.dims != other.dims:
            raise ValueError("tensor shapes or fields do not match")
        p = self.field.modulus
        return Tensor3(
            self.field, self.d1, self.d2, self.d3,
            tuple((a + b) % p for a, b in zip(self.entries, other.entries)),
        )


def slice_tensor(slices: Sequence[Matrix]) -> Tensor3:
    """Stack matrices into a tensor whose i-th slice is slices[i]."""
    if not slices:
        raise ValueError("need at least one slice")
    field = slices[0].field
    d2, d3 = slices[0].rows, slices[0].cols
    for m in slices:
        if m.field != field:
            raise ValueError("slices over mixed fields")
        if (m.rows, m.cols) != (d2, d3):
            raise ValueError("slices have inconsistent shapes")
    entries = tuple(x for m in slices for x in m.entries)
    return Tensor3(field, len(slices), d2, d3, entries)


@dataclass(frozen=True)
class RankOneTerm:
    """One term f (x) g (x) h of a decomposition.

    Zero factor vectors are allowed; the evaluated term is then zero.
    """

    f: tuple[int, ...]
    g: tuple[int, ...]
    h: tuple[int, ...]


@dataclass(frozen=True)
class Decomposition:
    """A sum of rank-one terms evaluating to a d1 x d2 x d3 tensor."""

    field: FieldSpec
    dims: tuple[int, int, int]
    terms: tuple[RankOneTerm, ...]

    def __post_init__(self) -> None:
        d1, d2, d3 = self.dims
        if min(d1, d2, d3) < 1:
            raise ValueError("dimensions must be positive")
        p = self.field.modulus
        for term in self.terms:
            if (len(term.f), len(term.g), len(term.h)) != (d1, d2, d3):
                raise ValueError("term factor lengths do not match the dimensions")
            for x in term.f + term.g + term.h:
                if not isinstance(x, int) or not 0 <= x < p:
                    raise ValueError(f"factor entry {x!r} is not a reduced residue mod {p}")

    def __len__(self) -> int:
        return len(self.terms)

    def rank_one_matrices(self) -> tuple[Matrix, ...]:
        """The g h^T matrix of each term (f coefficients not applied)."""
        p = self.field.modulus
        d2, d3 = self.dims[1], self.dims[2]
        return tuple(
            Matrix(self.field, d2, d3,
                   tuple((gj * hk) % p for gj in t.g for hk in t.h))
            for t in self.terms
        )


def eval_decomposition(dec: Decomposition) -> Tensor3:
    """Sum the rank-one terms into an explicit tensor."""
    d1, d2, d3 = dec.dims
    p = dec.field.modulus
    acc = [0] * (d1 * d2 * d3)
    for term in dec.terms:
        for i, fi in enumerate(term.f):
            if not fi:
                continue
            for j, gj in enumerate(term.g):
                if not gj:
                    continue
                c = fi * gj
                base = (i * d2 + j) * d3
                for k, hk in enumerate(term.h):
                    if hk:
                        acc[base + k] = (acc[base + k] + c * hk) % p
    return Tensor3(dec.field, d1, d2, d3, tuple(acc))


# ----------------------------------------------------------------------
# rank search
# ----------------------------------------------------------------------


def _proj_reps(p: int, k: int) -> list[tuple[int, ...]]:
    """Nonzero length-k vectors with first nonzero entry 1, in lex order.

    One representative per projective class; there are (p**k - 1)//(p - 1).
    """
    out = []
    for v in itertools.product(range(p), repeat=k):
        for x in v:
            if x:
                if x == 1:
                    out.append(v)
                break
    return out


def _slice_vectors(slices: Sequence[Matrix], p: int):
    """Slices flattened to span-accumulator vectors (ints over GF(2))."""
    if p == 2:
        out = []
        for m in slices:
            v = 0
            for j, x in enumerate(m.entries):
                if x:
                    v |= 1 << j
            out.append(v)
        return out
    return [list(m.entries) for m in slices]


def min_spanning_rank_ones(
    slices: Sequence[Matrix],
    r_max: int,
    *,
    pool_cap: int = DEFAULT_POOL_CAP,
    step_cap: int = DEFAULT_STEP_CAP,
) -> tuple[int, tuple[Matrix, ...]] | None:
    """Fewest rank-one matrices whose span contains every given slice.

    That count is exactly the rank of the stacked tensor.  Searches r from
    dim(span of slices) upward to r_max by iterative deepening; each level
    runs a depth-first walk over index-increasing combinations of candidate
    classes, skipping candidates dependent on the ones already chosen and
    pruning branches where dim(span(chosen) + span(slices)) exceeds r.  A
    branch that reaches depth r has succeeded: the chosen matrices are r
    independent vectors and the joint span was pruned to dimension at most
    r, so it coincides with their span.

    Returns (r, witness matrices), or None once the search has certified
    that the rank exceeds r_max.
    """
    if not slices:
        raise ValueError("need at least one slice")
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    field = slices[0].field
    p = field.modulus
    d2, d3 = slices[0].rows, slices[0].cols
    for m in slices:
        if m.field != field or (m.rows, m.cols) != (d2, d3):
            raise ValueError("slices have inconsistent shapes or fields")

    svecs = _slice_vectors(slices, p)
    base = make_row_span(p)
    for v in svecs:
        base.add(v)
    r0 = base.dim
    if r0 == 0:
        return (0, ())
    if r0 > r_max:
        return None

    reps_g = _proj_reps(p, d2)
    reps_h = _proj_reps(p, d3)
    pool_n = len(reps_g) * len(reps_h)
    if pool_n > pool_cap:
        raise BudgetExceeded("rank-one candidate pool", pool_n, pool_cap)
    pool_pairs = [(g, h) for g in reps_g for h in reps_h]
    if p == 2:
        pool_vecs = []
        for g, h in pool_pairs:
            v = 0
            for j, gj in enumerate(g):
                if gj:
                    for k, hk in enumerate(h):
                        if hk:
                            v |= 1 << (j * d3 + k)
            pool_vecs.append(v)
    else:
        pool_vecs = [
            [(gj * hk) % p for gj in g for hk in h] for g, h in pool_pairs
        ]

    steps = 0

    def attempt(r: int) -> tuple[int, ...] | None:
        nonlocal steps
        cur = make_row_span(p)
        joint = base.copy()
        chosen: list[int] = []

        def dfs(start: int) -> bool:
            nonlocal steps
            depth = len(chosen)
            if depth == r:
                return True
            last = pool_n - (r - depth) + 1
            for i in range(start, last):
                steps += 1
                if steps > step_cap:
                    raise BudgetExceeded("rank search", steps, step_cap)
                tok_c = cur.add(pool_vecs[i])
                if tok_c is None:
                    continue
                tok_j = joint.add(pool_vecs[i])
                if joint.dim <= r:
                    chosen.append(i)
                    if dfs(i + 1):
                        return True
                    chosen.pop()
                if tok_j is not None:
                    joint.remove(tok_j)
                cur.remove(tok_c)
            return False

        if dfs(0):
            return tuple(chosen)
        return None

    for r in range(r0, r_max + 1):
        hit = attempt(r)
        if hit is not None:
            witness = tuple(
                Matrix(field, d2, d3,
                       tuple((gj * hk) % p
                             for gj in pool_pairs[i][0] for hk in pool_pairs[i][1]))
                for i in hit
            )
            return (r, witness)
    return None


def _rank_one_factors(m: Matrix) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a nonzero rank-one matrix into column and row factors."""
    p = m.field.modulus
    j0 = k0 = None
    for j in range(m.rows):
        for k in range(m.cols):
            if m.at(j, k):
                j0, k0 = j, k
                break
        if j0 is not None:
            break
    if j0 is None:
        raise ValueError("zero matrix has no rank-one factorization")
    g = tuple(m.at(j, k0) for j in range(m.rows))
    inv = m.field.inv(m.at(j0, k0))
    h = tuple((m.at(j0, k) * inv) % p for k in range(m.cols))
    for j in range(m.rows):
        for k in range(m.cols):
            if m.at(j, k) != (g[j] * h[k]) % p:
                raise ValueError("matrix has rank greater than one")
    return g, h


def reconstruct_decomposition(
    slices: Sequence[Matrix], rank_ones: Sequence[Matrix]
) -> Decomposition:
    """Express each slice over the given rank-one matrices.

    Solves one linear system per slice (all at once) for the coefficient
    vectors, then reads the factors off the matrices.  Raises SpanFailure
    if some slice is outside the span.
    """
    if not slices:
        raise ValueError("need at least one slice")
    field = slices[0].field
    d1 = len(slices)
    d2, d3 = slices[0].rows, slices[0].cols
    factors = [_rank_one_factors(e) for e in rank_ones]
    cols = Matrix.from_rows(field, [e.entries for e in rank_ones], cols=d2 * d3).transpose()
    targets = Matrix.from_rows(field, [m.entries for m in slices], cols=d2 * d3).transpose()
    coeffs = solve(cols, targets)
    if coeffs is None:
        raise SpanFailure("a slice lies outside the span of the rank-one matrices")
    terms = tuple(
        RankOneTerm(coeffs.row(idx), g, h) for idx, (g, h) in enumerate(factors)
    )
    return Decomposition(field, (d1, d2, d3), terms)


def tensor_rank(
    t: Tensor3,
    r_max: int,
    *,
    pool_cap: int = DEFAULT_POOL_CAP,
    step_cap: int = DEFAULT_STEP_CAP,
) -> tuple[int, Decomposition] | None:
    """Exact rank of t with a witness decomposition, or None if it exceeds r_max.

    None is itself a certificate: the underlying search is exhaustive, so
    rank(t) > r_max is proven, not suspected.
    """
    found = min_spanning_rank_ones(
        t.slices(), r_max, pool_cap=pool_cap, step_cap=step_cap
    )
    if found is None:
        return None
    r, witness = found
    if r == 0:
        return (0, Decomposition(t.field, t.dims, ()))
    dec = reconstruct_decomposition(t.slices(), witness)
    if eval_decomposition(dec) != t:
        raise DecompositionMismatch(
            "internal error: reconstructed decomposition does not reproduce the tensor"
        )
    return (r, dec)
