"""Families of linear maps on GF(p)^n: symmetrization, word powers, monotone
matching maps, and exhaustive or sampled verification of dimension expansion
and dimension spreading.

All verdicts are exact.  Exhaustive runs enumerate Grassmannians in the
canonical order defined in `subspace`; sampled runs draw from a seeded RNG
and are reproducible from (seed, count) alone.  A sampled counterexample is
conclusive; a sampled "verified" only means no counterexample was found and
is flagged as non-conclusive.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded, ClosureViolation, MonotonicityViolation
from .gfp import FieldSpec, Gf2RowSpan, Matrix, make_row_span, matrix_row_bits, pack_bits
from .subspace import (
    DEFAULT_ENUMERATION_CAP,
    Subspace,
    cell_subspaces,
    grassmann_count,
    sample_with_rng,
    subspace_cells,
)

__all__ = [
    "DEFAULT_WORD_CAP",
    "MapFamily",
    "SpreadingParams",
    "Matching",
    "SpreadingResult",
    "ExpansionReport",
    "LargeExpansionRecord",
    "LargeExpansionResult",
    "symmetrize",
    "words",
    "word_length_for",
    "matching_maps",
    "shift_matchings",
    "dyadic_matchings",
    "verify_spreading",
    "verify_expander",
    "measure_expansion",
    "verify_large_expansion",
    "spreading_profile",
]

DEFAULT_WORD_CAP = 10**6


@dataclass(frozen=True)
class MapFamily:
    """A finite ordered family of linear maps GF(p)^n -> GF(p)^n."""

    field: FieldSpec
    n: int
    maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("ambient dimension must be at least 1")
        if len(self.maps) < 1:
            raise ValueError("a family holds at least one map")
        for m in self.maps:
            if m.field != self.field:
                raise ValueError("map field does not match the family")
            if (m.rows, m.cols) != (self.n, self.n):
                raise ValueError("maps must be square of size n")

    def __len__(self) -> int:
        return len(self.maps)


@dataclass(frozen=True)
class SpreadingParams:
    """Spreading thresholds: every subspace of dim >= s must reach image-sum
    dimension >= t."""

    s: int
    t: int

    def __post_init__(self) -> None:
        if self.s < 1:
            raise ValueError("s must be at least 1")
        if self.t < 0:
            raise ValueError("t must be non-negative")


@dataclass(frozen=True)
class SpreadingResult:
    """Outcome of a spreading or expander verification."""

    verified: bool
    exhaustive: bool
    counterexample: Subspace | None = None
    achieved: int | None = None
    samples: int | None = None
    seed: int | None = None

    @property
    def conclusive(self) -> bool:
        """Counterexamples are always conclusive; 'verified' only when exhaustive."""
        return self.exhaustive or not self.verified


@dataclass(frozen=True)
class ExpansionReport:
    """Exact expansion profile over dimensions 1..floor(n/2)."""

    tau_star: Fraction
    witness: Subspace
    per_dimension: tuple[tuple[int, int], ...]  # (dim, min image-sum dim)
    exhaustive: bool


@dataclass(frozen=True)
class LargeExpansionRecord:
    """Achieved growth of one subspace above half dimension."""

    dim: int
    image_sum_dim: int
    delta: Fraction  # image_sum_dim/dim - 1
    sharper_bound: Fraction  # tau*(1-alpha) / ((1+tau)*alpha)
    meets_sharper: bool


@dataclass(frozen=True)
class LargeExpansionResult:
    verified: bool
    counterexample: Subspace | None
    achieved: int | None
    records: tuple[LargeExpansionRecord, ...]


# ----------------------------------------------------------------------
# family constructions
# ----------------------------------------------------------------------


def symmetrize(fam: MapFamily) -> MapFamily:
    """Extend with every transpose and the identity; dedupe, keep order.

    Originals come first (first occurrence kept), then new transposes in the
    order of their originals, then the identity if it is still missing.
    """
    out: list[Matrix] = []
    seen: set[Matrix] = set()
    for m in fam.maps:
        if m not in seen:
            seen.add(m)
            out.append(m)
    for m in fam.maps:
        t = m.transpose()
        if t not in seen:
            seen.add(t)
            out.append(t)
    ident = Matrix.identity(fam.field, fam.n)
    if ident not in seen:
        out.append(ident)
    return MapFamily(fam.field, fam.n, tuple(out))


def _mul_gf2(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Product of bit-packed GF(2) matrices (rows as ints)."""
    out = []
    for ar in a:
        w = 0
        x = ar
        while x:
            k = (x & -x).bit_length() - 1
            w ^= b[k]
            x &= x - 1
        out.append(w)
    return tuple(out)


def _mul_mod(a, b, p: int):
    """Product of tuple-of-tuple-rows matrices over GF(p)."""
    width = len(b[0])
    out = []
    for ar in a:
        acc = [0] * width
        for k, c in enumerate(ar):
            if c:
                brow = b[k]
                for j, x in enumerate(brow):
                    if x:
                        acc[j] = (acc[j] + c * x) % p
        out.append(tuple(acc))
    return tuple(out)


def words(fam: MapFamily, t: int, *, word_cap: int = DEFAULT_WORD_CAP) -> MapFamily:
    """All products of exactly t maps from the family, deduplicated.

    Order is canonical: lexicographic in the index word (i1, ..., it), first
    occurrence kept.  Duplicate prefixes are collapsed level by level, which
    provably preserves that order.  The budget applies to the nominal D**t
    product count, before deduplication.
    """
    if t < 1:
        raise ValueError("word length must be at least 1")
    d = len(fam.maps)
    nominal = d**t
    if nominal > word_cap:
        raise BudgetExceeded("word expansion", nominal, word_cap)
    p = fam.field.modulus
    if p == 2:
        mats = [matrix_row_bits(m) for m in fam.maps]
        mul = _mul_gf2
    else:
        mats = [tuple(m.row(i) for i in range(fam.n)) for m in fam.maps]
        mul = lambda a, b: _mul_mod(a, b, p)  # noqa: E731
    level: list = []
    seen: set = set()
    for m in mats:
        if m not in seen:
            seen.add(m)
            level.append(m)
    for _ in range(t - 1):
        nxt: list = []
        seen = set()
        for w in level:
            for m in mats:
                prod = mul(w, m)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        level = nxt
    n = fam.n
    if p == 2:
        out = tuple(
            Matrix(fam.field, n, n, tuple((row >> j) & 1 for row in m for j in range(n)))
            for m in level
        )
    else:
        out = tuple(Matrix(fam.field, n, n, tuple(x for row in m for x in row)) for m in level)
    return MapFamily(fam.field, n, out)


def word_length_for(epsilon, tau) -> int:
    """Least word length t with t > 3*log2(1/epsilon)/tau, computed exactly.

    The comparison is done in integer arithmetic (2**(t*a) * eN**(3*b) >
    eD**(3*b) for tau = a/b, epsilon = eN/eD), so boundary cases where the
    bound is an integer round the right way: the inequality is strict.
    """
    eps = Fraction(epsilon)
    tau = Fraction(tau)
    if not 0 < eps < 1:
        raise ValueError("epsilon must satisfy 0 < epsilon < 1")
    if tau <= 0:
        raise ValueError("tau must be positive")
    en, ed = eps.numerator, eps.denominator
    a, b = tau.numerator, tau.denominator
    rhs = ed ** (3 * b)
    scale = en ** (3 * b)

    def ok(t: int) -> bool:
        return (1 << (t * a)) * scale > rhs

    est = 3 * b * (math.log2(ed) - math.log2(en)) / a
    t = max(1, int(est) - 2)
    while not ok(t):
        t += 1
    while t > 1 and ok(t - 1):
        t -= 1
    return t


@dataclass(frozen=True)
class Matching:
    """A monotone partial matching on [n]: pairs (i, f(i)), 1-based.

    Both sides are used at most once and i1 < i2 implies f(i1) < f(i2).
    Pairs are stored sorted by left index.
    """

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        pairs = sorted(self.pairs)
        object.__setattr__(self, "pairs", tuple(pairs))
        for i, j in pairs:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"pair ({i}, {j}) is out of range for n={self.n}")
        for a, b in zip(pairs, pairs[1:]):
            if a[0] == b[0]:
                raise ValueError(f"left index {a[0]} is matched twice")
            if a[1] == b[1]:
                raise ValueError(f"right index {a[1]} is matched twice")
            if a[1] > b[1]:
                raise MonotonicityViolation(a, b)

    @classmethod
    def identity(cls, n: int) -> "Matching":
        return cls(n, tuple((i, i) for i in range(1, n + 1)))


def matching_maps(matchings: Sequence[Matching], field: FieldSpec) -> MapFamily:
    """0/1 maps sending e_i to e_f(i) (columns not matched go to zero)."""
    if not matchings:
        raise ValueError("need at least one matching")
    n = matchings[0].n
    if any(m.n != n for m in matchings):
        raise ValueError("matchings have inconsistent sizes")
    out = []
    for m in matchings:
        entries = [0] * (n * n)
        for i, j in m.pairs:
            entries[(j - 1) * n + (i - 1)] = 1  # column i has its 1 in row f(i)
        out.append(Matrix(field, n, n, tuple(entries)))
    return MapFamily(field, n, tuple(out))


def shift_matchings(n: int) -> list[Matching]:
    """Identity plus the two unit shifts i -> i+1 and i -> i-1 (non-cyclic)."""
    up = Matching(n, tuple((i, i + 1) for i in range(1, n)))
    down = Matching(n, tuple((i, i - 1) for i in range(2, n + 1)))
    return [Matching.identity(n), up, down]


def dyadic_matchings(n: int) -> list[Matching]:
    """Identity plus the power-of-two shifts i -> i + 2**k that fit in [n]."""
    out = [Matching.identity(n)]
    k = 1
    while k < n:
        out.append(Matching(n, tuple((i, i + k) for i in range(1, n - k + 1))))
        k *= 2
    return out


# ----------------------------------------------------------------------
# image-sum computation
# ----------------------------------------------------------------------


def _make_imagesum(fam: MapFamily):
    """Returns f(subspace) -> dim(sum of images), specialized per field."""
    p = fam.field.modulus
    n = fam.n
    if p == 2:
        maps_bits = [matrix_row_bits(m) for m in fam.maps]

        def image_sum(sub: Subspace) -> int:
            basis = [pack_bits(sub.basis.row(i)) for i in range(sub.dim)]
            span = Gf2RowSpan()
            for rows in maps_bits:
                for v in basis:
                    w = 0
                    for j, rj in enumerate(rows):
                        if (v & rj).bit_count() & 1:
                            w |= 1 << j
                    if w and span.add(w) is not None and span.dim == n:
                        return n
            return span.dim

    else:
        maps_rows = [m.row_lists() for m in fam.maps]

        def image_sum(sub: Subspace) -> int:
            basis = [sub.basis.row(i) for i in range(sub.dim)]
            span = make_row_span(p)
            for rows in maps_rows:
                for v in basis:
                    w = [sum(c * v[k] for k, c in enumerate(row) if c) % p for row in rows]
                    if span.add(w) is not None and span.dim == n:
                        return n
            return span.dim

    return image_sum


# ----------------------------------------------------------------------
# scan engines (exhaustive, deterministic under threading)
# ----------------------------------------------------------------------


def _blocks_for_dims(fam: MapFamily, dims: Sequence[int], enumeration_cap: int, stage: str):
    """Schubert-cell blocks for the given dimensions with global start indices."""
    p = fam.field.modulus
    total = sum(grassmann_count(fam.n, d, p) for d in dims)
    if total > enumeration_cap:
        raise BudgetExceeded(stage, total, enumeration_cap)
    blocks = []
    idx = 0
    for d in dims:
        for pivots, free, count in subspace_cells(fam.n, d, p):
            blocks.append((idx, d, pivots, free))
            idx += count
    return blocks


def _split_blocks(blocks, threads: int):
    """Contiguous split into at most `threads` groups, balanced by block count."""
    if threads <= 1 or len(blocks) <= 1:
        return [blocks]
    groups = []
    size = max(1, -(-len(blocks) // threads))
    for i in range(0, len(blocks), size):
        groups.append(blocks[i : i + size])
    return groups


def _first_violation(fam: MapFamily, thresholds: dict[int, int], threads: int,
                     enumeration_cap: int, stage: str):
    """First subspace (canonical order) whose image-sum dim is below threshold.

    Returns (global index, subspace, achieved) or None.  The scan is split by
    Schubert-cell blocks across worker threads; the merge keeps the smallest
    global index, so the result does not depend on the thread count.
    """
    dims = sorted(thresholds)
    blocks = _blocks_for_dims(fam, dims, enumeration_cap, stage)
    image_sum = _make_imagesum(fam)

    def scan(group):
        for start, d, pivots, free in group:
            need = thresholds[d]
            for off, sub in enumerate(cell_subspaces(fam.field, fam.n, pivots, free)):
                a = image_sum(sub)
                if a < need:
                    return (start + off, sub, a)
        return None

    groups = _split_blocks(blocks, threads)
    if len(groups) == 1:
        return scan(groups[0])
    with ThreadPoolExecutor(max_workers=len(groups)) as pool:
        hits = [h for h in pool.map(scan, groups) if h is not None]
    return min(hits, key=lambda h: h[0]) if hits else None


def _per_dim_minima(fam: MapFamily, dims: Sequence[int], threads: int,
                    enumeration_cap: int, stage: str):
    """Exact minimum image-sum dimension per subspace dimension.

    Returns {dim: (min image-sum dim, global index of first witness, witness)}.
    """
    blocks = _blocks_for_dims(fam, dims, enumeration_cap, stage)
    image_sum = _make_imagesum(fam)

    def scan(group):
        local: dict[int, tuple[int, int, Subspace]] = {}
        for start, d, pivots, free in group:
            for off, sub in enumerate(cell_subspaces(fam.field, fam.n, pivots, free)):
                a = image_sum(sub)
                cur = local.get(d)
                if cur is None or a < cur[0]:
                    local[d] = (a, start + off, sub)
        return local

    groups = _split_blocks(blocks, threads)
    if len(groups) == 1:
        merged = scan(groups[0])
    else:
        with ThreadPoolExecutor(max_workers=len(groups)) as pool:
            merged = {}
            for local in pool.map(scan, groups):
                for d, cand in local.items():
                    cur = merged.get(d)
                    if cur is None or (cand[0], cand[1]) < (cur[0], cur[1]):
                        merged[d] = cand
    return merged


# ----------------------------------------------------------------------
# verifiers
# ----------------------------------------------------------------------


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def verify_spreading(
    fam: MapFamily,
    params: SpreadingParams,
    *,
    samples: int | None = None,
    seed: int | None = None,
    threads: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> SpreadingResult:
    """Check that every subspace of dim >= s has image-sum dimension >= t.

    Because image sums are monotone in the subspace, a violation at a larger
    dimension implies one at dimension s, so only dim(U) = s is scanned.
    Exhaustive mode reports the first counterexample in canonical order;
    sampled mode (samples, seed) reports the first one drawn.
    """
    if not 1 <= params.s <= fam.n:
        raise ValueError(f"s={params.s} is not between 1 and n={fam.n}")
    if params.t > fam.n:
        raise ValueError(f"t={params.t} exceeds n={fam.n}")
    if samples is None:
        hit = _first_violation(
            fam, {params.s: params.t}, threads, enumeration_cap, "spreading verification"
        )
        if hit is None:
            return SpreadingResult(verified=True, exhaustive=True)
        _, sub, achieved = hit
        return SpreadingResult(False, True, sub, achieved)
    if seed is None:
        raise ValueError("sampled mode requires a seed")
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = random.Random(seed)
    image_sum = _make_imagesum(fam)
    for _ in range(samples):
        sub = sample_with_rng(fam.n, params.s, fam.field, rng)
        a = image_sum(sub)
        if a < params.t:
            return SpreadingResult(False, False, sub, a, samples=samples, seed=seed)
    return SpreadingResult(True, False, samples=samples, seed=seed)


def _expander_dims(n: int) -> list[int]:
    return list(range(1, n // 2 + 1))


def verify_expander(
    fam: MapFamily,
    tau,
    *,
    samples: int | None = None,
    seed: int | None = None,
    threads: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> SpreadingResult:
    """Check dim(sum of images of U) >= (1+tau) dim(U) for all dim(U) <= n/2.

    Unlike spreading there is no single-dimension shortcut: the required
    growth scales with dim(U), so every dimension 1..floor(n/2) is checked.
    """
    tau = Fraction(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    dims = _expander_dims(fam.n)
    if not dims:
        raise ValueError("expansion needs n >= 2")
    thresholds = {d: _ceil_fraction((1 + tau) * d) for d in dims}
    if samples is None:
        hit = _first_violation(fam, thresholds, threads, enumeration_cap,
                               "expander verification")
        if hit is None:
            return SpreadingResult(verified=True, exhaustive=True)
        _, sub, achieved = hit
        return SpreadingResult(False, True, sub, achieved)
    if seed is None:
        raise ValueError("sampled mode requires a seed")
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = random.Random(seed)
    image_sum = _make_imagesum(fam)
    for d in dims:
        for _ in range(samples):
            sub = sample_with_rng(fam.n, d, fam.field, rng)
            a = image_sum(sub)
            if a < thresholds[d]:
                return SpreadingResult(False, False, sub, a, samples=samples, seed=seed)
    return SpreadingResult(True, False, samples=samples, seed=seed)


def measure_expansion(
    fam: MapFamily,
    *,
    samples: int | None = None,
    seed: int | None = None,
    threads: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> ExpansionReport:
    """Largest tau the family achieves: min over dims <= n/2 of ratio - 1.

    Exhaustive mode is exact; sampled mode gives an upper-bound estimate
    (usable to refute, never to certify) and is flagged non-exhaustive.
    The witness is the first subspace attaining the minimum ratio, scanning
    dimensions in increasing order.
    """
    dims = _expander_dims(fam.n)
    if not dims:
        raise ValueError("expansion needs n >= 2")
    if samples is None:
        minima = _per_dim_minima(fam, dims, threads, enumeration_cap,
                                 "expansion measurement")
        exhaustive = True
    else:
        if seed is None:
            raise ValueError("sampled mode requires a seed")
        if samples < 1:
            raise ValueError("samples must be positive")
        rng = random.Random(seed)
        image_sum = _make_imagesum(fam)
        minima = {}
        idx = 0
        for d in dims:
            for _ in range(samples):
                sub = sample_with_rng(fam.n, d, fam.field, rng)
                a = image_sum(sub)
                cur = minima.get(d)
                if cur is None or a < cur[0]:
                    minima[d] = (a, idx, sub)
                idx += 1
        exhaustive = False
    tau_star = None
    witness = None
    per_dim = []
    for d in dims:
        value, idx, sub = minima[d]
        per_dim.append((d, value))
        ratio = Fraction(value, d) - 1
        if tau_star is None or ratio < tau_star:
            tau_star = ratio
            witness = sub
    return ExpansionReport(tau_star, witness, tuple(per_dim), exhaustive)


def verify_large_expansion(
    fam: MapFamily,
    tau,
    *,
    threads: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
    check_expander: bool = True,
) -> LargeExpansionResult:
    """For n/2 < dim(U) < n check dim(sum of images) >= (1 + tau(1-a)/2) dim(U),
    where a = dim(U)/n.

    Requires the family to contain the identity and the transpose of each of
    its maps (ClosureViolation otherwise), and to actually be a tau-expander;
    the expander precondition is verified when its enumeration fits the cap
    and skipped otherwise.  Each scanned subspace's achieved growth delta is
    recorded next to the sharper bound tau(1-a)/((1+tau)a) for inspection.
    """
    tau = Fraction(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    present = set(fam.maps)
    if Matrix.identity(fam.field, fam.n) not in present:
        raise ClosureViolation("family does not contain the identity")
    for m in fam.maps:
        if m.transpose() not in present:
            raise ClosureViolation("family is not closed under transpose")
    if check_expander:
        try:
            pre = verify_expander(fam, tau, threads=threads, enumeration_cap=enumeration_cap)
        except BudgetExceeded:
            pre = None
        if pre is not None and not pre.verified:
            raise ValueError(
                f"family is not a {tau}-expander "
                f"(dim {pre.counterexample.dim} subspace reaches only {pre.achieved})"
            )
    n = fam.n
    dims = [d for d in range(n // 2 + 1, n)]
    blocks = _blocks_for_dims(fam, dims, enumeration_cap, "large-subspace expansion")
    image_sum = _make_imagesum(fam)
    thresholds = {d: _ceil_fraction((1 + tau * (1 - Fraction(d, n)) / 2) * d) for d in dims}
    sharper = {d: (tau * (1 - Fraction(d, n))) / ((1 + tau) * Fraction(d, n)) for d in dims}

    def scan(group):
        records = []
        worst = None
        for start, d, pivots, free in group:
            for off, sub in enumerate(cell_subspaces(fam.field, fam.n, pivots, free)):
                a = image_sum(sub)
                delta = Fraction(a, d) - 1
                records.append(
                    LargeExpansionRecord(d, a, delta, sharper[d], delta >= sharper[d])
                )
                if a < thresholds[d] and worst is None:
                    worst = (start + off, sub, a)
        return records, worst

    groups = _split_blocks(blocks, threads)
    if len(groups) == 1:
        all_records, hit = scan(groups[0])
    else:
        with ThreadPoolExecutor(max_workers=len(groups)) as pool:
            results = list(pool.map(scan, groups))
        all_records = [rec for recs, _ in results for rec in recs]
        hits = [h for _, h in results if h is not None]
        hit = min(hits, key=lambda h: h[0]) if hits else None
    if hit is None:
        return LargeExpansionResult(True, None, None, tuple(all_records))
    _, sub, achieved = hit
    return LargeExpansionResult(False, sub, achieved, tuple(all_records))


def spreading_profile(
    fam: MapFamily,
    *,
    threads: int = 1,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[tuple[int, int], ...]:
    """For each s in 1..n, the largest t such that (s, t)-spreading holds.

    That largest t is exactly the minimum image-sum dimension over the
    dim-s subspaces.
    """
    dims = list(range(1, fam.n + 1))
    minima = _per_dim_minima(fam, dims, threads, enumeration_cap, "spreading profile")
    return tuple((d, minima[d][0]) for d in dims)
