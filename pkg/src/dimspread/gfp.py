"""Exact dense linear algebra over prime fields GF(p).

Matrices are immutable and store reduced residues in row-major order.
Elimination always takes the first nonzero pivot in column order, so the
reduced row echelon form and everything derived from it (kernel bases,
canonical solutions) is reproducible bit for bit.

Rows over GF(2) are packed into Python ints (bit j = column j) and
eliminated with word-wide XOR; every other prime goes through the generic
modular path.  The two paths agree exactly on GF(2) inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "PRIME_LIMIT",
    "FieldSpec",
    "GF2",
    "Matrix",
    "Rref",
    "rref",
    "kernel_basis",
    "solve",
    "Gf2RowSpan",
    "ModRowSpan",
    "make_row_span",
    "pack_bits",
    "unpack_bits",
    "matrix_row_bits",
]

PRIME_LIMIT = 1 << 16


def _is_prime(p: int) -> bool:
    """Trial division; moduli are capped at 2**16 so this is plenty."""
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field GF(p) with p <= 2**16."""

    modulus: int

    def __post_init__(self) -> None:
        p = self.modulus
        if not isinstance(p, int) or isinstance(p, bool):
            raise ValueError(f"modulus must be an int, got {p!r}")
        if p > PRIME_LIMIT:
            raise ValueError(f"modulus {p} exceeds the limit {PRIME_LIMIT}")
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")

    def inv(self, a: int) -> int:
        """Multiplicative inverse of a nonzero residue."""
        a %= self.modulus
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.modulus - 2, self.modulus)

    def __str__(self) -> str:
        return f"GF({self.modulus})"


GF2 = FieldSpec(2)


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over a prime field; entries reduced, row-major."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        p = self.field.modulus
        for x in self.entries:
            if not isinstance(x, int) or not 0 <= x < p:
                raise ValueError(f"entry {x!r} is not a reduced residue mod {p}")

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows, cols: int | None = None) -> "Matrix":
        """Build a matrix from an iterable of rows, reducing entries mod p."""
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols is required for a matrix with no rows")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("rows have inconsistent lengths")
        p = field.modulus
        return cls(field, len(rows), cols, tuple(x % p for r in rows for x in r))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, (0,) * (rows * cols))

    # ------------------------------------------------------------------
    # access
    # ------------------------------------------------------------------

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        p = self.field.modulus
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            tuple((a + b) % p for a, b in zip(self.entries, other.entries)),
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("mixed fields")
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        p = self.field.modulus
        out = []
        for i in range(self.rows):
            arow = self.row(i)
            acc = [0] * other.cols
            for k, c in enumerate(arow):
                if c:
                    brow = other.row(k)
                    for j, x in enumerate(brow):
                        if x:
                            acc[j] = (acc[j] + c * x) % p
            out.extend(acc)
        return Matrix(self.field, self.rows, other.cols, tuple(out))

    def scale(self, c: int) -> "Matrix":
        p = self.field.modulus
        c %= p
        return Matrix(self.field, self.rows, self.cols, tuple((c * x) % p for x in self.entries))

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValueError("mixed fields")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shapes do not match")

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


# ----------------------------------------------------------------------
# bit packing (GF(2) fast path)
# ----------------------------------------------------------------------


def pack_bits(seq) -> int:
    """Pack a 0/1 sequence into an int, bit j = position j."""
    v = 0
    for j, x in enumerate(seq):
        if x:
            v |= 1 << j
    return v


def unpack_bits(v: int, width: int) -> tuple[int, ...]:
    return tuple((v >> j) & 1 for j in range(width))


def matrix_row_bits(m: Matrix) -> tuple[int, ...]:
    """Rows of a GF(2) matrix as packed ints."""
    return tuple(pack_bits(m.row(i)) for i in range(m.rows))


# ----------------------------------------------------------------------
# elimination
# ----------------------------------------------------------------------


def _rref_dense(work: list[list[int]], pivot_cols: int, p: int):
    """In-place reduced row echelon form over GF(p).

    Pivots are searched only in the first `pivot_cols` columns (rows may be
    wider, e.g. when augmented with targets).  Returns (work, rank, pivots).
    """
    nrows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        pr = None
        for i in range(r, nrows):
            if work[i][c]:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        inv = pow(work[r][c], p - 2, p)
        if inv != 1:
            work[r] = [(x * inv) % p for x in work[r]]
        wr = work[r]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], wr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return work, r, pivots


def _rref_bits(work: list[int], pivot_cols: int):
    """In-place reduced row echelon form over GF(2) on bit-packed rows."""
    nrows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        mask = 1 << c
        pr = None
        for i in range(r, nrows):
            if work[i] & mask:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        wr = work[r]
        for i in range(nrows):
            if i != r and work[i] & mask:
                work[i] ^= wr
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return work, r, pivots


@dataclass(frozen=True)
class Rref:
    """Reduced row echelon form together with rank and pivot columns."""

    matrix: Matrix
    rank: int
    pivots: tuple[int, ...]


def rref(m: Matrix) -> Rref:
    """The unique reduced row echelon form of m (same shape, zero rows kept)."""
    if m.field.modulus == 2:
        work = [pack_bits(m.row(i)) for i in range(m.rows)]
        work, rank, pivots = _rref_bits(work, m.cols)
        entries = tuple(x for v in work for x in unpack_bits(v, m.cols))
    else:
        rows, rank, pivots = _rref_dense(m.row_lists(), m.cols, m.field.modulus)
        entries = tuple(x for r in rows for x in r)
    return Rref(Matrix(m.field, m.rows, m.cols, entries), rank, tuple(pivots))


def kernel_basis(m: Matrix) -> Matrix:
    """Canonical (RREF) basis of the right null space {v : m v = 0}.

    Returns a full-row-rank matrix whose rows span the kernel; the zero
    kernel comes back as a 0 x cols matrix.
    """
    red = rref(m)
    pivset = set(red.pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    p = m.field.modulus
    vecs = []
    for f in free:
        v = [0] * m.cols
        v[f] = 1
        for i, c in enumerate(red.pivots):
            v[c] = (-red.matrix.at(i, f)) % p
        vecs.append(v)
    if not vecs:
        return Matrix(m.field, 0, m.cols, ())
    rr = rref(Matrix.from_rows(m.field, vecs, cols=m.cols))
    return Matrix(m.field, rr.rank, m.cols, rr.matrix.entries[: rr.rank * m.cols])


def solve(m: Matrix, targets: Matrix) -> Matrix | None:
    """One exact solution X of m @ X = targets, or None if there is none.

    The solution is canonical: all free variables are set to zero.  Targets
    may have several columns; all of them must be solvable.
    """
    if m.field != targets.field:
        raise ValueError("mixed fields")
    if m.rows != targets.rows:
        raise ValueError("m and targets must have the same number of rows")
    p = m.field.modulus
    nc, tc = m.cols, targets.cols
    work = [list(m.row(i)) + list(targets.row(i)) for i in range(m.rows)]
    work, rank, pivots = _rref_dense(work, nc, p)
    for i in range(rank, m.rows):
        if any(work[i][nc:]):
            return None
    out = [[0] * tc for _ in range(nc)]
    for i, c in enumerate(pivots):
        out[c] = work[i][nc:]
    return Matrix(m.field, nc, tc, tuple(x for r in out for x in r))


# ----------------------------------------------------------------------
# incremental row spans (used by the verifiers and the rank search)
# ----------------------------------------------------------------------


class Gf2RowSpan:
    """Incremental row span over GF(2); rows are bit-packed ints.

    Rows are kept in echelon form (distinct leading bits, descending), so a
    single pass reduces a vector.  `add` returns an undo token; removal must
    be LIFO with respect to additions.
    """

    __slots__ = ("rows",)

    def __init__(self) -> None:
        self.rows: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: int) -> int:
        for r in self.rows:
            w = v ^ r
            if w < v:
                v = w
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def add(self, v: int):
        v = self.reduce(v)
        if v == 0:
            return None
        rows = self.rows
        pos = 0
        while pos < len(rows) and rows[pos] > v:
            pos += 1
        rows.insert(pos, v)
        return pos

    def remove(self, pos: int) -> None:
        del self.rows[pos]

    def copy(self) -> "Gf2RowSpan":
        dup = Gf2RowSpan()
        dup.rows = list(self.rows)
        return dup


class ModRowSpan:
    """Incremental row span over GF(p); rows normalized to unit leading entry.

    Same interface as Gf2RowSpan but vectors are sequences of residues.
    """

    __slots__ = ("p", "rows")

    def __init__(self, p: int) -> None:
        self.p = p
        self.rows: list[tuple[int, list[int]]] = []  # (lead index, row), ascending lead

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v) -> list[int]:
        v = list(v)
        p = self.p
        for lead, row in self.rows:
            c = v[lead]
            if c:
                v = [(a - c * b) % p for a, b in zip(v, row)]
        return v

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def add(self, v):
        v = self.reduce(v)
        lead = None
        for j, x in enumerate(v):
            if x:
                lead = j
                break
        if lead is None:
            return None
        inv = pow(v[lead], self.p - 2, self.p)
        if inv != 1:
            v = [(x * inv) % self.p for x in v]
        rows = self.rows
        pos = 0
        while pos < len(rows) and rows[pos][0] < lead:
            pos += 1
        rows.insert(pos, (lead, v))
        return pos

    def remove(self, pos: int) -> None:
        del self.rows[pos]

    def copy(self) -> "ModRowSpan":
        dup = ModRowSpan(self.p)
        dup.rows = list(self.rows)
        return dup


def make_row_span(p: int):
    """Row-span accumulator for GF(p); GF(2) gets the bit-packed variant."""
    return Gf2RowSpan() if p == 2 else ModRowSpan(p)
