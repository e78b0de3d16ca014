"""Canonical subspaces: arithmetic, enumeration order, sampling."""

import random

import pytest

from dimspread.errors import BudgetExceeded
from dimspread.gfp import GF2, FieldSpec, Matrix
from dimspread.subspace import (
    Subspace,
    annihilator,
    apply_map,
    enumerate_subspaces,
    grassmann_count,
    intersect,
    kernel,
    sample_subspace,
    sample_with_rng,
    span_of,
)
from oracles import gaussian_binomial

F3 = FieldSpec(3)


def line(field, *vec):
    return span_of(Matrix.from_rows(field, [vec]))


def test_span_of_duplicates():
    u = span_of(Matrix.from_rows(GF2, [[1, 0], [1, 0]]))
    assert u.dim == 1
    assert u.basis.entries == (1, 0)


def test_span_of_zero_rows():
    u = span_of(Matrix.zeros(GF2, 0, 3))
    assert u == Subspace.zero(GF2, 3)
    assert u.dim == 0


def test_span_of_canonicalizes():
    u = span_of(Matrix.from_rows(GF2, [[1, 1, 0], [0, 1, 1]]))
    # RREF of the two rows: clean the second pivot out of the first row
    assert u.basis.row_lists() == [[1, 0, 1], [0, 1, 1]]


def test_canonical_basis_enforced():
    with pytest.raises(ValueError):
        Subspace(GF2, 2, Matrix.from_rows(GF2, [[1, 1], [0, 1]]))  # col 1 not clean
    with pytest.raises(ValueError):
        Subspace(GF2, 2, Matrix.from_rows(GF2, [[0, 1], [1, 0]]))  # pivots decrease
    with pytest.raises(ValueError):
        Subspace(GF2, 2, Matrix.from_rows(GF2, [[0, 0]]))  # zero row
    with pytest.raises(ValueError):
        Subspace(F3, 2, Matrix.from_rows(F3, [[2, 0]]))  # pivot not 1


def test_sum_with_zero():
    a = line(GF2, 1, 1, 0)
    assert a + Subspace.zero(GF2, 3) == a


def test_sum_spans_plane():
    got = line(GF2, 1, 0) + line(GF2, 0, 1)
    assert got == Subspace.full(GF2, 2)


def test_sum_of_distinct_lines():
    got = line(GF2, 1, 1, 1) + line(GF2, 1, 1, 0)
    assert got.dim == 2
    assert (0, 0, 1) in got  # their difference


def test_membership_and_containment():
    u = span_of(Matrix.from_rows(F3, [[1, 0, 2], [0, 1, 1]]))
    assert (1, 1, 3) in u  # = row0 + row1 mod 3
    assert (1, 0, 0) not in u
    assert line(F3, 1, 0, 2) <= u
    assert not (u <= line(F3, 1, 0, 2))
    with pytest.raises(ValueError):
        (1, 0) in u


def test_apply_map_identity():
    u = span_of(Matrix.from_rows(GF2, [[1, 0, 1], [0, 1, 0]]))
    assert apply_map(Matrix.identity(GF2, 3), u) == u


def test_apply_map_nilpotent():
    n = Matrix.from_rows(GF2, [[0, 1], [0, 0]])  # e2 -> e1, e1 -> 0
    assert apply_map(n, line(GF2, 1, 0)).dim == 0
    assert apply_map(n, line(GF2, 0, 1)) == line(GF2, 1, 0)
    assert apply_map(n, Subspace.full(GF2, 2)) == line(GF2, 1, 0)


def test_apply_map_cycle_fixed_line():
    c = Matrix.from_rows(GF2, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    diag = line(GF2, 1, 1, 1)
    assert apply_map(c, diag) == diag


def test_intersect_examples():
    e1 = line(GF2, 1, 0, 0)
    e2 = line(GF2, 0, 1, 0)
    full = Subspace.full(GF2, 3)
    u = span_of(Matrix.from_rows(GF2, [[1, 1, 0], [0, 1, 1]]))
    assert intersect(u, full) == u
    assert (e1 & e2).dim == 0
    a = span_of(Matrix.from_rows(GF2, [[1, 0, 0], [0, 1, 0]]))
    b = span_of(Matrix.from_rows(GF2, [[0, 1, 0], [0, 0, 1]]))
    assert (a & b) == e2


def test_kernel_subspace():
    e11 = Matrix.from_rows(GF2, [[1, 0], [0, 0]])
    assert kernel(e11) == line(GF2, 0, 1)
    assert kernel(Matrix.identity(F3, 2)).dim == 0


def test_annihilator_involution():
    rng = random.Random(23)
    for p in (2, 3):
        field = FieldSpec(p)
        for _ in range(25):
            n = rng.randrange(1, 5)
            s = rng.randrange(0, n + 1)
            u = sample_with_rng(n, s, field, rng)
            ann = annihilator(u)
            assert ann.dim == n - u.dim
            assert annihilator(ann) == u


def test_dimension_formula_exhaustive():
    # dim(a) + dim(b) == dim(a + b) + dim(a & b) over every pair in GF(2)^4
    all_subs = [
        u for s in range(5) for u in enumerate_subspaces(4, s, GF2)
    ]
    assert len(all_subs) == 67
    for a in all_subs:
        for b in all_subs:
            assert a.dim + b.dim == (a + b).dim + (a & b).dim


def test_mixed_space_operations_rejected():
    with pytest.raises(ValueError):
        line(GF2, 1, 0) + line(GF2, 1, 0, 0)
    with pytest.raises(ValueError):
        line(GF2, 1, 0) & line(F3, 1, 0)


def test_grassmann_count_against_oracle():
    for p in (2, 3, 5):
        for n in range(5):
            for s in range(n + 1):
                assert grassmann_count(n, s, p) == gaussian_binomial(n, s, p)
    assert grassmann_count(3, 4, 2) == 0
    assert grassmann_count(3, -1, 2) == 0


def test_enumeration_counts_and_uniqueness():
    for p in (2, 3):
        field = FieldSpec(p)
        for n in range(5):
            for s in range(n + 1):
                subs = list(enumerate_subspaces(n, s, field))
                assert len(subs) == gaussian_binomial(n, s, p)
                assert len(set(subs)) == len(subs)
                assert all(u.dim == s for u in subs)


def test_line_order_frozen():
    # first-counterexample semantics depend on this exact order
    got = [u.basis.entries for u in enumerate_subspaces(3, 1, GF2)]
    assert got == [
        (1, 0, 0),
        (1, 0, 1),
        (1, 1, 0),
        (1, 1, 1),
        (0, 1, 0),
        (0, 1, 1),
        (0, 0, 1),
    ]


def test_enumeration_budget_is_eager():
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_subspaces(10, 5, GF2, enumeration_cap=100)
    assert exc.value.cap == 100
    assert exc.value.needed == grassmann_count(10, 5, 2)


def test_sampling_determinism_and_edges():
    assert sample_subspace(5, 2, GF2, 99) == sample_subspace(5, 2, GF2, 99)
    assert sample_subspace(4, 0, F3, 1) == Subspace.zero(F3, 4)
    assert sample_subspace(4, 4, F3, 1) == Subspace.full(F3, 4)
    with pytest.raises(ValueError):
        sample_subspace(3, 4, GF2, 0)


def test_sampling_is_roughly_uniform():
    # 7000 draws over the 7 lines of GF(2)^3; chi-square, df = 6.
    lines = list(enumerate_subspaces(3, 1, GF2))
    counts = dict.fromkeys(lines, 0)
    rng = random.Random(1234)
    draws = 7000
    for _ in range(draws):
        counts[sample_with_rng(3, 1, GF2, rng)] += 1
    expected = draws / len(lines)
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 22.458  # critical value at alpha = 0.001
