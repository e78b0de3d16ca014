"""Independent oracles used by the tests.

Everything here is deliberately written against plain ints and tuples with
no imports from the package under test, so a bug in the library cannot hide
itself by infecting the check.
"""

from itertools import product


def gaussian_binomial(n: int, s: int, p: int) -> int:
    """Number of s-dimensional subspaces of GF(p)^n.

    Uses the (p^n - p^i) / (p^s - p^i) product, a different expression from
    the library's (ordered bases over ordered bases of one subspace).
    """
    if s < 0 or s > n:
        return 0
    num = den = 1
    for i in range(s):
        num *= p**n - p**i
        den *= p**s - p**i
    return num // den


def _projective_vectors(p: int, k: int):
    """Nonzero vectors with first nonzero coordinate 1, lex order."""
    out = []
    for v in product(range(p), repeat=k):
        nz = next((x for x in v if x), None)
        if nz == 1:
            out.append(v)
    return out


def rank_one_pool(p: int, d1: int, d2: int, d3: int):
    """Every distinct nonzero rank-one d1 x d2 x d3 tensor, as entry tuples.

    f runs over all nonzero vectors while g and h are projectively
    normalized; scaling freedom then forces uniqueness, so the pool has
    (p^d1 - 1) * ((p^d2-1)/(p-1)) * ((p^d3-1)/(p-1)) distinct members.
    """
    fs = [v for v in product(range(p), repeat=d1) if any(v)]
    gs = _projective_vectors(p, d2)
    hs = _projective_vectors(p, d3)
    pool = []
    for f in fs:
        for g in gs:
            for h in hs:
                pool.append(tuple(
                    (fi * gj * hk) % p for fi in f for gj in g for hk in h
                ))
    return pool


def pair_sums(pool, p: int):
    """Sums of two distinct pool tensors, keyed by the summed entries."""
    sums = {}
    for i in range(len(pool)):
        a = pool[i]
        for j in range(i + 1, len(pool)):
            b = pool[j]
            key = tuple((x + y) % p for x, y in zip(a, b))
            sums.setdefault(key, (i, j))
    return sums


def direct_tensor_rank(entries, pool, pairs, p: int):
    """Minimal number of rank-one tensors summing to the given entries,
    for ranks up to 4, by direct meet-in-the-middle search.

    Sound at each level r because a hit that reuses an index would reduce
    to a representation with fewer terms, which the earlier levels already
    ruled out.  Returns None if the rank exceeds 4.
    """
    if not any(entries):
        return 0
    pool_index = set(pool)
    if entries in pool_index:
        return 1
    if entries in pairs:
        return 2
    for x in pool:
        if tuple((e - v) % p for e, v in zip(entries, x)) in pairs:
            return 3
    for s in pairs:
        if tuple((e - v) % p for e, v in zip(entries, s)) in pairs:
            return 4
    return None
