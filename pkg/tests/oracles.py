"""Slow reference implementations the test suite checks the library against.

Everything here is written from the definitions, in plain Python loops or
one-step numpy reductions, on purpose: no code is shared with the package so
an agreement between the two is meaningful.  Do not import these anywhere
outside the tests.
"""

import itertools
import math
from fractions import Fraction

import numpy as np


def naive_minkowski(a, b, q):
    """Direct power-sum evaluation, no overflow protection."""
    diffs = [abs(float(x) - float(y)) for x, y in zip(a, b)]
    if math.isinf(q):
        return max(diffs)
    return sum(d ** q for d in diffs) ** (1.0 / q)


def naive_pairwise_square(X, q):
    n = X.shape[0]
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = naive_minkowski(X[i], X[j], q)
    return D


def naive_cross(A, B, q):
    out = np.zeros((A.shape[0], B.shape[0]))
    for i in range(A.shape[0]):
        for j in range(B.shape[0]):
            out[i, j] = naive_minkowski(A[i], B[j], q)
    return out


def quantile_by_hand(values, prob):
    """h = (n - 1) p + 1 on the sorted sample, interpolating linearly."""
    v = sorted(float(x) for x in values)
    n = len(v)
    h = (n - 1) * prob + 1.0
    lo = int(math.floor(h))
    lo = min(max(lo, 1), n)
    hi = min(lo + 1, n)
    return v[lo - 1] + (h - lo) * (v[hi - 1] - v[lo - 1])


def solve_tail_by_bisection(M, target=1.5, iterations=300):
    """Root of (1 - M^-t)/t = target, taking the t -> 0 limit as log M."""

    def g(t):
        if t == 0.0:
            return math.log(M)
        return -math.expm1(-t * math.log(M)) / t

    lo, hi = -1.0, 1.0
    while g(lo) < target:
        lo *= 2.0
    while g(hi) > target:
        hi *= 2.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if g(mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def naive_linkage(D, method):
    """O(n^3) agglomeration recomputing every inter-cluster distance from the
    original dissimilarities at every step.

    Cluster ids follow the same convention as the library (originals 0..n-1,
    the merge at step s creates id n+s); ties on height go to the smallest
    (id_a, id_b) pair with id_a < id_b.  Returns (merges, heights).
    """
    n = D.shape[0]
    active = {i: (i,) for i in range(n)}
    merges = []
    heights = []
    for step in range(n - 1):
        best = None
        for a, b in itertools.combinations(sorted(active), 2):
            sub = D[np.ix_(active[a], active[b])]
            h = float(sub.max()) if method == "complete" else float(sub.mean())
            if best is None or h < best[0] or (h == best[0] and (a, b) < best[1:]):
                best = (h, a, b)
        h, a, b = best
        members = active.pop(a) + active.pop(b)
        active[n + step] = members
        merges.append((a, b))
        heights.append(h)
    return np.array(merges), np.array(heights)


def pam_brute_force(D, k):
    """Global optimum over all medoid subsets.  Returns (objective, medoids)."""
    n = D.shape[0]
    best_obj = math.inf
    best = None
    for subset in itertools.combinations(range(n), k):
        obj = float(D[:, subset].min(axis=1).sum())
        if obj < best_obj:
            best_obj = obj
            best = subset
    return best_obj, best


def improving_swap_exists(D, medoids, objective, tol=1e-12):
    """Exhaustive scan: does any single medoid/non-medoid swap beat objective?"""
    n = D.shape[0]
    medoids = set(int(m) for m in medoids)
    for out in sorted(medoids):
        for inb in range(n):
            if inb in medoids:
                continue
            trial = sorted(medoids - {out} | {inb})
            obj = float(D[:, trial].min(axis=1).sum())
            if obj < objective - tol:
                return True
    return False


def ari_by_fractions(u, v):
    """Hubert-Arabie ARI in exact rational arithmetic.

    Degenerate denominator follows the library's stated convention: 1 when
    the two label vectors describe the same set partition, otherwise 0.
    """
    u = list(u)
    v = list(v)
    n = len(u)
    cells = {}
    for a, b in zip(u, v):
        cells[(a, b)] = cells.get((a, b), 0) + 1
    row = {}
    col = {}
    for (a, b), c in cells.items():
        row[a] = row.get(a, 0) + c
        col[b] = col.get(b, 0) + c

    def pairs(counts):
        return sum(Fraction(c * (c - 1), 2) for c in counts)

    P = pairs(cells.values())
    A = pairs(row.values())
    B = pairs(col.values())
    C = Fraction(n * (n - 1), 2)
    expected = A * B / C
    maximum = Fraction(A + B, 2)
    if maximum == expected:
        parts_u = frozenset(frozenset(i for i in range(n) if u[i] == a) for a in set(u))
        parts_v = frozenset(frozenset(i for i in range(n) if v[i] == b) for b in set(v))
        return 1.0 if parts_u == parts_v else 0.0
    return float((P - expected) / (maximum - expected))


def nearest_neighbour_labels(D, labels):
    """1-NN over a square distance matrix, self excluded, lowest index wins ties."""
    n = D.shape[0]
    out = []
    for i in range(n):
        best_j = None
        for j in range(n):
            if j == i:
                continue
            if best_j is None or D[i, j] < D[i, best_j]:
                best_j = j
        out.append(labels[best_j])
    return np.array(out)
