"""Distance-based learners: k-medoids (PAM), agglomerative linkage, kNN.

Everything here consumes precomputed distances, so the learners are agnostic
to how the distances were built.  All tie-breaks are deterministic and index
based: equal candidates go to the lowest object index (or lowest node-id pair
for linkage merges), so results are reproducible down to the bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CondensedDistanceMatrix, check_labels

__all__ = [
    "Clustering",
    "Dendrogram",
    "pam",
    "linkage",
    "cut_tree",
    "knn_classify",
]

LINKAGE_METHODS = ("complete", "average")


@dataclass(frozen=True)
class Clustering:
    """A flat clustering: labels 1..k, optionally medoids and a PAM objective."""

    labels: np.ndarray = field(repr=False)
    medoids: np.ndarray | None = None
    objective: float | None = None

    def __post_init__(self):
        labels, _ = check_labels(self.labels)
        object.__setattr__(self, "labels", labels)
        if self.medoids is not None:
            object.__setattr__(self, "medoids", np.asarray(self.medoids, dtype=np.int64))


@dataclass(frozen=True)
class Dendrogram:
    """Agglomeration history: leaves 0..n-1, internal nodes n..2n-2.

    Row s of ``merges`` holds the two node ids joined at step s (smaller id
    first), creating node ``n_leaves + s`` at height ``heights[s]``.
    """

    n_leaves: int
    merges: np.ndarray = field(repr=False)
    heights: np.ndarray = field(repr=False)

    def __post_init__(self):
        merges = np.asarray(self.merges, dtype=np.int64)
        heights = np.asarray(self.heights, dtype=np.float64)
        n = self.n_leaves
        if n < 2:
            raise ValueError("need at least 2 leaves")
        if merges.shape != (n - 1, 2) or heights.shape != (n - 1,):
            raise ValueError("inconsistent merge history shapes")
        object.__setattr__(self, "merges", merges)
        object.__setattr__(self, "heights", heights)


def _square(D):
    if not isinstance(D, CondensedDistanceMatrix):
        raise TypeError("expected a CondensedDistanceMatrix")
    return D.to_square()


def pam(D, k):
    """Partitioning around medoids: greedy build, then best-improvement swaps.

    Build starts from the object minimising the total distance to all others
    and greedily adds the object with the largest cost reduction.  The swap
    phase repeatedly applies the single (medoid, non-medoid) exchange that
    lowers the total distance-to-nearest-medoid the most, until none improves.
    All ties go to the lowest object index; clusters are numbered 1..k by
    ascending medoid index, and an object equidistant to several medoids joins
    the lowest-numbered cluster (each medoid stays in its own cluster).

    Parameters
    ----------
    D : CondensedDistanceMatrix
    k : int, 2 <= k < n

    Returns
    -------
    Clustering
        With ``medoids`` (ascending) and ``objective`` (total cost) set.
    """
    W = _square(D)
    n = D.n
    if not 2 <= k < n:
        raise ValueError("k must satisfy 2 <= k < n=%d, got %d" % (n, k))

    # build
    first = int(np.argmin(W.sum(axis=1)))
    medoids = [first]
    near = W[first].copy()
    while len(medoids) < k:
        gains = np.maximum(near[None, :] - W, 0.0).sum(axis=1)
        gains[medoids] = -1.0
        c = int(np.argmax(gains))
        medoids.append(c)
        near = np.minimum(near, W[c])

    # swap until no strict improvement
    while True:
        chosen = sorted(medoids)
        current = np.minimum.reduce([W[m] for m in chosen]).sum()
        best_delta = 0.0
        best = None
        in_medoids = np.zeros(n, dtype=bool)
        in_medoids[chosen] = True
        for m in chosen:
            others = [x for x in chosen if x != m]
            d_excl = np.minimum.reduce([W[x] for x in others])
            for h in range(n):
                if in_medoids[h]:
                    continue
                delta = np.minimum(d_excl, W[h]).sum() - current
                if delta < best_delta:
                    best_delta = delta
                    best = (m, h)
        if best is None:
            break
        medoids.remove(best[0])
        medoids.append(best[1])

    chosen = sorted(medoids)
    dists = W[chosen]  # (k, n)
    labels = np.argmin(dists, axis=0).astype(np.int64) + 1
    labels[chosen] = np.arange(1, k + 1)  # a medoid never leaves its own cluster
    objective = float(dists.min(axis=0).sum())
    return Clustering(labels=labels, medoids=np.array(chosen, dtype=np.int64), objective=objective)


def linkage(D, method):
    """Agglomerative clustering with complete or average linkage.

    Starts from singletons and repeatedly joins the pair of clusters with the
    smallest inter-cluster distance: the largest member distance for
    ``complete``, the unweighted mean over member pairs for ``average``.
    Equal candidate distances are broken by the smallest (left, right) node-id
    pair.

    Returns
    -------
    Dendrogram
    """
    if method not in LINKAGE_METHODS:
        raise ValueError("unknown linkage method %r" % (method,))
    W = _square(D)
    n = D.n
    ids = list(range(n))  # ascending by construction: new ids exceed old ones
    sizes = [1] * n
    merges = np.empty((n - 1, 2), dtype=np.int64)
    heights = np.empty(n - 1)
    for step in range(n - 1):
        m = len(ids)
        iu = np.triu_indices(m, 1)
        flat = int(np.argmin(W[iu]))  # first minimum = smallest (id, id) pair
        a, b = int(iu[0][flat]), int(iu[1][flat])
        merges[step] = (ids[a], ids[b])
        heights[step] = W[a, b]
        if method == "complete":
            row = np.maximum(W[a], W[b])
        else:
            row = (sizes[a] * W[a] + sizes[b] * W[b]) / (sizes[a] + sizes[b])
        row = np.delete(row, [a, b])
        W = np.delete(np.delete(W, [a, b], axis=0), [a, b], axis=1)
        W = np.pad(W, ((0, 1), (0, 1)))
        W[-1, :-1] = row
        W[:-1, -1] = row
        new_size = sizes[a] + sizes[b]
        for pos in sorted((a, b), reverse=True):
            del ids[pos]
            del sizes[pos]
        ids.append(n + step)
        sizes.append(new_size)
    return Dendrogram(n_leaves=n, merges=merges, heights=heights)


def cut_tree(dendrogram, k):
    """Partition into k clusters by undoing the last k-1 merges.

    Clusters are numbered 1..k in order of their smallest member index.

    Returns
    -------
    np.ndarray of int64 labels, one per leaf.
    """
    n = dendrogram.n_leaves
    if not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= n=%d, got %d" % (n, k))
    members = {i: [i] for i in range(n)}
    for step in range(n - k):
        left, right = dendrogram.merges[step]
        created = n + step
        members[created] = members.pop(int(left)) + members.pop(int(right))
    groups = sorted(members.values(), key=min)
    labels = np.empty(n, dtype=np.int64)
    for number, group in enumerate(groups, start=1):
        labels[group] = number
    return labels


def knn_classify(cross_distances, train_labels, k):
    """k-nearest-neighbour majority vote from a precomputed distance matrix.

    Parameters
    ----------
    cross_distances : (n_test, n_train) array
        Entry (a, b) is the distance from test object a to training object b.
    train_labels : label vector of length n_train
    k : int, 1 <= k <= n_train

    Tie rules: equal distances at the k-th neighbour go to the lower training
    index; vote ties go to the class with the smaller summed distance over its
    voting neighbours, then to the smaller class label.

    Returns
    -------
    np.ndarray of int64 predicted labels, one per test object.
    """
    Dx = np.asarray(cross_distances, dtype=np.float64)
    if Dx.ndim != 2:
        raise ValueError("expected a 2-D cross-distance matrix")
    if not np.all(np.isfinite(Dx)) or np.any(Dx < 0):
        raise ValueError("distances must be finite and non-negative")
    y, n_classes = check_labels(train_labels, n_expected=Dx.shape[1])
    if not 1 <= k <= Dx.shape[1]:
        raise ValueError("k must satisfy 1 <= k <= n_train=%d, got %d" % (Dx.shape[1], k))
    out = np.empty(Dx.shape[0], dtype=np.int64)
    for a in range(Dx.shape[0]):
        row = Dx[a]
        neighbours = np.argsort(row, kind="stable")[:k]
        votes = np.bincount(y[neighbours], minlength=n_classes + 1)
        top = votes.max()
        tied = np.flatnonzero(votes == top)
        if tied.shape[0] == 1:
            out[a] = tied[0]
            continue
        best = None
        best_sum = np.inf
        for c in tied:  # ascending labels: the strict < keeps the smaller one on ties
            s = row[neighbours[y[neighbours] == c]].sum()
            if s < best_sum:
                best_sum = s
                best = c
        out[a] = best
    return out
