"""Graphs, labelings, block counters and label-comparison primitives.

All values are immutable after construction (numpy buffers are marked
read-only), so they can be shared freely across threads.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

# Permutations are enumerated exhaustively up to this k; beyond it the
# label-matching problem is solved as an assignment problem instead.
_PERMUTATION_LIMIT = 8


def _freeze(arr, dtype=None):
    """Defensive copy marked read-only; callers keep ownership of their input."""
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph stored as a dense symmetric boolean adjacency.

    Node indices are 0-based everywhere in memory; file formats are 1-based.
    """

    n: int
    adj: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"node count must be positive, got {self.n}")
        adj = np.asarray(self.adj, dtype=bool)
        if adj.shape != (self.n, self.n):
            raise ValueError(f"adjacency shape {adj.shape} does not match n={self.n}")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "adj", _freeze(adj))

    @classmethod
    def from_edges(cls, n, edges):
        """Build a graph from an iterable of 0-based (i, j) pairs."""
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop ({i}, {j}) not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            adj[i, j] = True
            adj[j, i] = True
        return cls(n, adj)

    @property
    def edge_count(self):
        return int(self.adj.sum()) // 2

    def edges(self):
        """Sorted list of 0-based (i, j) pairs with i < j."""
        iu, ju = np.nonzero(np.triu(self.adj, k=1))
        return list(zip(iu.tolist(), ju.tolist()))

    def neighbors(self, i):
        return np.flatnonzero(self.adj[i])


@dataclass(frozen=True)
class Labeling:
    """Community assignment of n nodes into k communities, labels in {0..k-1}."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("labels must be a nonempty 1-d vector")
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if labels.min() < 0 or labels.max() >= self.k:
            raise ValueError(f"labels must lie in [0, {self.k})")
        object.__setattr__(self, "labels", _freeze(labels))

    @property
    def n(self):
        return int(self.labels.size)

    def sizes(self):
        """Community sizes n_a as a length-k integer vector."""
        return np.bincount(self.labels, minlength=self.k)

    def canonical(self):
        """Relabel communities by order of first occurrence.

        Label-permutation invariant objectives are unchanged; this picks a
        deterministic representative of each equivalence class.
        """
        mapping = {}
        out = np.empty_like(self.labels)
        for i, lab in enumerate(self.labels.tolist()):
            if lab not in mapping:
                mapping[lab] = len(mapping)
            out[i] = mapping[lab]
        return Labeling(out, self.k)

    def permuted(self, sigma):
        """Apply a label permutation sigma (sequence of length k)."""
        sigma = np.asarray(sigma, dtype=np.int64)
        if sorted(sigma.tolist()) != list(range(self.k)):
            raise ValueError("sigma must be a permutation of 0..k-1")
        return Labeling(sigma[self.labels], self.k)


@dataclass(frozen=True)
class BlockCounters:
    """Community sizes n_a, ordered pair counts n_ab and edge-endpoint counts o_ab.

    o_ab counts ordered pairs (i, j) with labels (a, b) joined by an edge, so
    diagonal entries count every within-community edge twice. The halved
    views expose the per-unordered-pair counters used by the integrated
    likelihood.
    """

    sizes: np.ndarray
    pair_counts: np.ndarray
    edge_counts: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sizes", _freeze(self.sizes, np.int64))
        object.__setattr__(self, "pair_counts", _freeze(self.pair_counts, np.int64))
        object.__setattr__(self, "edge_counts", _freeze(self.edge_counts, np.int64))

    @property
    def k(self):
        return int(self.sizes.size)

    def tilde_pair_counts(self):
        """Pair counts with the diagonal halved (unordered within-community pairs)."""
        out = self.pair_counts.copy()
        np.fill_diagonal(out, np.diagonal(out) // 2)
        return out

    def tilde_edge_counts(self):
        """Edge counts with the diagonal halved (each within edge counted once)."""
        out = self.edge_counts.copy()
        np.fill_diagonal(out, np.diagonal(out) // 2)
        return out


@dataclass(frozen=True)
class ConfusionMatrix:
    """Joint label frequencies R_ab = #{i: e_i=a, z_i=b} / n between two labelings."""

    r: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError("confusion matrix must be square")
        if (r < 0).any():
            raise ValueError("confusion matrix entries must be nonnegative")
        if abs(r.sum() - 1.0) > 1e-9:
            raise ValueError("confusion matrix entries must sum to 1")
        object.__setattr__(self, "r", _freeze(r))

    @property
    def k(self):
        return int(self.r.shape[0])

    def row_marginals(self):
        """Community fractions of the first labeling, [R 1]_a."""
        return self.r.sum(axis=1)

    def col_marginals(self):
        """Community fractions of the second labeling, [R^T 1]_a."""
        return self.r.sum(axis=0)


def _check_pair(e, z):
    if e.n != z.n:
        raise ValueError(f"labeling lengths differ: {e.n} vs {z.n}")
    if e.k != z.k:
        raise ValueError(f"community counts differ: {e.k} vs {z.k}")


def block_counters(g, z):
    """Count community sizes, ordered node pairs and edge endpoints per block."""
    if z.n != g.n:
        raise ValueError(f"labeling length {z.n} does not match graph size {g.n}")
    sizes = z.sizes()
    pair_counts = np.outer(sizes, sizes)
    np.fill_diagonal(pair_counts, sizes * (sizes - 1))
    member = np.zeros((g.n, z.k), dtype=np.int64)
    member[np.arange(g.n), z.labels] = 1
    edge_counts = member.T @ g.adj.astype(np.int64) @ member
    return BlockCounters(sizes, pair_counts, edge_counts)


def confusion_counts(e, z):
    """Integer joint label counts, i.e. n times the confusion matrix."""
    _check_pair(e, z)
    k = e.k
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (e.labels, z.labels), 1)
    return counts


def confusion(e, z):
    """Confusion matrix R(e, z) between two labelings with the same k."""
    return ConfusionMatrix(confusion_counts(e, z) / e.n)


def hamming_distance(e, z):
    """Plain label disagreement count, no permutation matching."""
    _check_pair(e, z)
    return int(np.count_nonzero(e.labels != z.labels))


def disagreement_fraction(e, z):
    """Disagreement fraction (1/n) * #{i: e_i != z_i} via the confusion identity.

    Evaluates (1/2) * ||Diag(R^T 1) - R||_1 in integer count space, where the
    identity with the Hamming fraction is exact, then divides by n once.
    """
    counts = confusion_counts(e, z)
    col_sums = counts.sum(axis=0)
    diff = np.diag(col_sums) - counts
    l1 = int(np.abs(diff).sum())
    assert l1 % 2 == 0
    return (l1 // 2) / e.n


def misclassification(e, z):
    """Minimum label disagreements over all permutations of the k labels.

    Exhaustive over permutations for small k, solved as a maximum-agreement
    assignment on the count matrix beyond that; both routes agree wherever
    both are applicable.
    """
    counts = confusion_counts(e, z)
    n, k = e.n, e.k
    if k <= _PERMUTATION_LIMIT:
        best = 0
        idx = np.arange(k)
        for sigma in itertools.permutations(range(k)):
            agree = int(counts[np.asarray(sigma), idx].sum())
            if agree > best:
                best = agree
    else:
        row, col = linear_sum_assignment(counts, maximize=True)
        best = int(counts[row, col].sum())
    return n - best


def meets_min_size(z, alpha):
    """True iff every community of z has at least alpha*n nodes.

    alpha is snapped to the nearest rational with denominator <= 10^12 so the
    comparison is exact and ties (n_a == alpha*n) count as satisfied.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    frac = Fraction(alpha).limit_denominator(10**12)
    sizes = z.sizes()
    threshold = frac.numerator * z.n
    return all(int(s) * frac.denominator >= threshold for s in sizes)


def min_feasible_size(n, alpha):
    """Smallest integer community size satisfying the alpha*n floor."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    frac = Fraction(alpha).limit_denominator(10**12)
    return -((-frac.numerator * n) // frac.denominator)
