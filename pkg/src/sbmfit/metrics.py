"""Partition comparison metrics."""

import math

import numpy as np


def _entropy_from_counts(counts, n):
    """Plug-in entropy in nats: log(n) - (1/n) * sum c*log(c).

    Counts are sorted before accumulation so that partitions with the same
    size multiset get bitwise-identical entropies regardless of labeling.
    """
    nz = np.sort(counts[counts > 0])
    s = float(np.sum(nz * np.log(nz)))
    return math.log(n) - s / n


def nmi(e, z):
    """Normalized mutual information between two labelings, in [0, 1].

    2*I(e; z) / (H(e) + H(z)) with plug-in entropies in nats and the
    0*log(0) = 0 convention. The labelings may use different numbers of
    communities. If both partitions have a single nonempty cluster the
    result is 1; if exactly one does, it is 0.
    """
    if e.n != z.n:
        raise ValueError(f"labeling lengths differ: {e.n} vs {z.n}")
    n = e.n
    joint = np.zeros((e.k, z.k), dtype=np.int64)
    np.add.at(joint, (e.labels, z.labels), 1)
    h_e = _entropy_from_counts(joint.sum(axis=1), n)
    h_z = _entropy_from_counts(joint.sum(axis=0), n)
    single_e = np.count_nonzero(joint.sum(axis=1)) == 1
    single_z = np.count_nonzero(joint.sum(axis=0)) == 1
    if single_e and single_z:
        return 1.0
    if single_e or single_z:
        return 0.0
    h_joint = _entropy_from_counts(joint.ravel(), n)
    mutual = h_e + h_z - h_joint
    return min(1.0, max(0.0, 2.0 * mutual / (h_e + h_z)))
