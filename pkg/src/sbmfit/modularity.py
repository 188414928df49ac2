"""The two objective functions over labelings: plug-in and integrated likelihood."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln

from .divergences import neg_bernoulli_entropy
from .graphs import block_counters

LOG_BETA_HALF = float(betaln(0.5, 0.5))

OBJECTIVE_ML = "ml"
OBJECTIVE_ICL = "icl"
OBJECTIVES = (OBJECTIVE_ML, OBJECTIVE_ICL)


@dataclass(frozen=True)
class ModularityValue:
    """An objective value in nats per n^2, tagged by which objective produced it."""

    value: float
    objective: str

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")


def ml_from_counters(counters):
    """Plug-in likelihood objective from precomputed block counters."""
    nab = counters.pair_counts
    oab = counters.edge_counts
    mask = nab > 0
    ratio = np.zeros_like(nab, dtype=float)
    ratio[mask] = oab[mask] / nab[mask]
    # Sorted accumulation makes the value bitwise invariant under label
    # permutations, which reorder the block terms.
    total = float(np.sort(nab[mask] * neg_bernoulli_entropy(ratio[mask])).sum())
    n = int(counters.sizes.sum())
    return total / (2.0 * n * n)


def likelihood_modularity(g, z):
    """Profile log-likelihood of a labeling per ordered node pair.

    (1/2n^2) * sum over blocks of n_ab * tau(o_ab / n_ab), where tau is the
    negative Bernoulli entropy; empty blocks contribute 0. Always <= 0.
    """
    return ml_from_counters(block_counters(g, z))


def icl_from_counters(counters):
    """Integrated likelihood objective from precomputed block counters."""
    ntil = counters.tilde_pair_counts()
    otil = counters.tilde_edge_counts()
    k = counters.k
    n = int(counters.sizes.sum())
    terms = []
    for a in range(k):
        for b in range(a, k):
            nt = int(ntil[a, b])
            if nt == 0:
                continue
            ot = int(otil[a, b])
            terms.append(float(betaln(ot + 0.5, nt - ot + 0.5)) - LOG_BETA_HALF)
    total = float(np.sort(np.asarray(terms)).sum()) if terms else 0.0
    return total / (n * n)


def integrated_likelihood_modularity(g, z):
    """Log marginal likelihood of a labeling under a Beta(1/2,1/2) edge prior.

    (1/n^2) * sum over unordered blocks of
    log[ B(o~ + 1/2, n~ - o~ + 1/2) / B(1/2, 1/2) ], with the diagonal
    counters halved. Evaluated through log-gamma; raw Beta values would
    underflow for blocks of size ~n^2. Always <= 0.
    """
    return icl_from_counters(block_counters(g, z))


def modularity_gap(g, z):
    """Gap between the plug-in and integrated objectives, with its bound.

    Returns (gap, bound) where gap = ML - ICL and
    bound = k^2 (log n + 2) / n^2. The gap is always in [0, bound].
    """
    counters = block_counters(g, z)
    gap = ml_from_counters(counters) - icl_from_counters(counters)
    k = z.k
    bound = k * k * (math.log(g.n) + 2.0) / (g.n * g.n)
    return gap, bound


def evaluate(g, z, objective):
    """Evaluate one of the two objectives, returning a tagged value."""
    if objective == OBJECTIVE_ML:
        return ModularityValue(likelihood_modularity(g, z), objective)
    if objective == OBJECTIVE_ICL:
        return ModularityValue(integrated_likelihood_modularity(g, z), objective)
    raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
