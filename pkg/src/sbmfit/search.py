"""Maximizers of the two objectives over the constrained label space.

Exhaustive enumeration at toy scale and best-improvement single-node
relabeling with random restarts at experiment scale. The greedy search
keeps integer block counters and evaluates move deltas through lookup
tables, so one relabeling costs O(degree + k) counter work and O(k)
objective terms.
"""

import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, xlogy

from .errors import InfeasibleError, SearchSpaceError
from .graphs import Labeling, block_counters, meets_min_size, min_feasible_size
from .modularity import (
    LOG_BETA_HALF,
    OBJECTIVES,
    icl_from_counters,
    ml_from_counters,
)
from .sampling import derive_seed

_EXACT_GUARD = 2 * 10**7
# Moves must beat this unnormalized improvement; filters float noise while
# staying far below any real single-node objective change.
_MOVE_EPS = 1e-10
_INIT_ATTEMPTS = 1000


@dataclass(frozen=True)
class SearchConfig:
    """Knobs shared by the exact and greedy maximizers."""

    objective: str = "ml"
    alpha: float = 0.05
    restarts: int = 10
    max_sweeps: int = 50
    seed: int = 0
    tie_break: str = "lexicographic"

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.tie_break != "lexicographic":
            raise ValueError("only lexicographic tie-breaking is supported")

    def check_feasible(self, k):
        frac = Fraction(self.alpha).limit_denominator(10**12)
        if frac * k > 1:
            raise InfeasibleError(
                f"alpha={self.alpha} with k={k} leaves no feasible labeling"
            )


@dataclass(frozen=True)
class FitResult:
    """Outcome of one search: canonical labeling plus bookkeeping."""

    labeling: Labeling
    objective_value: float
    objective: str
    sweeps_used: int
    restart_index: int
    feasible: bool


@functools.lru_cache(maxsize=8)
def _xlogx_table(size):
    return xlogy(np.arange(size, dtype=float), np.arange(size, dtype=float)).tolist()


@functools.lru_cache(maxsize=8)
def _lgamma_half_table(size):
    return gammaln(np.arange(size, dtype=float) + 0.5).tolist()


@functools.lru_cache(maxsize=8)
def _lgamma_int_table(size):
    return gammaln(np.arange(size, dtype=float) + 1.0).tolist()


class _GreedyState:
    """Mutable labeling with integer block counters and a running potential.

    The potential is the unnormalized objective: sum over ordered blocks of
    x*log(x) terms for ml, sum over unordered halved blocks of log-Beta
    terms for icl. Normalization does not affect the argmax.
    """

    def __init__(self, g, k, labels, objective):
        self.g = g
        self.n = g.n
        self.k = k
        self.objective = objective
        self.z = np.asarray(labels, dtype=np.int64).copy()
        counters = block_counters(g, Labeling(self.z, k))
        self.sizes = counters.sizes.tolist()
        self.o = counters.edge_counts.tolist()
        size = g.n * g.n + 1
        if objective == "ml":
            self._t = _xlogx_table(size)
        else:
            self._gh = _lgamma_half_table(size)
            self._gi = _lgamma_int_table(size)
        self.potential = self.full_potential()

    def _f_ml(self, o, m):
        if m <= 0:
            return 0.0
        t = self._t
        return t[o] + t[m - o] - t[m]

    def _f_icl(self, o, m):
        if m <= 0:
            return 0.0
        return self._gh[o] + self._gh[m - o] - self._gi[m] - LOG_BETA_HALF

    def full_potential(self):
        s, o, k = self.sizes, self.o, self.k
        total = 0.0
        if self.objective == "ml":
            f = self._f_ml
            for a in range(k):
                for b in range(k):
                    m = s[a] * (s[a] - 1) if a == b else s[a] * s[b]
                    total += f(o[a][b], m)
        else:
            f = self._f_icl
            for a in range(k):
                total += f(o[a][a] // 2, s[a] * (s[a] - 1) // 2)
                for b in range(a + 1, k):
                    total += f(o[a][b], s[a] * s[b])
        return total

    def normalized_value(self):
        scale = 2.0 * self.n * self.n if self.objective == "ml" else float(self.n * self.n)
        return self.potential / scale

    def neighbor_counts(self, i):
        """Edges from node i into each community, as a plain list."""
        nbrs = self.g.adj[i]
        return np.bincount(self.z[nbrs], minlength=self.k).tolist()

    def move_delta(self, a, b, d):
        """Potential change from relabeling one node from a to b."""
        s, o = self.sizes, self.o
        sa, sb = s[a], s[b]
        sa1, sb1 = sa - 1, sb + 1
        da, db = d[a], d[b]
        oa, ob = o[a], o[b]
        if self.objective == "ml":
            f = self._f_ml
            delta = (
                f(oa[a] - 2 * da, sa1 * (sa1 - 1)) - f(oa[a], sa * (sa - 1))
                + f(ob[b] + 2 * db, sb1 * (sb1 - 1)) - f(ob[b], sb * (sb - 1))
                + 2.0 * (f(oa[b] + da - db, sa1 * sb1) - f(oa[b], sa * sb))
            )
            for c in range(self.k):
                if c == a or c == b:
                    continue
                sc, dc = s[c], d[c]
                delta += 2.0 * (
                    f(oa[c] - dc, sa1 * sc) - f(oa[c], sa * sc)
                    + f(ob[c] + dc, sb1 * sc) - f(ob[c], sb * sc)
                )
        else:
            f = self._f_icl
            delta = (
                f(oa[a] // 2 - da, sa1 * (sa1 - 1) // 2) - f(oa[a] // 2, sa * (sa - 1) // 2)
                + f(ob[b] // 2 + db, sb1 * (sb1 - 1) // 2) - f(ob[b] // 2, sb * (sb - 1) // 2)
                + f(oa[b] + da - db, sa1 * sb1) - f(oa[b], sa * sb)
            )
            for c in range(self.k):
                if c == a or c == b:
                    continue
                sc, dc = s[c], d[c]
                delta += (
                    f(oa[c] - dc, sa1 * sc) - f(oa[c], sa * sc)
                    + f(ob[c] + dc, sb1 * sc) - f(ob[c], sb * sc)
                )
        return delta

    def apply_move(self, i, b, d, delta):
        a = int(self.z[i])
        o = self.o
        for c in range(self.k):
            dc = d[c]
            if dc:
                o[a][c] -= dc
                o[c][a] -= dc
                o[b][c] += dc
                o[c][b] += dc
        self.sizes[a] -= 1
        self.sizes[b] += 1
        self.z[i] = b
        self.potential += delta


def _random_feasible_labels(rng, n, k, min_size):
    for _ in range(_INIT_ATTEMPTS):
        labels = rng.integers(0, k, size=n)
        if np.bincount(labels, minlength=k).min() >= min_size:
            return labels.astype(np.int64)
    # Stratified fallback: plant min_size nodes per community, rest uniform.
    labels = rng.integers(0, k, size=n).astype(np.int64)
    perm = rng.permutation(n)
    for j in range(k * min_size):
        labels[perm[j]] = j % k
    return labels


def _finalize(g, labels, k, cfg, sweeps, restart_index):
    lab = Labeling(labels, k).canonical()
    counters = block_counters(g, lab)
    if cfg.objective == "ml":
        value = ml_from_counters(counters)
    else:
        value = icl_from_counters(counters)
    return FitResult(
        labeling=lab,
        objective_value=value,
        objective=cfg.objective,
        sweeps_used=sweeps,
        restart_index=restart_index,
        feasible=meets_min_size(lab, cfg.alpha),
    )


def greedy_argmax(g, k, cfg):
    """Best-improvement single-node relabeling with random restarts.

    Each restart starts from a random feasible labeling and repeatedly
    applies, per visited node, the relabel that most increases the
    objective among moves that stay feasible, until a full sweep makes no
    move or max_sweeps is reached. The best restart wins; ties keep the
    earlier restart. Output labeling is canonical.
    """
    cfg.check_feasible(k)
    min_size = min_feasible_size(g.n, cfg.alpha)
    if k * min_size > g.n:
        raise InfeasibleError(
            f"alpha={cfg.alpha} needs {k * min_size} nodes but the graph has {g.n}"
        )
    best = None
    for restart in range(cfg.restarts):
        rng = np.random.Generator(np.random.PCG64(derive_seed(cfg.seed, restart)))
        labels = _random_feasible_labels(rng, g.n, k, min_size)
        state = _GreedyState(g, k, labels, cfg.objective)
        sweeps = 0
        while sweeps < cfg.max_sweeps:
            improved = False
            for i in rng.permutation(g.n):
                a = int(state.z[i])
                if state.sizes[a] - 1 < min_size:
                    continue
                d = state.neighbor_counts(i)
                best_delta = _MOVE_EPS
                best_b = -1
                for b in range(k):
                    if b == a:
                        continue
                    delta = state.move_delta(a, b, d)
                    if delta > best_delta:
                        best_delta = delta
                        best_b = b
                if best_b >= 0:
                    state.apply_move(int(i), best_b, d, best_delta)
                    improved = True
            sweeps += 1
            if not improved:
                break
        value = state.full_potential()
        if best is None or value > best[0]:
            best = (value, state.z.copy(), sweeps, restart)
    _, labels, sweeps, restart = best
    return _finalize(g, labels, k, cfg, sweeps, restart)


def _canonical_labelings(n, k):
    """All labelings of n nodes in first-occurrence canonical form, lex order."""
    z = np.zeros(n, dtype=np.int64)

    def rec(i, used):
        if i == n:
            yield z
            return
        top = min(used + 1, k)
        for lab in range(top):
            z[i] = lab
            yield from rec(i + 1, max(used, lab + 1))

    yield from rec(1, 1)


def exact_argmax(g, k, cfg):
    """Global maximizer by exhaustive enumeration of canonical labelings.

    Refuses when k^n exceeds the enumeration guard. Ties in the objective
    keep the lexicographically smallest canonical labeling.
    """
    cfg.check_feasible(k)
    space = k**g.n
    if space > _EXACT_GUARD:
        raise SearchSpaceError(
            f"label space k^n = {space} exceeds the enumeration guard {_EXACT_GUARD}"
        )
    min_size = min_feasible_size(g.n, cfg.alpha)
    if k * min_size > g.n:
        raise InfeasibleError(
            f"alpha={cfg.alpha} needs {k * min_size} nodes but the graph has {g.n}"
        )
    score = ml_from_counters if cfg.objective == "ml" else icl_from_counters
    best_value = None
    best_labels = None
    for z in _canonical_labelings(g.n, k):
        sizes = np.bincount(z, minlength=k)
        if sizes.min() < min_size:
            continue
        value = score(block_counters(g, Labeling(z, k)))
        if best_value is None or value > best_value:
            best_value = value
            best_labels = z.copy()
    if best_labels is None:
        raise InfeasibleError(
            f"no labeling of {g.n} nodes into {k} communities meets alpha={cfg.alpha}"
        )
    return _finalize(g, best_labels, k, cfg, 0, 0)
