"""QUBO and MIS solvers: exhaustive enumeration, branch and bound, and
simulated annealing as the heuristic stand-in for annealing hardware."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .conflict import ConflictGraph
from .qubo import Assignment, QuboInstance, energy
from .rng import Xorshift64Star, derive_seed

EXACT_LIMIT = 25  # enumeration guard: 2^25 assignments


@dataclass(frozen=True)
class SolveStats:
    evaluations: int
    restarts: int
    wall_time: float


@dataclass(frozen=True)
class SolveResult:
    best: Assignment
    best_energy: float
    proven_optimal: bool
    stats: SolveStats


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric inverse-temperature ramp, repeated over independent restarts."""

    sweeps: int = 1000
    beta_initial: float = 0.1
    beta_final: float = 10.0
    restarts: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if not self.beta_initial > 0:
            raise ValueError("beta_initial must be > 0")
        if self.beta_final < self.beta_initial:
            raise ValueError("beta_final must be >= beta_initial")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")

    def betas(self) -> list[float]:
        if self.sweeps == 1:
            return [self.beta_initial]
        ratio = self.beta_final / self.beta_initial
        return [
            self.beta_initial * ratio ** (t / (self.sweeps - 1))
            for t in range(self.sweeps)
        ]


def _adjacency(q: QuboInstance) -> tuple[list[float], list[list[tuple[int, float]]]]:
    """Diagonal coefficients and off-diagonal neighbor lists."""
    diag = [0.0] * q.n
    neighbors: list[list[tuple[int, float]]] = [[] for _ in range(q.n)]
    for (i, j), v in q.terms.items():
        if i == j:
            diag[i] = v
        else:
            neighbors[i].append((j, v))
            neighbors[j].append((i, v))
    return diag, neighbors


def local_field(q: QuboInstance, x: Assignment, k: int) -> float:
    """Energy gained by setting bit k (given the other bits); flipping bit k
    changes the energy by +field if the bit turns on, -field if it turns off."""
    bits = x.bits
    f = q.terms.get((k, k), 0.0)
    for (i, j), v in q.terms.items():
        if i == j:
            continue
        if i == k and bits[j]:
            f += v
        elif j == k and bits[i]:
            f += v
    return f


def solve_exact(q: QuboInstance) -> SolveResult:
    """Enumerate all 2^n assignments; ties break toward the assignment whose
    bits, read little-endian, form the smallest integer."""
    if q.n > EXACT_LIMIT:
        raise ValueError(f"n={q.n} exceeds the enumeration limit {EXACT_LIMIT}")
    t0 = time.perf_counter()
    n = q.n
    total = 1 << n
    best_e = math.inf
    best_m = 0
    chunk = 1 << 20
    terms = list(q.terms.items())
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        e = np.zeros(idx.shape[0])
        for (i, j), v in terms:
            e += v * ((idx >> i) & (idx >> j) & 1)
        k = int(np.argmin(e))  # first occurrence = lowest little-endian value
        if e[k] < best_e:
            best_e = float(e[k])
            best_m = start + k
    bits = tuple((best_m >> k) & 1 for k in range(n))
    best = Assignment(bits=bits)
    return SolveResult(
        best=best,
        best_energy=energy(q, best),
        proven_optimal=True,
        stats=SolveStats(evaluations=total, restarts=1, wall_time=time.perf_counter() - t0),
    )


def _clique_cover_bound(p_mask: int, adj: list[int]) -> int:
    """Greedy partition of the residual vertices into cliques; the number of
    cliques bounds the independent set size from above."""
    cliques: list[int] = []
    m = p_mask
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        av = adj[v]
        for idx, c in enumerate(cliques):
            if c & ~av == 0:  # v adjacent to every clique member
                cliques[idx] = c | (1 << v)
                break
        else:
            cliques.append(1 << v)
    return len(cliques)


def solve_mis_bnb(gc: ConflictGraph) -> tuple[set[int], bool]:
    """Exact maximum independent set by branch and bound.

    Branches on the highest-degree vertex of the residual graph (include
    first), pruning with the greedy clique-cover bound.  Deterministic:
    ties break toward the lower vertex index.
    """
    n = gc.n
    if n == 0:
        return set(), True
    adj = [0] * n
    for u, v in gc.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    best_mask = 0
    best_size = 0
    full = (1 << n) - 1

    def expand(cur_mask: int, cur_size: int, p_mask: int):
        nonlocal best_mask, best_size
        if p_mask == 0:
            if cur_size > best_size:
                best_size = cur_size
                best_mask = cur_mask
            return
        if cur_size + _clique_cover_bound(p_mask, adj) <= best_size:
            return
        # highest residual degree, lowest index on ties
        v = -1
        v_deg = -1
        m = p_mask
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            deg = (adj[u] & p_mask).bit_count()
            if deg > v_deg:
                v_deg = deg
                v = u
        expand(cur_mask | (1 << v), cur_size + 1, p_mask & ~(adj[v] | (1 << v)))
        expand(cur_mask, cur_size, p_mask & ~(1 << v))

    expand(0, 0, full)
    return {k for k in range(n) if (best_mask >> k) & 1}, True


def solve_sa(q: QuboInstance, s: AnnealSchedule = AnnealSchedule()) -> SolveResult:
    """Simulated annealing with single-bit Metropolis flips.

    Each restart starts from the all-zero assignment with its own random
    stream derived from (seed, restart); sweeps visit variables in index
    order and accept flips with probability min(1, exp(-beta * dE)), using
    the O(degree) incremental energy delta.  The result is identical to
    sequential execution regardless of how restarts are scheduled: ties
    across restarts break toward the lower restart index.
    """
    t0 = time.perf_counter()
    n = q.n
    diag, neighbors = _adjacency(q)
    betas = s.betas()
    exp = math.exp

    best_bits = [0] * n
    best_e = 0.0
    for r in range(s.restarts):
        rng = Xorshift64Star(derive_seed(s.seed, r))
        uniform = rng.uniform
        x = [0] * n
        h = diag.copy()
        e = 0.0
        local_best_e = 0.0
        local_best = x.copy()
        for beta in betas:
            for k in range(n):
                d_e = h[k] if x[k] == 0 else -h[k]
                u = uniform()
                if d_e <= 0.0 or u < exp(-beta * d_e):
                    sign = 1 - 2 * x[k]  # +1 turning on, -1 turning off
                    x[k] ^= 1
                    e += d_e
                    for j, v in neighbors[k]:
                        h[j] += sign * v
                    if e < local_best_e:
                        local_best_e = e
                        local_best = x.copy()
        if r == 0 or local_best_e < best_e:
            best_e = local_best_e
            best_bits = local_best
    best = Assignment(bits=tuple(best_bits))
    return SolveResult(
        best=best,
        best_energy=energy(q, best),
        proven_optimal=False,
        stats=SolveStats(
            evaluations=s.restarts * s.sweeps * n,
            restarts=s.restarts,
            wall_time=time.perf_counter() - t0,
        ),
    )
