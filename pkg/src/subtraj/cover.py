"""Set cover solvers: greedy, and a Brönnimann-Goodrich style hitting set
of the dual system (sample a weighted net, double the weights of a light
unhit dual set, repeat).

A "system" is anything with ``pairs`` (candidate keys), ``contains(z, pair)``
and ``m`` (ground set is 1..m-1); IncidenceMatrix is accepted directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .explicit import IncidenceMatrix


class InfeasibleError(ValueError):
    def __init__(self, element: int, message: str | None = None):
        self.element = element
        super().__init__(message or f"piece {element} is not contained in any candidate set")


@dataclass(eq=False)
class SetSystem:
    """Explicit set system for small experiments: ``members[k]`` is the set of pair k."""

    pairs: list
    members: list
    m: int

    def __post_init__(self):
        self.members = [frozenset(s) for s in self.members]
        self._index = {p: k for k, p in enumerate(self.pairs)}

    def contains(self, z: int, pair) -> bool:
        return z in self.members[self._index[pair]]


def _normalize(system):
    if isinstance(system, IncidenceMatrix):
        return list(system.rows), system.contains, system.m
    return list(system.pairs), system.contains, system.m


def incidence(system) -> tuple[list, np.ndarray]:
    """Boolean (pairs x Z) matrix of any system."""
    if isinstance(system, IncidenceMatrix):
        return list(system.rows), system.bits.copy()
    pairs, contains, m = _normalize(system)
    bits = np.array([[contains(z, p) for z in range(1, m)] for p in pairs], dtype=bool)
    return pairs, bits.reshape(len(pairs), m - 1)


def check_feasible(bits: np.ndarray) -> None:
    empty = np.flatnonzero(~bits.any(axis=0)) if bits.size else np.arange(bits.shape[1])
    if len(empty):
        raise InfeasibleError(int(empty[0]) + 1)


@dataclass(eq=False)
class CoverSolution:
    pairs: list
    witness: dict  # z -> selected pair containing z
    k_guess: int | None = None
    rounds: int = 0
    iterations: int = 0
    sample_size: int | None = None
    raw_size: int | None = None

    @property
    def size(self) -> int:
        return len(self.pairs)


def _witness(pairs, contains, m) -> dict:
    out = {}
    for z in range(1, m):
        for p in pairs:
            if contains(z, p):
                out[z] = p
                break
    return out


def greedy_cover(system) -> CoverSolution:
    """Repeatedly take the row with most uncovered elements (first row wins ties)."""
    pairs, bits = incidence(system)
    m = bits.shape[1] + 1
    check_feasible(bits)
    counts = bits.sum(axis=1).astype(np.int64)
    uncovered = np.ones(m - 1, dtype=bool)
    chosen = []
    while uncovered.any():
        k = int(np.argmax(counts))
        newly = bits[k] & uncovered
        uncovered &= ~newly
        counts -= bits[:, newly].sum(axis=1)
        chosen.append(pairs[k])
    contains = lambda z, p: bool(bits[pairs.index(p), z - 1])
    return CoverSolution(chosen, _witness(chosen, contains, m), raw_size=len(chosen))


def sample_size(k: int, m: int, alpha: float = 0.5) -> int:
    """Net size for eps = 1/(2k) and VC-dimension bound ceil(log2 m)."""
    eps = 1.0 / (2 * k)
    dim = max(1, math.ceil(math.log2(m)))
    a = math.ceil(4.0 / 3.0 * math.log(2.0 / alpha))
    c = 8.0 * dim / eps
    return max(a, math.ceil(c * math.log2(c)))


def reweight_bound(k: int, n_pairs: int) -> int:
    """Twice the deterministic 4k log2(|pairs|/k) bound on doubling rounds."""
    if n_pairs <= k:
        return 1
    return max(1, math.ceil(8.0 * k * math.log2(n_pairs / k)))


class WeightTable:
    """Weights 2**e stored as integer exponents; read out relative to the max."""

    def __init__(self, n: int):
        self.exponents = np.zeros(n, dtype=np.int64)

    @property
    def offset(self) -> int:
        return int(self.exponents.max())

    def normalized(self) -> np.ndarray:
        return np.ldexp(1.0, self.exponents - self.offset)

    def total(self) -> float:
        return float(self.normalized().sum())

    def weight(self, idx) -> float:
        return float(np.ldexp(1.0, self.exponents[list(idx)] - self.offset).sum())

    def double(self, idx) -> None:
        self.exponents[list(idx)] += 1

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        cum = np.cumsum(self.normalized())
        draws = rng.random(count) * cum[-1]
        return np.minimum(np.searchsorted(cum, draws, side="right"), len(cum) - 1)


@dataclass(eq=False)
class HittingSetResult:
    success: bool
    pairs: list
    k_guess: int
    rounds: int
    iterations: int
    sample_size: int
    trace: list = field(default_factory=list)


def bg_hitting_set(system, k_guess: int, rng, trace: bool = False, max_iterations: int | None = None) -> HittingSetResult:
    """One run of the weighted-net loop for a guessed optimum ``k_guess``.

    Each iteration samples ``sample_size`` pairs proportionally to weight and
    scans z = 1..m-1. If every z is hit the distinct sample is returned. The
    first unhit z whose dual set is light (weight <= total / (2k)) has its
    pairs doubled; if all unhit z are heavy the weights stay and we resample.
    Fails after ``reweight_bound`` doublings.
    """
    if k_guess < 1:
        raise ValueError("k_guess must be at least 1")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    pairs, contains, m = _normalize(system)
    n = len(pairs)
    s = sample_size(k_guess, m)
    bound = reweight_bound(k_guess, n)
    max_iterations = 16 * bound + 64 if max_iterations is None else max_iterations
    eps = 1.0 / (2 * k_guess)
    weights = WeightTable(n)
    members: dict = {}
    log = []
    rounds = 0
    for it in range(1, max_iterations + 1):
        chosen = sorted(set(weights.sample(rng, s).tolist()))
        light = None
        unhit = False
        for z in range(1, m):
            if any(contains(z, pairs[k]) for k in chosen):
                continue
            unhit = True
            if z not in members:
                members[z] = [k for k in range(n) if contains(z, pairs[k])]
                if not members[z]:
                    raise InfeasibleError(z)
            if weights.weight(members[z]) <= eps * weights.total():
                light = z
                break
        if not unhit:
            return HittingSetResult(True, [pairs[k] for k in chosen], k_guess, rounds, it, s, log)
        if light is None:
            if trace:
                log.append(("resample", None, weights.exponents.copy()))
            continue
        weights.double(members[light])
        rounds += 1
        if trace:
            log.append(("double", light, weights.exponents.copy()))
        if rounds > bound:
            return HittingSetResult(False, [], k_guess, rounds, it, s, log)
    return HittingSetResult(False, [], k_guess, rounds, max_iterations, s, log)


def prune_cover(system, chosen: list) -> list:
    """Drop sets whose elements are all covered by the others (smallest first)."""
    pairs, contains, m = _normalize(system)
    cover = {p: {z for z in range(1, m) if contains(z, p)} for p in chosen}
    keep = list(chosen)
    for p in sorted(chosen, key=lambda q: (len(cover[q]), q)):
        rest = set().union(*(cover[q] for q in keep if q != p)) if len(keep) > 1 else set()
        if cover[p] <= rest:
            keep.remove(p)
    return keep


def bg_cover_search(system, rng_seed=0, prune: bool = False, max_k: int | None = None) -> CoverSolution:
    """Try k = 1, 2, 4, ... until the hitting-set loop succeeds."""
    pairs, contains, m = _normalize(system)
    for z in range(1, m):
        if not any(contains(z, p) for p in pairs):
            raise InfeasibleError(z)
    rng = np.random.default_rng(rng_seed)
    max_k = max(2 * len(pairs), 1) if max_k is None else max_k
    k = 1
    total_iters = 0
    while k <= max_k:
        res = bg_hitting_set(system, k, rng)
        total_iters += res.iterations
        if res.success:
            chosen = prune_cover(system, res.pairs) if prune else res.pairs
            return CoverSolution(chosen, _witness(chosen, contains, m), k, res.rounds, total_iters,
                                 res.sample_size, len(res.pairs))
        k *= 2
    raise RuntimeError(f"no hitting set found up to k = {max_k}")
