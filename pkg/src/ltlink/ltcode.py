"""Rateless codec: degree sampling, seed-synchronized encoding, ternary decoding.

The encoder picks a degree from the output-node polynomial, XORs that
many uniformly chosen distinct message bits, and streams coded bits until
the sink acknowledges a successful decode.  Encoder and decoder share the
graph through a common seed, never through side information.

Random streams are explicit.  A session seed is split into three
sub-streams (degree draws, neighbor draws, channel noise); callers that
run many trials derive per-trial seeds as (experiment seed, trial index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from . import backend
from .codetables import RATE_GRID, RATELESS_DEGREE_TABLE

__all__ = [
    "DegreeDistribution",
    "default_degree_distribution",
    "BipartiteGraph",
    "LtSessionResult",
    "DegreeStats",
    "sample_output_degree",
    "build_graph",
    "encode_block",
    "decode_ternary",
    "run_session",
    "degree_stats",
    "attempt_sizes_for_grid",
]

DEFAULT_MAX_ITERS = 50
RATE_CAP = 0.95


@dataclass(frozen=True)
class DegreeDistribution:
    """Output-node degree polynomial as (degree, probability) entries."""

    degrees: Tuple[int, ...]
    probs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.degrees) != len(self.probs) or not self.degrees:
            raise ValueError("degrees and probs must be equal-length, non-empty")
        if any(d < 1 for d in self.degrees):
            raise ValueError("degrees must be >= 1")
        if any(b <= a for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValueError("degrees must be strictly increasing")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be >= 0")
        if abs(math.fsum(self.probs) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1 within 1e-9")

    @cached_property
    def _cdf(self) -> np.ndarray:
        cdf = np.cumsum(np.asarray(self.probs, dtype=float))
        cdf[-1] = 1.0
        return cdf

    @cached_property
    def _support(self) -> np.ndarray:
        return np.asarray(self.degrees, dtype=np.int64)

    @property
    def mean_degree(self) -> float:
        """Average output-node degree of the polynomial."""
        return math.fsum(d * p for d, p in zip(self.degrees, self.probs))

    def degrees_from_uniforms(self, u: np.ndarray, k: int) -> np.ndarray:
        """Inverse-CDF map of uniforms to degrees, clamped to the block size."""
        idx = np.searchsorted(self._cdf, u, side="right")
        idx = np.minimum(idx, len(self.degrees) - 1)
        return np.minimum(self._support[idx], k)


def default_degree_distribution() -> DegreeDistribution:
    degrees, probs = zip(*RATELESS_DEGREE_TABLE)
    return DegreeDistribution(degrees=degrees, probs=probs)


def sample_output_degree(dist: DegreeDistribution,
                         rng: np.random.Generator) -> int:
    """Draw one output-node degree."""
    idx = int(np.searchsorted(dist._cdf, rng.random(), side="right"))
    return dist.degrees[min(idx, len(dist.degrees) - 1)]


@dataclass
class BipartiteGraph:
    """Encoder graph: ``edge_in[out_ptr[o]:out_ptr[o+1]]`` lists output o's inputs."""

    k: int
    n: int
    edge_in: np.ndarray
    out_ptr: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.out_ptr[self.n])

    def adjacency(self, out_node: int) -> Tuple[int, ...]:
        lo, hi = self.out_ptr[out_node], self.out_ptr[out_node + 1]
        return tuple(int(i) for i in self.edge_in[lo:hi])

    def validate(self) -> "BipartiteGraph":
        for o in range(self.n):
            adj = self.adjacency(o)
            if not adj:
                raise ValueError(f"output node {o} has no inputs")
            if len(set(adj)) != len(adj):
                raise ValueError(f"output node {o} has duplicate inputs")
            if min(adj) < 0 or max(adj) >= self.k:
                raise ValueError(f"output node {o} has inputs outside [0, k)")
        return self

    def dump(self) -> str:
        """Stable text form, one line per output: ``out: in,in,...``."""
        lines = [f"{o}: {','.join(str(i) for i in self.adjacency(o))}"
                 for o in range(self.n)]
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse(text: str, k: int) -> "BipartiteGraph":
        adjacency = []
        for line in text.strip().splitlines():
            _, _, rest = line.partition(":")
            adjacency.append([int(tok) for tok in rest.strip().split(",")])
        out_ptr = np.concatenate([np.zeros(1, dtype=np.int64),
                                  np.cumsum([len(a) for a in adjacency])])
        edge_in = np.array([i for a in adjacency for i in a], dtype=np.int32)
        return BipartiteGraph(k=k, n=len(adjacency), edge_in=edge_in,
                              out_ptr=out_ptr)


@dataclass(frozen=True)
class LtSessionResult:
    """Outcome of one decode-until-success session.

    ``achieved_rate`` is the rate-grid entry that decoded (0.0 on
    failure); ``bits_sent`` the coded bits emitted up to that point.
    """

    achieved_rate: float
    bits_sent: int
    decode_iterations: int
    success: bool
    decoded: Optional[np.ndarray] = None


@dataclass(frozen=True)
class DegreeStats:
    o_ave: float
    i_ave: Optional[float] = None
    asymptotic_rate: Optional[float] = None
    edge_count: Optional[int] = None


def _as_seedseq(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def session_streams(seed):
    """Split a session seed into (degree rng, neighbor seed, noise rng).

    Degree uniforms are always drawn before noise uniforms, so a given
    seed pins the whole session regardless of how far it runs.
    """
    deg_ss, nbr_ss, noise_ss = _as_seedseq(seed).spawn(3)
    deg_rng = np.random.Generator(np.random.PCG64(deg_ss))
    neighbor_seed = int(nbr_ss.generate_state(1, dtype=np.uint64)[0])
    noise_rng = np.random.Generator(np.random.PCG64(noise_ss))
    return deg_rng, neighbor_seed, noise_rng


def build_graph(k: int, dist: DegreeDistribution, seed, n: int) -> BipartiteGraph:
    """Deterministically rebuild the encoder graph for ``n`` output nodes.

    Uses only the seed, which is how the sink reconstructs the graph
    without side information.
    """
    if k < 2:
        raise ValueError(f"block size must be >= 2, got {k}")
    deg_rng, neighbor_seed, _ = session_streams(seed)
    degrees = dist.degrees_from_uniforms(deg_rng.random(n), k)
    edge_in, out_ptr = backend.build_graph_edges(k, degrees, neighbor_seed)
    return BipartiteGraph(k=k, n=n, edge_in=edge_in, out_ptr=out_ptr)


def encode_block(message: Sequence[int], dist: DegreeDistribution,
                 seed) -> Iterator[Tuple[int, Tuple[int, ...]]]:
    """Lazily yield (coded bit, input adjacency) pairs for one block.

    Two calls with the same (message, seed) yield identical streams, and
    the adjacency stream alone reconstructs the graph: it matches
    :func:`build_graph` with the same seed.
    """
    message = np.ascontiguousarray(message, dtype=np.uint8)
    k = len(message)
    if k < 2:
        raise ValueError(f"block size must be >= 2, got {k}")
    deg_rng, neighbor_seed, _ = session_streams(seed)
    degrees = np.empty(0, dtype=np.int64)
    chunk = 512
    emitted = 0
    while True:
        extra = dist.degrees_from_uniforms(deg_rng.random(chunk), k)
        degrees = np.concatenate([degrees, extra])
        # rebuild from scratch so the neighbor stream stays in lockstep
        edge_in, out_ptr = backend.build_graph_edges(k, degrees, neighbor_seed)
        for o in range(emitted, len(degrees)):
            lo, hi = out_ptr[o], out_ptr[o + 1]
            adj = tuple(int(i) for i in edge_in[lo:hi])
            bit = int(np.bitwise_xor.reduce(message[edge_in[lo:hi]]))
            yield bit, adj
        emitted = len(degrees)
        chunk *= 2


def decode_ternary(received: Sequence[int], graph: BipartiteGraph,
                   crossover_p: float,
                   max_iters: int = DEFAULT_MAX_ITERS) -> Optional[np.ndarray]:
    """Decode hard bits over the graph; None on failure.

    Success requires every input bit decided and the re-encoded word to
    agree with the received one up to the crossover-rate mismatch budget
    (see the backend kernels for the exact rule).
    """
    received = np.ascontiguousarray(received, dtype=np.uint8)
    if len(received) != graph.n:
        raise ValueError(
            f"received length {len(received)} != graph outputs {graph.n}")
    if not 0.0 <= crossover_p < 0.5:
        raise ValueError(f"crossover probability must be in [0, 0.5), got {crossover_p}")
    ok, decoded, _ = backend.decode_attempt(graph.k, graph.n, graph.edge_in,
                                            graph.out_ptr, received,
                                            crossover_p, max_iters)
    return decoded if ok else None


def attempt_sizes_for_grid(k: int, rate_grid: Sequence[float]) -> np.ndarray:
    """Coded-bit counts at which decode attempts happen, one per grid rate."""
    if not rate_grid:
        raise ValueError("rate grid must be non-empty")
    rates = list(rate_grid)
    if any(not 0.0 < r <= RATE_CAP for r in rates):
        raise ValueError(f"grid rates must lie in (0, {RATE_CAP}]")
    if any(b >= a for a, b in zip(rates, rates[1:])):
        raise ValueError("rate grid must be strictly descending")
    return np.array([math.ceil(k / r) for r in rates], dtype=np.int64)


def run_session(message: Sequence[int], dist: DegreeDistribution, seed,
                crossover_p: float, rate_grid: Sequence[float] = RATE_GRID,
                batch: int = 256,
                max_iters: int = DEFAULT_MAX_ITERS) -> LtSessionResult:
    """Stream coded bits, attempting a decode at each grid rate boundary.

    Stops at the first grid rate that decodes; exhausting the grid lands
    in the 0.0 failure bin.  ``batch`` controls internal emission
    chunking only; attempts always happen exactly at grid boundaries.
    """
    message = np.ascontiguousarray(message, dtype=np.uint8)
    k = len(message)
    if k < 2:
        raise ValueError(f"block size must be >= 2, got {k}")
    if batch < 1:
        raise ValueError(f"batch must be >= 1, got {batch}")
    if not 0.0 <= crossover_p < 0.5:
        raise ValueError(f"crossover probability must be in [0, 0.5), got {crossover_p}")
    sizes = attempt_sizes_for_grid(k, rate_grid)
    n_max = int(sizes[-1])

    deg_rng, neighbor_seed, noise_rng = session_streams(seed)
    degrees = dist.degrees_from_uniforms(deg_rng.random(n_max), k)
    flips = (noise_rng.random(n_max) < crossover_p).astype(np.uint8)

    gi, bits_sent, iters, decoded, ok = backend.session(
        k, degrees, neighbor_seed, message, flips, sizes, crossover_p,
        max_iters)
    return LtSessionResult(
        achieved_rate=float(rate_grid[gi]) if ok else 0.0,
        bits_sent=int(bits_sent),
        decode_iterations=int(iters),
        success=bool(ok),
        decoded=decoded if ok else None)


def degree_stats(dist: DegreeDistribution,
                 graph: Optional[BipartiteGraph] = None) -> DegreeStats:
    """Mean output degree, and with a realized graph the input-side stats.

    Edge counting gives k * i_ave == n * o_ave_realized exactly; the
    asymptotic code rate estimate is mean polynomial degree over realized
    mean input degree.
    """
    o_ave = dist.mean_degree
    if graph is None:
        return DegreeStats(o_ave=o_ave)
    edges = graph.edge_count
    i_ave = edges / graph.k
    return DegreeStats(o_ave=o_ave, i_ave=i_ave,
                       asymptotic_rate=o_ave / i_ave, edge_count=edges)
