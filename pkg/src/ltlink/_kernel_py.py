"""Pure-Python/numpy codec kernels: graph building, ternary decoding, sessions.

Fallback for the compiled extension.  Every operation is integer-exact
and consumes randomness in the same order as the compiled kernel, so the
two backends produce bit-identical results for identical inputs.
"""

from __future__ import annotations

import numpy as np

from ._rng import splitmix64_block

BACKEND_NAME = "pure"

_CHUNK = 4096  # splitmix outputs fetched per batch during graph building


class _GraphBuilder:
    """Incrementally grows the encoder graph along the shared random stream."""

    def __init__(self, k: int, degrees: np.ndarray, seed: int):
        self.k = k
        self.degrees = np.minimum(degrees, k).astype(np.int64)
        self.seed = int(seed)
        self.calls = 0
        self._buf = np.empty(0, dtype=np.uint64)
        self._buf_pos = 0
        self.out_ptr = np.concatenate(
            [np.zeros(1, dtype=np.int64), np.cumsum(self.degrees)])
        self.edge_in = np.empty(int(self.out_ptr[-1]), dtype=np.int32)
        self._stamp = np.full(k, -1, dtype=np.int64)
        self.built = 0  # output nodes with edges materialized

    def _next(self) -> int:
        if self._buf_pos >= len(self._buf):
            self._buf = splitmix64_block(self.seed, self.calls, _CHUNK)
            self._buf_pos = 0
        v = int(self._buf[self._buf_pos])
        self._buf_pos += 1
        self.calls += 1
        return v

    def extend(self, n: int) -> None:
        """Materialize adjacency for output nodes [built, n)."""
        k = self.k
        edge_in = self.edge_in
        stamp = self._stamp
        pos = int(self.out_ptr[self.built])
        for node in range(self.built, n):
            need = int(self.degrees[node])
            got = 0
            while got < need:
                idx = self._next() % k
                if stamp[idx] == node:
                    continue  # duplicate within this node, redraw
                stamp[idx] = node
                edge_in[pos] = idx
                pos += 1
                got += 1
        self.built = max(self.built, n)


def build_graph_edges(k: int, degrees: np.ndarray, seed: int):
    """One-shot adjacency build: returns (edge_in, out_ptr) for all nodes."""
    b = _GraphBuilder(k, np.asarray(degrees), seed)
    b.extend(len(b.degrees))
    return b.edge_in, b.out_ptr


def encode_prefix(message: np.ndarray, edge_in: np.ndarray,
                  out_ptr: np.ndarray, n: int) -> np.ndarray:
    """XOR-encode the first ``n`` output bits over the given adjacency."""
    starts = out_ptr[:n]
    bitsum = np.add.reduceat(message[edge_in[: out_ptr[n]]].astype(np.int64),
                             starts)
    return (bitsum & 1).astype(np.uint8)


def decode_attempt(k: int, n: int, edge_in: np.ndarray, out_ptr: np.ndarray,
                   received: np.ndarray, crossover_p: float, max_iters: int):
    """Hard-decision ternary message passing over the first ``n`` outputs.

    Messages live in {-1, 0, +1} with 0 an erasure.  Output nodes send
    the XOR-consistency vote of their received bit with the other
    incoming messages (zero unless those are all decided); input nodes
    reply with the sign of the vote sum, zero on ties.  Input bits are
    never transmitted, so their channel term is an erasure and the
    decision is a plain majority.  Succeeds once every input is decided
    and re-encoding disagrees with the received word on at most a
    2*crossover_p fraction (+3 bits of slack so Poisson noise in the
    actual flip count cannot reject a correct decode when n*p is small);
    stops early on period-1/2 message cycles.

    Returns (ok, decoded_bits, iterations).
    """
    n_edges = int(out_ptr[n])
    e_in = edge_in[:n_edges]
    starts = out_ptr[:n]
    seg_of_edge = np.repeat(np.arange(n), np.diff(out_ptr[: n + 1]))
    rx_spin = (1 - 2 * received[:n].astype(np.int64)).astype(np.int64)
    rx_spin_edge = rx_spin[seg_of_edge]
    mismatch_budget = 2.0 * crossover_p * n + 3.0

    m_io = np.zeros(n_edges, dtype=np.int64)
    prev = None
    decoded = np.zeros(k, dtype=np.uint8)

    for it in range(1, max_iters + 1):
        # output -> input: consistency vote excluding the target edge
        is_zero = (m_io == 0).astype(np.int64)
        zeros_per_seg = np.add.reduceat(is_zero, starts)
        prod_nonzero = np.multiply.reduceat(np.where(m_io == 0, 1, m_io), starts)
        zc_edge = zeros_per_seg[seg_of_edge]
        p_edge = prod_nonzero[seg_of_edge]
        m_oi = np.where(
            zc_edge == 0, rx_spin_edge * p_edge * m_io,
            np.where((zc_edge == 1) & (m_io == 0), rx_spin_edge * p_edge, 0))

        acc = np.bincount(e_in, weights=m_oi, minlength=k).astype(np.int64)
        decision = np.sign(acc).astype(np.int64)

        if np.all(decision != 0):
            reenc = np.multiply.reduceat(decision[e_in], starts)
            mismatches = int(np.count_nonzero(reenc != rx_spin))
            if mismatches <= mismatch_budget:
                decoded = ((1 - decision) // 2).astype(np.uint8)
                return True, decoded, it

        m_io_new = np.sign(acc[e_in] - m_oi).astype(np.int64)
        # stuck on a fixed point or a two-cycle: further rounds change nothing
        if np.array_equal(m_io_new, m_io) or (
                prev is not None and np.array_equal(m_io_new, prev)):
            return False, decoded, it
        prev = m_io
        m_io = m_io_new

    return False, decoded, max_iters


def session(k: int, degrees: np.ndarray, seed: int, message: np.ndarray,
            flips: np.ndarray, attempt_sizes: np.ndarray, crossover_p: float,
            max_iters: int):
    """Run one decode-until-success session over the grid of attempt sizes.

    Returns (grid_index, bits_sent, total_iterations, decoded, ok) where
    grid_index is -1 when every attempt failed.
    """
    builder = _GraphBuilder(k, np.asarray(degrees), seed)
    total_iters = 0
    decoded = np.zeros(k, dtype=np.uint8)
    n_last = 0
    for gi, n in enumerate(int(x) for x in attempt_sizes):
        builder.extend(n)
        coded = encode_prefix(message, builder.edge_in, builder.out_ptr, n)
        received = coded ^ flips[:n]
        ok, dec, iters = decode_attempt(k, n, builder.edge_in, builder.out_ptr,
                                        received, crossover_p, max_iters)
        total_iters += iters
        n_last = n
        if ok:
            return gi, n, total_iters, dec, True
    return -1, n_last, total_iters, decoded, False
