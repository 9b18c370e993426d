# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled codec kernels: graph building, ternary decoding, sessions.

Mirrors _kernel_py exactly (same random stream, same update rules), just
in C loops.  The two backends must stay bit-identical; the parity test
suite enforces it.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int8_t, int32_t, int64_t, uint8_t, uint64_t
from libc.string cimport memcmp, memset

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline uint64_t _sm64(uint64_t seed, uint64_t call) nogil:
    # counter-based splitmix64; call indices start at 1
    cdef uint64_t z = seed + call * <uint64_t>0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef uint64_t _extend_edges(int64_t k, int64_t built, int64_t n,
                            const int64_t* degrees, uint64_t seed,
                            uint64_t calls, int32_t* edge_in,
                            const int64_t* out_ptr, int64_t* stamp) nogil:
    """Draw distinct neighbors for output nodes [built, n); returns call count."""
    cdef int64_t node, need, got, idx
    cdef int64_t pos = out_ptr[built]
    for node in range(built, n):
        need = degrees[node]
        got = 0
        while got < need:
            calls += 1
            idx = <int64_t>(_sm64(seed, calls) % <uint64_t>k)
            if stamp[idx] == node:
                continue
            stamp[idx] = node
            edge_in[pos] = <int32_t>idx
            pos += 1
            got += 1
    return calls


cdef int _decode(int64_t k, int64_t n, const int32_t* e_in,
                 const int64_t* out_ptr, const uint8_t* received,
                 double crossover_p, int max_iters,
                 int8_t* cur, int8_t* nxt, int8_t* prev, int8_t* m_oi,
                 int64_t* acc, int8_t* decision, uint8_t* decoded,
                 int* iters_out) nogil:
    cdef int64_t n_edges = out_ptr[n]
    # +3 bits of slack: Poisson noise in the realized flip count must not
    # reject a correct decode when n*p is small
    cdef double budget = 2.0 * crossover_p * n + 3.0
    cdef int it, have_prev = 0
    cdef int64_t o, e, i, lo, hi, zedge, mism
    cdef int8_t s, prod, v
    cdef int zc, complete

    memset(cur, 0, n_edges)
    for it in range(1, max_iters + 1):
        # output -> input: consistency vote excluding the target edge
        for o in range(n):
            lo = out_ptr[o]
            hi = out_ptr[o + 1]
            s = <int8_t>(1 - 2 * received[o])
            zc = 0
            prod = 1
            zedge = -1
            for e in range(lo, hi):
                v = cur[e]
                if v == 0:
                    zc += 1
                    zedge = e
                else:
                    prod = <int8_t>(prod * v)
            if zc == 0:
                for e in range(lo, hi):
                    m_oi[e] = <int8_t>(s * prod * cur[e])
            elif zc == 1:
                for e in range(lo, hi):
                    m_oi[e] = 0
                m_oi[zedge] = <int8_t>(s * prod)
            else:
                for e in range(lo, hi):
                    m_oi[e] = 0

        memset(acc, 0, k * sizeof(int64_t))
        for e in range(n_edges):
            acc[e_in[e]] += m_oi[e]

        complete = 1
        for i in range(k):
            if acc[i] > 0:
                decision[i] = 1
            elif acc[i] < 0:
                decision[i] = -1
            else:
                decision[i] = 0
                complete = 0

        if complete:
            mism = 0
            for o in range(n):
                prod = 1
                for e in range(out_ptr[o], out_ptr[o + 1]):
                    prod = <int8_t>(prod * decision[e_in[e]])
                if prod != <int8_t>(1 - 2 * received[o]):
                    mism += 1
            if mism <= budget:
                for i in range(k):
                    decoded[i] = 1 if decision[i] < 0 else 0
                iters_out[0] = it
                return 1

        for e in range(n_edges):
            v = <int8_t>(acc[e_in[e]] - m_oi[e])
            nxt[e] = 1 if v > 0 else (-1 if v < 0 else 0)

        # stuck on a fixed point or a two-cycle: further rounds change nothing
        if memcmp(nxt, cur, n_edges) == 0 or (
                have_prev and memcmp(nxt, prev, n_edges) == 0):
            iters_out[0] = it
            return 0
        prev, cur, nxt = cur, nxt, prev
        have_prev = 1

    iters_out[0] = max_iters
    return 0


def build_graph_edges(k, degrees, seed):
    """One-shot adjacency build: returns (edge_in, out_ptr) for all nodes."""
    cdef cnp.ndarray[int64_t, ndim=1] deg = \
        np.minimum(np.asarray(degrees), k).astype(np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] out_ptr = \
        np.concatenate([np.zeros(1, dtype=np.int64), np.cumsum(deg)])
    cdef cnp.ndarray[int32_t, ndim=1] edge_in = \
        np.empty(int(out_ptr[len(deg)]), dtype=np.int32)
    cdef cnp.ndarray[int64_t, ndim=1] stamp = np.full(k, -1, dtype=np.int64)
    _extend_edges(k, 0, len(deg), &deg[0], <uint64_t>int(seed), 0,
                  &edge_in[0], &out_ptr[0], &stamp[0])
    return edge_in, out_ptr


def decode_attempt(k, n, edge_in, out_ptr, received, crossover_p, max_iters):
    """Ternary message-passing attempt; returns (ok, decoded, iterations)."""
    cdef cnp.ndarray[int32_t, ndim=1] e_in = np.ascontiguousarray(edge_in, dtype=np.int32)
    cdef cnp.ndarray[int64_t, ndim=1] optr = np.ascontiguousarray(out_ptr, dtype=np.int64)
    cdef cnp.ndarray[uint8_t, ndim=1] rx = np.ascontiguousarray(received, dtype=np.uint8)
    cdef int64_t n_edges = optr[n]
    cdef cnp.ndarray[int8_t, ndim=1] cur = np.zeros(n_edges, dtype=np.int8)
    cdef cnp.ndarray[int8_t, ndim=1] nxt = np.zeros(n_edges, dtype=np.int8)
    cdef cnp.ndarray[int8_t, ndim=1] prev = np.zeros(n_edges, dtype=np.int8)
    cdef cnp.ndarray[int8_t, ndim=1] m_oi = np.zeros(n_edges, dtype=np.int8)
    cdef cnp.ndarray[int64_t, ndim=1] acc = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[int8_t, ndim=1] decision = np.zeros(k, dtype=np.int8)
    cdef cnp.ndarray[uint8_t, ndim=1] decoded = np.zeros(k, dtype=np.uint8)
    cdef int iters = 0
    cdef int ok
    cdef int64_t kk = k, nn = n
    cdef double p = crossover_p
    cdef int mi = max_iters
    with nogil:
        ok = _decode(kk, nn, &e_in[0], &optr[0], &rx[0], p, mi,
                     &cur[0], &nxt[0], &prev[0], &m_oi[0], &acc[0],
                     &decision[0], &decoded[0], &iters)
    return bool(ok), decoded, iters


def session(k, degrees, seed, message, flips, attempt_sizes, crossover_p,
            max_iters):
    """Decode-until-success session; see the pure backend for semantics.

    Returns (grid_index, bits_sent, total_iterations, decoded, ok).
    """
    cdef cnp.ndarray[int64_t, ndim=1] deg = \
        np.minimum(np.asarray(degrees), k).astype(np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] out_ptr = \
        np.concatenate([np.zeros(1, dtype=np.int64), np.cumsum(deg)])
    cdef cnp.ndarray[uint8_t, ndim=1] msg = np.ascontiguousarray(message, dtype=np.uint8)
    cdef cnp.ndarray[uint8_t, ndim=1] flip = np.ascontiguousarray(flips, dtype=np.uint8)
    cdef cnp.ndarray[int64_t, ndim=1] sizes = np.ascontiguousarray(attempt_sizes, dtype=np.int64)

    cdef int64_t n_max = sizes[len(sizes) - 1]
    cdef int64_t e_max = out_ptr[n_max]
    cdef cnp.ndarray[int32_t, ndim=1] edge_in = np.empty(e_max, dtype=np.int32)
    cdef cnp.ndarray[int64_t, ndim=1] stamp = np.full(k, -1, dtype=np.int64)
    cdef cnp.ndarray[uint8_t, ndim=1] received = np.empty(n_max, dtype=np.uint8)
    cdef cnp.ndarray[int8_t, ndim=1] cur = np.zeros(e_max, dtype=np.int8)
    cdef cnp.ndarray[int8_t, ndim=1] nxt = np.zeros(e_max, dtype=np.int8)
    cdef cnp.ndarray[int8_t, ndim=1] prev = np.zeros(e_max, dtype=np.int8)
    cdef cnp.ndarray[int8_t, ndim=1] m_oi = np.zeros(e_max, dtype=np.int8)
    cdef cnp.ndarray[int64_t, ndim=1] acc = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[int8_t, ndim=1] decision = np.zeros(k, dtype=np.int8)
    cdef cnp.ndarray[uint8_t, ndim=1] decoded = np.zeros(k, dtype=np.uint8)

    cdef uint64_t calls = 0
    cdef uint64_t sd = <uint64_t>int(seed)
    cdef int64_t built = 0, kk = k
    cdef int64_t n, o, e, node, bit
    cdef int gi, ok = 0, iters = 0, total_iters = 0
    cdef double p = crossover_p
    cdef int mi = max_iters

    for gi in range(len(sizes)):
        n = sizes[gi]
        with nogil:
            calls = _extend_edges(kk, built, n, &deg[0], sd, calls,
                                  &edge_in[0], &out_ptr[0], &stamp[0])
            for node in range(built, n):
                bit = 0
                for e in range(out_ptr[node], out_ptr[node + 1]):
                    bit ^= msg[edge_in[e]]
                received[node] = <uint8_t>(bit ^ flip[node])
            ok = _decode(kk, n, &edge_in[0], &out_ptr[0], &received[0], p, mi,
                         &cur[0], &nxt[0], &prev[0], &m_oi[0], &acc[0],
                         &decision[0], &decoded[0], &iters)
        built = n
        total_iters += iters
        if ok:
            return gi, int(n), total_iters, decoded, True
    return -1, int(sizes[len(sizes) - 1]), total_iters, decoded, False
