# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot-path kernels for pheromone column updates and next-hop draws.

Mirrors _kernels_py exactly; one of the two is picked at import time in
kernels.py. Columns are array('d') buffers aligned to a node's sorted
neighbor list, so "first index among ties" means "lowest node id".
"""


def select_index(double[:] col, double u, double p0, Py_ssize_t skip):
    """Pick a column index: argmax if u <= p0, else proportional to entries.

    The explore branch reuses the same draw rescaled to [0, 1), so one
    uniform fully determines the choice. skip = -1 disables exclusion.
    Returns -1 when no eligible entry exists.
    """
    cdef Py_ssize_t n = col.shape[0]
    cdef Py_ssize_t i
    cdef Py_ssize_t best = -1
    cdef double best_v = -1.0
    cdef double tot = 0.0
    cdef double acc = 0.0
    cdef double v

    if u <= p0:
        for i in range(n):
            if i == skip:
                continue
            if col[i] > best_v:
                best_v = col[i]
                best = i
        return best

    for i in range(n):
        if i != skip:
            tot += col[i]
    if tot <= 0.0:
        # Degenerate mass (e.g. underflow): fall back to argmax.
        for i in range(n):
            if i == skip:
                continue
            if col[i] > best_v:
                best_v = col[i]
                best = i
        return best

    v = (u - p0) / (1.0 - p0) * tot
    for i in range(n):
        if i == skip:
            continue
        acc += col[i]
        if v < acc:
            return i
    for i in range(n - 1, -1, -1):
        if i != skip:
            return i
    return -1


def select_index_masked(double[:] col, double u, double p0,
                        const unsigned char[:] allowed):
    """select_index restricted to indices with allowed[i] != 0."""
    cdef Py_ssize_t n = col.shape[0]
    cdef Py_ssize_t i
    cdef Py_ssize_t best = -1
    cdef double best_v = -1.0
    cdef double tot = 0.0
    cdef double acc = 0.0
    cdef double v

    if u <= p0:
        for i in range(n):
            if not allowed[i]:
                continue
            if col[i] > best_v:
                best_v = col[i]
                best = i
        return best

    for i in range(n):
        if allowed[i]:
            tot += col[i]
    if tot <= 0.0:
        for i in range(n):
            if not allowed[i]:
                continue
            if col[i] > best_v:
                best_v = col[i]
                best = i
        return best

    v = (u - p0) / (1.0 - p0) * tot
    for i in range(n):
        if not allowed[i]:
            continue
        acc += col[i]
        if v < acc:
            return i
    for i in range(n - 1, -1, -1):
        if allowed[i]:
            return i
    return -1


def reinforce(double[:] col, Py_ssize_t via, double dp):
    """In-place reward: col[via] gains dp then the whole column is
    renormalized by (1 + dp), which keeps the column sum at exactly 1."""
    cdef Py_ssize_t n = col.shape[0]
    cdef Py_ssize_t i
    cdef double scale = 1.0 / (1.0 + dp)
    col[via] = col[via] + dp
    for i in range(n):
        col[i] = col[i] * scale


def normalize(double[:] col):
    """Scale the column so it sums to 1; uniform if the mass underflowed."""
    cdef Py_ssize_t n = col.shape[0]
    cdef Py_ssize_t i
    cdef double tot = 0.0
    if n == 0:
        return
    for i in range(n):
        tot += col[i]
    if tot <= 0.0:
        for i in range(n):
            col[i] = 1.0 / n
        return
    for i in range(n):
        col[i] = col[i] / tot
