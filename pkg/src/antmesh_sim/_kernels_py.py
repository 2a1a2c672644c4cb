"""Pure-Python mirror of the compiled kernels in _kernels.pyx.

Used when the extension is absent or ANTMESH_PURE_PY is set. Semantics must
match the compiled version bit for bit; the equivalence is pinned by tests.
"""


def select_index(col, u, p0, skip):
    """Pick a column index: argmax if u <= p0, else proportional to entries.

    The explore branch reuses the same draw rescaled to [0, 1), so one
    uniform fully determines the choice. skip = -1 disables exclusion.
    Returns -1 when no eligible entry exists.
    """
    n = len(col)
    if u <= p0:
        best = -1
        best_v = -1.0
        for i in range(n):
            if i == skip:
                continue
            if col[i] > best_v:
                best_v = col[i]
                best = i
        return best

    tot = 0.0
    for i in range(n):
        if i != skip:
            tot += col[i]
    if tot <= 0.0:
        best = -1
        best_v = -1.0
        for i in range(n):
            if i == skip:
                continue
            if col[i] > best_v:
                best_v = col[i]
                best = i
        return best

    v = (u - p0) / (1.0 - p0) * tot
    acc = 0.0
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


def select_index_masked(col, u, p0, allowed):
    """select_index restricted to indices with allowed[i] != 0."""
    n = len(col)
    if u <= p0:
        best = -1
        best_v = -1.0
        for i in range(n):
            if not allowed[i]:
                continue
            if col[i] > best_v:
                best_v = col[i]
                best = i
        return best

    tot = 0.0
    for i in range(n):
        if allowed[i]:
            tot += col[i]
    if tot <= 0.0:
        best = -1
        best_v = -1.0
        for i in range(n):
            if not allowed[i]:
                continue
            if col[i] > best_v:
                best_v = col[i]
                best = i
        return best

    v = (u - p0) / (1.0 - p0) * tot
    acc = 0.0
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


def reinforce(col, via, dp):
    """In-place reward: col[via] gains dp then the whole column is
    renormalized by (1 + dp), which keeps the column sum at exactly 1."""
    scale = 1.0 / (1.0 + dp)
    col[via] = col[via] + dp
    for i in range(len(col)):
        col[i] = col[i] * scale


def normalize(col):
    """Scale the column so it sums to 1; uniform if the mass underflowed."""
    n = len(col)
    if n == 0:
        return
    tot = 0.0
    for i in range(n):
        tot += col[i]
    if tot <= 0.0:
        for i in range(n):
            col[i] = 1.0 / n
        return
    for i in range(n):
        col[i] = col[i] / tot
