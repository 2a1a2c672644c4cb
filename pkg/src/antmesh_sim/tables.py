"""Per-node routing state: the pheromone matrix over live neighbors, sliding
trip-delay windows per destination, and hello-fed link estimates."""

from array import array
from collections import deque

from . import kernels


class PheromoneTable:
    """Destination-indexed probability columns over the node's neighbor set.

    Every column sums to 1. Columns are created lazily (uniform over the
    current neighbors); neighbor churn inserts at half a uniform share or
    deletes the row, then renormalizes every existing column.
    """

    def __init__(self, neighbors=()):
        self.nbrs = sorted(neighbors)
        self.cols = {}

    def column(self, dst):
        col = self.cols.get(dst)
        if col is None:
            n = len(self.nbrs)
            if n == 0:
                return None
            col = array("d", [1.0 / n] * n)
            self.cols[dst] = col
        return col

    def probability(self, dst, via):
        col = self.column(dst)
        if col is None or via not in self.nbrs:
            return 0.0
        return col[self.nbrs.index(via)]

    def add_neighbor(self, node_id):
        if node_id in self.nbrs:
            return
        idx = 0
        while idx < len(self.nbrs) and self.nbrs[idx] < node_id:
            idx += 1
        self.nbrs.insert(idx, node_id)
        eps = 1.0 / (2 * len(self.nbrs))
        for col in self.cols.values():
            col.insert(idx, eps)
            kernels.normalize(col)

    def remove_neighbor(self, node_id):
        if node_id not in self.nbrs:
            return
        idx = self.nbrs.index(node_id)
        self.nbrs.pop(idx)
        if not self.nbrs:
            self.cols.clear()
            return
        for col in self.cols.values():
            col.pop(idx)
            kernels.normalize(col)

    def reinforce(self, dst, via, dp):
        col = self.column(dst)
        if col is None or via not in self.nbrs:
            return
        kernels.reinforce(col, self.nbrs.index(via), dp)

    def select(self, dst, u, p0, exclude=None, allowed_ids=None):
        """Next-hop id by the pseudo-random rule: exploit (argmax, lowest id
        on ties) when u <= p0, else a draw proportional to the pheromone of
        the eligible rows. Returns None when no row is eligible."""
        col = self.column(dst)
        if col is None:
            return None
        if allowed_ids is not None:
            mask = bytearray(
                1 if (nid in allowed_ids and nid != exclude) else 0
                for nid in self.nbrs
            )
            idx = kernels.select_index_masked(col, u, p0, bytes(mask))
        else:
            skip = self.nbrs.index(exclude) if exclude in self.nbrs else -1
            idx = kernels.select_index(col, u, p0, skip)
        if idx < 0:
            return None
        return self.nbrs[idx]

    def column_sums(self):
        return {dst: sum(col) for dst, col in self.cols.items()}


class DelayTable:
    """Last-W trip times (us) per destination; the mean feeds reinforcement."""

    def __init__(self, window):
        self.window = window
        self.trips = {}

    def mean(self, dst):
        window = self.trips.get(dst)
        if not window:
            return None
        return sum(window) / len(window)

    def push(self, dst, trip_us):
        window = self.trips.get(dst)
        if window is None:
            window = deque(maxlen=self.window)
            self.trips[dst] = window
        window.append(trip_us)


class NeighborEstimate:
    """What the latest hellos from one neighbor reported."""

    __slots__ = ("last_hello_at", "own_queues", "two_hop")

    def __init__(self, last_hello_at, own_queues, two_hop):
        self.last_hello_at = last_hello_at
        self.own_queues = own_queues  # {channel: queue length}
        self.two_hop = two_hop  # {node: ({channel: q}, heard_at)}


class LinkEstimationTable:
    """Hello-derived view of neighbor and two-hop queue state. Entries expire
    once the last hello is older than expiry_intervals hello periods."""

    def __init__(self, hello_interval_us, expiry_intervals=3):
        self.expiry_us = int(hello_interval_us * expiry_intervals)
        self.entries = {}

    def update(self, nbr, now_us, own_queues, two_hop):
        self.entries[nbr] = NeighborEstimate(now_us, own_queues, two_hop)

    def get(self, nbr, now_us):
        entry = self.entries.get(nbr)
        if entry is None or now_us - entry.last_hello_at > self.expiry_us:
            return None
        return entry

    def drop(self, nbr):
        self.entries.pop(nbr, None)

    def known_queue(self, node, channel, now_us):
        """Freshest known queue length of node on channel, reachable through
        direct hellos or a neighbor's advertised two-hop map. None when the
        node's queue was never reported (or everything aged out)."""
        best = None
        best_at = -1
        for nbr in sorted(self.entries):
            entry = self.get(nbr, now_us)
            if entry is None:
                continue
            if nbr == node:
                q = entry.own_queues.get(channel)
                if q is not None and entry.last_hello_at > best_at:
                    best, best_at = q, entry.last_hello_at
                continue
            reported = entry.two_hop.get(node)
            if reported is not None:
                queues, heard_at = reported
                q = queues.get(channel)
                if q is not None and heard_at > best_at:
                    best, best_at = q, heard_at
        return best
