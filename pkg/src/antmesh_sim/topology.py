"""Node/radio layout, closed-disc connectivity per channel, interference sets,
and random-waypoint motion with link-delta reporting."""

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TX_RANGE_M = 250.0
DEFAULT_INTERFERENCE_MULTIPLIER = 2.0
DEFAULT_BANDWIDTH_BPS = 2_000_000


@dataclass(frozen=True)
class RadioSpec:
    channel: int
    bandwidth_bps: int = DEFAULT_BANDWIDTH_BPS


@dataclass
class NodeSpec:
    node_id: int
    x: float
    y: float
    radios: tuple = ()
    gateway: bool = False
    mobile: bool = False


@dataclass(frozen=True)
class Link:
    a: int
    b: int
    channel: int
    bandwidth_bps: int


@dataclass
class LinkDelta:
    """Per-node neighbor-set changes produced by one mobility tick."""

    gained: dict = field(default_factory=dict)  # node -> sorted new neighbor ids
    lost: dict = field(default_factory=dict)

    def empty(self):
        return not self.gained and not self.lost


class Topology:
    """Closed-disc model: nodes are neighbors on a channel when both carry a
    radio on it and their distance is <= tx_range; interferers use
    tx_range * interference_multiplier. Adjacency is kept as boolean matrices
    so mobility re-checks stay vectorized."""

    def __init__(self, nodes, area=(1000.0, 1000.0),
                 tx_range=DEFAULT_TX_RANGE_M,
                 interference_multiplier=DEFAULT_INTERFERENCE_MULTIPLIER):
        self.nodes = sorted(nodes, key=lambda n: n.node_id)
        ids = [n.node_id for n in self.nodes]
        if ids != list(range(len(ids))):
            raise ValueError("node ids must be 0..N-1 without gaps")
        self.n = len(self.nodes)
        self.area = area
        self.tx_range = float(tx_range)
        self.interference_multiplier = float(interference_multiplier)
        self.xs = np.array([n.x for n in self.nodes], dtype=np.float64)
        self.ys = np.array([n.y for n in self.nodes], dtype=np.float64)
        self.gateways = sorted(n.node_id for n in self.nodes if n.gateway)

        self.channels = sorted({r.channel for n in self.nodes for r in n.radios})
        # node -> {channel: bandwidth}
        self.radio_bw = [
            {r.channel: r.bandwidth_bps for r in n.radios} for n in self.nodes
        ]
        self._members = {
            c: np.array(
                [n.node_id for n in self.nodes if c in self.radio_bw[n.node_id]],
                dtype=np.intp,
            )
            for c in self.channels
        }

        # Waypoint state; targets start at the node position so the first
        # tick draws a fresh target for every mobile node.
        self.mobile = np.array([bool(n.mobile) for n in self.nodes])
        self._target_x = self.xs.copy()
        self._target_y = self.ys.copy()
        self._pause_until = np.zeros(self.n, dtype=np.int64)

        self.adj = None  # combined: neighbors on any shared channel
        self.adj_on = {}  # channel -> boolean matrix
        self.intf_on = {}  # channel -> boolean matrix (excludes self)
        self._neighbor_lists = None
        self.rebuild()

    # -- connectivity ------------------------------------------------------

    def rebuild(self):
        combined = np.zeros((self.n, self.n), dtype=bool)
        r2 = self.tx_range * self.tx_range
        ir = self.tx_range * self.interference_multiplier
        ir2 = ir * ir
        for c in self.channels:
            m = self._members[c]
            full_adj = np.zeros((self.n, self.n), dtype=bool)
            full_intf = np.zeros((self.n, self.n), dtype=bool)
            if len(m) > 1:
                dx = self.xs[m][:, None] - self.xs[m][None, :]
                dy = self.ys[m][:, None] - self.ys[m][None, :]
                d2 = dx * dx + dy * dy
                adj = d2 <= r2
                intf = d2 <= ir2
                np.fill_diagonal(adj, False)
                np.fill_diagonal(intf, False)
                full_adj[np.ix_(m, m)] = adj
                full_intf[np.ix_(m, m)] = intf
            self.adj_on[c] = full_adj
            self.intf_on[c] = full_intf
            combined |= full_adj
        self.adj = combined
        self._neighbor_lists = [
            np.flatnonzero(combined[k]).tolist() for k in range(self.n)
        ]

    def neighbor_ids(self, node):
        """Sorted ids of nodes sharing at least one in-range channel."""
        return self._neighbor_lists[node]

    def neighbors_on(self, node, channel):
        return np.flatnonzero(self.adj_on[channel][node]).tolist()

    def is_neighbor_on(self, a, b, channel):
        m = self.adj_on.get(channel)
        return bool(m[a, b]) if m is not None else False

    def interferers(self, node, channel):
        """Sorted ids of other nodes with a radio on channel within
        interference range of node."""
        m = self.intf_on.get(channel)
        if m is None:
            return []
        return np.flatnonzero(m[node]).tolist()

    def interferes(self, a, b, channel):
        if a == b:
            return True
        m = self.intf_on.get(channel)
        return bool(m[a, b]) if m is not None else False

    def shared_channels(self, a, b):
        return [c for c in self.channels if self.adj_on[c][a, b]]

    def link(self, a, b, channel):
        bw = min(self.radio_bw[a][channel], self.radio_bw[b][channel])
        return Link(a, b, channel, bw)

    def link_bandwidth(self, a, b, channel):
        return min(self.radio_bw[a][channel], self.radio_bw[b][channel])

    def neighbors(self, node):
        """[(neighbor id, [Link, ...])] over every shared in-range channel."""
        out = []
        for nbr in self._neighbor_lists[node]:
            links = [self.link(node, nbr, c) for c in self.shared_channels(node, nbr)]
            out.append((nbr, links))
        return out

    # -- mobility ----------------------------------------------------------

    def tick(self, now_us, dt_us, rng, speeds, pause_us=0):
        """Advance mobile nodes by one waypoint step and rebuild adjacency.

        speeds: per-node speed in m/s (array-like). A node reaching its
        waypoint pauses for pause_us, then a fresh uniform target is drawn
        (ascending node order keeps the draw sequence deterministic).
        Returns a LinkDelta with per-node gained/lost neighbor ids.
        """
        dt_s = dt_us / 1_000_000.0
        moved = False
        for i in range(self.n):
            if not self.mobile[i] or speeds[i] <= 0.0:
                continue
            if now_us < self._pause_until[i]:
                continue
            dx = self._target_x[i] - self.xs[i]
            dy = self._target_y[i] - self.ys[i]
            dist = (dx * dx + dy * dy) ** 0.5
            step = speeds[i] * dt_s
            if dist <= step:
                self.xs[i] = self._target_x[i]
                self.ys[i] = self._target_y[i]
                self._target_x[i] = rng.uniform(0.0, self.area[0])
                self._target_y[i] = rng.uniform(0.0, self.area[1])
                if pause_us > 0:
                    self._pause_until[i] = now_us + pause_us
            else:
                self.xs[i] += dx / dist * step
                self.ys[i] += dy / dist * step
            moved = True
        if not moved:
            return LinkDelta()

        prev = self.adj
        self.rebuild()
        changed = prev != self.adj
        delta = LinkDelta()
        if changed.any():
            for k in np.flatnonzero(changed.any(axis=1)):
                row = changed[k]
                gained = np.flatnonzero(row & self.adj[k]).tolist()
                lost = np.flatnonzero(row & prev[k]).tolist()
                if gained:
                    delta.gained[int(k)] = gained
                if lost:
                    delta.lost[int(k)] = lost
        return delta


def grid_positions(rows, cols, spacing, x0=0.0, y0=0.0):
    """Row-major lattice coordinates: node r*cols+c sits at
    (x0 + c*spacing, y0 + r*spacing)."""
    out = []
    for r in range(rows):
        for c in range(cols):
            out.append((x0 + c * spacing, y0 + r * spacing))
    return out
