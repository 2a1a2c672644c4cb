"""Reference routers: precomputed shortest-hop forwarding and a hop-count
ant router that shares the walk machinery but ignores link conditions."""

import numpy as np

from . import mac as mac_mod
from .antmesh import AntWalkRouter, reinforcement
from .tables import DelayTable


class StaticRoutes:
    """Shortest-hop next-hop tables over the configured connectivity graph.

    Computed lazily per destination and kept until `invalidate`; the
    simulation never invalidates them while nodes merely move, so under
    mobility the routes rot exactly the way hand-configured routes would.
    Ties break toward the lowest neighbor id.
    """

    def __init__(self, topo):
        self.topo = topo
        self._next_hop = {}

    def invalidate(self):
        self._next_hop.clear()

    def next_hop(self, node, dst):
        table = self._next_hop.get(dst)
        if table is None:
            table = self._compute(dst)
            self._next_hop[dst] = table
        nh = table[node]
        return None if nh < 0 else int(nh)

    def _compute(self, dst):
        adj = self.topo.adj
        n = self.topo.n
        dist = np.full(n, -1, dtype=np.int32)
        dist[dst] = 0
        frontier = np.zeros(n, dtype=bool)
        frontier[dst] = True
        d = 0
        while frontier.any():
            d += 1
            reach = adj[frontier].any(axis=0) & (dist < 0)
            if not reach.any():
                break
            dist[reach] = d
            frontier = reach
        table = np.full(n, -1, dtype=np.int64)
        for k in range(n):
            if dist[k] <= 0:
                continue
            candidates = np.flatnonzero(adj[k] & (dist == dist[k] - 1))
            if len(candidates):
                table[k] = candidates[0]
        return table


class StaticRouter:
    """Per-node facade over the shared shortest-hop tables. Sends no control
    traffic of any kind."""

    uses_hello = False

    def __init__(self, node_id, env, routes):
        self.node = node_id
        self.env = env
        self.routes = routes

    def on_ant_timer(self):
        pass

    def on_hello_timer(self):
        pass

    def on_fsa(self, pkt):
        pass

    def on_bsa(self, pkt):
        pass

    def on_hsa(self, pkt):
        pass

    def on_neighbors_changed(self, gained, lost):
        pass

    def forward_data(self, pkt):
        nxt = self.routes.next_hop(self.node, pkt.dst)
        if nxt is None:
            self.env.drop(pkt, mac_mod.LOSS_NOROUTE)
            return
        best = None
        best_q = None
        for c in self.env.topo.shared_channels(self.node, nxt):
            q = self.env.mac.backlog(self.node, c)
            if best_q is None or q < best_q:
                best, best_q = c, q
        if best is None:
            self.env.drop(pkt, mac_mod.LOSS_NOROUTE)
            return
        pkt.next_hop = nxt
        self.env.mac.enqueue(self.node, best, pkt)


class HopAntRouter(AntWalkRouter):
    """Ant router whose backward ants score paths by hop count alone. Data
    packets follow the strongest pheromone deterministically."""

    def __init__(self, node_id, env, params):
        super().__init__(node_id, env, params)
        self.hop_window = DelayTable(params.window_w)

    def data_p0(self):
        return 1.0

    def _accumulate(self, ant, idx, channel, next_node):
        hops_left = len(ant.hops) - idx
        mean = self.hop_window.mean(ant.dst)
        if mean is None:
            mean = float(hops_left)
        self.hop_window.push(ant.dst, float(hops_left))
        dp = reinforcement(mean, float(hops_left), 1.0)
        self.table.reinforce(ant.dst, next_node, dp)
