"""Pheromone routing with interference-aware trip estimation.

Three ant species maintain the state: forward ants sample a path to a
destination with the pseudo-random rule, backward ants retrace it and
accumulate per-link trip estimates (queueing, inter-flow and intra-flow
interference) while depositing pheromone, and hello ants broadcast queue
state so nodes can price the contention around them.
"""

from dataclasses import dataclass

from . import mac as mac_mod
from .mac import Packet, expected_tx_time
from .tables import DelayTable, LinkEstimationTable, PheromoneTable

FSA_BASE_BYTES = 64
FSA_PER_HOP_BYTES = 8
HSA_BASE_BYTES = 32
HSA_PER_NEIGHBOR_BYTES = 12


# -- estimation primitives --------------------------------------------------

def link_quality(e_tx_us, q_len):
    """Expected head-of-line cost of a link, in us: the packets already
    waiting plus the packet itself, each at the expected transmission time."""
    return e_tx_us * q_len + e_tx_us


def inter_flow_delay(lq_us, interferer_queues):
    """Link quality inflated by the busiest interfering queue. The max is
    clamped below at 1 so an idle neighborhood never discounts the link."""
    worst = 1
    for q in interferer_queues:
        if q > worst:
            worst = q
    return lq_us * worst


def intra_flow_cost(prev_channel, cur_channel, q_next, pkt_bits, link_bps):
    """Self-interference surcharge (us) when two consecutive path hops share
    a channel; zero for channel-diverse hop pairs."""
    if prev_channel != cur_channel:
        return 0.0
    return 2.0 * q_next * pkt_bits * 1_000_000.0 / link_bps


def reinforcement(mean_trip_us, trip_us, cap):
    """Pheromone reward for a reported trip, relative to the destination's
    recent mean; capped so one outlier cannot saturate a column."""
    dp = 0.5 * mean_trip_us / trip_us
    return cap if dp > cap else dp


@dataclass
class AntMeshParams:
    p0: float = 0.8
    ant_rate_hz: float = 40.0
    hello_interval_s: float = 1.0
    window_w: int = 10
    delta_p_cap: float = 1.0


class SmartAnt:
    """Route-sampling agent. hops holds (node, channel) per forward step, in
    path order; cursor is the backward ant's position in that list."""

    __slots__ = ("kind", "src", "dst", "hops", "trip_us", "visited", "cursor")

    def __init__(self, kind, src, dst):
        self.kind = kind
        self.src = src
        self.dst = dst
        self.hops = []
        self.trip_us = 0.0
        self.visited = {src}
        self.cursor = 0


class AntWalkRouter:
    """Shared ant machinery: timer-driven forward ants, loop-free walks, and
    backward retracing. Subclasses supply the per-hop accumulate step and the
    data-forwarding exploitation level."""

    uses_hello = False

    def __init__(self, node_id, env, params):
        self.node = node_id
        self.env = env
        self.params = params
        self.table = PheromoneTable(env.topo.neighbor_ids(node_id))

    # -- helpers -----------------------------------------------------------

    def _pick_channel(self, nbr):
        """Least-backlogged shared channel toward nbr; ties break low."""
        best = None
        best_q = None
        for c in self.env.topo.shared_channels(self.node, nbr):
            q = self.env.mac.backlog(self.node, c)
            if best_q is None or q < best_q:
                best, best_q = c, q
        return best

    def _ant_destination(self):
        """A uniformly random destination among this node's active flows,
        else a random gateway, else nothing to probe."""
        stream = self.env.sim.rng.stream("ant-forwarding")
        dsts = self.env.active_flow_dsts(self.node)
        if dsts:
            return dsts[0] if len(dsts) == 1 else stream.choice(dsts)
        gws = [g for g in self.env.topo.gateways if g != self.node]
        if gws:
            return gws[0] if len(gws) == 1 else stream.choice(gws)
        return None

    # -- forward ants ------------------------------------------------------

    def on_ant_timer(self):
        dst = self._ant_destination()
        if dst is None or dst == self.node:
            return
        ant = SmartAnt(mac_mod.FSA, self.node, dst)
        pkt = self.env.make_packet(mac_mod.FSA, self.node, dst)
        pkt.ant = ant
        self._fsa_step(pkt, ant)

    def _fsa_step(self, pkt, ant):
        if pkt.ttl <= 0:
            self.env.ant_died("ttl")
            return
        u = self.env.sim.uniform("ant-forwarding")
        allowed = [n for n in self.table.nbrs if n not in ant.visited]
        nxt = self.table.select(ant.dst, u, self.params.p0,
                                allowed_ids=set(allowed)) if allowed else None
        if nxt is None:
            self.env.ant_died("dead-end")
            return
        channel = self._pick_channel(nxt)
        if channel is None:
            self.env.ant_died("dead-end")
            return
        ant.hops.append((self.node, channel))
        ant.visited.add(nxt)
        pkt.ttl -= 1
        pkt.next_hop = nxt
        pkt.size_bits = (FSA_BASE_BYTES + FSA_PER_HOP_BYTES * len(ant.hops)) * 8
        self.env.mac.enqueue(self.node, channel, pkt)

    def on_fsa(self, pkt):
        ant = pkt.ant
        if self.node == ant.dst:
            self._spawn_bsa(ant)
            return
        self._fsa_step(pkt, ant)

    # -- backward ants -----------------------------------------------------

    def _spawn_bsa(self, fsa):
        back = SmartAnt(mac_mod.BSA, fsa.src, fsa.dst)
        back.hops = fsa.hops
        back.cursor = len(fsa.hops) - 1
        if back.cursor < 0:
            return
        pkt = self.env.make_packet(mac_mod.BSA, fsa.dst, fsa.src)
        pkt.ant = back
        node, channel = back.hops[back.cursor]
        pkt.next_hop = node
        pkt.size_bits = (FSA_BASE_BYTES + FSA_PER_HOP_BYTES * len(back.hops)) * 8
        self.env.mac.enqueue(self.node, channel, pkt)

    def on_bsa(self, pkt):
        ant = pkt.ant
        idx = ant.cursor
        # The recorded hop for this node: the link it forwarded the FSA over.
        node, channel = ant.hops[idx]
        next_node = ant.hops[idx + 1][0] if idx + 1 < len(ant.hops) else ant.dst
        self._accumulate(ant, idx, channel, next_node)
        if self.node == ant.src:
            self.env.ant_completed()
            return
        if pkt.ttl <= 0:
            self.env.ant_died("ttl")
            return
        ant.cursor = idx - 1
        prev_node, prev_channel = ant.hops[ant.cursor]
        pkt.ttl -= 1
        pkt.next_hop = prev_node
        self.env.mac.enqueue(self.node, prev_channel, pkt)

    def _accumulate(self, ant, idx, channel, next_node):
        raise NotImplementedError

    # -- data --------------------------------------------------------------

    def data_p0(self):
        return self.params.p0

    def forward_data(self, pkt):
        u = self.env.sim.uniform("ant-forwarding")
        nxt = self.table.select(pkt.dst, u, self.data_p0(),
                                exclude=pkt.arrived_from)
        if nxt is None:
            self.env.drop(pkt, mac_mod.LOSS_NOROUTE)
            return
        channel = self._pick_channel(nxt)
        if channel is None:
            self.env.drop(pkt, mac_mod.LOSS_NOROUTE)
            return
        pkt.next_hop = nxt
        self.env.mac.enqueue(self.node, channel, pkt)

    # -- topology churn ----------------------------------------------------

    def on_neighbors_changed(self, gained, lost):
        for n in lost:
            self.table.remove_neighbor(n)
        for n in gained:
            self.table.add_neighbor(n)

    def on_hello_timer(self):
        pass

    def on_hsa(self, pkt):
        pass


class AntMeshRouter(AntWalkRouter):
    """Full estimator: backward ants price each link with queueing plus
    inter-flow and intra-flow interference, maintain per-destination trip
    windows, and deposit trip-relative pheromone."""

    uses_hello = True

    def __init__(self, node_id, env, params):
        super().__init__(node_id, env, params)
        self.delay = DelayTable(params.window_w)
        hello_us = int(round(params.hello_interval_s * 1_000_000))
        self.links = LinkEstimationTable(hello_us)

    # -- hello ants ---------------------------------------------------------

    def on_hello_timer(self):
        env = self.env
        now = env.sim.now
        own_queues = {}
        for spec in env.topo.nodes[self.node].radios:
            own_queues[spec.channel] = env.mac.queue_len(self.node, spec.channel)
        two_hop = {}
        for nbr in sorted(self.links.entries):
            entry = self.links.get(nbr, now)
            if entry is not None:
                two_hop[nbr] = (entry.own_queues, entry.last_hello_at)
        size_bits = (HSA_BASE_BYTES + HSA_PER_NEIGHBOR_BYTES * len(two_hop)) * 8
        for spec in env.topo.nodes[self.node].radios:
            pkt = env.make_packet(mac_mod.HSA, self.node, -1)
            pkt.size_bits = size_bits
            pkt.ant = (own_queues, two_hop)
            pkt.next_hop = None
            env.mac.enqueue(self.node, spec.channel, pkt)

    def on_hsa(self, pkt):
        own_queues, two_hop = pkt.ant
        self.links.update(pkt.src, self.env.sim.now, own_queues, two_hop)

    # -- trip accumulation ---------------------------------------------------

    def _accumulate(self, ant, idx, channel, next_node):
        env = self.env
        now = env.sim.now
        rate = env.topo.link_bandwidth(self.node, next_node, channel)
        e_tx = expected_tx_time(env.data_bits, rate, 1, env.mac.consts,
                                env.mac.use_rts_cts)
        lq = link_quality(e_tx, env.mac.queue_len(self.node, channel))

        queues = []
        for m in env.topo.interferers(self.node, channel):
            q = self.links.known_queue(m, channel, now)
            if q is not None:
                queues.append(q)
        itt = inter_flow_delay(lq, queues)

        if idx + 1 < len(ant.hops):
            next_channel = ant.hops[idx + 1][1]
            if next_channel == channel:
                entry = self.links.get(next_node, now)
                if entry is not None:
                    q_next = entry.own_queues.get(channel, 0)
                else:
                    q_next = 0
                    env.stale_estimate()
                itt += intra_flow_cost(channel, next_channel, q_next,
                                       env.data_bits, rate)
        ant.trip_us += itt

        mean = self.delay.mean(ant.dst)
        if mean is None:
            mean = ant.trip_us
        self.delay.push(ant.dst, ant.trip_us)
        dp = reinforcement(mean, ant.trip_us, self.params.delta_p_cap)
        self.table.reinforce(ant.dst, next_node, dp)

    def on_neighbors_changed(self, gained, lost):
        super().on_neighbors_changed(gained, lost)
        for n in lost:
            self.links.drop(n)

    # -- diagnostics ---------------------------------------------------------

    def dump_lines(self, now_us):
        """One line per (dst, via): pheromone, mean trip, live link quality."""
        env = self.env
        lines = []
        for dst in sorted(self.table.cols):
            mean = self.delay.mean(dst)
            mean_txt = f"{mean:.1f}" if mean is not None else "-"
            for via in self.table.nbrs:
                p = self.table.probability(dst, via)
                channels = env.topo.shared_channels(self.node, via)
                if channels:
                    c = channels[0]
                    rate = env.topo.link_bandwidth(self.node, via, c)
                    e_tx = expected_tx_time(env.data_bits, rate, 1,
                                            env.mac.consts, env.mac.use_rts_cts)
                    lq = link_quality(e_tx, env.mac.queue_len(self.node, c))
                    lq_txt = f"{lq:.1f}"
                else:
                    lq_txt = "-"
                lines.append(
                    f"{now_us}\t{self.node}\t{dst}\t{via}\t{p:.6f}\t"
                    f"{mean_txt}\t{lq_txt}"
                )
        return lines
