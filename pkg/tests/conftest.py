"""Shared test harness.

FakeEnv drives the real router classes without the event loop: FakeMac hands
every enqueued frame straight to its receiver, so walk/retrace logic can be
exercised round by round with scripted queue lengths and zero airtime.
"""

from antmesh_sim import mac as mac_mod
from antmesh_sim.engine import RngRegistry
from antmesh_sim.mac import MacConstants, Packet
from antmesh_sim.topology import NodeSpec, RadioSpec, Topology


class FakeSim:
    def __init__(self, seed):
        self.now = 0
        self.rng = RngRegistry(seed)

    def uniform(self, stream_id):
        return self.rng.uniform(stream_id)


class FakeMac:
    """Zero-latency MAC: frames arrive at the receiver inside enqueue()."""

    def __init__(self, env, consts=None, use_rts_cts=True):
        self.env = env
        self.consts = consts if consts is not None else MacConstants()
        self.use_rts_cts = use_rts_cts
        self.queues = {}  # (node, channel) -> scripted data-lane length
        self.log = []
        self.sizes = []  # size_bits at enqueue time (packets mutate in walk)

    def queue_len(self, node, channel):
        return self.queues.get((node, channel), 0)

    def backlog(self, node, channel):
        return self.queues.get((node, channel), 0)

    def enqueue(self, node, channel, pkt):
        self.log.append(pkt)
        self.sizes.append(pkt.size_bits)
        pkt.channel = channel
        if pkt.next_hop is None:
            for m in self.env.topo.neighbors_on(node, channel):
                pkt.arrived_from = node
                self.env.dispatch(m, pkt)
            return True
        pkt.arrived_from = node
        self.env.dispatch(pkt.next_hop, pkt)
        return True


class FakeEnv:
    """Stands in for Simulation as seen from a router."""

    def __init__(self, topo, seed=1, data_bytes=512, ttl=32):
        self.topo = topo
        self.sim = FakeSim(seed)
        self.mac = FakeMac(self)
        self.data_bits = data_bytes * 8
        self.ttl = ttl
        self.routers = {}
        self.flow_dsts = {}  # node -> destinations its ants should target
        self.delivered = []
        self.drops = []  # (pkt, cause)
        self.deaths = []  # reason strings
        self.completions = 0
        self.stale = 0
        self._seq = 0

    def add_routers(self, cls, *args):
        for spec in self.topo.nodes:
            self.routers[spec.node_id] = cls(spec.node_id, self, *args)
        return self.routers

    # -- facade the routers consume ------------------------------------------

    def make_packet(self, kind, src, dst):
        self._seq += 1
        return Packet(self._seq, kind, src, dst, size_bits=self.data_bits,
                      born_at=self.sim.now, ttl=self.ttl)

    def active_flow_dsts(self, node):
        return self.flow_dsts.get(node, [])

    def drop(self, pkt, cause):
        self.drops.append((pkt, cause))

    def ant_died(self, reason):
        self.deaths.append(reason)

    def ant_completed(self):
        self.completions += 1

    def stale_estimate(self):
        self.stale += 1

    # -- frame fan-out ---------------------------------------------------------

    def dispatch(self, node, pkt):
        router = self.routers[node]
        if pkt.kind == mac_mod.FSA:
            router.on_fsa(pkt)
        elif pkt.kind == mac_mod.BSA:
            router.on_bsa(pkt)
        elif pkt.kind == mac_mod.HSA:
            router.on_hsa(pkt)
        elif node == pkt.dst:
            self.delivered.append(pkt)
        elif pkt.ttl <= 0:
            self.drop(pkt, mac_mod.LOSS_TTL)
        else:
            pkt.ttl -= 1
            router.forward_data(pkt)


def build_topology(nodes, tx_range=250.0, area=(1000.0, 1000.0),
                   interference_multiplier=2.0):
    """nodes: iterable of (x, y, channels) tuples, ids assigned in order."""
    specs = [
        NodeSpec(i, x, y, radios=tuple(RadioSpec(c) for c in chans))
        for i, (x, y, chans) in enumerate(nodes)
    ]
    return Topology(specs, area=area, tx_range=tx_range,
                    interference_multiplier=interference_multiplier)
