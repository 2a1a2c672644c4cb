"""Contention-free MAC abstraction: per-radio dual-lane FIFO queues, expected
transmission timing with RTS/CTS overhead, a capped-geometric retry model,
and deterministic serialization of mutually interfering transmissions."""

import math
from collections import deque
from dataclasses import dataclass

from . import engine

# Packet kinds.
DATA = "data"
FSA = "fsa"
BSA = "bsa"
HSA = "hsa"

CONTROL_KINDS = (FSA, BSA, HSA)

# Loss causes (data packets).
LOSS_QUEUE = "queue-overflow"
LOSS_MAC = "mac-loss"
LOSS_TTL = "ttl-expired"
LOSS_NOROUTE = "no-route"
LOSS_HORIZON = "horizon-cut"

DEFAULT_DATA_CAPACITY = 20
DEFAULT_P_FAIL = 0.1
DEFAULT_RETRY_LIMIT = 7
DEFAULT_TTL = 32
DEFAULT_DATA_BYTES = 512


@dataclass(frozen=True)
class MacConstants:
    """Control-frame timings in microseconds."""

    t_rts: int = 352
    t_cts: int = 304
    t_ack: int = 304
    t_sifs: int = 10
    t_difs: int = 50


def mac_overhead(consts, use_rts_cts=True):
    """Fixed per-frame overhead: RTS + CTS + 3*SIFS + DIFS + ACK, in us.
    With use_rts_cts off the RTS and CTS terms are dropped."""
    oh = 3 * consts.t_sifs + consts.t_difs + consts.t_ack
    if use_rts_cts:
        oh += consts.t_rts + consts.t_cts
    return oh


def expected_tx_time(pkt_bits, link_rate_bps, n_tx, consts, use_rts_cts=True):
    """Expected time to push pkt_bits over a link, in us:
    n_tx * (overhead + serialization)."""
    serial_us = pkt_bits * 1_000_000.0 / link_rate_bps
    return n_tx * (mac_overhead(consts, use_rts_cts) + serial_us)


def sample_attempts(u, p_fail, retry_limit):
    """Capped-geometric retry draw from one uniform.

    Returns (attempts_used, delivered): the attempt count until first
    success, capped at retry_limit; delivered is False when every attempt
    within the cap failed.
    """
    if p_fail <= 0.0:
        return 1, True
    if p_fail >= 1.0:
        return retry_limit, False
    if u <= 0.0:
        u = 5e-324  # smallest positive double; keeps log() finite
    g = 1 + int(math.log(u) / math.log(p_fail))
    if g <= retry_limit:
        return g, True
    return retry_limit, False


class Packet:
    __slots__ = (
        "pkt_id", "kind", "src", "dst", "size_bits", "born_at", "ttl",
        "ant", "next_hop", "channel", "arrived_from", "flow_id",
    )

    def __init__(self, pkt_id, kind, src, dst, size_bits, born_at, ttl):
        self.pkt_id = pkt_id
        self.kind = kind
        self.src = src
        self.dst = dst
        self.size_bits = size_bits
        self.born_at = born_at
        self.ttl = ttl
        self.ant = None
        self.next_hop = None  # None marks a broadcast
        self.channel = None
        self.arrived_from = None
        self.flow_id = None


class Radio:
    __slots__ = ("node", "channel", "bandwidth_bps", "control", "data",
                 "busy", "parked")

    def __init__(self, node, channel, bandwidth_bps):
        self.node = node
        self.channel = channel
        self.bandwidth_bps = bandwidth_bps
        self.control = deque()
        self.data = deque()
        self.busy = False
        self.parked = False

    def data_len(self):
        return len(self.data)

    def head(self):
        if self.control:
            return self.control[0]
        if self.data:
            return self.data[0]
        return None

    def pop_head(self):
        if self.control:
            return self.control.popleft()
        return self.data.popleft()


class MacLayer:
    """Owns every radio queue and the per-channel transmission serializer.

    At most one transmission is active at a time among mutually interfering
    links on a channel; blocked radios wait and are served in (request time,
    node id) order. Control frames always preempt the data lane; only the
    data lane has finite capacity.
    """

    def __init__(self, sim, topo, consts=None, p_fail=DEFAULT_P_FAIL,
                 retry_limit=DEFAULT_RETRY_LIMIT,
                 data_capacity=DEFAULT_DATA_CAPACITY, use_rts_cts=True,
                 on_drop=None, on_control_tx=None):
        self.sim = sim
        self.topo = topo
        self.consts = consts or MacConstants()
        self.p_fail = p_fail
        self.retry_limit = retry_limit
        self.data_capacity = data_capacity
        self.use_rts_cts = use_rts_cts
        self.on_drop = on_drop or (lambda pkt, cause: None)
        self.on_control_tx = on_control_tx or (lambda pkt: None)

        self.radios = {}
        for node in topo.nodes:
            for spec in node.radios:
                self.radios[(node.node_id, spec.channel)] = Radio(
                    node.node_id, spec.channel, spec.bandwidth_bps
                )
        self._active = {c: [] for c in topo.channels}  # [(a, b, radio)]
        self._waiting = {c: [] for c in topo.channels}  # [(req_us, node, radio)]
        sim.register(engine.TX_COMPLETE, self._on_tx_complete)

    def radio(self, node, channel):
        return self.radios[(node, channel)]

    def queue_len(self, node, channel):
        """Data packets waiting on a node's radio; the equation inputs."""
        r = self.radios.get((node, channel))
        return r.data_len() if r is not None else 0

    def backlog(self, node, channel):
        """Total frames pending on a radio (both lanes plus any transmission
        in flight); the channel-selection load signal."""
        r = self.radios.get((node, channel))
        if r is None:
            return 0
        return len(r.control) + len(r.data) + (1 if r.busy else 0)

    # -- admission ---------------------------------------------------------

    def enqueue(self, node, channel, pkt):
        """Queue a packet on the node's radio for channel. Data beyond the
        buffer cap is dropped as queue-overflow; control is never dropped.
        Returns True when the packet was accepted."""
        radio = self.radios[(node, channel)]
        pkt.channel = channel
        if pkt.kind == DATA:
            if len(radio.data) >= self.data_capacity:
                self.on_drop(pkt, LOSS_QUEUE)
                return False
            radio.data.append(pkt)
        else:
            radio.control.append(pkt)
        self._maybe_start(radio)
        return True

    # -- transmission lifecycle --------------------------------------------

    def _conflicts(self, channel, a, b):
        for (x, y, _radio) in self._active[channel]:
            if (self.topo.interferes(a, x, channel)
                    or self.topo.interferes(a, y, channel)
                    or self.topo.interferes(b, x, channel)
                    or self.topo.interferes(b, y, channel)):
                return True
        return False

    def _maybe_start(self, radio):
        if radio.busy or radio.parked:
            return
        if radio.head() is None:
            return
        self._try_start(radio, self.sim.now)

    def _try_start(self, radio, request_us):
        """Start the head-of-line packet now, or park the radio in the
        channel's wait list. Invalid heads (next hop out of range) are
        shed first."""
        channel = radio.channel
        while True:
            pkt = radio.head()
            if pkt is None:
                return
            if pkt.next_hop is None or self.topo.is_neighbor_on(
                    radio.node, pkt.next_hop, channel):
                break
            radio.pop_head()
            self._drop_in_transit(pkt, LOSS_NOROUTE)
        peer = pkt.next_hop if pkt.next_hop is not None else radio.node
        if self._conflicts(channel, radio.node, peer):
            radio.parked = True
            self._waiting[channel].append((request_us, radio.node, radio))
            return
        self._start(radio, pkt, peer)

    def _start(self, radio, pkt, peer):
        radio.pop_head()
        radio.busy = True
        u = self.sim.uniform("loss")
        attempts, ok = sample_attempts(u, self.p_fail, self.retry_limit)
        duration = int(round(expected_tx_time(
            pkt.size_bits, radio.bandwidth_bps, attempts,
            self.consts, self.use_rts_cts)))
        self._active[radio.channel].append((radio.node, peer, radio))
        if pkt.kind != DATA:
            self.on_control_tx(pkt)
        self.sim.schedule_in(
            duration, engine.TX_COMPLETE,
            (radio, pkt, attempts, ok, self.sim.now),
        )

    def _on_tx_complete(self, event):
        radio, pkt, attempts, ok, started = event.payload
        channel = radio.channel
        radio.busy = False
        self._active[channel] = [
            entry for entry in self._active[channel] if entry[2] is not radio
        ]
        if ok:
            pkt.arrived_from = radio.node
            if pkt.next_hop is None:
                for nbr in self.topo.neighbors_on(radio.node, channel):
                    self.sim.schedule(
                        self.sim.now, engine.PACKET_ARRIVAL, (nbr, pkt))
            elif self.topo.is_neighbor_on(radio.node, pkt.next_hop, channel):
                self.sim.schedule(
                    self.sim.now, engine.PACKET_ARRIVAL, (pkt.next_hop, pkt))
            else:
                # Receiver moved out of range mid-flight.
                self._drop_in_transit(pkt, LOSS_MAC)
        else:
            self._drop_in_transit(pkt, LOSS_MAC)
        self._maybe_start(radio)
        self._wake_waiting(channel)

    def _drop_in_transit(self, pkt, cause):
        self.on_drop(pkt, cause)

    def _wake_waiting(self, channel):
        waiting = self._waiting[channel]
        if not waiting:
            return
        waiting.sort(key=lambda entry: (entry[0], entry[1]))
        self._waiting[channel] = []
        for request_us, _node, radio in waiting:
            radio.parked = False
            if not radio.busy and radio.head() is not None:
                self._try_start(radio, request_us)

    def wake_all(self):
        """Re-examine every parked radio; used after interference sets move."""
        for channel in self.topo.channels:
            self._wake_waiting(channel)
