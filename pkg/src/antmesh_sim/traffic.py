"""Constant-bit-rate flows with scripted start/stop times. Flow lifecycles are
the load script; their distinct event times are the change points the metrics
module measures learning against."""

from dataclasses import dataclass

from . import engine
from . import mac as mac_mod

# Fixed stagger so same-rate flows do not inject in lockstep.
_PHASE_STRIDE = 10007


@dataclass
class FlowSpec:
    flow_id: int
    src: int
    dst: int  # -1 means "a random gateway", resolved per packet
    rate_pps: float
    start_s: float = 0.0
    stop_s: float | None = None  # None runs to the horizon
    packet_bytes: int = mac_mod.DEFAULT_DATA_BYTES

    def period_us(self):
        return max(1, int(round(1_000_000 / self.rate_pps)))


class TrafficManager:
    """Schedules flow-start/flow-stop events and keeps per-flow injection
    chains going while a flow is active."""

    def __init__(self, sim, flows, horizon_us, gateways=(), ttl=mac_mod.DEFAULT_TTL):
        self.sim = sim
        self.flows = {f.flow_id: f for f in flows}
        self.horizon_us = horizon_us
        self.gateways = sorted(gateways)
        self.ttl = ttl
        self.active = set()
        self._pkt_seq = 0
        self._stop_us = {}
        sim.register(engine.FLOW_START, self._on_start)
        sim.register(engine.FLOW_STOP, self._on_stop)
        for f in flows:
            start_us = engine.seconds_to_us(f.start_s)
            stop_us = (horizon_us if f.stop_s is None
                       else min(horizon_us, engine.seconds_to_us(f.stop_s)))
            if stop_us <= start_us:
                continue
            self._stop_us[f.flow_id] = stop_us
            sim.schedule(start_us, engine.FLOW_START, f.flow_id)
            if stop_us < horizon_us:
                sim.schedule(stop_us, engine.FLOW_STOP, f.flow_id)

    def change_points(self):
        """Distinct times (us) at which the offered load changes."""
        points = set()
        for fid, flow in self.flows.items():
            if fid not in self._stop_us:
                continue
            points.add(engine.seconds_to_us(flow.start_s))
            stop = self._stop_us[fid]
            if stop < self.horizon_us:
                points.add(stop)
        return sorted(points)

    def active_dsts_from(self, node):
        out = []
        for fid in self.active:
            f = self.flows[fid]
            if f.src == node:
                out.append(f.dst if f.dst >= 0 else -1)
        # A random-gateway flow contributes every gateway as a candidate.
        resolved = []
        for d in out:
            if d == -1:
                resolved.extend(g for g in self.gateways if g != node)
            else:
                resolved.append(d)
        return sorted(set(resolved))

    def _on_start(self, event):
        fid = event.payload
        self.active.add(fid)
        flow = self.flows[fid]
        phase = (_PHASE_STRIDE * (fid + 1)) % flow.period_us()
        first = engine.seconds_to_us(flow.start_s) + phase
        if first < self._stop_us[fid]:
            self._schedule_injection(flow, first)

    def _on_stop(self, event):
        self.active.discard(event.payload)

    def _schedule_injection(self, flow, at_us):
        pkt = self._make_packet(flow, at_us)
        self.sim.schedule(at_us, engine.PACKET_ARRIVAL, (flow.src, pkt))

    def _make_packet(self, flow, born_us):
        self._pkt_seq += 1
        dst = flow.dst
        if dst < 0:
            gws = [g for g in self.gateways if g != flow.src]
            if not gws:
                dst = flow.src  # degenerate; delivered to self immediately
            elif len(gws) == 1:
                dst = gws[0]
            else:
                dst = self.sim.rng.stream("traffic").choice(gws)
        pkt = mac_mod.Packet(
            pkt_id=self._pkt_seq,
            kind=mac_mod.DATA,
            src=flow.src,
            dst=dst,
            size_bits=flow.packet_bytes * 8,
            born_at=born_us,
            ttl=self.ttl,
        )
        pkt.flow_id = flow.flow_id
        return pkt

    def continue_flow(self, flow_id, now_us):
        """Called when an injected packet fires; keeps the chain going."""
        if flow_id not in self.active:
            return
        flow = self.flows[flow_id]
        nxt = now_us + flow.period_us()
        if nxt < self._stop_us[flow_id] and nxt <= self.horizon_us:
            self._schedule_injection(flow, nxt)
