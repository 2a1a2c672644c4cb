"""Run assembly: expand a scenario into a live simulator, wire the event
handlers together, and drive it to the horizon.

The Simulation object is also the environment facade the routers program
against: it owns packet creation, flow lookups, loss accounting, and the
shared MAC/topology handles.
"""

import hashlib
import random

from . import engine
from . import mac as mac_mod
from . import scenario as scenario_mod
from .antmesh import AntMeshParams, AntMeshRouter
from .baselines import HopAntRouter, StaticRouter, StaticRoutes
from .mac import MacConstants, MacLayer, Packet
from .metrics import SAMPLE_INTERVAL_US, MetricsLedger
from .topology import NodeSpec, RadioSpec, Topology
from .traffic import FlowSpec, TrafficManager

# Stagger stride for per-node timer phases (prime, so phases spread).
_TIMER_STRIDE = 7919


def _mobile_subset(n, fraction):
    """First round(f*n) entries of one fixed permutation, so the mobile set
    is nested across fractions and independent of the run seed."""
    digest = hashlib.sha256(b"antmesh:mobile-subset").digest()
    order = list(range(n))
    random.Random(int.from_bytes(digest[:8], "big")).shuffle(order)
    return set(order[: int(round(fraction * n))])


def build_nodespecs(scn):
    """NodeSpec list for a scenario, mobile flags included."""
    lines = sorted(scenario_mod.resolve_nodes(scn), key=lambda ln: ln.node_id)
    mobile = set()
    if scn.mobility.enabled and scn.mobility.mobile_fraction > 0:
        mobile = _mobile_subset(len(lines), scn.mobility.mobile_fraction)
    bw = scn.mac.bandwidth_bps
    specs = []
    for ln in lines:
        radios = tuple(RadioSpec(c, bw) for c in sorted(ln.channels))
        specs.append(NodeSpec(ln.node_id, ln.x, ln.y, radios, ln.gateway,
                              ln.node_id in mobile))
    return specs


def _summarize(event):
    kind = event.kind
    p = event.payload
    if kind == engine.PACKET_ARRIVAL:
        node, pkt = p
        return (f"arrive node={node} kind={pkt.kind} id={pkt.pkt_id} "
                f"src={pkt.src} dst={pkt.dst} ttl={pkt.ttl}")
    if kind == engine.TX_COMPLETE:
        radio, pkt, attempts, ok, _started = p
        return (f"txdone node={radio.node} ch={radio.channel} kind={pkt.kind} "
                f"id={pkt.pkt_id} n={attempts} ok={int(ok)}")
    if kind == engine.ANT_TIMER:
        return f"ant node={p[0]}"
    if kind == engine.HELLO_TIMER:
        return f"hello node={p[0]}"
    if kind in (engine.FLOW_START, engine.FLOW_STOP):
        return f"flow={p}"
    if kind == engine.METRICS_SAMPLE:
        return str(p)
    return ""


class Simulation:
    """One seeded run of one scenario."""

    def __init__(self, scn, seed, trace=None):
        problems = scenario_mod.validate_scenario(scn)
        if problems:
            raise scenario_mod.ConfigError("; ".join(problems))
        self.scenario = scn
        self.seed = seed
        self.horizon_us = engine.seconds_to_us(scn.run.horizon_s)
        self.warmup_us = engine.seconds_to_us(scn.run.warmup_s)

        self.sim = engine.Simulator(seed, trace=trace, summarize=_summarize)
        self.topo = Topology(
            build_nodespecs(scn),
            area=(scn.topology.area_w, scn.topology.area_h),
            tx_range=scn.topology.tx_range,
            interference_multiplier=scn.topology.interference_multiplier,
        )
        self.ledger = MetricsLedger(self.warmup_us, self.horizon_us)
        m = scn.mac
        self.mac = MacLayer(
            self.sim, self.topo,
            consts=MacConstants(m.t_rts, m.t_cts, m.t_ack, m.t_sifs, m.t_difs),
            p_fail=m.p_fail, retry_limit=m.retry_limit,
            data_capacity=m.buffer_packets, use_rts_cts=m.use_rts_cts_overhead,
            on_drop=self.drop,
            on_control_tx=lambda pkt: self.ledger.on_control_tx(self.sim.now),
        )
        self.data_bits = m.data_bytes * 8
        self.ttl = m.ttl

        flows = [
            FlowSpec(i, f.src, f.dst, f.rate_pps, f.start_s, f.stop_s,
                     m.data_bytes)
            for i, f in enumerate(scn.flows)
        ]
        self.traffic = TrafficManager(
            self.sim, flows, self.horizon_us,
            gateways=self.topo.gateways, ttl=self.ttl)
        self.ledger.change_points_us = self.traffic.change_points()

        self.params = AntMeshParams(
            p0=scn.routing.p0,
            ant_rate_hz=scn.routing.ant_rate,
            hello_interval_s=scn.routing.hello_interval_s,
            window_w=scn.routing.window_w,
            delta_p_cap=scn.routing.delta_p_cap,
        )
        algo = scn.routing.routing
        self.static_routes = None
        if algo == "static":
            self.static_routes = StaticRoutes(self.topo)
            self.routers = [StaticRouter(i, self, self.static_routes)
                            for i in range(self.topo.n)]
        elif algo == "hopant":
            self.routers = [HopAntRouter(i, self, self.params)
                            for i in range(self.topo.n)]
        elif algo == "antmesh":
            self.routers = [AntMeshRouter(i, self, self.params)
                            for i in range(self.topo.n)]
        else:  # pragma: no cover - validate_scenario rejects this
            raise scenario_mod.ConfigError(f"unknown routing {algo!r}")

        self.table_dumps = []  # tab-separated diagnostic lines
        self._ctl_seq = 0

        self.sim.register(engine.PACKET_ARRIVAL, self._on_packet_arrival)
        self.sim.register(engine.ANT_TIMER, self._on_ant_timer)
        self.sim.register(engine.HELLO_TIMER, self._on_hello_timer)
        self.sim.register(engine.MOBILITY_TICK, self._on_mobility_tick)
        self.sim.register(engine.METRICS_SAMPLE, self._on_metrics_sample)
        self._schedule_timers()

    # -- environment facade (used by the routers) ----------------------------

    def make_packet(self, kind, src, dst):
        self._ctl_seq += 1
        return Packet(self._ctl_seq, kind, src, dst,
                      size_bits=self.data_bits, born_at=self.sim.now,
                      ttl=self.ttl)

    def active_flow_dsts(self, node):
        return self.traffic.active_dsts_from(node)

    def drop(self, pkt, cause):
        self.ledger.on_drop(pkt, cause)

    def ant_died(self, _reason):
        self.ledger.ant_deaths += 1

    def ant_completed(self):
        self.ledger.ants_completed += 1

    def stale_estimate(self):
        self.ledger.stale_fallbacks += 1

    # -- timers ---------------------------------------------------------------

    def _ant_sources(self):
        if self.scenario.routing.routing == "static":
            return []
        flow_srcs = {f.src for f in self.scenario.flows}
        out = []
        for node in range(self.topo.n):
            has_gw = any(g != node for g in self.topo.gateways)
            if has_gw or node in flow_srcs:
                out.append(node)
        return out

    def _schedule_timers(self):
        scn = self.scenario
        period = max(1, int(round(1_000_000 / scn.routing.ant_rate)))
        for node in self._ant_sources():
            phase = (_TIMER_STRIDE * (node + 1)) % period
            if phase < self.horizon_us:
                self.sim.schedule(phase, engine.ANT_TIMER, (node, period))
        if self.routers and self.routers[0].uses_hello:
            hello_us = max(1, int(round(scn.routing.hello_interval_s * 1_000_000)))
            for node in range(self.topo.n):
                phase = (_TIMER_STRIDE * (node + 1)) % hello_us
                if phase < self.horizon_us:
                    self.sim.schedule(phase, engine.HELLO_TIMER, (node, hello_us))
        mob = scn.mobility
        if mob.enabled and mob.speed_mps > 0 and mob.mobile_fraction > 0:
            self._mob_dt_us = max(1, int(round(mob.tick_ms * 1000)))
            self._mob_pause_us = engine.seconds_to_us(mob.pause_s)
            self._mob_speeds = [mob.speed_mps] * self.topo.n
            if self._mob_dt_us < self.horizon_us:
                self.sim.schedule(self._mob_dt_us, engine.MOBILITY_TICK, None)
        first = min(SAMPLE_INTERVAL_US, self.horizon_us)
        self.sim.schedule(first, engine.METRICS_SAMPLE, "sample")
        for t_s in scn.run.table_dump_at:
            t_us = engine.seconds_to_us(t_s)
            if 0 <= t_us <= self.horizon_us:
                self.sim.schedule(t_us, engine.METRICS_SAMPLE, "dump")

    def _on_ant_timer(self, event):
        node, period = event.payload
        self.routers[node].on_ant_timer()
        nxt = self.sim.now + period
        if nxt < self.horizon_us:
            self.sim.schedule(nxt, engine.ANT_TIMER, (node, period))

    def _on_hello_timer(self, event):
        node, period = event.payload
        self.routers[node].on_hello_timer()
        nxt = self.sim.now + period
        if nxt < self.horizon_us:
            self.sim.schedule(nxt, engine.HELLO_TIMER, (node, period))

    def _on_mobility_tick(self, event):
        delta = self.topo.tick(
            self.sim.now, self._mob_dt_us, self.sim.rng.stream("mobility"),
            self._mob_speeds, self._mob_pause_us)
        if not delta.empty():
            for node in sorted(delta.gained.keys() | delta.lost.keys()):
                self.routers[node].on_neighbors_changed(
                    delta.gained.get(node, ()), delta.lost.get(node, ()))
            # Static routes stay frozen on the configured layout: position
            # drift breaks them, which is the point of that baseline.
            self.mac.wake_all()
        nxt = self.sim.now + self._mob_dt_us
        if nxt < self.horizon_us:
            self.sim.schedule(nxt, engine.MOBILITY_TICK, None)

    def _on_metrics_sample(self, event):
        if event.payload == "dump":
            for router in self.routers:
                dump = getattr(router, "dump_lines", None)
                if dump is not None:
                    self.table_dumps.extend(dump(self.sim.now))
            return
        self.ledger.on_sample(self.sim.now)
        nxt = self.sim.now + SAMPLE_INTERVAL_US
        if nxt <= self.horizon_us:
            self.sim.schedule(nxt, engine.METRICS_SAMPLE, "sample")

    # -- packet dispatch -------------------------------------------------------

    def _on_packet_arrival(self, event):
        node, pkt = event.payload
        router = self.routers[node]
        if pkt.kind == mac_mod.DATA:
            if pkt.src == node and pkt.arrived_from is None:
                # Fresh injection at the flow source.
                self.ledger.on_inject(pkt)
                self.traffic.continue_flow(pkt.flow_id, self.sim.now)
                if pkt.dst == node:
                    self.ledger.on_deliver(pkt, self.sim.now)
                else:
                    router.forward_data(pkt)
                return
            if pkt.dst == node:
                self.ledger.on_deliver(pkt, self.sim.now)
                return
            if pkt.ttl <= 0:
                self.ledger.on_drop(pkt, mac_mod.LOSS_TTL)
                return
            pkt.ttl -= 1
            router.forward_data(pkt)
            return
        if pkt.kind == mac_mod.FSA:
            router.on_fsa(pkt)
        elif pkt.kind == mac_mod.BSA:
            router.on_bsa(pkt)
        elif pkt.kind == mac_mod.HSA:
            router.on_hsa(pkt)

    # -- driving ---------------------------------------------------------------

    def run(self):
        self.sim.run_until(self.horizon_us)
        self.ledger.finalize()
        return self.ledger
