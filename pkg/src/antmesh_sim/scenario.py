"""Scenario files, presets, and sweeps.

Format: line-oriented `[section]` headers and `key = value` pairs, `#`
comments. Unknown sections or keys are errors. `node` and `flow` keys repeat.
Preset expansion is a pure function: any randomness inside a preset comes
from fixed internal streams, never from the run seed.
"""

import hashlib
import math
import random
from dataclasses import dataclass, field

from . import mac as mac_mod
from .topology import (
    DEFAULT_BANDWIDTH_BPS,
    DEFAULT_INTERFERENCE_MULTIPLIER,
    DEFAULT_TX_RANGE_M,
    grid_positions,
)


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class NodeLine:
    node_id: int
    x: float
    y: float
    channels: tuple
    gateway: bool = False


@dataclass
class FlowLine:
    src: int
    dst: int  # -1 encodes random_gateway
    rate_pps: float
    start_s: float = 0.0
    stop_s: float | None = None


@dataclass
class TopologyConfig:
    preset: str | None = "grid15"
    area_w: float = 1000.0
    area_h: float = 1000.0
    tx_range: float = DEFAULT_TX_RANGE_M
    interference_multiplier: float = DEFAULT_INTERFERENCE_MULTIPLIER
    nodes: list = field(default_factory=list)


@dataclass
class MacSection:
    t_rts: int = 352
    t_cts: int = 304
    t_ack: int = 304
    t_sifs: int = 10
    t_difs: int = 50
    p_fail: float = mac_mod.DEFAULT_P_FAIL
    retry_limit: int = mac_mod.DEFAULT_RETRY_LIMIT
    buffer_packets: int = mac_mod.DEFAULT_DATA_CAPACITY
    use_rts_cts_overhead: bool = True
    ttl: int = mac_mod.DEFAULT_TTL
    bandwidth_bps: int = DEFAULT_BANDWIDTH_BPS
    data_bytes: int = mac_mod.DEFAULT_DATA_BYTES


@dataclass
class RoutingSection:
    routing: str = "antmesh"
    p0: float = 0.8
    ant_rate: float = 40.0
    hello_interval_s: float = 1.0
    window_w: int = 10
    delta_p_cap: float = 1.0


@dataclass
class MobilitySection:
    enabled: bool = False
    speed_mps: float = 10.0
    mobile_fraction: float = 1.0
    pause_s: float = 0.0
    tick_ms: float = 100.0


@dataclass
class RunSection:
    horizon_s: float = 30.0
    warmup_s: float = 5.0
    seeds: list = field(default_factory=lambda: [1])
    table_dump_at: list = field(default_factory=list)


@dataclass
class Scenario:
    label: str = "scenario"
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    mac: MacSection = field(default_factory=MacSection)
    routing: RoutingSection = field(default_factory=RoutingSection)
    flows: list = field(default_factory=list)
    mobility: MobilitySection = field(default_factory=MobilitySection)
    run: RunSection = field(default_factory=RunSection)


ROUTING_ALGORITHMS = ("antmesh", "static", "hopant")

# -- parsing -------------------------------------------------------------------


def _parse_bool(raw, line):
    low = raw.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}", line)


def _parse_float(raw, line):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"expected a number, got {raw!r}", line) from None


def _parse_int(raw, line):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"expected an integer, got {raw!r}", line) from None


def _parse_seeds(raw, line):
    raw = raw.strip()
    if ".." in raw:
        lo, _, hi = raw.partition("..")
        lo_i = _parse_int(lo.strip(), line)
        hi_i = _parse_int(hi.strip(), line)
        if hi_i < lo_i:
            raise ConfigError(f"empty seed range {raw!r}", line)
        return list(range(lo_i, hi_i + 1))
    return [_parse_int(part.strip(), line) for part in raw.split(",") if part.strip()]


def _parse_kv_fields(raw, line):
    fields = {}
    for token in raw.split():
        if "=" not in token:
            raise ConfigError(f"expected key=value, got {token!r}", line)
        key, _, value = token.partition("=")
        fields[key] = value
    return fields


def _parse_node(raw, line):
    fields = _parse_kv_fields(raw, line)
    required = {"id", "x", "y", "channels"}
    missing = required - fields.keys()
    if missing:
        raise ConfigError(f"node line missing {sorted(missing)}", line)
    unknown = fields.keys() - (required | {"gateway"})
    if unknown:
        raise ConfigError(f"unknown node field(s) {sorted(unknown)}", line)
    channels = tuple(
        _parse_int(c, line) for c in fields["channels"].split(",") if c
    )
    if not channels:
        raise ConfigError("node needs at least one channel", line)
    return NodeLine(
        node_id=_parse_int(fields["id"], line),
        x=_parse_float(fields["x"], line),
        y=_parse_float(fields["y"], line),
        channels=channels,
        gateway=_parse_bool(fields.get("gateway", "false"), line),
    )


def _parse_flow(raw, line):
    fields = _parse_kv_fields(raw, line)
    required = {"src", "dst", "rate"}
    missing = required - fields.keys()
    if missing:
        raise ConfigError(f"flow line missing {sorted(missing)}", line)
    unknown = fields.keys() - (required | {"start", "stop"})
    if unknown:
        raise ConfigError(f"unknown flow field(s) {sorted(unknown)}", line)
    dst_raw = fields["dst"]
    dst = -1 if dst_raw == "random_gateway" else _parse_int(dst_raw, line)
    stop = fields.get("stop")
    return FlowLine(
        src=_parse_int(fields["src"], line),
        dst=dst,
        rate_pps=_parse_float(fields["rate"], line),
        start_s=_parse_float(fields.get("start", "0"), line),
        stop_s=_parse_float(stop, line) if stop is not None else None,
    )


_SCALAR_KEYS = {
    "topology": {
        "preset": ("preset", "str"),
        "area": ("area", "pair"),
        "tx_range": ("tx_range", "float"),
        "interference_multiplier": ("interference_multiplier", "float"),
    },
    "mac": {
        "t_rts": ("t_rts", "int"),
        "t_cts": ("t_cts", "int"),
        "t_ack": ("t_ack", "int"),
        "t_sifs": ("t_sifs", "int"),
        "t_difs": ("t_difs", "int"),
        "p_fail": ("p_fail", "float"),
        "retry_limit": ("retry_limit", "int"),
        "buffer_packets": ("buffer_packets", "int"),
        "use_rts_cts_overhead": ("use_rts_cts_overhead", "bool"),
        "ttl": ("ttl", "int"),
        "bandwidth": ("bandwidth_bps", "int"),
        "data_bytes": ("data_bytes", "int"),
    },
    "routing": {
        "routing": ("routing", "str"),
        "p0": ("p0", "float"),
        "ant_rate": ("ant_rate", "float"),
        "hello_interval": ("hello_interval_s", "float"),
        "window_w": ("window_w", "int"),
        "delta_p_cap": ("delta_p_cap", "float"),
    },
    "mobility": {
        "enabled": ("enabled", "bool"),
        "speed": ("speed_mps", "float"),
        "mobile_fraction": ("mobile_fraction", "float"),
        "pause": ("pause_s", "float"),
        "tick_ms": ("tick_ms", "float"),
    },
    "run": {
        "horizon": ("horizon_s", "float"),
        "warmup": ("warmup_s", "float"),
        "seeds": ("seeds", "seeds"),
        "table_dump_at": ("table_dump_at", "floats"),
    },
}

_SECTION_TARGETS = {
    "topology": lambda s: s.topology,
    "mac": lambda s: s.mac,
    "routing": lambda s: s.routing,
    "mobility": lambda s: s.mobility,
    "run": lambda s: s.run,
}


def parse_scenario(text, label="scenario"):
    scenario = Scenario(label=label)
    section = None
    preset_set_explicitly = False
    saw_nodes = False

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SCALAR_KEYS and name != "traffic":
                raise ConfigError(f"unknown section [{name}]", line_no)
            section = name
            continue
        if section is None:
            raise ConfigError("key outside of any [section]", line_no)
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", line_no)
        key, _, value = (part.strip() for part in line.partition("="))

        if section == "traffic":
            if key == "flow":
                scenario.flows.append(_parse_flow(value, line_no))
                continue
            raise ConfigError(f"unknown key {key!r} in [traffic]", line_no)
        if section == "topology" and key == "node":
            scenario.topology.nodes.append(_parse_node(value, line_no))
            saw_nodes = True
            continue

        spec = _SCALAR_KEYS[section].get(key)
        if spec is None:
            raise ConfigError(f"unknown key {key!r} in [{section}]", line_no)
        attr, kind = spec
        target = _SECTION_TARGETS[section](scenario)
        if kind == "str":
            parsed = value
        elif kind == "int":
            parsed = _parse_int(value, line_no)
        elif kind == "float":
            parsed = _parse_float(value, line_no)
        elif kind == "bool":
            parsed = _parse_bool(value, line_no)
        elif kind == "seeds":
            parsed = _parse_seeds(value, line_no)
        elif kind == "floats":
            parsed = [_parse_float(v, line_no) for v in value.split()]
        elif kind == "pair":
            parts = value.split()
            if len(parts) != 2:
                raise ConfigError("area needs two numbers: width height", line_no)
            scenario.topology.area_w = _parse_float(parts[0], line_no)
            scenario.topology.area_h = _parse_float(parts[1], line_no)
            continue
        else:  # pragma: no cover
            raise ConfigError(f"bad key spec for {key}", line_no)

        if section == "topology" and key == "preset":
            preset_set_explicitly = True
            scenario.topology.preset = None if parsed == "none" else parsed
            continue
        setattr(target, attr, parsed)

    if saw_nodes:
        if preset_set_explicitly and scenario.topology.preset is not None:
            raise ConfigError(
                "explicit node lines and a topology preset are mutually exclusive")
        scenario.topology.preset = None
    return scenario


# -- validation ----------------------------------------------------------------


def validate_scenario(scenario):
    """Semantic checks; returns a list of diagnostics (empty when valid)."""
    problems = []
    topo = scenario.topology
    if topo.preset is not None and topo.preset not in GEOMETRY_PRESETS:
        problems.append(f"unknown topology preset {topo.preset!r}")
        return problems
    nodes = resolve_nodes(scenario)
    ids = [n.node_id for n in nodes]
    if sorted(ids) != list(range(len(ids))):
        problems.append("node ids must cover 0..N-1 exactly once")
    if not nodes:
        problems.append("topology has no nodes")
    if scenario.routing.routing not in ROUTING_ALGORITHMS:
        problems.append(
            f"routing must be one of {ROUTING_ALGORITHMS}, got "
            f"{scenario.routing.routing!r}")
    if not 0.0 <= scenario.routing.p0 <= 1.0:
        problems.append(f"p0 must lie in [0, 1], got {scenario.routing.p0:g}")
    if scenario.routing.ant_rate <= 0:
        problems.append("ant_rate must be positive")
    if scenario.routing.hello_interval_s <= 0:
        problems.append("hello_interval must be positive")
    if scenario.routing.window_w < 1:
        problems.append("window_w must be at least 1")
    if scenario.routing.delta_p_cap <= 0:
        problems.append("delta_p_cap must be positive")
    if not 0.0 <= scenario.mac.p_fail <= 1.0:
        problems.append("p_fail must lie in [0, 1]")
    if scenario.mac.retry_limit < 1:
        problems.append("retry_limit must be at least 1")
    if scenario.mac.buffer_packets < 1:
        problems.append("buffer_packets must be at least 1")
    if scenario.mac.ttl < 1:
        problems.append("ttl must be at least 1")
    gateways = any(n.gateway for n in nodes)
    id_set = set(ids)
    for i, f in enumerate(scenario.flows):
        tag = f"flow {i} ({f.src}->{f.dst})"
        if f.src not in id_set:
            problems.append(f"{tag}: unknown source node")
        if f.dst == -1:
            if not gateways:
                problems.append(f"{tag}: random_gateway needs gateway nodes")
        elif f.dst not in id_set:
            problems.append(f"{tag}: unknown destination node")
        elif f.dst == f.src:
            problems.append(f"{tag}: source equals destination")
        if f.rate_pps <= 0:
            problems.append(f"{tag}: rate must be positive")
        if f.stop_s is not None and f.stop_s <= f.start_s:
            problems.append(f"{tag}: stop must come after start")
    if not 0.0 <= scenario.mobility.mobile_fraction <= 1.0:
        problems.append("mobile_fraction must lie in [0, 1]")
    if scenario.mobility.speed_mps < 0:
        problems.append("speed must be nonnegative")
    if scenario.mobility.tick_ms <= 0:
        problems.append("tick_ms must be positive")
    if scenario.run.horizon_s <= 0:
        problems.append("horizon must be positive")
    if scenario.run.warmup_s < 0 or scenario.run.warmup_s >= scenario.run.horizon_s:
        problems.append("warmup must lie inside [0, horizon)")
    if not scenario.run.seeds:
        problems.append("at least one seed is required")
    return problems


# -- serialization ---------------------------------------------------------------


def serialize_scenario(scenario):
    out = ["[topology]"]
    topo = scenario.topology
    if topo.preset is not None:
        out.append(f"preset = {topo.preset}")
    out.append(f"area = {topo.area_w:g} {topo.area_h:g}")
    out.append(f"tx_range = {topo.tx_range:g}")
    out.append(f"interference_multiplier = {topo.interference_multiplier:g}")
    for n in topo.nodes:
        channels = ",".join(str(c) for c in n.channels)
        line = f"node = id={n.node_id} x={n.x:g} y={n.y:g} channels={channels}"
        if n.gateway:
            line += " gateway=true"
        out.append(line)
    out.append("")
    out.append("[mac]")
    m = scenario.mac
    out.append(f"t_rts = {m.t_rts}")
    out.append(f"t_cts = {m.t_cts}")
    out.append(f"t_ack = {m.t_ack}")
    out.append(f"t_sifs = {m.t_sifs}")
    out.append(f"t_difs = {m.t_difs}")
    out.append(f"p_fail = {m.p_fail:g}")
    out.append(f"retry_limit = {m.retry_limit}")
    out.append(f"buffer_packets = {m.buffer_packets}")
    out.append(f"use_rts_cts_overhead = {'true' if m.use_rts_cts_overhead else 'false'}")
    out.append(f"ttl = {m.ttl}")
    out.append(f"bandwidth = {m.bandwidth_bps}")
    out.append(f"data_bytes = {m.data_bytes}")
    out.append("")
    out.append("[routing]")
    r = scenario.routing
    out.append(f"routing = {r.routing}")
    out.append(f"p0 = {r.p0:g}")
    out.append(f"ant_rate = {r.ant_rate:g}")
    out.append(f"hello_interval = {r.hello_interval_s:g}")
    out.append(f"window_w = {r.window_w}")
    out.append(f"delta_p_cap = {r.delta_p_cap:g}")
    out.append("")
    out.append("[traffic]")
    for f in scenario.flows:
        dst = "random_gateway" if f.dst == -1 else str(f.dst)
        line = f"flow = src={f.src} dst={dst} rate={f.rate_pps:g} start={f.start_s:g}"
        if f.stop_s is not None:
            line += f" stop={f.stop_s:g}"
        out.append(line)
    out.append("")
    out.append("[mobility]")
    mob = scenario.mobility
    out.append(f"enabled = {'true' if mob.enabled else 'false'}")
    out.append(f"speed = {mob.speed_mps:g}")
    out.append(f"mobile_fraction = {mob.mobile_fraction:g}")
    out.append(f"pause = {mob.pause_s:g}")
    out.append(f"tick_ms = {mob.tick_ms:g}")
    out.append("")
    out.append("[run]")
    run = scenario.run
    out.append(f"horizon = {run.horizon_s:g}")
    out.append(f"warmup = {run.warmup_s:g}")
    seeds = run.seeds
    if seeds == list(range(seeds[0], seeds[-1] + 1)) and len(seeds) > 1:
        out.append(f"seeds = {seeds[0]}..{seeds[-1]}")
    else:
        out.append("seeds = " + ",".join(str(s) for s in seeds))
    if run.table_dump_at:
        out.append("table_dump_at = " + " ".join(f"{t:g}" for t in run.table_dump_at))
    out.append("")
    return "\n".join(out)


# -- geometry presets -------------------------------------------------------------


def _preset_stream(tag):
    digest = hashlib.sha256(f"antmesh-preset:{tag}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# Radios per grid node: three, the maximum a node may carry. Three shared
# channels keep the full lattice connected on every radio while leaving the
# collision domains tight enough that detour traffic costs real airtime.
GRID15_CHANNELS = (1, 2, 3)


def _grid15_nodes(gateway=True):
    coords = grid_positions(3, 5, 200.0, 100.0, 300.0)
    nodes = []
    for i, (x, y) in enumerate(coords):
        nodes.append(
            NodeLine(i, x, y, GRID15_CHANNELS, gateway=(gateway and i == 14)))
    return nodes


def _semirandom20_nodes(gateway=True):
    # Positions are uniform draws, but any draw out of radio reach of the
    # mesh placed so far is redrawn: a mesh node nobody can hear is not a
    # mesh node. Any two channel pairs drawn from three channels overlap,
    # so reachability reduces to plain distance.
    nodes = _grid15_nodes(gateway=False)
    stream = _preset_stream("semirandom20")
    for i in range(20):
        nid = 15 + i
        while True:
            x = round(stream.uniform(0.0, 1000.0), 1)
            y = round(stream.uniform(0.0, 1000.0), 1)
            if any(math.hypot(n.x - x, n.y - y) <= DEFAULT_TX_RANGE_M
                   for n in nodes):
                break
        channels = (1 + i % 3, 1 + (i + 1) % 3)
        nodes.append(NodeLine(nid, x, y, tuple(sorted(channels))))
    if gateway:
        for nid in _corner_most(nodes, 1000.0, 1000.0):
            nodes[nid].gateway = True
    return nodes


def _corner_most(nodes, w, h):
    """The node nearest each area corner; duplicates resolved by moving to
    the next-nearest. Deterministic given the node list."""
    corners = [(0.0, 0.0), (w, 0.0), (0.0, h), (w, h)]
    chosen = []
    for cx, cy in corners:
        order = sorted(
            nodes, key=lambda n: ((n.x - cx) ** 2 + (n.y - cy) ** 2, n.node_id))
        for n in order:
            if n.node_id not in chosen:
                chosen.append(n.node_id)
                break
    return chosen


def _random100_nodes():
    stream = _preset_stream("random100")
    nodes = []
    for i in range(100):
        x = round(stream.uniform(0.0, 500.0), 1)
        y = round(stream.uniform(0.0, 500.0), 1)
        channels = (1 + i % 3, 1 + (i + 1) % 3)
        nodes.append(NodeLine(i, x, y, tuple(sorted(channels))))
    return nodes


def _random100_flows(n_flows=6, rate=30.0):
    stream = _preset_stream("random100-flows")
    flows = []
    used = set()
    while len(flows) < n_flows:
        src = stream.randrange(100)
        dst = stream.randrange(100)
        if src == dst or (src, dst) in used:
            continue
        used.add((src, dst))
        flows.append(FlowLine(src=src, dst=dst, rate_pps=rate))
    return flows


GEOMETRY_PRESETS = {
    "grid15": lambda: (_grid15_nodes(True), (1000.0, 1000.0)),
    "grid15-open": lambda: (_grid15_nodes(False), (1000.0, 1000.0)),
    "semirandom20": lambda: (_semirandom20_nodes(True), (1000.0, 1000.0)),
    "semirandom20-open": lambda: (_semirandom20_nodes(False), (1000.0, 1000.0)),
    "random100": lambda: (_random100_nodes(), (500.0, 500.0)),
}


def resolve_nodes(scenario):
    """NodeLine list for a scenario, expanding the geometry preset if set."""
    topo = scenario.topology
    if topo.preset is None:
        return list(topo.nodes)
    nodes, _area = GEOMETRY_PRESETS[topo.preset]()
    return nodes


def preset_area(name):
    _nodes, area = GEOMETRY_PRESETS[name]()
    return area


# -- full presets ------------------------------------------------------------------


def _base_scenario(label, geometry):
    s = Scenario(label=label)
    s.topology.preset = geometry
    s.topology.area_w, s.topology.area_h = preset_area(geometry)
    return s


def _preset_grid15():
    return _base_scenario("grid15", "grid15")


def _preset_semirandom20():
    return _base_scenario("semirandom20", "semirandom20")


def _preset_fig4_learning():
    # One resident flow along the top row, three more in [10 s, 20 s] whose
    # sources and sinks all sit on that same row. Cold pheromone tables
    # break ties toward low node ids, so at the change point every new flow
    # crams into the row-0 corridor and the pooled delay spikes; the spike
    # drains only once backward ants have re-shaped the tables enough to
    # push traffic onto parallel rows. The small reinforcement cap spreads
    # that re-shaping over many ants, which is what makes the settle time
    # scale with ant generation rate.
    s = _base_scenario("fig4-learning", "grid15-open")
    s.flows = [
        FlowLine(src=0, dst=4, rate_pps=20.0, start_s=0.0),
        FlowLine(src=1, dst=3, rate_pps=30.0, start_s=10.0, stop_s=20.0),
        FlowLine(src=2, dst=4, rate_pps=30.0, start_s=10.0, stop_s=20.0),
        FlowLine(src=1, dst=4, rate_pps=30.0, start_s=10.0, stop_s=20.0),
    ]
    s.routing.delta_p_cap = 0.08
    s.run.horizon_s = 30.0
    return s


def _preset_fig4a():
    # Four flows converging on one sink, each at 12 pkt/s: queueing delay
    # sits well above the unloaded baseline while staying below the knee
    # where the sink's collision domain saturates. Past that knee the
    # serialized MAC punishes path concentration itself, which drowns the
    # transition-rule comparison this preset exists for.
    s = _base_scenario("fig4a-p0sweep", "grid15-open")
    s.flows = [
        FlowLine(src=0, dst=14, rate_pps=12.0),
        FlowLine(src=4, dst=14, rate_pps=12.0),
        FlowLine(src=10, dst=14, rate_pps=12.0),
        FlowLine(src=2, dst=14, rate_pps=12.0),
    ]
    s.run.horizon_s = 30.0
    return s


def _preset_fig5():
    # Two gateways, two flows each, crossing the lattice in an X. Each
    # source has several equal-hop routes to its gateway through the dense
    # center, so which corridor carries a flow is a routing decision, not
    # geometry; at the base rate the corridors saturate when flows pile
    # onto shared links.
    s = _base_scenario("fig5-saturation", "semirandom20-open")
    gateways = {17: (5, 0), 26: (14, 4)}  # high-degree hubs on opposite sides
    s.flows = [
        FlowLine(src=src, dst=gw, rate_pps=20.0)
        for gw, sources in gateways.items()
        for src in sources
    ]
    s.run.horizon_s = 30.0
    return s


def _preset_random100(label="random100-mobile", speed=10.0, fraction=1.0):
    # Dense field, short radios: at 100 m range the area is ~5 hops across
    # and the interference disc covers a quarter of it, so each channel
    # supports several concurrent transmissions. At the default 250 m the
    # whole area is a single collision domain per channel and the network
    # degenerates to 3 serialized links.
    s = _base_scenario(label, "random100")
    s.topology.tx_range = 100.0
    # Ants cross ~5 hops each way here, so the grid-tuned generation rate
    # would spend most of the field's airtime on control frames. A tenth
    # of it keeps the swarm's share near 20% while still refreshing every
    # corridor a few times per second.
    s.routing.ant_rate = 10.0
    s.flows = _random100_flows(rate=15.0)
    s.mobility.enabled = True
    s.mobility.speed_mps = speed
    s.mobility.mobile_fraction = fraction
    s.run.horizon_s = 30.0
    return s


PRESETS = {
    "grid15": (_preset_grid15,
               "3x5 lattice, 200 m spacing, 3 radios/node, gateway at node 14"),
    "semirandom20": (_preset_semirandom20,
                     "grid15 plus 20 fixed random nodes, corner gateways"),
    "random100-mobile": (lambda: _preset_random100(),
                         "100 nodes in 500x500 m, 6 CBR flows, waypoint motion"),
    "fig4-learning": (_preset_fig4_learning,
                      "grid15 load script: 1 flow, +3 at t=10 s, -3 at t=20 s"),
    "fig4a-p0sweep": (_preset_fig4a,
                      "grid15 under steady 4-flow load; sweep p0"),
    "fig5-saturation": (_preset_fig5,
                        "semirandom20 with 4 corner-bound flows; sweep flow_rate"),
    "fig6-speed-sweep": (lambda: _preset_random100("fig6-speed-sweep"),
                         "random100-mobile; sweep node_speed"),
    "fig6-mobile-fraction": (
        lambda: _preset_random100("fig6-mobile-fraction", fraction=0.6),
        "random100-mobile at 10 m/s; sweep mobile_fraction"),
}


def expand_preset(name):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    return PRESETS[name][0]()


# -- sweeps ------------------------------------------------------------------------


def _sweep_routing(s, v):
    if v not in ROUTING_ALGORITHMS:
        raise ConfigError(f"unknown routing algorithm {v!r}")
    s.routing.routing = v


def _sweep_flow_rate(s, v):
    rate = float(v)
    for f in s.flows:
        f.rate_pps = rate


SWEEP_KEYS = {
    "p0": lambda s, v: setattr(s.routing, "p0", float(v)),
    "ant_rate": lambda s, v: setattr(s.routing, "ant_rate", float(v)),
    "routing": _sweep_routing,
    "flow_rate": _sweep_flow_rate,
    "node_speed": lambda s, v: setattr(s.mobility, "speed_mps", float(v)),
    "mobile_fraction": lambda s, v: setattr(s.mobility, "mobile_fraction", float(v)),
}


def apply_sweep_point(scenario, assignments):
    """Returns a fresh Scenario with the sweep assignments applied and the
    label tagged `name@k=v` in sorted key order."""
    import copy

    out = copy.deepcopy(scenario)
    for key in sorted(assignments):
        if key not in SWEEP_KEYS:
            raise ConfigError(f"unknown sweep key {key!r}")
        SWEEP_KEYS[key](out, assignments[key])
    tags = "".join(
        f"@{k}={_format_sweep_value(assignments[k])}" for k in sorted(assignments))
    out.label = scenario.label + tags
    return out


def _format_sweep_value(v):
    try:
        return f"{float(v):g}"
    except (TypeError, ValueError):
        return str(v)
