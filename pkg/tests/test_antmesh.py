"""Estimation primitives and router behavior driven through the zero-latency
test harness."""

import pytest

from antmesh_sim import mac as mac_mod
from antmesh_sim.antmesh import (
    AntMeshParams,
    AntMeshRouter,
    SmartAnt,
    inter_flow_delay,
    intra_flow_cost,
    link_quality,
    reinforcement,
)
from antmesh_sim.mac import LOSS_NOROUTE, LOSS_TTL, MacConstants, expected_tx_time
from antmesh_sim.topology import NodeSpec, RadioSpec, Topology, grid_positions

from conftest import FakeEnv, build_topology

E_TX = 3088.0  # 512-byte packet at 2 Mb/s incl. RTS/CTS overhead


# -- estimation primitives ----------------------------------------------------


def test_link_quality_values():
    assert link_quality(E_TX, 0) == pytest.approx(E_TX)
    assert link_quality(E_TX, 5) == pytest.approx(18528.0)
    assert link_quality(1000.0, 3) == pytest.approx(4000.0)


def test_inter_flow_delay_clamps_at_one():
    assert inter_flow_delay(E_TX, []) == pytest.approx(E_TX)
    assert inter_flow_delay(E_TX, [0, 0]) == pytest.approx(E_TX)
    assert inter_flow_delay(E_TX, [1]) == pytest.approx(E_TX)
    assert inter_flow_delay(E_TX, [2, 5, 3]) == pytest.approx(5 * E_TX)


def test_intra_flow_cost_values():
    assert intra_flow_cost(1, 2, 4, 4096, 2_000_000) == 0.0
    assert intra_flow_cost(1, 1, 0, 4096, 2_000_000) == 0.0
    assert intra_flow_cost(1, 1, 4, 4096, 2_000_000) == pytest.approx(16384.0)
    assert intra_flow_cost(3, 3, 1, 8192, 2_000_000) == pytest.approx(8192.0)


def test_reinforcement_values():
    assert reinforcement(1000.0, 1000.0, 1.0) == pytest.approx(0.5)
    assert reinforcement(1000.0, 2000.0, 1.0) == pytest.approx(0.25)
    assert reinforcement(10000.0, 1000.0, 1.0) == 1.0  # capped
    assert reinforcement(10000.0, 1000.0, 0.3) == 0.3
    assert reinforcement(0.0, 1000.0, 1.0) == 0.0


def test_params_defaults():
    p = AntMeshParams()
    assert (p.p0, p.ant_rate_hz, p.hello_interval_s) == (0.8, 40.0, 1.0)
    assert (p.window_w, p.delta_p_cap) == (10, 1.0)


# -- harness helpers ----------------------------------------------------------


def line_env(n, spacing=200.0, channels=(1,), **kw):
    topo = build_topology([(i * spacing, 0.0, channels) for i in range(n)], **kw)
    return FakeEnv(topo)


def hello_round(env, times=1):
    for _ in range(times):
        for r in env.routers.values():
            r.on_hello_timer()


# -- forward ants -------------------------------------------------------------


def test_ant_round_trip_on_a_line():
    env = line_env(3)
    env.flow_dsts = {0: [2]}
    routers = env.add_routers(AntMeshRouter, AntMeshParams())
    routers[0].on_ant_timer()
    assert env.completions == 1
    assert env.deaths == []
    ant = env.mac.log[0].ant
    assert [h[0] for h in ant.hops] == [0, 1]
    assert routers[0].table.probability(2, 1) == 1.0  # single neighbor
    assert routers[1].table.probability(2, 2) > 0.5


def test_ant_timer_without_targets_is_silent():
    env = line_env(2)
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.routers[0].on_ant_timer()
    assert env.mac.log == [] and env.completions == 0


def test_ant_timer_skips_self_destination():
    env = line_env(2)
    env.flow_dsts = {0: [0]}
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.routers[0].on_ant_timer()
    assert env.mac.log == []


def test_ants_fall_back_to_gateways():
    specs = [
        NodeSpec(0, 0, 0, radios=(RadioSpec(1),)),
        NodeSpec(1, 200, 0, radios=(RadioSpec(1),), gateway=True),
    ]
    env = FakeEnv(Topology(specs))
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.routers[0].on_ant_timer()
    assert env.completions == 1
    assert env.mac.log[0].dst == 1


def test_dead_end_kills_ant():
    # Node 1 has no unvisited neighbor to offer, and 2 is out of range.
    topo = build_topology([(0, 0, (1,)), (200, 0, (1,)), (5000, 0, (1,))])
    env = FakeEnv(topo)
    env.flow_dsts = {0: [2]}
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.routers[0].on_ant_timer()
    assert env.deaths == ["dead-end"]
    assert env.completions == 0


def test_ttl_kills_long_walk():
    env = line_env(6)
    env.ttl = 2
    env.flow_dsts = {0: [5]}
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.routers[0].on_ant_timer()
    assert env.deaths == ["ttl"]


def test_cold_grid_walk_is_loop_free_serpentine():
    # p0 = 1 on cold uniform tables: argmax ties break to the lowest id, and
    # the visited set forbids revisits, so the walk snakes instead of looping.
    pos = grid_positions(3, 5, 200.0)
    env = FakeEnv(build_topology([(x, y, (1,)) for x, y in pos]))
    env.flow_dsts = {0: [14]}
    env.add_routers(AntMeshRouter, AntMeshParams(p0=1.0))
    env.routers[0].on_ant_timer()
    assert env.completions == 1
    ant = env.mac.log[0].ant
    walk = [h[0] for h in ant.hops]
    assert walk == [0, 1, 2, 3, 4, 9, 8, 7, 6, 5, 10, 11, 12, 13]
    assert len(walk) == len(set(walk))  # loop-free
    assert len(walk) >= 6  # at least the Manhattan distance


def test_fsa_grows_with_hop_count():
    env = line_env(4)
    env.flow_dsts = {0: [3]}
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.routers[0].on_ant_timer()
    fsa_sizes = [
        s for p, s in zip(env.mac.log, env.mac.sizes) if p.kind == mac_mod.FSA
    ]
    assert fsa_sizes == [(64 + 8 * k) * 8 for k in (1, 2, 3)]


def test_channel_pick_prefers_least_backlog():
    env = line_env(2, channels=(1, 2, 3))
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.mac.queues = {(0, 1): 5, (0, 2): 2, (0, 3): 2}
    assert env.routers[0]._pick_channel(1) == 2  # least loaded, tie breaks low
    env.mac.queues = {}
    assert env.routers[0]._pick_channel(1) == 1


# -- hello ants ---------------------------------------------------------------


def test_hello_reports_own_queues():
    env = line_env(2)
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.mac.queues = {(1, 1): 7}
    env.routers[1].on_hello_timer()
    est = env.routers[0].links.get(1, env.sim.now)
    assert est.own_queues == {1: 7}
    assert env.routers[0].links.known_queue(1, 1, env.sim.now) == 7
    assert env.mac.log[0].size_bits == 32 * 8  # no two-hop entries yet


def test_second_hello_round_propagates_two_hop_state():
    env = line_env(3)
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.mac.queues = {(2, 1): 9}
    hello_round(env, times=2)
    # Node 0 cannot hear node 2, but node 1's second hello carried it.
    assert env.routers[0].links.known_queue(2, 1, env.sim.now) == 9
    assert env.routers[0].links.get(2, env.sim.now) is None  # not a neighbor


def test_hello_size_grows_with_two_hop_entries():
    env = line_env(3)
    env.add_routers(AntMeshRouter, AntMeshParams())
    hello_round(env)
    env.mac.log.clear()
    env.routers[1].on_hello_timer()
    # Node 1 already heard 0 and 2, so its hello carries two entries.
    assert env.mac.log[0].size_bits == (32 + 12 * 2) * 8


# -- backward-ant accumulation --------------------------------------------------


def test_trip_accumulates_queueing_and_interference():
    env = line_env(3)
    env.flow_dsts = {0: [2]}
    routers = env.add_routers(AntMeshRouter, AntMeshParams())
    env.mac.queues = {(0, 1): 0, (1, 1): 4}
    hello_round(env)
    env.mac.log.clear()
    routers[0].on_ant_timer()
    assert env.completions == 1
    trip = env.mac.log[-1].ant.trip_us
    # Hop 1->2: LQ = 3088 * 4 + 3088 = 15440; no known interferer load
    # (clamp 1) and it is the last hop, so no same-channel surcharge.
    # Hop 0->1: LQ = 3088; node 1's advertised queue (4) is the worst
    # interferer -> 12352; consecutive hops share channel 1 and node 1
    # reported q = 4 -> alpha = 2 * 4 * 4096 / 2 Mb/s = 16384 us.
    assert trip == pytest.approx(15440.0 + 12352.0 + 16384.0)
    assert routers[1].delay.mean(2) == pytest.approx(15440.0)
    assert routers[0].delay.mean(2) == pytest.approx(44176.0)
    # First trip seeds its own mean: dp = 0.5 at both hops.
    assert routers[1].table.probability(2, 2) == pytest.approx(2 / 3)
    assert env.stale == 0


def test_unknown_next_hop_queue_is_stale_estimate():
    env = line_env(3)
    env.flow_dsts = {0: [2]}
    routers = env.add_routers(AntMeshRouter, AntMeshParams())
    routers[0].on_ant_timer()  # no hellos ever exchanged
    assert env.completions == 1
    assert env.stale == 1  # node 0 priced the 1->2 handoff blind
    trip = env.mac.log[-1].ant.trip_us
    assert trip == pytest.approx(2 * E_TX)  # bare link quality both hops


def test_bsa_ttl_exhaustion_dies():
    # A backward ant whose budget runs out mid-retrace dies in place.
    env = line_env(4)
    env.add_routers(AntMeshRouter, AntMeshParams())
    ant = SmartAnt(mac_mod.BSA, 0, 3)
    ant.hops = [(0, 1), (1, 1), (2, 1)]
    ant.cursor = 2
    pkt = env.make_packet(mac_mod.BSA, 3, 0)
    pkt.ant = ant
    pkt.ttl = 1
    pkt.next_hop = 2
    env.dispatch(2, pkt)
    assert env.completions == 0
    assert env.deaths == ["ttl"]


# -- data forwarding ------------------------------------------------------------


def test_data_follows_trained_route_to_delivery():
    env = line_env(3)
    env.flow_dsts = {0: [2]}
    env.add_routers(AntMeshRouter, AntMeshParams())
    env.routers[0].on_ant_timer()
    pkt = env.make_packet(mac_mod.DATA, 0, 2)
    env.dispatch(0, pkt)
    assert [p.pkt_id for p in env.delivered] == [pkt.pkt_id]
    assert pkt.arrived_from == 1


def test_data_without_route_drops():
    topo = build_topology([(0, 0, (1,)), (200, 0, (1,)), (5000, 0, (1,))])
    env = FakeEnv(topo)
    env.add_routers(AntMeshRouter, AntMeshParams())
    pkt = env.make_packet(mac_mod.DATA, 0, 2)
    pkt.arrived_from = 1  # pretend it came from the only neighbor
    env.dispatch(0, pkt)
    assert [(p.pkt_id, c) for p, c in env.drops] == [(pkt.pkt_id, LOSS_NOROUTE)]


def test_data_ttl_expiry_drops():
    env = line_env(3)
    env.add_routers(AntMeshRouter, AntMeshParams())
    pkt = env.make_packet(mac_mod.DATA, 0, 2)
    pkt.ttl = 0
    env.dispatch(1, pkt)
    assert [(p.pkt_id, c) for p, c in env.drops] == [(pkt.pkt_id, LOSS_TTL)]


def test_data_never_returns_to_sender():
    env = line_env(3)
    env.add_routers(AntMeshRouter, AntMeshParams())
    r1 = env.routers[1]
    # Bias node 1 heavily toward node 0, then hand it a packet from node 0.
    r1.table.reinforce(2, 0, 50.0)
    pkt = env.make_packet(mac_mod.DATA, 0, 2)
    pkt.arrived_from = 0
    pkt.next_hop = 1
    env.dispatch(1, pkt)
    assert env.delivered and env.delivered[0].arrived_from == 1


# -- neighbor churn -------------------------------------------------------------


def test_neighbor_loss_clears_links_and_rows():
    env = line_env(3)
    env.add_routers(AntMeshRouter, AntMeshParams())
    hello_round(env)
    r1 = env.routers[1]
    assert r1.links.get(0, env.sim.now) is not None
    r1.on_neighbors_changed(gained=[], lost=[0])
    assert r1.table.nbrs == [2]
    assert r1.links.get(0, env.sim.now) is None
    r1.on_neighbors_changed(gained=[0], lost=[])
    assert r1.table.nbrs == [0, 2]
