"""Ledger counting rules and the derived-statistic functions."""

import pytest

from antmesh_sim import mac as mac_mod
from antmesh_sim import metrics
from antmesh_sim.mac import Packet
from antmesh_sim.metrics import LearningTimeProbe, MetricsLedger


def data(born_at, size_bits=4096, pid=0):
    return Packet(pid, mac_mod.DATA, 0, 1, size_bits, born_at, 32)


def fresh(warmup_s=5.0, horizon_s=10.0):
    return MetricsLedger(int(warmup_s * 1e6), int(horizon_s * 1e6))


# -- counting rules -----------------------------------------------------------


def test_warmup_packets_are_invisible():
    led = fresh()
    led.on_inject(data(4_999_999))
    led.on_deliver(data(4_999_999), 5_100_000)
    led.on_drop(data(0), mac_mod.LOSS_MAC)
    led.on_control_tx(4_000_000)
    assert led.data_sent == 0
    assert led.data_delivered == 0
    assert led.losses[mac_mod.LOSS_MAC] == 0
    assert led.control_tx_hops == 0


def test_counted_packets_land_in_exactly_one_bucket():
    led = fresh()
    for i in range(10):
        led.on_inject(data(6_000_000, pid=i))
    for i in range(6):
        led.on_deliver(data(6_000_000, pid=i), 6_200_000)
    led.on_drop(data(6_000_000, pid=6), mac_mod.LOSS_QUEUE)
    led.on_drop(data(6_000_000, pid=7), mac_mod.LOSS_TTL)
    led.finalize()
    assert led.losses[mac_mod.LOSS_HORIZON] == 2  # still in flight at the cut
    total = led.data_delivered + sum(led.losses.values())
    assert total == led.data_sent == 10
    led.finalize()  # idempotent
    assert led.losses[mac_mod.LOSS_HORIZON] == 2


def test_ant_drops_count_as_deaths_not_losses():
    led = fresh()
    ant = Packet(0, mac_mod.FSA, 0, 1, 512, 6_000_000, 32)
    led.on_drop(ant, mac_mod.LOSS_MAC)
    assert led.ant_deaths == 1
    assert all(v == 0 for v in led.losses.values())


def test_control_tx_counts_after_warmup():
    led = fresh()
    led.on_control_tx(5_000_000)  # boundary: warm-up end is measured
    led.on_control_tx(9_000_000)
    assert led.control_tx_hops == 2


# -- derived metrics ----------------------------------------------------------


def test_throughput_over_measured_interval():
    led = fresh()  # 5 s measured
    assert metrics.throughput_bps(led) == 0.0
    for i in range(500):
        pkt = data(6_000_000, pid=i)
        led.on_inject(pkt)
        led.on_deliver(pkt, 6_500_000)
    # 500 * 4096 bits over 5 s.
    assert metrics.throughput_bps(led) == pytest.approx(409_600.0)


def test_mean_delay():
    led = fresh()
    assert metrics.mean_delay_us(led) == 0.0
    led.on_deliver(data(6_000_000), 6_010_000)
    led.on_deliver(data(6_000_000), 6_030_000)
    assert metrics.mean_delay_us(led) == pytest.approx(20_000.0)


def test_delivery_fraction_and_loss_ratio():
    led = fresh()
    assert metrics.delivery_fraction(led) == 1.0  # vacuous run
    assert metrics.loss_ratio(led) == 0.0
    for i in range(10):
        led.on_inject(data(6_000_000, pid=i))
    for i in range(9):
        led.on_deliver(data(6_000_000, pid=i), 6_100_000)
    assert metrics.delivery_fraction(led) == pytest.approx(0.9)
    assert metrics.loss_ratio(led) == pytest.approx(0.1)


def test_normalized_routing_load():
    led = fresh()
    assert metrics.normalized_routing_load(led) == 0.0
    led.on_control_tx(6_000_000)
    led.on_control_tx(6_000_001)
    assert metrics.normalized_routing_load(led) == 2.0  # clamped denominator
    pkt = data(6_000_000)
    led.on_inject(pkt)
    led.on_deliver(pkt, 6_100_000)
    assert metrics.normalized_routing_load(led) == 2.0
    led.on_deliver(data(6_000_000, pid=1), 6_200_000)
    assert metrics.normalized_routing_load(led) == 1.0


def test_windowed_delay_means():
    led = MetricsLedger(0, 2_000_000)
    led.on_deliver(data(0), 100_000)  # window 0, delay 100 ms
    led.on_deliver(data(200_000), 400_000)  # window 0, delay 200 ms
    led.on_deliver(data(500_000), 600_000)  # window 1
    led.on_deliver(data(1_900_000), 2_000_000)  # exactly at horizon: clamped
    means = metrics.windowed_delay_means(led, 500_000)
    assert len(means) == 4
    assert means[0] == pytest.approx(150_000.0)
    assert means[1] == pytest.approx(100_000.0)
    assert means[2] is None
    assert means[3] == pytest.approx(100_000.0)


# -- learning time --------------------------------------------------------------


def synthetic(series, window_us=500_000):
    """Ledger whose windowed means equal `series` (one delivery per window)."""
    led = MetricsLedger(0, window_us * len(series))
    for k, v in enumerate(series):
        if v is None:
            continue
        t = k * window_us + window_us // 2
        led.on_deliver(data(t - int(v)), t)
    return led


def test_learning_time_step_series():
    # Delay drops to the steady value from window 8 onward.
    series = [10_000.0] * 8 + [1_000.0] * 12
    led = synthetic(series)
    probe = LearningTimeProbe(change_point_us=0, epsilon=0.2, settle_windows=3)
    assert metrics.learning_time_us(led, probe) == 8 * 500_000


def test_learning_time_flat_series_settles_immediately():
    led = synthetic([1_000.0] * 10)
    probe = LearningTimeProbe(change_point_us=0, epsilon=0.2, settle_windows=3)
    assert metrics.learning_time_us(led, probe) == 0


def test_learning_time_never_settles():
    # Alternating far outside any 20 % band around the tail mean.
    series = [1_000.0, 100_000.0] * 10
    led = synthetic(series)
    probe = LearningTimeProbe(change_point_us=0, epsilon=0.2, settle_windows=3)
    assert metrics.learning_time_us(led, probe) is None


def test_learning_time_change_point_offsets_result():
    series = [None] * 4 + [10_000.0] * 4 + [1_000.0] * 12
    led = synthetic(series)
    probe = LearningTimeProbe(change_point_us=4 * 500_000, epsilon=0.2,
                              settle_windows=3)
    assert metrics.learning_time_us(led, probe) == (8 - 4) * 500_000


def test_learning_time_respects_interval_end():
    # After the next change point the series diverges again; the probe must
    # only look at [cp, interval_end].
    series = [10_000.0] * 4 + [1_000.0] * 8 + [50_000.0, 2_000.0] * 4
    led = synthetic(series)
    probe = LearningTimeProbe(change_point_us=0, epsilon=0.2, settle_windows=3)
    assert metrics.learning_time_us(led, probe, interval_end_us=12 * 500_000) \
        == 4 * 500_000
    assert metrics.learning_time_us(led, probe) is None


def test_learning_time_empty_interval():
    led = synthetic([1_000.0] * 4)
    probe = LearningTimeProbe(change_point_us=5_000_000)
    assert metrics.learning_time_us(led, probe) is None


def test_first_measured_change_point():
    led = fresh()
    led.change_points_us = [0, 2_000_000, 6_000_000, 8_000_000]
    assert metrics.first_measured_change_point(led) == 6_000_000
    led.change_points_us = [0]
    assert metrics.first_measured_change_point(led) is None


# -- persistence and CSV ---------------------------------------------------------


def test_json_round_trip():
    led = fresh()
    for i in range(5):
        pkt = data(6_000_000, pid=i)
        led.on_inject(pkt)
    led.on_deliver(data(6_000_000), 6_100_000)
    led.on_drop(data(6_000_000), mac_mod.LOSS_QUEUE)
    led.on_control_tx(7_000_000)
    led.on_sample(7_000_000)
    led.change_points_us = [6_000_000]
    led.finalize()
    clone = MetricsLedger.from_json(led.to_json())
    assert clone.to_json() == led.to_json()
    assert metrics.throughput_bps(clone) == metrics.throughput_bps(led)


def test_csv_row_formatting():
    led = fresh()
    pkt = data(6_000_000)
    led.on_inject(pkt)
    led.on_deliver(pkt, 6_004_096)
    row = metrics.csv_row("grid15@flow_rate=20", "antmesh", 3, 0.8, 40.0, 2,
                          0.0, 0.0, led)
    assert row == (
        "grid15@flow_rate=20,antmesh,3,0.8,40,2,0,0,"
        "819.200,4096.000,1.000000,0.000000,0,0,0,0,"
    )
    assert row.count(",") == len(metrics.CSV_COLUMNS) - 1
    assert metrics.CSV_HEADER.startswith("scenario,routing,seed,")


def test_csv_row_learning_fields():
    # No post-warmup change point -> empty; unsettled -> -1.
    led = MetricsLedger(0, 10_000_000)
    led.change_points_us = [0]
    for k in range(20):
        v = 1_000.0 if k % 2 else 100_000.0
        t = k * 500_000 + 250_000
        led.on_deliver(data(t - int(v)), t)
    row = metrics.csv_row("s", "antmesh", 1, 0.8, 40.0, 1, 0.0, 0.0, led)
    assert row.endswith(",-1")
    led2 = fresh()
    row2 = metrics.csv_row("s", "antmesh", 1, 0.8, 40.0, 1, 0.0, 0.0, led2)
    assert row2.endswith(",")


def test_samples_record_cumulative_counters():
    led = MetricsLedger(0, 1_000_000)
    led.on_inject(data(0))
    led.on_sample(500_000)
    led.on_inject(data(600_000, pid=1))
    led.on_deliver(data(0), 700_000)
    led.on_sample(1_000_000)
    assert led.samples == [(500_000, 1, 0), (1_000_000, 2, 1)]
