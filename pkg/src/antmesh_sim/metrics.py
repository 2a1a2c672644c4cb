"""Run ledger and derived statistics. Counting rules: only packets born after
the warm-up window enter the counters; every counted packet ends in exactly
one bucket (delivered, a loss cause, or cut off by the horizon)."""

import json
from dataclasses import dataclass

from . import mac as mac_mod

CSV_COLUMNS = [
    "scenario", "routing", "seed", "p0", "ant_rate", "flows",
    "node_speed", "mobile_fraction", "throughput_bps", "mean_delay_us",
    "pdf", "nrl", "loss_queue", "loss_mac", "loss_ttl", "loss_noroute",
    "learning_time_us",
]

CSV_HEADER = ",".join(CSV_COLUMNS)

DEFAULT_WARMUP_S = 5.0
SAMPLE_INTERVAL_US = 500_000

LOSS_CAUSES = (
    mac_mod.LOSS_QUEUE, mac_mod.LOSS_MAC, mac_mod.LOSS_TTL,
    mac_mod.LOSS_NOROUTE,
)


@dataclass
class LearningTimeProbe:
    change_point_us: int
    window_us: int = SAMPLE_INTERVAL_US
    epsilon: float = 0.10
    settle_windows: int = 3


class MetricsLedger:
    """Raw per-run counters; derived metrics are pure functions of this."""

    def __init__(self, warmup_us, horizon_us):
        self.warmup_us = warmup_us
        self.horizon_us = horizon_us
        self.data_sent = 0
        self.data_delivered = 0
        self.delivered_bits = 0
        self.delays = []  # (deliver_time_us, delay_us)
        self.losses = {cause: 0 for cause in LOSS_CAUSES}
        self.losses[mac_mod.LOSS_HORIZON] = 0
        self.control_tx_hops = 0
        self.ant_deaths = 0
        self.ants_completed = 0
        self.stale_fallbacks = 0
        self.change_points_us = []
        self.samples = []  # (time_us, data_sent, data_delivered)
        self.finalized = False

    def _counted(self, pkt):
        return pkt.born_at >= self.warmup_us

    def on_inject(self, pkt):
        if self._counted(pkt):
            self.data_sent += 1

    def on_deliver(self, pkt, now_us):
        if self._counted(pkt):
            self.data_delivered += 1
            self.delivered_bits += pkt.size_bits
            self.delays.append((now_us, now_us - pkt.born_at))

    def on_drop(self, pkt, cause):
        if pkt.kind == mac_mod.DATA:
            if self._counted(pkt):
                self.losses[cause] += 1
        else:
            self.ant_deaths += 1

    def on_control_tx(self, now_us):
        if now_us >= self.warmup_us:
            self.control_tx_hops += 1

    def on_sample(self, now_us):
        self.samples.append((now_us, self.data_sent, self.data_delivered))

    def finalize(self):
        """Attribute still-in-flight counted packets to the horizon cut."""
        if self.finalized:
            return
        terminal = self.data_delivered + sum(
            self.losses[c] for c in LOSS_CAUSES)
        self.losses[mac_mod.LOSS_HORIZON] = self.data_sent - terminal
        self.finalized = True

    # -- persistence ---------------------------------------------------------

    def to_json(self):
        return json.dumps({
            "warmup_us": self.warmup_us,
            "horizon_us": self.horizon_us,
            "data_sent": self.data_sent,
            "data_delivered": self.data_delivered,
            "delivered_bits": self.delivered_bits,
            "delays": self.delays,
            "losses": self.losses,
            "control_tx_hops": self.control_tx_hops,
            "ant_deaths": self.ant_deaths,
            "ants_completed": self.ants_completed,
            "stale_fallbacks": self.stale_fallbacks,
            "change_points_us": self.change_points_us,
            "samples": self.samples,
            "finalized": self.finalized,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        blob = json.loads(text)
        ledger = cls(blob["warmup_us"], blob["horizon_us"])
        ledger.data_sent = blob["data_sent"]
        ledger.data_delivered = blob["data_delivered"]
        ledger.delivered_bits = blob["delivered_bits"]
        ledger.delays = [tuple(d) for d in blob["delays"]]
        ledger.losses = dict(blob["losses"])
        ledger.control_tx_hops = blob["control_tx_hops"]
        ledger.ant_deaths = blob["ant_deaths"]
        ledger.ants_completed = blob["ants_completed"]
        ledger.stale_fallbacks = blob["stale_fallbacks"]
        ledger.change_points_us = blob["change_points_us"]
        ledger.samples = [tuple(s) for s in blob["samples"]]
        ledger.finalized = blob["finalized"]
        return ledger


# -- derived metrics ----------------------------------------------------------

def measurement_duration_s(ledger):
    return (ledger.horizon_us - ledger.warmup_us) / 1_000_000.0


def throughput_bps(ledger):
    """Delivered payload bits over the measured interval."""
    duration = measurement_duration_s(ledger)
    if duration <= 0:
        return 0.0
    return ledger.delivered_bits / duration


def mean_delay_us(ledger):
    if not ledger.delays:
        return 0.0
    return sum(d for _, d in ledger.delays) / len(ledger.delays)


def delivery_fraction(ledger):
    if ledger.data_sent == 0:
        return 1.0
    return ledger.data_delivered / ledger.data_sent


def loss_ratio(ledger):
    return 1.0 - delivery_fraction(ledger)


def normalized_routing_load(ledger):
    """Control transmissions per delivered data packet; the denominator is
    clamped at 1 so ant-only runs still report their overhead."""
    return ledger.control_tx_hops / max(1, ledger.data_delivered)


def windowed_delay_means(ledger, window_us):
    """Mean end-to-end delay per absolute window [k*w, (k+1)*w); None for
    windows that delivered nothing."""
    n_windows = ledger.horizon_us // window_us
    sums = [0.0] * n_windows
    counts = [0] * n_windows
    for t, d in ledger.delays:
        k = t // window_us
        if k >= n_windows:
            k = n_windows - 1
        sums[k] += d
        counts[k] += 1
    return [sums[k] / counts[k] if counts[k] else None
            for k in range(n_windows)]


def learning_time_us(ledger, probe, interval_end_us=None):
    """Time after a load change until the windowed delay series holds inside
    the epsilon band around the post-change steady state for settle_windows
    consecutive windows. Returns None when the series never settles.

    The steady state is the mean delay over the final quarter of the
    post-change interval (the next change point or the horizon).
    """
    cp = probe.change_point_us
    end = interval_end_us if interval_end_us is not None else ledger.horizon_us
    if end <= cp:
        return None
    ss_from = end - (end - cp) // 4
    tail = [d for t, d in ledger.delays if ss_from <= t <= end]
    if not tail:
        return None
    steady = sum(tail) / len(tail)
    if steady <= 0:
        return None

    w = probe.window_us
    means = windowed_delay_means(ledger, w)
    first_window = -(-cp // w)  # first window starting at or after cp
    last_window = end // w
    run = 0
    run_start = None
    for k in range(first_window, min(last_window, len(means))):
        m = means[k]
        inside = m is not None and abs(m - steady) <= probe.epsilon * steady
        if inside:
            if run == 0:
                run_start = k
            run += 1
            if run >= probe.settle_windows:
                return run_start * w - cp
        else:
            run = 0
            run_start = None
    return None


def first_measured_change_point(ledger):
    """The change point learning time is reported against: the first one
    after warm-up."""
    for cp in ledger.change_points_us:
        if cp >= ledger.warmup_us:
            return cp
    return None


def csv_row(scenario_label, routing, seed, p0, ant_rate, n_flows,
            node_speed, mobile_fraction, ledger):
    """One run, one row; column order and formatting are fixed so identical
    runs serialize byte-identically."""
    ledger.finalize()
    cp = first_measured_change_point(ledger)
    if cp is None:
        learning = ""
    else:
        later = [p for p in ledger.change_points_us if p > cp]
        interval_end = later[0] if later else ledger.horizon_us
        value = learning_time_us(
            ledger, LearningTimeProbe(change_point_us=cp), interval_end)
        learning = str(value) if value is not None else "-1"
    fields = [
        scenario_label,
        routing,
        str(seed),
        f"{p0:g}",
        f"{ant_rate:g}",
        str(n_flows),
        f"{node_speed:g}",
        f"{mobile_fraction:g}",
        f"{throughput_bps(ledger):.3f}",
        f"{mean_delay_us(ledger):.3f}",
        f"{delivery_fraction(ledger):.6f}",
        f"{normalized_routing_load(ledger):.6f}",
        str(ledger.losses[mac_mod.LOSS_QUEUE]),
        str(ledger.losses[mac_mod.LOSS_MAC]),
        str(ledger.losses[mac_mod.LOSS_TTL]),
        str(ledger.losses[mac_mod.LOSS_NOROUTE]),
        learning,
    ]
    return ",".join(fields)
