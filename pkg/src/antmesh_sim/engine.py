"""Deterministic discrete-event core: integer-microsecond clock, FIFO tie-break
by schedule order, and named independent RNG streams."""

import hashlib
import heapq
import random

US_PER_SEC = 1_000_000

# Event kinds.
PACKET_ARRIVAL = "packet-arrival"
TX_COMPLETE = "tx-complete"
ANT_TIMER = "ant-timer"
HELLO_TIMER = "hello-timer"
MOBILITY_TICK = "mobility-tick"
FLOW_START = "flow-start"
FLOW_STOP = "flow-stop"
METRICS_SAMPLE = "metrics-sample"


def seconds_to_us(seconds):
    return int(round(seconds * US_PER_SEC))


class SchedulingError(RuntimeError):
    """Raised when an event is scheduled before the current simulation time."""


class Event:
    __slots__ = ("fire_at", "seq", "kind", "payload")

    def __init__(self, fire_at, seq, kind, payload):
        self.fire_at = fire_at
        self.seq = seq
        self.kind = kind
        self.payload = payload


class RngRegistry:
    """One independent random.Random per named consumer stream.

    Stream seeds are derived from (run seed, stream id) via sha256 so adding
    a consumer never perturbs the draw sequence of another.
    """

    def __init__(self, seed):
        self.seed = seed
        self._streams = {}

    def stream(self, stream_id):
        rng = self._streams.get(stream_id)
        if rng is None:
            digest = hashlib.sha256(f"{self.seed}:{stream_id}".encode()).digest()
            rng = random.Random(int.from_bytes(digest[:8], "big"))
            self._streams[stream_id] = rng
        return rng

    def uniform(self, stream_id):
        return self.stream(stream_id).random()


class Simulator:
    """Minimal event loop. Events fire in (fire_at, seq) order; seq is the
    schedule counter, so same-time events dispatch in scheduling order."""

    def __init__(self, seed, trace=None, summarize=None):
        self.now = 0
        self.rng = RngRegistry(seed)
        self.dispatched = 0
        self._heap = []
        self._seq = 0
        self._handlers = {}
        self._trace = trace  # file-like, gets one line per dispatched event
        self._summarize = summarize or (lambda event: "")

    def register(self, kind, handler):
        self._handlers[kind] = handler

    def schedule(self, fire_at, kind, payload=None):
        if fire_at < self.now:
            raise SchedulingError(
                f"cannot schedule {kind} at {fire_at} us; clock is at {self.now} us"
            )
        event = Event(fire_at, self._seq, kind, payload)
        self._seq += 1
        heapq.heappush(self._heap, (fire_at, event.seq, event))
        return event

    def schedule_in(self, delay_us, kind, payload=None):
        return self.schedule(self.now + delay_us, kind, payload)

    def uniform(self, stream_id):
        return self.rng.uniform(stream_id)

    def run_until(self, end_us):
        """Dispatch every event with fire_at <= end_us, then set now = end_us.
        Returns the number of events dispatched by this call."""
        count = 0
        heap = self._heap
        handlers = self._handlers
        trace = self._trace
        while heap and heap[0][0] <= end_us:
            _, _, event = heapq.heappop(heap)
            self.now = event.fire_at
            if trace is not None:
                trace.write(
                    f"{event.fire_at}\t{event.seq}\t{event.kind}\t"
                    f"{self._summarize(event)}\n"
                )
            handlers[event.kind](event)
            count += 1
        self.now = end_us
        self.dispatched += count
        return count
