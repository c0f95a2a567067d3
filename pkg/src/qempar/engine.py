"""Deterministic discrete-event simulation of a full scenario.

A run places nodes, exchanges beacons, discovers paths, then drives packet
traffic through a light CSMA-style MAC: each hop attempt occupies the sender
for the serialization time plus access and contention delays, succeeds with a
distance-dependent probability, and is retried a bounded number of times.
Fragments queue FIFO at busy nodes. Events are ordered by (time, ordinal)
where ordinals count event creation, so ties resolve in creation order and
the whole run is reproducible bit for bit from (scenario, seed).
"""

from __future__ import annotations

import heapq
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .dispatch import DataPacket, ReassemblyBuffer, assign, classify_paths, fragment
from .errors import NoPathError
from .link_metrics import NetworkState
from .routing import beacon_exchange, discover_paths, minhop_paths
from .topology import distance, place_nodes
from .energy import rx_energy, tx_energy


@dataclass(frozen=True)
class MacModel:
    """Medium-access timing and reliability knobs."""

    bit_rate_bps: float = 1e6
    access_delay_s: float = 0.0005
    contention_delay_s: float = 0.0002
    hop_retry_limit: int = 2
    base_success: float = 0.98
    success_distance_slope: float = 0.03

    def __post_init__(self):
        if self.bit_rate_bps <= 0:
            raise ValueError("bit rate must be positive")
        if self.access_delay_s < 0 or self.contention_delay_s < 0:
            raise ValueError("delays must be non-negative")
        if self.hop_retry_limit < 0:
            raise ValueError("retry limit must be non-negative")
        if not 0.0 < self.base_success <= 1.0:
            raise ValueError("base_success must be in (0, 1]")
        if not 0.0 <= self.success_distance_slope <= 1.0:
            raise ValueError("success_distance_slope must be in [0, 1]")


def hop_delay(bits: int, mac: MacModel, active_neighbors: int = 0) -> float:
    """Time one hop attempt occupies the sender: serialization plus channel
    access plus a contention penalty per concurrently transmitting neighbor."""
    if bits <= 0:
        raise ValueError("bits must be positive")
    if active_neighbors < 0:
        raise ValueError("active_neighbors must be non-negative")
    return (bits / mac.bit_rate_bps + mac.access_delay_s
            + mac.contention_delay_s * active_neighbors)


def link_success_probability(mac: MacModel, distance_m: float, radio_range_m: float) -> float:
    """Per-attempt delivery probability, linearly degrading with distance and
    clamped to [0.01, 1.0] so even stretched links stay usable."""
    if distance_m < 0:
        raise ValueError("distance must be non-negative")
    if radio_range_m <= 0:
        raise ValueError("radio range must be positive")
    p = mac.base_success * (1.0 - mac.success_distance_slope * (distance_m / radio_range_m))
    return min(1.0, max(0.01, p))


@dataclass(order=True)
class Event:
    """One simulation event as it appears in the event log. Ordering is by
    (sim_time, ordinal) only; ordinals are unique, so ties between equal-time
    events resolve in creation order."""

    sim_time: float
    ordinal: int
    kind: str = field(compare=False, default="")
    node: int | None = field(compare=False, default=None)
    peer: int | None = field(compare=False, default=None)
    packet: int | None = field(compare=False, default=None)
    seq: int | None = field(compare=False, default=None)
    bits: int | None = field(compare=False, default=None)
    joules: float | None = field(compare=False, default=None)

    def to_json(self) -> str:
        return json.dumps(
            {"t": self.sim_time, "kind": self.kind, "node": self.node,
             "peer": self.peer, "packet": self.packet, "seq": self.seq,
             "bits": self.bits, "joules": self.joules},
            separators=(",", ":"))


@dataclass(frozen=True)
class RunMetrics:
    """Headline numbers of one finished run."""

    router: str
    rate_pkts_per_s: float
    seed: int
    n_paths: int
    path_hops: tuple[int, ...]
    generated: int
    delivered: int
    expired: int
    dropped: int
    delivery_ratio: float
    mean_delay_s: float | None
    mean_energy_j: float | None
    participant_energy_j: float
    setup_energy_j: float
    total_energy_j: float
    ledger_total_j: float
    residual_total_j: float
    out_of_order_ratio: float
    clamped_debits: int

    def to_dict(self) -> dict:
        d = self.__dict__.copy()
        d["path_hops"] = list(self.path_hops)
        return d


def arrival_times(config, seed: int) -> list[float]:
    """Packet creation times in [0, duration).

    Deterministic traffic needs no randomness: packet i is born at i/rate.
    Poisson traffic draws exponential gaps from a generator seeded by
    (seed, 1), independent of the placement stream seeded by (seed,).
    """
    rate = config.rate_pkts_per_s
    if config.traffic_model == "deterministic":
        n = int(rate * config.duration_s + 1e-9)
        return [i / rate for i in range(n)]
    rng = np.random.default_rng([seed, 1])
    times = []
    t = rng.exponential(1.0 / rate)
    while t < config.duration_s:
        times.append(float(t))
        t += rng.exponential(1.0 / rate)
    return times


# Heap event kinds (ints compare faster than strings).
_BORN, _HOP_END, _DEADLINE = 0, 1, 2
# Packet statuses.
_PENDING, _DELIVERED, _EXPIRED, _DROPPED = 0, 1, 2, 3


def _failed_metrics(config, seed: int, generated: int, state, setup_energy: float) -> RunMetrics:
    """Metrics for a run whose discovery found no route: every packet that
    would have been generated counts as dropped; beacon energy was still
    spent."""
    nodes = state.topology.nodes
    total = math.fsum(nodes[i].spent_energy for i in sorted(nodes))
    residual = math.fsum(nodes[i].residual_energy for i in sorted(nodes))
    return RunMetrics(
        router=config.router, rate_pkts_per_s=config.rate_pkts_per_s, seed=seed,
        n_paths=0, path_hops=(), generated=generated, delivered=0, expired=0,
        dropped=generated, delivery_ratio=0.0, mean_delay_s=None,
        mean_energy_j=None, participant_energy_j=0.0, setup_energy_j=setup_energy,
        total_energy_j=total, ledger_total_j=state.ledger.total(),
        residual_total_j=residual, out_of_order_ratio=0.0,
        clamped_debits=state.ledger.clamped_debits)


def run(config, seed: int | None = None, event_log=None) -> RunMetrics:
    """Simulate one scenario end to end and return its metrics.

    event_log, if given, is a path or writable file that receives one JSON
    line per event. Two runs of the same (config, seed) produce identical
    metrics and identical log bytes.
    """
    config.validate()
    if seed is None:
        seed = config.seed
    close_log = False
    if event_log is None:
        log = None
    elif hasattr(event_log, "write"):
        log = event_log
    else:
        log = open(event_log, "w", encoding="utf-8")
        close_log = True
    try:
        return _run(config, seed, log)
    finally:
        if close_log:
            log.close()


def _run(config, seed: int, log) -> RunMetrics:
    topo = place_nodes(config, seed)
    params = config.radio_params()
    state = NetworkState(topo, params, config)
    state.ledger.keep_entries = False  # totals suffice; entries don't scale
    beacon_exchange(state)
    setup_spent = {i: n.spent_energy for i, n in topo.nodes.items()}
    setup_energy = math.fsum(setup_spent[i] for i in sorted(setup_spent))

    times = arrival_times(config, seed)
    n_packets = len(times)

    source, sink = topo.source_id, topo.sink_id
    if config.router == "qempar":
        k_frag = config.fragment_count
        find = discover_paths
    else:
        k_frag = 1
        find = minhop_paths
    try:
        path_set = find(source, sink, k_frag, state)
    except NoPathError:
        return _failed_metrics(config, seed, n_packets, state, setup_energy)
    use_paths = classify_paths(path_set)

    mac = MacModel(
        bit_rate_bps=config.bit_rate_bps,
        access_delay_s=config.access_delay_s,
        contention_delay_s=config.contention_delay_s,
        hop_retry_limit=config.hop_retry_limit,
        base_success=config.base_success,
        success_distance_slope=config.success_distance_slope)

    # Static per-fragment hop plans: every packet splits the same way, so
    # wire bits, energies, success probabilities, and serialization times
    # are computed once per (seq, hop).
    packet_bits = config.packet_bits
    header_bits = config.fragment_header_bytes * 8
    template = fragment(DataPacket(0, packet_bits, 0.0), k_frag, header_bits)
    plan: dict[int, tuple[int, int, list[tuple]]] = {}
    for frag, route in assign(template, use_paths, config.wraparound_assignment):
        wire = frag.wire_bits
        t_tx = wire / mac.bit_rate_bps
        hops = []
        for u, v in zip(route.node_ids, route.node_ids[1:]):
            d = distance(topo.nodes[u].position, topo.nodes[v].position)
            hops.append((u, v,
                         tx_energy(wire, d, params),
                         rx_energy(wire, params),
                         link_success_probability(mac, d, topo.radio_range),
                         t_tx))
        plan[frag.seq] = (frag.bits, wire, hops)

    nodes = topo.nodes
    busy = state.busy_until
    queues: dict[int, deque] = {}
    buffer = ReassemblyBuffer(config.reassembly_deadline_s)
    status = [_PENDING] * n_packets
    counts = [0, 0, 0, 0]  # indexed by status code
    link_rng = random.Random(seed ^ 0x9E3779B9)
    ledger = state.ledger
    retry_limit = mac.hop_retry_limit
    deadline_s = config.reassembly_deadline_s

    heap: list[tuple] = []
    ordinal = 0
    for pid, t in enumerate(times):
        heap.append((t, ordinal, _BORN, pid, 0, 0, 0, False))
        # Deadlines enter the heap at birth so their ordinals are lower than
        # any later-scheduled arrival: at the exact deadline instant, expiry
        # wins and a fragment landing at that same time is late.
        heap.append((t + deadline_s, ordinal + 1, _DEADLINE, pid, 0, 0, 0, False))
        ordinal += 2
    heapq.heapify(heap)

    def emit(t, kind, node=None, peer=None, packet=None, seq=None, bits=None, joules=None):
        log.write(Event(t, 0, kind, node, peer, packet, seq, bits, joules).to_json() + "\n")

    def condemn(pid: int, code: int) -> None:
        if status[pid] == _PENDING:
            status[pid] = code
            counts[code] += 1

    def drain_dead(u: int) -> None:
        """A dead node strands everything queued at it."""
        for item in queues.pop(u, ()):
            condemn(item[0], _DROPPED)

    def start_hop(t: float, pid: int, seq: int, hop_idx: int, attempt: int) -> None:
        hop = plan[seq][2][hop_idx]
        u = hop[0]
        sender = nodes[u]
        if not sender.alive:
            condemn(pid, _DROPPED)
            return
        state.now = t
        delay = (hop[5] + mac.access_delay_s
                 + mac.contention_delay_s * state.active_transmitters_near(u))
        ledger.add(u, hop[2], sender.spend(hop[2]))
        if not sender.alive:
            state.invalidate_neighbors()
            drain_dead(u)
        # The success draw always happens, keeping the stream aligned across
        # alternate outcomes; a dead receiver forces failure.
        ok = link_rng.random() < hop[4] and nodes[hop[1]].alive
        busy[u] = t + delay
        state.active_tx.add(u)
        nonlocal ordinal
        heapq.heappush(heap, (t + delay, ordinal, _HOP_END, pid, seq, hop_idx, attempt, ok))
        ordinal += 1
        if log is not None:
            emit(t, "hop-start", node=u, peer=hop[1], packet=pid, seq=seq,
                 bits=plan[seq][1], joules=hop[2])

    def offer(t: float, pid: int, seq: int, hop_idx: int) -> None:
        u = plan[seq][2][hop_idx][0]
        if busy.get(u, 0.0) <= t:
            start_hop(t, pid, seq, hop_idx, 1)
        else:
            queues.setdefault(u, deque()).append((pid, seq, hop_idx))

    while heap:
        t, _, kind, pid, seq, hop_idx, attempt, ok = heapq.heappop(heap)
        if kind == _HOP_END:
            frag_bits, wire, hops = plan[seq]
            u, v, _tx_j, rx_j, _p, _t_tx = hops[hop_idx]
            if busy.get(u, 0.0) <= t:
                state.active_tx.discard(u)
            state.record_send(u, v, ok)
            state.record_receive(u, v, ok)
            if ok and nodes[v].alive:
                receiver = nodes[v]
                ledger.add(v, rx_j, receiver.spend(rx_j))
                if not receiver.alive:
                    state.invalidate_neighbors()
                    drain_dead(v)
                if log is not None:
                    emit(t, "hop-complete", node=v, peer=u, packet=pid, seq=seq,
                         bits=wire, joules=rx_j)
                if v == sink:
                    if log is not None:
                        emit(t, "fragment-delivered", node=v, packet=pid, seq=seq,
                             bits=frag_bits)
                    if buffer.reassemble(pid, seq, t) == "complete":
                        condemn(pid, _DELIVERED)
                elif receiver.alive:
                    offer(t, pid, seq, hop_idx + 1)
                else:
                    condemn(pid, _DROPPED)
            else:
                if log is not None:
                    emit(t, "hop-failed", node=u, peer=v, packet=pid, seq=seq, bits=wire)
                if attempt <= retry_limit:
                    start_hop(t, pid, seq, hop_idx, attempt + 1)
                else:
                    condemn(pid, _DROPPED)
            q = queues.get(u)
            if q and busy.get(u, 0.0) <= t and nodes[u].alive:
                npid, nseq, nhop = q.popleft()
                start_hop(t, npid, nseq, nhop, 1)
        elif kind == _BORN:
            buffer.register(DataPacket(pid, packet_bits, t), k_frag)
            if log is not None:
                emit(t, "packet-born", node=source, packet=pid, bits=packet_bits)
            for s in range(1, k_frag + 1):
                offer(t, pid, s, 0)
        else:  # _DEADLINE
            if status[pid] == _PENDING:
                buffer.expire(pid, t)
                status[pid] = _EXPIRED
                counts[_EXPIRED] += 1
                if log is not None:
                    emit(t, "deadline-expired", node=sink, packet=pid)

    delivered = counts[_DELIVERED]
    assert delivered + counts[_EXPIRED] + counts[_DROPPED] == n_packets, \
        "every generated packet must settle"

    delays = [buffer.delay_of(pid) for pid in range(n_packets) if status[pid] == _DELIVERED]
    mean_delay = sum(delays) / delivered if delivered else None
    out_of_order = (sum(1 for pid in range(n_packets)
                        if status[pid] == _DELIVERED and buffer.out_of_order(pid))
                    / delivered if delivered else 0.0)

    participants = sorted(set().union(*(p.node_ids for p in use_paths)))
    participant_energy = math.fsum(nodes[i].spent_energy - setup_spent[i] for i in participants)
    total_energy = math.fsum(nodes[i].spent_energy for i in sorted(nodes))
    residual_total = math.fsum(nodes[i].residual_energy for i in sorted(nodes))
    mean_energy = participant_energy / delivered if delivered else None

    return RunMetrics(
        router=config.router,
        rate_pkts_per_s=config.rate_pkts_per_s,
        seed=seed,
        n_paths=len(use_paths),
        path_hops=tuple(p.hop_count for p in use_paths),
        generated=n_packets,
        delivered=delivered,
        expired=counts[_EXPIRED],
        dropped=counts[_DROPPED],
        delivery_ratio=delivered / n_packets if n_packets else 0.0,
        mean_delay_s=mean_delay,
        mean_energy_j=mean_energy,
        participant_energy_j=participant_energy,
        setup_energy_j=setup_energy,
        total_energy_j=total_energy,
        ledger_total_j=ledger.total(),
        residual_total_j=residual_total,
        out_of_order_ratio=out_of_order,
        clamped_debits=ledger.clamped_debits)


def _run_cell(args) -> tuple:
    config, seed = args
    return (config.rate_pkts_per_s, config.router, seed), run(config, seed)


def compare(config, rates, seeds, routers=("qempar", "minhop"), jobs: int = 1) -> dict:
    """Run every (rate, router, seed) cell and return {key: RunMetrics}.

    Results are independent of jobs; with jobs > 1 cells run in a process
    pool.
    """
    tasks = [(replace(config, rate_pkts_per_s=float(r), router=rt), int(s))
             for r in rates for rt in routers for s in seeds]
    if jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_run_cell, tasks)
    else:
        results = [_run_cell(task) for task in tasks]
    return dict(results)
