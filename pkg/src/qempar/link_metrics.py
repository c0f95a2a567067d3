"""Link quality bookkeeping and the four-term next-hop suitability score.

A candidate hop from a to b is scored PPS_b + APPR_b + interference term +
residual-energy ratio. PPS/PPR are success ratios over per-link send/receive
counters aggregated per node; APPR averages (or, in literal mode, sums) the
PPR of the candidate's own neighbors; the interference term rewards strong
links, 1/(1+I_B) in normalized mode or 1/I_B in literal mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .energy import EnergyLedger, RadioParams
from .errors import UnknownNodeError
from .topology import Topology, distance, neighbors as topo_neighbors


@dataclass
class LinkStats:
    """Per-link counters. Floats so an optional exponential decay can scale
    them; without decay they hold exact event counts."""

    sends_attempted: float = 0.0
    sends_succeeded: float = 0.0
    receives_expected: float = 0.0
    receives_succeeded: float = 0.0

    def record_send(self, ok: bool, decay: float = 0.0) -> None:
        if decay:
            self.sends_attempted *= decay
            self.sends_succeeded *= decay
        self.sends_attempted += 1.0
        if ok:
            self.sends_succeeded += 1.0

    def record_receive(self, ok: bool, decay: float = 0.0) -> None:
        if decay:
            self.receives_expected *= decay
            self.receives_succeeded *= decay
        self.receives_expected += 1.0
        if ok:
            self.receives_succeeded += 1.0


def pps(stats: LinkStats, cold_start: float = 1.0) -> float:
    """Send success ratio; cold_start before any attempt."""
    if stats.sends_attempted <= 0.0:
        return cold_start
    return stats.sends_succeeded / stats.sends_attempted


def ppr(stats: LinkStats, cold_start: float = 1.0) -> float:
    """Receive success ratio; cold_start before any expected reception."""
    if stats.receives_expected <= 0.0:
        return cold_start
    return stats.receives_succeeded / stats.receives_expected


@dataclass(frozen=True)
class SuitabilityScore:
    """The four scored terms. total is their exact sum by construction."""

    pps_term: float
    appr_term: float
    interference_term: float
    energy_term: float

    @property
    def total(self) -> float:
        return self.pps_term + self.appr_term + self.interference_term + self.energy_term


@dataclass(frozen=True)
class RoutePath:
    """A discovered source-to-sink path with its merit snapshot.

    extended_hops flags the hops that exceed the radio range (bridge links).
    """

    node_ids: tuple[int, ...]
    total_merit: float
    extended_hops: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if len(self.node_ids) < 2:
            raise ValueError("a path needs at least source and sink")
        if len(set(self.node_ids)) != len(self.node_ids):
            raise ValueError("path repeats a node id")

    @property
    def hop_count(self) -> int:
        return len(self.node_ids) - 1

    @property
    def first_interior(self) -> int:
        """Tie-break key for path classification."""
        return self.node_ids[1]

    def interior(self) -> tuple[int, ...]:
        return self.node_ids[1:-1]


class NetworkState:
    """Everything the metrics need about a running network: topology, radio
    constants, scenario config, per-link counters, the energy ledger, and
    which nodes are mid-transmission right now."""

    def __init__(self, topology: Topology, params: RadioParams, config):
        self.topology = topology
        self.params = params
        self.config = config
        self.stats: dict[tuple[int, int], LinkStats] = {}
        self.ledger = EnergyLedger()
        self.busy_until: dict[int, float] = {}
        self.active_tx: set[int] = set()
        self.now: float = 0.0
        # Per-node aggregates (attempted, succeeded) kept in lockstep with the
        # per-link counters so node-level PPS/PPR are O(1).
        self._send_agg: dict[int, list[float]] = {}
        self._recv_agg: dict[int, list[float]] = {}
        self._nbr_cache: dict[int, list[int]] = {}

    def link(self, a: int, b: int) -> LinkStats:
        key = (a, b)
        st = self.stats.get(key)
        if st is None:
            st = self.stats[key] = LinkStats()
        return st

    def record_send(self, a: int, b: int, ok: bool) -> None:
        st = self.link(a, b)
        before = (st.sends_attempted, st.sends_succeeded)
        st.record_send(ok, self.config.stats_decay)
        agg = self._send_agg.setdefault(a, [0.0, 0.0])
        agg[0] += st.sends_attempted - before[0]
        agg[1] += st.sends_succeeded - before[1]

    def record_receive(self, a: int, b: int, ok: bool) -> None:
        st = self.link(a, b)
        before = (st.receives_expected, st.receives_succeeded)
        st.record_receive(ok, self.config.stats_decay)
        agg = self._recv_agg.setdefault(b, [0.0, 0.0])
        agg[0] += st.receives_expected - before[0]
        agg[1] += st.receives_succeeded - before[1]

    def node_pps(self, node_id: int) -> float:
        agg = self._send_agg.get(node_id)
        if not agg or agg[0] <= 0.0:
            return self.config.cold_start_value
        return agg[1] / agg[0]

    def node_ppr(self, node_id: int) -> float:
        agg = self._recv_agg.get(node_id)
        if not agg or agg[0] <= 0.0:
            return self.config.cold_start_value
        return agg[1] / agg[0]

    def neighbors(self, node_id: int) -> list[int]:
        nbrs = self._nbr_cache.get(node_id)
        if nbrs is None:
            nbrs = self._nbr_cache[node_id] = topo_neighbors(self.topology, node_id)
        return nbrs

    def invalidate_neighbors(self) -> None:
        """Drop cached neighbor lists (call after any node death)."""
        self._nbr_cache.clear()

    def active_transmitters_near(self, node_id: int) -> int:
        """Other nodes transmitting at self.now within carrier-sense range
        (carrier_sense_factor times the radio range) of node_id."""
        if not self.active_tx:
            return 0
        now = self.now
        busy = self.busy_until
        nodes = self.topology.nodes
        here = nodes[node_id].position
        cs = self.config.carrier_sense_factor * self.topology.radio_range
        return sum(
            1 for n in self.active_tx
            if n != node_id and busy.get(n, 0.0) > now
            and distance(here, nodes[n].position) <= cs)


def appr(neighbor_id: int, state: NetworkState) -> float:
    """Average (or literal-sum) packet reception ratio over the candidate's
    own neighbor set."""
    values = [state.node_ppr(j) for j in state.neighbors(neighbor_id)]
    if not values:
        return state.config.cold_start_value
    if state.config.appr_mode == "literal":
        return sum(values)
    return sum(values) / len(values)


def interference(a: int, b: int, state: NetworkState) -> float:
    """I_B for the a-to-b link: receiver-side contention plus noise, scaled by
    the path-loss distance term. Always positive."""
    cfg = state.config
    d = distance(state.topology.node(a).position, state.topology.node(b).position)
    active = state.active_transmitters_near(b)
    raw = (cfg.interference_noise + cfg.interference_neighbor_coeff * active) \
        * d ** cfg.interference_alpha / cfg.interference_reference
    return max(raw, 1e-12)


def suitability(a: int, b: int, state: NetworkState) -> SuitabilityScore:
    """Score candidate b as the next hop from a. b must be a neighbor of a."""
    if b not in state.neighbors(a):
        raise UnknownNodeError(f"no link {a}->{b}")
    i_b = interference(a, b, state)
    if state.config.interference_mode == "literal":
        interference_term = 1.0 / i_b
    else:
        interference_term = 1.0 / (1.0 + i_b)
    node_b = state.topology.node(b)
    return SuitabilityScore(
        pps_term=state.node_pps(b),
        appr_term=appr(b, state),
        interference_term=interference_term,
        energy_term=node_b.residual_energy / node_b.initial_energy,
    )


def pick_best(candidates: list[int], totals: list[float]) -> int:
    """Argmax with lowest-id tie-break. Invariant under any positive scaling
    of all totals."""
    best_id = candidates[0]
    best = totals[0]
    for cand, tot in zip(candidates[1:], totals[1:]):
        if tot > best or (tot == best and cand < best_id):
            best, best_id = tot, cand
    return best_id


def select_next_hop(current: int, candidates: list[int], state: NetworkState) -> int:
    """Highest-suitability candidate; ties go to the lowest node id."""
    if not candidates:
        raise ValueError(f"no candidates from node {current}")
    totals = [suitability(current, c, state).total for c in candidates]
    return pick_best(list(candidates), totals)


def total_merit(node_ids, state: NetworkState) -> float:
    """Path merit: the sum of full link suitability totals along the path."""
    ids = tuple(node_ids)
    if len(ids) < 2 or len(set(ids)) != len(ids):
        raise ValueError("invalid path")
    return sum(suitability(a, b, state).total for a, b in zip(ids, ids[1:]))
