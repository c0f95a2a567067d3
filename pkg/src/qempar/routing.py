"""Beacon exchange and multi-path route discovery.

Discovery runs once per scenario, after one synchronized beacon round and
before any traffic. It builds up to k node-disjoint source-to-sink paths:
the protocol router searches greedily by link suitability (progressing
candidates first) with backtracking under an iteratively deepened hop budget;
the baseline router takes minimum-hop paths by breadth-first search. Paths
share only the source and sink.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import NoPathError, UnknownNodeError
from .link_metrics import NetworkState, RoutePath, select_next_hop, total_merit
from .energy import record_rx, record_tx
from .topology import Position, distance, is_extended_link


@dataclass(frozen=True)
class Beacon:
    """One node's periodic self-announcement."""

    origin_id: int
    position: Position
    residual_energy: float
    pps: float
    ppr: float
    neighbor_ids: tuple[int, ...]
    bits: int

    def __post_init__(self):
        if self.bits <= 0:
            raise ValueError("beacon bits must be positive")


@dataclass(frozen=True)
class NeighborEntry:
    """What a node knows about one neighbor after the beacon round."""

    neighbor_id: int
    position: Position
    residual_energy: float
    pps: float
    ppr: float
    neighbor_ids: tuple[int, ...]


@dataclass(frozen=True)
class PathSet:
    """Node-disjoint paths ordered by ascending hop count (ties: descending
    merit, then ascending first-interior id). Any two paths share exactly the
    source and the sink."""

    paths: tuple[RoutePath, ...]
    source_id: int
    sink_id: int

    def __post_init__(self):
        ordered = tuple(sorted(
            self.paths,
            key=lambda p: (p.hop_count, -p.total_merit, p.first_interior),
        ))
        object.__setattr__(self, "paths", ordered)
        seen_interiors: set[int] = set()
        for p in ordered:
            if p.node_ids[0] != self.source_id or p.node_ids[-1] != self.sink_id:
                raise ValueError("path endpoints must be the source and the sink")
            overlap = seen_interiors.intersection(p.interior())
            if overlap:
                raise ValueError(f"paths share interior nodes {sorted(overlap)}")
            seen_interiors.update(p.interior())

    def __len__(self) -> int:
        return len(self.paths)


def beacon_exchange(state: NetworkState) -> None:
    """One synchronized beacon round at time zero.

    Every alive node broadcasts one beacon sized to reach its farthest
    neighbor and every neighbor receives it; both sides are debited when
    beacon accounting is on. Afterwards each node's neighbor_table holds, per
    neighbor, the position, residual energy, PPS/PPR snapshots, and that
    neighbor's own neighbor list. Beacons never touch the link counters, so
    PPS/PPR stay in lockstep with data-hop events.
    """
    topo = state.topology
    cfg = state.config
    bits = cfg.beacon_bytes * 8
    ids = sorted(i for i, n in topo.nodes.items() if n.alive)
    nbr_map = {i: state.neighbors(i) for i in ids}
    if cfg.beacon_accounting:
        any_death = False
        for i in ids:
            nbrs = nbr_map[i]
            if not nbrs:
                continue
            me = topo.nodes[i]
            reach = max(distance(me.position, topo.nodes[v].position) for v in nbrs)
            record_tx(me, bits, reach, state.params, state.ledger, 0.0)
            any_death = any_death or not me.alive
            for v in nbrs:
                record_rx(topo.nodes[v], bits, state.params, state.ledger, 0.0)
                any_death = any_death or not topo.nodes[v].alive
        if any_death:
            state.invalidate_neighbors()
    beacons = {
        i: Beacon(
            origin_id=i,
            position=topo.nodes[i].position,
            residual_energy=topo.nodes[i].residual_energy,
            pps=state.node_pps(i),
            ppr=state.node_ppr(i),
            neighbor_ids=tuple(nbr_map[i]),
            bits=bits,
        )
        for i in ids
    }
    for i in ids:
        table = []
        for v in nbr_map[i]:
            b = beacons[v]
            table.append(NeighborEntry(
                neighbor_id=v,
                position=b.position,
                residual_energy=b.residual_energy,
                pps=b.pps,
                ppr=b.ppr,
                neighbor_ids=b.neighbor_ids,
            ))
        topo.nodes[i].neighbor_table = table


def _bfs_path(state: NetworkState, source: int, sink: int, banned: set[int]) -> list[int] | None:
    """Minimum-hop path exploring neighbors in ascending id order; banned
    nodes cannot be traversed (endpoints are always allowed)."""
    parent: dict[int, int | None] = {source: None}
    q = deque([source])
    while q:
        u = q.popleft()
        if u == sink:
            path = []
            cur: int | None = u
            while cur is not None:
                path.append(cur)
                cur = parent[cur]
            return path[::-1]
        for v in state.neighbors(u):
            if v in parent or (v in banned and v != sink):
                continue
            parent[v] = u
            q.append(v)
    return None


def _bfs_hops(state: NetworkState, source: int, sink: int, banned: set[int]) -> int | None:
    path = _bfs_path(state, source, sink, banned)
    return None if path is None else len(path) - 1


def _bounded_greedy_dfs(state: NetworkState, source: int, sink: int, banned: set[int],
                        depth_cap: int, dist_to_sink: dict[int, float],
                        visit_budget: int):
    """Depth-first search for one path, candidates ordered by suitability.

    Progressing candidates (strictly closer to the sink) are considered
    first; in 'preferred' mode non-progressing candidates are admitted only
    when no progressing one remains, in 'strict' mode never. Returns
    (path or None, truncated, deepest_partial): truncated means the visit
    budget stopped an unfinished search.
    """
    strict = state.config.progress_mode == "strict"
    path = [source]
    on_path = {source}
    tried: dict[int, set[int]] = {source: set()}
    # Shallowest depth each node has been expanded at during this cap. A
    # candidate is re-entered only strictly shallower than before; without
    # this the backtracking search re-explores subtrees exponentially.
    entered = {source: 0}
    deepest = [source]
    visits = 0
    while path:
        cur = path[-1]
        if cur == sink:
            return path, False, deepest
        nxt = None
        if len(path) - 1 < depth_cap and visits < visit_budget:
            depth = len(path)
            cands = [v for v in state.neighbors(cur)
                     if v not in on_path and v not in tried[cur]
                     and entered.get(v, depth_cap + 1) > depth
                     and (v == sink or v not in banned)]
            here = dist_to_sink[cur]
            prog = [v for v in cands if dist_to_sink[v] < here]
            if strict:
                cands = prog
            else:
                cands = prog if prog else cands
            if cands:
                nxt = select_next_hop(cur, cands, state)
        if nxt is None:
            dead = path.pop()
            on_path.discard(dead)
            tried.pop(dead, None)
            if path:
                tried[path[-1]].add(dead)
        else:
            visits += 1
            tried[nxt] = set()
            entered[nxt] = len(path)
            path.append(nxt)
            on_path.add(nxt)
            if len(path) > len(deepest):
                deepest = list(path)
    return None, visits >= visit_budget, deepest


def _find_path(state: NetworkState, source: int, sink: int, banned: set[int],
               cap_max: int, dist_to_sink: dict[int, float]) -> list[int] | None:
    """One path avoiding banned interiors, or None.

    The depth cap deepens iteratively starting from the BFS hop distance on
    the reduced graph (a lower bound, so skipped caps provably hold no path).
    A search truncated by the visit budget blacklists the deepest partial
    path's interior and retries, up to the configured retry limit.
    """
    cfg = state.config
    blacklist: set[int] = set()
    for _ in range(cfg.path_retry_limit + 1):
        excluded = banned | blacklist
        lb = _bfs_hops(state, source, sink, excluded)
        if lb is None or lb > cap_max:
            return None
        truncated_any = False
        deepest: list[int] = []
        for cap in range(max(lb, 1), cap_max + 1):
            path, truncated, partial = _bounded_greedy_dfs(
                state, source, sink, excluded, cap, dist_to_sink, cfg.search_visit_budget)
            if path is not None:
                return path
            if truncated:
                truncated_any = True
                deepest = partial
                break
        if not truncated_any:
            return None  # exhaustive search: no such path exists
        fresh = [n for n in deepest if n not in (source, sink) and n not in blacklist]
        if not fresh:
            return None
        blacklist.update(fresh)
    return None


def _build_route(state: NetworkState, ids: list[int]) -> RoutePath:
    topo = state.topology
    ext = tuple((a, b) for a, b in zip(ids, ids[1:]) if is_extended_link(topo, a, b))
    return RoutePath(tuple(ids), total_merit(ids, state), ext)


def _check_endpoints(state: NetworkState, source: int, sink: int, k: int) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")
    src = state.topology.node(source)
    dst = state.topology.node(sink)
    if source == sink:
        raise ValueError("source and sink must differ")
    if not src.alive or not dst.alive:
        raise NoPathError("source or sink is dead")


def discover_paths(source: int, sink: int, k: int, state: NetworkState) -> PathSet:
    """Up to k node-disjoint suitability-greedy paths, best-effort.

    Paths are accepted sequentially; each accepted path's interior is banned
    for the next. Returns fewer than k when the topology cannot support more
    and raises NoPathError when not even one path exists.
    """
    _check_endpoints(state, source, sink, k)
    topo = state.topology
    sink_pos = topo.node(sink).position
    dist_to_sink = {i: distance(n.position, sink_pos) for i, n in topo.nodes.items()}
    est = max(1, math.ceil(dist_to_sink[source] / topo.radio_range))
    cap_max = math.ceil(state.config.hop_budget_factor * est)
    used: set[int] = set()
    paths: list[RoutePath] = []
    for _ in range(k):
        ids = _find_path(state, source, sink, used, cap_max, dist_to_sink)
        if ids is None:
            break
        paths.append(_build_route(state, ids))
        used.update(ids[1:-1])
    if not paths:
        raise NoPathError(f"no path from {source} to {sink}")
    return PathSet(tuple(paths), source, sink)


def minhop_paths(source: int, sink: int, k: int, state: NetworkState) -> PathSet:
    """Up to k node-disjoint minimum-hop paths via iterated BFS: find a
    shortest path, remove its interior, repeat."""
    _check_endpoints(state, source, sink, k)
    used: set[int] = set()
    paths: list[RoutePath] = []
    for _ in range(k):
        ids = _bfs_path(state, source, sink, used)
        if ids is None:
            break
        paths.append(_build_route(state, ids))
        used.update(ids[1:-1])
    if not paths:
        raise NoPathError(f"no path from {source} to {sink}")
    return PathSet(tuple(paths), source, sink)
