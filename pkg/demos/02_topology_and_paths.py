"""
Placing a field and discovering node-disjoint paths
===================================================

Random placement with a pinned sink and source, range-limited neighbor
lists (plus the extended links that keep sparse fields connected), and
the two routers' path sets side by side.
"""

from qempar import ScenarioConfig, beacon_exchange, discover_paths, minhop_paths, place_nodes
from qempar.link_metrics import NetworkState

# A denser field than the default so several disjoint paths exist:
# 80 nodes on 200 m x 200 m, sink at the origin, source at (150, 150).
config = ScenarioConfig(node_count=80, field_width=200.0, field_height=200.0,
                        source_x=150.0, source_y=150.0)
topology = place_nodes(config, seed=18)
state = NetworkState(topology, config.radio_params(), config)

# Nodes 0 and 1 are always the sink and the source.
print(f"{config.node_count} nodes, radio range {config.radio_range_m} m")
print(f"sink   0 at {topology.nodes[0].position}")
print(f"source 1 at {topology.nodes[1].position}")
print(f"source neighbors: {state.neighbors(1)}")
print(f"extended links added to connect components: {topology.extended_links or 'none'}")

# One beacon round debits every node and fills the neighbor tables the
# suitability score reads (positions, residual energy, send/receive stats).
beacon_exchange(state)
print(f"beacon round cost: {state.ledger.total() * 1e3:.3f} mJ across the field")

# The QoS-aware router picks up to k node-disjoint paths, ordered by hop
# count and total link merit; the baseline takes minimum-hop paths only.
for name, finder in (("qempar", discover_paths), ("minhop", minhop_paths)):
    path_set = finder(1, 0, 4, state)
    print(f"\n{name}: {len(path_set)} disjoint path(s)")
    for p in path_set.paths:
        print(f"  {p.hop_count:2d} hops  merit {p.total_merit:7.3f}  {p.node_ids}")

# Disjointness means the paths share no interior node, so one exhausted
# relay can only take down a single path.
interiors = [set(p.interior()) for p in discover_paths(1, 0, 4, state).paths]
shared = set.intersection(*interiors) if len(interiors) > 1 else set()
print(f"\ninterior nodes shared between paths: {shared or 'none'}")
