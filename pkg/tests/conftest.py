"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import pytest

from qempar import NetworkState, NodeState, Position, ScenarioConfig, Topology


def manual_topology(positions, radio_range, initial_energy=2.0, sink_id=0,
                    source_id=1, fallback=False, extended=None,
                    field=(1000.0, 1000.0)) -> Topology:
    """Topology with hand-picked positions: {node_id: (x, y)}."""
    nodes = {i: NodeState(i, Position(float(x), float(y)), initial_energy)
             for i, (x, y) in positions.items()}
    return Topology(
        nodes=nodes, sink_id=sink_id, source_id=source_id,
        radio_range=radio_range, field_width=field[0], field_height=field[1],
        fallback_enabled=fallback, extended_links=extended or {})


def make_state(topo: Topology, **config_overrides) -> NetworkState:
    cfg = ScenarioConfig(radio_range_m=topo.radio_range, **config_overrides)
    return NetworkState(topo, cfg.radio_params(), cfg)


@pytest.fixture
def line_topology() -> Topology:
    """Three collinear nodes 30 m apart with 40 m range: 0-1 and 1-2 link,
    0-2 does not."""
    return manual_topology({0: (0, 0), 1: (30, 0), 2: (60, 0)}, radio_range=40.0)
