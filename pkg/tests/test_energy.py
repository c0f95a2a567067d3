"""Radio energy model point values, monotonicity, and ledger conservation."""

import random

import pytest

from qempar import (EnergyLedger, EnergyLedgerEntry, NodeState, Position,
                    RadioParams, debit, record_rx, record_tx, rx_energy,
                    threshold_distance, tx_energy)


def test_threshold_distance_value():
    assert threshold_distance(RadioParams()) == pytest.approx(
        87.70580193070292, rel=1e-12)


def test_transmit_energy_point_values():
    p = RadioParams()
    assert tx_energy(4096, 40.0, p) == pytest.approx(0.000270336, rel=1e-12)
    assert tx_energy(4096, 100.0, p) == pytest.approx(0.00073728, rel=1e-12)
    assert rx_energy(4096, p) == pytest.approx(0.0002048, rel=1e-12)


def test_amplifier_regimes_meet_continuously_at_threshold():
    p = RadioParams()
    d0 = p.d0
    open_space = 4096 * p.e_elec + 4096 * p.eps_fs * d0 ** 2
    multi_path = 4096 * p.e_elec + 4096 * p.eps_mp * d0 ** 4
    assert open_space == pytest.approx(multi_path, rel=1e-9)
    assert tx_energy(4096, d0, p) == pytest.approx(open_space, rel=1e-12)


def test_transmit_energy_increases_with_distance():
    p = RadioParams()
    rng = random.Random(42)
    for _ in range(50):
        bits = rng.randrange(1, 10000)
        distances = sorted(rng.uniform(0.0, 300.0) for _ in range(20))
        costs = [tx_energy(bits, d, p) for d in distances]
        assert all(a < b for a, b in zip(costs, costs[1:]))


def test_invalid_inputs_raise():
    p = RadioParams()
    with pytest.raises(ValueError):
        tx_energy(0, 10.0, p)
    with pytest.raises(ValueError):
        tx_energy(100, -1.0, p)
    with pytest.raises(ValueError):
        rx_energy(-5, p)
    with pytest.raises(ValueError):
        RadioParams(e_elec=0.0)
    with pytest.raises(ValueError):
        RadioParams(eps_mp=-1e-12)


def test_residual_after_one_transmission():
    node = NodeState(3, Position(0, 0), initial_energy=2.0)
    ledger = EnergyLedger()
    spent = record_tx(node, 4096, 40.0, RadioParams(), ledger, sim_time=0.0)
    assert spent == pytest.approx(0.000270336, rel=1e-12)
    assert node.residual_energy == pytest.approx(1.999729664, rel=1e-12)
    assert ledger.total() == pytest.approx(spent, rel=1e-12)


def test_clamped_debit_kills_node_but_ledger_keeps_full_cost():
    node = NodeState(4, Position(0, 0), initial_energy=1e-9)
    ledger = EnergyLedger()
    record_rx(node, 4096, RadioParams(), ledger, sim_time=1.0)
    assert not node.alive
    assert node.residual_energy == 0.0
    assert ledger.clamped_debits == 1
    assert ledger.total() == pytest.approx(0.0002048, rel=1e-12)


def test_ledger_entries_carry_audit_fields():
    node = NodeState(5, Position(0, 0), initial_energy=2.0)
    ledger = EnergyLedger()
    record_tx(node, 100, 25.0, RadioParams(), ledger, sim_time=0.5)
    record_rx(node, 100, RadioParams(), ledger, sim_time=0.7)
    tx_e, rx_e = ledger.entries
    assert (tx_e.kind, tx_e.bits, tx_e.distance_m, tx_e.sim_time) == ("tx", 100, 25.0, 0.5)
    assert (rx_e.kind, rx_e.distance_m, rx_e.sim_time) == ("rx", None, 0.7)
    assert tx_e.joules == tx_energy(100, 25.0, RadioParams())


def test_ledger_without_entries_still_keeps_totals():
    node = NodeState(6, Position(0, 0), initial_energy=2.0)
    ledger = EnergyLedger(keep_entries=False)
    record_tx(node, 4096, 40.0, RadioParams(), ledger, sim_time=0.0)
    record_rx(node, 4096, RadioParams(), ledger, sim_time=0.0)
    assert ledger.entries == []
    assert ledger.total() == pytest.approx(0.000270336 + 0.0002048, rel=1e-12)
    assert ledger.per_node()[6] == pytest.approx(ledger.total(), rel=1e-12)


def test_energy_conservation_over_random_debits():
    """Sum of (initial - residual) equals the ledger total while no debit
    clamps, to float round-off."""
    p = RadioParams()
    rng = random.Random(7)
    for trial in range(20):
        nodes = {i: NodeState(i, Position(0, 0), initial_energy=50.0) for i in range(5)}
        ledger = EnergyLedger(keep_entries=(trial % 2 == 0))
        for _ in range(200):
            node = nodes[rng.randrange(5)]
            if rng.random() < 0.5:
                record_tx(node, rng.randrange(1, 5000), rng.uniform(0, 200), p,
                          ledger, sim_time=0.0)
            else:
                record_rx(node, rng.randrange(1, 5000), p, ledger, sim_time=0.0)
        assert ledger.clamped_debits == 0
        drained = sum(n.initial_energy - n.residual_energy for n in nodes.values())
        assert drained == pytest.approx(ledger.total(), rel=1e-12)
        per_node = ledger.per_node()
        for i, n in nodes.items():
            assert per_node.get(i, 0.0) == pytest.approx(n.spent_energy, rel=1e-12)


def test_debit_returns_residual():
    node = NodeState(8, Position(0, 0), initial_energy=1.0)
    ledger = EnergyLedger()
    entry = EnergyLedgerEntry(8, "rx", 1000, None, 0.25, 0.0)
    assert debit(node, entry, ledger) == pytest.approx(0.75)
