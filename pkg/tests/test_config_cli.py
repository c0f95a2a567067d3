"""Configuration parsing, provenance, report rendering, and the command-line
front end (exercised in-process through main())."""

import csv
import io
import json
from types import SimpleNamespace

import pytest

from qempar import ConfigError, ScenarioConfig, load_config, parse_config_text
from qempar.cli import main
from qempar.report import COLUMNS, aggregate, emit_report


# --- configuration ---------------------------------------------------------

def test_defaults_validate():
    ScenarioConfig().validate()


def test_config_text_round_trips_exactly():
    cfg = ScenarioConfig(rate_pkts_per_s=12.5, stats_decay=0.875,
                         beacon_accounting=False, node_count=37)
    parsed = parse_config_text(cfg.to_text())
    assert ScenarioConfig(**parsed) == cfg


def test_load_config_tracks_provenance(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text("# comment line\nnode_count = 50\nrouter = minhop  # inline\n")
    cfg, prov = load_config(str(path), {"seed": "7"})
    assert cfg.node_count == 50
    assert cfg.router == "minhop"
    assert cfg.seed == 7
    assert prov["node_count"] == "file"
    assert prov["router"] == "file"
    assert prov["seed"] == "override"
    assert prov["duration_s"] == "default"


def test_overrides_beat_the_file(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text("node_count = 50\n")
    cfg, prov = load_config(str(path), {"node_count": "60"})
    assert cfg.node_count == 60
    assert prov["node_count"] == "override"


def test_parsing_fails_closed():
    with pytest.raises(ConfigError, match="unknown"):
        parse_config_text("no_such_knob = 1\n")
    with pytest.raises(ConfigError, match="line 2: duplicate"):
        parse_config_text("seed = 1\nseed = 2\n")
    with pytest.raises(ConfigError, match="expected a number"):
        parse_config_text("node_count = plenty\n")
    with pytest.raises(ConfigError, match="expected a boolean"):
        parse_config_text("beacon_accounting = maybe\n")
    with pytest.raises(ConfigError, match="line 1: expected 'key = value'"):
        parse_config_text("just words\n")
    with pytest.raises(ConfigError, match="unknown"):
        load_config(None, {"no_such_knob": "1"})
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/no/such/file.cfg")


def test_bool_words_and_numeric_coercion():
    assert parse_config_text("beacon_accounting = Yes\n") == {"beacon_accounting": True}
    assert parse_config_text("beacon_accounting = 0\n") == {"beacon_accounting": False}
    assert parse_config_text("rate_pkts_per_s = 2e1\n") == {"rate_pkts_per_s": 20.0}
    with pytest.raises(ConfigError):
        parse_config_text("node_count = 3.5\n")


def test_validation_reports_every_violation_at_once():
    bad = ScenarioConfig(node_count=1, rate_pkts_per_s=-1.0, router="flood")
    with pytest.raises(ConfigError) as err:
        bad.validate()
    text = str(err.value)
    assert "node_count" in text
    assert "rate_pkts_per_s" in text
    assert "router" in text


def test_load_config_rejects_invalid_combinations():
    with pytest.raises(ConfigError, match="coincide"):
        load_config(None, {"source_x": "0", "source_y": "0"})


# --- report rendering ------------------------------------------------------

def _fake(delay, energy, ratio):
    return SimpleNamespace(mean_delay_s=delay, mean_energy_j=energy,
                           delivery_ratio=ratio)


def test_aggregate_means_rows_and_sorts_them():
    cells = {
        (10.0, "qempar", 1): _fake(0.2, 1e-3, 1.0),
        (10.0, "qempar", 2): _fake(0.4, 3e-3, 0.5),
        (5.0, "minhop", 1): _fake(0.1, 2e-3, 1.0),
    }
    rows = aggregate(cells)
    assert [(r["rate_pkts_per_s"], r["router"]) for r in rows] == [
        (5.0, "minhop"), (10.0, "qempar")]
    q = rows[1]
    assert q["mean_delay_s"] == pytest.approx(0.3)
    assert q["mean_energy_j"] == pytest.approx(2e-3)
    assert q["delivery_ratio"] == pytest.approx(0.75)
    assert q["n_seeds"] == 2


def test_aggregate_skips_undelivered_runs_in_means():
    cells = {
        (10.0, "qempar", 1): _fake(0.2, 1e-3, 1.0),
        (10.0, "qempar", 2): _fake(None, None, 0.0),
    }
    row = aggregate(cells)[0]
    assert row["mean_delay_s"] == pytest.approx(0.2)  # only the delivering run
    assert row["delivery_ratio"] == pytest.approx(0.5)  # but the ratio counts both
    assert row["n_seeds"] == 2


def test_empty_cells_render_as_empty_csv_fields():
    rows = aggregate({(10.0, "qempar", 1): _fake(None, None, 0.0)})
    text = emit_report(rows, "csv")
    header, line = text.splitlines()
    assert header == "rate_pkts_per_s,router,mean_delay_s,mean_energy_j,delivery_ratio,n_seeds"
    assert line == "10.0,qempar,,,0.0,1"


def test_json_report_mirrors_csv():
    rows = aggregate({
        (5.0, "qempar", 1): _fake(0.125, 0.5e-3, 1.0),
        (5.0, "minhop", 1): _fake(0.25, 1e-3, 0.875),
    })
    loaded = json.loads(emit_report(rows, "json"))
    parsed = list(csv.DictReader(io.StringIO(emit_report(rows, "csv"))))
    assert len(loaded) == len(parsed) == 2
    for obj, row in zip(loaded, parsed):
        assert list(obj) == COLUMNS
        assert float(row["mean_delay_s"]) == obj["mean_delay_s"]
        assert float(row["mean_energy_j"]) == obj["mean_energy_j"]
        assert row["router"] == obj["router"]


def test_report_rejects_empty_input():
    with pytest.raises(ValueError):
        aggregate({})
    with pytest.raises(ValueError):
        emit_report([])
    with pytest.raises(ValueError):
        emit_report([{"x": 1}], "xml")


# --- command line ----------------------------------------------------------

FAST = ["--set", "duration_s=0.5", "--set", "rate_pkts_per_s=6"]


def test_validate_command_prints_resolved_config(capsys):
    assert main(["validate", "--set", "seed=3"]) == 0
    out = capsys.readouterr().out
    assert "configuration is valid" in out
    assert "seed = 3  [override]" in out
    assert "duration_s = 60.0  [default]" in out
    assert "d0 = 87.705802" in out


def test_bad_configuration_exits_2(capsys):
    assert main(["validate", "--set", "node_count=1"]) == 2
    assert "node_count" in capsys.readouterr().err
    assert main(["validate", "--set", "typo"]) == 2
    assert main(["run", "--set", "no_such_knob=1"] + FAST) == 2
    assert main(["sweep", "--rates", "abc"] + FAST) == 2
    assert main(["sweep", "--seeds", "5..1"] + FAST) == 2
    assert main(["sweep", "--jobs", "0", "--rates", "5", "--seeds", "1"] + FAST) == 2


def test_run_command_emits_a_report(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = main(["run", "--router", "both", "--seed", "2", "--out", str(out)] + FAST)
    assert code == 0
    stdout = capsys.readouterr().out
    assert "# resolved configuration" in stdout
    assert "qempar:" in stdout and "minhop:" in stdout
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 3  # header + one row per router
    assert {line.split(",")[1] for line in lines[1:]} == {"qempar", "minhop"}


def test_run_rejects_event_log_with_both_routers(tmp_path):
    log = tmp_path / "events.jsonl"
    code = main(["run", "--router", "both", "--event-log", str(log)] + FAST)
    assert code == 2
    assert not log.exists()


def test_run_writes_an_event_log(tmp_path, capsys):
    log = tmp_path / "events.jsonl"
    code = main(["run", "--router", "qempar", "--event-log", str(log)] + FAST)
    assert code == 0
    first = json.loads(log.read_text().splitlines()[0])
    assert first["kind"] == "packet-born"


def test_sweep_command_covers_the_grid(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--rates", "5,10", "--seeds", "1..2",
                 "--out", str(out)] + FAST)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [(r["rate_pkts_per_s"], r["router"]) for r in rows] == [
        ("5.0", "minhop"), ("5.0", "qempar"),
        ("10.0", "minhop"), ("10.0", "qempar")]
    assert all(r["n_seeds"] == "2" for r in rows)


def test_sweep_accepts_comma_seed_lists(tmp_path, capsys):
    out = tmp_path / "sweep.json"
    code = main(["sweep", "--rates", "8", "--seeds", "2,4", "--router", "qempar",
                 "--format", "json", "--out", str(out)] + FAST)
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 1
    assert rows[0]["router"] == "qempar"
    assert rows[0]["n_seeds"] == 2


def test_config_file_feeds_the_cli(tmp_path, capsys):
    path = tmp_path / "scenario.cfg"
    path.write_text("duration_s = 0.5\nrate_pkts_per_s = 6\nrouter = minhop\n")
    assert main(["run", "--config", str(path)]) == 0
    out = capsys.readouterr().out
    assert "router = minhop  [file]" in out
    assert "minhop:" in out
