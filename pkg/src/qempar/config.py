"""Scenario configuration: defaults, file parsing, validation, provenance.

Config files are flat ``key = value`` text, one setting per line, with ``#``
comments. Parsing fails closed: unknown keys, duplicate keys, and unparsable
values raise ConfigError instead of being ignored. load_config reports where
every effective value came from (default, file, or override) so a run can
print its resolved configuration.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .energy import RadioParams
from .errors import ConfigError


@dataclass(frozen=True)
class ScenarioConfig:
    """Every knob of a simulation scenario, with workable defaults.

    The defaults describe a 400 m x 400 m field of 100 nodes with a corner
    sink, the standard first-order radio constants, 512-byte packets split
    four ways, and a light CSMA-style MAC.
    """

    # Field and placement
    field_width: float = 400.0
    field_height: float = 400.0
    node_count: int = 100
    sink_x: float = 0.0
    sink_y: float = 0.0
    source_x: float = 300.0
    source_y: float = 300.0
    radio_range_m: float = 40.0
    extended_range_fallback: bool = True

    # Radio energy model
    e_elec_j_per_bit: float = 50e-9
    eps_fs_j_per_bit_m2: float = 10e-12
    eps_mp_j_per_bit_m4: float = 0.0013e-12
    e_da_j_per_bit: float = 5e-9
    initial_energy_j: float = 2.0

    # Traffic and fragmentation
    packet_bytes: int = 512
    fragment_count: int = 4
    fragment_header_bytes: int = 8
    traffic_model: str = "deterministic"  # deterministic | poisson
    rate_pkts_per_s: float = 10.0
    duration_s: float = 60.0
    reassembly_deadline_s: float = 5.0
    wraparound_assignment: bool = True

    # Beacons and link statistics
    beacon_bytes: int = 32
    beacon_accounting: bool = True
    stats_decay: float = 0.0
    cold_start_value: float = 1.0

    # Suitability scoring
    appr_mode: str = "mean"  # mean | literal
    interference_mode: str = "normalized"  # normalized | literal
    interference_noise: float = 1.0
    interference_neighbor_coeff: float = 0.1
    interference_reference: float = 1600.0
    interference_alpha: float = 2.0

    # Path discovery
    progress_mode: str = "preferred"  # preferred | strict
    hop_budget_factor: float = 4.0
    search_visit_budget: int = 20000
    path_retry_limit: int = 3

    # MAC and link reliability
    bit_rate_bps: float = 500e3
    access_delay_s: float = 0.0005
    contention_delay_s: float = 0.0002
    carrier_sense_factor: float = 2.0
    hop_retry_limit: int = 2
    base_success: float = 0.98
    success_distance_slope: float = 0.03

    # Run selection
    router: str = "qempar"  # qempar | minhop
    seed: int = 1

    @property
    def packet_bits(self) -> int:
        return self.packet_bytes * 8

    def radio_params(self) -> RadioParams:
        return RadioParams(
            e_elec=self.e_elec_j_per_bit,
            eps_fs=self.eps_fs_j_per_bit_m2,
            eps_mp=self.eps_mp_j_per_bit_m4,
            e_da=self.e_da_j_per_bit,
        )

    def validate(self) -> None:
        """Raise ConfigError listing every violated constraint."""
        errs = []

        def check(ok: bool, msg: str) -> None:
            if not ok:
                errs.append(msg)

        check(self.field_width > 0 and self.field_height > 0,
              "field dimensions must be positive")
        check(self.node_count >= 2, "node_count must be at least 2")
        check(0 <= self.sink_x <= self.field_width and 0 <= self.sink_y <= self.field_height,
              "sink position must lie inside the field")
        check(0 <= self.source_x <= self.field_width and 0 <= self.source_y <= self.field_height,
              "source position must lie inside the field")
        check((self.sink_x, self.sink_y) != (self.source_x, self.source_y),
              "sink and source must not coincide")
        check(self.radio_range_m > 0, "radio_range_m must be positive")
        for name in ("e_elec_j_per_bit", "eps_fs_j_per_bit_m2",
                     "eps_mp_j_per_bit_m4", "e_da_j_per_bit"):
            check(getattr(self, name) > 0, f"{name} must be positive")
        check(self.initial_energy_j > 0, "initial_energy_j must be positive")
        check(self.packet_bytes >= 1, "packet_bytes must be at least 1")
        check(self.fragment_count >= 1, "fragment_count must be at least 1")
        if self.packet_bytes >= 1 and self.fragment_count >= 1:
            check(self.fragment_count <= self.packet_bits,
                  "fragment_count cannot exceed packet bits")
        check(self.fragment_header_bytes >= 0, "fragment_header_bytes must be non-negative")
        check(self.traffic_model in ("deterministic", "poisson"),
              "traffic_model must be deterministic or poisson")
        check(self.rate_pkts_per_s > 0, "rate_pkts_per_s must be positive")
        check(self.duration_s > 0, "duration_s must be positive")
        check(self.reassembly_deadline_s > 0, "reassembly_deadline_s must be positive")
        check(self.beacon_bytes >= 1, "beacon_bytes must be at least 1")
        check(0.0 <= self.stats_decay <= 1.0, "stats_decay must be in [0, 1]")
        check(0.0 <= self.cold_start_value <= 1.0, "cold_start_value must be in [0, 1]")
        check(self.appr_mode in ("mean", "literal"), "appr_mode must be mean or literal")
        check(self.interference_mode in ("normalized", "literal"),
              "interference_mode must be normalized or literal")
        check(self.interference_noise > 0, "interference_noise must be positive")
        check(self.interference_neighbor_coeff >= 0,
              "interference_neighbor_coeff must be non-negative")
        check(self.interference_reference > 0, "interference_reference must be positive")
        check(self.interference_alpha > 0, "interference_alpha must be positive")
        check(self.progress_mode in ("preferred", "strict"),
              "progress_mode must be preferred or strict")
        check(self.hop_budget_factor >= 1.0, "hop_budget_factor must be at least 1")
        check(self.search_visit_budget >= 1, "search_visit_budget must be at least 1")
        check(self.path_retry_limit >= 0, "path_retry_limit must be non-negative")
        check(self.bit_rate_bps > 0, "bit_rate_bps must be positive")
        check(self.access_delay_s >= 0, "access_delay_s must be non-negative")
        check(self.contention_delay_s >= 0, "contention_delay_s must be non-negative")
        check(self.carrier_sense_factor >= 0, "carrier_sense_factor must be non-negative")
        check(self.hop_retry_limit >= 0, "hop_retry_limit must be non-negative")
        check(0.0 < self.base_success <= 1.0, "base_success must be in (0, 1]")
        check(0.0 <= self.success_distance_slope <= 1.0,
              "success_distance_slope must be in [0, 1]")
        check(self.router in ("qempar", "minhop"), "router must be qempar or minhop")
        check(self.seed >= 0, "seed must be non-negative")
        if errs:
            raise ConfigError("; ".join(errs))

    def to_text(self) -> str:
        """Serialize as the flat key = value format (round-trips exactly)."""
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool):
                txt = "true" if v else "false"
            elif isinstance(v, float):
                txt = repr(v)
            else:
                txt = str(v)
            lines.append(f"{f.name} = {txt}")
        return "\n".join(lines) + "\n"


_FIELDS = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}
_BOOL_FIELDS = {f.name for f in dataclasses.fields(ScenarioConfig) if f.type == "bool"}
_INT_FIELDS = {f.name for f in dataclasses.fields(ScenarioConfig) if f.type == "int"}
_FLOAT_FIELDS = {f.name for f in dataclasses.fields(ScenarioConfig) if f.type == "float"}
_TRUE_WORDS = {"true", "1", "yes", "on"}
_FALSE_WORDS = {"false", "0", "no", "off"}


def coerce_value(key: str, raw: str):
    """Parse one raw string into the field's declared type, or raise
    ConfigError."""
    if key not in _FIELDS:
        raise ConfigError(f"unknown configuration key '{key}'")
    raw = raw.strip()
    if key in _BOOL_FIELDS:
        low = raw.lower()
        if low in _TRUE_WORDS:
            return True
        if low in _FALSE_WORDS:
            return False
        raise ConfigError(f"{key}: expected a boolean, got '{raw}'")
    try:
        if key in _INT_FIELDS:
            return int(raw)
        if key in _FLOAT_FIELDS:
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got '{raw}'") from None
    return raw


def parse_config_text(text: str) -> dict:
    """Parse flat key = value text into a typed settings dict (fail-closed)."""
    settings: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got '{stripped}'")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key in settings:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        settings[key] = coerce_value(key, raw)
    return settings


def load_config(path: str | None = None, overrides: dict | None = None):
    """Build a validated ScenarioConfig from defaults, an optional file, and
    optional overrides (highest precedence).

    Returns (config, provenance) where provenance maps every field to
    'default', 'file', or 'override'.
    """
    provenance = {name: "default" for name in _FIELDS}
    values: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        for key, val in parse_config_text(text).items():
            values[key] = val
            provenance[key] = "file"
    if overrides:
        for key, raw in overrides.items():
            if key not in _FIELDS:
                raise ConfigError(f"unknown configuration key '{key}'")
            values[key] = coerce_value(key, raw) if isinstance(raw, str) else raw
            provenance[key] = "override"
    cfg = ScenarioConfig(**values)
    cfg.validate()
    return cfg, provenance
