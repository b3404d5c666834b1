"""Engine settings model for minipbx."""

from dataclasses import dataclass, field, fields

from .enums import EventKind, ResponsePolicy

# Base level per event kind before rate escalation.
DEFAULT_ALERT_LEVELS: dict[str, int] = {
    EventKind.AUTH_FAILURE.value: 5,
    EventKind.UNKNOWN_USER.value: 9,
    EventKind.REGISTER_ATTEMPT.value: 2,
    EventKind.REGISTER_SUCCESS.value: 3,
    EventKind.PORT_PROBE.value: 8,
    EventKind.CONFIG_ERROR.value: 4,
    EventKind.INTEGRITY_WARNING.value: 11,
    EventKind.ACCESS_DENIED.value: 5,
    EventKind.MALFORMED_PACKET.value: 6,
    EventKind.GENERIC.value: 2,
}

# MYSQL(name) templates: "ivr" runs the attendance IVR, "lookup" binds
# ATTENDANCE for the student id held in register ID.
DEFAULT_QUERY_TEMPLATES: dict[str, str] = {
    "attendance": "ivr",
    "attendance_lookup": "lookup",
}


@dataclass
class Settings:
    """Tunables of one PBX instance.

    Attributes:
        sip_port: UDP port the SIP server listens on
        server_address: Address the server answers from
        registration_expiry: Seconds a registration stays valid
        dial_timeout: Default Dial() ring timeout in seconds
        read_timeout: Inter-digit timeout for Read() in seconds
        step_budget: Interpreter steps allowed per call
        retry_cap: Failed IVR logins before hang-up
        rate_threshold: Requests per window a source may send
        rate_window: Sliding window length in seconds
        flood_multiplier: Multiple of the threshold escalating to level 15
        response_policy: rate or auto
        log_alert_level: Lowest level written to the alert log
        alert_levels: Base level per event kind
        admin_email: Recipient of admin alerts
        ivr_principal: Database principal the IVR queries as
        attendance_table: Object the IVR reads attendance from
        query_templates: MYSQL() template name to mode
        guest_context: Context for calls from unregistered sources
        rtp_port_start: First RTP port handed to calls
        seed: Seed of the run's pseudo-random source
    """

    sip_port: int = 5060
    server_address: str = "192.168.100.37"
    registration_expiry: int = 3600
    dial_timeout: float = 20.0
    read_timeout: float = 5.0
    step_budget: int = 10_000
    retry_cap: int = 3
    rate_threshold: int = 10
    rate_window: float = 60.0
    flood_multiplier: int = 5
    response_policy: ResponsePolicy = ResponsePolicy.RATE
    log_alert_level: int = 1
    alert_levels: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_ALERT_LEVELS))
    admin_email: str = "admin@minipbx.local"
    ivr_principal: str = "ivr@127.0.0.1"
    attendance_table: str = "school.attendance"
    query_templates: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_QUERY_TEMPLATES)
    )
    guest_context: str | None = None
    rtp_port_start: int = 10000
    seed: int = 5060

    def __post_init__(self):
        if self.retry_cap < 1:
            raise ValueError(f"retry_cap must be >= 1, got {self.retry_cap}")
        if self.rtp_port_start % 2:
            raise ValueError("rtp_port_start must be even")
        for kind, level in self.alert_levels.items():
            EventKind(kind)
            if not 0 <= level <= 15:
                raise ValueError(f"Alert level for {kind} out of range: {level}")
        for name, mode in self.query_templates.items():
            if mode not in ("ivr", "lookup"):
                raise ValueError(f"Query template {name}: unknown mode {mode!r}")

    def to_dict(self) -> dict:
        """Convert to dictionary for YAML serialization.

        Returns:
            Dictionary with sorted map keys for deterministic YAML output.
        """
        data = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, ResponsePolicy):
                value = value.value
            elif isinstance(value, dict):
                value = dict(sorted(value.items()))
            data[f.name] = value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Settings":
        """Create Settings from a dictionary, unknown keys rejected.

        Raises:
            ValueError: For unknown keys or invalid values
        """
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ValueError(f"Unknown setting(s): {', '.join(unknown)}")
        kwargs = {}
        for key, value in data.items():
            kwargs[key] = coerce_setting(key, value)
        if "alert_levels" in kwargs:
            kwargs["alert_levels"] = {**DEFAULT_ALERT_LEVELS, **kwargs["alert_levels"]}
        return cls(**kwargs)

    @classmethod
    def get_default(cls) -> "Settings":
        return cls()

    def override(self, key: str, value) -> "Settings":
        """Copy with one setting replaced (scenario SETTING lines).

        Map entries are addressed with a dotted key, e.g.
        ``alert_levels.port-probe``.
        """
        data = self.to_dict()
        if "." in key:
            map_key, _, entry = key.partition(".")
            if map_key not in ("alert_levels", "query_templates"):
                raise ValueError(f"Unknown setting: {key}")
            data[map_key] = {**data[map_key], entry: value}
        else:
            data[key] = value
        return Settings.from_dict(data)


_INT_KEYS = {
    "sip_port",
    "registration_expiry",
    "step_budget",
    "retry_cap",
    "rate_threshold",
    "flood_multiplier",
    "log_alert_level",
    "rtp_port_start",
    "seed",
}
_FLOAT_KEYS = {"dial_timeout", "read_timeout", "rate_window"}


def coerce_setting(key: str, value):
    """Convert a raw YAML or command-line value to the setting's type.

    Raises:
        ValueError: If the key is unknown or the value does not convert
    """
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key == "response_policy":
        return ResponsePolicy(value.value if isinstance(value, ResponsePolicy) else value)
    if key in ("alert_levels", "query_templates"):
        if not isinstance(value, dict):
            raise ValueError(f"{key} must be a mapping")
        return {str(k): (int(v) if key == "alert_levels" else str(v)) for k, v in value.items()}
    if key == "guest_context":
        return None if value in (None, "", "none") else str(value)
    if key in ("server_address", "admin_email", "ivr_principal", "attendance_table"):
        return str(value)
    raise ValueError(f"Unknown setting: {key}")
