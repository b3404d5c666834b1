"""Scenario files: parsing, execution under the virtual clock, artifacts.

A scenario is line oriented. Header directives configure the run, timed
steps drive phones and attackers:

    NAME happy-call
    CONFIG sip configs/sip.conf
    SETTING rate_threshold 10
    SEED student 1001 1234 87
    SEED grant "GRANT SELECT ON school.attendance TO 'ivr'@'127.0.0.1'"
    PHONE harish 192.168.100.50 5060 vpn=harish:1234
    AT 0 register harish
    AT 2 call harish 112
    AT 30 assert calls_completed == 1

Blank lines and lines starting with ``#`` are ignored. Arguments are split
shell-style so quoted statements stay one argument.
"""

import logging
import operator
import os
import shlex
from dataclasses import dataclass, field
from pathlib import Path

from minipbx.constants import (
    ALERT_LOG_FILE,
    MAIL_JOURNAL_FILE,
    METRICS_FILE,
    STATE_FILE,
    VOICEMAIL_JOURNAL_FILE,
)
from minipbx.domain.acl import AttendanceStore, parse_statement
from minipbx.domain.confkit import ConfigPaths, ensure_valid, load_bundle
from minipbx.domain.notify import write_journal
from minipbx.exceptions import (
    InvalidSettingsError,
    MiniPbxError,
    ScenarioAssertionError,
    ScenarioParseError,
    StatementParseError,
)
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.models.acl import GrantStatement
from minipbx.models.config import Settings

from .attacks import generate_attack, launch
from .bootstrap import Pbx, build_pbx
from .metrics import RunMetrics

logger = logging.getLogger(__name__)

STEP_VERBS = (
    "register",
    "call",
    "answer",
    "bye",
    "dtmf",
    "media",
    "vpn",
    "attack",
    "grant",
    "revoke",
    "unblock",
    "assert",
)

COMPARATORS = {
    "==": operator.eq,
    "!=": operator.ne,
    ">=": operator.ge,
    "<=": operator.le,
    ">": operator.gt,
    "<": operator.lt,
}

DRAIN_LIMIT = 1_000_000


@dataclass(frozen=True)
class PhoneSpec:
    peer: str
    address: str
    port: int
    vpn_user: str | None = None
    vpn_password: str | None = None


@dataclass(frozen=True)
class Step:
    at: float
    line: int
    verb: str
    args: tuple[str, ...] = ()


@dataclass
class Scenario:
    name: str
    path: str
    configs: ConfigPaths = field(default_factory=ConfigPaths)
    settings: list[tuple[str, str]] = field(default_factory=list)
    students: list[tuple[str, str, int]] = field(default_factory=list)
    grants: list[str] = field(default_factory=list)
    phones: list[PhoneSpec] = field(default_factory=list)
    steps: list[Step] = field(default_factory=list)


def parse_scenario(text: str, path: str = "<scenario>") -> Scenario:
    """Parse scenario text. CONFIG paths resolve against the file's directory.

    Raises:
        ScenarioParseError: Unknown directive or verb, bad argument, steps
            out of time order
    """
    base = Path(path).parent
    scenario = Scenario(name=Path(path).stem, path=path)

    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            words = shlex.split(stripped)
        except ValueError as e:
            raise ScenarioParseError(path, number, str(e)) from e
        keyword, args = words[0].upper(), words[1:]
        try:
            if keyword == "AT":
                step = _parse_step(args, number)
                if scenario.steps and step.at < scenario.steps[-1].at:
                    raise ValueError(f"step at {step.at:g} precedes step at {scenario.steps[-1].at:g}")
                scenario.steps.append(step)
            else:
                _parse_directive(scenario, keyword, args, base)
        except (ValueError, IndexError, StatementParseError) as e:
            raise ScenarioParseError(path, number, str(e) or f"missing argument to {keyword}") from e
    return scenario


def _parse_directive(scenario: Scenario, keyword: str, args: list[str], base: Path) -> None:
    if keyword == "NAME":
        scenario.name = args[0]
    elif keyword == "CONFIG":
        kind, location = args[0], args[1]
        scenario.configs.set(kind, str(base / location))
    elif keyword == "SETTING":
        scenario.settings.append((args[0], args[1]))
    elif keyword == "SEED":
        if args[0] == "student":
            scenario.students.append((args[1], args[2], int(args[3])))
        elif args[0] == "grant":
            parse_statement(args[1])
            scenario.grants.append(args[1])
        else:
            raise ValueError(f"Unknown SEED kind {args[0]!r}")
    elif keyword == "PHONE":
        vpn_user = vpn_password = None
        for option in args[3:]:
            name, _, value = option.partition("=")
            if name != "vpn" or ":" not in value:
                raise ValueError(f"Unknown PHONE option {option!r}")
            vpn_user, _, vpn_password = value.partition(":")
        scenario.phones.append(PhoneSpec(args[0], args[1], int(args[2]), vpn_user, vpn_password))
    else:
        raise ValueError(f"Unknown directive {keyword!r}")


def _parse_step(args: list[str], number: int) -> Step:
    at = float(args[0])
    verb = args[1].lower()
    if verb not in STEP_VERBS:
        raise ValueError(f"Unknown verb {verb!r}")
    return Step(at, number, verb, tuple(args[2:]))


@dataclass
class RunResult:
    name: str
    metrics: RunMetrics
    pbx: Pbx
    failure: ScenarioAssertionError | None = None

    @property
    def exit_code(self) -> int:
        return 0 if self.failure is None else self.failure.exit_code

    @property
    def alert_lines(self) -> list[str]:
        return self.pbx.sentinel.alert_log()


class ScenarioRunner:
    """Builds a PBX for a scenario and plays its steps in time order."""

    def __init__(
        self,
        scenario: Scenario,
        settings: Settings | None = None,
        filesystem: FileSystem | None = None,
    ):
        self.scenario = scenario
        self.fs = filesystem or FileSystem()
        self.settings = settings or Settings.get_default()
        self.pbx: Pbx | None = None

    def build(self) -> Pbx:
        """Load configs and wire the PBX.

        Raises:
            ConfigParseError: Malformed config file
            ConfigValidationError: Cross-file validation failed
            InvalidSettingsError: Bad SETTING line
        """
        bundle = ensure_valid(load_bundle(self.scenario.configs, self.fs))
        settings = self.settings
        for key, value in self.scenario.settings:
            try:
                settings = settings.override(key, value)
            except ValueError as e:
                raise InvalidSettingsError(f"SETTING {key}: {e}") from e

        store = AttendanceStore()
        for student_id, password, attendance in self.scenario.students:
            store.add(student_id, password, attendance)

        pbx = build_pbx(bundle, settings, store=store)
        for statement in self.scenario.grants:
            for warning in pbx.grants.apply(parse_statement(statement)):
                logger.warning("SEED grant: %s", warning)
        for spec in self.scenario.phones:
            pbx.add_phone(spec.peer, spec.address, spec.port, spec.vpn_user, spec.vpn_password)
        self.pbx = pbx
        return pbx

    def run(self) -> RunResult:
        pbx = self.pbx or self.build()
        pbx.start()
        failure = None
        try:
            for step in self.scenario.steps:
                pbx.clock.run_until(step.at)
                self._execute(pbx, step)
            pbx.clock.run(DRAIN_LIMIT)
        except ScenarioAssertionError as e:
            failure = e
            logger.error("%s", e)
        finally:
            pbx.stop()
            pbx.clock.run(DRAIN_LIMIT)
        metrics = pbx.finalize_metrics()
        return RunResult(self.scenario.name, metrics, pbx, failure)

    def _execute(self, pbx: Pbx, step: Step) -> None:
        args = step.args
        try:
            handler = getattr(self, f"_step_{step.verb}")
            handler(pbx, step, list(args))
        except ScenarioAssertionError:
            raise
        except (IndexError, ValueError, KeyError, MiniPbxError) as e:
            raise ScenarioAssertionError(step.at, step.line, f"{step.verb}: {e}") from e

    def _phone(self, pbx: Pbx, name: str):
        phone = pbx.phones.get(name)
        if phone is None:
            raise ValueError(f"no PHONE declared for {name}")
        return phone

    def _step_register(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        self._phone(pbx, args[0]).register(args[1] if len(args) > 1 else None)

    def _step_call(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        dtmf = None
        for option in args[2:]:
            name, _, value = option.partition("=")
            if name != "dtmf":
                raise ValueError(f"unknown call option {option!r}")
            dtmf = value
        self._phone(pbx, args[0]).call_exten(args[1], dtmf)

    def _step_answer(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        self._phone(pbx, args[0]).answer()

    def _step_bye(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        self._phone(pbx, args[0]).bye()

    def _step_dtmf(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        self._phone(pbx, args[0]).dtmf(args[1])

    def _step_media(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        self._phone(pbx, args[0]).media(int(args[1]))

    def _step_vpn(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        self._phone(pbx, args[0]).vpn()

    def _step_attack(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        packets = generate_attack(args[1], args[2:], args[0], pbx.settings.server_address)
        launch(pbx.network, pbx.clock, args[0], packets)

    def _step_grant(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        statement = parse_statement(args[0])
        if not isinstance(statement, GrantStatement):
            raise ValueError("grant step needs a GRANT statement")
        self._apply(pbx, statement)

    def _step_revoke(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        statement = parse_statement(args[0])
        if isinstance(statement, GrantStatement):
            raise ValueError("revoke step needs a REVOKE statement")
        self._apply(pbx, statement)

    @staticmethod
    def _apply(pbx: Pbx, statement) -> None:
        for warning in pbx.grants.apply(statement):
            logger.warning("%s", warning)

    def _step_unblock(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        pbx.sentinel.unblock(args[0], pbx.clock.now)

    def _step_assert(self, pbx: Pbx, step: Step, args: list[str]) -> None:
        ok, detail = self.check(pbx, args)
        if not ok:
            raise ScenarioAssertionError(step.at, step.line, detail)

    @staticmethod
    def check(pbx: Pbx, args: list[str]) -> tuple[bool, str]:
        """Evaluate one assertion. Returns (holds, description)."""
        now = pbx.clock.now
        kind = args[0]
        if kind == "blacklisted":
            return pbx.sentinel.is_blacklisted(args[1]), f"{args[1]} is not blacklisted"
        if kind == "not-blacklisted":
            return not pbx.sentinel.is_blacklisted(args[1]), f"{args[1]} is blacklisted"
        if kind == "registered":
            return pbx.registrar.lookup(args[1], now) is not None, f"{args[1]} is not registered"
        if kind == "heard":
            transcript = pbx.switchboard.transcript_of(args[1])
            heard = any(args[2] in entry for entry in transcript)
            return heard, f"{args[1]} did not hear {args[2]!r} (heard {', '.join(transcript) or 'nothing'})"

        key, op, expected = args[0], args[1], int(args[2])
        if op not in COMPARATORS:
            raise ValueError(f"unknown comparator {op!r}")
        actual = pbx.finalize_metrics().value(key)
        return COMPARATORS[op](actual, expected), f"{key} is {actual}, expected {op} {expected}"


def load_scenario(path: str, filesystem: FileSystem | None = None) -> Scenario:
    fs = filesystem or FileSystem()
    return parse_scenario(fs.read_file(path), path)


def run_scenario(path: str, settings: Settings | None = None, filesystem: FileSystem | None = None) -> RunResult:
    """Parse, validate the referenced configs, then play the scenario.

    Raises:
        ScenarioParseError: Malformed scenario
        ConfigParseError: Malformed config file
        ConfigValidationError: Config validation failed, no step runs
    """
    scenario = load_scenario(path, filesystem)
    return ScenarioRunner(scenario, settings, filesystem).run()


def write_artifacts(result: RunResult, out_dir: str, filesystem: FileSystem | None = None) -> list[str]:
    """Write the deterministic run artifacts and the final admin state."""
    fs = filesystem or FileSystem()
    yaml = YAMLSerializer()
    pbx = result.pbx
    fs.ensure_dir(out_dir)

    alert_path = os.path.join(out_dir, ALERT_LOG_FILE)
    fs.write_file_atomic(alert_path, "".join(f"{line}\n" for line in result.alert_lines))

    mail_path = os.path.join(out_dir, MAIL_JOURNAL_FILE)
    write_journal(mail_path, pbx.notifier.drain())

    voicemail_path = os.path.join(out_dir, VOICEMAIL_JOURNAL_FILE)
    fs.write_file_atomic(voicemail_path, "".join(f"{line}\n" for line in pbx.mailboxes.journal_lines()))

    metrics_path = os.path.join(out_dir, METRICS_FILE)
    fs.write_file_atomic(metrics_path, yaml.dump_yaml(result.metrics.to_dict()))

    state_path = os.path.join(out_dir, STATE_FILE)
    fs.write_file_atomic(state_path, yaml.dump_yaml(pbx.to_state().to_dict()))

    return [alert_path, mail_path, voicemail_path, metrics_path, state_path]
