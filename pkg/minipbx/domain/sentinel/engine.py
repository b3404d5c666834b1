"""Sentinel: the IDS/IPS actor tying classifier, detector and responder."""

import logging
from collections import OrderedDict, deque

from minipbx.models.enums import ResponsePolicy
from minipbx.models.security import Alert, ResponseCommand, SecurityEvent

from .classifier import AUTO_RESPONSE_RULE, AlertClassifier
from .detector import RateDetector
from .response import ActiveResponder

logger = logging.getLogger(__name__)


class Sentinel:
    """Consumes the ordered event stream and keeps the alert log.

    With a history limit only the latest alerts and first-seen sources are
    kept; a forgotten source counts as first seen again.
    """

    def __init__(
        self,
        classifier: AlertClassifier,
        detector: RateDetector,
        responder: ActiveResponder,
        policy: ResponsePolicy = ResponsePolicy.RATE,
        log_level: int = 1,
        history_limit: int | None = None,
    ):
        self.classifier = classifier
        self.detector = detector
        self.responder = responder
        self.policy = policy
        self.log_level = log_level
        self.history_limit = history_limit
        self.alerts: deque[Alert] = deque(maxlen=history_limit)
        self.commands: deque[ResponseCommand] = deque(maxlen=history_limit)
        self._classified: OrderedDict[str, None] = OrderedDict()

    def observe_request(self, event: SecurityEvent) -> ResponseCommand | None:
        """Count a request toward its source's rate window.

        A fresh breach blacklists the source and logs the triggering
        request at the command's level.
        """
        command = self.detector.observe(event)
        if command is None:
            return None
        self._record(
            Alert(command.level, command.src, command.at, command.rule_id, f"rate exceeded: {command.reason}")
        )
        self._execute(command)
        return command

    def report(self, event: SecurityEvent) -> Alert:
        """Classify an outcome event. It is not counted toward the window."""
        count = self.detector.count(event.src, event.at)
        first_seen = event.src not in self._classified
        self._remember(event.src)
        alert = self.classifier.classify(event, count, first_seen)
        self._record(alert)
        if (
            self.policy == ResponsePolicy.AUTO
            and alert.actionable
            and event.src not in self.responder.blacklist
        ):
            self._execute(
                ResponseCommand(event.src, event.at, alert.level, AUTO_RESPONSE_RULE, alert.description)
            )
        return alert

    def unblock(self, src: str, at: float) -> Alert:
        alert = self.responder.unblock(src, at)
        self._record(alert)
        return alert

    def is_blacklisted(self, src: str) -> bool:
        return src in self.responder.blacklist

    def alert_log(self) -> list[str]:
        """Alert log lines at or above the log level. Level 0 is never logged."""
        floor = max(self.log_level, 1)
        return [alert.log_line() for alert in self.alerts if alert.level >= floor]

    def _remember(self, src: str) -> None:
        self._classified[src] = None
        self._classified.move_to_end(src)
        if self.history_limit is not None and len(self._classified) > self.history_limit:
            self._classified.popitem(last=False)

    def _execute(self, command: ResponseCommand) -> None:
        self.commands.append(command)
        duplicate = self.responder.execute(command)
        if duplicate is not None:
            self._record(duplicate)

    def _record(self, alert: Alert) -> None:
        self.alerts.append(alert)
        if alert.level > 0:
            logger.debug("alert %d from %s: %s", alert.level, alert.src, alert.description)
