"""Service lifecycle: start in dependency order, stop in reverse."""

import logging
from collections.abc import Callable
from dataclasses import dataclass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Service:
    name: str
    start: Callable[[], None]
    stop: Callable[[], None]


def _noop() -> None:
    pass


class ServiceManager:
    def __init__(self, services: list[Service] | None = None):
        self.services = list(services or [])
        self.started: list[str] = []
        self.journal: list[str] = []

    def add(self, name: str, start: Callable[[], None] | None = None, stop: Callable[[], None] | None = None) -> None:
        self.services.append(Service(name, start or _noop, stop or _noop))

    def start_all(self) -> None:
        for service in self.services:
            if service.name in self.started:
                continue
            service.start()
            self.started.append(service.name)
            self.journal.append(f"start {service.name}")
            logger.info("Started %s", service.name)

    def stop_all(self) -> None:
        by_name = {service.name: service for service in self.services}
        for name in reversed(self.started):
            by_name[name].stop()
            self.journal.append(f"stop {name}")
            logger.info("Stopped %s", name)
        self.started.clear()
