"""Compile a parsed extensions.conf into an executable plan."""

import logging
from dataclasses import dataclass, field

from minipbx.exceptions import DialplanCompileError
from minipbx.models.conf import DialplanDoc, OperationCall, ValidationReport

logger = logging.getLogger(__name__)

Step = tuple[int, OperationCall]


@dataclass(frozen=True)
class Dialplan:
    """(context, exten) -> priority-sorted operations."""

    index: dict[tuple[str, str], tuple[Step, ...]] = field(default_factory=dict)

    def contexts(self) -> list[str]:
        seen: list[str] = []
        for context, _ in self.index:
            if context not in seen:
                seen.append(context)
        return seen

    def extensions(self, context: str) -> list[str]:
        return [exten for ctx, exten in self.index if ctx == context]

    def has(self, context: str, exten: str, priority: int | None = None) -> bool:
        steps = self.index.get((context, exten))
        if steps is None:
            return False
        return priority is None or any(p == priority for p, _ in steps)

    def steps(self, context: str, exten: str) -> tuple[Step, ...]:
        return self.index.get((context, exten), ())

    def first_priority(self, context: str, exten: str) -> int | None:
        steps = self.steps(context, exten)
        return steps[0][0] if steps else None

    def next_priority(self, context: str, exten: str, priority: int) -> int | None:
        for p, _ in self.steps(context, exten):
            if p > priority:
                return p
        return None

    def operation(self, context: str, exten: str, priority: int) -> OperationCall | None:
        for p, op in self.steps(context, exten):
            if p == priority:
                return op
        return None

    def __len__(self) -> int:
        return sum(len(steps) for steps in self.index.values())


def compile_plan(doc: DialplanDoc, report: ValidationReport | None = None) -> Dialplan:
    """Index the document by (context, exten), priorities ascending.

    Raises:
        DialplanCompileError: If the report carries errors or a
            (context, exten, priority) appears twice
    """
    if report is not None and not report.ok:
        raise DialplanCompileError(
            f"Refusing to compile: validation reported {len(report.errors)} error(s)"
        )

    buckets: dict[tuple[str, str], list[Step]] = {}
    for context, line in doc.all_lines():
        bucket = buckets.setdefault((context, line.exten), [])
        if any(priority == line.priority for priority, _ in bucket):
            raise DialplanCompileError(
                f"Duplicate priority {line.priority} for {line.exten} in [{context}]"
                f" (line {line.line_number})"
            )
        bucket.append((line.priority, line.operation))

    index = {key: tuple(sorted(steps, key=lambda s: s[0])) for key, steps in buckets.items()}
    logger.debug("compiled %d extensions", len(index))
    return Dialplan(index)


def render_plan(plan: Dialplan) -> list[str]:
    """Text dump used by `pbxctl plan show`."""
    lines = []
    for context in plan.contexts():
        lines.append(f"[{context}]")
        for exten in plan.extensions(context):
            for priority, op in plan.steps(context, exten):
                lines.append(f"  {exten:>6} {priority:>3}  {op}")
    return lines
