"""Handler for pbxctl plan commands."""

from pathlib import Path

from minipbx.domain.confkit import parse_extensions_conf
from minipbx.domain.dialplan import compile_plan, render_plan
from minipbx.handlers.base import BaseHandler


class PlanHandler(BaseHandler):
    """Compiles extensions.conf and dumps the plan for debugging."""

    def show(self, extensions_conf: str, context: str | None = None, format: str = "text") -> str:
        """
        Raises:
            ConfigParseError: Malformed extensions.conf
            DialplanCompileError: Duplicate priority
            ValueError: Unknown context
        """
        doc = parse_extensions_conf(self.fs.read_file(extensions_conf), Path(extensions_conf).name)
        plan = compile_plan(doc)
        lines = render_plan(plan)
        if context is not None:
            if context not in plan.contexts():
                raise ValueError(f"No context [{context}] in {extensions_conf}")
            header = f"[{context}]"
            start = lines.index(header)
            end = next(
                (n for n in range(start + 1, len(lines)) if lines[n].startswith("[")),
                len(lines),
            )
            lines = lines[start:end]
        return self.formatter.format_lines("plan", lines, format)
