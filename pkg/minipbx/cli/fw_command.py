"""CLI commands for the packet filter chain."""

import typer

from minipbx.cli.errors import exit_on_error
from minipbx.handlers.fw_handler import FwHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer

fw_app = typer.Typer(name="fw", help="Inspect and edit the INPUT chain")

_STATE = typer.Option(None, "--state", help="Admin state file (default: workspace)")


def _handler() -> FwHandler:
    return FwHandler(FileSystem(), YAMLSerializer(), OutputFormatter())


def _tokens(proto: str | None, dport: int | None, src: str | None, jump: str) -> list[str]:
    tokens = []
    if proto:
        tokens += ["-p", proto]
    if dport is not None:
        tokens += ["--dport", str(dport)]
    if src:
        tokens += ["-s", src]
    return tokens + ["-j", jump]


@fw_app.command("list")
def fw_list(
    state: str = _STATE,
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """List the chain in `iptables -S` form, head first."""
    with exit_on_error():
        typer.echo(_handler().list_rules(state, format))


@fw_app.command("insert")
def fw_insert(
    proto: str = typer.Option(None, "-p", "--proto", help="tcp, udp, icmp or all"),
    dport: int = typer.Option(None, "--dport", help="Destination port (tcp/udp only)"),
    src: str = typer.Option(None, "-s", "--src", help="Source address or network"),
    jump: str = typer.Option(..., "-j", "--jump", help="ACCEPT, DROP or REJECT"),
    state: str = _STATE,
):
    """Insert a rule at the head of the chain (iptables -I).

    Examples:
        pbxctl fw insert -p udp --dport 5060 -j ACCEPT
    """
    with exit_on_error():
        typer.echo(_handler().insert(_tokens(proto, dport, src, jump), state))


@fw_app.command("append")
def fw_append(
    proto: str = typer.Option(None, "-p", "--proto", help="tcp, udp, icmp or all"),
    dport: int = typer.Option(None, "--dport", help="Destination port (tcp/udp only)"),
    src: str = typer.Option(None, "-s", "--src", help="Source address or network"),
    jump: str = typer.Option(..., "-j", "--jump", help="ACCEPT, DROP or REJECT"),
    state: str = _STATE,
):
    """Append a rule at the tail of the chain (iptables -A)."""
    with exit_on_error():
        typer.echo(_handler().append(_tokens(proto, dport, src, jump), state))


@fw_app.command("delete")
def fw_delete(
    proto: str = typer.Option(None, "-p", "--proto", help="tcp, udp, icmp or all"),
    dport: int = typer.Option(None, "--dport", help="Destination port (tcp/udp only)"),
    src: str = typer.Option(None, "-s", "--src", help="Source address or network"),
    jump: str = typer.Option(..., "-j", "--jump", help="ACCEPT, DROP or REJECT"),
    state: str = _STATE,
):
    """Delete every rule equal to the given one (iptables -D).

    Deleting a blacklisted source's DROP also clears its blacklist entry.
    """
    with exit_on_error():
        typer.echo(_handler().delete(_tokens(proto, dport, src, jump), state))
