"""Handler for pbxctl daemon command."""

import json
import logging

import typer

from minipbx.constants import DAEMON_HISTORY_LIMIT
from minipbx.domain.confkit import ConfigPaths, ensure_valid, load_bundle
from minipbx.exceptions import InvalidSettingsError, MiniPbxError, StateNotFoundError
from minipbx.handlers.base import BaseHandler
from minipbx.infra.filesystem import FileSystem
from minipbx.infra.output import OutputFormatter
from minipbx.infra.yaml_io import YAMLSerializer
from minipbx.runtime.bootstrap import Pbx, build_pbx
from minipbx.runtime.daemon import run_daemon

logger = logging.getLogger(__name__)

TRANSPORTS = ("udp", "sim")


class DaemonHandler(BaseHandler):
    """Builds a PBX from the five configuration files and serves it."""

    def build(
        self,
        paths: ConfigPaths,
        port: int | None = None,
        settings_path: str | None = None,
        state_path: str | None = None,
    ) -> Pbx:
        """Load, validate and wire.

        The admin state of the workspace (or --state) seeds the chain,
        blacklist and grants when one exists. Logs are capped at
        DAEMON_HISTORY_LIMIT entries.

        Raises:
            ConfigParseError: Malformed config file
            ConfigValidationError: Cross-file validation failed
        """
        bundle = ensure_valid(load_bundle(paths, self.fs))
        for issue in bundle.report.issues:
            if not issue.is_error:
                logger.warning("%s: %s", issue.location, issue.message)
        settings = self.load_settings(settings_path)
        if port is not None:
            try:
                settings = settings.override("sip_port", port)
            except ValueError as e:
                raise InvalidSettingsError(f"--port: {e}") from e
        try:
            state = self.state_manager(state_path).load_state()
        except StateNotFoundError:
            state = None
        return build_pbx(bundle, settings, state, history_limit=DAEMON_HISTORY_LIMIT)

    def handle(
        self,
        paths: ConfigPaths,
        port: int | None = None,
        host: str = "0.0.0.0",
        transport: str = "udp",
        settings_path: str | None = None,
        state_path: str | None = None,
        format: str = "text",
    ) -> str:
        """Serve on real sockets, or in sim mode start and stop the services once."""
        if transport not in TRANSPORTS:
            raise ValueError(f"Unknown transport {transport!r} (expected udp or sim)")
        pbx = self.build(paths, port, settings_path, state_path)
        if transport == "udp":
            run_daemon(pbx, host)
        else:
            pbx.start()
            pbx.stop()
        journal = pbx.services.journal
        if format == "json":
            return json.dumps({"transport": transport, "services": journal}, indent=2)
        return "\n".join(journal)


def daemon_command(
    sip_conf: str = typer.Option(..., "--sip-conf", help="sip.conf"),
    extensions_conf: str = typer.Option(..., "--extensions-conf", help="extensions.conf"),
    voicemail_conf: str = typer.Option(..., "--voicemail-conf", help="voicemail.conf"),
    pptpd_conf: str = typer.Option(None, "--pptpd-conf", help="pptpd.conf (enables the tunnel)"),
    chap_secrets: str = typer.Option(None, "--chap-secrets", help="chap-secrets (with --pptpd-conf)"),
    port: int = typer.Option(None, "--port", help="SIP port (default 5060)"),
    host: str = typer.Option("0.0.0.0", "--host", help="Address to bind"),
    transport: str = typer.Option("udp", "--transport", help="udp binds sockets; sim starts and stops once"),
    settings: str = typer.Option(None, "--settings", help="Settings file"),
    state: str = typer.Option(None, "--state", help="Admin state file"),
    format: str = typer.Option("text", "--format", help="Output format: text or json"),
):
    """Run the PBX on real UDP sockets until interrupted.

    Startup stops with exit status 2 when the configuration does not
    validate.
    """
    paths = ConfigPaths(
        sip=sip_conf,
        extensions=extensions_conf,
        voicemail=voicemail_conf,
        pptpd=pptpd_conf,
        chap=chap_secrets,
    )
    handler = DaemonHandler(FileSystem(), YAMLSerializer(), OutputFormatter())
    try:
        result = handler.handle(
            paths,
            port=port,
            host=host,
            transport=transport,
            settings_path=settings,
            state_path=state,
            format=format,
        )
    except MiniPbxError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=e.exit_code)
    except (ValueError, FileNotFoundError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=2)
    typer.echo(result)
