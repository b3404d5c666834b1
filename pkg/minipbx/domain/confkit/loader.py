"""Load and validate the full configuration set from disk."""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from minipbx.exceptions import ConfigValidationError
from minipbx.infra.filesystem import FileSystem
from minipbx.models.conf import (
    CredentialTable,
    DialplanDoc,
    MailboxEntry,
    PeerEntry,
    TunnelConfig,
    ValidationReport,
)

from .parser import (
    parse_chap_secrets,
    parse_extensions_conf,
    parse_pptpd_conf,
    parse_sip_conf,
    parse_voicemail_conf,
)
from .validator import validate_cross

logger = logging.getLogger(__name__)

CONFIG_KINDS = ("sip", "extensions", "voicemail", "pptpd", "chap")


@dataclass
class ConfigPaths:
    """Locations of the five configuration files. Tunnel files are optional."""

    sip: str | None = None
    extensions: str | None = None
    voicemail: str | None = None
    pptpd: str | None = None
    chap: str | None = None

    def set(self, kind: str, path: str) -> None:
        if kind not in CONFIG_KINDS:
            raise ValueError(f"Unknown config kind '{kind}' (expected one of {', '.join(CONFIG_KINDS)})")
        setattr(self, kind, path)


@dataclass
class ConfigBundle:
    """Every parsed document plus the cross-file report."""

    peers: list[PeerEntry] = field(default_factory=list)
    dialplan: DialplanDoc = field(default_factory=DialplanDoc)
    mailboxes: dict[str, list[MailboxEntry]] = field(default_factory=dict)
    tunnel: TunnelConfig | None = None
    credentials: CredentialTable = field(default_factory=CredentialTable)
    report: ValidationReport = field(default_factory=ValidationReport)

    def peer(self, name: str) -> PeerEntry | None:
        for peer in self.peers:
            if peer.name == name:
                return peer
        return None


def load_bundle(paths: ConfigPaths, fs: FileSystem | None = None) -> ConfigBundle:
    """Parse every configured file and run the cross-file validator.

    Raises:
        ConfigParseError: If any file is malformed
        ValueError: If only one of the two tunnel files is given
    """
    fs = fs or FileSystem()

    def read(path: str | None) -> str:
        return fs.read_file(path) if path else ""

    bundle = ConfigBundle(
        peers=parse_sip_conf(read(paths.sip), _label(paths.sip, "sip.conf")),
        dialplan=parse_extensions_conf(read(paths.extensions), _label(paths.extensions, "extensions.conf")),
        mailboxes=parse_voicemail_conf(read(paths.voicemail), _label(paths.voicemail, "voicemail.conf")),
    )
    if bool(paths.pptpd) != bool(paths.chap):
        raise ValueError("pptpd.conf and chap-secrets must be given together")
    if paths.pptpd:
        bundle.tunnel = parse_pptpd_conf(read(paths.pptpd), _label(paths.pptpd, "pptpd.conf"))
        bundle.credentials = parse_chap_secrets(read(paths.chap), _label(paths.chap, "chap-secrets"))

    bundle.report = validate_cross(bundle.peers, bundle.dialplan, bundle.mailboxes)
    logger.info(
        "Loaded %d peer(s), %d context(s), %d mailbox context(s)",
        len(bundle.peers),
        len(bundle.dialplan.contexts),
        len(bundle.mailboxes),
    )
    return bundle


def ensure_valid(bundle: ConfigBundle) -> ConfigBundle:
    """Stop startup on a failed report.

    Raises:
        ConfigValidationError: If the report carries an error
    """
    if not bundle.report.ok:
        raise ConfigValidationError(bundle.report)
    return bundle


def _label(path: str | None, default: str) -> str:
    return Path(path).name if path else default
