"""Configuration dialect parsing, rendering and cross-file validation."""

from minipbx.domain.confkit.loader import ConfigBundle, ConfigPaths, ensure_valid, load_bundle
from minipbx.domain.confkit.parser import (
    parse_chap_secrets,
    parse_extensions_conf,
    parse_pptpd_conf,
    parse_sip_conf,
    parse_voicemail_conf,
    parse_vpn_config,
)
from minipbx.domain.confkit.serializer import (
    serialize_chap_secrets,
    serialize_extensions_conf,
    serialize_pptpd_conf,
    serialize_sip_conf,
    serialize_voicemail_conf,
)
from minipbx.domain.confkit.validator import validate_cross

__all__ = [
    "ConfigBundle",
    "ConfigPaths",
    "ensure_valid",
    "load_bundle",
    "parse_chap_secrets",
    "parse_extensions_conf",
    "parse_pptpd_conf",
    "parse_sip_conf",
    "parse_voicemail_conf",
    "parse_vpn_config",
    "serialize_chap_secrets",
    "serialize_extensions_conf",
    "serialize_pptpd_conf",
    "serialize_sip_conf",
    "serialize_voicemail_conf",
    "validate_cross",
]
