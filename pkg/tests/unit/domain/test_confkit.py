"""Unit tests for configuration parsing, rendering and cross-file validation."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minipbx.domain.confkit import (
    ConfigPaths,
    ensure_valid,
    load_bundle,
    parse_chap_secrets,
    parse_extensions_conf,
    parse_pptpd_conf,
    parse_sip_conf,
    parse_voicemail_conf,
    serialize_chap_secrets,
    serialize_extensions_conf,
    serialize_pptpd_conf,
    serialize_sip_conf,
    serialize_voicemail_conf,
    validate_cross,
)
from minipbx.exceptions import ConfigParseError, ConfigValidationError
from minipbx.models.conf import (
    Credential,
    CredentialTable,
    MailboxEntry,
    OperationCall,
    PeerEntry,
    split_mailbox_ref,
)
from minipbx.models.enums import PeerType

SIP_CONF = """\
; office phones
[harish]
type=friend
host=dynamic
secret=1234
dtmfmode=rfc2833
context=office
mailbox=756@vmail
callerid=Harish <111>
"""

EXTENSIONS_CONF = """\
[office]
exten => 111,1,Dial(SIP/harish,20)
exten => 111,2,Hangup()
exten => 444,1,VoiceMailMain(756@vmail) ; main menu

[vmail]
exten => 444,1,VoiceMailMain(756@vmail)
"""

VOICEMAIL_CONF = """\
[vmail]
756 => 1234,username,username@domain.com
"""


class TestSipConf:
    """Tests for sip.conf parsing."""

    def test_parses_peer(self):
        peers = parse_sip_conf(SIP_CONF)
        assert len(peers) == 1
        peer = peers[0]
        assert peer.name == "harish"
        assert peer.type == PeerType.FRIEND
        assert peer.secret == "1234"
        assert peer.context == "office"
        assert peer.mailbox == "756@vmail"
        assert peer.auth_user == "harish"

    def test_unknown_keys_kept_as_extras(self):
        peer = parse_sip_conf(SIP_CONF)[0]
        assert peer.extras == (("callerid", "Harish <111>"),)

    def test_non_digit_secret_names_line(self):
        with pytest.raises(ConfigParseError) as exc_info:
            parse_sip_conf("[x]\nsecret=abc\n")
        assert exc_info.value.line == 2

    def test_duplicate_peer(self):
        with pytest.raises(ConfigParseError, match="Duplicate peer"):
            parse_sip_conf("[x]\nhost=dynamic\n[x]\nhost=dynamic\n")

    def test_setting_outside_section(self):
        with pytest.raises(ConfigParseError, match="outside"):
            parse_sip_conf("host=dynamic\n")

    def test_malformed_mailbox(self):
        with pytest.raises(ConfigParseError, match="mailbox"):
            parse_sip_conf("[x]\nmailbox=abc\n")

    def test_unknown_type(self):
        with pytest.raises(ConfigParseError, match="peer type"):
            parse_sip_conf("[x]\ntype=gateway\n")

    def test_render_reads_back(self):
        peers = parse_sip_conf(SIP_CONF)
        assert parse_sip_conf(serialize_sip_conf(peers)) == peers


class TestExtensionsConf:
    """Tests for extensions.conf parsing."""

    def test_contexts_in_file_order(self):
        doc = parse_extensions_conf(EXTENSIONS_CONF)
        assert doc.context_names() == ["office", "vmail"]
        first = doc.lines("office")[0]
        assert (first.exten, first.priority) == ("111", 1)
        assert first.operation == OperationCall("Dial", "SIP/harish,20")
        assert first.operation.arg_list() == ["SIP/harish", "20"]

    def test_trailing_comment_dropped(self):
        doc = parse_extensions_conf(EXTENSIONS_CONF)
        assert doc.lines("office")[2].operation == OperationCall("VoiceMailMain", "756@vmail")

    def test_spaced_fields_and_trailing_semicolon(self):
        doc = parse_extensions_conf("[c]\nexten => 111 , 1, Operation();\n")
        line = doc.lines("c")[0]
        assert (line.exten, line.priority) == ("111", 1)
        assert line.operation == OperationCall("Operation", "")
        assert not line.operation.is_known

    def test_non_digit_extension_rejected(self):
        with pytest.raises(ConfigParseError, match="digits"):
            parse_extensions_conf("[a]\nexten => s,1,Hangup()\n")

    def test_exten_outside_context(self):
        with pytest.raises(ConfigParseError, match="outside"):
            parse_extensions_conf("exten => 1,1,Hangup()\n")

    def test_unbalanced_parentheses(self):
        with pytest.raises(ConfigParseError) as exc_info:
            parse_extensions_conf("[a]\n\nexten => 1,1,Dial(SIP/x\n")
        assert exc_info.value.line == 3

    def test_render_reads_back(self):
        doc = parse_extensions_conf(EXTENSIONS_CONF)
        assert parse_extensions_conf(serialize_extensions_conf(doc)).contexts == doc.contexts


class TestVoicemailConf:
    """Tests for voicemail.conf parsing."""

    def test_parses_mailbox(self):
        boxes = parse_voicemail_conf(VOICEMAIL_CONF)
        entry = boxes["vmail"][0]
        assert entry.mailbox == "756"
        assert entry.password == "1234"
        assert entry.display_name == "username"
        assert entry.email == "username@domain.com"

    def test_missing_field(self):
        with pytest.raises(ConfigParseError, match="missing"):
            parse_voicemail_conf("[vmail]\n756 => 1234,username\n")

    def test_duplicate_mailbox(self):
        with pytest.raises(ConfigParseError, match="Duplicate mailbox"):
            parse_voicemail_conf("[v]\n1 => 1,a,a@b\n1 => 2,b,b@c\n")

    def test_render_reads_back(self):
        boxes = parse_voicemail_conf(VOICEMAIL_CONF)
        assert parse_voicemail_conf(serialize_voicemail_conf(boxes)) == boxes

    @pytest.mark.parametrize("name", ["Doe, John", "Doe; John", "Doe\nJohn"])
    def test_delimiter_in_name_refused(self, name):
        with pytest.raises(ValueError, match="delimiter"):
            MailboxEntry("756", "1234", name, "doe@domain.com")

    def test_delimiter_inside_parentheses_refused_on_parse(self):
        with pytest.raises(ConfigParseError, match="delimiter") as exc_info:
            parse_voicemail_conf("[vmail]\n756 => 1234, Doe (a;b), doe@domain.com\n")
        assert exc_info.value.line == 2

    def test_rendered_fields_read_back(self):
        boxes = {"vmail": [MailboxEntry("756", "1234", "John Doe (desk)", "doe@domain.com")]}
        assert parse_voicemail_conf(serialize_voicemail_conf(boxes)) == boxes


class TestTunnelFiles:
    """Tests for pptpd.conf and chap-secrets."""

    def test_pptpd_pool(self):
        config = parse_pptpd_conf("localip 192.168.100.37\nremoteip 192.168.100.10-192.168.100.20\n")
        assert config.pool_size == 11
        assert config.pool[0] == "192.168.100.10"
        assert config.pool[-1] == "192.168.100.20"

    def test_pptpd_short_range(self):
        config = parse_pptpd_conf("localip 10.0.0.1\nremoteip 10.0.0.5-7\n")
        assert config.pool == ["10.0.0.5", "10.0.0.6", "10.0.0.7"]

    def test_localip_inside_pool_rejected(self):
        with pytest.raises(ConfigParseError, match="inside"):
            parse_pptpd_conf("localip 10.0.0.6\nremoteip 10.0.0.5-10.0.0.7\n")

    def test_missing_localip(self):
        with pytest.raises(ConfigParseError, match="localip"):
            parse_pptpd_conf("remoteip 10.0.0.5-10.0.0.7\n")

    def test_chap_secrets(self):
        table = parse_chap_secrets("# comment\nharish * 1234 *\nbob pptpd bobpass 10.0.0.9\n")
        assert table.lookup("harish").secret == "1234"
        assert table.lookup("bob").address == "10.0.0.9"
        assert table.lookup("carol") is None

    def test_chap_duplicate_user(self):
        with pytest.raises(ConfigParseError, match="Duplicate user"):
            parse_chap_secrets("a * 1 *\na * 2 *\n")

    def test_tunnel_files_render_back(self):
        config = parse_pptpd_conf("localip 10.0.0.1\nremoteip 10.0.0.5-10.0.0.7\n")
        assert parse_pptpd_conf(serialize_pptpd_conf(config)) == config
        table = parse_chap_secrets('harish * "12 34" *\n')
        assert parse_chap_secrets(serialize_chap_secrets(table)) == table

    def test_chap_secret_keeps_semicolon(self):
        table = parse_chap_secrets("harish * 12;34 *\nbob * pw 10.0.0.9 # desk\n")
        assert table.lookup("harish").secret == "12;34"
        assert table.lookup("bob").address == "10.0.0.9"

    @pytest.mark.parametrize("secret", ["a;b", "a #b", "; x", "#x"])
    def test_chap_delimiters_render_back(self, secret):
        table = CredentialTable([Credential("harish", secret)])
        assert parse_chap_secrets(serialize_chap_secrets(table)) == table

    def test_chap_line_break_refused(self):
        with pytest.raises(ValueError, match="line break"):
            serialize_chap_secrets(CredentialTable([Credential("harish", "a\nb")]))


class TestCrossValidation:
    """Tests for validate_cross and the bundle loader."""

    def codes(self, report) -> set[str]:
        return {issue.code for issue in report.issues}

    def test_consistent_set_is_ok(self):
        report = validate_cross(
            parse_sip_conf(SIP_CONF), parse_extensions_conf(EXTENSIONS_CONF), parse_voicemail_conf(VOICEMAIL_CONF)
        )
        assert report.ok
        assert report.issues == []

    def test_unmatched_context(self):
        doc = parse_extensions_conf(EXTENSIONS_CONF + "\n[lobby]\nexten => 1,1,Hangup()\n")
        report = validate_cross(parse_sip_conf(SIP_CONF), doc, parse_voicemail_conf(VOICEMAIL_CONF))
        assert not report.ok
        assert "UNMATCHED_CONTEXT" in self.codes(report)

    def test_missing_peer_mailbox(self):
        report = validate_cross(parse_sip_conf(SIP_CONF), parse_extensions_conf(EXTENSIONS_CONF), {})
        assert not report.ok
        assert "MISSING_MAILBOX" in self.codes(report)

    def test_bad_mailbox_reference(self):
        doc = parse_extensions_conf("[office]\nexten => 1,1,VoiceMailMain(mainmenu)\n")
        report = validate_cross(parse_sip_conf(SIP_CONF), doc, parse_voicemail_conf(VOICEMAIL_CONF))
        assert "BAD_MAILBOX_REF" in self.codes(report)

    def test_warnings_do_not_fail(self):
        doc = parse_extensions_conf("[office]\nexten => 1,1,Dial(SIP/nobody)\nexten => 2,1,Echo()\n")
        report = validate_cross(parse_sip_conf(SIP_CONF), doc, parse_voicemail_conf(VOICEMAIL_CONF))
        assert report.ok
        assert self.codes(report) == {"UNKNOWN_DIAL_TARGET", "UNKNOWN_OPERATION"}

    def test_bundled_configs_load(self, config_paths):
        bundle = ensure_valid(load_bundle(config_paths))
        assert [p.name for p in bundle.peers] == ["harish", "bob", "student"]
        assert bundle.tunnel.localip == "192.168.100.37"
        assert bundle.credentials.lookup("bob").secret == "bobpass"

    def test_single_tunnel_file_rejected(self, config_paths):
        config_paths.chap = None
        with pytest.raises(ValueError, match="together"):
            load_bundle(config_paths)

    def test_ensure_valid_raises(self, tmp_path, config_paths):
        broken = tmp_path / "voicemail.conf"
        broken.write_text("[vmail]\n999 => 1,x,x@y\n")
        config_paths.voicemail = str(broken)
        with pytest.raises(ConfigValidationError) as exc_info:
            ensure_valid(load_bundle(config_paths))
        assert exc_info.value.exit_code == 2

    def test_config_paths_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="Unknown config kind"):
            ConfigPaths().set("queues", "x")

    def test_split_mailbox_ref(self):
        assert split_mailbox_ref("756@vmail") == ("756", "vmail")
        with pytest.raises(ValueError):
            split_mailbox_ref("vmail")


PEERS = [
    PeerEntry("harish", secret="1234", context="office", mailbox="756@vmail"),
    PeerEntry("bob", secret="4321", context="office", mailbox="900@vmail"),
    PeerEntry("student", context="school", mailbox="12@nowhere"),
    PeerEntry("lobby", context="lobby"),
]
MIXED_PLAN = """\
[office]
exten => 111,1,Dial(SIP/harish,20)
exten => 112,1,Dial(SIP/carol)
exten => 444,1,VoiceMailMain(756@vmail)
exten => 445,1,VoiceMailMain(mainmenu)
[school]
exten => 301,1,Conference(7)
[attic]
exten => 1,1,Hangup()
"""


class TestCrossValidationOrder:
    """The report is a function of the documents, not of their order."""

    @given(st.permutations(PEERS))
    def test_peer_order_irrelevant(self, peers):
        doc = parse_extensions_conf(MIXED_PLAN)
        boxes = parse_voicemail_conf(VOICEMAIL_CONF)
        expected = validate_cross(PEERS, doc, boxes)
        assert validate_cross(list(peers), doc, boxes) == expected
        assert {issue.code for issue in expected.issues} == {
            "UNMATCHED_CONTEXT",
            "MISSING_MAILBOX",
            "BAD_MAILBOX_REF",
            "UNKNOWN_OPERATION",
            "UNKNOWN_DIAL_TARGET",
        }
