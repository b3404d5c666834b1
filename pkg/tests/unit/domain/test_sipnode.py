"""Unit tests for SIP codec, digest authentication, registrar and call sessions."""

import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minipbx.domain.sipnode import (
    NonceIssuer,
    Registrar,
    can_apply,
    compute_digest,
    credentials_header,
    cseq_method,
    decode,
    encode,
    extract_uri,
    make_request,
    make_response,
    parse_digest_params,
    parse_uri,
    session_event,
)
from minipbx.exceptions import SipCodecError, SipProtocolError
from minipbx.models.conf import PeerEntry
from minipbx.models.enums import CallEvent, CallState, EventKind, SipMethod
from minipbx.models.sip import STATUS_REASONS, CallSession, SipMessage, SipUri

SERVER = SipUri("harish", "192.168.100.37")


def register(user: str = "harish", authorization: str | None = None, **kwargs) -> SipMessage:
    extra = [("Authorization", authorization)] if authorization else []
    return make_request(
        SipMethod.REGISTER,
        SipUri(user, "192.168.100.37"),
        from_uri=SipUri(user, "192.168.100.37"),
        to_uri=SipUri(user, "192.168.100.37"),
        call_id="reg-1@192.168.100.50",
        cseq=1,
        via="192.168.100.50:5060",
        contact=SipUri(user, "192.168.100.50", 5060),
        extra_headers=extra + kwargs.get("extra", []),
    )


HEADER_NAMES = ["Subject", "Allow", "User-Agent", "X-Trace", "Max-Forwards", "Content-Type"]
TOKEN = string.ascii_letters + string.digits
header_values = st.text(alphabet=TOKEN + " ;=<>@.:/-_", max_size=30).map(str.strip)


@st.composite
def sip_messages(draw) -> SipMessage:
    headers = [("Call-ID", draw(st.text(alphabet=TOKEN + "@.-", min_size=1, max_size=20)))]
    headers += draw(st.lists(st.tuples(st.sampled_from(HEADER_NAMES), header_values), max_size=6))
    body = draw(st.binary(max_size=64))
    if body:
        headers.append(("Content-Length", str(len(body))))
    if draw(st.booleans()):
        uri = SipUri(
            draw(st.text(alphabet=TOKEN, min_size=1, max_size=12)),
            draw(st.ip_addresses(v=4).map(str)),
            draw(st.none() | st.integers(min_value=1, max_value=65535)),
        )
        return SipMessage.request(draw(st.sampled_from(list(SipMethod))), uri, headers, body)
    return SipMessage.status(draw(st.sampled_from(sorted(STATUS_REASONS))), headers, body)


class TestDigest:
    """Tests for the nonce digest."""

    def test_known_digest(self):
        assert compute_digest("harish", "1234", "n1") == "ea44b42a54f2de87631d1e54f40db1ac"

    def test_empty_nonce_rejected(self):
        with pytest.raises(ValueError):
            compute_digest("harish", "1234", "")

    def test_params_parsed(self):
        params = parse_digest_params(credentials_header("harish", "abc", "ff00"))
        assert params == {"username": "harish", "nonce": "abc", "response": "ff00"}

    def test_non_digest_scheme(self):
        assert parse_digest_params("Basic aGFyaXNoOjEyMzQ=") == {}

    def test_nonces_never_repeat(self):
        issuer = NonceIssuer(seed=5060)
        nonces = [issuer.issue() for _ in range(500)]
        assert len(set(nonces)) == 500
        assert issuer.issued_count == 500

    def test_nonces_depend_on_seed_only(self):
        assert NonceIssuer(1).issue() == NonceIssuer(1).issue()
        assert NonceIssuer(1).issue() != NonceIssuer(2).issue()


class TestCodec:
    """Tests for the SIP text codec."""

    def test_request_round_trip(self):
        message = register()
        assert decode(encode(message)) == message

    def test_status_round_trip_with_body(self):
        message = SipMessage.status(200, [("Call-ID", "x"), ("Content-Length", "4")], b"v=0\n")
        assert decode(encode(message)) == message

    def test_wire_form(self):
        message = SipMessage.request(SipMethod.OPTIONS, SERVER, [("Call-ID", "c1")])
        assert encode(message) == b"OPTIONS sip:harish@192.168.100.37 SIP/2.0\r\nCall-ID: c1\r\n\r\n"

    def test_compact_and_case_insensitive_headers(self):
        message = decode(b"SIP/2.0 180 Ringing\r\ni: abc\r\nCSEQ: 2 INVITE\r\n\r\n")
        assert message.call_id == "abc"
        assert cseq_method(message) == SipMethod.INVITE

    def test_missing_blank_line(self):
        with pytest.raises(SipCodecError, match="blank line"):
            decode(b"OPTIONS sip:a@b SIP/2.0\r\nCall-ID: x\r\n")

    def test_unknown_method(self):
        with pytest.raises(SipCodecError, match="Unknown method"):
            decode(b"PUBLISH sip:a@b SIP/2.0\r\n\r\n")

    def test_unknown_status(self):
        with pytest.raises(SipCodecError, match="Unknown status"):
            decode(b"SIP/2.0 999 Odd\r\n\r\n")

    def test_content_length_mismatch(self):
        with pytest.raises(SipCodecError, match="Content-Length"):
            decode(b"SIP/2.0 200 OK\r\nContent-Length: 10\r\n\r\nabc")

    def test_duplicate_singleton_header(self):
        with pytest.raises(SipCodecError, match="Duplicate"):
            decode(b"SIP/2.0 200 OK\r\nCall-ID: a\r\ni: b\r\n\r\n")

    def test_header_line_break_rejected(self):
        message = SipMessage.request(SipMethod.OPTIONS, SERVER, [("Subject", "a\r\nb")])
        with pytest.raises(SipCodecError):
            encode(message)

    def test_parse_uri(self):
        assert parse_uri("sip:bob@192.168.100.51:5062") == SipUri("bob", "192.168.100.51", 5062)
        with pytest.raises(SipCodecError):
            parse_uri("sip:bob@host:70000")
        with pytest.raises(SipCodecError):
            parse_uri("tel:+3312")

    def test_extract_uri(self):
        assert extract_uri('"Harish" <sip:harish@10.0.0.1>;tag=9') == SipUri("harish", "10.0.0.1")

    def test_response_echoes_dialog_headers(self):
        request = register()
        response = make_response(request, 401, [("WWW-Authenticate", "Digest nonce=x")])
        assert response.code == 401
        assert response.reason == "Unauthorized"
        assert response.call_id == request.call_id
        assert response.header("Contact") is None
        assert cseq_method(response) == SipMethod.REGISTER

    def test_response_echoes_compact_dialog_headers(self):
        request = decode(
            b"REGISTER sip:harish@192.168.100.37 SIP/2.0\r\n"
            b"v: SIP/2.0/UDP 192.168.100.50:5060\r\n"
            b"f: <sip:harish@192.168.100.37>\r\n"
            b"t: <sip:harish@192.168.100.37>\r\n"
            b"i: reg-9@192.168.100.50\r\n"
            b"CSeq: 1 REGISTER\r\n"
            b"m: <sip:harish@192.168.100.50:5060>\r\n\r\n"
        )
        response = make_response(request, 401)
        assert response.header("Via") == "SIP/2.0/UDP 192.168.100.50:5060"
        assert response.header("From") == "<sip:harish@192.168.100.37>"
        assert response.header("To") == "<sip:harish@192.168.100.37>"
        assert response.call_id == "reg-9@192.168.100.50"
        assert response.header("Contact") is None
        assert len(response.headers) == 5

    @given(sip_messages())
    def test_decode_inverts_encode(self, message):
        assert decode(encode(message)) == message


class TestRegistrar:
    """Tests for challenge/response registration."""

    @pytest.fixture
    def registrar(self):
        peers = [PeerEntry("harish", secret="1234", context="office")]
        return Registrar(peers, NonceIssuer(seed=7), expiry=3600)

    def nonce_of(self, response: SipMessage) -> str:
        return parse_digest_params(response.header("WWW-Authenticate"))["nonce"]

    def login(self, registrar, secret="1234", now=1.0):
        challenge = registrar.handle_register(register(), "192.168.100.50", 5060, now)
        nonce = self.nonce_of(challenge.response)
        answer = credentials_header("harish", nonce, compute_digest("harish", secret, nonce))
        return challenge, registrar.handle_register(register(authorization=answer), "192.168.100.50", 5060, now)

    def test_first_register_is_challenged(self, registrar):
        challenge, _ = self.login(registrar)
        assert challenge.response.code == 401
        assert challenge.event == EventKind.REGISTER_ATTEMPT

    def test_good_credentials_register(self, registrar):
        _, result = self.login(registrar, now=10.0)
        assert result.response.code == 200
        assert result.event == EventKind.REGISTER_SUCCESS
        binding = registrar.lookup("harish", 10.0)
        assert (binding.contact_host, binding.contact_port) == ("192.168.100.50", 5060)
        assert binding.expires_at == 3610.0

    def test_bad_credentials_rechallenged(self, registrar):
        _, result = self.login(registrar, secret="9999")
        assert result.response.code == 401
        assert result.event == EventKind.AUTH_FAILURE
        assert registrar.lookup("harish", 1.0) is None

    def test_nonce_is_single_use(self, registrar):
        _, first = self.login(registrar)
        replay = registrar.handle_register(
            register(authorization=self.replayed_answer(registrar)), "192.168.100.50", 5060, 2.0
        )
        assert first.response.code == 200
        assert replay.event == EventKind.AUTH_FAILURE

    def replayed_answer(self, registrar) -> str:
        nonce = registrar.issued[0]
        return credentials_header("harish", nonce, compute_digest("harish", "1234", nonce))

    def test_stale_nonce_refused(self, registrar):
        challenge = registrar.handle_register(register(), "192.168.100.50", 5060, 0.0)
        nonce = self.nonce_of(challenge.response)
        answer = credentials_header("harish", nonce, compute_digest("harish", "1234", nonce))
        late = registrar.handle_register(register(authorization=answer), "192.168.100.50", 5060, 3600.0)
        assert late.event == EventKind.AUTH_FAILURE

    def test_unanswered_challenges_expire(self, registrar):
        for n in range(50):
            registrar.handle_register(register(), "203.0.113.66", 5060, float(n))
        assert registrar.outstanding == 50
        registrar.handle_register(register(), "203.0.113.66", 5060, 3625.0)
        assert registrar.outstanding == 25

    def test_outstanding_challenges_capped(self, registrar, monkeypatch):
        monkeypatch.setattr("minipbx.domain.sipnode.registrar.MAX_OUTSTANDING_NONCES", 8)
        for n in range(20):
            registrar.handle_register(register(), "203.0.113.66", 5060, float(n))
        assert registrar.outstanding == 8

    def test_issued_history_bounded(self):
        registrar = Registrar([PeerEntry("harish", secret="1234")], NonceIssuer(seed=7), history_limit=3)
        for n in range(10):
            registrar.handle_register(register(), "192.168.100.50", 5060, float(n))
        assert len(registrar.issued) == 3

    def test_unknown_user(self, registrar):
        result = registrar.handle_register(register("mallory"), "203.0.113.66", 5060, 1.0)
        assert result.response.code == 404
        assert result.event == EventKind.UNKNOWN_USER

    def test_binding_expires(self, registrar):
        self.login(registrar, now=0.0)
        assert registrar.lookup("harish", 3599.0) is not None
        assert registrar.lookup("harish", 3600.0) is None
        assert registrar.registrations(3600.0) == []

    def test_expires_zero_unregisters(self, registrar):
        self.login(registrar)
        challenge = registrar.handle_register(register(), "192.168.100.50", 5060, 5.0)
        nonce = self.nonce_of(challenge.response)
        answer = credentials_header("harish", nonce, compute_digest("harish", "1234", nonce))
        request = register(authorization=answer, extra=[("Expires", "0")])
        result = registrar.handle_register(request, "192.168.100.50", 5060, 5.0)
        assert result.response.code == 200
        assert registrar.lookup("harish", 5.0) is None

    def test_non_register_rejected(self, registrar):
        with pytest.raises(ValueError):
            registrar.handle_register(SipMessage.request(SipMethod.INVITE, SERVER), "10.0.0.1", 5060, 0.0)


class TestCallSession:
    """Tests for the call state machine."""

    def test_answered_call(self):
        session = CallSession("c1", "harish", "bob")
        for event in (CallEvent.RING, CallEvent.ANSWER, CallEvent.BYE):
            session = session_event(session, event)
        assert session.state == CallState.TERMINATED
        assert session.history == (CallState.INVITING, CallState.RINGING, CallState.ACTIVE)

    def test_timeout_while_ringing(self):
        session = session_event(CallSession("c1", "harish", "bob"), CallEvent.RING)
        assert session_event(session, CallEvent.TIMEOUT).state == CallState.NO_ANSWER

    @pytest.mark.parametrize("state", [CallState.TERMINATED, CallState.NO_ANSWER])
    def test_final_states_absorb(self, state):
        session = CallSession("c1", "harish", "bob", state=state)
        for event in CallEvent:
            assert not can_apply(session, event)
        assert state.is_final

    def test_bye_before_answer_illegal(self):
        with pytest.raises(SipProtocolError, match="bye"):
            session_event(CallSession("c1", "harish", "bob"), CallEvent.BYE)
