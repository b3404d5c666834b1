"""Unit tests for the attendance IVR and voicemail."""

import logging

import pytest

from minipbx.domain.acl import AttendanceStore, GrantTable, StoreGateway, parse_statement
from minipbx.domain.dialplan import Completion, DigitsInput
from minipbx.domain.ivrvm import (
    ALLOWED_ARROWS,
    AttendanceIvr,
    IvrSession,
    IvrStart,
    MailboxStore,
    MenuSession,
    VoicemailMenu,
    deposit_voicemail,
    retrieve_voicemail,
)
from minipbx.domain.notify import NotificationSink
from minipbx.exceptions import MailboxAuthError, MailboxNotFoundError
from minipbx.models.acl import Principal
from minipbx.models.conf import MailboxEntry
from minipbx.models.enums import ActionKind, EventKind, IvrPhase, NotificationCategory

IVR_PRINCIPAL = Principal("ivr", "127.0.0.1")


def kinds(actions) -> list[str]:
    return [str(action) for action in actions]


class TestAttendanceIvr:
    """Tests for the IVR phase machine."""

    @pytest.fixture
    def gateway(self):
        store = AttendanceStore()
        store.add("1001", "1234", 87)
        grants = GrantTable()
        grants.apply(parse_statement("GRANT SELECT ON school.attendance TO ivr@127.0.0.1"))
        gateway = StoreGateway(store, grants)
        gateway.start()
        return gateway

    @pytest.fixture
    def ivr(self, gateway):
        return AttendanceIvr(gateway, IVR_PRINCIPAL, retry_cap=3)

    def login(self, ivr, student_id="1001", password="1234"):
        _, session = ivr.run(IvrSession(src="192.168.100.60"), IvrStart())
        _, session = ivr.run(session, DigitsInput(student_id + "#"))
        return ivr.run(session, DigitsInput(password + "#"), at=4.0)

    def test_nondefault_retry_cap_noted(self, gateway, caplog, monkeypatch):
        # configure_logging in other tests stops propagation to caplog's root handler
        monkeypatch.setattr(logging.getLogger("minipbx"), "propagate", True)
        with caplog.at_level("INFO", logger="minipbx.domain.ivrvm.ivr"):
            AttendanceIvr(gateway, IVR_PRINCIPAL, retry_cap=5)
        assert "retry cap is 5" in caplog.text

    def test_welcome_then_id_prompt(self, ivr):
        actions, session = ivr.run(IvrSession(), IvrStart())
        assert kinds(actions) == ["play(welcome)", "read(ID)"]
        assert actions[1].prompt == "enter-id"
        assert session.phase is IvrPhase.READ_ID

    def test_good_login_reads_attendance(self, ivr):
        actions, session = self.login(ivr)
        assert kinds(actions) == ["query(attendance)"]
        assert session.phase is IvrPhase.FETCH
        actions, session = ivr.run(session, ivr.fetch(session))
        assert kinds(actions) == ["play(attendance-is)", "say-digits(87)", "read(CHOICE)"]
        assert session.phase is IvrPhase.AGAIN

    def test_another_student_loops(self, ivr):
        _, session = self.login(ivr)
        _, session = ivr.run(session, ivr.fetch(session))
        actions, session = ivr.run(session, DigitsInput("1#"))
        assert kinds(actions) == ["read(ID)"]
        assert session.entered_id == ""

    def test_choice_two_says_goodbye(self, ivr):
        _, session = self.login(ivr)
        _, session = ivr.run(session, ivr.fetch(session))
        actions, session = ivr.run(session, DigitsInput("2#"))
        assert kinds(actions) == ["play(goodbye)", "hangup()"]
        assert session.done

    def test_bad_password_retries_then_hangs_up(self, ivr):
        actions, session = self.login(ivr, password="0000")
        assert kinds(actions) == ["play(bad-password)", "read(ID)"]
        assert session.retries == 1
        for _ in range(2):
            _, session = ivr.run(session, DigitsInput("1001#"))
            actions, session = ivr.run(session, DigitsInput("0000#"))
        assert kinds(actions) == ["play(bad-password)", "hangup()"]
        assert session.done
        assert session.retries == 3

    def test_unknown_student_is_bad_password(self, ivr):
        actions, _ = self.login(ivr, student_id="9999")
        assert kinds(actions)[0] == "play(bad-password)"

    def test_denied_store_says_sorry(self, gateway):
        gateway.grants = GrantTable()
        actions, session = self.login(AttendanceIvr(gateway, IVR_PRINCIPAL))
        assert kinds(actions) == ["play(sorry)", "hangup()"]
        assert session.done

    def test_trail_follows_allowed_arrows(self, ivr):
        _, session = self.login(ivr)
        _, session = ivr.run(session, ivr.fetch(session))
        _, session = ivr.run(session, DigitsInput("2#"))
        for arrow in zip(session.trail, session.trail[1:]):
            assert arrow in ALLOWED_ARROWS

    def test_event_out_of_phase(self, ivr):
        with pytest.raises(ValueError, match="cannot take"):
            ivr.run(IvrSession(), DigitsInput("1#"))


class TestVoicemail:
    """Tests for deposit, retrieval and the VoiceMailMain menu."""

    @pytest.fixture
    def store(self):
        events = []
        store = MailboxStore(
            {"vmail": [MailboxEntry("756", "1234", "username", "username@domain.com")]},
            on_event=events.append,
        )
        store.events = events
        return store

    def test_deposit_notifies_owner(self, store):
        sink = NotificationSink()
        receipt = deposit_voicemail("756@vmail", "bob", "vm-0001", 32.0, store, sink)
        assert receipt == 1
        notice = sink.drain(NotificationCategory.VOICEMAIL_NOTICE)[0]
        assert notice.to == "username@domain.com"
        assert "bob" in notice.subject
        assert store.journal_lines() == ["1970-01-01T00:00:32.000+00:00\t756@vmail\tbob\tvm-0001"]

    def test_deposit_unknown_box(self, store):
        with pytest.raises(MailboxNotFoundError):
            deposit_voicemail("999@vmail", "bob", "x", 1.0, store, NotificationSink())

    def test_retrieve_in_deposit_order(self, store):
        sink = NotificationSink()
        deposit_voicemail("756@vmail", "bob", "a", 1.0, store, sink)
        deposit_voicemail("756@vmail", "student", "b", 2.0, store, sink)
        messages = retrieve_voicemail("756", "1234", store)
        assert [m.payload_ref for m in messages] == ["a", "b"]

    def test_wrong_password_reports_event(self, store):
        with pytest.raises(MailboxAuthError):
            retrieve_voicemail("756", "0000", store, "vmail", src="198.51.100.7", at=3.0)
        assert store.events[0].kind == EventKind.AUTH_FAILURE
        assert store.events[0].src == "198.51.100.7"

    def test_menu_success(self, store):
        menu = VoicemailMenu(store)
        actions, session = menu.start(MenuSession("756@vmail"))
        assert actions[0].prompt == "vm-password"
        actions, session = menu.enter(session, DigitsInput("1234#"), 1.0)
        assert kinds(actions) == ["play(vm-youhave)", "say-digits(0)", "play(vm-intro)"]
        assert session.status == "ok"

    def test_menu_gives_up_after_attempts(self, store):
        menu = VoicemailMenu(store, attempts=3)
        session = MenuSession("756@vmail", src="198.51.100.7")
        for _ in range(3):
            actions, session = menu.enter(session, DigitsInput("1111#"), 1.0)
        assert session.status == "auth-failed"
        assert len(store.events) == 3

    def test_menu_timeout(self, store):
        _, session = VoicemailMenu(store).enter(MenuSession("756@vmail"), DigitsInput("", timed_out=True), 1.0)
        assert session.status == "timeout"

    def test_menu_unknown_box(self, store):
        with pytest.raises(MailboxNotFoundError):
            VoicemailMenu(store).start(MenuSession("1@nowhere"))
