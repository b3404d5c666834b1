"""Unit tests for MailHandler."""

import json

import pytest

from minipbx.domain.notify import write_journal
from minipbx.handlers.mail_handler import MailHandler
from minipbx.models.enums import NotificationCategory
from minipbx.models.notification import Notification


class TestMailHandler:
    """Tests for MailHandler."""

    @pytest.fixture
    def handler(self, services):
        return MailHandler(*services)

    @pytest.fixture
    def journal(self, tmp_path):
        path = str(tmp_path / "mail.mbox")
        write_journal(
            path,
            [
                Notification(
                    "admin@minipbx.local",
                    "203.0.113.66 blacklisted",
                    "11 requests within 60s",
                    5.0,
                    NotificationCategory.ADMIN_ALERT,
                    1,
                ),
                Notification(
                    "bob@office.local",
                    "New voicemail in 757@vmail",
                    "From harish",
                    32.0,
                    NotificationCategory.VOICEMAIL_NOTICE,
                    2,
                ),
            ],
        )
        return path

    def test_lists_all(self, handler, journal):
        assert handler.list_mail(journal).splitlines() == [
            "1\t5.000\tadmin-alert\tadmin@minipbx.local\t203.0.113.66 blacklisted",
            "2\t32.000\tvoicemail-notice\tbob@office.local\tNew voicemail in 757@vmail",
        ]

    def test_category_filter(self, handler, journal):
        text = handler.list_mail(journal, category="voicemail-notice")
        assert text.startswith("2\t")
        assert "admin-alert" not in text

    def test_json(self, handler, journal):
        data = json.loads(handler.list_mail(journal, category="admin-alert", format="json"))
        assert len(data["mail"]) == 1

    def test_unknown_category(self, handler, journal):
        with pytest.raises(ValueError):
            handler.list_mail(journal, category="spam")

    def test_missing_journal(self, handler, tmp_path):
        with pytest.raises(FileNotFoundError, match="No mail journal"):
            handler.list_mail(str(tmp_path / "absent.mbox"))
