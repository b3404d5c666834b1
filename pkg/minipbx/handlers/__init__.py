"""Handlers for pbxctl commands."""

from minipbx.handlers.base import BaseHandler
from minipbx.handlers.daemon_handler import DaemonHandler, daemon_command
from minipbx.handlers.db_handler import DbHandler
from minipbx.handlers.fw_handler import FwHandler
from minipbx.handlers.init_handler import InitHandler, init_command
from minipbx.handlers.mail_handler import MailHandler
from minipbx.handlers.plan_handler import PlanHandler
from minipbx.handlers.run_handler import RunHandler, run_command
from minipbx.handlers.sentinel_handler import SentinelHandler
from minipbx.handlers.vpn_handler import VpnHandler

__all__ = [
    "BaseHandler",
    "DaemonHandler", "daemon_command",
    "DbHandler",
    "FwHandler",
    "InitHandler", "init_command",
    "MailHandler",
    "PlanHandler",
    "RunHandler", "run_command",
    "SentinelHandler",
    "VpnHandler",
]
