"""Rate-based IDS/IPS with alert levels and active response."""

from minipbx.domain.sentinel.classifier import RULE_IDS, AlertClassifier
from minipbx.domain.sentinel.detector import RateDetector
from minipbx.domain.sentinel.engine import Sentinel
from minipbx.domain.sentinel.response import ActiveResponder, Blacklist, drop_rule, is_blacklist_rule_for

__all__ = [
    "RULE_IDS",
    "ActiveResponder",
    "AlertClassifier",
    "Blacklist",
    "RateDetector",
    "Sentinel",
    "drop_rule",
    "is_blacklist_rule_for",
]
