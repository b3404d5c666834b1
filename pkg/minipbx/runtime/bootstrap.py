"""Composition root: one PBX instance wired from configuration and state."""

import logging
import random
from dataclasses import dataclass, field

from minipbx.constants import PPTP_PORT
from minipbx.domain.acl import AttendanceStore, GrantTable, StoreGateway
from minipbx.domain.confkit import ConfigBundle
from minipbx.domain.dialplan import Dialplan, compile_plan
from minipbx.domain.ivrvm import MailboxStore
from minipbx.domain.notify import NotificationSink
from minipbx.domain.pktfilter import Chain, PacketFilter, default_chain
from minipbx.domain.sentinel import ActiveResponder, AlertClassifier, Blacklist, RateDetector, Sentinel
from minipbx.domain.sipnode import NonceIssuer, Registrar
from minipbx.domain.tunnel import TunnelServer
from minipbx.models.acl import GrantTriple, ObjectScope, Principal
from minipbx.models.config import Settings
from minipbx.models.enums import NotificationCategory, Proto
from minipbx.models.packet import Packet
from minipbx.models.security import Alert, RateRule, SecurityEvent
from minipbx.models.state import PbxState

from .clock import VirtualClock
from .metrics import RunMetrics
from .network import Network
from .phones import Phone
from .pipeline import Outcome, Pipeline
from .services import ServiceManager
from .switchboard import Switchboard
from .vpn import TunnelControl

logger = logging.getLogger(__name__)


def fresh_state(settings: Settings) -> PbxState:
    """Deployment policy chain plus the IVR's single read grant."""
    chain = default_chain()
    ivr_grant = GrantTriple(
        Principal.parse(settings.ivr_principal),
        ObjectScope.parse(settings.attendance_table),
        "SELECT",
    )
    return PbxState(policy=chain.policy, rules=list(chain.rules), grants={ivr_grant})


@dataclass
class Pbx:
    settings: Settings
    bundle: ConfigBundle
    clock: VirtualClock
    metrics: RunMetrics
    packet_filter: PacketFilter
    notifier: NotificationSink
    sentinel: Sentinel
    grants: GrantTable
    store: AttendanceStore
    gateway: StoreGateway
    mailboxes: MailboxStore
    plan: Dialplan
    registrar: Registrar
    network: Network
    pipeline: Pipeline
    switchboard: Switchboard
    services: ServiceManager
    tunnel: TunnelServer | None = None
    tunnel_control: TunnelControl | None = None
    rng: random.Random = field(default_factory=random.Random)
    phones: dict[str, Phone] = field(default_factory=dict)

    def report(self, event: SecurityEvent) -> Alert:
        return self.sentinel.report(event)

    def dispatch(self, packet: Packet) -> Outcome:
        return self.pipeline.dispatch(packet)

    def add_phone(
        self,
        name: str,
        address: str,
        port: int,
        vpn_user: str | None = None,
        vpn_password: str | None = None,
    ) -> Phone:
        peer = self.bundle.peer(name)
        phone = Phone(
            name,
            address,
            port,
            self.network,
            self.clock,
            self.settings.server_address,
            self.settings.sip_port,
            secret=peer.secret if peer else "",
            auth_user=peer.auth_user if peer else None,
            vpn_user=vpn_user,
            vpn_password=vpn_password,
            rng=random.Random(self.rng.getrandbits(32)),
        )
        self.network.attach(phone)
        self.phones[name] = phone
        return phone

    def start(self) -> None:
        self.services.start_all()

    def stop(self) -> None:
        self.services.stop_all()

    def to_state(self) -> PbxState:
        state = PbxState(
            policy=self.packet_filter.chain.policy,
            rules=list(self.packet_filter.rules),
            blacklist=dict(self.sentinel.responder.blacklist.entries),
            tunnels=[session.lease() for session in self.tunnel.sessions()] if self.tunnel else [],
        )
        self.grants.store_into(state)
        return state

    def finalize_metrics(self) -> RunMetrics:
        floor = max(self.sentinel.log_level, 1)
        by_level: dict[int, int] = {}
        for alert in self.sentinel.alerts:
            if alert.level >= floor:
                by_level[alert.level] = by_level.get(alert.level, 0) + 1
        self.metrics.alerts_by_level = by_level
        self.metrics.blacklist_size = len(self.sentinel.responder.blacklist)
        self.metrics.notifications = {
            category.value: len(self.notifier.drain(category)) for category in NotificationCategory
        }
        self.metrics.post_blacklist_deliveries = self.pipeline.deliveries_after_blacklist()
        return self.metrics


def build_pbx(
    bundle: ConfigBundle,
    settings: Settings | None = None,
    state: PbxState | None = None,
    store: AttendanceStore | None = None,
    history_limit: int | None = None,
) -> Pbx:
    """Wire every component.

    Tunnel leases in `state` are not restored: a new instance has no
    cipher state to resume them with. `history_limit` bounds the alert,
    delivery, call and wire logs of a long-running instance; None keeps
    everything.
    """
    settings = settings or Settings.get_default()
    state = state or fresh_state(settings)
    clock = VirtualClock()
    metrics = RunMetrics()
    notifier = NotificationSink()

    packet_filter = PacketFilter(Chain(rules=tuple(state.rules), policy=state.policy))
    sentinel = Sentinel(
        AlertClassifier(settings.alert_levels, settings.rate_threshold, settings.flood_multiplier),
        RateDetector(RateRule(settings.rate_threshold, settings.rate_window), settings.flood_multiplier),
        ActiveResponder(packet_filter, Blacklist(state.blacklist), notifier, settings.admin_email),
        settings.response_policy,
        settings.log_alert_level,
        history_limit,
    )

    tunnel = TunnelServer(bundle.tunnel, bundle.credentials, history_limit) if bundle.tunnel else None
    grants = GrantTable.from_state(state)
    store = store or AttendanceStore()
    gateway = StoreGateway(store, grants, settings.attendance_table, on_event=sentinel.report)
    mailboxes = MailboxStore(bundle.mailboxes, on_event=sentinel.report)
    plan = compile_plan(bundle.dialplan, bundle.report)
    registrar = Registrar(bundle.peers, NonceIssuer(settings.seed), settings.registration_expiry, history_limit)

    network = Network(clock, tunnel)
    pipeline = Pipeline(clock, packet_filter, sentinel, metrics, tunnel, history_limit)
    switchboard = Switchboard(
        settings,
        bundle.peers,
        plan,
        registrar,
        gateway,
        mailboxes,
        notifier,
        packet_filter,
        pipeline,
        network,
        clock,
        metrics,
        sentinel.report,
        history_limit,
    )
    pipeline.register_service(Proto.UDP, settings.sip_port, "sip", switchboard.receive_sip)
    pipeline.register_media(switchboard.receive_media)

    tunnel_control = None
    if tunnel is not None:
        tunnel_control = TunnelControl(tunnel, network, clock, metrics, sentinel.report)
        pipeline.register_service(Proto.TCP, PPTP_PORT, "vpn", tunnel_control.receive)

    services = ServiceManager()
    services.add("store", gateway.start, gateway.stop)
    services.add("notifier")
    services.add("sip", switchboard.start, switchboard.stop)

    pbx = Pbx(
        settings=settings,
        bundle=bundle,
        clock=clock,
        metrics=metrics,
        packet_filter=packet_filter,
        notifier=notifier,
        sentinel=sentinel,
        grants=grants,
        store=store,
        gateway=gateway,
        mailboxes=mailboxes,
        plan=plan,
        registrar=registrar,
        network=network,
        pipeline=pipeline,
        switchboard=switchboard,
        services=services,
        tunnel=tunnel,
        tunnel_control=tunnel_control,
        rng=random.Random(settings.seed),
    )
    network.server = pbx.dispatch
    logger.debug("PBX wired: %d peer(s), %d plan step(s)", len(bundle.peers), len(plan))
    return pbx
