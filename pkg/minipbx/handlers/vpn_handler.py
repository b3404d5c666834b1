"""Handler for pbxctl vpn commands."""

import logging

from minipbx.handlers.base import BaseHandler

logger = logging.getLogger(__name__)


class VpnHandler(BaseHandler):
    """Tunnel session table of the admin state."""

    def sessions(self, state_path: str | None = None, format: str = "text") -> str:
        state = self.state_manager(state_path).load_state()
        return self.formatter.format_sessions(state.tunnels, format)

    def kick(self, user: str, state_path: str | None = None) -> str:
        """Drop every session of the user, freeing the leased addresses.

        Raises:
            ValueError: If the user has no session
        """
        manager = self.state_manager(state_path)
        state = manager.load_state()
        kicked = [lease for lease in state.tunnels if lease.user == user]
        if not kicked:
            raise ValueError(f"No tunnel session for {user}")
        state.tunnels = [lease for lease in state.tunnels if lease.user != user]
        manager.save_state(state)
        logger.info("kicked %s (%d session(s))", user, len(kicked))
        return "\n".join(f"Kicked {lease.user} from {lease.address}" for lease in kicked)
