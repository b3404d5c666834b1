"""Single-round nonce digest authentication."""

import hashlib
import re

from minipbx.constants import SIP_REALM

_PARAM_RE = re.compile(r'(\w+)\s*=\s*(?:"([^"]*)"|([^,\s]*))')


def compute_digest(user: str, secret: str, nonce: str) -> str:
    """Lowercase hex MD5 of "user:secret:nonce"."""
    if not nonce:
        raise ValueError("nonce must be non-empty")
    return hashlib.md5(f"{user}:{secret}:{nonce}".encode("ascii")).hexdigest()


def challenge_header(nonce: str) -> str:
    return f'Digest realm="{SIP_REALM}", nonce="{nonce}"'


def credentials_header(user: str, nonce: str, response: str) -> str:
    return f'Digest username="{user}", nonce="{nonce}", response="{response}"'


def parse_digest_params(value: str) -> dict[str, str]:
    """Parameters of a `Digest k="v", k=v` header value. Empty if not Digest."""
    scheme, _, rest = value.strip().partition(" ")
    if scheme.lower() != "digest":
        return {}
    return {m.group(1).lower(): m.group(2) if m.group(2) is not None else m.group(3)
            for m in _PARAM_RE.finditer(rest)}


class NonceIssuer:
    """Issues nonces that never repeat within one run.

    A counter prefix guarantees uniqueness; the hashed tail keeps tokens
    opaque.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._counter = 0

    def issue(self) -> str:
        self._counter += 1
        tail = hashlib.md5(f"{self.seed}:{self._counter}".encode("ascii")).hexdigest()[:8]
        return f"{self._counter:08x}{tail}"

    @property
    def issued_count(self) -> int:
        return self._counter
