"""RC4 key schedule and keystream generator."""

import hashlib


class Rc4State:
    """Permutation table plus the two PRGA indices."""

    def __init__(self, permutation: list[int], i: int = 0, j: int = 0):
        self.s = permutation
        self.i = i
        self.j = j

    @classmethod
    def from_key(cls, key: bytes) -> "Rc4State":
        """Run the key schedule.

        Raises:
            ValueError: For a key outside 1..256 octets
        """
        if not 1 <= len(key) <= 256:
            raise ValueError(f"RC4 key must be 1..256 octets, got {len(key)}")
        s = list(range(256))
        j = 0
        for i in range(256):
            j = (j + s[i] + key[i % len(key)]) % 256
            s[i], s[j] = s[j], s[i]
        return cls(s)

    def process(self, data: bytes) -> bytes:
        """XOR data with the next len(data) keystream octets, in place."""
        i, j, s = self.i, self.j, self.s
        out = bytearray(len(data))
        for n, byte in enumerate(data):
            i = (i + 1) % 256
            j = (j + s[i]) % 256
            s[i], s[j] = s[j], s[i]
            out[n] = byte ^ s[(s[i] + s[j]) % 256]
        self.i, self.j = i, j
        return bytes(out)

    def keystream(self, length: int) -> bytes:
        return self.process(bytes(length))

    def copy(self) -> "Rc4State":
        return Rc4State(list(self.s), self.i, self.j)

    def is_permutation(self) -> bool:
        return sorted(self.s) == list(range(256))


def rc4_apply(state: Rc4State, data: bytes) -> tuple[bytes, Rc4State]:
    """Pure form: returns the output and the advanced state, input untouched."""
    advanced = state.copy()
    return advanced.process(data), advanced


def derive_key(user: str, password: str) -> bytes:
    """128-bit tunnel key: MD5 of "user:password"."""
    return hashlib.md5(f"{user}:{password}".encode("utf-8")).digest()
