"""minipbx - desk-scale secure VoIP PBX with a deterministic scenario harness."""

__version__ = "0.4.0"
