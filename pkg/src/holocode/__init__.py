"""Holographic stabiliser codes: tilings, lego contraction, decoding and entropy."""

__version__ = "0.1.0"

from .network import build_code, black_hole, contract, foliate, gauge_fix, network_for, wormhole  # noqa: E402,F401
from .pauli import CheckMatrix, PauliString, StabiliserState  # noqa: E402,F401
