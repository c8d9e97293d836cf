"""Largest memory fraction for which each protocol's security statement applies."""

from __future__ import annotations

import warnings

from ..errors import ConfigError
from ..qinfo import binary_entropy

PROTOCOLS = ("qot", "epr_qot", "bb84_qot", "bb84_epr_qot", "comm", "epr_comm", "comm_prime")


def threshold_gamma(protocol: str, phi: float = 0.0, eta: float = 0.0) -> float:
    """Memory fraction below which the protocol is secure.

    Noiseless OT and commitment: 1/2. BB84 OT: ``(1 - eta)/4 - h(phi)/2``.
    Noise-tolerant commitment: ``(1 - eta)/2 - 2 h(phi)``. A negative value
    means no memory is tolerated; it is clamped to 0 with a warning.
    """
    if protocol not in PROTOCOLS:
        raise ConfigError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    if not 0 <= phi < 0.5 or not 0 <= eta < 1:
        raise ConfigError(f"need 0 <= phi < 1/2 and 0 <= eta < 1, got phi={phi}, eta={eta}")
    h = binary_entropy(phi)
    if protocol in ("bb84_qot", "bb84_epr_qot"):
        value = (1 - eta) / 4 - h / 2
    elif protocol == "comm_prime":
        value = (1 - eta) / 2 - 2 * h
    else:
        value = 0.5
    if value < 0:
        warnings.warn(
            f"{protocol} at phi={phi}, eta={eta} tolerates no memory (threshold {value:.4f} clamped to 0)",
            RuntimeWarning,
            stacklevel=2,
        )
        return 0.0
    return value
