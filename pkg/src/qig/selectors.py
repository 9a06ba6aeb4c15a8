"""Parse textual function selectors such as ``km``, ``wyd:0.3`` or ``mixture:mix.json``."""

from __future__ import annotations

from .classical import csiszar_fujisawa, hellinger, osterreicher_vajda, variational
from .fileio import read_mixture
from .stdfunc import (StandardFunction, alpha_divergence, geometric, hansen_extremal,
                      hansen_mixture, harmonic, kubo_mori, sld, tilde_transform, wyd, xlogx)

_PLAIN = {
    "sld": sld,
    "harmonic": harmonic,
    "km": kubo_mori,
    "sqrt": geometric,
    "xlogx": xlogx,
    "kl": xlogx,
    "variational": variational,
    "hellinger": hellinger,
}

_PARAM = {
    "wyd": wyd,
    "alpha": alpha_divergence,
    "extremal": hansen_extremal,
    "fs": csiszar_fujisawa,
    "ov": osterreicher_vajda,
}

SELECTOR_HELP = ("sld, harmonic, km, sqrt, xlogx|kl, variational, hellinger, wyd:b, alpha:a, "
                 "extremal:l, fs:s, ov:b, mixture:<file>, tilde:<selector>")


def parse_function(text: str) -> StandardFunction:
    """Resolve a selector; raises ``ValueError`` on unknown names or bad parameters."""
    text = text.strip()
    if text in _PLAIN:
        return _PLAIN[text]()
    head, sep, arg = text.partition(":")
    if not sep:
        raise ValueError(f"unknown function selector {text!r}; expected one of {SELECTOR_HELP}")
    if head == "tilde":
        return tilde_transform(parse_function(arg))
    if head == "mixture":
        nodes, weights = read_mixture(arg)
        return hansen_mixture(nodes, weights)
    if head in _PARAM:
        try:
            value = float(arg)
        except ValueError:
            raise ValueError(f"selector {text!r} needs a numeric parameter") from None
        return _PARAM[head](value)
    raise ValueError(f"unknown function selector {text!r}; expected one of {SELECTOR_HELP}")
