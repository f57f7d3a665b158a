"""Certificates: a computed invariant plus witnesses that can be re-checked offline.

Witness facts (zero-sum freeness, minimality, cross number, length, absence
of short zero-sums) are re-verified directly.  The maximality of the value
is only asserted by the search and is labelled as such.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

from .groups import GroupError, GroupSpec, parse_group
from .invariants import frac_dict, longest_avoiding
from .search import SearchLimits, search
from .sequences import Sequence, SequenceError, sequence_from_dict, sequence_to_dict
from .sumsets import (has_short_zero_sum, has_zero_sum_of_length, is_minimal_zero_sum,
                      is_zero_sum_free)

SCHEMA_VERSION = 1
INVARIANTS = ("k", "K", "D", "eta", "s")
REQUIRED = ("schema_version", "group", "invariant", "value", "witnesses", "limits",
            "partial", "timestamp")


def make_certificate(G: GroupSpec, invariant: str, limits: SearchLimits | None = None, *,
                     workers: int = 1) -> dict:
    if invariant not in INVARIANTS:
        raise ValueError(f"invariant must be one of {INVARIANTS}")
    limits = limits if limits is not None else SearchLimits.from_env()
    partial = False
    if invariant in ("k", "K", "D"):
        objective = {"k": "k", "K": "K", "D": "length"}[invariant]
        out = search(G, (objective,), witnesses="first", limits=limits, workers=workers)
        partial = out.partial
        value = out.value(objective) + (1 if invariant == "D" else 0)
        witnesses = out.witnesses[objective]
    else:
        G.check_size()
        cands = list(range(G.order))
        exact = invariant == "s"
        n, W = longest_avoiding(G, cands, 1, max_sub_len=G.exponent, exact_len=exact, limits=limits)
        value, witnesses = n + 1, [W]
    return {
        "schema_version": SCHEMA_VERSION,
        "group": G.text(),
        "invariant": invariant,
        "value": frac_dict(value),
        "witnesses": [sequence_to_dict(W) for W in witnesses],
        "claims": {"witnesses": "checked", "maximality": "search-asserted"},
        "limits": limits.to_dict(),
        "partial": partial,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


@dataclass
class VerifyResult:
    status: str
    messages: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return {"verified": 0, "violation": 1, "malformed": 2}[self.status]


def _witness_problem(invariant: str, G: GroupSpec, value: Fraction, W: Sequence) -> str | None:
    e = G.exponent
    if invariant == "k":
        if not is_zero_sum_free(W):
            return "witness is not zero-sum free"
        if W.cross_number() != value:
            return f"witness cross number {W.cross_number()} != {value}"
    elif invariant == "K":
        if not is_minimal_zero_sum(W):
            return "witness is not a minimal zero-sum sequence"
        if W.cross_number() != value:
            return f"witness cross number {W.cross_number()} != {value}"
    else:
        if value.denominator != 1 or len(W) != value - 1:
            return f"witness length {len(W)} != value - 1 = {value - 1}"
        if invariant == "D" and not is_zero_sum_free(W):
            return "witness is not zero-sum free"
        if invariant == "eta" and has_short_zero_sum(W, e):
            return f"witness has a zero-sum subsequence of length <= {e}"
        if invariant == "s" and has_zero_sum_of_length(W, e):
            return f"witness has a zero-sum subsequence of length {e}"
    return None


def verify_certificate(data) -> VerifyResult:
    """Re-check every witness claim; ``malformed`` for structural problems."""
    if not isinstance(data, dict):
        return VerifyResult("malformed", ["certificate is not a JSON object"])
    missing = [k for k in REQUIRED if k not in data]
    if missing:
        return VerifyResult("malformed", [f"missing field: {k}" for k in missing])
    if data["schema_version"] != SCHEMA_VERSION:
        return VerifyResult("malformed", [f"unsupported schema_version {data['schema_version']!r}"])
    invariant = data["invariant"]
    if invariant not in INVARIANTS:
        return VerifyResult("malformed", [f"unknown invariant {invariant!r}"])
    try:
        G = parse_group(str(data["group"]))
        value = Fraction(int(data["value"]["num"]), int(data["value"]["den"]))
        witnesses = [sequence_from_dict(w) for w in data["witnesses"]]
    except (GroupError, SequenceError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return VerifyResult("malformed", [f"unreadable field: {exc}"])
    if not isinstance(data["witnesses"], list) or not witnesses:
        return VerifyResult("malformed", ["no witnesses"])
    problems = []
    for n, W in enumerate(witnesses):
        if W.group != G:
            problems.append(f"witness {n}: group {W.group} != {G}")
            continue
        msg = _witness_problem(invariant, G, value, W)
        if msg:
            problems.append(f"witness {n}: {msg}")
    if problems:
        return VerifyResult("violation", problems)
    note = "maximality is search-asserted"
    if data.get("partial"):
        note += "; search was partial, value is a lower bound"
    return VerifyResult("verified", [note])


def load_and_verify(path) -> VerifyResult:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        return VerifyResult("malformed", [f"cannot read certificate: {exc}"])
    return verify_certificate(data)
