"""Normalization of heterogeneous publisher ratings to three-way labels.

Fact-checking outlets publish free-form verdict strings ("pants-on-fire",
"no evidence", "altered photo"). Retrieval and veracity prediction work
on a three-way label, so raw strings are folded through a configurable
synonym table. Unknown strings map to Unverifiable with a warning rather
than failing, keeping ingestion total.
"""

from __future__ import annotations

import re

from .types import VeracityLabel

_WS = re.compile(r"\s+")

DEFAULT_RATING_TABLE: dict[str, VeracityLabel] = {
    "false": VeracityLabel.FALSE,
    "fake": VeracityLabel.FALSE,
    "hoax": VeracityLabel.FALSE,
    "incorrect": VeracityLabel.FALSE,
    "misleading": VeracityLabel.FALSE,
    "altered": VeracityLabel.FALSE,
    "true": VeracityLabel.TRUE,
    "correct": VeracityLabel.TRUE,
    "accurate": VeracityLabel.TRUE,
    "unverifiable": VeracityLabel.UNVERIFIABLE,
    "no evidence": VeracityLabel.UNVERIFIABLE,
    "unproven": VeracityLabel.UNVERIFIABLE,
    "mixture": VeracityLabel.UNVERIFIABLE,
    "missing context": VeracityLabel.UNVERIFIABLE,
}


def normalize_rating(
    raw: str | None,
    table: dict[str, VeracityLabel] | None = None,
) -> tuple[VeracityLabel, str | None]:
    """Map a raw rating string to a VeracityLabel.

    Returns (label, warning). The warning is None for table hits and a
    short message for out-of-table strings, which normalize to
    Unverifiable. Total: never raises, idempotent on canonical labels.
    """
    table = DEFAULT_RATING_TABLE if table is None else table
    key = _WS.sub(" ", (raw or "").strip().lower())
    if key in table:
        return table[key], None
    return (
        VeracityLabel.UNVERIFIABLE,
        f"unknown rating {raw!r} mapped to {VeracityLabel.UNVERIFIABLE.value}",
    )
