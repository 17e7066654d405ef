"""Boolean-lattice helpers.

Subsets of the input index set ``D = {1, ..., d}`` are plain ``int`` bit masks:
bit ``i`` set means input ``i + 1`` belongs to the subset. Every matrix or
report indexed by subsets uses the order returned by :func:`enumerate_subsets`.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

MAX_INPUTS = 12


def _check_d(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or not 1 <= d <= MAX_INPUTS:
        raise ValueError(f"input count must be in [1, {MAX_INPUTS}], got {d!r}")


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(d: int) -> int:
    return (1 << d) - 1


def enumerate_subsets(d: int) -> list[int]:
    """All ``2**d`` masks, by cardinality then numeric value."""
    _check_d(d)
    return sorted(range(1 << d), key=lambda m: (popcount(m), m))


def subset_index(d: int) -> dict[int, int]:
    """Position of each mask in the canonical order."""
    return {m: i for i, m in enumerate(enumerate_subsets(d))}


def submasks(mask: int) -> Iterable[int]:
    """Every ``B`` with ``B ⊆ mask`` (including ``mask`` and 0)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def proper_submasks(mask: int) -> list[int]:
    return [b for b in submasks(mask) if b != mask]


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def members(mask: int) -> list[int]:
    """Zero-based input positions contained in ``mask``."""
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def from_members(indices: Iterable[int], one_based: bool = True) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1 if one_based else i)
    return mask


def label(mask: int) -> str:
    """Report label: sorted 1-based indices, e.g. ``"[1,3]"``; empty set is ``"[]"``."""
    return "[" + ",".join(str(i + 1) for i in members(mask)) + "]"


def parse_label(text: str) -> int:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"not a subset label: {text!r}")
    body = body[1:-1].strip()
    if not body:
        return 0
    return from_members(int(tok) for tok in body.split(","))


def mobius_alternating_sum(values: Mapping[int, np.ndarray], mask: int) -> np.ndarray:
    """``sum_{B ⊆ A} (-1)**(|A|-|B|) * values[B]``.

    Inverts down-set sums: if ``values[B] = sum_{C ⊆ B} w[C]`` then the result is ``w[A]``.
    """
    total = None
    size = popcount(mask)
    for sub in submasks(mask):
        try:
            v = np.asarray(values[sub], dtype=float)
        except KeyError:
            raise KeyError(f"missing value for subset {label(sub)}") from None
        term = v if (size - popcount(sub)) % 2 == 0 else -v
        total = term.copy() if total is None else total + term
    return total


def comparables(mask: int, d: int) -> set[int]:
    """Subsets nested with ``mask`` in either direction."""
    _check_d(d)
    return {b for b in range(1 << d) if is_subset(b, mask) or is_subset(mask, b)}


def uncomparables(mask: int, d: int) -> set[int]:
    _check_d(d)
    return set(range(1 << d)) - comparables(mask, d)
