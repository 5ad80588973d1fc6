"""Row-space computations over GF(2) with rows packed into Python integers."""

from __future__ import annotations

from typing import Iterable


class GF2Span:
    """Incrementally maintained row space of a set of GF(2) vectors.

    Each stored basis row remembers which input vectors were XORed to produce
    it (as a bit mask over input positions), so membership queries also return
    an explicit decomposition.
    """

    def __init__(self, rows: Iterable[int] = ()):
        self._pivots: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, combo)
        self.count = 0
        self.dependent: list[int] = []
        for r in rows:
            self.add(r)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            top = v.bit_length() - 1
            hit = self._pivots.get(top)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    def add(self, v: int) -> bool:
        """Append ``v`` as input vector ``self.count``; return True if independent."""
        idx = self.count
        self.count += 1
        residue, combo = self._reduce(v)
        if residue == 0:
            self.dependent.append(idx)
            return False
        self._pivots[residue.bit_length() - 1] = (residue, combo ^ (1 << idx))
        return True

    def decompose(self, v: int) -> int | None:
        """Mask of input vectors summing to ``v``, or None when ``v`` is outside the span."""
        residue, combo = self._reduce(v)
        if residue:
            return None
        return combo

    def __contains__(self, v: int) -> bool:
        return self._reduce(v)[0] == 0


def rank(rows: Iterable[int]) -> int:
    return GF2Span(rows).rank
