"""Shared fixtures for hand-built instances."""

from __future__ import annotations

from collections.abc import Sequence

from hlc.randomness import ColorTape


class FixedTape(ColorTape):
    """A tape whose initial colors are given explicitly; resample bits stay seeded."""

    __slots__ = ("_colors",)

    def __init__(self, colors: Sequence[int], seed: int = 0):
        super().__init__(seed, len(colors))
        self._colors = list(colors)

    def initial_color(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexError(v)
        return self._colors[v]


def colors_from(text: str) -> list[int]:
    """``"RRB.."`` style color strings; whitespace is ignored."""
    return ["RB".index(c) for c in text if not c.isspace()]
