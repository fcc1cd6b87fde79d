"""Seeded random-access tape for initial colors and resample bits.

Every value is a pure function of the seed and an index, computed with a
splitmix64-style mixer, so queries may touch vertices in any order without
materializing per-vertex state. Values are stable within a major version.
"""

from __future__ import annotations

RED = 0
BLUE = 1
COLOR_CHARS = "RB"

_MASK = (1 << 64) - 1
_TAG_INIT = 0x1D8E4E27C47D124F
_TAG_RESAMPLE = 0x6A09E667F3BCC909


def _mix(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def color_char(c: int) -> str:
    return COLOR_CHARS[c]


class ColorTape:
    """Random-access source of initial vertex colors and resample bits.

    ``initial_color`` results are memoized; the memo is invisible to callers
    and never changes a returned value.
    """

    __slots__ = ("seed", "n", "_init_key", "_resample_key", "_memo")

    def __init__(self, seed: int, n: int):
        self.seed = seed & _MASK
        self.n = n
        self._init_key = _mix(self.seed ^ _TAG_INIT)
        self._resample_key = _mix(self.seed ^ _TAG_RESAMPLE)
        self._memo = bytearray(b"\xff") * n

    def __repr__(self) -> str:
        return f"ColorTape(seed={self.seed}, n={self.n})"

    def initial_color(self, v: int) -> int:
        if v < 0:
            raise IndexError(f"vertex {v} out of range")
        c = self._memo[v]  # raises IndexError above n
        if c == 0xFF:
            c = _mix(self._init_key ^ v) >> 63
            self._memo[v] = c
        return c

    def initial_coloring(self) -> list[int]:
        return [self.initial_color(v) for v in range(self.n)]

    def resample_word(self, stream_id: int, index: int) -> int:
        return _mix(_mix(self._resample_key ^ (stream_id & _MASK)) ^ (index & _MASK))

    def resample_bit(self, stream_id: int, counter: int) -> int:
        return (self.resample_word(stream_id, counter >> 6) >> (counter & 63)) & 1


def initial_color(tape: ColorTape, v: int) -> int:
    return tape.initial_color(v)


def resample_bit(tape: ColorTape, stream_id: int, counter: int) -> int:
    return tape.resample_bit(stream_id, counter)


def trial_stream_id(component_index: int, trial: int) -> int:
    """Stream id for one coloring trial of one component."""
    return (component_index << 24) | (trial & 0xFFFFFF)


class BitStream:
    """Sequential reader over one resample stream of a tape."""

    __slots__ = ("tape", "stream_id", "counter", "_word", "_word_index")

    def __init__(self, tape: ColorTape, stream_id: int, start: int = 0):
        self.tape = tape
        self.stream_id = stream_id
        self.counter = start
        self._word_index = -1
        self._word = 0

    def next_bit(self) -> int:
        c = self.counter
        wi = c >> 6
        if wi != self._word_index:
            self._word = self.tape.resample_word(self.stream_id, wi)
            self._word_index = wi
        self.counter = c + 1
        return (self._word >> (c & 63)) & 1
