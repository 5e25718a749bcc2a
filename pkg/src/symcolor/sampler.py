"""Sequential sampling of the coloring from exact conditional probabilities.

Each step draws one 64-bit integer ``u`` and returns the first color ``k``
with ``u < 2**64 * F_k``, where ``F_k`` is the exact cumulative conditional
probability. The comparison is done by integer cross-multiplication.

With ``window_cap=None`` the conditioning window is the whole history, so the
first ``n`` outputs have exactly the law P on length-``n`` cylinders; the
history length is then bounded by the measure's length cap. Setting
``window_cap`` conditions only on the most recent ``window_cap`` colors. That
is an approximation of the process and is recorded in the stream metadata.
"""

from __future__ import annotations

import random

from .measure import CylinderMeasure, Word, WordTooLongError
from .exactnum import InvariantViolation

__all__ = ["ColoringStream", "RNG_ID", "cumulative_thresholds"]

RNG_ID = "python-random-mt19937-getrandbits64"

_SHIFT = 64


def cumulative_thresholds(conditionals) -> tuple:
    """``(color, num << 64, den)`` for each positive-probability color, in order.

    ``u`` selects ``color`` when ``u * den < num << 64``.
    """
    out = []
    total = 0
    for color, p in enumerate(conditionals, start=1):
        if p == 0:
            continue
        total = total + p
        out.append((color, int(total.numerator) << _SHIFT, int(total.denominator)))
    if total != 1:
        raise InvariantViolation(f"conditional probabilities sum to {total}, not 1")
    return tuple(out)


class ColoringStream:
    """Seeded generator of a proper q-coloring.

    >>> s = ColoringStream(CylinderMeasure(4), seed=1)
    >>> w = s.sample_n(5)
    >>> w.proper
    True
    """

    def __init__(self, measure: CylinderMeasure, seed: int = 0, window_cap: int = None):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if window_cap is not None and not 0 <= window_cap < measure.max_length:
            raise ValueError(
                f"window_cap must be in [0, {measure.max_length - 1}] for this measure"
            )
        self.measure = measure
        self.rng_seed = seed
        self.window_cap = window_cap
        self._rng = random.Random(seed)
        self._tables = {}
        self.window = ()
        self.emitted = 0

    @property
    def q(self) -> int:
        return self.measure.q

    @property
    def exact(self) -> bool:
        return self.window_cap is None

    def metadata(self) -> dict:
        return {
            "q": self.q,
            "seed": self.rng_seed,
            "rng": RNG_ID,
            "window_cap": self.window_cap,
            "exact": self.exact,
        }

    def restart(self) -> None:
        """Forget the history but keep the RNG state, starting a fresh independent stretch."""
        self.window = ()

    def _table(self, window: tuple) -> tuple:
        t = self._tables.get(window)
        if t is None:
            try:
                cond = self.measure.conditionals(window)
            except ZeroDivisionError as exc:
                raise InvariantViolation(f"null window {window}") from exc
            t = self._tables[window] = cumulative_thresholds(cond)
        return t

    def next_color(self) -> int:
        if self.window_cap is None and len(self.window) + 1 > self.measure.max_length:
            raise WordTooLongError(
                f"exact sampling is limited to {self.measure.max_length} colors; "
                "set window_cap for longer stretches"
            )
        u = self._rng.getrandbits(_SHIFT)
        table = self._table(self.window)
        for color, scaled_num, den in table:
            if u * den < scaled_num:
                break
        else:  # pragma: no cover - the last threshold is 2**64
            raise InvariantViolation("draw fell outside the unit interval")
        w = self.window + (color,)
        if self.window_cap is not None and len(w) > self.window_cap:
            w = w[len(w) - self.window_cap :] if self.window_cap else ()
        self.window = w
        self.emitted += 1
        return color

    def sample_n(self, n: int) -> Word:
        if n < 0:
            raise ValueError("n must be nonnegative")
        return Word(self.q, tuple(self.next_color() for _ in range(n)))
