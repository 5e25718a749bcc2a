"""Cylinder probabilities of the symmetric 1-dependent q-coloring.

For a proper word ``x`` of length ``n``::

    P(x) = 1/D(n+1) * sum_{i=1..n} C(n-2i+1) * P(x with entry i deleted)

with ``P(()) = 1`` and ``P(x) = 0`` for improper ``x``. The sum is carried out
in Q[sqrt(q)]; the sqrt(q) parts cancel and every P is rational.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .chebyshev import CoeffTable
from .exactnum import ParameterError, QAdjoined, Rational, _check_q, as_rational, qadj_div_exact

__all__ = [
    "Word",
    "CylinderMeasure",
    "ColorRangeError",
    "WordTooLongError",
    "ConditioningError",
    "DomainError",
    "is_proper",
    "delete_at",
    "relabel",
    "DEFAULT_MAX_LENGTH",
]

DEFAULT_MAX_LENGTH = 24

_ZERO = Rational(0)

Colors = Sequence[int]


class ColorRangeError(ValueError):
    pass


class WordTooLongError(ValueError):
    pass


class ConditioningError(ZeroDivisionError):
    """Conditioning on an event of probability zero."""


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Word:
    """A finite color sequence over ``{1, ..., q}``. Improper words are allowed."""

    q: int
    colors: tuple

    def __post_init__(self):
        _check_q(self.q)
        colors = tuple(self.colors)
        for c in colors:
            if isinstance(c, bool) or not isinstance(c, int) or not 1 <= c <= self.q:
                raise ColorRangeError(f"color {c!r} not in [1, {self.q}]")
        object.__setattr__(self, "colors", colors)

    @classmethod
    def parse(cls, text: str, q: int) -> Word:
        """Parse comma-separated colors, e.g. ``"1,2,3"``. Empty text is the empty word."""
        text = text.strip()
        if not text:
            return cls(q, ())
        try:
            colors = tuple(int(t) for t in text.split(","))
        except ValueError:
            raise ColorRangeError(f"malformed word {text!r}") from None
        return cls(q, colors)

    def __len__(self):
        return len(self.colors)

    def __iter__(self):
        return iter(self.colors)

    def __getitem__(self, i):
        return self.colors[i]

    def __str__(self):
        return ",".join(map(str, self.colors))

    @property
    def proper(self) -> bool:
        return is_proper(self.colors)

    def delete_at(self, i: int) -> Word:
        return Word(self.q, delete_at(self.colors, i))

    def reversed(self) -> Word:
        return Word(self.q, self.colors[::-1])

    def permuted(self, perm: Sequence[int]) -> Word:
        """Apply a color permutation given as ``perm[c-1] = image of c``."""
        return Word(self.q, tuple(perm[c - 1] for c in self.colors))

    def __add__(self, other: Word) -> Word:
        if other.q != self.q:
            raise ParameterError("words over different palettes")
        return Word(self.q, self.colors + other.colors)


def is_proper(x: Union[Word, Colors]) -> bool:
    colors = x.colors if isinstance(x, Word) else x
    return all(colors[k] != colors[k + 1] for k in range(len(colors) - 1))


def delete_at(x: Union[Word, Colors], i: int):
    """Remove entry ``i`` (1-based)."""
    if isinstance(x, Word):
        return x.delete_at(i)
    n = len(x)
    if not 1 <= i <= n:
        raise IndexError(f"deletion index {i} out of range 1..{n}")
    x = tuple(x)
    return x[: i - 1] + x[i:]


def relabel(x: Colors) -> tuple:
    """Rename colors in order of first appearance: (3,1,3,2) -> (1,2,1,3)."""
    names = {}
    return tuple(names.setdefault(c, len(names) + 1) for c in x)


class CylinderMeasure:
    """Exact evaluator of P, Q, Q* and conditionals for a fixed ``q``.

    Values are memoized on the exact color tuple. With ``canonical=True`` the
    memo is keyed on :func:`relabel` instead, which relies on invariance under
    color permutations and shrinks the memo considerably; both paths must
    agree (the test-suite checks this).

    Evaluation is exponential in the word length, so words longer than
    ``max_length`` are rejected.
    """

    def __init__(
        self,
        q: int,
        coeffs: CoeffTable = None,
        max_length: int = DEFAULT_MAX_LENGTH,
        canonical: bool = False,
    ):
        self.q = _check_q(q)
        if coeffs is None:
            coeffs = CoeffTable(q)
        elif coeffs.q != q:
            raise ParameterError(f"coefficient table is for q={coeffs.q}, not {q}")
        self.coeffs = coeffs
        self.max_length = max_length
        self.canonical = canonical
        self._lock = threading.RLock()
        self.clear()

    def __repr__(self):
        return (
            f"CylinderMeasure(q={self.q}, max_length={self.max_length}, "
            f"canonical={self.canonical}, memo={len(self._memo)})"
        )

    def clear(self) -> None:
        self._memo = {(): Rational(1)}
        self._cond = {}
        self._weight_cache = {}

    # -- input handling

    def _colors(self, x) -> tuple:
        if isinstance(x, Word):
            if x.q != self.q:
                raise ParameterError(f"word is over q={x.q}, measure has q={self.q}")
            colors = x.colors
        else:
            colors = Word(self.q, x).colors
        if len(colors) > self.max_length:
            raise WordTooLongError(
                f"word length {len(colors)} exceeds the cap {self.max_length}"
            )
        return colors

    # -- core recursion

    def _raw(self, x: tuple, weights: tuple) -> QAdjoined:
        """sum_i weights[i-1] * P(x minus entry i) in Q[sqrt(q)], x proper."""
        n = len(x)
        sa = sb = _ZERO
        for i in range(1, n + 1):
            # deleting entry i breaks propriety only if its neighbours agree
            if 1 < i < n and x[i - 2] == x[i]:
                continue
            p = self._p(x[: i - 1] + x[i:])
            ca, cb = weights[i - 1]
            if ca:
                sa += ca * p
            if cb:
                sb += cb * p
        return QAdjoined._raw(self.q, sa, sb)

    def _weights(self, kind: str, n: int) -> tuple:
        """Deletion weights for length ``n`` as ``(a, b)`` pairs, i = 1..n."""
        key = (kind, n)
        w = self._weight_cache.get(key)
        if w is None:
            c, d = self.coeffs.c, self.coeffs.d
            if kind == "P":
                vals = [c(n - 2 * i + 1) for i in range(1, n + 1)]
            elif kind == "Q":
                vals = [c(2 * i) for i in range(1, n + 1)]
            elif kind == "Q*":
                vals = [c(2 * n - 2 * i + 2) for i in range(1, n + 1)]
            elif kind == "D":
                vals = [d(n - 2 * i + 1) for i in range(1, n + 1)]
            else:
                raise ValueError(kind)
            w = self._weight_cache[key] = tuple((v.a, v.b) for v in vals)
        return w

    def _unreduced(self, x: tuple) -> QAdjoined:
        n = len(x)
        return qadj_div_exact(self._raw(x, self._weights("P", n)), self.coeffs.d(n + 1))

    def _p(self, x: tuple) -> Rational:
        key = relabel(x) if self.canonical else x
        v = self._memo.get(key)
        if v is None:
            v = as_rational(self._unreduced(x))
            self._memo[key] = v
        return v

    # -- public API

    def prob(self, x) -> Rational:
        """Cylinder probability P(x)."""
        x = self._colors(x)
        if not is_proper(x):
            return Rational(0)
        with self._lock:
            return self._p(x)

    def sqrt_q_component(self, x) -> Rational:
        """The sqrt(q) coefficient of P(x) before conversion to a rational.

        Recomputed from the cached sub-word values; zero for every proper word.
        """
        x = self._colors(x)
        if not x or not is_proper(x):
            return Rational(0)
        with self._lock:
            u = self._unreduced(x)
            if not u.b:
                self._memo.setdefault(relabel(x) if self.canonical else x, u.a)
            return u.b

    def q_functional(self, x, starred: bool = False) -> QAdjoined:
        """Q(x) (weights C(2i)) or, with ``starred``, Q*(x) (weights C(2n-2i+2)).

        Both are divided by D(n+1) and equal P(x) * C(n+1). For even ``n``
        that is a rational multiple of sqrt(q), so the value is returned as an
        element of Q[sqrt(q)].
        """
        x = self._colors(x)
        if not x or not is_proper(x):
            raise DomainError("Q and Q* are defined for proper nonempty words")
        with self._lock:
            raw = self._raw(x, self._weights("Q*" if starred else "Q", len(x)))
        return qadj_div_exact(raw, self.coeffs.d(len(x) + 1))

    def deletion_dsum(self, x) -> Rational:
        """sum_i D(n-2i+1) P(x minus entry i), divided by D(n+1).

        Vanishes for every proper nonempty word. The division makes the
        result rational without changing whether it is zero.
        """
        x = self._colors(x)
        if not x or not is_proper(x):
            raise DomainError("the D-weighted deletion sum needs a proper nonempty word")
        with self._lock:
            raw = self._raw(x, self._weights("D", len(x)))
        return as_rational(qadj_div_exact(raw, self.coeffs.d(len(x) + 1)))

    def conditionals(self, x) -> tuple:
        """``(P(x1)/P(x), ..., P(xq)/P(x))``; sums to 1."""
        x = self._colors(x)
        hit = self._cond.get(x)
        if hit is not None:
            return hit
        px = self.prob(x)
        if px == 0:
            raise ConditioningError(f"P({','.join(map(str, x))}) = 0")
        if len(x) + 1 > self.max_length:
            raise WordTooLongError(
                f"conditioning window {len(x)} leaves no room under the cap {self.max_length}"
            )
        out = tuple(self.prob(x + (a,)) / px for a in range(1, self.q + 1))
        self._cond[x] = out
        return out

    def conditional(self, x, a: int) -> Rational:
        """P(next color is ``a`` | window ``x``)."""
        if not 1 <= a <= self.q:
            raise ColorRangeError(f"color {a!r} not in [1, {self.q}]")
        return self.conditionals(x)[a - 1]

    def gap_prob(self, x, y) -> Rational:
        """P(x * y): ``x``, then one unconstrained site, then ``y``."""
        x = self._colors(x)
        y = self._colors(y)
        if not (is_proper(x) and is_proper(y)):
            return Rational(0)
        return sum((self.prob(x + (a,) + y) for a in range(1, self.q + 1)), Rational(0))

    def memo_size(self) -> int:
        return len(self._memo)


def proper_words(q: int, n: int) -> Iterable[tuple]:
    """All proper words of length ``n`` over ``{1..q}``, lexicographic order."""
    if n == 0:
        yield ()
        return
    stack = [(c,) for c in range(q, 0, -1)]
    while stack:
        w = stack.pop()
        if len(w) == n:
            yield w
            continue
        last = w[-1]
        for c in range(q, 0, -1):
            if c != last:
                stack.append(w + (c,))


__all__.append("proper_words")
