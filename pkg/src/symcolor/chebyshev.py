"""The coefficient sequences C(n) = T_n(sqrt(q)/2) and D(n) = sqrt(q) U_{n-1}(sqrt(q)/2).

Both satisfy ``s(n+1) = sqrt(q) s(n) - s(n-1)``. C is extended to negative
indices as an even function and D as an odd function.
"""

from __future__ import annotations

import threading
from math import comb

from .exactnum import QAdjoined, Rational, _check_q

__all__ = ["CoeffTable", "coeff_c", "coeff_d", "coeff_oracle"]


class CoeffTable:
    """Memoized C(n), D(n) for one ``q``.

    Only indices ``n >= 0`` are stored; requesting ``n`` fills ``0..|n|``.
    Cache fills are guarded by a lock so a table can be shared across threads.
    """

    def __init__(self, q: int):
        self.q = _check_q(q)
        self._root = QAdjoined.sqrt(q)
        self._c = [QAdjoined(q, 1), QAdjoined(q, 0, Rational(1, 2))]
        self._d = [QAdjoined(q, 0), QAdjoined(q, 0, 1)]
        self._lock = threading.Lock()

    def __repr__(self):
        return f"CoeffTable(q={self.q}, filled={len(self._c)})"

    def _extend(self, seq: list, m: int) -> None:
        with self._lock:
            root = self._root
            while len(seq) <= m:
                seq.append(root * seq[-1] - seq[-2])

    def c(self, n: int) -> QAdjoined:
        m = -n if n < 0 else n
        if m >= len(self._c):
            self._extend(self._c, m)
        return self._c[m]

    def d(self, n: int) -> QAdjoined:
        if n < 0:
            return -self.d(-n)
        if n >= len(self._d):
            self._extend(self._d, n)
        return self._d[n]

    def perturb_c(self, n: int, delta: int = 1) -> None:
        """Fault injection: add ``delta`` to the cached C(|n|).

        Entries above ``|n|`` that are already cached keep their old values.
        Only for checking that the verification suites can fail.
        """
        m = abs(n)
        self.c(m)
        with self._lock:
            self._c[m] = self._c[m] + delta


def coeff_c(table: CoeffTable, n: int) -> QAdjoined:
    return table.c(n)


def coeff_d(table: CoeffTable, n: int) -> QAdjoined:
    return table.d(n)


def _power(x: QAdjoined, k: int) -> QAdjoined:
    out = QAdjoined(x.q, 1)
    for _ in range(k):
        out = out * x
    return out


def coeff_oracle(q: int, n: int, kind: str) -> QAdjoined:
    """Evaluate C(n) or D(n) from the explicit binomial sums for T_n and U_n.

    Independent of :class:`CoeffTable`; meant for cross-checking only.
    """
    _check_q(q)
    if n < 0:
        raise ValueError("the binomial-sum oracle needs n >= 0")
    u = QAdjoined(q, 0, Rational(1, 2))
    u2m1 = Rational(q, 4) - 1  # u**2 - 1 is rational
    if kind == "C":
        total = QAdjoined(q)
        for k in range(n // 2 + 1):
            total = total + _power(u, n - 2 * k).scale(comb(n, 2 * k) * u2m1**k)
        return total
    if kind == "D":
        if n == 0:
            return QAdjoined(q)
        m = n - 1  # D(n) = sqrt(q) * U_{n-1}(u)
        total = QAdjoined(q)
        for k in range(m // 2 + 1):
            total = total + _power(u, m - 2 * k).scale(comb(m + 1, 2 * k + 1) * u2m1**k)
        return QAdjoined.sqrt(q) * total
    raise ValueError(f"kind must be 'C' or 'D', got {kind!r}")
