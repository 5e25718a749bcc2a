"""Executable verification suites.

The exact suites (identities, measure, golden) compare values in Q[sqrt(q)]
or Q with ``==`` and collect every failure. The sampler suite is
statistical and advisory.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chebyshev import CoeffTable
from .exactnum import QAdjoined, format_rational
from .measure import CylinderMeasure, is_proper, proper_words
from .sampler import RNG_ID, ColoringStream

__all__ = [
    "SuiteReport",
    "ConfigurationError",
    "MEASURE_CHECKS",
    "GOLDEN_FORMULAS",
    "FourColorReference",
    "make_table",
    "seeded_fault_index",
    "run_identity_suite",
    "run_measure_suite",
    "run_golden_suite",
    "run_sampler_suite",
]

MEASURE_CHECKS = (
    "rationality",
    "positivity",
    "consistency",
    "dsum",
    "qis",
    "permutation",
    "reflection",
    "one_dependence",
    "q4_collapse",
    "memo",
)

CHI2_ALPHA = 1e-3
INDEP_SIGMAS = 4.0


class ConfigurationError(ValueError):
    pass


@dataclass
class SuiteReport:
    suite_name: str
    q_range: list
    parameters: dict = field(default_factory=dict)
    checks_run: int = 0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, check: str, q: int, inputs, expected, actual) -> bool:
        self.checks_run += 1
        if not ok:
            self.failures.append(
                {
                    "check": check,
                    "q": q,
                    "input": _show(inputs),
                    "expected": _show(expected),
                    "actual": _show(actual),
                }
            )
        return ok

    def merge(self, other: SuiteReport) -> SuiteReport:
        if other.suite_name != self.suite_name:
            raise ValueError("cannot merge reports of different suites")
        return SuiteReport(
            suite_name=self.suite_name,
            q_range=sorted(set(self.q_range) | set(other.q_range)),
            parameters={**self.parameters, **other.parameters},
            checks_run=self.checks_run + other.checks_run,
            failures=self.failures + other.failures,
            elapsed=self.elapsed + other.elapsed,
            details={**self.details, **other.details},
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_text(self, max_failures: int = 20) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [
            f"{'suite':<10} {self.suite_name}",
            f"{'q':<10} {_show_q(self.q_range)}",
            f"{'checks':<10} {self.checks_run}",
            f"{'failures':<10} {len(self.failures)}",
            f"{'elapsed':<10} {self.elapsed:.2f}s",
            f"{'status':<10} {status}",
        ]
        for key, val in self.parameters.items():
            lines.append(f"  {key:<16} {val}")
        for key, val in self.details.items():
            lines.append(f"  {key:<16} {val}")
        for f in self.failures[:max_failures]:
            lines.append(
                f"  ! {f['check']} q={f['q']} input={f['input']} "
                f"expected={f['expected']} actual={f['actual']}"
            )
        if len(self.failures) > max_failures:
            lines.append(f"  ... {len(self.failures) - max_failures} more")
        return "\n".join(lines)


def _show(v) -> str:
    if isinstance(v, QAdjoined):
        return str(v)
    if isinstance(v, tuple) and all(isinstance(c, int) for c in v):
        return "(" + ",".join(map(str, v)) + ")"
    if hasattr(v, "numerator") and hasattr(v, "denominator") and not isinstance(v, bool):
        return format_rational(v)
    return str(v)


def _show_q(qs) -> str:
    qs = sorted(qs)
    if len(qs) > 2 and qs == list(range(qs[0], qs[-1] + 1)):
        return f"{qs[0]}..{qs[-1]}"
    return ",".join(map(str, qs))


def make_table(q: int, fault_index: int = None) -> CoeffTable:
    """A coefficient table, optionally with C(fault_index) increased by one."""
    table = CoeffTable(q)
    if fault_index is not None:
        table.perturb_c(fault_index, 1)
    return table


def seeded_fault_index(seed: int, upper: int = 3) -> int:
    """Pick the C index to perturb, uniformly from ``0..upper``."""
    return random.Random(seed).randint(0, upper)


# -- Chebyshev-sequence identities


def run_identity_suite(
    q_set: Iterable[int],
    mn_bound: int = 30,
    jkl_bound: int = 15,
    fault_index: int = None,
) -> SuiteReport:
    """Product identities for C and D over ``|m|, |n| <= mn_bound`` and ``|j|, |k|, |l| <= jkl_bound``."""
    q_set = list(q_set)
    report = SuiteReport(
        "identities",
        q_set,
        {"mn_bound": mn_bound, "jkl_bound": jkl_bound, "fault_index": fault_index},
    )
    t0 = time.perf_counter()
    mn = range(-mn_bound, mn_bound + 1)
    jkl = range(-jkl_bound, jkl_bound + 1)
    for q in q_set:
        t = make_table(q, fault_index)
        C, D = t.c, t.d
        ratio = Fraction(q - 4, 2 * q)
        for m in mn:
            for n in mn:
                lhs = C(m) * C(n) * 2
                rhs = C(m + n) + C(n - m)
                report.check(lhs == rhs, "2C(m)C(n)=C(m+n)+C(n-m)", q, (m, n), rhs, lhs)
                lhs = (D(m) * D(n)).scale(ratio)
                rhs = C(m + n) - C(n - m)
                report.check(lhs == rhs, "(q-4)/(2q)D(m)D(n)=C(m+n)-C(n-m)", q, (m, n), rhs, lhs)
                lhs = C(m) * D(n) * 2
                rhs = D(m + n) + D(n - m)
                report.check(lhs == rhs, "2C(m)D(n)=D(m+n)+D(n-m)", q, (m, n), rhs, lhs)
        for j in jkl:
            for k in jkl:
                for l in jkl:
                    lhs = C(j + k) * D(k + l)
                    rhs = C(k) * D(j + k + l) - C(l) * D(j)
                    report.check(
                        lhs == rhs, "C(j+k)D(k+l)=C(k)D(j+k+l)-C(l)D(j)", q, (j, k, l), rhs, lhs
                    )
    report.elapsed = time.perf_counter() - t0
    return report


# -- the measure itself


class FourColorReference:
    """Direct evaluator of the q=4 recursion P(x) = 1/(2(n+1)) * sum_i P(x minus entry i).

    Uses :class:`fractions.Fraction` and no coefficient table, so it is
    independent of the general evaluator.
    """

    def __init__(self):
        self._memo = {(): Fraction(1)}

    def prob(self, x: Sequence[int]) -> Fraction:
        x = tuple(x)
        if not is_proper(x):
            return Fraction(0)
        v = self._memo.get(x)
        if v is None:
            n = len(x)
            total = sum((self.prob(x[:i] + x[i + 1 :]) for i in range(n)), Fraction(0))
            v = self._memo[x] = total / (2 * (n + 1))
        return v


def _permutations(q: int, count: int, rng: random.Random) -> list:
    """All permutations when there are at most 24, else ``count`` random ones."""
    if math.factorial(q) <= 24:
        return list(itertools.permutations(range(1, q + 1)))
    out = []
    for _ in range(count):
        p = list(range(1, q + 1))
        rng.shuffle(p)
        out.append(tuple(p))
    return out


def _measure_for_q(
    q: int,
    max_len: int,
    checks: tuple,
    dep_len: int,
    n_perms: int,
    seed: int,
    fault_index: int,
    canonical: bool,
) -> SuiteReport:
    report = SuiteReport("measure", [q])
    m = CylinderMeasure(q, coeffs=make_table(q, fault_index), canonical=canonical)
    rng = random.Random(seed * 1_000_003 + q)
    ref = FourColorReference() if q == 4 and "q4_collapse" in checks else None
    C = m.coeffs.c
    one = Fraction(1)
    snapshot = {} if "memo" in checks else None

    for n in range(max_len + 1):
        for x in proper_words(q, n):
            try:
                if "rationality" in checks and n:
                    b = m.sqrt_q_component(x)
                    report.check(b == 0, "rationality", q, x, 0, b)
                px = m.prob(x)
                if snapshot is not None:
                    snapshot[x] = px
                if "positivity" in checks:
                    report.check(0 < px <= one, "positivity", q, x, "0 < P <= 1", px)
                if "consistency" in checks:
                    total = sum((m.prob(x + (a,)) for a in range(1, q + 1)), Fraction(0))
                    report.check(total == px, "consistency", q, x, px, total)
                if "dsum" in checks and n:
                    s = m.deletion_dsum(x)
                    report.check(s == 0, "dsum", q, x, 0, s)
                if "qis" in checks and n:
                    target = C(n + 1).scale(px)
                    qv = m.q_functional(x)
                    qs = m.q_functional(x, starred=True)
                    report.check(qv == target, "Q=P*C(n+1)", q, x, target, qv)
                    report.check(qs == target, "Q*=P*C(n+1)", q, x, target, qs)
                if "permutation" in checks:
                    for p in _permutations(q, n_perms, rng):
                        y = tuple(p[c - 1] for c in x)
                        py = m.prob(y)
                        report.check(py == px, "permutation", q, (x, p), px, py)
                if "reflection" in checks:
                    pr = m.prob(x[::-1])
                    report.check(pr == px, "reflection", q, x, px, pr)
                if ref is not None:
                    pf = ref.prob(x)
                    report.check(pf == px, "q4_collapse", q, x, pf, px)
            except ArithmeticError as exc:
                report.check(False, "exception", q, x, "no error", repr(exc))

    if "one_dependence" in checks:
        for total_len in range(dep_len + 1):
            for lx in range(total_len + 1):
                ly = total_len - lx
                ys = list(proper_words(q, ly))
                for x in proper_words(q, lx):
                    try:
                        px = m.prob(x)
                    except ArithmeticError as exc:
                        report.check(False, "exception", q, x, "no error", repr(exc))
                        continue
                    for y in ys:
                        try:
                            lhs = m.gap_prob(x, y)
                            rhs = px * m.prob(y)
                        except ArithmeticError as exc:
                            report.check(False, "exception", q, (x, y), "no error", repr(exc))
                            continue
                        report.check(lhs == rhs, "one_dependence", q, (x, y), rhs, lhs)

    if snapshot is not None:
        m.clear()
        for x, v in snapshot.items():
            try:
                again = m.prob(x)
            except ArithmeticError as exc:
                again = repr(exc)
            report.check(again == v, "memo", q, x, v, again)
    return report


def run_measure_suite(
    q_set: Iterable[int],
    max_len: int,
    checks: Iterable[str] = MEASURE_CHECKS,
    dep_len: int = None,
    n_perms: int = 20,
    seed: int = 0,
    fault_index: int = None,
    canonical: bool = False,
    jobs: int = 1,
) -> SuiteReport:
    """Exhaustive exact checks of P over all proper words up to ``max_len``.

    ``dep_len`` bounds ``|x| + |y|`` in the 1-dependence check and defaults to
    ``max_len``. ``q4_collapse`` only applies when ``q == 4``.
    """
    q_set = list(q_set)
    checks = tuple(checks)
    unknown = set(checks) - set(MEASURE_CHECKS)
    if unknown:
        raise ConfigurationError(f"unknown checks: {sorted(unknown)}")
    if max_len < 0:
        raise ConfigurationError("max_len must be nonnegative")
    dep_len = max_len if dep_len is None else dep_len
    params = {
        "max_len": max_len,
        "dep_len": dep_len,
        "checks": list(checks),
        "n_perms": n_perms,
        "seed": seed,
        "fault_index": fault_index,
        "canonical": canonical,
    }
    t0 = time.perf_counter()
    args = [(q, max_len, checks, dep_len, n_perms, seed, fault_index, canonical) for q in q_set]
    if jobs > 1 and len(q_set) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_measure_star, args))
    else:
        parts = [_measure_for_q(*a) for a in args]
    report = SuiteReport("measure", [], params)
    for part in parts:
        report = report.merge(part)
    report.parameters = params
    report.elapsed = time.perf_counter() - t0
    return report


def _measure_star(args):
    return _measure_for_q(*args)


# -- closed forms for short words

GOLDEN_FORMULAS: dict = {
    (1,): lambda q: Fraction(1, q),
    (1, 2): lambda q: Fraction(1, q * (q - 1)),
    (1, 2, 1): lambda q: Fraction(1, q**2 * (q - 1)),
    (1, 2, 3): lambda q: Fraction(1, q**2 * (q - 2)),
    (1, 2, 1, 2): lambda q: Fraction(q - 3, q**2 * (q - 1) * (q**2 - 3 * q + 1)),
    (1, 2, 3, 4): lambda q: Fraction(1, q**2 * (q**2 - 3 * q + 1)),
}


def run_golden_suite(q_set: Iterable[int], fault_index: int = None) -> SuiteReport:
    q_set = list(q_set)
    report = SuiteReport("golden", q_set, {"fault_index": fault_index})
    t0 = time.perf_counter()
    for q in q_set:
        m = CylinderMeasure(q, coeffs=make_table(q, fault_index))
        for word, formula in GOLDEN_FORMULAS.items():
            if max(word) > q:
                continue
            expected = formula(q)
            try:
                actual = m.prob(word)
            except ArithmeticError as exc:
                report.check(False, "exception", q, word, expected, repr(exc))
                continue
            report.check(actual == expected, "closed form", q, word, expected, actual)
    report.elapsed = time.perf_counter() - t0
    return report


# -- statistical check of the sampler


def run_sampler_suite(
    q: int,
    n_samples: int,
    window_len: int = 3,
    seed: int = 0,
    measure: CylinderMeasure = None,
) -> SuiteReport:
    """Chi-square test of sampled windows against exact P, plus propriety and
    a cellwise check that ``X_1`` and ``X_3`` are independent.

    Each sample is a fresh exact stretch of ``max(window_len, 3)`` colors drawn
    from one seeded stream.
    """
    from scipy.stats import chi2

    if n_samples <= 0:
        raise ConfigurationError("n_samples must be positive")
    if window_len < 1:
        raise ConfigurationError("window_len must be at least 1")
    m = measure if measure is not None else CylinderMeasure(q)
    words = list(proper_words(q, window_len))
    expected = {w: m.prob(w) * n_samples for w in words}
    smallest = min(expected.values())
    if smallest < 5:
        raise ConfigurationError(
            f"expected cell count {float(smallest):.3g} < 5; increase n_samples"
        )

    report = SuiteReport(
        "sampler",
        [q],
        {"n_samples": n_samples, "window_len": window_len, "seed": seed, "rng": RNG_ID},
    )
    t0 = time.perf_counter()
    stretch = max(window_len, 3)
    stream = ColoringStream(m, seed=seed)
    counts = dict.fromkeys(words, 0)
    joint = [[0] * q for _ in range(q)]
    improper = 0
    for _ in range(n_samples):
        stream.restart()
        s = tuple(stream.next_color() for _ in range(stretch))
        if not is_proper(s):
            improper += 1
            continue
        counts[s[:window_len]] += 1
        joint[s[0] - 1][s[2] - 1] += 1
    report.check(improper == 0, "propriety", q, n_samples, 0, improper)

    stat = sum(float((counts[w] - e) ** 2 / e) for w, e in expected.items())
    dof = len(words) - 1
    p_value = float(chi2.sf(stat, dof)) if dof > 0 else 1.0
    report.check(p_value >= CHI2_ALPHA, "chi-square", q, f"dof={dof}", f"p>={CHI2_ALPHA}", p_value)

    total = sum(map(sum, joint))
    rows = [sum(r) / total for r in joint]
    cols = [sum(joint[a][b] for a in range(q)) / total for b in range(q)]
    worst = 0.0
    for a in range(q):
        for b in range(q):
            e = rows[a] * cols[b]
            se = math.sqrt(e * (1 - e) / total)
            z = abs(joint[a][b] / total - e) / se if se else 0.0
            worst = max(worst, z)
            report.check(
                z < INDEP_SIGMAS, "independence X1,X3", q, (a + 1, b + 1), f"|z|<{INDEP_SIGMAS}", z
            )
    report.details = {
        "chi2_statistic": round(stat, 4),
        "chi2_dof": dof,
        "chi2_p_value": p_value,
        "max_independence_z": round(worst, 4),
    }
    report.elapsed = time.perf_counter() - t0
    return report
