"""Sphere and ball sizes in the multi-cover metric.

All counts are exact Python integers.  Three sources are available for the
per-block sphere sizes S_r^{m,n}: a brute-force count, the full-radius
recursion, and the UB/DC sandwich which only gives an interval for r >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

from multicover.mctuple import ShapeProfile, pattern_weight

BRUTE_LIMIT_BITS = 22


def _check_q(q: int):
    if q < 2:
        raise ValueError("q must be at least 2")


@lru_cache(maxsize=None)
def _pattern_histogram(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    """hist[w][k] = number of m x n 0/1 patterns with k ones and cover weight w."""
    size = m * n
    hist = [[0] * (size + 1) for _ in range(min(m, n) + 1)]
    for pat in range(1 << size):
        hist[pattern_weight(m, n, pat)][pat.bit_count()] += 1
    return tuple(tuple(row) for row in hist)


def sphere_bruteforce(q: int, m: int, n: int, r: int) -> int:
    """Number of m x n matrices of cover weight r, by exhaustion.

    Matrices are grouped by their zero pattern: a pattern with k nonzero
    positions stands for (q-1)^k matrices, all of the same weight.  That needs
    2^{mn} patterns instead of q^{mn} matrices.
    """
    _check_q(q)
    if m * n > BRUTE_LIMIT_BITS:
        raise ValueError("too large for brute force")
    if r < 0 or r > min(m, n):
        return 0
    return sum(c * (q - 1) ** k for k, c in enumerate(_pattern_histogram(m, n)[r]))


def s1_exact(q: int, m: int, n: int) -> int:
    return n * (q**m - 1) + m * (q**n - 1) - m * n * (q - 1)


@lru_cache(maxsize=None)
def count_no_zero_lines(q: int, m: int, n: int) -> int:
    """T^{m,n}: matrices with no zero row and no zero column."""
    if m == 0 and n == 0:
        return 1
    if m == 0 or n == 0:
        return 0
    total = q ** (m * n)
    for i in range(m + 1):
        for j in range(n + 1):
            if i or j:
                total -= comb(m, i) * comb(n, j) * count_no_zero_lines(q, m - i, n - j)
    return total


@lru_cache(maxsize=None)
def full_sphere_recursion(q: int, m: int, n: int) -> int:
    """S_n^{m,n} from the full-radius recursion.

    Remainders with a zero dimension count as 1.  With that convention the
    recursion agrees with brute force at 2 x 2.  Arguments with n > m are
    swapped, since the count is symmetric.
    """
    if n > m:
        m, n = n, m
    if n == 0:
        return 1
    if n == 1:
        return q**m - 1
    total = q ** (m * n)
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            total -= comb(m, i) * comb(n, j) * full_sphere_recursion(q, m - i, n - j)
    return total


def multinomial(m: int, s: int, t: int) -> int:
    """m! / (s! t! (m-s-t)!), except 0 when s = t = 0 or s + t > m."""
    if (s == 0 and t == 0) or s < 0 or t < 0 or s + t > m:
        return 0
    return factorial(m) // (factorial(s) * factorial(t) * factorial(m - s - t))


def ub(q: int, m: int, n: int, r: int) -> int:
    return sum(comb(m, s) * comb(n, r - s) * (q ** (m - s) - 1) ** (r - s)
               * (q ** (n - r + s) - 1) ** s * q ** (s * (r - s))
               for s in range(r + 1))


def _dc_terms(q: int, m: int, n: int, r: int):
    """Yield (common factor, inner-upper factor, inner-lower factor) per summand."""
    for w in range(r):
        for u in range(w + 1):
            outer = comb(m, u) * comb(n, w - u)
            if outer == 0:
                continue
            for s in range(r - w + 1):
                for t in range(s, r - w + 1):
                    c1 = multinomial(m - u, s, t)
                    c2 = multinomial(n - w + u, r - w - s, r - w - t)
                    if c1 == 0 or c2 == 0:
                        continue
                    vert = q ** (t + s) * (q ** (m - u - s - t) - 1) + (q**s - 1) * (q**t - 1)
                    a, b = r - w - t, r - w - s
                    horiz = q ** (a + b) * (q ** (n - (w - u) - a - b) - 1) + (q**b - 1) * (q**a - 1)
                    common = outer * c1 * c2 * q ** (u * (w - u)) * vert ** (w - u) * horiz**u
                    hi = count_no_zero_lines(q, t, b) * count_no_zero_lines(q, s, a)
                    lo = (q - 1) ** (t * b + s * a)
                    yield common, hi, lo


def dc_bounds(q: int, m: int, n: int, r: int) -> tuple[int, int]:
    """(lower, upper) estimates of the double-counting excess DC_r."""
    lo = hi = 0
    for common, f_hi, f_lo in _dc_terms(q, m, n, r):
        hi += common * f_hi
        lo += common * f_lo
    return lo, hi


@lru_cache(maxsize=None)
def sphere_bounds(q: int, m: int, n: int, r: int) -> tuple[int, int]:
    """(UB_r - DC_hi, UB_r - DC_lo) with the lower end clamped at 0.

    Evaluated as displayed, without repair.  For r >= 2 the result does not
    always contain S_r and can even have upper < lower; callers that need a
    guaranteed enclosure should use exact mode.
    """
    _check_q(q)
    if m < 1 or n < 1 or not 1 <= r <= min(m, n):
        raise ValueError("radius out of range")
    u = ub(q, m, n, r)
    dc_lo, dc_hi = dc_bounds(q, m, n, r)
    return max(0, u - dc_hi), u - dc_lo


def asymptotic_ratio(q: int, m: int, n: int, r: int) -> float:
    """C(n, r) q^{mr} / S_r^{m,n} for n <= m.

    Tends to 1 as q grows when n < m; for square blocks rows and columns tie
    and the limit is 1/2.
    """
    return comb(n, r) * q ** (m * r) / sphere_bruteforce(q, m, n, r)


# -- tables and balls ---------------------------------------------------------------


@dataclass
class SphereTable:
    """Memo of per-block sphere sizes with their provenance."""

    q: int
    memo: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)

    def exact(self, m: int, n: int, r: int) -> int:
        key = (m, n, r)
        if key not in self.memo or self.source[key] == "bounds":
            if r == 0:
                val, src = 1, "bruteforce"
            elif r > min(m, n) or r < 0:
                val, src = 0, "bruteforce"
            elif r == 1:
                val, src = s1_exact(self.q, m, n), "recursion"
            elif m * n <= BRUTE_LIMIT_BITS:
                val, src = sphere_bruteforce(self.q, m, n, r), "bruteforce"
            else:
                raise ValueError("too large for exact mode")
            self.memo[key] = (val, val)
            self.source[key] = src
        return self.memo[key][0]

    def interval(self, m: int, n: int, r: int) -> tuple[int, int]:
        key = (m, n, r)
        if key in self.memo:
            return self.memo[key]
        if r == 0:
            val = (1, 1)
        elif r < 0 or r > min(m, n):
            val = (0, 0)
        else:
            val = sphere_bounds(self.q, m, n, r)
        self.memo[key] = val
        self.source[key] = "bounds"
        return val

    def entries(self) -> list[dict]:
        out = []
        for (m, n, r), (lo, hi) in sorted(self.memo.items()):
            out.append({"m": m, "n": n, "r": r, "lower": lo, "upper": hi,
                        "source": self.source[(m, n, r)]})
        return out


def _convolve(a: list[int], b: list[int], cap: int) -> list[int]:
    out = [0] * (cap + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if i + j > cap:
                break
            out[i + j] += x * y
    return out


def sphere_sizes(shape: ShapeProfile, q: int, r: int, mode: str = "exact",
                 table: SphereTable | None = None):
    """S_0..S_r for the whole product space (pairs of lists in bounds mode)."""
    table = table or SphereTable(q)
    if mode == "exact":
        acc = [1] + [0] * r
        for m, n in shape.blocks:
            acc = _convolve(acc, [table.exact(m, n, j) for j in range(min(m, n, r) + 1)], r)
        return acc
    if mode == "bounds":
        lo, hi = [1] + [0] * r, [1] + [0] * r
        for m, n in shape.blocks:
            iv = [table.interval(m, n, j) for j in range(min(m, n, r) + 1)]
            lo = _convolve(lo, [x for x, _ in iv], r)
            hi = _convolve(hi, [y for _, y in iv], r)
        return lo, hi
    raise ValueError(f"unknown mode {mode!r}")


def ball_size(shape: ShapeProfile, q: int, r: int, mode: str = "exact",
              table: SphereTable | None = None):
    """B_r, or an interval (lower, upper) in bounds mode."""
    if r < 0:
        raise ValueError("radius out of range")
    if mode == "exact":
        return sum(sphere_sizes(shape, q, r, "exact", table))
    lo, hi = sphere_sizes(shape, q, r, mode, table)
    return sum(lo), sum(hi)
