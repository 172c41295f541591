"""Cardinality bounds for codes in the multi-cover metric.

Every evaluator works on exact integers (or Fractions before the final
floor).  Results are wrapped in BoundReport so inapplicable bounds carry a
reason instead of a value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from multicover import spherecount
from multicover.mctuple import ShapeProfile


class NotApplicable(ValueError):
    pass


@dataclass
class BoundReport:
    name: str
    value: int | None = None
    applicable: bool = True
    reason: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.applicable != (self.value is not None):
            raise ValueError("value must be present exactly when applicable")

    @classmethod
    def na(cls, name: str, reason: str) -> "BoundReport":
        return cls(name, None, False, reason)

    def to_json(self) -> dict:
        out = {"name": self.name, "applicable": self.applicable, "value": self.value}
        if self.reason:
            out["reason"] = self.reason
        if self.extra:
            out["extra"] = self.extra
        return out


def _need_checked(shape: ShapeProfile):
    if shape.unchecked:
        raise ValueError("shape is not normalised (need n_i <= m_i and m non-increasing)")


def ceil_log(q: int, x: int) -> int:
    """Smallest k >= 0 with q^k >= x."""
    k, p = 0, 1
    while p < x:
        p *= q
        k += 1
    return k


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


# -- Singleton ---------------------------------------------------------------------


def singleton_decompose(shape: ShapeProfile, d: int) -> tuple[int, int]:
    """(j, delta), 1-based j, with d - 1 = n_1 + ... + n_{j-1} + delta, 0 <= delta < n_j."""
    _need_checked(shape)
    if not 1 <= d <= shape.N:
        raise ValueError("d out of range")
    rest = d - 1
    for j, nj in enumerate(shape.n, start=1):
        if rest < nj:
            return j, rest
        rest -= nj
    raise AssertionError("unreachable for d <= N")


def singleton_exponent(shape: ShapeProfile, d: int) -> int:
    j, delta = singleton_decompose(shape, d)
    return sum(m * n for m, n in shape.blocks[j - 1:]) - shape.m[j - 1] * delta


def singleton_bound(shape: ShapeProfile, q: int, d: int) -> int:
    return q ** singleton_exponent(shape, d)


# -- bounds for equal numbers of rows ------------------------------------------------


def _hamming(m, N, q, d):
    Q = q**m
    t = (d - 1) // 2
    vol = sum(comb(N, j) * (Q - 1) ** j for j in range(t + 1))
    return Q**N // vol


def _plotkin(m, N, q, d):
    Q = q**m
    if not Q * d > (Q - 1) * N:
        raise NotApplicable(f"need d > (q^m-1)N/q^m, got d = {d}")
    return (Q * d) // (Q * d - (Q - 1) * N)


def _elias_table(m, N, q, d) -> dict[int, int]:
    Q = q**m
    table = {}
    wmax = (N * (Q - 1)) // Q
    for w in range(wmax + 1):
        den = Q * w * w + N * (d - 2 * w) * (Q - 1)
        if den <= 0:
            continue
        vol = sum(comb(N, j) * (Q - 1) ** j for j in range(w + 1))
        val = Fraction(N * d * (Q - 1), den) * Fraction(Q**N, vol)
        table[w] = val.numerator // val.denominator
    return table


def equal_rows_bounds(m: int, n_list, q: int, d: int) -> dict[str, BoundReport]:
    N = sum(n_list)
    if not 1 <= d <= N:
        raise ValueError("d out of range")
    out = {"singleton": BoundReport("singleton", q ** (m * (N - d + 1)))}
    out["hamming"] = BoundReport("hamming", _hamming(m, N, q, d))
    try:
        out["plotkin"] = BoundReport("plotkin", _plotkin(m, N, q, d))
    except NotApplicable as exc:
        out["plotkin"] = BoundReport.na("plotkin", f"not applicable: {exc}")
    table = _elias_table(m, N, q, d)
    if table:
        best = min(table, key=lambda w: (table[w], w))
        out["elias"] = BoundReport("elias", table[best],
                                   extra={"w": best, "table": {str(w): v for w, v in table.items()}})
    else:
        out["elias"] = BoundReport.na("elias", "not applicable: no w with positive denominator")
    return out


# -- sphere packing --------------------------------------------------------------------


def sphere_packing_report(shape: ShapeProfile, q: int, d: int) -> BoundReport:
    _need_checked(shape)
    if d < 1:
        raise ValueError("d out of range")
    r = (d - 1) // 2
    space = q**shape.total
    try:
        ball = spherecount.ball_size(shape, q, r, "exact")
        source = "exact"
    except ValueError:
        ball = spherecount.ball_size(shape, q, r, "bounds")[0]
        source = "lower estimate"
    return BoundReport("sphere", space // ball, extra={"r": r, "ball": ball, "ball_source": source})


def sphere_packing_bound(shape: ShapeProfile, q: int, d: int) -> int:
    return sphere_packing_report(shape, q, d).value


def projective_decompose(shape: ShapeProfile, d: int) -> tuple[int, int]:
    """(j, delta) with d - 3 = n_1 + ... + n_j + delta, 1 <= j <= l-1, 1 <= delta <= n_{j+1}-1."""
    if not 3 <= d <= shape.N:
        raise NotApplicable("not applicable: no valid (j, δ)")
    for j in range(1, shape.l):
        delta = d - 3 - sum(shape.n[:j])
        if 1 <= delta <= shape.n[j] - 1:
            return j, delta
    raise NotApplicable("not applicable: no valid (j, δ)")


def projective_sphere_packing(shape: ShapeProfile, q: int, d: int) -> int:
    """The projective sphere-packing quotient, evaluated as displayed.

    The summand of the denominator does not depend on the summation index,
    so the sum is (l - j) copies of it.
    """
    _need_checked(shape)
    j, delta = projective_decompose(shape, d)
    n2 = list(shape.n)
    n2[j] -= delta  # 0-based position of n_{j+1}
    num = q ** sum(shape.m[i] * n2[i] for i in range(j, shape.l))
    nj1, mj1, mj = n2[j], shape.m[j], shape.m[j - 1]
    term = nj1 * (q**mj - 1) + mj1 * (q**nj1 - 1) - mj1 * nj1 * (q - 1)
    return num // (1 + (shape.l - j) * term)


# -- bounds on l for MMCD codes ---------------------------------------------------------


def ell_regime(q: int, n: int) -> bool:
    return (q >= 4 and n >= 2) or (q == 3 and n >= 3) or (q == 2 and n >= 4)


def ell_bounds(q: int, n: int, d: int, m: int | None = None) -> dict:
    m = n if m is None else m
    if d < 3:
        raise ValueError("d < 3 unsupported")
    delta = (d - 3) % n
    nd = n - delta
    num = q ** (2 * m) - 1 - m * (q**nd - 1) - nd * (q**m - 1) + m * nd * (q - 1)
    den = m * (q**n - 1) + n * (q**m - 1) - m * n * (q - 1)
    tail = (d - 3) // n + 1
    tight = m == n and ell_regime(q, n)
    return {
        "eq4": num // den + tail,
        "eq5": (2 * q**n) // (3 * n) + tail,
        "eq_mds_derived": (q**n + d - 2) // n,
        "delta": delta,
        "regime": tight,
        "eq4_le_eq5_claimed": tight,
        "eq5_le_mds_claimed": tight,
    }


# -- perfect codes -----------------------------------------------------------------


def perfect_feasibility(shape: ShapeProfile, q: int, d: int) -> dict:
    _need_checked(shape)
    if d % 2 == 0:
        raise ValueError("d even")
    r = (d - 1) // 2
    space = q**shape.total
    n = shape.n[0]
    square = all(mi == n and ni == n for mi, ni in shape.blocks)
    if square and d == 3 and q % 2 == 0 and (n % 2 == 0 or shape.l % 2 == 0):
        ball = 1 + shape.l * n * (2 * (q**n - 1) - n * (q - 1))
        return {"status": "infeasible", "feasible": False,
                "reason": f"1 + l n (2(q^n - 1) - n(q - 1)) = {ball} is odd, so not a power of q"}
    try:
        ball = spherecount.ball_size(shape, q, r, "exact")
    except ValueError:
        return {"status": "unknown", "feasible": None, "reason": "ball size not computable exactly"}
    divides = space % ball == 0
    return {"status": "unknown", "feasible": None, "ball": ball, "divides": divides,
            "reason": f"B_{r} = {ball} {'divides' if divides else 'does not divide'} q^{shape.total}"}


# -- Gilbert-Varshamov --------------------------------------------------------------------


def gv_dimension(shape: ShapeProfile, q: int, d: int) -> int:
    _need_checked(shape)
    if not 1 <= d <= shape.N:
        raise ValueError("d out of range")
    ball = spherecount.ball_size(shape, q, d - 1, "exact")
    return ceil_log(q, ceil_div(q**shape.total, ball))


GV_BUDGET = 1 << 20


def gv_greedy_witness(shape: ShapeProfile, field, d: int, budget: int = GV_BUDGET):
    """Greedily grow a code of distance >= d; returns a LinearCode.

    A candidate v can join code C iff every element of the coset v + C has
    weight >= d.  Cosets only grow, so one pass over the candidates is enough.
    """
    import numpy as np

    from multicover import gflinalg, lincode
    from multicover.mctuple import batch_weights

    if not 1 <= d <= shape.N:
        raise ValueError("d out of range")
    q, total = field.order, shape.total
    if q**total > budget:
        raise ValueError("witness search infeasible")
    words = np.zeros((1, total), dtype=np.int64)
    basis = []
    for _, cands in gflinalg.span(field, np.eye(total, dtype=np.int64), chunk=1 << 14):
        w = batch_weights(shape, cands)
        for v in cands[w >= d]:
            if batch_weights(shape, field.vadd(words, v[None, :])).min() < d:
                continue
            basis.append(v)
            words = np.concatenate([field.vadd(words, field.vmul(a, v)[None, :])
                                    for a in range(q)])
    return lincode.code_make(shape, field, basis)


def all_bounds(shape: ShapeProfile, q: int, d: int) -> dict[str, BoundReport]:
    """Every bound that can be evaluated for the given parameters."""
    out: dict[str, BoundReport] = {}
    out["singleton"] = BoundReport("singleton", singleton_bound(shape, q, d))
    if len(set(shape.m)) == 1:
        eq = equal_rows_bounds(shape.m[0], shape.n, q, d)
        for key in ("hamming", "plotkin", "elias"):
            out[key] = eq[key]
    else:
        for key in ("hamming", "plotkin", "elias"):
            out[key] = BoundReport.na(key, "not applicable: unequal row counts")
    out["sphere"] = sphere_packing_report(shape, q, d)
    try:
        out["projective"] = BoundReport("projective", projective_sphere_packing(shape, q, d))
    except NotApplicable as exc:
        out["projective"] = BoundReport.na("projective", str(exc))
    square = len(set(shape.m)) == 1 and len(set(shape.n)) == 1
    if square and d >= 3:
        eb = ell_bounds(q, shape.n[0], d, shape.m[0])
        out["ell"] = BoundReport("ell", eb["eq4"], extra=eb)
    else:
        out["ell"] = BoundReport.na("ell", "not applicable: needs equal blocks and d >= 3")
    try:
        out["gv"] = BoundReport("gv", gv_dimension(shape, q, d),
                                extra={"meaning": "a linear code of this dimension exists"})
    except ValueError as exc:
        out["gv"] = BoundReport.na("gv", str(exc))
    return out
