"""Acceptance criteria, one test per criterion.

Each test ends with a wall-clock budget check.  A summary line per criterion
is printed at the end of the run by the hook in conftest.py.
"""

import itertools
import time
from math import gcd

import numpy as np
import pytest

from multicover import bounds, construct, decode, lincode
from multicover import spherecount as sc
from multicover.ffield import gf
from multicover.mctuple import (MatrixTuple, MultiCover, ShapeProfile, batch_weights, mc_weight,
                                mc_weight_bruteforce, random_cover)

from conftest import example_code


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        if exc[0] is None:
            took = time.perf_counter() - self.start
            assert took < self.seconds, f"took {took:.1f}s, budget {self.seconds}s"


def test_criterion_01_example_code():
    with Budget(1):
        C = example_code()
        D = lincode.dual(C)
        assert C.dim == 3
        assert lincode.min_distance(C, "ham_col") == lincode.min_distance(C, "ham_row") == 3
        assert lincode.min_distance(C) == 2
        assert D.dim == 6 and lincode.min_distance(D) == 2
        assert not lincode.is_mmcd(C) and lincode.is_mmcd(D)
        assert not lincode.is_dually_mmcd(C)


def _exhaustive_agree(shape, q):
    F = gf(q)
    for v in itertools.product(range(q), repeat=shape.total):
        C = MatrixTuple.from_flat(shape, F, v)
        assert mc_weight(C) == mc_weight_bruteforce(C), C
    return q**shape.total


def test_criterion_02_metric_oracle():
    with Budget(60):
        assert _exhaustive_agree(ShapeProfile((3,), (3,)), 2) == 512
        assert _exhaustive_agree(ShapeProfile((2,), (2,)), 3) == 81
        assert _exhaustive_agree(ShapeProfile((2, 2), (2, 2)), 3) == 6561
        rng = np.random.default_rng(2)
        shapes = [ShapeProfile.uniform(m, n, l) for l in (1, 2, 3)
                  for m in range(1, 5) for n in range(1, m + 1)]
        for shape in shapes:
            for q in (2, 3, 4):
                F = gf(q)
                density = rng.random((500, 1))
                words = rng.integers(1, q, size=(500, shape.total)) * (rng.random((500, shape.total)) < density)
                fast = batch_weights(shape, words)
                for w, v in zip(fast, words):
                    C = MatrixTuple.from_flat(shape, F, v)
                    assert w == mc_weight(C) == mc_weight_bruteforce(C)


GRID = [(q, m, n) for q in (2, 3) for m in range(1, 5) for n in range(1, m + 1)]


def test_criterion_03_sphere_counts():
    """s1 formula, point interval at r=1, and containment of every S_r."""
    with Budget(120):
        misses = []
        for q, m, n in GRID:
            assert sc.s1_exact(q, m, n) == sc.sphere_bruteforce(q, m, n, 1)
            assert sc.sphere_bounds(q, m, n, 1) == (sc.s1_exact(q, m, n),) * 2
            for r in range(2, min(m, n) + 1):
                lo, hi = sc.sphere_bounds(q, m, n, r)
                exact = sc.sphere_bruteforce(q, m, n, r)
                if not lo <= exact <= hi:
                    misses.append(((q, m, n, r), (lo, hi), exact))
        assert not misses, f"{len(misses)} grid points outside the interval, first: {misses[:3]}"


def test_criterion_04_recursion_convention():
    with Budget(10):
        assert sc.full_sphere_recursion(2, 2, 2) == 7 == sc.sphere_bruteforce(2, 2, 2, 2)
        for q, m, n in GRID:
            assert (q - 1) ** (m * n) <= sc.full_sphere_recursion(q, m, n) <= q ** (m * n)
        P = np.zeros((3, 3), dtype=np.int64)
        P[[0, 0, 1, 2], [0, 1, 2, 2]] = 1
        assert (P != 0).any(axis=0).all() and (P != 0).any(axis=1).all()
        assert mc_weight(MatrixTuple(ShapeProfile((3,), (3,)), gf(2), (P,))) == 2


def _enum_min(code, metric):
    best = None
    for words in code.codewords():
        words = words[words.any(axis=1)]
        if words.size:
            w = int(batch_weights(code.shape, words, metric, code.field).min())
            best = w if best is None else min(best, w)
    return best


def test_criterion_05_lrs_nested_mmcd():
    with Budget(300):
        for q, s, u in itertools.product((3, 5), (1, 2), (1, 2)):
            t = 2
            for k in range(1, s * t + 1):
                nested, comp, _ = construct.lrs_nested(q, s, t, k, u)
                d = t * s - k + 1
                assert _enum_min(comp, "sr") == d
                assert lincode.min_distance(nested, "mc", method="covers") == d
                assert lincode.is_mmcd(nested)
                assert lincode.dual_mmcd_via_covers(nested)


def _line_cover(shape, block, row):
    empty = tuple(() for _ in range(shape.l))
    one = tuple((0,) if b == block else () for b in range(shape.l))
    return MultiCover(shape, one, empty) if row else MultiCover(shape, empty, one)


def test_criterion_06_puncture_shorten_mmcd():
    with Budget(60):
        checked = 0
        for q, s, t in [(5, 2, 2), (4, 3, 1), (5, 3, 2), (4, 2, 3)]:
            for k in range(1, s * t + 1):
                C = construct.lrs_code(construct.LrsParams(q, s, t, k))
                assert lincode.is_mmcd(C)
                d = lincode.min_distance(C)
                j, delta = bounds.singleton_decompose(C.shape, d)
                sh = C.shape
                for kk in range(1, sh.l + 1):
                    i = kk - 1
                    if d > 1 and kk <= j and (kk < j or delta > 0):
                        P = lincode.puncture(C, _line_cover(sh, i, row=False))
                        assert P.dim == C.dim
                        assert lincode.min_distance(lincode.normalize(P)[0]) == d - 1
                        assert lincode.is_mmcd(P)
                        checked += 1
                    for row, lo, drop in ((True, j + 1, sh.n[i]), (False, j, sh.m[i])):
                        if kk < lo:
                            continue
                        S = lincode.shorten(C, _line_cover(sh, i, row))
                        assert S.dim == C.dim - drop
                        if S.dim:
                            assert lincode.min_distance(lincode.normalize(S)[0]) == d
                        assert lincode.is_mmcd(S)
                        checked += 1
        assert checked > 20


def test_criterion_07_decoding_guarantee():
    with Budget(120):
        code = construct.lrs_nested(5, 2, 2, 1, 1)[0]
        assert lincode.min_distance(code) == 4
        for t, rho in [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1)]:
            stats = decode.channel_simulate(code, t, rho, 200, seed=11)
            assert stats["guaranteed"] and stats["successes"] == 200, (t, rho, stats)
        X = MultiCover.empty(code.shape)
        F = code.field
        space = np.array(list(itertools.product(range(5), repeat=4)), dtype=np.int64)
        single = space[batch_weights(ShapeProfile((2,), (2,)), space) == 1]
        errors = [np.concatenate([e, np.zeros(4, np.int64)]) for e in single]
        errors += [np.concatenate([np.zeros(4, np.int64), e]) for e in single]
        assert len(errors) == 2 * sc.s1_exact(5, 2, 2)
        for words in code.codewords():
            for w in words:
                C = MatrixTuple.from_flat(code.shape, F, w)
                for e in errors:
                    out = decode.bd_decode(decode.DecodeTask(code, X, 1, C + MatrixTuple.from_flat(code.shape, F, e)))
                    assert out.ok and out.codeword == C
        wit = decode.failure_witness(code, 2, 0)
        assert wit is not None and wit.check(2, 0)
        assert not (wit.C == wit.D)


ELL_GRID = ([(q, n) for q in (4, 5, 7, 8, 9) for n in (2, 3, 4)] + [(3, 3), (3, 4), (2, 4), (2, 5)])


def test_criterion_08_ell_bounds():
    with Budget(5):
        for q, n in ELL_GRID:
            for d in range(3, 2 * n + 1):
                r = bounds.ell_bounds(q, n, d)
                assert r["regime"]
                assert r["eq4"] <= r["eq5"] <= (q**n + d - 2) // n, (q, n, d, r)
        for q in (2, 3, 4, 5, 7, 8, 9):
            for d in range(3, 10):
                assert bounds.ell_bounds(q, 1, d)["eq4"] == q + d - 2


PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def test_criterion_09_bch_dominance():
    """Designed distance delta runs over 1..ln; delta = 0 is not a BCH design."""
    with Budget(10):
        cells = 0
        for q0, r in itertools.product(PRIME_POWERS, (1, 2, 3, 4)):
            q = q0**r
            for s in range(1, 5):
                for t in range(1, 16):
                    if gcd(t, s) != 1 or gcd(t, q) != 1 or (q - 1) % t:
                        continue
                    for u in (u for u in range(1, t + 1) if t % u == 0):
                        l = t // u
                        for delta in range(1, l * u * s + 1):
                            res = construct.srbch_dimension_bound(q0, r, s, u, l, delta)
                            assert res["eq7"] >= res["eq8"], (q0, r, s, u, l, delta, res)
                            cells += 1
        assert cells > 1000


def test_criterion_10_duality():
    with Budget(60):
        rng = np.random.default_rng(10)
        shapes = [ShapeProfile((2, 2), (2, 1)), ShapeProfile((3,), (3,)), ShapeProfile((3, 2, 2), (2, 2, 1)),
                  ShapeProfile((2, 2), (2, 2))]
        for shape in shapes:
            for q in (2, 3):
                for _ in range(50):
                    C = construct.random_code(shape, gf(q), int(rng.integers(0, shape.total + 1)), rng)
                    X = random_cover(shape, int(rng.integers(0, shape.N + 1)), rng)
                    assert lincode.duality_relations_check(C, X)
                    assert lincode.dual(lincode.dual(C)) == C
        for params, q in [((2, 2, 1, 1), 2), ((2, 2, 2, 1), 2), ((2, 1, 1, 2), 3), ((3, 1, 1, 1), 2),
                          ((2, 2, 2, 1), 3)]:
            P = construct.NestParams(*params)
            for _ in range(10):
                C = construct.random_code(P.inner_shape, gf(q), int(rng.integers(0, P.inner_shape.total + 1)), rng)
                assert lincode.dual(construct.nested_code(P, C)) == construct.nested_code(P, lincode.dual(C))
