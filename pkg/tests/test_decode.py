import itertools

import numpy as np
import pytest

from multicover import construct, decode, lincode
from multicover.decode import DecodeTask, bd_decode, erasure_decode
from multicover.ffield import gf
from multicover.spherecount import s1_exact
from multicover.mctuple import (MatrixTuple, MultiCover, ShapeProfile, batch_weights, covers_of_size,
                                mc_weight, project_out, random_cover, random_error)

from conftest import EX_A, EX_B, example_code


def codewords(code):
    for words in code.codewords():
        for w in words:
            yield MatrixTuple.from_flat(code.shape, code.field, w)


def low_weight_errors(shape, F, t):
    """Every tuple of mc-weight <= t, by filtering the whole space."""
    allv = np.array(list(itertools.product(range(F.order), repeat=shape.total)), dtype=np.int64)
    keep = allv[batch_weights(shape, allv) <= t]
    return [MatrixTuple.from_flat(shape, F, v) for v in keep]


@pytest.fixture(scope="module")
def nested_d4():
    nested, comp, params = construct.lrs_nested(5, 2, 2, 1, 1)
    assert lincode.min_distance(nested) == 4
    return nested, comp, params


def test_trivial_decode_of_codeword(ex_code):
    X = MultiCover.empty(ex_code.shape)
    for C in codewords(ex_code):
        out = bd_decode(DecodeTask(ex_code, X, 0, C))
        assert out.ok and out.codeword == C
        assert erasure_decode(ex_code, X, C).codeword == C


def test_repetition_lrs_erasure_example():
    code = construct.lrs_code(construct.LrsParams(3, 1, 2, 1))
    X = MultiCover(code.shape, ((), (0,)), ((), ()))
    received = MatrixTuple.from_flat(X.projected_shape(), code.field, [1])
    out = bd_decode(DecodeTask(code, X, 0, received))
    assert out.ok and out.codeword.flat().tolist() == [1, 1]
    assert erasure_decode(code, X, received).codeword.flat().tolist() == [1, 1]


def test_nested_lrs_single_errors_exhaustive(nested_d4):
    code = nested_d4[0]
    X = MultiCover.empty(code.shape)
    errors = [E for E in low_weight_errors(code.shape, code.field, 1) if not E.is_zero()]
    assert len(errors) == 2 * s1_exact(5, 2, 2)
    for C in codewords(code):
        for E in errors:
            out = bd_decode(DecodeTask(code, X, 1, C + E))
            assert out.ok and out.codeword == C


def test_example_code_erasures():
    code = example_code()
    F = code.field
    B = MatrixTuple(code.shape, F, (np.array(EX_B),))
    for X in covers_of_size(code.shape, 1):
        out = erasure_decode(code, X, project_out(X, B))
        assert out.ok and out.codeword == B
    X = MultiCover.from_one_based(code.shape, [{1}], [{1}])
    A = MatrixTuple(code.shape, F, (np.array(EX_A),))
    assert project_out(X, A).is_zero()
    zero = MatrixTuple.zeros(X.projected_shape(), F)
    assert erasure_decode(code, X, zero).status == "ambiguous"
    assert bd_decode(DecodeTask(code, X, 0, zero)).status == "ambiguous"


def test_erasure_decode_matches_cover_classification():
    code = example_code()
    for r in range(3):
        for X in covers_of_size(code.shape, r):
            cls = lincode.classify_cover(code, X)
            out = erasure_decode(code, X, MatrixTuple.zeros(X.projected_shape(), code.field))
            assert out.ok == cls.is_comp_info


def test_erasure_decode_inconsistent_received():
    code = construct.lrs_code(construct.LrsParams(3, 1, 2, 1))
    X = MultiCover.empty(code.shape)
    bad = MatrixTuple.from_flat(code.shape, code.field, [1, 2])
    assert erasure_decode(code, X, bad).status == "failure"
    assert bd_decode(DecodeTask(code, X, 0, bad)).status == "failure"


def test_task_validation(ex_code):
    X = MultiCover.from_one_based(ex_code.shape, [{1}], [set()])
    with pytest.raises(Exception, match="projected shape"):
        DecodeTask(ex_code, X, 0, MatrixTuple.zeros(ex_code.shape, ex_code.field))
    with pytest.raises(ValueError, match="non-negative"):
        DecodeTask(ex_code, X, -1, MatrixTuple.zeros(X.projected_shape(), ex_code.field))
    task = DecodeTask(ex_code, X, 0, MatrixTuple.zeros(X.projected_shape(), ex_code.field))
    assert task.rho == 1 and task.guaranteed()
    X2 = MultiCover.from_one_based(ex_code.shape, [{1}], [{2}])
    assert not DecodeTask(ex_code, X2, 0, MatrixTuple.zeros(X2.projected_shape(), ex_code.field)).guaranteed()
    with pytest.raises(ValueError):
        decode.DecodeOutcome("maybe")


def _patterns(shape, d):
    for rho in range(d):
        for t in range((d - rho + 1) // 2):
            if 2 * t + rho < d:
                yield t, rho


@pytest.mark.parametrize("make", [example_code,
                                  lambda: construct.lrs_code(construct.LrsParams(4, 1, 3, 1)),
                                  lambda: construct.lrs_code(construct.LrsParams(2, 2, 1, 1))])
def test_guarantee_regime_exhaustive(make):
    code = make()
    d = lincode.min_distance(code)
    for t, rho in _patterns(code.shape, d):
        for X in covers_of_size(code.shape, rho):
            pshape = X.projected_shape()
            errs = low_weight_errors(pshape, code.field, t)
            for C in codewords(code):
                pc = project_out(X, C)
                for E in errs:
                    out = bd_decode(DecodeTask(code, X, t, pc + E))
                    assert out.ok and out.codeword == C


@pytest.mark.parametrize("make", [example_code,
                                  lambda: construct.lrs_code(construct.LrsParams(4, 1, 3, 1)),
                                  lambda: construct.lrs_code(construct.LrsParams(5, 2, 2, 1))])
def test_witness_exists_outside_guarantee(make):
    code = make()
    d = lincode.min_distance(code)
    for t in range(d + 1):
        for rho in range(d + 1):
            if 2 * t + rho >= d and rho <= code.shape.N:
                wit = decode.failure_witness(code, t, rho)
                assert wit is not None and wit.check(t, rho)
                lhs = project_out(wit.X, wit.C) + wit.E
                # both C and D lie within t of the received word
                assert bd_decode(DecodeTask(code, wit.X, t, lhs)).status == "ambiguous"


def test_witness_for_nested_code(nested_d4):
    code = nested_d4[0]
    wit = decode.failure_witness(code, 2, 0)
    assert wit.check(2, 0)
    assert project_out(wit.X, wit.C) + wit.E == project_out(wit.X, wit.D) + wit.F


def _lifted_codes():
    yield construct.lrs_nested(5, 1, 4, 1, 2)  # u=2, r=s=1, two 2x2 blocks, d=4
    yield construct.lrs_nested(3, 1, 2, 1, 2)  # u=2, r=s=1, one 2x2 block, d=2


@pytest.mark.parametrize("idx", [0, 1])
def test_lifted_decoder_agrees_with_direct(idx, rng):
    nested, comp, params = list(_lifted_codes())[idx]
    d = lincode.min_distance(nested)
    assert d == lincode.min_distance(comp)
    cws = list(codewords(nested))
    for t, rho in _patterns(nested.shape, d):
        for X in covers_of_size(nested.shape, rho):
            errs = low_weight_errors(X.projected_shape(), nested.field, t)
            for C in [cws[int(i)] for i in rng.choice(len(cws), size=min(6, len(cws)), replace=False)]:
                pc = project_out(X, C)
                for E in errs:
                    direct = bd_decode(DecodeTask(nested, X, t, pc + E))
                    lifted = decode.lifted_decode(params, comp, X, t, pc + E)
                    assert direct.ok and lifted.ok
                    assert direct.codeword == lifted.codeword == C


def test_lifted_u1_and_zero_error(nested_d4):
    nested, comp, params = nested_d4
    X = MultiCover.empty(nested.shape)
    for C in codewords(nested):
        assert decode.lifted_decode(params, comp, X, 0, C).codeword == C


# -- sum-rank adapter ---------------------------------------------------------------------


@pytest.mark.parametrize("shape", [ShapeProfile((3, 2), (3, 1)), ShapeProfile((2, 2), (2, 2)),
                                   ShapeProfile((4,), (2,))])
def test_adapter_matches_projection(shape, rng):
    F = gf(3)
    code = lincode.code_make(shape, F, rng.integers(0, 3, size=(1, shape.total)))
    for _ in range(100):
        X = random_cover(shape, int(rng.integers(0, shape.N + 1)), rng)
        C = MatrixTuple.from_flat(shape, F, rng.integers(0, 3, shape.total))
        ad = decode.sumrank_adapter(code, X)
        assert ad.apply(C) == project_out(X, C)
        A, B = ad.block_diagonal()
        assert A.shape == (sum(shape.m) - sum(len(x) for x in X.X), sum(shape.m))
        assert B.shape == (sum(shape.n), sum(shape.n) - sum(len(y) for y in X.Y))


def test_adapter_identity_for_empty_cover(ex_code):
    ad = decode.sumrank_adapter(ex_code, MultiCover.empty(ex_code.shape))
    assert all(np.array_equal(a, np.eye(3)) for a in ad.A + ad.B)


def test_adapter_row_erasure_plus_error():
    code = construct.lrs_code(construct.LrsParams(5, 2, 2, 1))
    assert lincode.min_distance(code, "sr") == 4
    F = code.field
    for X in covers_of_size(code.shape, 1):
        if not any(X.X):
            continue
        ad = decode.sumrank_adapter(code, X)
        pshape = X.projected_shape()
        for C in codewords(code):
            pc = ad.apply(C)
            for pos in range(pshape.total):
                for val in range(1, 5):
                    e = np.zeros(pshape.total, dtype=np.int64)
                    e[pos] = val
                    E = MatrixTuple.from_flat(pshape, F, e)
                    out = ad.decode(pc + E, 1)
                    assert out.ok and out.codeword == C
                    assert bd_decode(DecodeTask(code, X, 1, pc + E)).codeword == C


# -- channel simulation ---------------------------------------------------------------------


def test_channel_trivial(ex_code):
    stats = decode.channel_simulate(ex_code, 0, 0, 50, seed=1)
    assert stats["successes"] == 50 and stats["guaranteed"]


def test_channel_guarantee_sweep(nested_d4):
    code = nested_d4[0]
    for t, rho in [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1)]:
        stats = decode.channel_simulate(code, t, rho, 200, seed=7)
        assert stats["guaranteed"] and stats["successes"] == 200


def test_channel_deterministic_and_witness(nested_d4):
    code = nested_d4[0]
    a = decode.channel_simulate(code, 2, 0, 30, seed=3)
    b = decode.channel_simulate(code, 2, 0, 30, seed=3)
    a.pop("mean_decode_seconds"), b.pop("mean_decode_seconds")
    assert a == b
    assert not a["guaranteed"] and a["witness_found"]
    assert a["successes"] + a["failures"] + a["ambiguities"] == 30


def test_mc_errors_have_exact_weight(nested_d4):
    code = nested_d4[0]
    rng = np.random.default_rng(0)
    for t in range(3):
        assert mc_weight(random_error(code.shape, code.field, t, rng)) == t
