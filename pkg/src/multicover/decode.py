"""Error-and-erasure decoding for multilayer crisscross patterns.

Received words live in the projected space: the erased rows and columns are
already deleted.  The decoders here are exhaustive or linear-algebraic and
meant for small codes; they share one outcome type so a faster decoder can
replace bd_decode behind the same interface.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from multicover import gflinalg, lincode
from multicover.construct import NestParams, lift_cover, nest_phi, unnest
from multicover.lincode import LinearCode
from multicover.mctuple import (MatrixTuple, MultiCover, ShapeError, all_lines, batch_weights,
                                embed_out, min_cover, project_out, random_cover, random_error)

DECODE_BUDGET = 1 << 20


@dataclass
class DecodeTask:
    code: LinearCode
    erasures: MultiCover
    t: int
    received: MatrixTuple

    def __post_init__(self):
        if not self.erasures.shape.same_dims(self.code.shape):
            raise ShapeError("shape mismatch")
        if not self.received.shape.same_dims(self.erasures.projected_shape()):
            raise ShapeError("received word does not have the projected shape")
        if self.t < 0:
            raise ValueError("t must be non-negative")

    @property
    def rho(self) -> int:
        return self.erasures.size

    def guaranteed(self, d: int | None = None) -> bool:
        """2t + rho < d_MC, the regime where decoding must succeed."""
        d = lincode.min_distance(self.code) if d is None else d
        return d is None or 2 * self.t + self.rho < d


@dataclass
class DecodeOutcome:
    status: str
    codeword: MatrixTuple | None = None
    candidates_count: int = 0

    def __post_init__(self):
        if self.status not in ("decoded", "failure", "ambiguous"):
            raise ValueError(f"bad status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == "decoded"


def bd_decode(task: DecodeTask, metric: str = "mc") -> DecodeOutcome:
    """Every codeword within distance t of the received word, after erasure."""
    code, X = task.code, task.erasures
    if code.size > DECODE_BUDGET:
        raise ValueError("enumeration budget exceeded")
    keep = X.out_indices()
    pshape = X.projected_shape()
    r = task.received.flat()
    hits = []
    for words in code.codewords():
        diff = code.field.vsub(r[None, :], words[:, keep])
        w = batch_weights(pshape, diff, metric, code.field)
        for j in np.nonzero(w <= task.t)[0]:
            hits.append(words[j])
    if not hits:
        return DecodeOutcome("failure")
    if len(hits) > 1:
        return DecodeOutcome("ambiguous", candidates_count=len(hits))
    return DecodeOutcome("decoded", MatrixTuple.from_flat(code.shape, code.field, hits[0]), 1)


def erasure_decode(code: LinearCode, X: MultiCover, received: MatrixTuple) -> DecodeOutcome:
    """Recover a codeword from its unerased entries by a linear solve."""
    if not X.shape.same_dims(code.shape):
        raise ShapeError("shape mismatch")
    if code.dim == 0:
        if received.flat().any():
            return DecodeOutcome("failure")
        return DecodeOutcome("decoded", MatrixTuple.zeros(code.shape, code.field), 1)
    Gp = code.generator[:, X.out_indices()]
    msg, kernel = gflinalg.solve_left(code.field, Gp, received.flat())
    if msg is None:
        return DecodeOutcome("failure")
    if kernel.shape[0]:
        return DecodeOutcome("ambiguous", candidates_count=code.field.order ** kernel.shape[0])
    return DecodeOutcome("decoded", code.encode(msg), 1)


def lifted_decode(params: NestParams, component: LinearCode, X: MultiCover, t: int,
                  received: MatrixTuple) -> DecodeOutcome:
    """Decode a nested code by decoding each inner codeword on its own cover."""
    if not X.shape.same_dims(params.outer_shape):
        raise ShapeError("shape mismatch")
    full = embed_out(X, received)
    parts = unnest(params, full)
    covers = lift_cover(params, X)
    decoded = []
    for part, Xw in zip(parts, covers):
        sub = DecodeTask(component, Xw, t, project_out(Xw, part))
        out = bd_decode(sub) if t > 0 else erasure_decode(component, Xw, sub.received)
        if not out.ok:
            return DecodeOutcome("failure")
        decoded.append(out.codeword)
    return DecodeOutcome("decoded", nest_phi(params, decoded), 1)


# -- sum-rank adapter -----------------------------------------------------------------


@dataclass
class SumRankAdapter:
    """Row and column deletion matrices A_i, B_i with A_i C_i B_i = pi_X(C)_i."""

    code: LinearCode
    cover: MultiCover
    A: list[np.ndarray] = field(default_factory=list)
    B: list[np.ndarray] = field(default_factory=list)

    def apply(self, C: MatrixTuple) -> MatrixTuple:
        F = C.field
        blocks = tuple(gflinalg.matmul(F, gflinalg.matmul(F, a, c), b)
                       for a, c, b in zip(self.A, C.blocks, self.B))
        return MatrixTuple(self.cover.projected_shape(), F, blocks)

    def block_diagonal(self) -> tuple[np.ndarray, np.ndarray]:
        def diag(mats):
            rows = sum(m.shape[0] for m in mats)
            cols = sum(m.shape[1] for m in mats)
            out = np.zeros((rows, cols), dtype=np.int64)
            r = c = 0
            for m in mats:
                out[r:r + m.shape[0], c:c + m.shape[1]] = m
                r += m.shape[0]
                c += m.shape[1]
            return out
        return diag(self.A), diag(self.B)

    def decode(self, received: MatrixTuple, t: int) -> DecodeOutcome:
        """Decoder that only trusts sum-rank distance: 2t + rho_R + rho_C < d_SR."""
        return bd_decode(DecodeTask(self.code, self.cover, t, received), metric="sr")


def sumrank_adapter(code: LinearCode, X: MultiCover) -> SumRankAdapter:
    if not X.shape.same_dims(code.shape):
        raise ShapeError("shape mismatch")
    A, B = [], []
    for (m, n), xs, ys in zip(code.shape.blocks, X.X, X.Y):
        keep_r = [a for a in range(m) if a not in xs]
        keep_c = [b for b in range(n) if b not in ys]
        A.append(np.eye(m, dtype=np.int64)[keep_r])
        B.append(np.eye(n, dtype=np.int64)[:, keep_c])
    return SumRankAdapter(code, X, A, B)


# -- failure witnesses --------------------------------------------------------------------


@dataclass
class Witness:
    """Distinct codewords C, D and errors E, F with pi_X(C) + E = pi_X(D) + F."""

    C: MatrixTuple
    D: MatrixTuple
    X: MultiCover
    E: MatrixTuple
    F: MatrixTuple

    def check(self, t: int, rho: int) -> bool:
        from multicover.mctuple import mc_weight

        lhs = project_out(self.X, self.C) + self.E
        rhs = project_out(self.X, self.D) + self.F
        return (lhs == rhs and not (self.C == self.D) and self.X.size == rho
                and mc_weight(self.E) <= t and mc_weight(self.F) <= t)


def _min_weight_codeword(code: LinearCode) -> MatrixTuple:
    best, best_w = None, None
    for words in code.codewords():
        w = batch_weights(code.shape, words)
        w = np.where(words.any(axis=1), w, np.iinfo(np.int64).max)
        j = int(np.argmin(w))
        if best_w is None or w[j] < best_w:
            best, best_w = words[j], int(w[j])
    return MatrixTuple.from_flat(code.shape, code.field, best)


def failure_witness(code: LinearCode, t: int, rho: int) -> Witness | None:
    """Indistinguishable pair for 2t + rho >= d_MC, built as in the converse proof."""
    if code.dim == 0:
        return None
    C = _min_weight_codeword(code)
    lines = min_cover(C).lines()
    if len(lines) > 2 * t + rho:
        return None
    pad = [ln for ln in all_lines(code.shape) if ln not in lines]
    ordered = lines[:rho] + pad[:max(0, rho - len(lines))]
    if len(ordered) < rho:
        return None
    rest = lines[rho:] if len(lines) > rho else []
    parts = [ordered, rest[:t], rest[t:]]
    shape, Fd = code.shape, code.field
    owner = np.full(shape.total, -1)
    for p, group in enumerate(parts):
        if not group:
            continue
        mask = MultiCover.from_lines(shape, group).covered_mask()
        owner[(owner < 0) & mask] = p
    flat = C.flat()
    e_full = np.where(owner == 1, Fd.vneg(flat), 0)
    f_full = np.where(owner == 2, flat, 0)
    X = MultiCover.from_lines(shape, ordered)
    E = project_out(X, MatrixTuple.from_flat(shape, Fd, e_full))
    F = project_out(X, MatrixTuple.from_flat(shape, Fd, f_full))
    wit = Witness(C, MatrixTuple.zeros(shape, Fd), X, E, F)
    return wit if wit.check(t, rho) else None


# -- channel simulation ---------------------------------------------------------------------


def channel_simulate(code: LinearCode, t: int, rho: int, trials: int, seed: int,
                     metric: str = "mc") -> dict:
    """Random codeword, random erasure cover of size rho, random error of weight t."""
    d = lincode.min_distance(code)
    guaranteed = d is None or 2 * t + rho < d
    stats = {"trials": trials, "successes": 0, "failures": 0, "ambiguities": 0,
             "guaranteed": guaranteed, "d_mc": d, "t": t, "rho": rho}
    elapsed = 0.0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        msg = rng.integers(0, code.field.order, size=code.dim)
        C = code.encode(msg)
        X = random_cover(code.shape, rho, rng)
        pshape = X.projected_shape()
        E = random_error(pshape, code.field, min(t, pshape.max_weight), rng)
        received = project_out(X, C) + E
        start = time.perf_counter()
        out = bd_decode(DecodeTask(code, X, t, received), metric)
        elapsed += time.perf_counter() - start
        if out.status == "decoded" and out.codeword == C:
            stats["successes"] += 1
        elif out.status == "ambiguous":
            stats["ambiguities"] += 1
        else:
            stats["failures"] += 1
    stats["mean_decode_seconds"] = elapsed / trials if trials else 0.0
    if not guaranteed:
        wit = failure_witness(code, t, rho)
        stats["witness_found"] = wit is not None
    return stats
