"""Linear codes in a product of matrix spaces.

Codewords are flattened block-major, row-major inside each block; the
generator is kept in reduced row echelon form under that flattening.
Duality is the entrywise dot product of flattened tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable

import numpy as np

from multicover import bounds, gflinalg
from multicover.ffield import FieldCtx, field_from_json, field_to_json
from multicover.mctuple import (MatrixTuple, MultiCover, ShapeError, ShapeProfile,
                                all_lines, batch_weights, covers_of_size,
                                transpose_indices)

ENUM_BUDGET = 1 << 22
COVER_BUDGET = 1 << 21
METRICS = ("mc", "sr", "ham_col", "ham_row")


@dataclass(frozen=True, eq=False)
class LinearCode:
    shape: ShapeProfile
    field: FieldCtx
    generator: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.generator.shape[0])

    @property
    def length(self) -> int:
        return self.shape.total

    @property
    def size(self) -> int:
        return self.field.order**self.dim

    def __eq__(self, other):
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (self.shape.same_dims(other.shape) and self.field == other.field
                and self.generator.shape == other.generator.shape
                and bool(np.array_equal(self.generator, other.generator)))

    def __hash__(self):
        return hash((self.shape.m, self.shape.n, self.generator.tobytes()))

    def __repr__(self):
        return f"LinearCode(q={self.field.order}, m={self.shape.m}, n={self.shape.n}, dim={self.dim})"

    def rows(self) -> list[MatrixTuple]:
        return [MatrixTuple.from_flat(self.shape, self.field, g) for g in self.generator]

    def contains(self, word) -> bool:
        v = word.flat() if isinstance(word, MatrixTuple) else np.asarray(word, dtype=np.int64)
        if self.dim == 0:
            return not v.any()
        return gflinalg.rank(self.field, np.vstack([self.generator, v])) == self.dim

    def encode(self, msg) -> MatrixTuple:
        msg = np.asarray(msg, dtype=np.int64).reshape(1, -1)
        if msg.shape[1] != self.dim:
            raise ValueError("message length does not match the dimension")
        flat = gflinalg.matmul(self.field, msg, self.generator)[0] if self.dim else np.zeros(self.length, dtype=np.int64)
        return MatrixTuple.from_flat(self.shape, self.field, flat)

    def codewords(self, chunk: int = 1 << 16):
        """Chunks of all codewords (including zero)."""
        if self.dim == 0:
            yield np.zeros((1, self.length), dtype=np.int64)
            return
        for _, words in gflinalg.span(self.field, self.generator, chunk):
            yield words

    def to_json(self) -> dict:
        return {"field": field_to_json(self.field), "shape": self.shape.to_json(),
                "generator": self.generator.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearCode":
        F = field_from_json(obj["field"])
        shape = ShapeProfile.from_json(obj["shape"], unchecked=True)
        shape = ShapeProfile.lenient(shape.m, shape.n)
        return code_make(shape, F, obj["generator"])


def _as_rows(shape: ShapeProfile, rows) -> np.ndarray:
    out = []
    for r in rows:
        if isinstance(r, MatrixTuple):
            if not r.shape.same_dims(shape):
                raise ShapeError("length mismatch")
            out.append(r.flat())
            continue
        arr = np.asarray(r, dtype=np.int64).reshape(-1)
        if arr.size != shape.total:
            raise ShapeError("length mismatch")
        out.append(arr)
    if not out:
        return np.zeros((0, shape.total), dtype=np.int64)
    return np.vstack(out)


def code_make(shape: ShapeProfile, field: FieldCtx, rows: Iterable) -> LinearCode:
    G = _as_rows(shape, rows)
    if G.size and (G.min() < 0 or G.max() >= field.order):
        raise ValueError("entries are not field elements")
    R = gflinalg.rref(field, G)[0] if G.shape[0] else G
    R = np.ascontiguousarray(R)
    R.setflags(write=False)
    return LinearCode(shape, field, R)


def full_space(shape: ShapeProfile, field: FieldCtx) -> LinearCode:
    return code_make(shape, field, np.eye(shape.total, dtype=np.int64))


def zero_code(shape: ShapeProfile, field: FieldCtx) -> LinearCode:
    return code_make(shape, field, [])


def dual(code: LinearCode) -> LinearCode:
    if code.dim == 0:
        return full_space(code.shape, code.field)
    return code_make(code.shape, code.field, gflinalg.nullspace(code.field, code.generator))


def same_code(a: LinearCode, b: LinearCode) -> bool:
    return a == b


# -- minimum distance ------------------------------------------------------------------


def _projective_chunks(code: LinearCode, chunk: int = 1 << 15):
    """Nonzero codewords up to scalars: those whose message leads with a 1."""
    F, G, k = code.field, code.generator, code.dim
    for lead in range(k):
        rest = G[lead + 1:]
        base = G[lead]
        if rest.shape[0] == 0:
            yield base[None, :]
            continue
        for _, words in gflinalg.span(F, rest, chunk):
            yield F.vadd(words, base[None, :])


def _enum_distance(code: LinearCode, metric: str, below: int | None = None) -> int:
    best = None
    floor = 1
    for words in _projective_chunks(code):
        w = batch_weights(code.shape, words, metric, code.field)
        m = int(w.min())
        best = m if best is None else min(best, m)
        if best <= floor or (below is not None and best < below):
            break
    return best


def _rank_deficient(F: FieldCtx, G: np.ndarray, masks: np.ndarray, target: int) -> np.ndarray:
    """For each boolean column mask, is rank(G restricted to the mask) < target?"""
    stack = np.where(masks[:, None, :], G[None, :, :], 0)
    return gflinalg.batched_rank(F, stack) < target


def _cover_masks(shape: ShapeProfile, size: int, keep_covered: bool):
    """Boolean column masks (uncovered or covered entries) for every cover of a size, in batches."""
    lines = all_lines(shape)
    line_masks = np.zeros((len(lines), shape.total), dtype=bool)
    for j, (i, kind, idx) in enumerate(lines):
        off, (m, n) = shape.offsets[i], shape.blocks[i]
        grid = np.zeros((m, n), dtype=bool)
        if kind == "row":
            grid[idx, :] = True
        else:
            grid[:, idx] = True
        line_masks[j, off:off + m * n] = grid.reshape(-1)
    batch = []
    for combo in itertools.combinations(range(len(lines)), size):
        batch.append(combo)
        if len(batch) == 4096:
            yield batch, _combine(line_masks, batch, keep_covered)
            batch = []
    if batch:
        yield batch, _combine(line_masks, batch, keep_covered)


def _combine(line_masks, batch, keep_covered):
    idx = np.array(batch, dtype=np.int64)
    if idx.shape[1] == 0:
        covered = np.zeros((len(batch), line_masks.shape[1]), dtype=bool)
    else:
        covered = line_masks[idx].any(axis=1)
    return covered if keep_covered else ~covered


def _cover_distance(code: LinearCode, below: int | None = None) -> int:
    """Smallest |X| such that deleting X's lines loses information."""
    k = code.dim
    stop = len(all_lines(code.shape)) if below is None else min(below, len(all_lines(code.shape)))
    for size in range(1, stop + 1):
        for _, masks in _cover_masks(code.shape, size, keep_covered=False):
            if _rank_deficient(code.field, code.generator, masks, k).any():
                return size
    return stop + 1 if below is not None else code.shape.max_weight + 1


def _singleton_cap(code: LinearCode) -> int:
    """Largest d that the dimension allows: an upper bound on d_MC."""
    shape = code.shape
    if shape.unchecked:
        return shape.N
    d = 1
    while d < shape.N and bounds.singleton_exponent(shape, d + 1) >= code.dim:
        d += 1
    return d


def _cover_cost(code: LinearCode) -> int:
    L = len(all_lines(code.shape))
    return sum(comb(L, s) for s in range(1, _singleton_cap(code) + 1))


def min_distance(code: LinearCode, metric: str = "mc", method: str = "auto") -> int | None:
    """Exact minimum nonzero weight; None for the zero code.

    method "enum" walks the codewords, "covers" looks for the smallest
    multi-cover whose deletion makes the projection lose rank (mc only).
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if code.dim == 0:
        return None
    enum_cost = code.field.order ** code.dim // max(1, code.field.order - 1)
    if method == "auto":
        if metric != "mc" or enum_cost <= 1 << 14:
            method = "enum"
        else:
            method = "covers" if _cover_cost(code) * 4 <= enum_cost or enum_cost > ENUM_BUDGET else "enum"
    if method == "covers":
        if metric != "mc":
            raise ValueError("the cover method only computes d_MC")
        if _cover_cost(code) > COVER_BUDGET * 8:
            raise ValueError("enumeration budget exceeded")
        return _cover_distance(code)
    if enum_cost > ENUM_BUDGET:
        raise ValueError("enumeration budget exceeded")
    return _enum_distance(code, metric)


def distance_at_least(code: LinearCode, target: int, metric: str = "mc") -> bool:
    """d(code) >= target, exiting as soon as a lighter codeword shows up."""
    if code.dim == 0:
        return True
    if metric == "mc" and code.field.order**code.dim > 1 << 14:
        return _cover_distance(code, below=target - 1) >= target
    return _enum_distance(code, metric, below=target) >= target


# -- puncturing, shortening, transposition ---------------------------------------------


def _check_cover(code: LinearCode, X: MultiCover):
    if not X.shape.same_dims(code.shape):
        raise ShapeError("shape mismatch")


def puncture(code: LinearCode, X: MultiCover) -> LinearCode:
    """C_X: delete the lines of X from every codeword.  The shape is left raw."""
    _check_cover(code, X)
    return code_make(X.projected_shape(), code.field, code.generator[:, X.out_indices()])


def shorten(code: LinearCode, X: MultiCover) -> LinearCode:
    """C^X: keep codewords vanishing on X, then delete X's lines."""
    _check_cover(code, X)
    inside = X.in_indices()
    if code.dim == 0 or inside.size == 0:
        sub = code.generator
    else:
        K = gflinalg.nullspace(code.field, code.generator[:, inside].T)
        sub = gflinalg.matmul(code.field, K, code.generator) if K.shape[0] else K.reshape(0, code.length)
    return code_make(X.projected_shape(), code.field, sub[:, X.out_indices()])


def transposed_code(code: LinearCode, t) -> LinearCode:
    t = [int(x) for x in t]
    perm = transpose_indices(code.shape, t)
    return code_make(code.shape.transposed(t), code.field, code.generator[:, perm])


@dataclass(frozen=True)
class Normalization:
    """How a raw shape was brought into normal form."""

    transposed: tuple[int, ...]
    order: tuple[int, ...]
    dropped: tuple[int, ...]


def normalize(code: LinearCode) -> tuple[LinearCode, Normalization]:
    """Transpose blocks with n_i > m_i, drop empty blocks, sort by m_i descending."""
    shape = code.shape
    t = [1 if n > m else 0 for m, n in shape.blocks]
    tc = transposed_code(code, t) if any(t) else code
    ts = tc.shape
    keep = [i for i, (m, n) in enumerate(ts.blocks) if m * n > 0]
    dropped = tuple(i for i in range(ts.l) if i not in keep)
    if not keep:
        raise ShapeError("no non-empty blocks left")
    order = sorted(keep, key=lambda i: (-ts.m[i], i))
    cols = np.concatenate([np.arange(ts.offsets[i], ts.offsets[i] + ts.m[i] * ts.n[i]) for i in order])
    new_shape = ShapeProfile(tuple(ts.m[i] for i in order), tuple(ts.n[i] for i in order))
    return (code_make(new_shape, code.field, tc.generator[:, cols]),
            Normalization(tuple(t), tuple(order), dropped))


def _normal(code: LinearCode) -> LinearCode:
    return code if not code.shape.unchecked else normalize(code)[0]


# -- MMCD and MDS predicates --------------------------------------------------------------


def is_mmcd(code: LinearCode) -> bool:
    """Does the code meet the multi-cover Singleton bound?  The zero code counts as MMCD."""
    code = _normal(code)
    if code.dim == 0:
        return True
    d = min_distance(code, "mc")
    return code.dim == bounds.singleton_exponent(code.shape, d)


def _is_mds_metric(code: LinearCode, metric: str) -> bool:
    code = _normal(code)
    if code.dim == 0:
        return True
    d = min_distance(code, metric)
    return code.dim == bounds.singleton_exponent(code.shape, d)


def is_mds_by_columns(code: LinearCode) -> bool:
    return _is_mds_metric(code, "ham_col")


def is_mds_by_rows(code: LinearCode) -> bool:
    return _is_mds_metric(code, "ham_row")


def is_dually_mmcd(code: LinearCode) -> bool:
    if not is_mmcd(code):
        return False
    try:
        return dual_mmcd_via_covers(code)
    except ValueError:
        return is_mmcd(dual(code))


# -- support spaces and information multi-covers ----------------------------------------


def support_space_basis(X: MultiCover, field: FieldCtx) -> LinearCode:
    rows = np.zeros((X.support_dim(), X.shape.total), dtype=np.int64)
    rows[np.arange(rows.shape[0]), X.in_indices()] = 1
    return code_make(X.shape, field, rows)


def support_dual_is_support(X: MultiCover) -> bool:
    """X_i or Y_i empty in every block.

    This decides whether the dual of V_X is again a support space, except for
    covers with a block whose rows (or columns) are all chosen: that block is
    then entirely covered and the dual is a support space regardless.
    """
    return all(not xs or not ys for xs, ys in zip(X.X, X.Y))


def intersection_dim(a: LinearCode, b: LinearCode) -> int:
    return a.dim + b.dim - gflinalg.rank(a.field, np.vstack([a.generator, b.generator])) if a.dim and b.dim else 0


@dataclass(frozen=True)
class CoverClassification:
    cover: MultiCover
    is_info: bool
    is_comp_info: bool


def classify_cover(code: LinearCode, X: MultiCover) -> CoverClassification:
    _check_cover(code, X)
    G = code.generator
    out, inside = X.out_indices(), X.in_indices()
    comp = gflinalg.rank(code.field, G[:, out]) == code.dim if code.dim else True
    info = (gflinalg.rank(code.field, G[:, inside]) == inside.size) if inside.size else True
    return CoverClassification(X, info, comp)


def _equal_rows_m(code: LinearCode) -> int:
    ms = set(code.shape.m)
    if len(ms) != 1 or code.dim % next(iter(ms)) != 0:
        raise ValueError("hypotheses violated: unequal rows or dim not multiple of m")
    return ms.pop()


def mmcd_via_covers(code: LinearCode) -> bool:
    """All covers with m(N - |X|) = dim are complementary information multi-covers."""
    m = _equal_rows_m(code)
    size = code.shape.N - code.dim // m
    if code.dim == 0:
        return True
    for _, masks in _cover_masks(code.shape, size, keep_covered=False):
        if _rank_deficient(code.field, code.generator, masks, code.dim).any():
            return False
    return True


def dual_mmcd_via_covers(code: LinearCode) -> bool:
    """All covers with m|X| = dim are information multi-covers."""
    m = _equal_rows_m(code)
    size = code.dim // m
    if size == 0:
        return True
    for _, masks in _cover_masks(code.shape, size, keep_covered=True):
        need = masks.sum(axis=1)
        stack = np.where(masks[:, None, :], code.generator[None, :, :], 0)
        if (gflinalg.batched_rank(code.field, stack) < need).any():
            return False
    return True


def info_covers(code: LinearCode, size: int) -> list[CoverClassification]:
    return [classify_cover(code, X) for X in covers_of_size(code.shape, size)]


def duality_relations_check(code: LinearCode, X: MultiCover) -> bool:
    D = dual(code)
    return (dual(puncture(code, X)) == shorten(D, X)
            and dual(shorten(code, X)) == puncture(D, X))
