"""Matrix tuples, multi-covers and the weights defined on them.

A tuple C = (C_1, ..., C_l) lives in the product of F_q^{m_i x n_i}.  Its
multi-cover weight is the least number of rows and columns (summed over the
blocks) that together contain every nonzero entry.  Per block that is a
minimum vertex cover of the bipartite row/column graph, which König's
theorem equates with a maximum matching, so it is computed with
Hopcroft-Karp.

Everything is indexed from 0 here; the 1-based convention only shows up in
the JSON helpers and the CLI.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from multicover import gflinalg
from multicover.ffield import FieldCtx


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class ShapeProfile:
    """Block sizes (m_i, n_i) of the ambient space.

    Checked shapes satisfy n_i <= m_i and m_1 >= ... >= m_l; unchecked shapes
    only need non-negative sizes and are refused by the bound evaluators.
    """

    m: tuple[int, ...]
    n: tuple[int, ...]
    unchecked: bool = False

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        if len(self.m) != len(self.n) or not self.m:
            raise ShapeError("m and n must be non-empty lists of equal length")
        if self.unchecked:
            if any(x < 0 for x in self.m + self.n):
                raise ShapeError("block sizes must be non-negative")
            return
        if any(x < 1 for x in self.m + self.n):
            raise ShapeError("block sizes must be positive")
        for i, (mi, ni) in enumerate(zip(self.m, self.n)):
            if ni > mi:
                raise ShapeError(f"block {i + 1}: n_i = {ni} exceeds m_i = {mi}")
        for i in range(len(self.m) - 1):
            if self.m[i] < self.m[i + 1]:
                raise ShapeError("m must be non-increasing")

    @classmethod
    def lenient(cls, m: Sequence[int], n: Sequence[int]) -> "ShapeProfile":
        """A checked shape when the normalisation holds, unchecked otherwise."""
        try:
            return cls(tuple(m), tuple(n))
        except ShapeError:
            return cls(tuple(m), tuple(n), unchecked=True)

    @classmethod
    def uniform(cls, m: int, n: int, l: int) -> "ShapeProfile":
        return cls((m,) * l, (n,) * l)

    @property
    def l(self) -> int:
        return len(self.m)

    @property
    def N(self) -> int:
        return sum(self.n)

    @property
    def total(self) -> int:
        return sum(a * b for a, b in zip(self.m, self.n))

    @property
    def blocks(self) -> list[tuple[int, int]]:
        return list(zip(self.m, self.n))

    @property
    def offsets(self) -> list[int]:
        out, acc = [], 0
        for a, b in self.blocks:
            out.append(acc)
            acc += a * b
        return out

    @property
    def max_weight(self) -> int:
        return sum(min(a, b) for a, b in self.blocks)

    def transposed(self, t: Sequence[int] | None = None) -> "ShapeProfile":
        t = [1] * self.l if t is None else list(t)
        m = [b if ti else a for (a, b), ti in zip(self.blocks, t)]
        n = [a if ti else b for (a, b), ti in zip(self.blocks, t)]
        return ShapeProfile.lenient(m, n)

    def same_dims(self, other: "ShapeProfile") -> bool:
        return self.m == other.m and self.n == other.n

    def to_json(self) -> dict:
        return {"l": self.l, "m": list(self.m), "n": list(self.n)}

    @classmethod
    def from_json(cls, obj: dict, unchecked: bool = False) -> "ShapeProfile":
        shape = cls(tuple(obj["m"]), tuple(obj["n"]), unchecked=unchecked)
        if "l" in obj and int(obj["l"]) != shape.l:
            raise ShapeError("l does not match the block lists")
        return shape


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    shape: ShapeProfile
    field: FieldCtx
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=np.int64).reshape(m, n)
                       for b, (m, n) in zip(self.blocks, self.shape.blocks))
        if len(blocks) != self.shape.l:
            raise ShapeError("wrong number of blocks")
        for b in blocks:
            if b.size and (b.min() < 0 or b.max() >= self.field.order):
                raise ValueError("entries are not field elements")
            b.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def zeros(cls, shape: ShapeProfile, field: FieldCtx) -> "MatrixTuple":
        return cls(shape, field, tuple(np.zeros((m, n), dtype=np.int64) for m, n in shape.blocks))

    @classmethod
    def from_flat(cls, shape: ShapeProfile, field: FieldCtx, vec) -> "MatrixTuple":
        vec = np.asarray(vec, dtype=np.int64).reshape(-1)
        if vec.size != shape.total:
            raise ShapeError(f"flat vector has length {vec.size}, expected {shape.total}")
        blocks = []
        for off, (m, n) in zip(shape.offsets, shape.blocks):
            blocks.append(vec[off:off + m * n].reshape(m, n))
        return cls(shape, field, tuple(blocks))

    def flat(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([b.reshape(-1) for b in self.blocks])

    def _check_compatible(self, other: "MatrixTuple"):
        if not self.shape.same_dims(other.shape) or self.field != other.field:
            raise ShapeError("shape mismatch")

    def __add__(self, other: "MatrixTuple") -> "MatrixTuple":
        self._check_compatible(other)
        return MatrixTuple.from_flat(self.shape, self.field, self.field.vadd(self.flat(), other.flat()))

    def __sub__(self, other: "MatrixTuple") -> "MatrixTuple":
        self._check_compatible(other)
        return MatrixTuple.from_flat(self.shape, self.field, self.field.vsub(self.flat(), other.flat()))

    def __neg__(self) -> "MatrixTuple":
        return MatrixTuple.from_flat(self.shape, self.field, self.field.vneg(self.flat()))

    def scale(self, a: int) -> "MatrixTuple":
        return MatrixTuple.from_flat(self.shape, self.field, self.field.vmul(a, self.flat()))

    def __eq__(self, other):
        if not isinstance(other, MatrixTuple):
            return NotImplemented
        return (self.shape.same_dims(other.shape) and self.field == other.field
                and bool(np.array_equal(self.flat(), other.flat())))

    def __hash__(self):
        return hash((self.shape.m, self.shape.n, self.flat().tobytes()))

    def is_zero(self) -> bool:
        return not self.flat().any()

    def __repr__(self):
        return f"MatrixTuple({[b.tolist() for b in self.blocks]})"

    def to_json(self) -> dict:
        return {"shape": self.shape.to_json(), "blocks": [b.tolist() for b in self.blocks]}

    @classmethod
    def from_json(cls, obj: dict, field: FieldCtx) -> "MatrixTuple":
        shape = ShapeProfile.from_json(obj["shape"], unchecked=True)
        shape = ShapeProfile.lenient(shape.m, shape.n)
        return cls(shape, field, tuple(np.array(b, dtype=np.int64).reshape(m, n)
                                       for b, (m, n) in zip(obj["blocks"], shape.blocks)))


@dataclass(frozen=True)
class MultiCover:
    """Row sets X_i and column sets Y_i, one pair per block (0-based)."""

    shape: ShapeProfile
    X: tuple[frozenset, ...]
    Y: tuple[frozenset, ...]

    def __post_init__(self):
        X = tuple(frozenset(int(a) for a in xs) for xs in self.X)
        Y = tuple(frozenset(int(b) for b in ys) for ys in self.Y)
        if len(X) != self.shape.l or len(Y) != self.shape.l:
            raise ShapeError("cover needs one row set and one column set per block")
        for (m, n), xs, ys in zip(self.shape.blocks, X, Y):
            if any(not 0 <= a < m for a in xs) or any(not 0 <= b < n for b in ys):
                raise ShapeError("cover index out of range")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @classmethod
    def empty(cls, shape: ShapeProfile) -> "MultiCover":
        return cls(shape, ((),) * shape.l, ((),) * shape.l)

    @classmethod
    def full(cls, shape: ShapeProfile) -> "MultiCover":
        return cls(shape, tuple(range(m) for m in shape.m), tuple(range(n) for n in shape.n))

    @classmethod
    def from_lines(cls, shape: ShapeProfile, lines: Iterable[tuple[int, str, int]]) -> "MultiCover":
        """Build from (block, 'row'|'col', index) triples."""
        X = [set() for _ in range(shape.l)]
        Y = [set() for _ in range(shape.l)]
        for i, kind, idx in lines:
            (X if kind == "row" else Y)[i].add(idx)
        return cls(shape, tuple(X), tuple(Y))

    @classmethod
    def from_one_based(cls, shape: ShapeProfile, X, Y) -> "MultiCover":
        return cls(shape, tuple({a - 1 for a in xs} for xs in X), tuple({b - 1 for b in ys} for ys in Y))

    @property
    def size(self) -> int:
        return sum(len(x) + len(y) for x, y in zip(self.X, self.Y))

    def __len__(self):
        return self.size

    def lines(self) -> list[tuple[int, str, int]]:
        out = []
        for i in range(self.shape.l):
            out += [(i, "row", a) for a in sorted(self.X[i])]
            out += [(i, "col", b) for b in sorted(self.Y[i])]
        return out

    def union(self, other: "MultiCover") -> "MultiCover":
        return MultiCover(self.shape, tuple(a | b for a, b in zip(self.X, other.X)),
                          tuple(a | b for a, b in zip(self.Y, other.Y)))

    def issubset(self, other: "MultiCover") -> bool:
        return all(a <= b for a, b in zip(self.X, other.X)) and all(
            a <= b for a, b in zip(self.Y, other.Y))

    def support_dim(self) -> int:
        return sum(n * len(x) + m * len(y) - len(x) * len(y)
                   for (m, n), x, y in zip(self.shape.blocks, self.X, self.Y))

    def projected_shape(self) -> ShapeProfile:
        m = [mi - len(x) for mi, x in zip(self.shape.m, self.X)]
        n = [ni - len(y) for ni, y in zip(self.shape.n, self.Y)]
        return ShapeProfile(tuple(m), tuple(n), unchecked=True)

    def out_indices(self) -> np.ndarray:
        """Flat positions kept by the projection that deletes the covered lines."""
        idx = []
        for off, (m, n), xs, ys in zip(self.shape.offsets, self.shape.blocks, self.X, self.Y):
            for a in range(m):
                if a in xs:
                    continue
                idx.extend(off + a * n + b for b in range(n) if b not in ys)
        return np.array(idx, dtype=np.int64)

    def in_indices(self) -> np.ndarray:
        """Flat positions of the covered entries, in the canonical order."""
        idx = []
        for off, (m, n), xs, ys in zip(self.shape.offsets, self.shape.blocks, self.X, self.Y):
            for a in sorted(xs):
                idx.extend(off + a * n + b for b in range(n))
            for b in sorted(ys):
                idx.extend(off + a * n + b for a in range(m) if a not in xs)
        return np.array(idx, dtype=np.int64)

    def covered_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape.total, dtype=bool)
        mask[self.in_indices()] = True
        return mask

    def to_json(self) -> dict:
        return {"X": [sorted(a + 1 for a in x) for x in self.X],
                "Y": [sorted(b + 1 for b in y) for y in self.Y]}


def all_lines(shape: ShapeProfile) -> list[tuple[int, str, int]]:
    out = []
    for i, (m, n) in enumerate(shape.blocks):
        out += [(i, "row", a) for a in range(m)]
        out += [(i, "col", b) for b in range(n)]
    return out


def covers_of_size(shape: ShapeProfile, size: int) -> Iterator[MultiCover]:
    """Every multi-cover with exactly ``size`` lines."""
    lines = all_lines(shape)
    for combo in itertools.combinations(lines, size):
        yield MultiCover.from_lines(shape, combo)


def count_covers_of_size(shape: ShapeProfile, size: int) -> int:
    from math import comb

    return comb(sum(shape.m) + sum(shape.n), size)


# -- bipartite matching --------------------------------------------------------


def _hopcroft_karp(adj: list[list[int]], n_right: int) -> tuple[list[int], list[int]]:
    n_left = len(adj)
    INF = n_left + n_right + 1
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w < 0 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] < 0:
                dfs(u)
    return match_l, match_r


def block_min_cover(mask) -> tuple[list[int], list[int]]:
    """Minimum set of rows and columns covering the True entries of a 2-D mask."""
    mask = np.asarray(mask, dtype=bool)
    m, n = mask.shape
    adj = [list(np.nonzero(mask[a])[0]) for a in range(m)]
    match_l, match_r = _hopcroft_karp(adj, n)
    # König: Z = vertices reachable from free rows along alternating paths
    seen_l = [False] * m
    seen_r = [False] * n
    stack = [u for u in range(m) if match_l[u] < 0]
    for u in stack:
        seen_l[u] = True
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen_r[v]:
                seen_r[v] = True
                w = match_r[v]
                if w >= 0 and not seen_l[w]:
                    seen_l[w] = True
                    stack.append(w)
    rows = [a for a in range(m) if not seen_l[a]]
    cols = [b for b in range(n) if seen_r[b]]
    return rows, cols


def block_weight(mask) -> int:
    mask = np.asarray(mask, dtype=bool)
    m, n = mask.shape
    if not mask.any():
        return 0
    adj = [list(np.nonzero(mask[a])[0]) for a in range(m)]
    match_l, _ = _hopcroft_karp(adj, n)
    return sum(1 for v in match_l if v >= 0)


# -- weights ---------------------------------------------------------------------


def is_multicover(X: MultiCover, C: MatrixTuple) -> bool:
    if not X.shape.same_dims(C.shape):
        raise ShapeError("shape mismatch")
    for block, xs, ys in zip(C.blocks, X.X, X.Y):
        for a, b in zip(*np.nonzero(block)):
            if a not in xs and b not in ys:
                return False
    return True


def min_cover(C: MatrixTuple) -> MultiCover:
    """A multi-cover of C of minimum size."""
    X, Y = [], []
    for block in C.blocks:
        rows, cols = block_min_cover(block != 0) if block.size else ([], [])
        X.append(rows)
        Y.append(cols)
    return MultiCover(C.shape, tuple(X), tuple(Y))


def mc_weight(C: MatrixTuple) -> int:
    return sum(block_weight(b != 0) for b in C.blocks if b.size)


def _block_weight_bruteforce(mask: np.ndarray) -> int:
    m, n = mask.shape
    if m + n > 24:
        raise ValueError("too large for brute force")
    nz = list(zip(*np.nonzero(mask)))
    lines = [("r", a) for a in range(m)] + [("c", b) for b in range(n)]
    for size in range(len(lines) + 1):
        for combo in itertools.combinations(lines, size):
            rows = {i for kind, i in combo if kind == "r"}
            cols = {i for kind, i in combo if kind == "c"}
            if all(a in rows or b in cols for a, b in nz):
                return size
    raise AssertionError("the full cover always works")


def mc_weight_bruteforce(C: MatrixTuple) -> int:
    """Minimum cover size found by trying line subsets in increasing size."""
    return sum(_block_weight_bruteforce(b != 0) for b in C.blocks)


def companion_weights(C: MatrixTuple) -> dict[str, int]:
    sr = sum(gflinalg.rank(C.field, b) for b in C.blocks if b.size)
    ham_col = sum(int((b != 0).any(axis=0).sum()) for b in C.blocks if b.size)
    ham_row = sum(int((b != 0).any(axis=1).sum()) for b in C.blocks if b.size)
    return {"sr": sr, "ham_col": ham_col, "ham_row": ham_row}


# -- projections ---------------------------------------------------------------


def project_out(X: MultiCover, C: MatrixTuple) -> MatrixTuple:
    """Delete the covered rows and columns of every block."""
    if not X.shape.same_dims(C.shape):
        raise ShapeError("shape mismatch")
    return MatrixTuple.from_flat(X.projected_shape(), C.field, C.flat()[X.out_indices()])


def project_in(X: MultiCover, C: MatrixTuple) -> np.ndarray:
    """The covered entries of C as a flat vector."""
    if not X.shape.same_dims(C.shape):
        raise ShapeError("shape mismatch")
    return C.flat()[X.in_indices()]


def embed_out(X: MultiCover, D: MatrixTuple) -> MatrixTuple:
    """Inverse of project_out on the uncovered entries, zero on the covered ones."""
    flat = np.zeros(X.shape.total, dtype=np.int64)
    flat[X.out_indices()] = D.flat()
    return MatrixTuple.from_flat(X.shape, D.field, flat)


def transpose_pattern(C: MatrixTuple, t: Sequence[int]) -> MatrixTuple:
    if len(t) != C.shape.l:
        raise ShapeError("transposition vector has the wrong length")
    blocks = tuple(b.T if ti else b for b, ti in zip(C.blocks, t))
    return MatrixTuple(C.shape.transposed(t), C.field, blocks)


def transpose_indices(shape: ShapeProfile, t: Sequence[int]) -> np.ndarray:
    """perm with transpose_pattern(C, t).flat() == C.flat()[perm]."""
    perm = []
    for off, (m, n), ti in zip(shape.offsets, shape.blocks, t):
        grid = np.arange(off, off + m * n).reshape(m, n)
        perm.append((grid.T if ti else grid).reshape(-1))
    return np.concatenate(perm) if perm else np.zeros(0, dtype=np.int64)


# -- vectorised weights of many flat tuples ---------------------------------------

_PATTERN_WEIGHTS: dict[tuple[int, int], dict[int, int]] = {}


def pattern_weight(m: int, n: int, pattern: int) -> int:
    """Cover weight of the m x n 0/1 pattern packed row-major into an int."""
    cache = _PATTERN_WEIGHTS.setdefault((m, n), {})
    w = cache.get(pattern)
    if w is None:
        bits = [(pattern >> j) & 1 for j in range(m * n)]
        w = block_weight(np.array(bits, dtype=bool).reshape(m, n))
        cache[pattern] = w
    return w


def _patterns(block_flat: np.ndarray) -> np.ndarray:
    nz = (block_flat != 0).astype(np.int64)
    k = nz.shape[1]
    if k > 62:
        raise ValueError("block too large for packed patterns")
    return nz @ (np.int64(1) << np.arange(k, dtype=np.int64))


def batch_weights(shape: ShapeProfile, words: np.ndarray, metric: str = "mc",
                  field: FieldCtx | None = None) -> np.ndarray:
    """Weights of many flat tuples at once (rows of ``words``)."""
    words = np.asarray(words, dtype=np.int64)
    words = words.reshape(words.shape[0] if words.ndim == 2 else -1, shape.total)
    out = np.zeros(words.shape[0], dtype=np.int64)
    for off, (m, n) in zip(shape.offsets, shape.blocks):
        if m * n == 0:
            continue
        blk = words[:, off:off + m * n]
        if metric == "mc":
            pats = _patterns(blk)
            uniq, inv = np.unique(pats, return_inverse=True)
            w = np.array([pattern_weight(m, n, int(p)) for p in uniq], dtype=np.int64)
            out += w[inv.reshape(-1)]
        elif metric == "ham_col":
            out += (blk.reshape(-1, m, n) != 0).any(axis=1).sum(axis=1)
        elif metric == "ham_row":
            out += (blk.reshape(-1, m, n) != 0).any(axis=2).sum(axis=1)
        elif metric == "ham":
            out += (blk != 0).sum(axis=1)
        elif metric == "sr":
            if field is None:
                raise ValueError("sum-rank weights need the field")
            out += gflinalg.batched_rank(field, blk.reshape(-1, m, n))
        else:
            raise ValueError(f"unknown metric {metric!r}")
    return out


# -- random errors ------------------------------------------------------------------


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def random_cover(shape: ShapeProfile, size: int, rng) -> MultiCover:
    rng = _as_rng(rng)
    lines = all_lines(shape)
    if size > len(lines):
        raise ValueError("cover larger than the number of lines")
    pick = rng.choice(len(lines), size=size, replace=False) if size else []
    return MultiCover.from_lines(shape, [lines[j] for j in pick])


def random_error(shape: ShapeProfile, field: FieldCtx, t: int, rng) -> MatrixTuple:
    """Uniform entries on a random cover of size t, resampled until the weight is t."""
    if t > shape.max_weight:
        raise ValueError(f"unreachable weight {t}: at most {shape.max_weight}")
    rng = _as_rng(rng)
    if t == 0:
        return MatrixTuple.zeros(shape, field)
    while True:
        X = random_cover(shape, t, rng)
        mask = X.covered_mask()
        flat = np.zeros(shape.total, dtype=np.int64)
        flat[mask] = rng.integers(0, field.order, size=int(mask.sum()))
        E = MatrixTuple.from_flat(shape, field, flat)
        if mc_weight(E) == t:
            return E
