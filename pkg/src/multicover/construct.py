"""Code constructions: matrix representations, linearized Reed-Solomon codes,
the nested map phi, and the sum-rank BCH dimension calculator."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from multicover import lincode
from multicover.ffield import ExtensionCtx, FieldCtx, extension_make, gf, primitive_element
from multicover.lincode import LinearCode
from multicover.mctuple import MatrixTuple, MultiCover, ShapeError, ShapeProfile


# -- matrix representation -------------------------------------------------------------


def matrix_repr(ext: ExtensionCtx, c: Sequence[int]) -> np.ndarray:
    """s x s matrix whose column j holds the coordinates of c_j."""
    if len(c) != ext.s:
        raise ValueError("length mismatch")
    return np.array([ext.coords(x) for x in c], dtype=np.int64).T.copy()


def matrix_repr_tuple(ext: ExtensionCtx, t: int, vectors: Sequence[Sequence[int]]) -> MatrixTuple:
    if len(vectors) != t:
        raise ValueError("length mismatch")
    shape = ShapeProfile.uniform(ext.s, ext.s, t)
    return MatrixTuple(shape, ext.base, tuple(matrix_repr(ext, v) for v in vectors))


# -- linearized Reed-Solomon codes -------------------------------------------------------


@dataclass(frozen=True)
class LrsParams:
    q: int
    s: int
    t: int
    k: int
    basis: tuple[int, ...] | None = None
    gamma: int | None = None

    def __post_init__(self):
        if self.s < 1 or self.t < 1:
            raise ValueError("s and t must be positive")
        if not 1 <= self.k <= self.s * self.t:
            raise ValueError(f"k must lie in 1..st = {self.s * self.t}")


def lrs_extension(params: LrsParams) -> ExtensionCtx:
    return extension_make(gf(params.q), params.s, params.basis)


def lrs_generator(params: LrsParams, ext: ExtensionCtx | None = None) -> np.ndarray:
    """k x ts generator over F_{q^s}, entries as top-field integers."""
    if params.q <= params.t:
        warnings.warn("q ≤ t violates MSRD hypothesis", stacklevel=2)
    ext = ext or lrs_extension(params)
    top, q, s = ext.top, params.q, params.s
    gamma = primitive_element(top) if params.gamma is None else params.gamma
    beta = ext.ordered_basis
    G = np.zeros((params.k, params.t * s), dtype=np.int64)
    for i in range(params.t):
        for u in range(params.k):
            twist = top.pow(gamma, i * ((q**u - 1) // (q - 1)))
            for j in range(s):
                G[u, i * s + j] = top.mul(ext.frobenius(beta[j], u), twist)
    return G


def lrs_code(params: LrsParams) -> LinearCode:
    """The F_q-linear matrix code in (F_q^{s x s})^t spanned by the LRS code."""
    ext = lrs_extension(params)
    G = lrs_generator(params, ext)
    top, s, t = ext.top, params.s, params.t
    shape = ShapeProfile.uniform(s, s, t)
    rows = []
    for g in G:
        for lam in ext.ordered_basis:
            word = [top.mul(lam, int(x)) for x in g]
            rows.append(matrix_repr_tuple(ext, t, [word[i * s:(i + 1) * s] for i in range(t)]))
    return lincode.code_make(shape, ext.base, rows)


# -- the nested map phi --------------------------------------------------------------------


@dataclass(frozen=True)
class NestParams:
    u: int
    r: int
    s: int
    l: int

    def __post_init__(self):
        if min(self.u, self.r, self.s, self.l) < 1:
            raise ValueError("u, r, s, l must be positive")
        if self.s > self.r:
            raise ValueError("need s <= r")

    @property
    def t(self) -> int:
        return self.u * self.l

    @property
    def m(self) -> int:
        return self.u * self.r

    @property
    def n(self) -> int:
        return self.u * self.s

    @property
    def inner_shape(self) -> ShapeProfile:
        return ShapeProfile.uniform(self.r, self.s, self.t)

    @property
    def outer_shape(self) -> ShapeProfile:
        return ShapeProfile.uniform(self.m, self.n, self.l)


def _slot(params: NestParams, a: int, b: int) -> int:
    """Which of the u inner codewords sits at grid position (a, b), 0-based."""
    return (b - a) % params.u


def nest_phi(params: NestParams, tuples: Sequence[MatrixTuple]) -> MatrixTuple:
    if len(tuples) != params.u:
        raise ShapeError("shape mismatch")
    inner = params.inner_shape
    for T in tuples:
        if not T.shape.same_dims(inner):
            raise ShapeError("shape mismatch")
    F = tuples[0].field
    u, r, s = params.u, params.r, params.s
    blocks = []
    for i in range(params.l):
        M = np.zeros((params.m, params.n), dtype=np.int64)
        for a in range(u):
            for b in range(u):
                M[a * r:(a + 1) * r, b * s:(b + 1) * s] = tuples[_slot(params, a, b)].blocks[i * u + a]
        blocks.append(M)
    return MatrixTuple(params.outer_shape, F, tuple(blocks))


def unnest(params: NestParams, C: MatrixTuple) -> list[MatrixTuple]:
    if not C.shape.same_dims(params.outer_shape):
        raise ShapeError("shape mismatch")
    u, r, s = params.u, params.r, params.s
    comps = [[None] * params.t for _ in range(u)]
    for i in range(params.l):
        for a in range(u):
            for b in range(u):
                comps[_slot(params, a, b)][i * u + a] = C.blocks[i][a * r:(a + 1) * r, b * s:(b + 1) * s]
    return [MatrixTuple(params.inner_shape, C.field, tuple(c)) for c in comps]


def phi_indices(params: NestParams) -> np.ndarray:
    """perm with nest_phi(...).flat() == concat(C^1.flat(), ..., C^u.flat())[perm]."""
    inner_total = params.inner_shape.total
    labels = [np.arange(w * inner_total, (w + 1) * inner_total) for w in range(params.u)]
    u, r, s = params.u, params.r, params.s
    inner = params.inner_shape
    out = []
    for i in range(params.l):
        M = np.zeros((params.m, params.n), dtype=np.int64)
        for a in range(u):
            for b in range(u):
                k = i * u + a
                off = inner.offsets[k]
                blk = labels[_slot(params, a, b)][off:off + r * s].reshape(r, s)
                M[a * r:(a + 1) * r, b * s:(b + 1) * s] = blk
        out.append(M.reshape(-1))
    return np.concatenate(out)


def nested_code(params: NestParams, component: LinearCode) -> LinearCode:
    if not component.shape.same_dims(params.inner_shape):
        raise ShapeError("shape mismatch")
    k, total = component.dim, params.inner_shape.total
    perm = phi_indices(params)
    rows = []
    for w in range(params.u):
        for g in component.generator:
            big = np.zeros(params.u * total, dtype=np.int64)
            big[w * total:(w + 1) * total] = g
            rows.append(big[perm])
    if not rows:
        return lincode.zero_code(params.outer_shape, component.field)
    assert len(rows) == params.u * k
    return lincode.code_make(params.outer_shape, component.field, rows)


def lift_cover(params: NestParams, X: MultiCover) -> list[MultiCover]:
    """Split a cover of the nested shape into one cover per inner codeword."""
    if not X.shape.same_dims(params.outer_shape):
        raise ShapeError("shape mismatch")
    u, r, s = params.u, params.r, params.s
    out = []
    for w in range(u):
        rows = [set() for _ in range(params.t)]
        cols = [set() for _ in range(params.t)]
        for i in range(params.l):
            for rho in X.X[i]:
                rows[i * u + rho // r].add(rho % r)
            for gamma in X.Y[i]:
                b = gamma // s
                a = (b - w) % u
                cols[i * u + a].add(gamma % s)
        out.append(MultiCover(params.inner_shape, tuple(rows), tuple(cols)))
    return out


def lrs_nested(q: int, s: int, t: int, k: int, u: int, **kw) -> tuple[LinearCode, LinearCode, NestParams]:
    """(nested code, component code, params) for the LRS family with r = s."""
    if t % u:
        raise ValueError("u must divide t")
    params = NestParams(u, s, s, t // u)
    comp = lrs_code(LrsParams(q, s, t, k, **kw))
    return nested_code(params, comp), comp, params


def random_code(shape: ShapeProfile, field: FieldCtx, k: int, rng) -> LinearCode:
    """A random code of dimension exactly k (resampled until full rank)."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    if not 0 <= k <= shape.total:
        raise ValueError("dimension out of range")
    while True:
        G = rng.integers(0, field.order, size=(k, shape.total), dtype=np.int64)
        code = lincode.code_make(shape, field, G)
        if code.dim == k:
            return code


# -- sum-rank BCH dimension bound ---------------------------------------------------------


def cyclotomic_cosets(base: int, t: int) -> list[list[int]]:
    """Orbits of multiplication by ``base`` on Z/t, ordered by smallest element."""
    seen, out = set(), []
    for a in range(t):
        if a in seen:
            continue
        orbit, x = [], a
        while x not in orbit:
            orbit.append(x)
            x = (x * base) % t
        seen.update(orbit)
        out.append(sorted(orbit))
    return out


def srbch_dimension_bound(q0: int, r: int, s: int, u: int, l: int, delta: int,
                          b_offset: int = 1) -> dict:
    q = q0**r
    n, t = u * s, u * l
    problems = []
    if gcd(t, s) != 1:
        problems.append("t and s are not coprime")
    if gcd(t, q) != 1:
        problems.append("t and q are not coprime")
    if (q - 1) % t:
        problems.append("t does not divide q - 1")
    if not 0 <= delta <= l * n:
        problems.append("δ outside 0..ln")
    if problems:
        raise ValueError("hypotheses violated: " + "; ".join(problems))
    cosets = cyclotomic_cosets(q0**s % t if t > 1 else 0, t)
    ks = []
    for coset in cosets:
        members = set(coset)
        ks.append(sum(1 for j in range(max(0, delta - 1)) if (b_offset + j) % t in members))
    ds = [len(c) for c in cosets]
    eq7 = l * n * n - n * sum(min(s * d, r * k) for d, k in zip(ds, ks))
    eq8 = l * n * n - n * r * (delta - 1)
    return {"eq7": eq7, "eq8": eq8, "cosets": cosets, "d": ds, "k": ks,
            "applicable": delta >= 1, "n": n, "t": t, "q": q}
