"""Finite fields F_{p^e} and extensions F_{q^s} over F_q.

Elements are plain integers: the e coefficients of the residue polynomial,
read as base-p digits with the constant term least significant.  A field of
order p^e therefore owns exactly the integers 0 .. p^e - 1.

Small fields (the only ones this package really cares about) get full
addition/multiplication tables, so that numpy arrays of elements can be
combined with fancy indexing.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

TABLE_LIMIT = 1024


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


# -- polynomials over F_p as coefficient lists, constant term first ----------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo b over F_p (b nonzero, trimmed)."""
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        _trim(a)
    return a


def _monic_in_order(p: int, degree: int):
    # ascending in the integer c_0 + c_1 p + ... + c_{e-1} p^{e-1}
    for value in range(p**degree):
        coeffs = []
        v = value
        for _ in range(degree):
            coeffs.append(v % p)
            v //= p
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for divisor in _monic_in_order(p, d):
            if not poly_mod(poly, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> list[int]:
    for cand in _monic_in_order(p, e):
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("unreachable: irreducibles exist in every degree")


# -- the field ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """The finite field F_{p^e} = F_p[x] / (modulus)."""

    p: int
    e: int
    modulus: tuple[int, ...]
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def order(self) -> int:
        return self.p**self.e

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e}, modulus={list(self.modulus)})"

    # digits <-> integers
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        v = 0
        for d in reversed(list(digits)):
            v = v * self.p + (d % self.p)
        return v

    def check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of F_{self.order}")
        return int(a)

    # scalar arithmetic ----------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        rem = poly_mod(prod, self.modulus, self.p)
        return self.from_digits(rem + [0] * (self.e - len(rem)))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def arith(self, op: str, *operands: int) -> int:
        for x in operands:
            self.check(x)
        if op == "add":
            return self.add(*operands)
        if op == "sub":
            return self.sub(*operands)
        if op == "mul":
            return self.mul(*operands)
        if op == "inv":
            return self.inv(*operands)
        if op == "pow":
            a, k = operands[0], operands[1]
            return self.pow(a, k)
        raise ValueError(f"unknown operation {op!r}")

    def order_of(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    # numpy tables ---------------------------------------------------------
    def tables(self) -> dict[str, np.ndarray]:
        """ADD, MUL, NEG, INV lookup tables (fields up to TABLE_LIMIT elements)."""
        if self._tables:
            return self._tables
        q = self.order
        if q > TABLE_LIMIT:
            raise ValueError(f"field of order {q} is too large for lookup tables")
        els = range(q)
        add = np.array([[self.add(a, b) for b in els] for a in els], dtype=np.int64)
        mul = np.array([[self.mul(a, b) for b in els] for a in els], dtype=np.int64)
        neg = np.array([self.neg(a) for a in els], dtype=np.int64)
        inv = np.array([0] + [self.inv(a) for a in range(1, q)], dtype=np.int64)
        self._tables.update(add=add, mul=mul, neg=neg, inv=inv)
        return self._tables

    # vectorised ops on integer arrays
    def vadd(self, a, b):
        if self.e == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self.tables()["add"][a, b]

    def vneg(self, a):
        if self.e == 1:
            return (-np.asarray(a)) % self.p
        return self.tables()["neg"][a]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.e == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        return self.tables()["mul"][a, b]

    def vinv(self, a):
        return self.tables()["inv"][a]


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus: tuple[int, ...]) -> FieldCtx:
    return FieldCtx(p, e, modulus)


def field_make(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FieldCtx:
    """Build F_{p^e}; without a modulus the smallest monic irreducible is used."""
    if not is_prime(p):
        raise ValueError(f"not prime: {p}")
    if e < 1:
        raise ValueError("degree must be positive")
    if modulus is None:
        mod = smallest_irreducible(p, e)
    else:
        mod = [int(c) % p for c in modulus]
        if len(mod) != e + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {e}")
        if not is_irreducible(mod, p):
            raise ValueError(f"reducible modulus: {list(modulus)}")
    return _cached_field(p, e, tuple(mod))


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^e, raising ValueError if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, v = 0, q
    while v % p == 0:
        v //= p
        e += 1
    if v != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def gf(q: int) -> FieldCtx:
    """Default field of order q."""
    p, e = prime_power(q)
    return field_make(p, e)


def primitive_element(ctx: FieldCtx) -> int:
    target = ctx.order - 1
    if target == 1:
        return 1
    for a in range(1, ctx.order):
        if ctx.order_of(a) == target:
            return a
    raise AssertionError("unreachable: every finite field has a primitive element")


def field_to_json(ctx: FieldCtx) -> dict:
    return {"p": ctx.p, "e": ctx.e, "modulus": list(ctx.modulus)}


def field_from_json(obj: dict) -> FieldCtx:
    return field_make(int(obj["p"]), int(obj["e"]), obj.get("modulus"))


# -- extensions ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtensionCtx:
    """F_{q^s} viewed as an s-dimensional vector space over F_q.

    The top field is F_{p^{es}}; ``embed`` is the image of every base-field
    element in it.  ``ordered_basis`` lists s top-field elements.
    """

    base: FieldCtx
    s: int
    top: FieldCtx
    embed: tuple[int, ...]
    ordered_basis: tuple[int, ...]
    _coords: dict = field(default_factory=dict, repr=False)

    def to_top(self, a: int) -> int:
        return self.embed[a]

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != self.s:
            raise ValueError("length mismatch")
        acc = 0
        for c, b in zip(coords, self.ordered_basis):
            acc = self.top.add(acc, self.top.mul(self.embed[int(c)], b))
        return acc

    def coords(self, c: int) -> tuple[int, ...]:
        """Coordinates of c with respect to the ordered basis."""
        if not self._coords:
            for vec in itertools.product(range(self.base.order), repeat=self.s):
                self._coords[self.from_coords(vec)] = vec
        return self._coords[int(c)]

    def frobenius(self, c: int, u: int) -> int:
        """c raised to q^u."""
        if u < 0:
            raise ValueError("u must be non-negative")
        return self.top.pow(c, self.base.order ** (u % self.s))

    def in_base(self, c: int) -> int | None:
        """The base-field element equal to c, if c lies in the image of F_q."""
        try:
            return self.embed.index(c)
        except ValueError:
            return None


def _rank_mod_field(ctx: FieldCtx, rows: list[list[int]]) -> int:
    from multicover.gflinalg import rank

    return rank(ctx, np.array(rows, dtype=np.int64).reshape(len(rows), -1))


def extension_make(
    base: FieldCtx, s: int, basis: Sequence[int] | None = None
) -> ExtensionCtx:
    """Realise F_{q^s} as F_{p^{e s}} together with an embedding of F_q."""
    if s < 1:
        raise ValueError("extension degree must be positive")
    top = field_make(base.p, base.e * s)
    # send the base generator x to the smallest root of the base modulus in top
    if base.e == 1:
        root = 0
    else:
        root = None
        for cand in range(top.order):
            acc = 0
            for coef in reversed(base.modulus):
                acc = top.add(top.mul(acc, cand), coef)
            if acc == 0:
                root = cand
                break
        assert root is not None
    embed = []
    for a in range(base.order):
        acc, power = 0, 1
        for d in base.digits(a):
            acc = top.add(acc, top.mul(d, power))
            power = top.mul(power, root)
        embed.append(acc)
    if basis is None:
        g = base.p if top.e > 1 else 1
        basis = [top.pow(g, i) for i in range(s)]
    basis = tuple(int(b) for b in basis)
    if len(basis) != s:
        raise ValueError("basis must have s elements")
    ext = ExtensionCtx(base, s, top, tuple(embed), basis)
    # full rank check over F_p on the F_p-expansion of the span
    rows = []
    for b in basis:
        for a in range(base.e):
            rows.append(top.digits(top.mul(embed[base.p**a], b)))
    if _rank_mod_field(field_make(base.p), rows) != base.e * s:
        raise ValueError("ordered basis is not linearly independent over the base field")
    return ext
