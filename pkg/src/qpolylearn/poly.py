"""Multilinear polynomials over GF(q)^n.

A polynomial is a sparse coefficient map from variable subsets S of
{1, ..., n} (stored as bitmasks, bit i-1 for variable i) to field
elements:  f(x) = sum over S of alpha_S * prod_{i in S} x_i, with every
|S| bounded by the degree d.  Points of GF(q)^n are plain tuples of
element encodings.

The canonical subset order everywhere (serialization, random generation,
learner reports) is by (size, bitmask) ascending.
"""

from __future__ import annotations

import functools
import json
import math
import random
import warnings
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import ContextMismatch, DimensionMismatch, InvalidDegree
from .field import FieldCtx

MAX_VARS = 64


# ----------------------------------------------------------------------
# subsets as bitmasks
# ----------------------------------------------------------------------

def subset_from_members(members: Iterable[int], n: int | None = None) -> int:
    """Bitmask of a strictly increasing list of 1-based variable indices."""
    mask = 0
    prev = 0
    for m in members:
        if m <= prev:
            raise ValueError("subset members must be strictly increasing positive integers")
        if n is not None and m > n:
            raise ValueError(f"subset member {m} exceeds variable count {n}")
        mask |= 1 << (m - 1)
        prev = m
    return mask


def subset_members(mask: int) -> tuple[int, ...]:
    """1-based members of a subset bitmask, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subsets_of_size(n: int, k: int) -> Iterator[int]:
    """All k-subsets of {1..n} as bitmasks, in ascending bitmask order."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    v = (1 << k) - 1
    limit = 1 << n
    while v < limit:
        yield v
        u = v & -v
        t = v + u
        v = t | (((v ^ t) // u) >> 2)


def subsets_up_to(n: int, d: int) -> Iterator[int]:
    """All subsets of size <= d in canonical (size, bitmask) order."""
    for k in range(min(d, n) + 1):
        yield from subsets_of_size(n, k)


# ----------------------------------------------------------------------
# points and index encoding
# ----------------------------------------------------------------------
# Index encoding is mixed-radix base q with coordinate 1 as the most
# significant digit; state vectors use the same convention.

def zero_point(n: int) -> tuple[int, ...]:
    return (0,) * n


def basis_point(n: int, i: int) -> tuple[int, ...]:
    """The standard basis vector e_i (1-based)."""
    if not 1 <= i <= n:
        raise ValueError(f"basis index {i} out of range [1, {n}]")
    return tuple(1 if j == i else 0 for j in range(1, n + 1))


def add_points(ctx: FieldCtx, x, y) -> tuple[int, ...]:
    if len(x) != len(y):
        raise DimensionMismatch(f"point lengths differ: {len(x)} vs {len(y)}")
    return tuple(ctx.add(a, b) for a, b in zip(x, y))


def point_to_index(ctx: FieldCtx, x) -> int:
    idx = 0
    for c in x:
        idx = idx * ctx.q + c
    return idx


def index_to_point(ctx: FieldCtx, n: int, idx: int) -> tuple[int, ...]:
    out = [0] * n
    for j in range(n - 1, -1, -1):
        idx, out[j] = divmod(idx, ctx.q)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def point_matrix(ctx: FieldCtx, n: int) -> np.ndarray:
    """(q^n, n) int64 matrix of coordinates of every point, by index."""
    q = ctx.q
    idx = np.arange(q ** n, dtype=np.int64)
    m = np.empty((q ** n, n), dtype=np.int64)
    for j in range(n):
        m[:, j] = (idx // q ** (n - 1 - j)) % q
    m.flags.writeable = False
    return m


@functools.lru_cache(maxsize=None)
def index_strides(q: int, n: int) -> tuple[int, ...]:
    return tuple(q ** (n - 1 - j) for j in range(n))


@functools.lru_cache(maxsize=None)
def all_points(ctx: FieldCtx, n: int) -> tuple[tuple[int, ...], ...]:
    """Every point of GF(q)^n in index order, as tuples."""
    return tuple(
        index_to_point(ctx, n, i) for i in range(ctx.q ** n)
    )


# ----------------------------------------------------------------------
# seeded randomness
# ----------------------------------------------------------------------

_M64 = (1 << 64) - 1


def derive_seed(master: int, index: int) -> int:
    """Deterministic per-trial seed (splitmix64 step of master + index)."""
    z = (master + (index + 1) * 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return (z ^ (z >> 31)) & _M64


# ----------------------------------------------------------------------
# the polynomial
# ----------------------------------------------------------------------

class MultilinearPoly:
    """Sparse multilinear polynomial of degree <= d in n variables.

    ``coeffs`` maps subset bitmasks to nonzero field elements; absent
    subsets are zero, and zero values are dropped at construction so two
    equal polynomials always carry identical maps.
    """

    def __init__(self, ctx: FieldCtx, n: int, d: int, coeffs=None):
        if not 0 <= n <= MAX_VARS:
            raise ValueError(f"variable count {n} outside [0, {MAX_VARS}]")
        if d < 0:
            raise ValueError("degree bound must be nonnegative")
        if d > n:
            warnings.warn(
                f"degree bound {d} exceeds variable count {n}; clamping to {n}",
                stacklevel=2,
            )
            d = n
        self.ctx = ctx
        self.n = n
        self.d = d
        cleaned: dict[int, int] = {}
        for mask, val in (coeffs or {}).items():
            if mask < 0 or mask >> n:
                raise ValueError(f"subset {bin(mask)} not within [1, {n}]")
            if mask.bit_count() > d:
                raise ValueError(
                    f"subset of size {mask.bit_count()} exceeds degree bound {d}"
                )
            ctx.check(val)
            if val:
                cleaned[mask] = val
        self._coeffs = cleaned

    # -- access ---------------------------------------------------------

    def coeff(self, mask: int) -> int:
        return self._coeffs.get(mask, 0)

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero (subset mask, coefficient) pairs in canonical order."""
        return sorted(self._coeffs.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))

    def num_terms(self) -> int:
        return len(self._coeffs)

    def __repr__(self):
        parts = []
        for mask, val in self.terms():
            mono = "".join(f"x{i}" for i in subset_members(mask)) or "1"
            parts.append(f"{val}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"<{body} over {self.ctx!r}, n={self.n}, d<={self.d}>"

    # -- evaluation ------------------------------------------------------

    def evaluate(self, x) -> int:
        """f(x) for a length-n point; the empty product is 1."""
        if len(x) != self.n:
            raise DimensionMismatch(f"point has length {len(x)}, expected {self.n}")
        ctx = self.ctx
        acc = 0
        for mask, val in self._coeffs.items():
            prod = val
            m = mask
            i = 0
            while m:
                if m & 1:
                    prod = ctx.mul(prod, x[i])
                    if not prod:
                        break
                m >>= 1
                i += 1
            acc = ctx.add(acc, prod)
        return acc

    def value_table(self) -> np.ndarray:
        """f evaluated at every point of GF(q)^n, in index order (vectorized)."""
        ctx = self.ctx
        qn = ctx.q ** self.n
        pm = point_matrix(ctx, self.n)
        addt, mult = ctx.add_table, ctx.mul_table
        acc = np.zeros(qn, dtype=np.int64)
        for mask, val in self._coeffs.items():
            row = np.full(qn, val, dtype=np.int64)
            for i in subset_members(mask):
                row = mult[row, pm[:, i - 1]]
            acc = addt[acc, row]
        return acc

    # -- structure -------------------------------------------------------

    def degree_part(self, k: int) -> "MultilinearPoly":
        """The homogeneous part made of exactly the size-k coefficients."""
        if not 0 <= k <= self.d:
            raise InvalidDegree(f"degree {k} outside [0, {self.d}]")
        part = {m: v for m, v in self._coeffs.items() if m.bit_count() == k}
        return MultilinearPoly(self.ctx, self.n, k, part)

    def discrete_derivative(self, i: int) -> "MultilinearPoly":
        """The forward difference x -> f(x + e_i) - f(x), symbolically.

        For a multilinear f this deletes monomials missing variable i and
        strips variable i from the rest.
        """
        if not 1 <= i <= self.n:
            raise ValueError(f"variable index {i} out of range [1, {self.n}]")
        bit = 1 << (i - 1)
        out: dict[int, int] = {}
        for mask, val in self._coeffs.items():
            if mask & bit:
                key = mask ^ bit
                out[key] = self.ctx.add(out.get(key, 0), val)
        return MultilinearPoly(self.ctx, self.n, max(self.d - 1, 0), out)

    def derivative_function(
        self, subset: int
    ) -> tuple[Callable[[tuple[int, ...]], int], int]:
        """The iterated discrete derivative along ``subset``, as a pointwise
        alternating sum over the 2^|S| shifted evaluations.

        Returns ``(fn, cost)`` where cost = 2^|S| is the number of plain
        evaluations one call makes.  The integer sign (-1)^m acts on the
        field as multiplication by p-1 when m is odd.
        """
        if subset >> self.n:
            raise ValueError(f"subset {bin(subset)} not within [1, {self.n}]")
        members = subset_members(subset)
        k = len(members)
        ctx = self.ctx

        def fn(x) -> int:
            acc = 0
            for bits in range(1 << k):
                y = list(x)
                for j, m in enumerate(members):
                    if bits >> j & 1:
                        y[m - 1] = ctx.add(y[m - 1], 1)
                v = self.evaluate(tuple(y))
                if (k - bits.bit_count()) & 1:
                    v = ctx.neg(v)
                acc = ctx.add(acc, v)
            return acc

        return fn, 1 << k

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        if self.ctx != other.ctx or self.n != other.n:
            raise ContextMismatch("cannot add polynomials over different domains")
        merged = dict(self._coeffs)
        for mask, val in other._coeffs.items():
            merged[mask] = self.ctx.add(merged.get(mask, 0), val)
        return MultilinearPoly(self.ctx, self.n, max(self.d, other.d), merged)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "field": {
                "p": self.ctx.p,
                "r": self.ctx.r,
                "modulus": list(self.ctx.modulus),
            },
            "n": self.n,
            "d": self.d,
            "coeffs": [
                {"S": list(subset_members(mask)), "alpha": val}
                for mask, val in self.terms()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "MultilinearPoly":
        try:
            fld = data["field"]
            ctx = FieldCtx(int(fld["p"]), int(fld["r"]), fld["modulus"])
            n = int(data["n"])
            d = int(data["d"])
            entries = data["coeffs"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial document: {exc}") from None
        coeffs: dict[int, int] = {}
        for entry in entries:
            members = entry["S"]
            alpha = int(entry["alpha"])
            mask = subset_from_members(members, n)
            if mask.bit_count() > d:
                raise ValueError(f"coefficient subset {members} exceeds degree {d}")
            if mask in coeffs:
                raise ValueError(f"duplicate coefficient subset {members}")
            if not 0 <= alpha < ctx.q:
                raise ValueError(f"coefficient {alpha} outside [0, {ctx.q})")
            coeffs[mask] = alpha
        return cls(ctx, n, d, coeffs)

    @classmethod
    def from_json(cls, text: str) -> "MultilinearPoly":
        return cls.from_dict(json.loads(text))


def poly_equal(f: MultilinearPoly, g: MultilinearPoly) -> bool:
    """Coefficient-map equality (absent entries are zero)."""
    if f.ctx != g.ctx or f.n != g.n:
        raise ContextMismatch("polynomials live over different domains")
    return f._coeffs == g._coeffs


def random_poly(ctx: FieldCtx, n: int, d: int, seed: int) -> MultilinearPoly:
    """Every coefficient with |S| <= d drawn independently and uniformly
    from GF(q), deterministically from the seed."""
    rng = random.Random(seed)
    coeffs = {mask: rng.randrange(ctx.q) for mask in subsets_up_to(n, d)}
    return MultilinearPoly(ctx, n, d, coeffs)


def coefficient_count(n: int, d: int) -> int:
    """Number of subset coefficients with |S| <= d."""
    return sum(math.comb(n, i) for i in range(min(d, n) + 1))
