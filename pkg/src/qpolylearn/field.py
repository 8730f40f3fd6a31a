"""Exact arithmetic in the finite field GF(p^r).

Elements are encoded as plain integers in [0, q), q = p^r, whose base-p
digits are the coefficients of the element over the power basis
1, t, ..., t^(r-1).  With this encoding 0 and 1 are the additive and
multiplicative identities in every field, and elements double as indices
into state vectors and lookup tables.

A :class:`FieldCtx` owns the modulus polynomial and performs all
arithmetic; it is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math

import numpy as np

# Irreducible moduli for the small extension fields used routinely.
# Coefficient lists run from the constant to the leading term; each entry
# is re-validated by the irreducibility check at construction.
BUILTIN_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),        # t^2 + t + 1
    (2, 3): (1, 1, 0, 1),     # t^3 + t + 1
    (3, 2): (1, 0, 1),        # t^2 + 1
    (3, 3): (1, 2, 0, 1),     # t^3 + 2t + 1
}

MAX_Q = 1 << 16
MAX_R = 4

# Dense q x q lookup tables are only built for fields small enough to
# simulate; beyond this, scalar arithmetic still works.
_TABLE_LIMIT = 2048


def is_prime(p: int) -> bool:
    """Trial-division primality test (sufficient for p <= 2^16)."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _poly_eval_mod(coeffs, x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _poly_divides(divisor, poly, p: int) -> bool:
    """Whether a monic divisor divides poly over F_p (long division)."""
    rem = list(poly)
    dd = len(divisor) - 1
    while len(rem) - 1 >= dd:
        lead = rem[-1] % p
        if lead == 0:
            rem.pop()
            continue
        shift = len(rem) - 1 - dd
        for i, c in enumerate(divisor):
            rem[shift + i] = (rem[shift + i] - lead * c) % p
        rem.pop()
    return all(c % p == 0 for c in rem)


def _is_irreducible(modulus, p: int, r: int) -> bool:
    """Exhaustive check: no monic divisor of degree <= r // 2."""
    if r == 1:
        return True
    # degree-1 divisors <=> roots in F_p
    if any(_poly_eval_mod(modulus, x, p) == 0 for x in range(p)):
        return False
    if r >= 4:
        # degree-2 divisors; reducible quadratics are already excluded
        # by the root check, so scanning all monic quadratics is safe.
        for b in range(p):
            for c in range(p):
                if _poly_divides((c, b, 1), modulus, p):
                    return False
    return True


class FieldCtx:
    """The field GF(p^r) with a fixed irreducible modulus polynomial.

    Parameters
    ----------
    p : prime characteristic (checked by trial division).
    r : extension degree, 1 <= r <= 4.
    modulus : monic degree-r coefficient list over F_p, constant term
        first.  Defaults to t for r = 1 and to a built-in table entry for
        the common small extensions; other fields require an explicit
        modulus.
    """

    def __init__(self, p: int, r: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if not 1 <= r <= MAX_R:
            raise ValueError(f"extension degree {r} outside supported range [1, {MAX_R}]")
        q = p ** r
        if q > MAX_Q:
            raise ValueError(f"field size {q} exceeds supported maximum {MAX_Q}")

        if modulus is None:
            if r == 1:
                modulus = (0, 1)
            else:
                try:
                    modulus = BUILTIN_MODULI[(p, r)]
                except KeyError:
                    raise ValueError(
                        f"no built-in modulus for GF({p}^{r}); supply one explicitly"
                    ) from None
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != r + 1:
            raise ValueError(f"modulus must have degree {r} (length {r + 1})")
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if any(not 0 <= c < p for c in modulus):
            raise ValueError(f"modulus coefficients must lie in [0, {p})")
        if not _is_irreducible(modulus, p, r):
            raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")

        self.p = p
        self.r = r
        self.q = q
        self.modulus = modulus
        # reduction rows: digits of t^k mod modulus for k = r .. 2r-2
        rows = []
        if r > 1:
            cur = [(-m) % p for m in modulus[:r]]
            rows.append(tuple(cur))
            for _ in range(r - 2):
                top = cur[r - 1]
                nxt = [0] + cur[: r - 1]
                if top:
                    nxt = [(nxt[j] + top * rows[0][j]) % p for j in range(r)]
                rows.append(tuple(nxt))
                cur = nxt
        self._reduction_rows = tuple(rows)
        self._prime_field = r == 1
        # lazily built lookup tables
        self._trace_table = None
        self._add_table = None
        self._mul_table = None
        self._neg_table = None
        self._omega_powers = None

    # ------------------------------------------------------------------
    # encoding
    # ------------------------------------------------------------------

    def digits(self, a: int) -> tuple[int, ...]:
        """Base-p digits of an element, constant coefficient first."""
        out = []
        for _ in range(self.r):
            a, d = divmod(a, self.p)
            out.append(d)
        return tuple(out)

    def from_digits(self, ds) -> int:
        acc = 0
        for d in reversed(tuple(ds)):
            acc = acc * self.p + d % self.p
        return acc

    def check(self, a: int) -> int:
        """Validate an element encoding, returning it unchanged."""
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self!r}")
        return a

    def elements(self) -> range:
        return range(self.q)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._prime_field:
            return (a + b) % self.p
        return self.from_digits(
            (x + y) % self.p for x, y in zip(self.digits(a), self.digits(b))
        )

    def neg(self, a: int) -> int:
        if self._prime_field:
            return (-a) % self.p
        return self.from_digits((-x) % self.p for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p, r = self.p, self.r
        if self._prime_field:
            return (a * b) % p
        da, db = self.digits(a), self.digits(b)
        conv = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] += x * y
        res = [c % p for c in conv[:r]]
        for k in range(r, 2 * r - 1):
            c = conv[k] % p
            if c:
                row = self._reduction_rows[k - r]
                for j in range(r):
                    res[j] = (res[j] + c * row[j]) % p
        return self.from_digits(res)

    def pow(self, a: int, k: int) -> int:
        """a^k for a nonnegative integer exponent (a^0 = 1, even for a = 0)."""
        if k < 0:
            raise ValueError("exponent must be nonnegative")
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self.pow(a, self.q - 2)

    def trace(self, x: int) -> int:
        """Tr(x) = x + x^p + ... + x^(p^(r-1)), as an integer in [0, p).

        The trace always lands in the prime subfield, which under the
        integer encoding is exactly the values 0 .. p-1.
        """
        acc, y = x, x
        for _ in range(self.r - 1):
            y = self.pow(y, self.p)
            acc = self.add(acc, y)
        assert acc < self.p, "trace left the prime subfield"
        return acc

    # ------------------------------------------------------------------
    # lookup tables (lazy; used by the vectorized simulation paths)
    # ------------------------------------------------------------------

    def _require_tables(self):
        if self.q > _TABLE_LIMIT:
            from .errors import MemoryLimitExceeded

            raise MemoryLimitExceeded(
                f"dense lookup tables unsupported for q = {self.q} > {_TABLE_LIMIT}"
            )

    @property
    def add_table(self) -> np.ndarray:
        if self._add_table is None:
            self._require_tables()
            q = self.q
            t = np.empty((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    t[a, b] = t[b, a] = self.add(a, b)
            t.flags.writeable = False
            self._add_table = t
        return self._add_table

    @property
    def mul_table(self) -> np.ndarray:
        if self._mul_table is None:
            self._require_tables()
            q = self.q
            t = np.empty((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    t[a, b] = t[b, a] = self.mul(a, b)
            t.flags.writeable = False
            self._mul_table = t
        return self._mul_table

    @property
    def neg_table(self) -> np.ndarray:
        if self._neg_table is None:
            t = np.array([self.neg(a) for a in range(self.q)], dtype=np.int64)
            t.flags.writeable = False
            self._neg_table = t
        return self._neg_table

    @property
    def trace_table(self) -> np.ndarray:
        if self._trace_table is None:
            t = np.array([self.trace(a) for a in range(self.q)], dtype=np.int64)
            t.flags.writeable = False
            self._trace_table = t
        return self._trace_table

    @property
    def omega_powers(self) -> np.ndarray:
        """The p complex roots e^(2*pi*i*k/p), each computed from its exact
        angle rather than by repeated multiplication."""
        if self._omega_powers is None:
            k = np.arange(self.p)
            t = np.exp(2j * np.pi * k / self.p)
            t.flags.writeable = False
            self._omega_powers = t
        return self._omega_powers

    # ------------------------------------------------------------------

    def spec_string(self) -> str:
        """Canonical `p^r:modulus` form (bare p for prime fields)."""
        if self.r == 1:
            return str(self.p)
        return f"{self.p}^{self.r}:" + ",".join(str(c) for c in self.modulus)

    def __eq__(self, other):
        if not isinstance(other, FieldCtx):
            return NotImplemented
        return (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus)

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))

    def __repr__(self):
        if self.r == 1:
            return f"GF({self.p})"
        terms = []
        for i, c in enumerate(self.modulus):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                t = "t" if i == 1 else f"t^{i}"
                terms.append(t if c == 1 else f"{c}{t}")
        return f"GF({self.q})[{' + '.join(reversed(terms))}]"


def parse_field_spec(spec: str) -> FieldCtx:
    """Parse a field specification string.

    Accepted forms:
      * ``p^r:c0,c1,...,cr`` -- explicit modulus, constant term first;
      * ``p^r``              -- prime field (r = 1) or built-in modulus;
      * ``q``                -- bare size; q must be prime, or a prime
                                power with a built-in modulus.
    """
    s = spec.strip()
    if not s:
        raise ValueError("empty field specification")
    modulus = None
    if ":" in s:
        head, mod_s = s.split(":", 1)
        try:
            modulus = [int(c) for c in mod_s.split(",")]
        except ValueError:
            raise ValueError(f"bad modulus coefficient list in {spec!r}") from None
    else:
        head = s
    if "^" in head:
        try:
            p_s, r_s = head.split("^")
            p, r = int(p_s), int(r_s)
        except ValueError:
            raise ValueError(f"bad field specification {spec!r}") from None
        return FieldCtx(p, r, modulus)
    try:
        q = int(head)
    except ValueError:
        raise ValueError(f"bad field specification {spec!r}") from None
    if modulus is not None:
        # bare-q with modulus only makes sense for a prime field
        return FieldCtx(q, 1, modulus)
    if is_prime(q):
        return FieldCtx(q, 1)
    # prime power? find p and r
    if q >= 2:
        p = min(f for f in range(2, q + 1) if q % f == 0)
        r = round(math.log(q, p))
        if p ** r == q and r <= MAX_R:
            return FieldCtx(p, r)  # raises if no built-in modulus
    raise ValueError(f"{q} is not a supported field size")
