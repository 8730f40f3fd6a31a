"""Counted oracle access to a hidden multilinear polynomial.

Every route to the hidden polynomial goes through one of the oracles
here, and every route increments the shared :class:`QueryLedger`:

* one classical evaluation costs 1;
* one standard-oracle application |x>|y> -> |x>|y + f(x)> costs 1;
* one phase-oracle application |x> -> omega^Tr(c*f(x + shift)) |x>
  costs 1 (the kickback ancilla and the classical pre-shift are free);
* one derived-oracle application for the iterated derivative along S
  costs exactly 2^|S|, one unit per composed phase call.

:meth:`HiddenOracle.reduced` wraps an oracle as f minus a known
polynomial at no extra query cost: the correction is a classically
computed diagonal phase (or value shift), never a ledger increment.
"""

from __future__ import annotations

import functools
import threading

import numpy as np

from .errors import ContextMismatch, DimensionMismatch
from .field import FieldCtx
from .poly import MultilinearPoly, index_strides, subset_members
from .statevector import StateVector


class QueryLedger:
    """Monotone counter of unit-cost oracle invocations (thread-safe)."""

    def __init__(self, start: int = 0):
        self._count = start
        self._lock = threading.Lock()

    def add(self, k: int = 1) -> None:
        with self._lock:
            self._count += k

    @property
    def count(self) -> int:
        return self._count

    def __repr__(self):
        return f"QueryLedger(count={self._count})"


@functools.lru_cache(maxsize=None)
def _arange(size: int) -> np.ndarray:
    idx = np.arange(size, dtype=np.int64)
    idx.flags.writeable = False
    return idx


def _shifted_indices(ctx: FieldCtx, n: int, shift) -> np.ndarray:
    """Index array mapping each point x to the index of x + shift."""
    q = ctx.q
    base = _arange(q ** n)
    strides = index_strides(q, n)
    out = base
    addt = ctx.add_table
    for j, s in enumerate(shift):
        if s:
            digit = (base // strides[j]) % q
            out = out + (addt[digit, s] - digit) * strides[j]
    return out


def _diagonal_phase(psi: StateVector, table: np.ndarray, c: int, shift) -> StateVector:
    """Multiply amplitude of |x> by omega^Tr(c * table[x + shift]); free."""
    ctx = psi.ctx
    if c == 0:
        return StateVector(ctx, psi.n_registers, psi.amplitudes.copy())
    vals = table[_shifted_indices(ctx, psi.n_registers, shift)]
    exps = ctx.trace_table[ctx.mul_table[c][vals]]
    return StateVector(ctx, psi.n_registers, psi.amplitudes * ctx.omega_powers[exps])


def _value_shift(psi: StateVector, table: np.ndarray) -> StateVector:
    """Move amplitude at (x, y) to (x, y + table[x]); free permutation."""
    ctx = psi.ctx
    q = ctx.q
    arr = psi.amplitudes.reshape(-1, q)
    rows = _arange(arr.shape[0])
    cols = ctx.add_table[table[:, None], _arange(q)[None, :]]
    out = np.empty_like(arr)
    out[rows[:, None], cols] = arr
    return StateVector(ctx, psi.n_registers, out.reshape(-1))


class _OracleBase:
    """Shared interface: validation plus the derived-derivative oracle."""

    ctx: FieldCtx
    n: int
    ledger: QueryLedger

    def _check_point(self, x):
        if len(x) != self.n:
            raise DimensionMismatch(f"point has length {len(x)}, expected {self.n}")
        for c in x:
            self.ctx.check(c)

    def _check_state(self, psi: StateVector, registers: int):
        if psi.ctx != self.ctx:
            raise ContextMismatch("state vector is over a different field")
        if psi.n_registers != registers:
            raise DimensionMismatch(
                f"state has {psi.n_registers} registers, expected {registers}"
            )

    def apply_fS_phase_oracle(self, psi: StateVector, subset: int, c: int) -> StateVector:
        """Phase oracle for the iterated derivative along ``subset``.

        Composes one signed, shifted phase call per corner of the |S|-cube,
        so the ledger advances by exactly 2^|S|.
        """
        if subset >> self.n:
            raise ValueError(f"subset {bin(subset)} not within [1, {self.n}]")
        members = subset_members(subset)
        k = len(members)
        ctx = self.ctx
        neg_c = ctx.neg(c)
        out = psi
        for bits in range(1 << k):
            shift = [0] * self.n
            for j, m in enumerate(members):
                if bits >> j & 1:
                    shift[m - 1] = 1
            cc = neg_c if (k - bits.bit_count()) & 1 else c
            out = self.apply_phase_oracle(out, cc, tuple(shift))
        return out

    def fs_view(self, subset: int) -> "FsPhaseOracle":
        return FsPhaseOracle(self, subset)


class HiddenOracle(_OracleBase):
    """Oracle access to a secret polynomial, with query accounting.

    Learners must never touch the secret directly; they see only the
    query operations and the ledger.
    """

    def __init__(self, secret: MultilinearPoly, ledger: QueryLedger | None = None):
        self._secret = secret
        self.ledger = ledger if ledger is not None else QueryLedger()
        self._table: np.ndarray | None = None

    @property
    def ctx(self) -> FieldCtx:
        return self._secret.ctx

    @property
    def n(self) -> int:
        return self._secret.n

    def _value_table(self) -> np.ndarray:
        # private cache; building it is not a query
        if self._table is None:
            self._table = self._secret.value_table()
        return self._table

    def classical_query(self, x) -> int:
        """f(x); ledger += 1."""
        self._check_point(x)
        self.ledger.add(1)
        return self._secret.evaluate(x)

    def apply_standard_oracle(self, psi: StateVector) -> StateVector:
        """|x>|y> -> |x>|y + f(x)> on an (n+1)-register state; ledger += 1."""
        self._check_state(psi, self.n + 1)
        self.ledger.add(1)
        return _value_shift(psi, self._value_table())

    def apply_phase_oracle(self, psi: StateVector, c: int, shift) -> StateVector:
        """|x> -> omega^Tr(c * f(x + shift)) |x>; ledger += 1.

        The constant c is realized by preparing the kickback ancilla in the
        inverse-Fourier basis state for c, and the shift by classically
        relabeling the input register; neither costs a query.
        """
        self._check_state(psi, self.n)
        self.ctx.check(c)
        self._check_point(shift)
        self.ledger.add(1)
        return _diagonal_phase(psi, self._value_table(), c, shift)

    def reduced(self, known: MultilinearPoly) -> "ReducedOracle":
        """A view behaving as f - known at no extra query cost."""
        return ReducedOracle(self, known)


class ReducedOracle(_OracleBase):
    """View of a parent oracle with a known polynomial subtracted.

    Shares the parent's ledger; each query costs exactly what the
    underlying query costs, the subtraction being a classical correction.
    """

    def __init__(self, parent: HiddenOracle, known: MultilinearPoly):
        if known.ctx != parent.ctx or known.n != parent.n:
            raise ContextMismatch("known polynomial is over a different domain")
        self._parent = parent
        self._known = known
        self._known_tbl: np.ndarray | None = None

    @property
    def ctx(self) -> FieldCtx:
        return self._parent.ctx

    @property
    def n(self) -> int:
        return self._parent.n

    @property
    def ledger(self) -> QueryLedger:
        return self._parent.ledger

    def _known_table(self) -> np.ndarray:
        if self._known_tbl is None:
            self._known_tbl = self._known.value_table()
        return self._known_tbl

    def classical_query(self, x) -> int:
        v = self._parent.classical_query(x)
        return self.ctx.sub(v, self._known.evaluate(x))

    def apply_standard_oracle(self, psi: StateVector) -> StateVector:
        out = self._parent.apply_standard_oracle(psi)
        return _value_shift(out, self.ctx.neg_table[self._known_table()])

    def apply_phase_oracle(self, psi: StateVector, c: int, shift) -> StateVector:
        out = self._parent.apply_phase_oracle(psi, c, shift)
        return _diagonal_phase(out, self._known_table(), self.ctx.neg(c), shift)

    def reduced(self, more: MultilinearPoly) -> "ReducedOracle":
        # stacking reductions collapses into one: (f - g) - h = f - (g + h)
        return ReducedOracle(self._parent, self._known + more)


class FsPhaseOracle:
    """Adapter presenting the derivative oracle along a fixed subset as a
    plain phase oracle, so linear learners can query it unchanged."""

    def __init__(self, base: _OracleBase, subset: int):
        self._base = base
        self.subset = subset

    @property
    def ctx(self) -> FieldCtx:
        return self._base.ctx

    @property
    def n(self) -> int:
        return self._base.n

    @property
    def ledger(self) -> QueryLedger:
        return self._base.ledger

    def apply_phase_oracle(self, psi: StateVector, c: int, shift) -> StateVector:
        if any(shift):
            raise ValueError("derivative phase oracle supports zero shift only")
        return self._base.apply_fS_phase_oracle(psi, self.subset, c)
