"""Dense complex state-vector simulation of registers over GF(q).

A state over n registers is a length-q^n complex amplitude vector whose
index is the mixed-radix-q encoding of (x_1, ..., x_n) with register 1
as the most significant digit.  The discrete Fourier transform over
GF(q) has entries omega^Tr(x*y) / sqrt(q) with omega = e^(2*pi*i/p).
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .errors import ContextMismatch, DimensionMismatch, MemoryLimitExceeded
from .field import FieldCtx
from .poly import index_to_point, point_to_index

# ~256 MiB of amplitudes at 16 bytes each; override per call when needed.
DEFAULT_AMPLITUDE_CAP = 1 << 24

_NORM_ATOL = 1e-8


def check_memory(ctx: FieldCtx, n_registers: int, mem_cap: int | None = None) -> int:
    """Number of amplitudes for an n-register state, or raise if over cap."""
    cap = DEFAULT_AMPLITUDE_CAP if mem_cap is None else mem_cap
    size = ctx.q ** n_registers
    if size > cap:
        raise MemoryLimitExceeded(
            f"state needs {size} amplitudes, above the cap of {cap}"
        )
    return size


class StateVector:
    """Normalized amplitudes for n registers over a fixed field."""

    def __init__(self, ctx: FieldCtx, n_registers: int, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128)
        expected = ctx.q ** n_registers
        if amps.shape != (expected,):
            raise DimensionMismatch(
                f"amplitude vector has shape {amps.shape}, expected ({expected},)"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > _NORM_ATOL:
            raise ValueError(f"state vector is not normalized (norm {nrm!r})")
        self.ctx = ctx
        self.n_registers = n_registers
        self.amplitudes = amps

    @classmethod
    def basis_state(cls, ctx: FieldCtx, n_registers: int, point,
                    mem_cap: int | None = None) -> "StateVector":
        """|x> for a point given as a tuple or a raw index."""
        size = check_memory(ctx, n_registers, mem_cap)
        idx = point if isinstance(point, int) else point_to_index(ctx, point)
        if not 0 <= idx < size:
            raise DimensionMismatch(f"basis index {idx} outside [0, {size})")
        amps = np.zeros(size, dtype=np.complex128)
        amps[idx] = 1.0
        return cls(ctx, n_registers, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self, other: "StateVector") -> "StateVector":
        """Kronecker product; ``other``'s registers become least significant."""
        if self.ctx != other.ctx:
            raise ContextMismatch("cannot tensor states over different fields")
        return StateVector(
            self.ctx,
            self.n_registers + other.n_registers,
            np.kron(self.amplitudes, other.amplitudes),
        )

    def dump_csv(self, dest) -> None:
        """Debug dump: rows of ``index, x-tuple, re, im``."""
        close = False
        if isinstance(dest, (str, bytes)):
            dest = open(dest, "w", newline="")
            close = True
        try:
            w = csv.writer(dest)
            w.writerow(["index", "x", "re", "im"])
            for i, a in enumerate(self.amplitudes):
                x = index_to_point(self.ctx, self.n_registers, i)
                w.writerow([i, " ".join(map(str, x)),
                            repr(float(a.real)), repr(float(a.imag))])
        finally:
            if close:
                dest.close()


class QftMatrix:
    """The q x q Fourier matrix over GF(q): entry (y, x) = omega^Tr(x*y)/sqrt(q)."""

    def __init__(self, ctx: FieldCtx, entries: np.ndarray):
        self.ctx = ctx
        self.entries = entries

    @property
    def inverse(self) -> np.ndarray:
        """Conjugate transpose (the matrix is unitary)."""
        return self.entries.conj().T


def build_qft(ctx: FieldCtx) -> QftMatrix:
    exps = ctx.trace_table[ctx.mul_table]
    entries = ctx.omega_powers[exps] / math.sqrt(ctx.q)
    return QftMatrix(ctx, entries)


def apply_single(psi: StateVector, matrix, register: int) -> StateVector:
    """Apply a unitary q x q matrix to one register (1-based)."""
    if isinstance(matrix, QftMatrix):
        matrix = matrix.entries
    n, q = psi.n_registers, psi.ctx.q
    if not 1 <= register <= n:
        raise ValueError(f"register {register} out of range [1, {n}]")
    arr = psi.amplitudes.reshape((q,) * n)
    out = np.tensordot(matrix, arr, axes=([1], [register - 1]))
    out = np.moveaxis(out, 0, register - 1)
    return StateVector(psi.ctx, n, np.ascontiguousarray(out).reshape(-1))


def prepare_uniform(ctx: FieldCtx, n_registers: int,
                    mem_cap: int | None = None) -> StateVector:
    """The uniform superposition: every amplitude q^(-n/2)."""
    size = check_memory(ctx, n_registers, mem_cap)
    amps = np.full(size, size ** -0.5, dtype=np.complex128)
    return StateVector(ctx, n_registers, amps)


def measure_computational(psi: StateVector) -> tuple[tuple[int, ...], float]:
    """Most likely computational-basis outcome and its probability.

    Ties break toward the lowest index.  Exact algorithms in this package
    only measure states where the top outcome has probability ~1; use
    :func:`sample_computational` for genuine sampling.
    """
    probs = psi.probabilities()
    idx = int(np.argmax(probs))
    return index_to_point(psi.ctx, psi.n_registers, idx), float(probs[idx])


def sample_computational(psi: StateVector, seed: int) -> tuple[tuple[int, ...], float]:
    """Sample a basis outcome from the Born distribution (seeded)."""
    probs = psi.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    idx = int(rng.choice(len(probs), p=probs))
    return index_to_point(psi.ctx, psi.n_registers, idx), float(probs[idx])
