import csv
import io
import math

import numpy as np
import pytest

from qpolylearn import (
    ContextMismatch,
    DimensionMismatch,
    FieldCtx,
    HiddenOracle,
    MemoryLimitExceeded,
    StateVector,
    apply_single,
    build_qft,
    measure_computational,
    point_to_index,
    prepare_uniform,
    sample_computational,
    zero_point,
)
from qpolylearn.poly import MultilinearPoly, all_points, subset_from_members

from conftest import all_small_fields


def qft_tensor(ctx, n):
    """Dense q^n x q^n matrix for the n-fold Fourier transform."""
    q1 = build_qft(ctx).entries
    out = np.array([[1.0]], dtype=complex)
    for _ in range(n):
        out = np.kron(out, q1)
    return out


# ---------------------------------------------------------------------
# the Fourier matrix
# ---------------------------------------------------------------------

def test_qft_q2_is_hadamard(f2):
    h = build_qft(f2).entries
    want = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert np.max(np.abs(h - want)) < 1e-15


def test_qft_q3_entries(f3):
    m = build_qft(f3).entries
    w = np.exp(2j * np.pi / 3)
    for x in range(3):
        for y in range(3):
            assert abs(m[y, x] - w ** ((x * y) % 3) / math.sqrt(3)) < 1e-12
    assert np.max(np.abs(m[0] - 1 / math.sqrt(3))) < 1e-15
    assert np.max(np.abs(m[:, 0] - 1 / math.sqrt(3))) < 1e-15


def test_qft_q4_entry_from_trace(f4):
    # entry (t, t) = omega^Tr(t^2)/2 = (-1)^Tr(t+1)/2 = -1/2
    m = build_qft(f4).entries
    assert abs(m[2, 2] - (-0.5)) < 1e-15


@pytest.mark.parametrize("ctx", all_small_fields(), ids=lambda c: c.spec_string())
def test_qft_unitary(ctx):
    m = build_qft(ctx).entries
    eye = m.conj().T @ m
    assert np.max(np.abs(eye - np.eye(ctx.q))) < 1e-12


@pytest.mark.parametrize("spec", ["2", "3", "5", "2^2:1,1,1", "3^2:1,0,1"])
def test_qft_roundtrip_on_basis_states(spec):
    from qpolylearn import parse_field_spec

    ctx = parse_field_spec(spec)
    qm = build_qft(ctx)
    for x in ctx.elements():
        psi = StateVector.basis_state(ctx, 1, x)
        out = apply_single(apply_single(psi, qm, 1), qm.inverse, 1)
        want = np.zeros(ctx.q)
        want[x] = 1
        assert np.max(np.abs(out.amplitudes - want)) < 1e-10


@pytest.mark.parametrize("spec", ["2", "3", "5", "2^2:1,1,1"])
def test_tensor_qft_matches_closed_form(spec):
    # register-by-register application equals (1/q^(n/2)) sum omega^Tr(x.y)
    from qpolylearn import parse_field_spec

    ctx = parse_field_spec(spec)
    n = 3 if ctx.q <= 3 else 2
    qm = build_qft(ctx)
    rng = np.random.default_rng(11)
    for x_idx in rng.integers(0, ctx.q ** n, size=4):
        psi = StateVector.basis_state(ctx, n, int(x_idx))
        for reg in range(1, n + 1):
            psi = apply_single(psi, qm, reg)
        x = all_points(ctx, n)[int(x_idx)]
        want = np.empty(ctx.q ** n, dtype=complex)
        for y_idx, y in enumerate(all_points(ctx, n)):
            dot = 0
            for a, b in zip(x, y):
                dot = ctx.add(dot, ctx.mul(a, b))
            want[y_idx] = ctx.omega_powers[ctx.trace(dot)]
        want /= ctx.q ** (n / 2)
        assert np.max(np.abs(psi.amplitudes - want)) < 1e-10


def test_norm_drift_over_thousand_operations(f3):
    rng = np.random.default_rng(0)
    qm = build_qft(f3)
    psi = prepare_uniform(f3, 3)
    for _ in range(1000):
        reg = int(rng.integers(1, 4))
        mat = qm.entries if rng.integers(2) else qm.inverse
        psi = apply_single(psi, mat, reg)
    assert abs(psi.norm() - 1.0) < 1e-9


@pytest.mark.parametrize("spec", ["2", "3", "2^2:1,1,1", "5"])
def test_orthogonality_of_characters(spec):
    # sum over x of omega^Tr((a-y).x) is q^n when y=a and 0 otherwise;
    # the Gram matrix W W^H computes that sum for every pair (a, y) at once
    from qpolylearn import parse_field_spec

    ctx = parse_field_spec(spec)
    for n in (1, 2, 3):
        w = qft_tensor(ctx, n) * ctx.q ** (n / 2)
        gram = w @ w.conj().T
        qn = ctx.q ** n
        assert np.max(np.abs(gram - qn * np.eye(qn))) < 1e-8 * qn


# ---------------------------------------------------------------------
# states
# ---------------------------------------------------------------------

def test_state_validation(f2):
    with pytest.raises(DimensionMismatch):
        StateVector(f2, 2, np.ones(3) / math.sqrt(3))
    with pytest.raises(ValueError, match="normalized"):
        StateVector(f2, 1, np.array([1.0, 1.0]))


def test_basis_state_from_point_and_index(f3):
    a = StateVector.basis_state(f3, 2, (2, 1))
    b = StateVector.basis_state(f3, 2, point_to_index(f3, (2, 1)))
    assert np.array_equal(a.amplitudes, b.amplitudes)
    with pytest.raises(DimensionMismatch):
        StateVector.basis_state(f3, 1, 3)


def test_prepare_uniform(f2, f5):
    psi = prepare_uniform(f2, 1)
    assert np.max(np.abs(psi.amplitudes - 1 / math.sqrt(2))) < 1e-15
    psi = prepare_uniform(f5, 2)
    assert psi.amplitudes.shape == (25,)
    assert np.max(np.abs(psi.amplitudes - 0.2)) < 1e-15
    assert abs(psi.norm() - 1.0) < 1e-12


def test_memory_cap(f2):
    with pytest.raises(MemoryLimitExceeded):
        prepare_uniform(f2, 4, mem_cap=8)
    with pytest.raises(MemoryLimitExceeded):
        StateVector.basis_state(f2, 4, 0, mem_cap=8)


def test_apply_single_validations(f2):
    psi = prepare_uniform(f2, 2)
    with pytest.raises(ValueError):
        apply_single(psi, np.eye(2), 0)
    with pytest.raises(ValueError):
        apply_single(psi, np.eye(2), 3)
    out = apply_single(psi, np.eye(2), 1)
    assert np.max(np.abs(out.amplitudes - psi.amplitudes)) < 1e-15


def test_hadamard_on_zero(f2):
    psi = StateVector.basis_state(f2, 1, 0)
    out = apply_single(psi, build_qft(f2), 1)
    assert np.max(np.abs(out.amplitudes - 1 / math.sqrt(2))) < 1e-12


def test_qft_on_all_zero_gives_uniform(f3):
    psi = StateVector.basis_state(f3, 2, 0)
    qm = build_qft(f3)
    psi = apply_single(apply_single(psi, qm, 1), qm, 2)
    assert np.max(np.abs(psi.amplitudes - 1 / 3)) < 1e-12


def test_tensor_context_mismatch(f2, f3):
    with pytest.raises(ContextMismatch):
        prepare_uniform(f2, 1).tensor(prepare_uniform(f3, 1))


# ---------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------

def test_measure_basis_state(f5):
    psi = StateVector.basis_state(f5, 2, (3, 1))
    outcome, prob = measure_computational(psi)
    assert outcome == (3, 1)
    assert prob == 1.0


def test_measure_uniform_ties_break_low(f2):
    outcome, prob = measure_computational(prepare_uniform(f2, 1))
    assert outcome == (0,)
    assert abs(prob - 0.5) < 1e-12


def test_measure_after_affine_phase_circuit(f2):
    # g(x) = x1 + x2 + 1: phase query then inverse transforms yield (1,1)
    # with certainty; the +1 hides in a global phase
    g = MultilinearPoly(f2, 2, 1, {
        0: 1,
        subset_from_members((1,)): 1,
        subset_from_members((2,)): 1,
    })
    psi = prepare_uniform(f2, 2)
    psi = HiddenOracle(g).apply_phase_oracle(psi, 1, zero_point(2))
    qinv = build_qft(f2).inverse
    psi = apply_single(apply_single(psi, qinv, 1), qinv, 2)
    outcome, prob = measure_computational(psi)
    assert outcome == (1, 1)
    assert prob > 1 - 1e-9


def test_sample_computational_seeded(f3):
    psi = prepare_uniform(f3, 1)
    a = sample_computational(psi, seed=42)
    b = sample_computational(psi, seed=42)
    assert a == b
    assert a[0] in {(0,), (1,), (2,)}
    assert abs(a[1] - 1 / 3) < 1e-12
    exact = sample_computational(StateVector.basis_state(f3, 1, 2), seed=0)
    assert exact == ((2,), 1.0)


# ---------------------------------------------------------------------
# debug dump
# ---------------------------------------------------------------------

def test_dump_csv(f2):
    psi = prepare_uniform(f2, 2)
    buf = io.StringIO()
    psi.dump_csv(buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["index", "x", "re", "im"]
    assert len(rows) == 5
    assert rows[1][0] == "0" and rows[1][1] == "0 0"
    assert abs(float(rows[3][2]) - 0.5) < 1e-12
    assert float(rows[3][3]) == 0.0
