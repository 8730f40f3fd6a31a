"""Independent brute-force checks of the algebra the learners rely on.

Each verifier recomputes a claimed identity from first principles and
reports counterexamples (expected: none).  The derivative check builds
the alternating sum directly from pointwise evaluation, never touching
the symbolic derivative code paths, so the two implementations vouch for
each other; the kickback check runs the full ancilla-register simulation
against the phase-oracle shortcut.

Reports are plain JSON-ready dicts: configuration, trial count, checked
count, counterexample list, wall time.
"""

from __future__ import annotations

import itertools
import time

import numpy as np

from .errors import BudgetExceeded, MemoryLimitExceeded
from .field import FieldCtx
from .oracle import HiddenOracle, _shifted_indices
from .poly import (
    MultilinearPoly,
    all_points,
    coefficient_count,
    derive_seed,
    point_matrix,
    random_poly,
    subset_members,
    subsets_of_size,
    subsets_up_to,
    zero_point,
)
from .statevector import StateVector, build_qft, check_memory

DEFAULT_POINT_BUDGET = 10 ** 5
DEFAULT_ENUM_BUDGET = 10 ** 6
_MAX_REPORTED = 10


def verify_derivative_form(ctx: FieldCtx, n: int, d: int, trials: int = 100,
                           seed: int = 0,
                           budget: int = DEFAULT_POINT_BUDGET) -> dict:
    """Check the affine closed form of (d-1)-fold iterated derivatives.

    For random degree-d polynomials, every subset S with |S| = d-1 and
    every point x, the alternating sum over the corners of the S-cube
    must equal alpha_S + sum_{k not in S} alpha_{S+{k}} x_k.  The left
    side is assembled from a table of pointwise evaluations; the right
    side directly from the coefficient map.
    """
    if d < 1:
        raise ValueError("the derivative closed form needs d >= 1")
    qn = ctx.q ** n
    if qn > budget:
        raise BudgetExceeded(f"q^n = {qn} exceeds the point budget {budget}")
    start = time.perf_counter()
    points = all_points(ctx, n)
    pm = point_matrix(ctx, n)
    addt, mult, negt = ctx.add_table, ctx.mul_table, ctx.neg_table
    counterexamples = []
    checked = 0
    for t in range(trials):
        f = random_poly(ctx, n, d, derive_seed(seed, t))
        table = np.array([f.evaluate(x) for x in points], dtype=np.int64)
        for s_mask in subsets_of_size(n, d - 1):
            members = subset_members(s_mask)
            k = len(members)
            lhs = np.zeros(qn, dtype=np.int64)
            for bits in range(1 << k):
                shift = [0] * n
                for j, m in enumerate(members):
                    if bits >> j & 1:
                        shift[m - 1] = 1
                vals = table[_shifted_indices(ctx, n, shift)]
                if (k - bits.bit_count()) & 1:
                    vals = negt[vals]
                lhs = addt[lhs, vals]
            rhs = np.full(qn, f.coeff(s_mask), dtype=np.int64)
            for kk in range(1, n + 1):
                bit = 1 << (kk - 1)
                if s_mask & bit:
                    continue
                alpha = f.coeff(s_mask | bit)
                if alpha:
                    rhs = addt[rhs, mult[alpha][pm[:, kk - 1]]]
            checked += qn
            bad = np.nonzero(lhs != rhs)[0]
            for idx in bad[:_MAX_REPORTED]:
                counterexamples.append({
                    "trial": t,
                    "S": list(members),
                    "x": list(points[int(idx)]),
                    "alternating_sum": int(lhs[idx]),
                    "closed_form": int(rhs[idx]),
                })
    return {
        "check": "derivative-affine-form",
        "config": {"field": ctx.spec_string(), "n": n, "d": d, "seed": seed},
        "trials": trials,
        "checked": checked,
        "counterexamples": counterexamples,
        "wall_time": time.perf_counter() - start,
    }


def verify_kickback(ctx: FieldCtx, n_max: int, trials: int = 20, seed: int = 0,
                    tol: float = 1e-12, mem_cap: int | None = None) -> dict:
    """Check the phase-kickback identity on the full ancilla simulation.

    For random polynomials, random data states and every constant c, the
    standard oracle applied to (data (x) Q^-1|c>) must equal the phase
    oracle on the data tensored with the untouched ancilla.
    """
    start = time.perf_counter()
    q_inv = build_qft(ctx).inverse
    counterexamples = []
    checked = 0
    worst = 0.0
    for n in range(1, n_max + 1):
        try:
            check_memory(ctx, n + 1, mem_cap)
        except MemoryLimitExceeded as exc:
            raise BudgetExceeded(str(exc)) from None
        qn = ctx.q ** n
        for t in range(trials):
            trial_seed = derive_seed(seed, n * 100003 + t)
            f = random_poly(ctx, n, n, trial_seed)
            rng = np.random.default_rng(trial_seed)
            raw = rng.standard_normal(qn) + 1j * rng.standard_normal(qn)
            data = StateVector(ctx, n, raw / np.linalg.norm(raw))
            for c in ctx.elements():
                ancilla = StateVector(ctx, 1, q_inv[:, c])
                oracle = HiddenOracle(f)
                full = oracle.apply_standard_oracle(data.tensor(ancilla))
                shortcut = oracle.apply_phase_oracle(
                    data, c, zero_point(n)
                ).tensor(ancilla)
                dev = float(np.max(np.abs(full.amplitudes - shortcut.amplitudes)))
                worst = max(worst, dev)
                checked += 1
                if dev > tol:
                    counterexamples.append({
                        "n": n, "trial": t, "c": c, "max_deviation": dev,
                    })
    return {
        "check": "phase-kickback",
        "config": {"field": ctx.spec_string(), "n_max": n_max, "seed": seed,
                   "tolerance": tol},
        "trials": trials,
        "checked": checked,
        "max_deviation": worst,
        "counterexamples": counterexamples,
        "wall_time": time.perf_counter() - start,
    }


def verify_counting(ctx: FieldCtx, n: int, d: int,
                    exhaustive_limit: int = DEFAULT_ENUM_BUDGET,
                    mode: str = "auto") -> dict:
    """Count distinct degree-d multilinear polynomials on GF(q)^n.

    The count is q^(number of subset coefficients).  In exhaustive mode
    every coefficient map is enumerated and its full evaluation table
    recorded; the tables must be pairwise distinct and as many as the
    formula says.  Beyond ``exhaustive_limit`` only the formula is
    reported (or :class:`BudgetExceeded` is raised if exhaustive mode was
    forced).
    """
    if mode not in ("auto", "exhaustive", "formula"):
        raise ValueError(f"unknown mode {mode!r}")
    start = time.perf_counter()
    q = ctx.q
    m = coefficient_count(n, d)
    expected = q ** m
    do_exhaustive = mode == "exhaustive" or (mode == "auto" and expected <= exhaustive_limit)
    if mode == "exhaustive" and expected > exhaustive_limit:
        raise BudgetExceeded(
            f"{expected} polynomials exceed the enumeration budget {exhaustive_limit}"
        )
    report = {
        "check": "distinct-polynomial-count",
        "config": {"field": ctx.spec_string(), "n": n, "d": d},
        "mode": "exhaustive" if do_exhaustive else "formula",
        "expected_count": expected,
        "counterexamples": [],
    }
    if do_exhaustive:
        masks = list(subsets_up_to(n, d))
        points = all_points(ctx, n)
        tables = set()
        total = 0
        for assignment in itertools.product(range(q), repeat=m):
            coeffs = {mask: val for mask, val in zip(masks, assignment) if val}
            f = MultilinearPoly(ctx, n, d, coeffs)
            tables.add(tuple(f.evaluate(x) for x in points))
            total += 1
        report["enumerated"] = total
        report["distinct_tables"] = len(tables)
        if total != expected or len(tables) != expected:
            report["counterexamples"].append({
                "enumerated": total,
                "distinct_tables": len(tables),
                "expected": expected,
            })
    report["wall_time"] = time.perf_counter() - start
    return report
