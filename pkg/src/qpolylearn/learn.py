"""Learning algorithms for hidden multilinear polynomials.

Three learners share the counted-oracle interface:

* :func:`classical_learn` queries the 0/1 points of Hamming weight <= d
  and solves for the coefficients weight by weight.  It always uses
  exactly sum_{i=0}^{d} C(n, i) queries.

* :func:`quantum_learn_linear` identifies the linear part of an affine
  function g(x) = a.x + beta with a single phase-oracle application:
  uniform superposition, one phase query, inverse Fourier transform on
  every register, then a measurement that is deterministic whenever the
  promise holds.  beta only ever appears as a global phase.

* :func:`quantum_learn` learns a degree-d polynomial exactly with
  1 + sum_{i=1}^{d} 2^(i-1) C(n, i-1) queries.  For each subset S of
  size d-1, the iterated derivative of f along S is affine with slope
  alpha_{S + {k}} in direction k, so one derived-oracle query (cost
  2^(d-1)) recovers every degree-d coefficient extending S.  Crossing
  out the learned top part reduces the degree by one, and induction plus
  a final classical query for the constant term finishes the job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InconsistentCoefficients, PromiseViolated
from .oracle import FsPhaseOracle, HiddenOracle, ReducedOracle
from .poly import (
    MultilinearPoly,
    subset_members,
    subsets_of_size,
    zero_point,
)
from .statevector import apply_single, build_qft, measure_computational, prepare_uniform

# final-measurement certainty threshold; below it the affine promise is broken
MEASUREMENT_CERTAINTY = 1.0 - 1e-9


@dataclass
class LearnReport:
    """Outcome of one learning run.

    ``per_degree_queries`` lists the queries spent on each degree level,
    from degree d down to the constant term; it sums to ``queries_used``,
    which is the ledger delta over the run.
    """

    learned: MultilinearPoly
    queries_used: int
    per_degree_queries: list[int] = field(default_factory=list)


def classical_query_count(n: int, d: int) -> int:
    """Closed form for the classical learner: sum_{i<=d} C(n, i)."""
    return sum(math.comb(n, i) for i in range(d + 1))


def quantum_query_count(n: int, d: int) -> int:
    """Closed form for the quantum learner: 1 + sum 2^(i-1) C(n, i-1)."""
    return 1 + sum(2 ** (i - 1) * math.comb(n, i - 1) for i in range(1, d + 1))


def classical_learn(oracle: HiddenOracle, n: int, d: int) -> LearnReport:
    """Learn the hidden polynomial from 0/1-point queries, exactly.

    Weight-k queries determine the degree-k coefficients once everything
    below is known: at the indicator point of S every monomial T
    contributes alpha_T iff T is a subset of S, so alpha_S is the queried
    value minus the already-learned proper-subset contributions.
    """
    ctx = oracle.ctx
    before = oracle.ledger.count
    coeffs: dict[int, int] = {}
    per_degree = [0] * (d + 1)
    for k in range(d + 1):
        for mask in subsets_of_size(n, k):
            x = tuple(1 if mask >> j & 1 else 0 for j in range(n))
            acc = oracle.classical_query(x)
            per_degree[d - k] += 1
            sub = (mask - 1) & mask
            while True:
                acc = ctx.sub(acc, coeffs.get(sub, 0))
                if sub == 0:
                    break
                sub = (sub - 1) & mask
            if acc:
                coeffs[mask] = acc
    learned = MultilinearPoly(ctx, n, d, coeffs)
    return LearnReport(learned, oracle.ledger.count - before, per_degree)


def quantum_learn_linear(oracle, n: int,
                         mem_cap: int | None = None) -> tuple[tuple[int, ...], int]:
    """Recover the slope vector of an affine oracle with one phase query.

    ``oracle`` may be any counted oracle exposing ``apply_phase_oracle``;
    it is promised to hide g(x) = a.x + beta.  Returns (a, ledger delta).
    The constant beta is unobservable (global phase) and is not returned.

    Raises :class:`PromiseViolated` if the final measurement is not
    deterministic, which is how a non-affine oracle manifests.
    """
    ctx = oracle.ctx
    before = oracle.ledger.count
    psi = prepare_uniform(ctx, n, mem_cap)
    psi = oracle.apply_phase_oracle(psi, 1, zero_point(n))
    q_inv = build_qft(ctx).inverse
    for register in range(1, n + 1):
        psi = apply_single(psi, q_inv, register)
    outcome, prob = measure_computational(psi)
    if prob < MEASUREMENT_CERTAINTY:
        raise PromiseViolated(
            f"final measurement probability {prob} < {MEASUREMENT_CERTAINTY}; "
            "the oracle is not affine"
        )
    return outcome, oracle.ledger.count - before


def learn_top_degree(oracle, n: int, d: int,
                     mem_cap: int | None = None) -> tuple[MultilinearPoly, int]:
    """Learn the degree-d part of an oracle of degree <= d (d >= 1).

    Runs the one-query linear learner against the derivative oracle for
    every subset S of size d-1, in canonical order.  Each degree-d
    coefficient is determined d times (once per (d-1)-subset of its
    variables); all determinations must agree, and slots inside S must
    read zero.
    """
    if d < 1:
        raise ValueError("top-degree learning needs d >= 1")
    ctx = oracle.ctx
    before = oracle.ledger.count
    determinations: dict[int, list[int]] = {}
    for s_mask in subsets_of_size(n, d - 1):
        a, _ = quantum_learn_linear(FsPhaseOracle(oracle, s_mask), n, mem_cap)
        for k in range(1, n + 1):
            bit = 1 << (k - 1)
            if s_mask & bit:
                if a[k - 1] != 0:
                    raise InconsistentCoefficients(
                        f"derivative along {subset_members(s_mask)} has a residual "
                        f"slope in direction {k}; oracle degree exceeds {d}"
                    )
            else:
                determinations.setdefault(s_mask | bit, []).append(a[k - 1])
    coeffs: dict[int, int] = {}
    for t_mask, values in determinations.items():
        if any(v != values[0] for v in values):
            raise InconsistentCoefficients(
                f"coefficient for {subset_members(t_mask)} determined as {values}"
            )
        coeffs[t_mask] = values[0]
    top = MultilinearPoly(ctx, n, d, coeffs)
    return top, oracle.ledger.count - before


def quantum_learn(oracle: HiddenOracle, n: int, d: int,
                  mem_cap: int | None = None) -> LearnReport:
    """Learn a hidden degree-d multilinear polynomial exactly.

    Peels off the top degree level by level: each level k is learned from
    the oracle reduced by everything already known (same query cost as the
    raw oracle), and the constant term comes from one classical query at
    the all-zeros point.
    """
    ctx = oracle.ctx
    before = oracle.ledger.count
    known = MultilinearPoly(ctx, n, 0, {})
    per_degree = []
    for k in range(d, 0, -1):
        view: ReducedOracle | HiddenOracle = (
            oracle.reduced(known) if known.num_terms() else oracle
        )
        top, spent = learn_top_degree(view, n, k, mem_cap)
        known = known + top
        per_degree.append(spent)
    constant = oracle.classical_query(zero_point(n))
    per_degree.append(1)
    learned = known + MultilinearPoly(ctx, n, 0, {0: constant})
    return LearnReport(learned, oracle.ledger.count - before, per_degree)


def lower_bound(q: int, n: int, d: int, r_queries: int) -> tuple[float, int]:
    """Information-theoretic error bound for bounded-error quantum learners.

    Treating each query as a communication round of (n+1)*log2(q) qubits
    in each direction bounds the mutual information after r rounds, and
    the Fano inequality turns that into a lower bound on the probability
    of misidentifying a uniformly random degree-d polynomial:

        P_e >= 1 - (2r(n+1) + 1/log2(q)) / (1 + n + C(n,2) + ... + C(n,d))

    Returns the bound at ``r_queries`` together with the least r making it
    <= 1/3.  This reproduces the displayed formula only; it says nothing
    about tightness.
    """
    if q < 2 or n < 1 or d < 0 or r_queries < 0:
        raise ValueError("parameters must be positive (and r nonnegative)")
    denom = sum(math.comb(n, i) for i in range(d + 1))
    log2q = math.log2(q)
    bound = 1.0 - (2 * r_queries * (n + 1) + 1.0 / log2q) / denom
    threshold = (2.0 * denom / 3.0 - 1.0 / log2q) / (2 * (n + 1))
    min_r = max(0, math.ceil(threshold - 1e-12))
    return bound, min_r
