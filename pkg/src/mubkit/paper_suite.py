"""Built-in regression fixtures over the worked low-dimensional examples.

Each fixture pins results for the dimension-2 and dimension-4 transform
pairs and their coarse-grainings against hard-coded matrices and verdicts.
The CLI exposes them as the ``paper-suite`` command; tests carry their own
independent copies of the same constants.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis, linalg
from .effects import State, occurrence_probability, seq_product
from .fourier import example_partitions, fourier_matrix, momentum_observable, position_observable
from .observables import Observable, PartitionMap, conditioned
from .oracle import mc_value_complementarity

TIGHT = 1e-12

F2 = np.array([[1, 1],
               [1, -1]], dtype=complex) / np.sqrt(2.0)

F4 = np.array([[1, 1, 1, 1],
               [1, -1j, -1, 1j],
               [1, -1, 1, -1],
               [1, 1j, -1, -1j]], dtype=complex) / 2.0

Q2 = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]

P2 = [np.array([[1, 1], [1, 1]], dtype=complex) / 2.0,
      np.array([[1, -1], [-1, 1]], dtype=complex) / 2.0]

Q4 = [np.diag([1.0 if i == j else 0.0 for i in range(4)]).astype(complex) for j in range(4)]

P4 = [
    np.full((4, 4), 0.25, dtype=complex),
    np.array([[1, 1j, -1, -1j],
              [-1j, 1, 1j, -1],
              [-1, -1j, 1, 1j],
              [1j, -1, -1j, 1]], dtype=complex) / 4.0,
    np.array([[1, -1, 1, -1],
              [-1, 1, -1, 1],
              [1, -1, 1, -1],
              [-1, 1, -1, 1]], dtype=complex) / 4.0,
    np.array([[1, -1j, -1, 1j],
              [1j, 1, -1j, -1],
              [-1, 1j, 1, -1j],
              [-1j, -1, 1j, 1]], dtype=complex) / 4.0,
]

Q_HALF = [np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex),
          np.diag([0.0, 0.0, 1.0, 1.0]).astype(complex)]

P_PARITY = [np.array([[1, 0, 1, 0],
                      [0, 1, 0, 1],
                      [1, 0, 1, 0],
                      [0, 1, 0, 1]], dtype=complex) / 2.0,
            np.array([[1, 0, -1, 0],
                      [0, 1, 0, -1],
                      [-1, 0, 1, 0],
                      [0, -1, 0, 1]], dtype=complex) / 2.0]

P_HALF = [np.array([[2, 1 + 1j, 0, 1 - 1j],
                    [1 - 1j, 2, 1 + 1j, 0],
                    [0, 1 - 1j, 2, 1 + 1j],
                    [1 + 1j, 0, 1 - 1j, 2]], dtype=complex) / 4.0,
          np.array([[2, -1 - 1j, 0, -1 + 1j],
                    [-1 + 1j, 2, -1 - 1j, 0],
                    [0, -1 + 1j, 2, -1 - 1j],
                    [-1 - 1j, 0, -1 + 1j, 2]], dtype=complex) / 4.0]

MIXED_PRODUCT = np.array([[2, 1 + 1j, 0, 0],
                          [1 - 1j, 2, 0, 0],
                          [0, 0, 0, 0],
                          [0, 0, 0, 0]], dtype=complex) / 4.0

CROSS_WITNESS = np.array([1.0, 1.0, 0.0, 0.0]) / np.sqrt(2.0)


def _close(got, want, tol=TIGHT) -> float:
    dev = linalg.max_abs(np.asarray(got) - np.asarray(want))
    assert dev <= tol, f"deviation {dev:.3e} exceeds {tol:.3e}"
    return dev


def _fx_fourier_dim2(seed):
    dev = _close(fourier_matrix(2), F2)
    return f"transform entries within {dev:.1e}"


def _fx_fourier_dim4(seed):
    dev = _close(fourier_matrix(4), F4)
    return f"transform entries within {dev:.1e}"


def _fx_bases_dim2(seed):
    q, p = position_observable(2), momentum_observable(2)
    worst = max(_close(q.effects[j].matrix, Q2[j]) for j in range(2))
    worst = max(worst, *(_close(p.effects[j].matrix, P2[j]) for j in range(2)))
    return f"all four effects within {worst:.1e}"


def _fx_bases_dim4(seed):
    q, p = position_observable(4), momentum_observable(4)
    worst = max(_close(q.effects[j].matrix, Q4[j]) for j in range(4))
    worst = max(worst, *(_close(p.effects[j].matrix, P4[j]) for j in range(4)))
    return f"all eight effects within {worst:.1e}"


def _fx_trace_pairing(seed):
    q, p = position_observable(2), momentum_observable(2)
    t = linalg.trace(q.effects[0].matrix @ p.effects[0].matrix)
    assert abs(t - 0.5) <= TIGHT, f"tr(Q0 P0) = {t}"
    return "tr(Q0 P0) = 1/2"


def _fx_atomic_products(seed):
    worst = 0.0
    for dim in (2, 4):
        q, p = position_observable(dim), momentum_observable(dim)
        for qe in q.effects:
            for pe in p.effects:
                worst = max(worst, linalg.max_abs(seq_product(qe, pe).matrix - qe.matrix / dim))
                worst = max(worst, linalg.max_abs(seq_product(pe, qe).matrix - pe.matrix / dim))
    assert worst <= TIGHT, f"atomic products deviate by {worst:.3e}"
    return f"Q_j o P_k = Q_j/dim in both orders within {worst:.1e}"


def _fx_occurrence(seed):
    q, p = position_observable(2), momentum_observable(2)
    rho = State(q.effects[0].matrix)
    val = occurrence_probability(rho, p.effects[0])
    assert abs(val - 0.5) <= TIGHT, f"probability {val}"
    return "P0 in state Q0 has probability 1/2"


def _fx_conditioned_uniform(seed):
    worst = 0.0
    for dim in (2, 4):
        q, p = position_observable(dim), momentum_observable(dim)
        for cond in (conditioned(p, q), conditioned(q, p)):
            for eff in cond.effects:
                worst = max(worst, linalg.max_abs(eff.matrix - np.eye(dim) / dim))
    assert worst <= TIGHT, f"conditioned effects deviate by {worst:.3e}"
    return f"(P|Q) and (Q|P) uniform within {worst:.1e} for dims 2 and 4"


def _fx_coarse_grainings(seed):
    q_half, p_parity, p_half = example_partitions()
    worst = max(
        max(_close(q_half.effects[j].matrix, Q_HALF[j]) for j in range(2)),
        max(_close(p_parity.effects[j].matrix, P_PARITY[j]) for j in range(2)),
        max(_close(p_half.effects[j].matrix, P_HALF[j]) for j in range(2)),
    )
    return f"all six merged effects within {worst:.1e}"


def _fx_halved_products(seed):
    q_half, p_parity, _ = example_partitions()
    worst = 0.0
    for j, qe in enumerate(q_half.effects):
        for k, pe in enumerate(p_parity.effects):
            worst = max(worst, linalg.max_abs(seq_product(qe, pe).matrix - qe.matrix / 2.0))
            worst = max(worst, linalg.max_abs(seq_product(pe, qe).matrix - pe.matrix / 2.0))
    assert worst <= TIGHT, f"products deviate by {worst:.3e}"
    return f"both orders equal half the first factor within {worst:.1e}"


def _fx_mixed_product(seed):
    q_half, _, p_half = example_partitions()
    got = seq_product(q_half.effects[0], p_half.effects[0]).matrix
    dev = _close(got, MIXED_PRODUCT)
    return f"asymmetric product matrix within {dev:.1e}"


def _fx_sharp_not_atomic(seed):
    q_half, p_parity, p_half = example_partitions()
    for obs in (q_half, p_parity, p_half):
        assert obs.is_sharp(), "merged observable should stay sharp"
        assert not obs.is_atomic(), "rank-two projections are not atomic"
    return "all three merged observables sharp, none atomic"


def _fx_conditioning_not_sharp(seed):
    q_half, _, p_half = example_partitions()
    cond = conditioned(p_half, q_half)
    assert not cond.is_sharp(), "conditioning should break sharpness here"
    return "(P''|Q') is unsharp although P'' is sharp"


def _fx_mu(seed):
    for dim in (2, 4, 8):
        v = analysis.check_mu(position_observable(dim), momentum_observable(dim))
        assert v.holds, f"dim {dim}: deviation {v.max_deviation:.3e}"
    return "position/momentum unbiased for dims 2, 4, 8"


def _fx_condition1(seed):
    q_half, p_parity, p_half = example_partitions()
    q, p = position_observable(4), momentum_observable(4)
    assert analysis.check_condition1(q, p).holds
    assert analysis.check_condition1(q_half, p_parity).holds
    v = analysis.check_condition1(q_half, p_half)
    assert not v.holds and v.witness is not None
    return f"holds for the matched pairs, fails mismatched (dev {v.max_deviation:.2e})"


def _fx_condition2(seed):
    q_half, p_parity, p_half = example_partitions()
    q, p = position_observable(4), momentum_observable(4)
    assert analysis.check_condition2(q, p).holds
    assert analysis.check_condition2(q_half, p_parity).holds
    v = analysis.check_condition2(q_half, p_half)
    assert not v.holds and v.witness is not None
    return f"holds for the matched pairs, fails mismatched (dev {v.max_deviation:.2e})"


def _fx_value_complementarity(seed):
    q_half, p_parity, p_half = example_partitions()
    q, p = position_observable(4), momentum_observable(4)
    assert analysis.check_value_complementary(q, p).holds
    assert analysis.check_value_complementary(q_half, p_parity).holds
    v = analysis.check_value_complementary(q_half, p_half)
    assert not v.holds and v.witness is not None and not v.vacuous
    return f"fails only for the mismatched pair (dev {v.max_deviation:.2e})"


def _fx_injected_witness(seed):
    q_half, _, p_half = example_partitions()
    rep = mc_value_complementarity(q_half, p_half, samples=50, seed=seed,
                                   inject=(CROSS_WITNESS,))
    hits = [r for r in rep.injected if r["side"] == "A" and r["certain_outcome"] == "0"]
    assert hits, "witness never overlapped the first certainty subspace"
    observed = hits[0]["observed"]["0"]
    assert abs(observed - 0.75) <= TIGHT, f"observed {observed}"
    assert not rep.consistent
    return f"equal-weight witness sees probability {observed:.4f} (target 1/2)"


def _fx_generalized_mu(seed):
    q_half, _, p_half = example_partitions()
    v = analysis.check_generalized_mu(q_half, p_half)
    assert v.holds, f"deviation {v.max_deviation:.3e}"
    assert abs(analysis.forced_alpha(q_half, p_half) - 1.0) == 0.0
    trivial = Observable(["0", "1", "2"], [np.eye(3, dtype=complex) / 3.0] * 3)
    diagonal = Observable(["0", "1", "2"],
                          [np.diag([0.5, 0.3, 0.2]).astype(complex),
                           np.diag([0.3, 0.4, 0.3]).astype(complex),
                           np.diag([0.2, 0.3, 0.5]).astype(complex)])
    v2 = analysis.check_generalized_mu(trivial, diagonal)
    assert v2.holds and abs(analysis.forced_alpha(trivial, diagonal) - 1.0 / 3.0) <= TIGHT
    return "alpha = 1 for the mismatched pair, 1/3 for uniform-vs-equal-trace"


def _fx_classify(seed):
    q, p = position_observable(4), momentum_observable(4)
    full = analysis.classify_pair(q, p)
    assert full.mu is not None and full.mu.holds
    assert full.condition1.holds and full.condition2.holds
    assert full.value_complementary.holds and full.generalized_mu.holds

    q_half, p_parity, p_half = example_partitions()
    matched = analysis.classify_pair(q_half, p_parity)
    assert matched.mu is None
    assert matched.condition1.holds and matched.condition2.holds
    assert matched.value_complementary.holds and matched.generalized_mu.holds

    mismatched = analysis.classify_pair(q_half, p_half)
    assert mismatched.mu is None
    assert not mismatched.condition1.holds and not mismatched.condition2.holds
    assert not mismatched.value_complementary.holds
    assert mismatched.generalized_mu.holds and mismatched.alpha == 1.0
    return "three reference reports match expectations"


def _fx_partition_criterion(seed):
    outcomes = ("0", "1", "2", "3")
    even = PartitionMap(outcomes, ("0", "1"), {"0": "0", "1": "0", "2": "1", "3": "1"})
    skew = PartitionMap(outcomes, ("0", "1"), {"0": "0", "1": "1", "2": "1", "3": "1"})
    ok = analysis.check_partition_criterion(even, even)
    assert ok.holds and ok.constant == 4
    bad = analysis.check_partition_criterion(skew, even)
    assert not bad.holds and bad.products == (2, 6)
    return "2x2 blocks give constant 4; 1/3 split is rejected"


def _fx_trivial(seed):
    trivial = Observable(["0", "1"], [np.eye(2, dtype=complex) / 2.0] * 2)
    assert analysis.check_trivial(trivial)
    assert not analysis.check_trivial(position_observable(2))
    return "uniform observable trivial, position observable not"


def _fx_complement(seed):
    _, p_parity, _ = example_partitions()
    comp = p_parity.effects[0].complement()
    dev = _close(comp.matrix, p_parity.effects[1].matrix)
    return f"complement of the first parity effect is the second (within {dev:.1e})"


FIXTURES: tuple[tuple[str, Callable], ...] = (
    ("fourier-matrix-dim2", _fx_fourier_dim2),
    ("fourier-matrix-dim4", _fx_fourier_dim4),
    ("position-momentum-dim2", _fx_bases_dim2),
    ("position-momentum-dim4", _fx_bases_dim4),
    ("trace-pairing-dim2", _fx_trace_pairing),
    ("atomic-pair-products", _fx_atomic_products),
    ("occurrence-probability", _fx_occurrence),
    ("conditioned-uniform", _fx_conditioned_uniform),
    ("coarse-grainings-dim4", _fx_coarse_grainings),
    ("halved-pair-products", _fx_halved_products),
    ("mismatched-pair-product", _fx_mixed_product),
    ("sharp-but-not-atomic", _fx_sharp_not_atomic),
    ("conditioning-breaks-sharpness", _fx_conditioning_not_sharp),
    ("mutual-unbiasedness", _fx_mu),
    ("condition1-verdicts", _fx_condition1),
    ("condition2-verdicts", _fx_condition2),
    ("value-complementarity-verdicts", _fx_value_complementarity),
    ("injected-witness-probability", _fx_injected_witness),
    ("generalized-unbiasedness", _fx_generalized_mu),
    ("classification-reports", _fx_classify),
    ("partition-size-criterion", _fx_partition_criterion),
    ("trivial-observables", _fx_trivial),
    ("complement-pairing", _fx_complement),
)


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    detail: str


def run_paper_suite(seed: int = 0) -> list[FixtureResult]:
    """Run every fixture; never raises, failures land in the results."""
    results = []
    for name, fn in FIXTURES:
        try:
            detail = fn(seed)
            results.append(FixtureResult(name, True, str(detail)))
        except Exception as exc:  # noqa: BLE001 -- report, don't crash the runner
            results.append(FixtureResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results
