"""Pairwise-entanglement synthesis for tripartite pure states.

Any 3-party pure state can be reversibly interconverted with a state made
of three bipartite pieces, one shared between each pair of parties, as
long as the pieces carry entanglement budgets

    s1 = (S_A + S_B - S_C) / 2     (pair A1-B2)
    s2 = (S_B + S_C - S_A) / 2     (pair B1-C2)
    s3 = (S_A + S_C - S_B) / 2     (pair C1-A2)

where S_X is the entanglement entropy of party X against the rest.
Subadditivity of the von Neumann entropy makes each budget nonnegative.
This module computes the budgets, realizes each pair as an explicit
two-qudit state with exactly the requested entropy, and certifies the
resulting decomposition with the rate engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entanglement import entropy_profile
from .errors import InvariantViolationError
from .rates import ReversibilityReport, is_reversible
from .statespace import (
    Bipartition,
    PartyLayout,
    PureState,
    SchmidtSpectrum,
    merge_parties,
    partial_trace,
    tensor,
)
from .entanglement import von_neumann_entropy

# Budgets this far below zero are floating-point noise on a value that is
# analytically nonnegative; anything worse is corruption.
BUDGET_CLIP_TOL = 1e-10

_BISECTION_MAX_ITERS = 200


@dataclass(frozen=True, eq=False)
class RegDecomposition:
    """Pairwise entanglement budgets and the synthesized 3-party state.

    ``s1, s2, s3`` are the budgets (bits) of the pairs (A1,B2), (B1,C2),
    (C1,A2); ``spectra`` are the Schmidt spectra realizing them; and
    ``synthesized`` is the merged state on parties A=(A1,A2), B=(B1,B2),
    C=(C1,C2) whose entropy profile matches (s1+s3, s1+s2, s2+s3).
    """

    s1: float
    s2: float
    s3: float
    spectra: tuple[SchmidtSpectrum, SchmidtSpectrum, SchmidtSpectrum]
    synthesized: PureState


def _single_party_entropies(psi: PureState) -> tuple[float, float, float]:
    if psi.layout.num_parties != 3:
        raise ValueError(
            f"pairwise decomposition is defined for 3 parties, got {psi.layout.num_parties}"
        )
    k = psi.layout.num_parties
    return tuple(
        von_neumann_entropy(partial_trace(psi, Bipartition((i,), k))) for i in range(3)
    )


def reg_entropies(psi: PureState) -> tuple[float, float, float]:
    """Entanglement budgets (s1, s2, s3) of the three pairwise pieces."""
    s_a, s_b, s_c = _single_party_entropies(psi)
    budgets = (
        0.5 * (s_a + s_b - s_c),
        0.5 * (s_b + s_c - s_a),
        0.5 * (s_a + s_c - s_b),
    )
    for s in budgets:
        if s < -BUDGET_CLIP_TOL:
            raise InvariantViolationError(
                f"pair budget {s!r} below the subadditivity floor -{BUDGET_CLIP_TOL}"
            )
    return tuple(max(0.0, s) for s in budgets)


def _tail_entropy(p: float, m: int) -> float:
    """Entropy of the spectrum (p, (1-p)/(m-1), ...) with m levels, in bits."""
    h = -p * math.log2(p) if p > 0.0 else 0.0
    if m > 1 and p < 1.0:
        q = (1.0 - p) / (m - 1)
        h += -(1.0 - p) * math.log2(q)
    return h


def spectrum_with_entropy(s: float, tol: float = 1e-12) -> SchmidtSpectrum:
    """A Schmidt spectrum whose squared values have entropy ``s`` bits.

    Uses the one-heavy-level family (p, (1-p)/(m-1), ..., (1-p)/(m-1)) on
    m = max(2, ceil(2**s)) levels; its entropy decreases strictly and
    continuously in p on [1/m, 1], so bisection finds the unique p with
    entropy ``s`` to within ``tol``. ``s = 0`` returns the trivial spectrum.
    """
    s = float(s)
    if s < 0.0:
        raise ValueError(f"target entropy {s!r} must be nonnegative")
    if s == 0.0:
        return SchmidtSpectrum((1.0,))
    m = max(2, math.ceil(2.0**s))
    lo, hi = 1.0 / m, 1.0
    if abs(_tail_entropy(lo, m) - s) <= tol:
        p = lo
    else:
        p = None
        for _ in range(_BISECTION_MAX_ITERS):
            mid = 0.5 * (lo + hi)
            value = _tail_entropy(mid, m)
            if abs(value - s) <= tol:
                p = mid
                break
            if value > s:
                lo = mid
            else:
                hi = mid
        if p is None:
            raise ArithmeticError(
                f"bisection did not reach |entropy - {s}| <= {tol} in "
                f"{_BISECTION_MAX_ITERS} iterations"
            )
    tail = (1.0 - p) / (m - 1)
    squared = (p,) + (tail,) * (m - 1)
    values = tuple(math.sqrt(max(0.0, q)) for q in squared)
    return SchmidtSpectrum(tuple(sorted(values, reverse=True)))


def _pair_state(spectrum: SchmidtSpectrum, label_left: str, label_right: str) -> PureState:
    """Two-qudit state sum_j c_j |jj> with the given Schmidt spectrum."""
    m = len(spectrum.values)
    layout = PartyLayout(((label_left, m), (label_right, m)))
    amps = np.zeros(m * m, dtype=np.complex128)
    for j, c in enumerate(spectrum.values):
        amps[j * m + j] = c
    return PureState(layout, amps)


def reg_synthesize(psi: PureState) -> RegDecomposition:
    """Synthesize the pairwise-entangled partner state of ``psi``.

    Builds pair states with the budgets from :func:`reg_entropies` on the
    interleaved six-party layout [A1, B2, B1, C2, C1, A2], then merges to
    parties A=(A1,A2), B=(B1,B2), C=(C1,C2). The merged state's entropy
    profile reproduces the single-party entropies of ``psi``.
    """
    s1, s2, s3 = reg_entropies(psi)
    spectra = (
        spectrum_with_entropy(s1),
        spectrum_with_entropy(s2),
        spectrum_with_entropy(s3),
    )
    pair1 = _pair_state(spectra[0], "A1", "B2")
    pair2 = _pair_state(spectra[1], "B1", "C2")
    pair3 = _pair_state(spectra[2], "C1", "A2")
    product = tensor(tensor(pair1, pair2), pair3)
    merged = merge_parties(product, (("A", (0, 5)), ("B", (2, 1)), ("C", (4, 3))))
    return RegDecomposition(s1=s1, s2=s2, s3=s3, spectra=spectra, synthesized=merged)


def verify_reg(psi: PureState, decomposition: RegDecomposition) -> ReversibilityReport:
    """Certify that ``psi`` and its synthesized partner interconvert at unit rate.

    The decomposition must have been synthesized from ``psi`` (checked via
    the entropy profiles); the certificate itself is delegated to
    :func:`entrates.rates.is_reversible`.
    """
    profile_psi = entropy_profile(psi)
    profile_phi = entropy_profile(decomposition.synthesized)
    worst = max(
        abs(a - b) for a, b in zip(profile_psi.values(), profile_phi.values())
    )
    if worst > 1e-8:
        raise ValueError(
            f"decomposition does not match the state: entropy profiles differ by {worst:.3e}"
        )
    return is_reversible(psi, decomposition.synthesized)
