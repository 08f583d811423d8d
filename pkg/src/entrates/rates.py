"""Conversion-rate engine for multipartite pure states.

The optimal rate for converting a pure state into another under operations
that are asymptotically entanglement-nonincreasing in every bipartition is
the minimum, over all cuts, of the ratio of entanglement entropies
source/target. The same expression is the classic upper bound on LOCC
rates, so both are exposed. A transformation is reversible exactly when
that ratio is the same for every cut.

Cuts where one of the entropies vanishes need a convention (the ideal
ratio is 0/0 or x/0): a cut whose target entropy is zero imposes no
constraint and is skipped (flagged as degenerate when the source side is
entangled there); a cut where only the source entropy is zero forces the
rate to 0. The zero threshold is ``ZERO_ENTROPY_THRESHOLD``. Reports carry
the affected cuts explicitly so the convention is visible to callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .entanglement import entanglement_entropy
from .statespace import Bipartition, PureState

# Entropies below this are treated as exactly zero for rate purposes.
ZERO_ENTROPY_THRESHOLD = 1e-9


def enumerate_bipartitions(k: int) -> tuple[Bipartition, ...]:
    """The 2**(k-1) - 1 canonical cuts of ``k`` parties.

    Each cut's T side contains party 0; the order is by T-side size, then
    lexicographic.
    """
    return Bipartition.enumerate_canonical(k)


@dataclass(frozen=True)
class CutRatio:
    """Per-cut entropies and their ratio; ``ratio`` is None for skipped cuts."""

    cut: Bipartition
    s_source: float
    s_target: float
    ratio: float | None


@dataclass(frozen=True)
class RateReport:
    """Outcome of a rate computation across all canonical cuts."""

    cuts: tuple[CutRatio, ...]
    rate: float
    min_cut: Bipartition | None
    degenerate_cuts: tuple[Bipartition, ...]
    unconstrained: bool
    source_label: str = "psi"
    target_label: str = "phi"


@dataclass(frozen=True)
class ReversibilityReport:
    """Whether two states are asymptotically interconvertible without loss."""

    reversible: bool
    max_ratio_spread: float
    tolerance: float
    forward_rate: float
    backward_rate: float
    zero_cut_sets_match: bool = field(default=True)


def _cut_entropies(psi: PureState, phi: PureState) -> tuple[tuple[Bipartition, ...], list[float], list[float]]:
    if psi.layout.num_parties != phi.layout.num_parties:
        raise ValueError(
            f"party count mismatch: source has {psi.layout.num_parties}, "
            f"target has {phi.layout.num_parties}"
        )
    cuts = enumerate_bipartitions(psi.layout.num_parties)
    s_source = [entanglement_entropy(psi, cut) for cut in cuts]
    s_target = [entanglement_entropy(phi, cut) for cut in cuts]
    return cuts, s_source, s_target


def aen_rate(
    psi: PureState,
    phi: PureState,
    *,
    source_label: str = "psi",
    target_label: str = "phi",
) -> RateReport:
    """Optimal asymptotic conversion rate from ``psi`` to ``phi``.

    The rate is ``min_T S(psi^T) / S(phi^T)`` over the canonical cuts, with
    the zero-entropy conventions described in the module docstring. When no
    cut constrains the conversion, the rate is ``math.inf`` and the report
    is flagged ``unconstrained``.
    """
    cuts, s_source, s_target = _cut_entropies(psi, phi)
    tau = ZERO_ENTROPY_THRESHOLD
    entries: list[CutRatio] = []
    degenerate: list[Bipartition] = []
    for cut, ss, st in zip(cuts, s_source, s_target):
        if st < tau:
            degenerate.append(cut)
            ratio = None  # target unentangled here: no constraint
        elif ss < tau:
            ratio = 0.0
        else:
            ratio = ss / st
        entries.append(CutRatio(cut, ss, st, ratio))
    defined = [(e.ratio, e.cut) for e in entries if e.ratio is not None]
    if defined:
        rate, min_cut = min(defined, key=lambda pair: pair[0])
        unconstrained = False
    else:
        rate, min_cut = math.inf, None
        unconstrained = True
    return RateReport(
        cuts=tuple(entries),
        rate=rate,
        min_cut=min_cut,
        degenerate_cuts=tuple(degenerate),
        unconstrained=unconstrained,
        source_label=source_label,
        target_label=target_label,
    )


def locc_upper_bound(psi: PureState, phi: PureState) -> float:
    """Upper bound on the LOCC conversion rate from ``psi`` to ``phi``.

    For pure states this is the same min-over-cuts entropy ratio that the
    extended operation class attains; it is exposed separately so reports
    can cite it as a bound rather than an achievable rate.
    """
    return aen_rate(psi, phi).rate


def is_reversible(psi: PureState, phi: PureState, tolerance: float = 1e-9) -> ReversibilityReport:
    """Certify whether ``psi`` and ``phi`` interconvert reversibly.

    Reversible means every cut sees the same source/target entropy ratio:
    the relative spread of the ratios over cuts where both states are
    entangled must not exceed ``tolerance``, and the sets of cuts with
    vanishing entropy must coincide between the two states.
    """
    cuts, s_source, s_target = _cut_entropies(psi, phi)
    tau = ZERO_ENTROPY_THRESHOLD
    ratios = [
        ss / st for ss, st in zip(s_source, s_target) if ss >= tau and st >= tau
    ]
    if ratios:
        spread = (max(ratios) - min(ratios)) / max(ratios)
    else:
        spread = 0.0
    zero_source = {cut for cut, ss in zip(cuts, s_source) if ss < tau}
    zero_target = {cut for cut, st in zip(cuts, s_target) if st < tau}
    zero_match = zero_source == zero_target
    forward = aen_rate(psi, phi).rate
    backward = aen_rate(phi, psi).rate
    return ReversibilityReport(
        reversible=bool(spread <= tolerance and zero_match),
        max_ratio_spread=float(spread),
        tolerance=float(tolerance),
        forward_rate=forward,
        backward_rate=backward,
        zero_cut_sets_match=zero_match,
    )
