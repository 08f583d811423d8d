"""Scalar entanglement and entropy functionals, all in bits (log base 2).

For pure states the relative entropy of entanglement across a cut equals
the entanglement entropy of that cut, and the generalized robustness has
the closed form (sum of Schmidt coefficients)^2 - 1; both are computed
here without any optimization. Mixed-state relative entropy of
entanglement is deliberately not implemented (the protocol module's
convexity bound covers the one place it is needed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .statespace import (
    Bipartition,
    DensityMatrix,
    PartyLayout,
    PureState,
    clip_spectrum,
    partial_trace,
    schmidt_coefficients,
)

# Eigenvalues at or below this are treated as outside the support when
# deciding whether a relative entropy diverges; matches the PSD clipping
# tolerance used by the state types.
SUPPORT_THRESHOLD = 1e-10


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy -tr(rho log2 rho) in bits, with 0 log 0 := 0."""
    eigs = rho.eigenvalues()
    return -math.fsum(p * math.log2(p) for p in eigs if p > 0.0)


def binary_entropy(x: float) -> float:
    """Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x) on [0, 1]."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def entanglement_entropy(psi: PureState, cut: Bipartition) -> float:
    """Entanglement entropy of a pure state across a cut, in bits.

    This is the von Neumann entropy of the reduced state on either side of
    the cut, evaluated through the Schmidt spectrum.
    """
    return schmidt_coefficients(psi, cut).entropy_bits()


@dataclass(frozen=True, eq=False)
class EntropyProfile:
    """Entanglement entropy for every canonical cut of a layout."""

    layout: PartyLayout
    by_cut: Mapping[Bipartition, float]

    def __post_init__(self) -> None:
        expected = Bipartition.enumerate_canonical(self.layout.num_parties)
        if tuple(self.by_cut.keys()) != expected:
            raise ValueError("profile keys must be exactly the canonical cuts, in order")
        if any(v < 0.0 for v in self.by_cut.values()):
            raise ValueError("entanglement entropies cannot be negative")
        object.__setattr__(self, "by_cut", dict(self.by_cut))

    def __getitem__(self, cut: Bipartition) -> float:
        return self.by_cut[cut.canonical()]

    def __iter__(self) -> Iterator[Bipartition]:
        return iter(self.by_cut)

    def __len__(self) -> int:
        return len(self.by_cut)

    def items(self):
        return self.by_cut.items()

    def values(self):
        return self.by_cut.values()

    def cuts(self) -> tuple[Bipartition, ...]:
        return tuple(self.by_cut.keys())


def entropy_profile(psi: PureState) -> EntropyProfile:
    """Entanglement entropy of ``psi`` across every canonical cut."""
    k = psi.layout.num_parties
    if k < 2:
        raise ValueError("an entropy profile needs at least two parties")
    cuts = Bipartition.enumerate_canonical(k)
    return EntropyProfile(psi.layout, {cut: entanglement_entropy(psi, cut) for cut in cuts})


def quantum_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Quantum relative entropy S(rho || sigma) in bits.

    Returns ``math.inf`` when the support of ``rho`` is not contained in
    the support of ``sigma`` (eigenvalue threshold 1e-10 on both sides).
    """
    if rho.layout.dims != sigma.layout.dims:
        raise ValueError("relative entropy requires states with identical local dimensions")
    rho_eigs = rho.eigenvalues()
    s_eigs, s_vecs = np.linalg.eigh(sigma.matrix)
    s_eigs = clip_spectrum(s_eigs)
    # weight of rho on each eigenvector of sigma
    weights = np.real(np.einsum("ij,jk,ki->i", s_vecs.conj().T, rho.matrix, s_vecs))
    inside = s_eigs > SUPPORT_THRESHOLD
    leaked = float(np.sum(weights[~inside]))
    if leaked > SUPPORT_THRESHOLD:
        return math.inf
    tr_rho_log_rho = math.fsum(p * math.log2(p) for p in rho_eigs if p > 0.0)
    tr_rho_log_sigma = math.fsum(
        w * math.log2(s) for w, s in zip(weights[inside], s_eigs[inside])
    )
    return tr_rho_log_rho - tr_rho_log_sigma


def ree_pure(psi: PureState, cut: Bipartition) -> float:
    """Relative entropy of entanglement of a pure state across a cut.

    For pure states this equals the entanglement entropy, so no
    optimization over separable states is performed.
    """
    return entanglement_entropy(psi, cut)


def generalized_robustness_pure(psi: PureState, cut: Bipartition) -> float:
    """Generalized robustness of a pure state across a cut.

    Closed form (sum_i c_i)^2 - 1 over the Schmidt coefficients. The sum of
    squares is divided out instead of assumed to be 1, which removes the
    floating-point normalization residue (uniform spectra then come out
    exactly, e.g. 2**m - 1 for m merged singlets).
    """
    values = schmidt_coefficients(psi, cut).values
    total = math.fsum(values)
    total_sq = math.fsum(v * v for v in values)
    return total * total / total_sq - 1.0
