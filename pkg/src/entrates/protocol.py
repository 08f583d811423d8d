"""Executable measure-and-prepare conversion channel and finite-copy audits.

The channel projects its input onto n copies of a source pure state; on
success it prepares floor(r*n) copies of the target state and sets a flag
qubit K to |0>, on failure it emits a fixed separable state with the flag
at |1>. The flag register belongs to the first party's holder. Applied to
the intended input (the n-copy source state itself) the conversion is
exact.

The audits check, at finite copy number, the inequalities that make the
channel almost entanglement-free on separable inputs:

- robustness of the output of the singlet channel on any certified
  separable input is at most 2**(-n*(1-r)) (``audit_prop1``);
- a channel that adds at most ``eps`` robustness to separable states adds
  at most log2(1+eps) relative entropy of entanglement to any state
  (``prop2_bound`` gives the amplification term);
- the overlap of any bipartite pure state with n singlets is bounded by
  its relative entropy of entanglement (``prop3_fidelity_check``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entanglement import ree_pure
from .errors import DimensionError
from .sepopt import CertifiedSeparableState, sample_separable
from .statespace import (
    MAX_TOTAL_DIM,
    Bipartition,
    DensityMatrix,
    PartyLayout,
    PureState,
    catalog_state,
    haar_random_pure,
    tensor_power,
)

FLAG_LABEL = "K"

_SINGLET_AMPS = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class ProtocolChannel:
    """Two-outcome measure-and-prepare instrument with a classical flag qubit.

    ``projector_vec`` holds the amplitudes of the n-copy source state (the
    rank-1 success POVM element), ``target_vec`` the amplitudes of the
    prepared copies block. ``mu_s`` is the certified separable failure
    output on the copies sublayout; it is None only when no copies are
    produced (then the failure block is the trivial scalar).
    """

    psi: PureState
    phi: PureState
    n: int
    r: float
    copies_out: int
    mu_s: CertifiedSeparableState | None
    input_layout: PartyLayout
    output_layout: PartyLayout
    projector_vec: np.ndarray
    target_vec: np.ndarray


def _default_mu(copies_layout: PartyLayout) -> CertifiedSeparableState:
    """The all-zeros product state with a one-term certificate."""
    zero = catalog_state("zero", dims=copies_layout.dims)
    mu_layout = zero.layout
    cut = Bipartition((0,), mu_layout.num_parties)
    d_t = mu_layout.dims[0]
    d_r = mu_layout.total_dim // d_t
    a = np.zeros(d_t, dtype=np.complex128)
    a[0] = 1.0
    b = np.zeros(d_r, dtype=np.complex128)
    b[0] = 1.0
    return CertifiedSeparableState(mu_layout, cut, np.ones(1), ((a, b),))


def build_protocol(
    psi: PureState,
    phi: PureState,
    n: int,
    r: float,
    mu_s: CertifiedSeparableState | None = None,
) -> ProtocolChannel:
    """Assemble the conversion channel for ``n`` input copies at rate ``r``.

    ``mu_s`` defaults to the all-zeros product state on the output copies
    sublayout. Both the n-copy input dimension and the output dimension
    (copies plus flag qubit) must stay within the dense-representation
    limit.
    """
    n = int(n)
    if n < 1:
        raise ValueError("need at least one input copy")
    r = float(r)
    if r <= 0.0:
        raise ValueError("the rate must be positive")
    if psi.layout.num_parties < 2 or phi.layout.num_parties < 2:
        raise ValueError("source and target states must have at least two parties")
    copies_out = math.floor(r * n)
    if psi.layout.total_dim**n > MAX_TOTAL_DIM:
        raise DimensionError(
            f"input dimension {psi.layout.total_dim}**{n} exceeds {MAX_TOTAL_DIM}"
        )
    if phi.layout.total_dim**copies_out * 2 > MAX_TOTAL_DIM:
        raise DimensionError(
            f"output dimension {phi.layout.total_dim}**{copies_out} * 2 exceeds {MAX_TOTAL_DIM}"
        )
    big_psi = tensor_power(psi, n)
    target = tensor_power(phi, copies_out)
    copies_layout = target.layout
    if copies_out >= 1:
        if mu_s is None:
            mu_s = _default_mu(copies_layout)
        elif mu_s.layout.dims != copies_layout.dims:
            raise ValueError(
                "the separable failure state must live on the output copies sublayout"
            )
    else:
        mu_s = None
    output_layout = PartyLayout(copies_layout.parties + ((FLAG_LABEL, 2),))
    return ProtocolChannel(
        psi=psi,
        phi=phi,
        n=n,
        r=r,
        copies_out=copies_out,
        mu_s=mu_s,
        input_layout=big_psi.layout,
        output_layout=output_layout,
        projector_vec=big_psi.amplitudes,
        target_vec=target.amplitudes,
    )


def success_probability(ch: ProtocolChannel, rho: DensityMatrix) -> float:
    """Exact success-branch weight tr(P rho) with P the n-copy projector."""
    if rho.layout.dims != ch.input_layout.dims:
        raise ValueError("input state does not live on the channel's input layout")
    p = float(np.real(np.vdot(ch.projector_vec, rho.matrix @ ch.projector_vec)))
    if p < -1e-10 or p > 1.0 + 1e-10:
        raise ValueError(f"projector weight {p!r} outside [0, 1]")
    return min(1.0, max(0.0, p))


def apply_channel(ch: ProtocolChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply the channel: p (target x |0><0|) + (1-p) (mu_s x |1><1|)."""
    p = success_probability(ch, rho)
    success_vec = np.kron(ch.target_vec, np.array([1.0, 0.0], dtype=np.complex128))
    out = p * np.outer(success_vec, success_vec.conj())
    flag_one = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128)
    if ch.mu_s is not None:
        failure = np.kron(ch.mu_s.density_matrix().matrix, flag_one)
    else:
        failure = flag_one
    out = out + (1.0 - p) * failure
    return DensityMatrix(ch.output_layout, out)


def _is_singlet(state: PureState) -> bool:
    if state.layout.dims != (2, 2):
        return False
    return abs(np.vdot(_SINGLET_AMPS, state.amplitudes)) ** 2 >= 1.0 - 1e-12


def output_robustness_bound(ch: ProtocolChannel, rho_s: CertifiedSeparableState) -> float:
    """Convexity upper bound on the output robustness for a separable input.

    Valid for the singlet-to-singlet channel only: the bound is
    tr(P rho_s) * (2**copies_out - 1), with the projector weight evaluated
    exactly from the input's product-mixture certificate.
    """
    if not _is_singlet(ch.psi) or not _is_singlet(ch.phi):
        raise ValueError("the robustness bound applies to the singlet-to-singlet channel")
    if not isinstance(rho_s, CertifiedSeparableState):
        raise TypeError("the input must carry a separable-mixture certificate")
    if rho_s.layout.dims != ch.input_layout.dims:
        raise ValueError("input state does not live on the channel's input layout")
    p = rho_s.overlap_with_pure(ch.projector_vec)
    return p * (2.0**ch.copies_out - 1.0)


@dataclass(frozen=True, eq=False)
class BoundCheckReport:
    """Outcome of a sampled bound audit; deterministic for a given seed."""

    samples: int
    pairs: tuple[tuple[float, float], ...]
    max_excess: float
    passed: bool
    seed: int


def alice_side_cut(num_pairs: int) -> Bipartition:
    """The cut collecting every A half of ``num_pairs`` two-party copies."""
    return Bipartition(tuple(range(0, 2 * num_pairs, 2)), 2 * num_pairs)


_MAX_AUDIT_COPIES = 6
_MAX_MIXTURE_TERMS = 8
_PASS_SLACK = 1e-9


def audit_prop1(n: int, r: float, num_samples: int = 100, seed: int = 0) -> BoundCheckReport:
    """Check the separable-input robustness bound on random certified inputs.

    For each sample a random separable state across the Alice/Bob cut of
    the n-singlet layout is drawn (1 to 8 mixture terms, flat simplex
    weights, Haar product factors; sub-seeded by sample index), and the
    exact convexity bound is compared against 2**(-n*(1-r)).
    """
    n = int(n)
    if not 1 <= n <= _MAX_AUDIT_COPIES:
        raise DimensionError(f"audit supports 1 <= n <= {_MAX_AUDIT_COPIES}, got {n}")
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError("the audit requires 0 < r < 1")
    if num_samples < 1:
        raise ValueError("need at least one sample")
    singlet = catalog_state("singlet")
    ch = build_protocol(singlet, singlet, n, r)
    cut = alice_side_cut(n)
    rhs = 2.0 ** (-n * (1.0 - r))
    pairs: list[tuple[float, float]] = []
    for i in range(num_samples):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i,)))
        num_terms = int(rng.integers(1, _MAX_MIXTURE_TERMS + 1))
        rho_s = sample_separable(ch.input_layout, cut, num_terms, rng)
        lhs = output_robustness_bound(ch, rho_s)
        pairs.append((lhs, rhs))
    max_excess = max(lhs - rhs for lhs, rhs in pairs)
    return BoundCheckReport(
        samples=num_samples,
        pairs=tuple(pairs),
        max_excess=max_excess,
        passed=bool(max_excess <= _PASS_SLACK),
        seed=int(seed),
    )


def prop2_bound(epsilon: float) -> float:
    """Maximum relative-entropy amplification log2(1 + epsilon)."""
    epsilon = float(epsilon)
    if epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    return math.log1p(epsilon) / math.log(2.0)


def prop3_fidelity_check(rho: PureState, n: int, r: float) -> tuple[float, float, bool]:
    """Check the singlet-block fidelity bound for one bipartite pure state.

    ``rho`` must live on the n-singlet layout (2n qubits, alternating
    A/B halves). Returns (lhs, rhs, passed) where lhs is the fidelity with
    n singlets and rhs = (E_r(rho) + log2(1 + 2**(-n*(1-r)))) / floor(r*n).
    """
    n = int(n)
    if n < 1:
        raise ValueError("need at least one singlet copy")
    copies_out = math.floor(float(r) * n)
    if copies_out < 1:
        raise ValueError("floor(r*n) must be at least 1 for the bound to be defined")
    if rho.layout.dims != (2,) * (2 * n):
        raise ValueError(f"state must live on {2 * n} qubits (the n-singlet layout)")
    singlet_block = tensor_power(catalog_state("singlet"), n)
    lhs = abs(np.vdot(singlet_block.amplitudes, rho.amplitudes)) ** 2
    cut = alice_side_cut(n)
    rhs = (ree_pure(rho, cut) + math.log2(1.0 + 2.0 ** (-n * (1.0 - r)))) / copies_out
    return float(lhs), float(rhs), bool(lhs <= rhs + _PASS_SLACK)


def audit_prop3(n: int, r: float, num_samples: int = 100, seed: int = 0) -> BoundCheckReport:
    """Run :func:`prop3_fidelity_check` on Haar-random pure states."""
    n = int(n)
    if not 1 <= n <= _MAX_AUDIT_COPIES:
        raise DimensionError(f"audit supports 1 <= n <= {_MAX_AUDIT_COPIES}, got {n}")
    if num_samples < 1:
        raise ValueError("need at least one sample")
    layout = PartyLayout.from_dims((2,) * (2 * n))
    pairs: list[tuple[float, float]] = []
    for i in range(num_samples):
        sample = haar_random_pure(layout, np.random.SeedSequence(entropy=seed, spawn_key=(i,)))
        lhs, rhs, _ = prop3_fidelity_check(sample, n, r)
        pairs.append((lhs, rhs))
    max_excess = max(lhs - rhs for lhs, rhs in pairs)
    return BoundCheckReport(
        samples=num_samples,
        pairs=tuple(pairs),
        max_excess=max_excess,
        passed=bool(max_excess <= _PASS_SLACK),
        seed=int(seed),
    )
