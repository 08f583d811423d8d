"""Maximal product-state overlap via alternating eigenvector ascent.

``max_product_overlap`` maximizes <a,b| Op |a,b> over unit vectors |a> on
the T side and |b> on the complement of a cut. Each half-step fixes one
side and solves the other side's top-eigenvector problem exactly, so the
objective is monotonically nondecreasing and converges to a local maximum;
random restarts mitigate the nonconvexity. The returned value is therefore
a certified lower bound on the true maximum, never a proven global one.

``sample_separable`` draws random separable states as explicit convex
mixtures of product pure states, keeping the mixture as a certificate so
downstream bounds can be evaluated exactly without materializing the
(possibly large) dense matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolationError
from .statespace import (
    Bipartition,
    DensityMatrix,
    PartyLayout,
    _split_dims,
)

HERMITICITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OverlapResult:
    """Best product overlap found, with the optimizing local vectors."""

    value: float
    argmax: tuple[np.ndarray, np.ndarray]
    restarts_used: int
    iterations_per_restart: tuple[int, ...]
    converged: bool


def _cut_tensor(op: np.ndarray, layout: PartyLayout, cut: Bipartition) -> tuple[np.ndarray, int, int]:
    keep_axes, rest_axes, d_t, d_r = _split_dims(layout, cut)
    if d_t < 1 or d_r < 1:
        raise ValueError("both sides of the cut must have dimension at least 1")
    k = layout.num_parties
    dims = layout.dims
    axes = keep_axes + rest_axes + [a + k for a in keep_axes] + [a + k for a in rest_axes]
    op4 = op.reshape(dims + dims).transpose(axes).reshape(d_t, d_r, d_t, d_r)
    return op4, d_t, d_r


def _haar_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _ascend(
    op4: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    max_iters: int,
    tol: float,
) -> tuple[float, np.ndarray, np.ndarray, int, bool, list[float]]:
    """One ascent run; returns the per-iteration objective values as well."""
    value = float(np.real(np.einsum("ijkl,i,j,k,l->", op4, a.conj(), b.conj(), a, b)))
    trajectory = [value]
    iterations = 0
    converged = False
    for _ in range(max_iters):
        iterations += 1
        m_a = np.einsum("ijkl,j,l->ik", op4, b.conj(), b)
        _, vecs = np.linalg.eigh(m_a)
        a = vecs[:, -1]
        m_b = np.einsum("ijkl,i,k->jl", op4, a.conj(), a)
        w, vecs = np.linalg.eigh(m_b)
        b = vecs[:, -1]
        new_value = float(w[-1])
        trajectory.append(new_value)
        if abs(new_value - value) < tol:
            value = new_value
            converged = True
            break
        value = new_value
    return value, a, b, iterations, converged, trajectory


def max_product_overlap(
    op: np.ndarray,
    layout: PartyLayout,
    cut: Bipartition,
    *,
    restarts: int = 32,
    max_iters: int = 500,
    tol: float = 1e-11,
    seed=0,
) -> OverlapResult:
    """Maximize <a,b| op |a,b> over product vectors across ``cut``.

    ``op`` must be Hermitian on ``layout``. Restarts draw independent Haar
    starting vectors from per-restart sub-seeds, so the result is
    reproducible for a given ``seed`` regardless of evaluation order.
    """
    op = np.asarray(op, dtype=np.complex128)
    d = layout.total_dim
    if op.shape != (d, d):
        raise ValueError(f"operator has shape {op.shape}, expected {(d, d)}")
    herm_dev = float(np.max(np.abs(op - op.conj().T)))
    if herm_dev > HERMITICITY_TOL:
        raise InvariantViolationError(
            f"operator deviates from Hermitian by {herm_dev:.3e} > {HERMITICITY_TOL}"
        )
    if restarts < 1:
        raise ValueError("need at least one restart")
    op4, d_t, d_r = _cut_tensor(op, layout, cut)

    best_value = -math.inf
    best_pair: tuple[np.ndarray, np.ndarray] | None = None
    best_converged = False
    iteration_counts: list[int] = []
    for restart in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(restart,)))
        b = _haar_vector(rng, d_r)
        a = _haar_vector(rng, d_t)
        value, a, b, iterations, converged, _ = _ascend(op4, a, b, max_iters, tol)
        iteration_counts.append(iterations)
        if value > best_value:
            best_value = value
            best_pair = (a, b)
            best_converged = converged
    return OverlapResult(
        value=best_value,
        argmax=best_pair,
        restarts_used=restarts,
        iterations_per_restart=tuple(iteration_counts),
        converged=best_converged,
    )


class CertifiedSeparableState:
    """A separable state stored as an explicit convex mixture of products.

    ``factors`` holds, per mixture term, the pair of local unit vectors on
    the two sides of ``cut`` (T side first). The dense matrix is only
    assembled on demand; overlaps with pure states are evaluated exactly
    from the certificate.
    """

    def __init__(
        self,
        layout: PartyLayout,
        cut: Bipartition,
        weights: np.ndarray,
        factors: tuple[tuple[np.ndarray, np.ndarray], ...],
    ) -> None:
        weights = np.asarray(weights, dtype=float)
        if weights.ndim != 1 or weights.size != len(factors):
            raise ValueError("need exactly one weight per mixture term")
        if np.any(weights < -1e-12) or abs(float(weights.sum()) - 1.0) > 1e-10:
            raise InvariantViolationError("mixture weights must be a probability vector")
        self.layout = layout
        self.cut = cut
        self.weights = np.clip(weights, 0.0, None)
        self.factors = tuple((np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128)) for a, b in factors)
        self._keep_axes, self._rest_axes, self._d_t, self._d_r = _split_dims(layout, cut)
        for a, b in self.factors:
            if a.shape != (self._d_t,) or b.shape != (self._d_r,):
                raise ValueError("factor vectors do not match the cut dimensions")
        self._dense: DensityMatrix | None = None

    @property
    def num_terms(self) -> int:
        return len(self.factors)

    def term_vector(self, index: int) -> np.ndarray:
        """Full-layout amplitude vector of one product term."""
        a, b = self.factors[index]
        dims = self.layout.dims
        perm = list(self._keep_axes) + list(self._rest_axes)
        inverse = np.argsort(perm)
        permuted_dims = tuple(dims[i] for i in perm)
        return np.kron(a, b).reshape(permuted_dims).transpose(inverse).reshape(-1)

    def overlap_with_pure(self, amplitudes: np.ndarray) -> float:
        """Exact value of <x| rho_s |x> for a pure |x> given as amplitudes.

        Equals sum_i w_i |<x|a_i, b_i>|^2, which is the same number the
        dense matrix would give, without building it.
        """
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        return math.fsum(
            float(w) * abs(np.vdot(amplitudes, self.term_vector(i))) ** 2
            for i, w in enumerate(self.weights)
        )

    def density_matrix(self) -> DensityMatrix:
        """Materialize the dense mixture (cached)."""
        if self._dense is None:
            d = self.layout.total_dim
            mat = np.zeros((d, d), dtype=np.complex128)
            for i, w in enumerate(self.weights):
                v = self.term_vector(i)
                mat += float(w) * np.outer(v, v.conj())
            self._dense = DensityMatrix(self.layout, mat)
        return self._dense


def sample_separable(
    layout: PartyLayout,
    cut: Bipartition,
    num_terms: int,
    seed,
) -> CertifiedSeparableState:
    """Random certified separable state across ``cut``.

    Mixture weights come from a flat simplex (Dirichlet with unit
    concentration); each term's local factors are independent Haar-random
    unit vectors on the two sides of the cut.
    """
    if num_terms < 1:
        raise ValueError("need at least one mixture term")
    rng = np.random.default_rng(seed)
    _, _, d_t, d_r = _split_dims(layout, cut)
    weights = rng.dirichlet(np.ones(num_terms)) if num_terms > 1 else np.ones(1)
    factors = tuple(
        (_haar_vector(rng, d_t), _haar_vector(rng, d_r)) for _ in range(num_terms)
    )
    return CertifiedSeparableState(layout, cut, weights, factors)
