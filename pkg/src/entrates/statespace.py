"""Dense multipartite state representation and basic linear-algebra kernels.

States live on a :class:`PartyLayout`, an ordered list of labeled parties
with local dimensions. Amplitudes and matrix entries are stored row-major
with party 0 owning the most significant index digit. For two qubits A, B
the flat index of the basis ket ``|a b>`` is therefore ``2*a + b``:

    index 0 -> |00>,  index 1 -> |01>,  index 2 -> |10>,  index 3 -> |11>

All operations here are pure functions of their inputs (plus explicit
seeds); values are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError, InvariantViolationError

# Dense-representation soft limits on the total Hilbert-space dimension.
# Matrices (d x d) hit memory walls far earlier than amplitude vectors, so
# the two representations get separate caps.
MAX_TOTAL_DIM = 2**14
MAX_VECTOR_DIM = 2**16

# Norm deviations up to this much are repaired by renormalization; beyond
# it the input is treated as corrupt.
NORM_REPAIR_TOL = 1e-6

# Target tolerance of the stored unit-norm invariant. Vectors already
# inside it are kept bit-for-bit unchanged (file round-trips stay exact).
NORM_STRICT_TOL = 1e-12

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-12

# Eigenvalues in [-PSD_CLIP_TOL, 0) are treated as floating-point noise and
# clipped to zero; anything more negative signals numerical corruption.
PSD_CLIP_TOL = 1e-10

_LABEL_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def default_labels(k: int) -> tuple[str, ...]:
    """Return ``k`` default party labels: A, B, ..., Z, P26, P27, ..."""
    return tuple(
        _LABEL_ALPHABET[i] if i < len(_LABEL_ALPHABET) else f"P{i}" for i in range(k)
    )


@dataclass(frozen=True)
class PartyLayout:
    """Ordered party labels with local dimensions.

    ``parties`` is a tuple of ``(label, dim)`` pairs. Labels must be unique
    and dimensions positive. The empty layout (total dimension 1) is allowed
    so that zero-copy tensor powers have a home.
    """

    parties: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        parties = tuple((str(label), int(dim)) for label, dim in self.parties)
        object.__setattr__(self, "parties", parties)
        labels = [label for label, _ in parties]
        if len(set(labels)) != len(labels):
            raise ValueError(f"party labels must be unique, got {labels}")
        for label, dim in parties:
            if not label:
                raise ValueError("party labels must be nonempty strings")
            if dim < 1:
                raise ValueError(f"party {label!r} has dimension {dim} < 1")
        if self.total_dim > MAX_VECTOR_DIM:
            raise DimensionError(
                f"total dimension {self.total_dim} exceeds the dense-representation "
                f"limit {MAX_VECTOR_DIM}"
            )

    @classmethod
    def from_dims(cls, dims: Sequence[int], labels: Sequence[str] | None = None) -> "PartyLayout":
        if labels is None:
            labels = default_labels(len(dims))
        if len(labels) != len(dims):
            raise ValueError("labels and dims must have equal length")
        return cls(tuple(zip(labels, dims)))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.parties)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.parties)

    @property
    def num_parties(self) -> int:
        return len(self.parties)

    @property
    def total_dim(self) -> int:
        return int(math.prod(self.dims))

    def describe(self) -> str:
        if not self.parties:
            return "(empty layout)"
        return "|".join(f"{label}:{dim}" for label, dim in self.parties)


@dataclass(frozen=True)
class Bipartition:
    """A cut T | T-complement of the parties of a ``num_parties``-party layout.

    ``t_set`` is the sorted tuple of party indices on the T side; it must be
    a nonempty proper subset of ``range(num_parties)``. The canonical form of
    a cut is the representative whose T side contains party 0.
    """

    t_set: tuple[int, ...]
    num_parties: int

    def __post_init__(self) -> None:
        t = tuple(sorted({int(i) for i in self.t_set}))
        object.__setattr__(self, "t_set", t)
        k = int(self.num_parties)
        object.__setattr__(self, "num_parties", k)
        if k < 2:
            raise ValueError("a bipartition needs at least two parties")
        if not t:
            raise ValueError("bipartition T side must be nonempty")
        if len(t) >= k:
            raise ValueError("bipartition T side must be a proper subset of the parties")
        if t[0] < 0 or t[-1] >= k:
            raise ValueError(f"party indices {t} out of range for {k} parties")

    @property
    def complement(self) -> tuple[int, ...]:
        t = set(self.t_set)
        return tuple(i for i in range(self.num_parties) if i not in t)

    @property
    def is_canonical(self) -> bool:
        return self.t_set[0] == 0

    def canonical(self) -> "Bipartition":
        """Return the representative of this cut whose T side contains party 0."""
        if self.is_canonical:
            return self
        return Bipartition(self.complement, self.num_parties)

    @staticmethod
    def enumerate_canonical(num_parties: int) -> tuple["Bipartition", ...]:
        """All 2**(k-1) - 1 canonical cuts, by T-side size then lexicographic."""
        if num_parties < 2:
            raise ValueError("need at least two parties to enumerate bipartitions")
        rest = range(1, num_parties)
        cuts = []
        for size in range(0, num_parties - 1):
            for extra in combinations(rest, size):
                cuts.append(Bipartition((0,) + extra, num_parties))
        return tuple(cuts)

    def describe(self, layout: PartyLayout | None = None) -> str:
        if layout is not None:
            labels = layout.labels
            left = ",".join(labels[i] for i in self.t_set)
            right = ",".join(labels[i] for i in self.complement)
        else:
            left = ",".join(str(i) for i in self.t_set)
            right = ",".join(str(i) for i in self.complement)
        return f"{left}|{right}"


def _as_complex_vector(values: Iterable, length: int | None = None) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D amplitude vector, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"amplitude vector has length {arr.shape[0]}, expected {length}")
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized amplitude vector bound to a :class:`PartyLayout`.

    The constructor enforces the strict unit-norm invariant; use
    :func:`make_pure_state` to accept slightly denormalized input.
    """

    layout: PartyLayout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = _as_complex_vector(self.amplitudes, self.layout.total_dim).copy()
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_STRICT_TOL:
            raise InvariantViolationError(
                f"pure-state norm {norm!r} deviates from 1 by more than {NORM_STRICT_TOL}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def reshaped(self) -> np.ndarray:
        """Amplitudes viewed as a tensor with one axis per party."""
        return self.amplitudes.reshape(self.layout.dims or (1,))

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "PureState") -> complex:
        """Inner product <self|other>; layouts must have equal dimensions."""
        if self.layout.dims != other.layout.dims:
            raise ValueError("overlap requires states with identical local dimensions")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian unit-trace matrix bound to a :class:`PartyLayout`.

    Construction checks shape, hermiticity (max-element deviation <= 1e-10)
    and trace. The positive-semidefiniteness check requires a full
    eigendecomposition and is exposed separately as :meth:`validate_psd`.
    """

    layout: PartyLayout
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.complex128).copy()
        d = self.layout.total_dim
        if d > MAX_TOTAL_DIM:
            raise DimensionError(
                f"dense matrices are limited to dimension {MAX_TOTAL_DIM}, got {d}"
            )
        if mat.shape != (d, d):
            raise ValueError(f"density matrix has shape {mat.shape}, expected {(d, d)}")
        herm_dev = float(np.max(np.abs(mat - mat.conj().T))) if d else 0.0
        if herm_dev > HERMITICITY_TOL:
            raise InvariantViolationError(
                f"matrix deviates from Hermitian by {herm_dev:.3e} > {HERMITICITY_TOL}"
            )
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvariantViolationError(f"trace {trace!r} deviates from 1 by more than {TRACE_TOL}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def eigenvalues(self) -> np.ndarray:
        """Real spectrum in ascending order, with PSD noise clipping applied."""
        return clip_spectrum(np.linalg.eigvalsh(self.matrix))

    def validate_psd(self) -> "DensityMatrix":
        """Raise :class:`InvariantViolationError` if any eigenvalue < -1e-10."""
        self.eigenvalues()
        return self


State = Union[PureState, DensityMatrix]


def clip_spectrum(values: np.ndarray) -> np.ndarray:
    """Clip eigenvalues in [-1e-10, 0) to 0; reject anything more negative."""
    values = np.asarray(values, dtype=float)
    worst = float(values.min()) if values.size else 0.0
    if worst < -PSD_CLIP_TOL:
        raise InvariantViolationError(
            f"eigenvalue {worst:.3e} below the PSD clipping floor -{PSD_CLIP_TOL}"
        )
    return np.clip(values, 0.0, None)


def make_pure_state(layout: PartyLayout, amplitudes: Iterable) -> PureState:
    """Build a :class:`PureState`, repairing small normalization errors.

    Vectors whose norm is within 1e-12 of 1 are stored unchanged (so that a
    write/read round-trip through the state-file format is bit-exact);
    deviations up to 1e-6 are renormalized; larger deviations are rejected
    as corrupt input.
    """
    amps = _as_complex_vector(amplitudes, layout.total_dim)
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise InvariantViolationError("amplitude vector is identically zero")
    if abs(norm - 1.0) > NORM_REPAIR_TOL:
        raise InvariantViolationError(
            f"amplitude norm {norm!r} deviates from 1 by more than {NORM_REPAIR_TOL}"
        )
    if abs(norm - 1.0) > NORM_STRICT_TOL:
        amps = amps / norm
    return PureState(layout, amps)


def catalog_state(
    name: str,
    *,
    parties: int = 3,
    dims: Sequence[int] | None = None,
) -> PureState:
    """Return a named state from the built-in catalog.

    Supported names:

    - ``ghz``: (|0...0> + |1...1>)/sqrt(2) on ``parties`` qubits (>= 2).
    - ``w``: (|001> + |010> + |100>)/sqrt(3) on three qubits.
    - ``singlet``: (|01> - |10>)/sqrt(2) on qubits A, B.
    - ``two_ghz``: GHZ x GHZ on six qubits A1 B1 C1 A2 B2 C2, regrouped to
      three 4-dimensional parties A=(A1,A2), B=(B1,B2), C=(C1,C2).
    - ``three_singlets``: singlets on the pairs (A1,B2), (B1,C2), (C1,A2),
      regrouped to the same three 4-dimensional parties.
    - ``zero``: |0...0> on the given ``dims`` (default one qubit per party).
    """
    name = name.lower()
    if name == "ghz":
        k = int(parties)
        if k < 2:
            raise ValueError("ghz needs at least 2 parties")
        layout = PartyLayout.from_dims((2,) * k)
        amps = np.zeros(layout.total_dim, dtype=np.complex128)
        amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
        return make_pure_state(layout, amps)
    if name == "w":
        layout = PartyLayout.from_dims((2, 2, 2))
        amps = np.zeros(8, dtype=np.complex128)
        amps[[1, 2, 4]] = 1.0 / np.sqrt(3.0)
        return make_pure_state(layout, amps)
    if name == "singlet":
        layout = PartyLayout.from_dims((2, 2))
        amps = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / np.sqrt(2.0)
        return make_pure_state(layout, amps)
    if name == "two_ghz":
        pair = tensor(catalog_state("ghz", parties=3), catalog_state("ghz", parties=3))
        # tensor order is A1 B1 C1 A2 B2 C2
        return merge_parties(pair, (("A", (0, 3)), ("B", (1, 4)), ("C", (2, 5))))
    if name == "three_singlets":
        s = catalog_state("singlet")
        triple = tensor(tensor(s, s), s)
        # tensor order is A1 B2 | B1 C2 | C1 A2 (one singlet per pair)
        return merge_parties(triple, (("A", (0, 5)), ("B", (2, 1)), ("C", (4, 3))))
    if name == "zero":
        if dims is None:
            dims = (2,) * int(parties)
        layout = PartyLayout.from_dims(tuple(int(d) for d in dims))
        amps = np.zeros(layout.total_dim, dtype=np.complex128)
        amps[0] = 1.0
        return PureState(layout, amps)
    raise ValueError(f"unknown catalog state {name!r}")


def _concat_layouts(a: PartyLayout, b: PartyLayout) -> PartyLayout:
    """Concatenate layouts, renaming colliding labels of ``b`` deterministically."""
    taken = set(a.labels)
    parties = list(a.parties)
    for label, dim in b.parties:
        candidate = label
        n = 2
        while candidate in taken:
            candidate = f"{label}{n}"
            n += 1
        taken.add(candidate)
        parties.append((candidate, dim))
    return PartyLayout(tuple(parties))


def tensor(a: State, b: State) -> State:
    """Kronecker product of two states of the same kind.

    The resulting layout is the concatenation of the operand layouts;
    colliding party labels of the second operand get a numeric suffix.
    """
    layout = _concat_layouts(a.layout, b.layout)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(layout, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(layout, np.kron(a.matrix, b.matrix))
    raise TypeError(
        f"cannot tensor {type(a).__name__} with {type(b).__name__}; kinds must match"
    )


def tensor_power(state: State, n: int) -> State:
    """n-fold tensor power; n = 0 yields the trivial state on the empty layout."""
    if n < 0:
        raise ValueError("tensor power requires n >= 0")
    if n == 0:
        empty = PartyLayout(())
        if isinstance(state, PureState):
            return PureState(empty, np.ones(1, dtype=np.complex128))
        return DensityMatrix(empty, np.ones((1, 1), dtype=np.complex128))
    out = state
    for _ in range(n - 1):
        out = tensor(out, state)
    return out


def _resolve_grouping(
    grouping: Sequence[tuple[str, Sequence[int]]], num_parties: int
) -> tuple[tuple[str, tuple[int, ...]], ...]:
    groups = tuple((str(label), tuple(int(i) for i in members)) for label, members in grouping)
    seen: list[int] = []
    for label, members in groups:
        if not members:
            raise ValueError(f"group {label!r} is empty")
        seen.extend(members)
    if sorted(seen) != list(range(num_parties)):
        raise ValueError(
            f"grouping {groups} is not a partition of the {num_parties} party indices"
        )
    labels = [label for label, _ in groups]
    if len(set(labels)) != len(labels):
        raise ValueError("merged party labels must be unique")
    return groups


def merge_parties(state: State, grouping: Sequence[tuple[str, Sequence[int]]]) -> State:
    """Regroup parties into merged parties, permuting tensor indices as needed.

    ``grouping`` lists the new parties as ``(label, member_indices)`` pairs;
    together the member indices must cover every existing party exactly once.
    The permutation implied by the flattened grouping is applied first, then
    each group's dimensions are multiplied into a single party.
    """
    dims = state.layout.dims
    groups = _resolve_grouping(grouping, len(dims))
    perm = [i for _, members in groups for i in members]
    new_layout = PartyLayout(
        tuple((label, math.prod(dims[i] for i in members)) for label, members in groups)
    )
    if isinstance(state, PureState):
        tensor_view = state.amplitudes.reshape(dims)
        amps = tensor_view.transpose(perm).reshape(-1)
        return PureState(new_layout, amps)
    if isinstance(state, DensityMatrix):
        k = len(dims)
        tensor_view = state.matrix.reshape(dims + dims)
        axes = perm + [p + k for p in perm]
        mat = tensor_view.transpose(axes).reshape(state.layout.total_dim, state.layout.total_dim)
        return DensityMatrix(new_layout, mat)
    raise TypeError(f"unsupported state kind {type(state).__name__}")


def _split_dims(layout: PartyLayout, cut: Bipartition) -> tuple[list[int], list[int], int, int]:
    if cut.num_parties != layout.num_parties:
        raise ValueError(
            f"bipartition is over {cut.num_parties} parties but the layout has "
            f"{layout.num_parties}"
        )
    keep_axes = list(cut.t_set)
    rest_axes = list(cut.complement)
    dims = layout.dims
    d_keep = int(math.prod(dims[i] for i in keep_axes))
    d_rest = int(math.prod(dims[i] for i in rest_axes))
    return keep_axes, rest_axes, d_keep, d_rest


def cut_matrix(psi: PureState, cut: Bipartition) -> np.ndarray:
    """Amplitudes reshaped to a (dim T, dim T-complement) matrix."""
    keep_axes, rest_axes, d_keep, d_rest = _split_dims(psi.layout, cut)
    return psi.reshaped().transpose(keep_axes + rest_axes).reshape(d_keep, d_rest)


def partial_trace(state: State, keep: Bipartition) -> DensityMatrix:
    """Reduced density matrix on the parties in ``keep`` (original order).

    ``keep`` must be a nonempty proper subset of the parties; use the state
    itself or its total trace instead of a full or empty keep set.
    """
    keep_axes, rest_axes, d_keep, d_rest = _split_dims(state.layout, keep)
    kept_layout = PartyLayout(tuple(state.layout.parties[i] for i in keep_axes))
    if isinstance(state, PureState):
        m = cut_matrix(state, keep)
        return DensityMatrix(kept_layout, m @ m.conj().T)
    if isinstance(state, DensityMatrix):
        dims = state.layout.dims
        k = len(dims)
        axes = keep_axes + rest_axes + [a + k for a in keep_axes] + [a + k for a in rest_axes]
        t = state.matrix.reshape(dims + dims).transpose(axes)
        t = t.reshape(d_keep, d_rest, d_keep, d_rest)
        return DensityMatrix(kept_layout, np.trace(t, axis1=1, axis2=3))
    raise TypeError(f"unsupported state kind {type(state).__name__}")


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Nonincreasing Schmidt coefficients of a pure state across a cut.

    The values are the coefficients c_i themselves (singular values of the
    cut matrix), so their squares sum to 1.
    """

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("a Schmidt spectrum cannot be empty")
        if any(v < 0 for v in values):
            raise InvariantViolationError("Schmidt coefficients must be nonnegative")
        if any(values[i] < values[i + 1] for i in range(len(values) - 1)):
            raise InvariantViolationError("Schmidt coefficients must be nonincreasing")
        total = math.fsum(v * v for v in values)
        if abs(total - 1.0) > 1e-10:
            raise InvariantViolationError(
                f"squared Schmidt coefficients sum to {total!r}, expected 1"
            )

    def probabilities(self) -> tuple[float, ...]:
        return tuple(v * v for v in self.values)

    def entropy_bits(self) -> float:
        """Shannon entropy of the squared coefficients, in bits."""
        return -math.fsum(p * math.log2(p) for p in self.probabilities() if p > 0.0)


def schmidt_coefficients(psi: PureState, cut: Bipartition) -> SchmidtSpectrum:
    """Singular values of the cut matrix, sorted nonincreasing."""
    singular = np.linalg.svd(cut_matrix(psi, cut), compute_uv=False)
    return SchmidtSpectrum(tuple(float(s) for s in singular))


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(matrix)
    w = clip_spectrum(w)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Computed as the squared trace norm of sqrt(rho) sqrt(sigma), which is
    symmetric in the arguments and reduces to <x|sigma|x> when rho = |x><x|.
    The result is clipped to [0, 1].
    """
    if rho.layout.dims != sigma.layout.dims:
        raise ValueError("fidelity requires states with identical local dimensions")
    product = _psd_sqrt(rho.matrix) @ _psd_sqrt(sigma.matrix)
    s = np.linalg.svd(product, compute_uv=False)
    value = float(np.sum(s)) ** 2
    return min(1.0, max(0.0, value))


def bures_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Bures distance sqrt(2 - 2 sqrt(F(rho, sigma))), in [0, sqrt(2)]."""
    return math.sqrt(max(0.0, 2.0 - 2.0 * math.sqrt(fidelity(rho, sigma))))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the trace norm of rho - sigma, in [0, 1]."""
    if rho.layout.dims != sigma.layout.dims:
        raise ValueError("trace distance requires states with identical local dimensions")
    eigs = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    return float(0.5 * np.sum(np.abs(eigs)))


def haar_random_pure(layout: PartyLayout, seed) -> PureState:
    """Haar-random pure state on ``layout``, deterministic for a given seed.

    ``seed`` may be anything accepted by :func:`numpy.random.default_rng`.
    """
    rng = np.random.default_rng(seed)
    d = layout.total_dim
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(layout, vec / np.linalg.norm(vec))


def random_local_unitaries(layout: PartyLayout, seed) -> list[np.ndarray]:
    """One Haar-ish random unitary per party (QR of a complex Gaussian)."""
    rng = np.random.default_rng(seed)
    out = []
    for dim in layout.dims:
        z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        q, r = np.linalg.qr(z)
        q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        out.append(q)
    return out


def apply_local_unitaries(psi: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    """Apply one unitary per party to a pure state."""
    dims = psi.layout.dims
    if len(unitaries) != len(dims):
        raise ValueError("need exactly one unitary per party")
    t = psi.reshaped()
    k = len(dims)
    for axis, u in enumerate(unitaries):
        t = np.tensordot(u, t, axes=([1], [axis]))
        t = np.moveaxis(t, 0, axis)
    return PureState(psi.layout, t.reshape(-1))
