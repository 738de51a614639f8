"""Finite-dimensional Hilbert-space machinery.

Classical laws become diagonal operators here, and everything a finite
spectral calculus needs lives in this module: Hermitian/density/pure-state
wrappers with strict construction-time checks, projector-valued measures,
spectral decomposition with degeneracy clustering, joint measures for
commuting pairs, a Gram-matrix GNS construction, CHSH evaluation,
dispersion, and the projector lattice.

Conventions
-----------
* Operator norm means the spectral (2-) norm throughout.
* Eigen-decompositions are made deterministic: eigenvalues ascending, and
  each eigenvector is rescaled so its largest-magnitude entry (ties: the
  lowest index) is real and positive.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .classical import Distribution
from .errors import (
    AlgebraError,
    DimensionError,
    DomainError,
    HypothesisError,
    NonCommutingError,
)

#: Maximum entrywise deviation from Hermitian symmetry accepted at
#: construction; the stored matrix is then exactly symmetrised.
HERMITIAN_TOL = 1e-10
#: Tolerance for the PVM axioms (idempotency, orthogonality, completeness).
PVM_TOL = 1e-10
#: Density operators: trace within this of 1, eigenvalues >= -this.
DENSITY_TOL = 1e-10
#: Pure states: norm within this of 1.
UNIT_TOL = 1e-12
#: Default commutator-norm tolerance for routines requiring commuting input.
COMM_TOL = 1e-9

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
for _m in (_PAULI_X, _PAULI_Y, _PAULI_Z):
    _m.setflags(write=False)

PAULI_X = _PAULI_X
PAULI_Y = _PAULI_Y
PAULI_Z = _PAULI_Z


def fourier_unitary(dim: int) -> np.ndarray:
    """The discrete Fourier unitary F[j, k] = exp(2*pi*i*j*k/dim)/sqrt(dim).

    Every entry has modulus 1/sqrt(dim), so the eigenbases of a diagonal
    operator and its Fourier conjugate are mutually unbiased.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return np.exp(2j * np.pi * j * k / dim) / np.sqrt(dim)


def hadamard_unitary() -> np.ndarray:
    """The 2x2 real Hadamard unitary (entries +-1/sqrt(2))."""
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def matrix_of(x) -> np.ndarray:
    """Accept a wrapper type or a raw array-like; return the complex matrix."""
    m = getattr(x, "matrix", None)
    if m is not None:
        return m
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def operator_norm(m) -> float:
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(matrix_of(m), 2))


def commutator_norm(a, b) -> float:
    """Spectral norm of the commutator a@b - b@a."""
    ma, mb = matrix_of(a), matrix_of(b)
    if ma.shape != mb.shape:
        raise DimensionError(f"operands have shapes {ma.shape} and {mb.shape}")
    return operator_norm(ma @ mb - mb @ ma)


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


class HermitianOperator:
    """A Hermitian matrix, symmetrised and frozen at construction.

    Input may deviate from exact symmetry by at most ``HERMITIAN_TOL``
    entrywise; the stored matrix is (A + A*)/2.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = matrix_of(matrix)
        dev = float(np.abs(m - m.conj().T).max())
        if dev > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian: max|A - A*| = {dev:.3e}")
        self.matrix = _frozen((m + m.conj().T) / 2)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def norm(self) -> float:
        return operator_norm(self.matrix)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


class DensityOperator:
    """A state: Hermitian, positive semidefinite (within ``DENSITY_TOL``),
    unit trace.  Stored symmetrised and trace-normalised."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = matrix_of(matrix)
        dev = float(np.abs(m - m.conj().T).max())
        if dev > HERMITIAN_TOL:
            raise ValueError(f"density matrix not Hermitian: max|A - A*| = {dev:.3e}")
        h = (m + m.conj().T) / 2
        eigs = np.linalg.eigvalsh(h)
        if eigs.min() < -DENSITY_TOL:
            raise ValueError(f"density matrix not positive: min eigenvalue {eigs.min():.3e}")
        tr = float(np.trace(h).real)
        if abs(tr - 1.0) > DENSITY_TOL:
            raise ValueError(f"density matrix trace {tr!r} is not 1 within {DENSITY_TOL}")
        self.matrix = _frozen(h / tr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim})"


class PureState:
    """A unit vector (norm within ``UNIT_TOL`` of 1, then normalised)."""

    __slots__ = ("vector",)

    def __init__(self, vector):
        v = np.asarray(vector, dtype=complex).reshape(-1)
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise ValueError("state vector must be non-empty and finite")
        n = float(np.linalg.norm(v))
        if abs(n - 1.0) > UNIT_TOL:
            raise ValueError(f"state vector norm {n!r} is not 1 within {UNIT_TOL}")
        out = v / n
        out.setflags(write=False)
        self.vector = out

    @property
    def dim(self) -> int:
        return self.vector.size

    def density(self) -> DensityOperator:
        v = self.vector
        return DensityOperator(np.outer(v, v.conj()))

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"


@dataclass(frozen=True, init=False)
class SpectralCell:
    """A non-empty set of real eigenvalues grouped into one measurement cell.

    ``representative`` is the cell minimum — distinct for disjoint cells,
    so it can serve as a real-valued label.  ``mean`` is the value used
    when the cell stands in for a single (clustered) eigenvalue.
    """

    values: tuple

    def __init__(self, values: Iterable[float]):
        vals = tuple(sorted(float(v) for v in values))
        if not vals:
            raise ValueError("a spectral cell must contain at least one value")
        object.__setattr__(self, "values", vals)

    @property
    def representative(self) -> float:
        return self.values[0]

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    def __len__(self) -> int:
        return len(self.values)


class PVM:
    """A projector-valued measure: labelled cells with orthogonal
    projectors summing to the identity.

    Each projector must satisfy P = P* = P^2 within ``PVM_TOL``; distinct
    cells must be orthogonal and the whole family complete.
    """

    __slots__ = ("cells",)

    def __init__(self, cells: Iterable[tuple[object, np.ndarray]]):
        entries = []
        for label, proj in cells:
            p = matrix_of(proj)
            if float(np.abs(p - p.conj().T).max()) > PVM_TOL:
                raise ValueError(f"cell {label!r}: projector not Hermitian")
            if operator_norm(p @ p - p) > PVM_TOL:
                raise ValueError(f"cell {label!r}: projector not idempotent")
            entries.append((label, _frozen(p)))
        if not entries:
            raise ValueError("a PVM needs at least one cell")
        dim = entries[0][1].shape[0]
        if any(p.shape[0] != dim for _, p in entries):
            raise DimensionError("all projectors must share one dimension")
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                if operator_norm(entries[i][1] @ entries[j][1]) > PVM_TOL:
                    raise ValueError(
                        f"cells {entries[i][0]!r} and {entries[j][0]!r} are not orthogonal"
                    )
        total = sum(p for _, p in entries)
        if float(np.abs(total - np.eye(dim)).max()) > PVM_TOL:
            raise ValueError("projectors do not sum to the identity")
        self.cells = tuple(entries)

    @property
    def dim(self) -> int:
        return self.cells[0][1].shape[0]

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.cells)

    @property
    def projectors(self) -> tuple:
        return tuple(proj for _, proj in self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __repr__(self) -> str:
        return f"PVM(dim={self.dim}, cells={len(self.cells)})"


# ---------------------------------------------------------------------------
# deterministic eigen-machinery


def _fixed_phase_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """eigh with a deterministic phase: each eigenvector's largest-magnitude
    entry (lowest index on ties) is made real and positive."""
    w, v = np.linalg.eigh(matrix)
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        if pivot != 0:
            v[:, k] = col * (pivot.conjugate() / abs(pivot))
    return w, v


def _cluster_indices(eigenvalues: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group ascending eigenvalues into chains with successive gap <= tol."""
    groups: list[list[int]] = [[0]]
    for i in range(1, eigenvalues.size):
        if eigenvalues[i] - eigenvalues[i - 1] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [np.asarray(g) for g in groups]


def _resolve_cluster_tol(eigenvalues: np.ndarray, degeneracy_tol: float | None) -> float:
    if degeneracy_tol is None:
        return 1e-8 * max(1.0, float(np.abs(eigenvalues).max()))
    if degeneracy_tol < 0:
        raise ValueError(f"degeneracy_tol must be >= 0, got {degeneracy_tol}")
    return float(degeneracy_tol)


def _clustered_eigensystem(
    op: HermitianOperator, degeneracy_tol: float | None
) -> list[tuple[SpectralCell, np.ndarray]]:
    """(cell, isometry) pairs: isometry columns span the cell's eigenspace."""
    w, v = _fixed_phase_eigh(op.matrix)
    tol = _resolve_cluster_tol(w, degeneracy_tol)
    return [
        (SpectralCell(w[idx]), v[:, idx]) for idx in _cluster_indices(w, tol)
    ]


# ---------------------------------------------------------------------------
# observables and spectral calculus


def observable_from_distribution(dist: Distribution) -> tuple[HermitianOperator, PVM]:
    """Diagonal operator carrying a classical law, plus its eigen-PVM.

    The operator is diag(support) on C^len(support); the PVM has one
    singleton cell per support value, labelled by that value's cell.
    """
    d = len(dist)
    op = HermitianOperator(np.diag(np.asarray(dist.support, dtype=complex)))
    cells = []
    for i, x in enumerate(dist.support):
        p = np.zeros((d, d), dtype=complex)
        p[i, i] = 1.0
        cells.append((SpectralCell((x,)), p))
    return op, PVM(cells)


def density_from_distribution(dist: Distribution, pvm: PVM) -> DensityOperator:
    """The state sum_i p_i P_i.  Requires one PVM cell per support value."""
    if len(pvm) != len(dist):
        raise DimensionError(
            f"distribution has {len(dist)} values but the PVM has {len(pvm)} cells"
        )
    total = sum(p * proj for p, proj in zip(dist.probs, pvm.projectors))
    return DensityOperator(total)


def spectral_pvm(op: HermitianOperator, degeneracy_tol: float | None = None) -> PVM:
    """Spectral measure of ``op`` with eigenvalues clustered into cells.

    Successive eigenvalues with gap <= ``degeneracy_tol`` share a cell.
    The default tolerance is 1e-8 relative to the spectral radius
    (absolute when the radius is below 1); pass 0.0 to split everything
    except exact duplicates.
    """
    cells = _clustered_eigensystem(op, degeneracy_tol)
    return PVM(
        [(cell, iso @ iso.conj().T) for cell, iso in cells]
    )


def apply_function(f, op: HermitianOperator) -> HermitianOperator:
    """Spectral function calculus: f applied to the eigenvalues of ``op``.

    ``f`` may be a callable on reals or a mapping from (approximate)
    eigenvalues to values; mapping keys are matched within 1e-6.  Exact
    duplicate eigenvalues share a cell; distinct ones are kept apart.
    """
    cells = _clustered_eigensystem(op, 0.0)
    out = np.zeros_like(op.matrix)
    for cell, iso in cells:
        x = cell.mean
        try:
            y = _evaluate(f, x)
        except DomainError:
            raise
        except Exception as exc:
            raise DomainError(f"function undefined at eigenvalue {x!r}: {exc}") from exc
        out = out + float(y) * (iso @ iso.conj().T)
    return HermitianOperator(out)


def _evaluate(f, x: float) -> float:
    if isinstance(f, Mapping):
        best = None
        for key, val in f.items():
            gap = abs(float(key) - x)
            if best is None or gap < best[0]:
                best = (gap, val)
        if best is None or best[0] > 1e-6:
            raise DomainError(f"no table entry within 1e-6 of eigenvalue {x!r}")
        return float(best[1])
    return float(f(x))


def _as_density(state) -> DensityOperator:
    if isinstance(state, DensityOperator):
        return state
    if isinstance(state, PureState):
        return state.density()
    raise TypeError(f"expected DensityOperator or PureState, got {type(state).__name__}")


def _cell_label_value(label) -> float:
    if isinstance(label, SpectralCell):
        return label.representative
    if isinstance(label, numbers.Real):
        return float(label)
    raise ValueError(f"PVM cell label {label!r} has no real-valued representative")


def spectral_measure(state, pvm: PVM) -> Distribution:
    """Measurement law of a PVM in a state: prob(cell) = <P> in the state.

    The output support carries each cell's representative value (the cell
    minimum; equal to the eigenvalue itself for singleton cells).
    """
    rho = _as_density(state)
    if rho.dim != pvm.dim:
        raise DimensionError(f"state dim {rho.dim} != PVM dim {pvm.dim}")
    pairs = []
    for label, proj in pvm:
        p = float(np.trace(rho.matrix @ proj).real)
        if p < -1e-10:
            raise ValueError(f"cell {label!r}: negative probability {p!r}")
        pairs.append((_cell_label_value(label), max(p, 0.0)))
    pairs.sort(key=lambda t: t[0])
    return Distribution([x for x, _ in pairs], [p for _, p in pairs])


def trace_expectation(rho: DensityOperator, op: HermitianOperator) -> float:
    """Tr(rho A), asserted real: the imaginary residual must be <= 1e-10."""
    if rho.dim != op.dim:
        raise DimensionError(f"state dim {rho.dim} != operator dim {op.dim}")
    val = complex(np.trace(rho.matrix @ op.matrix))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"trace expectation has imaginary residual {val.imag:.3e}")
    return val.real


# ---------------------------------------------------------------------------
# joint measures for commuting pairs


def _joint_blocks(
    a: HermitianOperator,
    b: HermitianOperator,
    comm_tol: float,
    degeneracy_tol: float | None = None,
) -> list[tuple[SpectralCell, SpectralCell, np.ndarray]]:
    """Simultaneous block diagonalisation of a commuting pair.

    Yields (cell_of_a, cell_of_b, isometry) triples whose isometries are
    mutually orthogonal and jointly complete.  Inside each eigenspace of
    ``a`` the restriction of ``b`` is diagonalised, and the restricted
    eigenvalues are matched to the cells of ``b``'s own spectral measure.
    """
    if a.dim != b.dim:
        raise DimensionError(f"operator dims differ: {a.dim} vs {b.dim}")
    c = commutator_norm(a, b)
    if c > comm_tol:
        raise NonCommutingError(
            f"operators do not commute: ||[A,B]|| = {c:.3e} > {comm_tol:.1e}"
        )
    cells_b = _clustered_eigensystem(b, degeneracy_tol)
    scale_b = max(1.0, max(abs(v) for cell, _ in cells_b for v in cell.values))
    assign_tol = max(1e-6 * scale_b, 10.0 * comm_tol)

    out = []
    for cell_a, iso_a in _clustered_eigensystem(a, degeneracy_tol):
        restricted = iso_a.conj().T @ b.matrix @ iso_a
        w, v = _fixed_phase_eigh((restricted + restricted.conj().T) / 2)
        # bucket the restricted eigenvalues by the nearest cell of b
        buckets: dict[int, list[int]] = {}
        for col, beta in enumerate(w):
            gaps = [min(abs(beta - val) for val in cell.values) for cell, _ in cells_b]
            j = int(np.argmin(gaps))
            if gaps[j] > assign_tol:
                raise NonCommutingError(
                    f"restricted eigenvalue {beta!r} matches no cell of the second "
                    f"operator within {assign_tol:.1e}"
                )
            buckets.setdefault(j, []).append(col)
        for j in sorted(buckets):
            cols = np.asarray(buckets[j])
            out.append((cell_a, cells_b[j][0], iso_a @ v[:, cols]))
    return out


def joint_pvm(
    a: HermitianOperator,
    b: HermitianOperator,
    comm_tol: float = COMM_TOL,
) -> PVM:
    """Joint spectral measure of a commuting pair.

    Cells are labelled ``(cell_of_a, cell_of_b)`` and only cells of
    positive rank appear.  Each joint projector agrees with the product
    of the marginal projectors, and summing over the second index
    recovers the first operator's spectral projector exactly.

    Raises :class:`NonCommutingError` when ||[A,B]|| > ``comm_tol``.
    """
    blocks = _joint_blocks(a, b, comm_tol)
    return PVM(
        [((ca, cb), iso @ iso.conj().T) for ca, cb, iso in blocks]
    )


def common_refiner(
    a: HermitianOperator,
    b: HermitianOperator,
    comm_tol: float = COMM_TOL,
) -> tuple[HermitianOperator, dict, dict]:
    """A single operator C with integer spectrum plus value tables f1, f2
    such that applying f1 (resp. f2) to C reproduces ``a`` (resp. ``b``).

    The joint cells of the pair are enumerated 0..m-1; C = sum_k k*Q_k.
    """
    blocks = _joint_blocks(a, b, comm_tol)
    dim = a.dim
    c = np.zeros((dim, dim), dtype=complex)
    f1: dict[int, float] = {}
    f2: dict[int, float] = {}
    for k, (cell_a, cell_b, iso) in enumerate(blocks):
        c = c + float(k) * (iso @ iso.conj().T)
        f1[k] = cell_a.mean
        f2[k] = cell_b.mean
    return HermitianOperator(c), f1, f2


# ---------------------------------------------------------------------------
# GNS construction


class GNSRepresentation:
    """Result of a GNS construction over a matrix algebra and a state.

    Attributes
    ----------
    rep_dim:
        Dimension of the quotient representation space.
    images:
        One representation matrix per input basis element, expressed in
        an orthonormal basis of the quotient.
    cyclic_vector:
        The class of the algebra unit; a unit vector cyclic for the
        represented algebra.
    """

    __slots__ = ("rep_dim", "images", "cyclic_vector", "_basis_pinv", "_basis_vecs")

    def __init__(self, rep_dim, images, cyclic_vector, basis_pinv, basis_vecs):
        self.rep_dim = rep_dim
        self.images = images
        self.cyclic_vector = cyclic_vector
        self._basis_pinv = basis_pinv
        self._basis_vecs = basis_vecs

    def represent(self, element) -> np.ndarray:
        """Representation matrix of an arbitrary algebra element.

        The element must lie in the span of the input basis (residual
        <= 1e-8 relative); the representation acts linearly through the
        basis expansion.
        """
        m = matrix_of(element)
        vec = m.reshape(-1)
        coeff = self._basis_pinv @ vec
        resid = float(np.linalg.norm(self._basis_vecs @ coeff - vec))
        if resid > 1e-8 * max(1.0, float(np.linalg.norm(vec))):
            raise AlgebraError(f"element lies outside the algebra span (residual {resid:.3e})")
        out = np.zeros((self.rep_dim, self.rep_dim), dtype=complex)
        for c, img in zip(coeff, self.images):
            out = out + c * img
        return out


#: Gram eigenvalues at or below this threshold are treated as the null
#: space quotiented away by the GNS construction.
GNS_NULL_TOL = 1e-10
#: Relative residual allowed when checking the basis spans a unital
#: *-closed algebra.
GNS_SPAN_TOL = 1e-8


def gns_construct(algebra_basis: Sequence, omega: DensityOperator) -> GNSRepresentation:
    """GNS construction: quotient the algebra by the null space of the
    state's sesquilinear form and represent it by left multiplication.

    ``algebra_basis`` must span a unital *-closed algebra (identity,
    adjoints and pairwise products all within span, relative residual
    <= ``GNS_SPAN_TOL``).  The Gram matrix G[i,j] = Tr(rho a_i* a_j) is
    diagonalised; eigenvalues <= ``GNS_NULL_TOL`` span the null space.
    The returned cyclic vector Psi satisfies
    <Psi| pi(a) Psi> = Tr(rho a) for every basis element (checked to 1e-9).
    """
    basis = [matrix_of(m) for m in algebra_basis]
    if not basis:
        raise AlgebraError("empty algebra basis")
    d = basis[0].shape[0]
    if any(m.shape != (d, d) for m in basis):
        raise DimensionError("algebra basis matrices must share one shape")
    if omega.dim != d:
        raise DimensionError(f"state dim {omega.dim} != algebra dim {d}")

    n = len(basis)
    vecs = np.column_stack([m.reshape(-1) for m in basis])  # d^2 x n
    pinv = np.linalg.pinv(vecs)

    def _span_residual(m: np.ndarray) -> float:
        v = m.reshape(-1)
        resid = float(np.linalg.norm(vecs @ (pinv @ v) - v))
        return resid / max(1.0, float(np.linalg.norm(v)))

    eye = np.eye(d, dtype=complex)
    if _span_residual(eye) > GNS_SPAN_TOL:
        raise AlgebraError("identity is not in the span of the basis")
    for i, m in enumerate(basis):
        if _span_residual(m.conj().T) > GNS_SPAN_TOL:
            raise AlgebraError(f"basis element {i} has its adjoint outside the span")
    prod_coeff = np.empty((n, n, n), dtype=complex)  # [i][m][j]: a_i a_j = sum_m c a_m
    for i, mi in enumerate(basis):
        for j, mj in enumerate(basis):
            p = mi @ mj
            if _span_residual(p) > GNS_SPAN_TOL:
                raise AlgebraError(f"product of basis elements {i},{j} leaves the span")
            prod_coeff[i, :, j] = pinv @ p.reshape(-1)

    rho = omega.matrix
    gram = np.empty((n, n), dtype=complex)
    for i, mi in enumerate(basis):
        for j, mj in enumerate(basis):
            gram[i, j] = np.trace(rho @ mi.conj().T @ mj)
    gram = (gram + gram.conj().T) / 2

    lam, vv = np.linalg.eigh(gram)
    keep = lam > GNS_NULL_TOL
    rep_dim = int(keep.sum())
    if rep_dim == 0:
        raise AlgebraError("state annihilates the whole algebra")
    cols = vv[:, keep] / np.sqrt(lam[keep])  # n x rep_dim, orthonormal in <.,.>_omega

    images = []
    for i in range(n):
        action = prod_coeff[i] @ cols  # coefficients of a_i * e_l
        images.append(_frozen(cols.conj().T @ gram @ action))

    unit_coeff = pinv @ eye.reshape(-1)
    psi = cols.conj().T @ gram @ unit_coeff
    cyclic = PureState(psi)

    for i, (img, mi) in enumerate(zip(images, basis)):
        got = complex(psi.conj() @ (img @ psi))
        want = complex(np.trace(rho @ mi))
        if abs(got - want) > 1e-9:
            raise AlgebraError(
                f"state reproduction failed on basis element {i}: |{got!r} - {want!r}|"
            )
    orbit = np.column_stack([img @ psi for img in images])
    if np.linalg.matrix_rank(orbit, tol=1e-8) != rep_dim:
        raise AlgebraError("cyclic vector does not generate the representation space")

    return GNSRepresentation(rep_dim, tuple(images), cyclic, pinv, vecs)


# ---------------------------------------------------------------------------
# CHSH, dispersion


def chsh_beta(a1, a2, b1, b2, omega) -> float:
    """The CHSH functional Re Tr(omega (a1(b1+b2) + a2(b1-b2))).

    Requires ||a_i||, ||b_j|| <= 1 (within 1e-9) and every a_i to commute
    with every b_j (commutator norm <= 1e-9); violations raise
    :class:`HypothesisError`.
    """
    ops = [matrix_of(x) for x in (a1, a2, b1, b2)]
    names = ("a1", "a2", "b1", "b2")
    for name, m in zip(names, ops):
        nrm = operator_norm(m)
        if nrm > 1.0 + 1e-9:
            raise HypothesisError(f"||{name}|| = {nrm!r} exceeds 1")
    for i in (0, 1):
        for j in (2, 3):
            c = operator_norm(ops[i] @ ops[j] - ops[j] @ ops[i])
            if c > 1e-9:
                raise HypothesisError(
                    f"[{names[i]},{names[j]}] has norm {c:.3e}; the two sides must commute"
                )
    ma1, ma2, mb1, mb2 = ops
    rho = _as_density(omega)
    functional = ma1 @ (mb1 + mb2) + ma2 @ (mb1 - mb2)
    return float(np.trace(rho.matrix @ functional).real)


def dispersion(omega, op: HermitianOperator) -> float:
    """Variance of an observable in a state: <(A - <A>)^2>."""
    rho = _as_density(omega)
    if rho.dim != op.dim:
        raise DimensionError(f"state dim {rho.dim} != operator dim {op.dim}")
    m = float(np.trace(rho.matrix @ op.matrix).real)
    shifted = op.matrix - m * np.eye(op.dim)
    return float(np.trace(rho.matrix @ shifted @ shifted).real)


def dispersion_free_state(
    a: HermitianOperator,
    b: HermitianOperator,
    comm_tol: float = COMM_TOL,
) -> PureState:
    """A joint eigenvector of a commuting pair: dispersion-free for both.

    Deterministic: the first basis vector of the first joint block (cells
    ordered ascending in both eigenvalues).  Non-commuting input raises
    :class:`NonCommutingError`.
    """
    blocks = _joint_blocks(a, b, comm_tol)
    iso = blocks[0][2]
    return PureState(iso[:, 0])


# ---------------------------------------------------------------------------
# projector lattice


def _check_projector(p) -> np.ndarray:
    m = matrix_of(p)
    if float(np.abs(m - m.conj().T).max()) > PVM_TOL:
        raise ValueError("lattice input is not Hermitian")
    if operator_norm(m @ m - m) > PVM_TOL:
        raise ValueError("lattice input is not idempotent")
    return m


def _null_space_projector(psd: np.ndarray, threshold: float = 1e-9) -> np.ndarray:
    """Projector onto the null space of a PSD matrix (eigenvalues <= threshold)."""
    w, v = _fixed_phase_eigh((psd + psd.conj().T) / 2)
    cols = v[:, w <= threshold]
    if cols.shape[1] == 0:
        return np.zeros_like(psd)
    return cols @ cols.conj().T


def complement_projector(p) -> np.ndarray:
    """Orthocomplement I - P."""
    m = _check_projector(p)
    return np.eye(m.shape[0]) - m


def meet_projector(p, q) -> np.ndarray:
    """Projector onto range(P) ∩ range(Q).

    Commuting inputs use the product PQ; otherwise the intersection is
    the null space of (I-P) + (I-Q) (eigenvalue threshold 1e-9).
    """
    mp, mq = _check_projector(p), _check_projector(q)
    if mp.shape != mq.shape:
        raise DimensionError("projectors must share one dimension")
    if commutator_norm(mp, mq) <= 1e-10:
        prod = mp @ mq
        return (prod + prod.conj().T) / 2
    eye = np.eye(mp.shape[0])
    return _null_space_projector((eye - mp) + (eye - mq))


def join_projector(p, q) -> np.ndarray:
    """Projector onto range(P) + range(Q).

    Commuting inputs use P + Q - PQ; otherwise the range sum is the
    orthocomplement of the joint null space of P and Q.
    """
    mp, mq = _check_projector(p), _check_projector(q)
    if mp.shape != mq.shape:
        raise DimensionError("projectors must share one dimension")
    if commutator_norm(mp, mq) <= 1e-10:
        prod = mp @ mq
        out = mp + mq - (prod + prod.conj().T) / 2
        return out
    return np.eye(mp.shape[0]) - _null_space_projector(mp + mq)


def is_distributive_triple(p, q, r, tol: float = 1e-9) -> bool:
    """Whether P ∧ (Q ∨ R) = (P ∧ Q) ∨ (P ∧ R) within ``tol``."""
    left = meet_projector(p, join_projector(q, r))
    right = join_projector(meet_projector(p, q), meet_projector(p, r))
    return operator_norm(left - right) <= tol


def is_orthomodular_pair(p, q, tol: float = 1e-9) -> bool:
    """The orthomodular law for the pair: if P <= Q then
    Q = P ∨ (Q ∧ P^c).  Pairs with P not below Q satisfy it vacuously."""
    mp, mq = _check_projector(p), _check_projector(q)
    if operator_norm(mq @ mp - mp) > tol:  # P <= Q fails
        return True
    recovered = join_projector(mp, meet_projector(mq, complement_projector(mp)))
    return operator_norm(recovered - mq) <= tol
