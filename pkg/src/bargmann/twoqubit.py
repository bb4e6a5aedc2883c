"""Qubit Bloch recurrences, the second-order quadratic witness, and the
two-qubit local-unitary and entanglement criteria.

For qubits the ordered product rho_1 ... rho_n stays inside the span of
{1, sigma_x, sigma_y, sigma_z}, so the invariant follows from a cheap
recurrence on four complex coefficients.  On two qubits, 18 trace
polynomials in (rho_AB, rho_A (x) 1, 1 (x) rho_B) separate local-unitary
orbits, and seven of them decide entanglement, with the partial-transpose
determinant as an exact oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import StateTuple, partial_trace, partial_transpose
from .errors import NumericalError, ValidationError
from .invariants import bargmann

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

BOUNDARY_TOL = 1e-10
_REAL_RESIDUE_TOL = 1e-10

# Trace words over (X0, X1, X2) = (rho_AB, rho_A (x) 1, 1 (x) rho_B) whose
# values are constant on local-unitary orbits and jointly complete for them.
# Words 1..12 are real by Hermiticity identities; words 13..18 carry a
# generically nonzero imaginary part and enter through their real part.
LU_WORDS = (
    (0, 1),
    (0, 2),
    (0, 1, 2),
    (0, 0),
    (0, 0, 1, 2),
    (0, 0, 0),
    (0, 0, 0, 1),
    (0, 0, 0, 2),
    (0, 0, 0, 1, 2),
    (0, 0, 0, 0),
    (0, 0, 1, 0, 0, 1),
    (0, 0, 2, 0, 0, 2),
    (0, 1, 2, 0, 0, 1),
    (0, 1, 2, 0, 0, 2),
    (0, 1, 2, 0, 0, 0, 1),
    (0, 1, 2, 0, 0, 0, 2),
    (0, 1, 0, 0, 1, 0, 0, 0, 1),
    (0, 2, 0, 0, 2, 0, 0, 0, 2),
)


def _as_qubit_density(state) -> np.ndarray:
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        if arr.shape[0] != 2:
            raise ValidationError(f"expected a qubit, got dimension {arr.shape[0]}")
        return np.outer(arr, arr.conj())
    if arr.shape != (2, 2):
        raise ValidationError(f"expected a qubit, got shape {arr.shape}")
    return arr


def _as_two_qubit(rho) -> np.ndarray:
    arr = np.asarray(rho, dtype=complex)
    if arr.shape != (4, 4):
        raise ValidationError(f"expected a two-qubit state, got shape {arr.shape}")
    return arr


def bloch_decompose(rho) -> np.ndarray:
    """Bloch vector r with r_k = tr(rho sigma_k); reconstruction is exact."""
    mat = _as_qubit_density(rho)
    return np.array([np.trace(mat @ sigma).real for sigma in PAULI])


def bloch_density(r) -> np.ndarray:
    """Qubit density (1 + r . sigma) / 2 from a Bloch vector with |r| <= 1."""
    vec = np.asarray(r, dtype=float)
    if vec.shape != (3,):
        raise ValidationError(f"Bloch vector must have 3 components, got {vec.shape}")
    if np.linalg.norm(vec) > 1.0 + 1e-12:
        raise ValidationError(f"Bloch vector has length {np.linalg.norm(vec)!r} > 1")
    out = np.eye(2, dtype=complex)
    for comp, sigma in zip(vec, PAULI):
        out += comp * sigma
    return out / 2.0


@dataclass(frozen=True)
class ProductCoefficients:
    """Pauli coefficients of the ordered product: 2^-n (p0 1 + p . sigma)."""

    order: int
    p0: complex
    p: np.ndarray

    @property
    def invariant(self) -> complex:
        return complex(2.0 ** (1 - self.order) * self.p0)


def _bloch_vectors(states: StateTuple) -> list[np.ndarray]:
    if states.dim != 2:
        raise ValidationError(f"expected qubits, got dimension {states.dim}")
    return [bloch_decompose(states.density(k)) for k in range(len(states))]


def product_rep(states: StateTuple) -> ProductCoefficients:
    """Pauli coefficients of rho_1 ... rho_n by the Bloch recurrence.

    Starts from p0 = 1, p = r_1 and applies
        p0 <- p0 + <p, r>,   p <- p0_old r + p + i (p x r)
    per factor.  The implied invariant 2^(1-n) p0 is cross-checked against
    the dense product trace to 1e-10.
    """
    bloch = _bloch_vectors(states)
    p0 = complex(1.0)
    p = bloch[0].astype(complex)
    for r in bloch[1:]:
        p0_next = p0 + p @ r
        p = p0 * r + p + 1j * np.cross(p, r)
        p0 = p0_next
    coeffs = ProductCoefficients(order=len(states), p0=p0, p=p)
    dense = bargmann(states)
    if abs(coeffs.invariant - dense) > 1e-10:
        raise NumericalError(
            f"Bloch recurrence {coeffs.invariant!r} disagrees with dense {dense!r}"
        )
    return coeffs


def _recurrence_real_imag(bloch: list[np.ndarray]):
    """Real/imaginary split of the recurrence: returns (a0, b0) with
    p0 = a0 + i b0 carried in real arithmetic."""
    a0, b0 = 1.0, 0.0
    a = bloch[0].astype(float).copy()
    b = np.zeros(3)
    for r in bloch[1:]:
        a0_next = a0 + a @ r
        b0_next = b0 + b @ r
        a_next = a0 * r + a - np.cross(b, r)
        b_next = b0 * r + b + np.cross(a, r)
        a0, b0, a, b = a0_next, b0_next, a_next, b_next
    return a0, b0


def pairwise_invariants(states: StateTuple) -> np.ndarray:
    """Matrix of second-order invariants D[i, j] = tr(rho_i rho_j)."""
    densities = states.densities()
    n = len(densities)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            val = np.trace(densities[i] @ densities[j]).real
            out[i, j] = out[j, i] = val
    return out


def _vectors_from_gram(matrix: np.ndarray) -> list[np.ndarray]:
    """Embed a rank <= 3 real PSD Gram matrix as vectors in R^3."""
    eigvals, eigvecs = np.linalg.eigh(matrix)
    order = np.argsort(eigvals)[::-1][:3]
    lam = np.clip(eigvals[order], 0.0, None)
    coords = np.sqrt(lam)[:, np.newaxis] * eigvecs[:, order].T
    padded = np.zeros((3, matrix.shape[0]))
    padded[: coords.shape[0]] = coords
    return [padded[:, k] for k in range(matrix.shape[0])]


@dataclass(frozen=True)
class QuadraticWitness:
    """Coefficients of z^2 - 2 p z + q = 0 satisfied by the invariant.

    ``p`` and ``q`` are computed purely from second-order invariants, which
    determine the invariant up to complex conjugation (the sign of its
    imaginary part stays hidden); ``p_direct``/``q_direct`` come from the
    Bloch recurrence on the actual states, and ``residual`` evaluates the
    quadratic at the dense invariant.
    """

    p: float
    q: float
    p_direct: float
    q_direct: float
    residual: float
    invariant: complex


def imaginarity_quadratic(states: StateTuple) -> QuadraticWitness:
    """Quadratic satisfied by the qubit tuple invariant, from pair data.

    The Bloch inner products follow from the second-order invariants via
    <r_i, r_j> = 2 tr(rho_i rho_j) - 1; factoring that Gram matrix into
    vectors in R^3 and replaying the product recurrence yields
    p = Re(Delta) and q = |Delta|^2 without access to the states' phases.
    """
    bloch = _bloch_vectors(states)
    n = len(states)
    a0, b0 = _recurrence_real_imag(bloch)
    p_direct = 2.0 ** (1 - n) * a0
    q_direct = 4.0 ** (1 - n) * (a0 * a0 + b0 * b0)

    gram = 2.0 * pairwise_invariants(states) - 1.0
    a0_pair, b0_pair = _recurrence_real_imag(_vectors_from_gram(gram))
    p_pair = 2.0 ** (1 - n) * a0_pair
    q_pair = 4.0 ** (1 - n) * (a0_pair * a0_pair + b0_pair * b0_pair)

    delta = bargmann(states)
    residual = abs(delta * delta - 2.0 * p_pair * delta + q_pair)
    return QuadraticWitness(
        p=p_pair, q=q_pair, p_direct=p_direct, q_direct=q_direct,
        residual=residual, invariant=delta,
    )


def lu_invariants(rho_ab) -> np.ndarray:
    """The 18 local-unitary invariant traces of a two-qubit state.

    Evaluates the fixed trace words in X0 = rho_AB, X1 = rho_A (x) 1 and
    X2 = 1 (x) rho_B and returns the real parts.  The first twelve values
    are real by Hermiticity identities and their imaginary residue is
    verified against 1e-10; the remaining six are genuinely complex for
    generic states, and only their (still invariant) real part is kept.
    """
    rho = _as_two_qubit(rho_ab)
    rho_a = partial_trace(rho, "A", 2, 2)
    rho_b = partial_trace(rho, "B", 2, 2)
    operators = (
        rho,
        np.kron(rho_a, np.eye(2, dtype=complex)),
        np.kron(np.eye(2, dtype=complex), rho_b),
    )
    values = np.empty(18)
    for k, word in enumerate(LU_WORDS):
        acc = operators[word[0]]
        for idx in word[1:]:
            acc = acc @ operators[idx]
        trace = complex(np.trace(acc))
        if k < 12 and abs(trace.imag) > _REAL_RESIDUE_TOL:
            raise NumericalError(
                f"invariant word {word} has imaginary residue {trace.imag!r}"
            )
        values[k] = trace.real
    return values


@dataclass(frozen=True)
class EntanglementVerdict:
    lhs: float
    entangled: bool | None  # None marks the boundary-indeterminate band


def entangled_by_invariants(rho_ab, tol_boundary: float = BOUNDARY_TOL) -> EntanglementVerdict:
    """Entanglement decision from seven of the local-unitary invariants.

    The state is entangled exactly when
        6 (B1 + B2 - B1 B2 - B4 - B10) + 12 (B5 - B3) + 3 B4^2 + 4 B6 < 1.
    Values within ``tol_boundary`` of 1 are reported as indeterminate rather
    than forced into a class.
    """
    b = lu_invariants(rho_ab)
    b1, b2, b3, b4, b5, b6, b10 = b[0], b[1], b[2], b[3], b[4], b[5], b[9]
    lhs = 6.0 * (b1 + b2 - b1 * b2 - b4 - b10) + 12.0 * (b5 - b3) + 3.0 * b4 * b4 + 4.0 * b6
    if abs(lhs - 1.0) <= tol_boundary:
        return EntanglementVerdict(lhs=lhs, entangled=None)
    return EntanglementVerdict(lhs=lhs, entangled=bool(lhs < 1.0))


@dataclass(frozen=True)
class PptVerdict:
    det_gamma: float
    entangled: bool


def ppt_oracle(rho_ab, tol_boundary: float = BOUNDARY_TOL) -> PptVerdict:
    """Exact two-qubit entanglement oracle: det of the partial transpose.

    The state is entangled exactly when det(rho^Gamma) < 0.  The determinant
    is the product of the Hermitian partial transpose's eigenvalues.
    """
    rho = _as_two_qubit(rho_ab)
    gamma = partial_transpose(rho, "B", 2, 2)
    det = float(np.prod(np.linalg.eigvalsh(gamma)))
    return PptVerdict(det_gamma=det, entangled=bool(det < -tol_boundary))


def lu_similar(rho_ab, sigma_ab, tol: float = 1e-8) -> bool:
    """Local-unitary equivalence test: all 18 invariants agree within tol."""
    diff = np.abs(lu_invariants(rho_ab) - lu_invariants(sigma_ab))
    return bool(np.max(diff) <= tol)
