"""Dense complex linear algebra substrate: states, sampling, Gram matrices.

All matrices are small (at most a few hundred rows) double-precision complex
ndarrays.  Pure states are stored as unit vectors and projected on demand;
mixed states are stored as density matrices.  Every sampling routine takes an
explicit generator (or an integer seed), never global state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# Default tolerances used throughout the package.
NORM_TOL = 1e-12       # unit-norm and Hermiticity checks
PSD_FLOOR = 1e-9       # eigenvalue floor for positive semidefinite checks
EQ_TOL = 1e-8          # equality of invariant values


def make_rng(seed) -> np.random.Generator:
    """Return a counter-based (Philox) generator for ``seed``.

    ``seed`` may already be a ``Generator``, in which case it is returned
    unchanged.  Philox streams are splittable via :meth:`Generator.spawn`,
    which is how parallel suites derive independent substreams.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def split_rng(rng: np.random.Generator, n: int) -> list[np.random.Generator]:
    """Split ``rng`` into ``n`` independent child streams (fixed order)."""
    return rng.spawn(n)


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


def check_unit_vector(vec: np.ndarray, tol: float = NORM_TOL, path: str | None = None) -> np.ndarray:
    """Validate and return a 1-D complex unit vector."""
    v = np.asarray(vec, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError("state vector must be a non-empty 1-D array", path)
    if not np.all(np.isfinite(v)):
        raise ValidationError("state vector has non-finite entries", path)
    norm_sq = float(np.vdot(v, v).real)
    if abs(norm_sq - 1.0) > tol:
        raise ValidationError(
            f"state vector is not normalized: sum |amplitude|^2 = {norm_sq!r}", path
        )
    return v


def check_density_matrix(mat: np.ndarray, tol: float = NORM_TOL,
                         eig_floor: float = 1e-10, path: str | None = None) -> np.ndarray:
    """Validate and return a d x d density matrix.

    Checks Hermiticity and unit trace at ``tol`` and an eigenvalue floor of
    ``-eig_floor``.
    """
    m = np.asarray(mat, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValidationError("density matrix must be square and non-empty", path)
    if not np.all(np.isfinite(m)):
        raise ValidationError("density matrix has non-finite entries", path)
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > tol:
        raise ValidationError(f"density matrix is not Hermitian: max |A - A^dag| = {herm!r}", path)
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"density matrix trace deviates from 1: trace = {tr!r}", path)
    eigs = np.linalg.eigvalsh(m)
    if eigs[0] < -eig_floor:
        raise ValidationError(
            f"density matrix has a negative eigenvalue: min eigenvalue = {eigs[0]!r}", path
        )
    return m


@dataclass(frozen=True)
class StateTuple:
    """Ordered tuple of quantum states sharing one Hilbert space dimension.

    Each member is either a unit vector (1-D array, pure state) or a density
    matrix (2-D array, mixed state).  Arrays are stored read-only.
    """

    dim: int
    states: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.states) == 0:
            raise ValidationError("state tuple must contain at least one state")
        for k, s in enumerate(self.states):
            d = s.shape[0]
            if d != self.dim:
                raise ValidationError(
                    f"state {k} has dimension {d}, expected {self.dim}", f"/states/{k}"
                )

    @classmethod
    def from_states(cls, states, dim: int | None = None, tol: float = NORM_TOL) -> "StateTuple":
        """Build a validated tuple from vectors and/or density matrices."""
        checked = []
        for k, s in enumerate(states):
            arr = np.asarray(s, dtype=complex)
            path = f"/states/{k}"
            if arr.ndim == 1:
                checked.append(_freeze(check_unit_vector(arr, tol, path)))
            elif arr.ndim == 2:
                checked.append(_freeze(check_density_matrix(arr, tol, path=path)))
            else:
                raise ValidationError("state must be a vector or a square matrix", path)
        if dim is None:
            dim = checked[0].shape[0]
        return cls(dim=int(dim), states=tuple(checked))

    @classmethod
    def from_vectors(cls, vectors, tol: float = NORM_TOL) -> "StateTuple":
        vecs = [np.asarray(v, dtype=complex) for v in vectors]
        for k, v in enumerate(vecs):
            if v.ndim != 1:
                raise ValidationError("expected a 1-D state vector", f"/states/{k}")
        return cls.from_states(vecs, tol=tol)

    def __len__(self) -> int:
        return len(self.states)

    def is_pure(self, k: int) -> bool:
        return self.states[k].ndim == 1

    @property
    def all_pure(self) -> bool:
        return all(s.ndim == 1 for s in self.states)

    def vector(self, k: int) -> np.ndarray:
        if not self.is_pure(k):
            raise ValidationError(f"state {k} is mixed; no vector representation")
        return self.states[k]

    def vectors(self) -> np.ndarray:
        """Stack all members as rows of an (n, d) array; pure tuples only."""
        if not self.all_pure:
            raise ValidationError("tuple contains a mixed state; expected all pure")
        return np.array([self.states[k] for k in range(len(self))])

    def density(self, k: int) -> np.ndarray:
        s = self.states[k]
        if s.ndim == 1:
            return np.outer(s, s.conj())
        return s

    def densities(self) -> list[np.ndarray]:
        return [self.density(k) for k in range(len(self))]

    def subtuple(self, indices) -> "StateTuple":
        """Re-indexed tuple (repetition allowed); indices are 0-based."""
        picked = []
        for i in indices:
            if not 0 <= i < len(self):
                raise ValidationError(f"index {i} out of range for tuple of length {len(self)}")
            picked.append(self.states[i])
        return StateTuple(dim=self.dim, states=tuple(picked))

    def apply_unitary(self, unitary: np.ndarray) -> "StateTuple":
        """Image of the tuple under one unitary (U psi, or U rho U^dag)."""
        u = np.asarray(unitary, dtype=complex)
        out = []
        for s in self.states:
            if s.ndim == 1:
                out.append(_freeze(u @ s))
            else:
                out.append(_freeze(u @ s @ u.conj().T))
        return StateTuple(dim=u.shape[0], states=tuple(out))


def haar_unit_vector(d: int, rng) -> np.ndarray:
    """Draw one Haar-distributed unit vector in C^d.

    A vector of i.i.d. standard complex Gaussians is normalized, which is
    exactly Haar on the unit sphere.
    """
    if d < 1:
        raise ValidationError(f"dimension must be positive, got {d}")
    gen = make_rng(rng)
    v = gen.standard_normal(d) + 1j * gen.standard_normal(d)
    return v / np.linalg.norm(v)


def haar_unitary(d: int, rng) -> np.ndarray:
    """Draw one Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    if d < 1:
        raise ValidationError(f"dimension must be positive, got {d}")
    gen = make_rng(rng)
    z = (gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[np.newaxis, :]


def random_density(d: int, rank: int, rng) -> np.ndarray:
    """Draw a random rank-``rank`` density matrix W W^dag / tr(W W^dag)."""
    if d < 1:
        raise ValidationError(f"dimension must be positive, got {d}")
    if rank < 1 or rank > d:
        raise ValidationError(f"rank must satisfy 1 <= rank <= {d}, got {rank}")
    gen = make_rng(rng)
    w = gen.standard_normal((d, rank)) + 1j * gen.standard_normal((d, rank))
    m = w @ w.conj().T
    return m / np.trace(m).real


def gram_matrix(states: StateTuple) -> np.ndarray:
    """Gram matrix G[i, j] = <psi_i | psi_j> of a pure tuple."""
    v = states.vectors()
    return v.conj() @ v.T


def factor_gram(gram: np.ndarray, tol: float = 1e-10) -> StateTuple:
    """Realize a PSD Gram matrix with unit diagonal by unit vectors.

    Eigendecomposes ``gram``, clips eigenvalues in ``[-tol, 0]`` to zero, and
    returns n unit vectors in C^r with r the numerical rank.  The Gram matrix
    of the result reproduces the input within ``10 * tol`` in max norm.

    Raises
    ------
    ValidationError
        If an eigenvalue falls below ``-tol`` (not PSD) or a diagonal entry
        deviates from 1 by more than ``tol`` (not normalized).
    """
    g = np.asarray(gram, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValidationError("Gram matrix must be square")
    herm = float(np.max(np.abs(g - g.conj().T)))
    if herm > tol:
        raise ValidationError(f"Gram matrix is not Hermitian: max |G - G^dag| = {herm!r}")
    diag_dev = float(np.max(np.abs(np.diag(g) - 1.0)))
    if diag_dev > tol:
        raise ValidationError(f"Gram diagonal deviates from 1 by {diag_dev!r}")
    eigvals, eigvecs = np.linalg.eigh(g)
    if eigvals[0] < -tol:
        raise ValidationError(f"Gram matrix is not PSD: min eigenvalue = {eigvals[0]!r}")
    eigvals = np.clip(eigvals, 0.0, None)
    keep = eigvals > tol
    if not np.any(keep):
        raise ValidationError("Gram matrix has numerical rank 0")
    lam = eigvals[keep]
    # rows of `factors` are the realized vectors' coordinates: X = Lambda^(1/2) V^dag
    factors = np.sqrt(lam)[:, np.newaxis] * eigvecs[:, keep].conj().T
    vectors = []
    for j in range(g.shape[0]):
        v = factors[:, j]
        vectors.append(v / np.linalg.norm(v))
    return StateTuple.from_vectors(vectors)


def _split_dims(dim: int, dim_a: int, dim_b: int):
    if dim_a < 1 or dim_b < 1 or dim_a * dim_b != dim:
        raise ValidationError(
            f"matrix of dimension {dim} does not factor as {dim_a} x {dim_b}"
        )


def partial_trace(rho: np.ndarray, keep: str, dim_a: int, dim_b: int) -> np.ndarray:
    """Marginal of a bipartite density matrix.

    ``keep`` selects the surviving subsystem: ``"A"`` traces out B, ``"B"``
    traces out A.
    """
    m = np.asarray(rho, dtype=complex)
    _split_dims(m.shape[0], dim_a, dim_b)
    r = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ajbj->ab", r)
    if keep == "B":
        return np.einsum("jajb->ab", r)
    raise ValidationError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(rho: np.ndarray, which: str, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose of one tensor factor of a bipartite matrix.

    The output is Hermitian with the same trace but need not be positive.
    """
    m = np.asarray(rho, dtype=complex)
    _split_dims(m.shape[0], dim_a, dim_b)
    r = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if which == "A":
        out = np.einsum("abcd->cbad", r)
    elif which == "B":
        out = np.einsum("abcd->adcb", r)
    else:
        raise ValidationError(f"which must be 'A' or 'B', got {which!r}")
    return out.reshape(dim_a * dim_b, dim_a * dim_b)
