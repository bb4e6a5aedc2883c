"""Circulant matrices, their Fourier diagonalization, and the cyclic-shift
averaging channel.

A circulant matrix C(z) = sum_k z_k P^k is a polynomial in the cyclic shift
P (ones on the superdiagonal and in the lower-left corner), so C[r, c] =
z[(c - r) mod n].  The discrete Fourier basis diagonalizes every circulant,
with eigenvalues lambda_j = sum_k z_k w^(jk), w = exp(2 pi i / n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import StateTuple, factor_gram, gram_matrix
from .errors import NumericalError, ValidationError

_CHANNEL_TOL = 1e-12


def cyclic_shift(n: int) -> np.ndarray:
    """The n x n cyclic shift matrix P with P[r, r+1 mod n] = 1."""
    if n < 1:
        raise ValidationError(f"order must be positive, got {n}")
    p = np.zeros((n, n), dtype=complex)
    for r in range(n):
        p[r, (r + 1) % n] = 1.0
    return p


def circulant_matrix(coeffs) -> np.ndarray:
    """Circulant matrix with first row ``coeffs``; row r is row 0 shifted."""
    z = np.asarray(coeffs, dtype=complex)
    if z.ndim != 1 or z.size == 0:
        raise ValidationError("coefficients must form a non-empty vector")
    n = z.size
    out = np.empty((n, n), dtype=complex)
    for r in range(n):
        out[r] = np.roll(z, r)
    return out


def circulant_eigenvalues(coeffs) -> np.ndarray:
    """Eigenvalues lambda_j = sum_k z_k w^(jk) in index order j = 0..n-1.

    Evaluated by direct O(n^2) summation; the suites never need large n.
    """
    z = np.asarray(coeffs, dtype=complex)
    n = z.size
    j = np.arange(n)
    omega_powers = np.exp(2j * np.pi * np.outer(j, j) / n)
    return omega_powers @ z


def fourier_basis(n: int) -> np.ndarray:
    """Columns f_k = (1/sqrt(n)) (w^0, w^k, ..., w^((n-1)k))^T."""
    if n < 1:
        raise ValidationError(f"order must be positive, got {n}")
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)


@dataclass(frozen=True)
class CirculantGramCheck:
    ok: bool
    reason: str | None = None


def is_circulant_gram(coeffs, tol: float = 1e-9) -> CirculantGramCheck:
    """Decide whether C(z) is the Gram matrix of some unit-vector tuple.

    Requires z_0 = 1, conjugate symmetry conj(z_k) = z_(n-k), and all
    eigenvalues >= -tol.  Returns the verdict with a reason on failure.
    """
    z = np.asarray(coeffs, dtype=complex)
    n = z.size
    if n == 0:
        raise ValidationError("coefficients must form a non-empty vector")
    if abs(z[0] - 1.0) > tol:
        return CirculantGramCheck(False, f"z_0 = {z[0]!r} deviates from 1")
    sym = np.abs(np.conj(z[1:]) - z[:0:-1])
    if sym.size and float(np.max(sym)) > tol:
        k = int(np.argmax(sym)) + 1
        return CirculantGramCheck(
            False, f"conjugate symmetry fails at k = {k}: residual {float(np.max(sym))!r}"
        )
    eigs = circulant_eigenvalues(z)
    min_eig = float(np.min(eigs.real))
    if min_eig < -tol:
        return CirculantGramCheck(False, f"negative eigenvalue {min_eig!r}")
    return CirculantGramCheck(True)


def circulant_channel_apply(mat: np.ndarray) -> np.ndarray:
    """Average X over cyclic-shift conjugations: (1/n) sum_k P^k X P^(-k).

    The result is the orthogonal projection of X onto circulant matrices.
    Two equivalent forms are evaluated (shift averaging and dephasing in the
    Fourier basis) and must agree to 1e-12.
    """
    x = np.asarray(mat, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValidationError("channel input must be a square matrix")
    n = x.shape[0]
    p = cyclic_shift(n)
    acc = x.copy()
    shifted = x
    for _ in range(n - 1):
        shifted = p @ shifted @ p.conj().T
        acc += shifted
    avg = acc / n

    f = fourier_basis(n)
    dephased = f @ np.diag(np.diag(f.conj().T @ x @ f)) @ f.conj().T
    if float(np.max(np.abs(avg - dephased))) > _CHANNEL_TOL * max(1.0, float(np.max(np.abs(x)))):
        raise NumericalError("shift-average and Fourier-dephasing forms disagree")
    return avg


def channel_choi_matrix(n: int) -> np.ndarray:
    """Choi matrix (1/n) sum_k |f_k><f_k| (x) conj(|f_k><f_k|) of the channel."""
    f = fourier_basis(n)
    choi = np.zeros((n * n, n * n), dtype=complex)
    for k in range(n):
        proj = np.outer(f[:, k], f[:, k].conj())
        choi += np.kron(proj, proj.conj())
    return choi / n


@dataclass(frozen=True)
class CirculantizeResult:
    """Outcome of pushing a pure tuple onto a circulant Gram matrix.

    ``gram`` is the circulant Gram, ``phases`` the gauge angles applied to
    the input, ``states`` a realized tuple whose dimension is the numerical
    rank of ``gram`` (it need not match the input dimension).
    """

    gram: np.ndarray
    phases: np.ndarray
    states: StateTuple
    rank: int
    invariant_before: complex
    invariant_after: complex


def circulantize(states: StateTuple, overlap_tol: float = 1e-12) -> CirculantizeResult:
    """Rephase a pure tuple and average its Gram onto a circulant one.

    Gauge phases alpha_k (alpha_1 = 0) make all consecutive overlaps share
    the phase arg(Delta)/n; averaging over cyclic-shift conjugations then
    yields a circulant Gram with constant superdiagonal
    (mean_k r_k) * exp(i arg(Delta)/n).  The invariant's argument is
    preserved and its modulus does not decrease (arithmetic vs geometric
    mean of the overlap moduli).
    """
    if not states.all_pure:
        raise ValidationError("circulantization requires a pure tuple")
    n = len(states)
    gram = gram_matrix(states)
    overlaps = np.array([gram[k, (k + 1) % n] for k in range(n)])
    if float(np.min(np.abs(overlaps))) <= overlap_tol:
        k = int(np.argmin(np.abs(overlaps)))
        raise ValidationError(
            f"consecutive overlap {k} -> {(k + 1) % n} vanishes; cycle is degenerate"
        )
    delta = complex(np.prod(overlaps))
    if abs(delta) <= overlap_tol:
        raise ValidationError("cycle invariant vanishes; no phase to distribute")
    theta = float(np.mod(np.angle(delta), 2.0 * np.pi))
    thetas = np.angle(overlaps)

    phases = np.zeros(n)
    for k in range(n - 1):
        phases[k + 1] = phases[k] + theta / n - thetas[k]
    gauge = np.exp(1j * phases)
    rephased = np.outer(gauge.conj(), gauge) * gram

    circ_gram = circulant_channel_apply(rephased)
    realized = factor_gram(circ_gram, tol=1e-10)
    after = complex(np.prod([circ_gram[k, (k + 1) % n] for k in range(n)]))
    return CirculantizeResult(
        gram=circ_gram,
        phases=phases,
        states=realized,
        rank=realized.dim,
        invariant_before=delta,
        invariant_after=after,
    )
