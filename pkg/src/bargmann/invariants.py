"""Bargmann invariants of state tuples and the Haar overlap distribution.

The n-th order Bargmann invariant of a tuple (rho_1, ..., rho_n) is the trace
of the ordered product tr(rho_1 ... rho_n).  For pure tuples it factorizes
into the cyclic product of consecutive Gram entries, which is the cheap path
used here; the dense product is kept as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import StateTuple, gram_matrix, make_rng
from .errors import NumericalError, ValidationError

_CROSS_CHECK_TOL = 1e-10


def _dense_product_trace(states: StateTuple) -> complex:
    # left-to-right accumulation, no re-association
    densities = states.densities()
    acc = densities[0]
    for rho in densities[1:]:
        acc = acc @ rho
    return complex(np.trace(acc))


def bargmann(states: StateTuple) -> complex:
    """Bargmann invariant tr(rho_1 ... rho_n) of the tuple, in cycle order.

    For all-pure tuples the value is the product of consecutive overlaps
    <psi_k | psi_(k+1)> around the cycle; the dense projector product is then
    computed as well and the two must agree to 1e-10.

    Examples
    --------
    >>> t = StateTuple.from_vectors([[1, 0], [2**-0.5, 2**-0.5], [0, 1]])
    >>> abs(bargmann(t))   # an orthogonal link kills the cycle
    0.0
    """
    if not states.all_pure:
        return _dense_product_trace(states)
    gram = gram_matrix(states)
    n = len(states)
    value = complex(1.0)
    for k in range(n):
        value *= complex(gram[k, (k + 1) % n])
    dense = _dense_product_trace(states)
    if abs(value - dense) > _CROSS_CHECK_TOL * max(1.0, abs(value)):
        raise NumericalError(
            f"overlap-product and dense-trace paths disagree: {value!r} vs {dense!r}"
        )
    return value


def n_product(states: StateTuple, indices) -> complex:
    """Invariant of the re-indexed sub-tuple tr(psi_i1 ... psi_ik).

    ``indices`` is a non-empty sequence of 0-based member indices; repetition
    is allowed.
    """
    idx = list(indices)
    if len(idx) == 0:
        raise ValidationError("index word must be non-empty")
    return bargmann(states.subtuple(idx))


def gram_word_product(gram: np.ndarray, indices) -> complex:
    """Cyclic product of Gram entries along an index word (pure tuples)."""
    idx = list(indices)
    if len(idx) == 0:
        raise ValidationError("index word must be non-empty")
    value = complex(1.0)
    for k in range(len(idx)):
        value *= gram[idx[k], idx[(k + 1) % len(idx)]]
    return complex(value)


def inner_product_density(d: int, z: complex) -> float:
    """Joint density of <u|v> for independent Haar unit vectors in C^d.

    f(z) = (d - 1) / pi * (1 - |z|^2)^(d - 2) on the closed unit disk and 0
    outside.  The boundary |z| = 1 is included as written, so f = 1/pi there
    for d = 2 and 0 for d >= 3.
    """
    if d < 2:
        raise ValidationError(f"dimension must be at least 2, got {d}")
    r_sq = abs(z) ** 2
    if r_sq > 1.0:
        return 0.0
    return (d - 1) / math.pi * (1.0 - r_sq) ** (d - 2)


def marginal_density(d: int, t: float) -> float:
    """Marginal density of Re <u|v> (equals that of Im <u|v>) on [-1, 1]."""
    if d < 2:
        raise ValidationError(f"dimension must be at least 2, got {d}")
    if abs(t) > 1.0:
        return 0.0
    coeff = math.gamma(d) / (math.sqrt(math.pi) * math.gamma(d - 0.5))
    return coeff * (1.0 - t * t) ** (d - 1.5)


@dataclass(frozen=True)
class OverlapStatistics:
    """Empirical summary of Haar overlap samples.

    ``counts`` is a polar histogram on an equal-probability grid: radial
    edges are chosen so every cell carries probability 1/(radial * angular)
    under the exact density for this dimension.
    """

    dim: int
    pairs: int
    mean_abs_sq: float
    radial_edges: np.ndarray
    counts: np.ndarray
    samples: np.ndarray


def sample_overlap_statistics(d: int, pairs: int, rng,
                              radial_bins: int = 10,
                              angular_bins: int = 10) -> OverlapStatistics:
    """Sample overlaps of independent Haar pairs and histogram them.

    Draws ``pairs`` independent pairs (u, v) of Haar unit vectors in C^d and
    records z = <u|v>.  The mean of |z|^2 estimates 1/d.
    """
    if pairs < 1:
        raise ValidationError(f"pairs must be positive, got {pairs}")
    if d < 2:
        raise ValidationError(f"dimension must be at least 2, got {d}")
    gen = make_rng(rng)
    u = gen.standard_normal((pairs, d)) + 1j * gen.standard_normal((pairs, d))
    v = gen.standard_normal((pairs, d)) + 1j * gen.standard_normal((pairs, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    z = np.einsum("ij,ij->i", u.conj(), v)

    # P(|z| <= r) = 1 - (1 - r^2)^(d-1): invert for equal-probability annuli.
    probs = np.arange(radial_bins + 1) / radial_bins
    radial_edges = np.sqrt(1.0 - (1.0 - probs) ** (1.0 / (d - 1)))
    angles = np.mod(np.angle(z), 2.0 * math.pi)
    r_idx = np.clip(np.searchsorted(radial_edges, np.abs(z), side="right") - 1,
                    0, radial_bins - 1)
    a_idx = np.clip((angles / (2.0 * math.pi) * angular_bins).astype(int),
                    0, angular_bins - 1)
    counts = np.zeros((radial_bins, angular_bins), dtype=int)
    np.add.at(counts, (r_idx, a_idx), 1)

    return OverlapStatistics(
        dim=d,
        pairs=pairs,
        mean_abs_sq=float(np.mean(np.abs(z) ** 2)),
        radial_edges=radial_edges,
        counts=counts,
        samples=z,
    )
