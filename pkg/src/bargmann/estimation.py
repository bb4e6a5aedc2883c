"""Cycle-test estimation of invariants under shot noise.

A Hadamard-sandwiched controlled cyclic permutation turns the real (or, with
an extra ancilla phase gate, imaginary) part of tr(rho_1 ... rho_n) into the
bias of a +/-1 measurement outcome.  Estimation therefore reduces to Bernoulli
sampling at the analytic outcome probability; a small statevector simulator
of the actual circuit serves as a cross-check oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import StateTuple, make_rng
from .errors import NumericalError, ValidationError
from .invariants import bargmann

PARTS = ("real", "imag")
DEFAULT_DIM_CAP = 2 ** 13


def _part_value(value: complex, part: str) -> float:
    if part == "real":
        return value.real
    if part == "imag":
        return value.imag
    raise ValidationError(f"part must be 'real' or 'imag', got {part!r}")


def cycle_probability(states: StateTuple, part: str) -> float:
    """Probability of the +1 outcome: (1 + Re Delta)/2 or (1 + Im Delta)/2."""
    p = 0.5 * (1.0 + _part_value(bargmann(states), part))
    if p < -1e-12 or p > 1.0 + 1e-12:
        raise NumericalError(f"outcome probability {p!r} is outside [0, 1]")
    return float(min(1.0, max(0.0, p)))


def cycle_permutation(d: int, n: int) -> np.ndarray:
    """Permutation matrix sending |i_1 ... i_n> to |i_n i_1 ... i_(n-1)>."""
    if d < 1 or n < 1:
        raise ValidationError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    size = d ** n
    perm = np.zeros((size, size), dtype=complex)
    for src in range(size):
        digits = []
        rem = src
        for _ in range(n):
            digits.append(rem % d)
            rem //= d
        digits.reverse()  # digits[k] = i_(k+1), most significant first
        rotated = [digits[-1]] + digits[:-1]
        dst = 0
        for dig in rotated:
            dst = dst * d + dig
        perm[dst, src] = 1.0
    return perm


def controlled_cycle_unitary(d: int, n: int, dim_cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Block unitary |0><0| (x) 1 + |1><1| (x) P_cycle on C^2 (x) (C^d)^n.

    For d = 2, n = 2 the cycle block is the SWAP and the whole matrix is the
    Fredkin gate.
    """
    size = 2 * d ** n
    if size > dim_cap:
        raise ValidationError(
            f"controlled cycle needs dimension {size}, above the cap {dim_cap}"
        )
    perm = cycle_permutation(d, n)
    block = np.eye(d ** n, dtype=complex)
    out = np.zeros((size, size), dtype=complex)
    out[: d ** n, : d ** n] = block
    out[d ** n:, d ** n:] = perm
    return out


def circuit_probability(states: StateTuple, part: str,
                        dim_cap: int = DEFAULT_DIM_CAP) -> float:
    """Statevector simulation of the cycle-test circuit's P(ancilla = 0).

    Runs Hadamard, controlled cycle, an ancilla phase gate diag(1, i) when
    the imaginary part is requested, then Hadamard again, starting from
    |0> (x) psi_1 (x) ... (x) psi_n.  Pure tuples only; exists as a
    small-scale oracle for the analytic outcome probability.
    """
    if not states.all_pure:
        raise ValidationError("circuit simulation supports pure tuples only")
    if part not in PARTS:
        raise ValidationError(f"part must be 'real' or 'imag', got {part!r}")
    d, n = states.dim, len(states)
    gate = controlled_cycle_unitary(d, n, dim_cap)
    m = d ** n
    joint = np.array([1.0], dtype=complex)
    for k in range(n):
        joint = np.kron(joint, states.vector(k))

    def ancilla_hadamard(vec):
        top, bot = vec[:m], vec[m:]
        return np.concatenate([top + bot, top - bot]) / math.sqrt(2.0)

    vec = np.concatenate([joint, np.zeros(m, dtype=complex)])
    vec = ancilla_hadamard(vec)
    vec = gate @ vec
    if part == "imag":
        vec = np.concatenate([vec[:m], 1j * vec[m:]])
    vec = ancilla_hadamard(vec)
    return float(np.vdot(vec[:m], vec[:m]).real)


def hoeffding_shots(epsilon: float, delta: float) -> int:
    """Shot count ceil((2 / epsilon^2) ln(2 / delta)), at least 1.

    Guarantees a +/-1 sample mean within epsilon of its expectation with
    probability at least 1 - delta.
    """
    if epsilon <= 0.0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise ValidationError(f"delta must lie in (0, 1), got {delta}")
    return max(1, math.ceil(2.0 / (epsilon * epsilon) * math.log(2.0 / delta)))


def simulate_cycle_test(states: StateTuple, part: str, shots: int, rng,
                        partitions: int = 1) -> float:
    """Sample mean of ``shots`` i.i.d. +/-1 outcomes of the cycle test.

    Outcomes are drawn directly at the analytic probability.  ``partitions``
    splits the generator into that many substreams consumed in order, so a
    partitioned run is reproducible from (seed, partitions).
    """
    if shots < 1:
        raise ValidationError(f"shots must be positive, got {shots}")
    if partitions < 1:
        raise ValidationError(f"partitions must be positive, got {partitions}")
    p = cycle_probability(states, part)
    gen = make_rng(rng)
    counts = [shots // partitions] * partitions
    for k in range(shots % partitions):
        counts[k] += 1
    successes = 0
    for chunk, child in zip(counts, gen.spawn(partitions)):
        if chunk:
            successes += int(child.binomial(chunk, p))
    return (2.0 * successes - shots) / shots


@dataclass(frozen=True)
class EstimateResult:
    estimate: complex
    real_mean: float
    imag_mean: float
    shots_per_part: int
    seed: int | None


def estimate_bargmann(states: StateTuple, epsilon: float, delta: float,
                      seed=None, partitions: int = 1) -> EstimateResult:
    """Estimate Delta to accuracy epsilon per part at confidence 1 - delta.

    Runs the cycle test for the real and imaginary parts on independent
    substreams split from ``seed`` in that fixed order, each with the
    Hoeffding shot count.  The returned estimate is real_mean + i*imag_mean.
    """
    shots = hoeffding_shots(epsilon, delta)
    gen = make_rng(0 if seed is None else seed)
    rng_real, rng_imag = gen.spawn(2)
    x_mean = simulate_cycle_test(states, "real", shots, rng_real, partitions)
    y_mean = simulate_cycle_test(states, "imag", shots, rng_imag, partitions)
    return EstimateResult(
        estimate=complex(x_mean, y_mean),
        real_mean=x_mean,
        imag_mean=y_mean,
        shots_per_part=shots,
        seed=seed if isinstance(seed, int) else None,
    )
