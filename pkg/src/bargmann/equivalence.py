"""Joint (projective) unitary equivalence of tuples and reconstruction from
invariants.

Two pure tuples are jointly unitarily equivalent exactly when their Gram
matrices coincide, and jointly projectively equivalent when the Grams agree
up to a diagonal unit rephasing.  The projective class is pinned down by
cyclic invariants alone: pair invariants fix the overlap moduli, and one
cycle invariant per non-tree edge of the frame graph fixes every remaining
phase.  That yields a canonical Gram built from at most (N-1)^2 invariant
evaluations when the frame graph is connected, and a reconstruction of the
tuple up to the projective symmetry.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import StateTuple, factor_gram, gram_matrix
from .errors import BudgetExceededError, NumericalError, ValidationError
from .invariants import gram_word_product, n_product

DEFAULT_EDGE_TOL = 1e-8


class TupleOracle:
    """Cyclic-invariant oracle backed by a hidden tuple.

    Calling the oracle with an index word (0-based, repetition allowed)
    returns tr(psi_i1 ... psi_ik).  Evaluations are counted, one per call.
    """

    def __init__(self, states: StateTuple):
        self._states = states
        self._gram = gram_matrix(states) if states.all_pure else None
        self.calls = 0

    def __len__(self) -> int:
        return len(self._states)

    def __call__(self, word) -> complex:
        self.calls += 1
        if self._gram is not None:
            return gram_word_product(self._gram, word)
        return n_product(self._states, word)


class TableOracle:
    """Cyclic-invariant oracle backed by a stored table of values.

    Keys are index tuples; lookups fall back to any stored rotation of the
    word or of its reversal (conjugating in the reversed case).
    """

    def __init__(self, table: dict):
        self._table = {tuple(k): complex(v) for k, v in table.items()}
        self.calls = 0

    def __call__(self, word) -> complex:
        self.calls += 1
        w = tuple(word)
        for k in range(len(w)):
            rot = w[k:] + w[:k]
            if rot in self._table:
                return self._table[rot]
        rev = w[::-1]
        for k in range(len(rev)):
            rot = rev[k:] + rev[:k]
            if rot in self._table:
                return complex(np.conj(self._table[rot]))
        raise ValidationError(f"oracle table has no value for word {w}")


def frame_graph_edges(moduli: np.ndarray, edge_tol: float = DEFAULT_EDGE_TOL) -> set:
    """Edge set {(i, j): i < j, |overlap| > edge_tol} of the frame graph."""
    n = moduli.shape[0]
    return {(i, j) for i in range(n) for j in range(i + 1, n) if moduli[i, j] > edge_tol}


def spanning_forest(n: int, edges: set) -> dict:
    """BFS spanning forest with deterministic tie-breaking.

    Each component is rooted at its lowest index and explored breadth-first
    with neighbors visited in index order.  Returns a parent map with roots
    mapped to ``None``.
    """
    adjacency = {k: [] for k in range(n)}
    for i, j in edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    for k in adjacency:
        adjacency[k].sort()
    parent: dict[int, int | None] = {}
    for start in range(n):
        if start in parent:
            continue
        parent[start] = None
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
    return parent


def _tree_path(parent: dict, src: int, dst: int) -> list[int]:
    """Vertex path from src to dst inside one spanning-tree component."""
    def ancestors(v):
        chain = [v]
        while parent[chain[-1]] is not None:
            chain.append(parent[chain[-1]])
        return chain

    up_src = ancestors(src)
    up_dst = ancestors(dst)
    dst_pos = {v: k for k, v in enumerate(up_dst)}
    for k, v in enumerate(up_src):
        if v in dst_pos:
            return up_src[: k + 1] + up_dst[: dst_pos[v]][::-1]
    raise NumericalError(f"vertices {src} and {dst} are not in one tree component")


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witness: np.ndarray | None = None
    max_deviation: float = 0.0


def _extend_to_unitary(isometry: np.ndarray) -> np.ndarray:
    """Polish a near-isometry and append an orthonormal complement."""
    w, _, vh = np.linalg.svd(isometry, full_matrices=True)
    r = isometry.shape[1]
    return np.concatenate([w[:, :r] @ vh, w[:, r:]], axis=1)


def joint_unitary_equivalent(psi: StateTuple, phi: StateTuple,
                             tol: float = 1e-8) -> EquivalenceResult:
    """Decide joint unitary equivalence of two pure tuples via their Grams.

    The decision is max-norm agreement of the Gram matrices within ``tol``.
    When equivalent and the tuples share a dimension, a witness unitary U
    with max_k ||U psi_k - phi_k|| <= 10 * tol is constructed by matching
    orthonormal bases of the two spans.
    """
    if len(psi) != len(phi):
        raise ValidationError(
            f"tuples have different lengths {len(psi)} and {len(phi)}"
        )
    g_psi = gram_matrix(psi)
    g_phi = gram_matrix(phi)
    deviation = float(np.max(np.abs(g_psi - g_phi)))
    if deviation > tol:
        return EquivalenceResult(False, None, deviation)
    if psi.dim != phi.dim:
        return EquivalenceResult(True, None, deviation)

    eigvals, eigvecs = np.linalg.eigh(g_psi)
    keep = eigvals > max(tol, 1e-13)
    lam = eigvals[keep]
    coords = np.sqrt(lam)[:, np.newaxis] * eigvecs[:, keep].conj().T
    a = psi.vectors().T
    b = phi.vectors().T
    pinv = coords.conj().T / lam[np.newaxis, :]
    u_psi = _extend_to_unitary(a @ pinv)
    u_phi = _extend_to_unitary(b @ pinv)
    witness = u_phi @ u_psi.conj().T
    return EquivalenceResult(True, witness, deviation)


def joint_projective_equivalent(psi: StateTuple, phi: StateTuple,
                                tol: float = 1e-8,
                                edge_tol: float = DEFAULT_EDGE_TOL) -> bool:
    """Decide joint projective unitary equivalence of two pure tuples.

    The frame graphs must agree as edge sets.  If they are complete, the
    tuples are compared through their triple products (pair moduli plus one
    orientation of each increasing triple; reversal only conjugates).
    Otherwise both tuples are pushed to canonical Gram matrices, which are
    gauge-free, and compared entrywise.
    """
    if len(psi) != len(phi):
        raise ValidationError(
            f"tuples have different lengths {len(psi)} and {len(phi)}"
        )
    n = len(psi)
    g_psi = gram_matrix(psi)
    g_phi = gram_matrix(phi)
    edges_psi = frame_graph_edges(np.abs(g_psi), edge_tol)
    edges_phi = frame_graph_edges(np.abs(g_phi), edge_tol)
    if edges_psi != edges_phi:
        return False
    complete = len(edges_psi) == n * (n - 1) // 2
    if complete:
        if float(np.max(np.abs(np.abs(g_psi) - np.abs(g_phi)))) > tol:
            return False
        for i, j, k in itertools.combinations(range(n), 3):
            t_psi = g_psi[i, j] * g_psi[j, k] * g_psi[k, i]
            t_phi = g_phi[i, j] * g_phi[j, k] * g_phi[k, i]
            if abs(t_psi - t_phi) > tol:
                return False
        return True
    canon_psi, _ = canonical_gram_from_invariants(TupleOracle(psi), n, tol, edge_tol)
    canon_phi, _ = canonical_gram_from_invariants(TupleOracle(phi), n, tol, edge_tol)
    return float(np.max(np.abs(canon_psi - canon_phi))) <= tol


def canonical_gram_from_invariants(oracle, n: int, tol: float = 1e-8,
                                   edge_tol: float = DEFAULT_EDGE_TOL) -> tuple[np.ndarray, int]:
    """Gauge-canonical Gram matrix of a tuple known only through invariants.

    Pair invariants give the overlap moduli, hence the frame graph.  A BFS
    spanning tree is chosen per component (lowest-index root, index-ordered
    visits); tree-edge entries are made positive real, and each remaining
    edge's phase is fixed by the cycle invariant of the unique tree path it
    closes, divided by the (positive) tree-edge product.  Returns the Gram
    and the number of invariant evaluations used.

    Raises
    ------
    ValidationError
        If a fixed phase fails to have unit modulus within ``tol`` (the
        oracle is inconsistent) or the assembled Gram is not PSD at floor
        -1e-8 (not realizable by unit vectors).
    """
    calls = 0

    def evaluate(word):
        nonlocal calls
        calls += 1
        return complex(oracle(word))

    moduli = np.zeros((n, n))
    np.fill_diagonal(moduli, 1.0)
    for i in range(n):
        for j in range(i + 1, n):
            pair = evaluate((i, j))
            moduli[i, j] = moduli[j, i] = math.sqrt(max(pair.real, 0.0))
    edges = frame_graph_edges(moduli, edge_tol)
    parent = spanning_forest(n, edges)
    tree_edges = {(min(v, p), max(v, p)) for v, p in parent.items() if p is not None}

    gram = np.eye(n, dtype=complex)
    for i, j in tree_edges:
        gram[i, j] = gram[j, i] = moduli[i, j]
    for i, j in sorted(edges - tree_edges):
        path = _tree_path(parent, j, i)
        cycle_value = evaluate(tuple(path))
        path_product = 1.0
        for a, b in zip(path[:-1], path[1:]):
            path_product *= moduli[a, b]
        value = cycle_value / path_product
        if abs(abs(value) - moduli[i, j]) > tol * max(1.0, moduli[i, j]):
            raise ValidationError(
                f"oracle inconsistency on edge ({i}, {j}): cycle phase has "
                f"modulus {abs(value) / moduli[i, j]!r}"
            )
        gram[i, j] = value
        gram[j, i] = np.conj(value)

    min_eig = float(np.linalg.eigvalsh(gram)[0])
    if min_eig < -1e-8:
        raise ValidationError(
            f"canonical Gram is not realizable: min eigenvalue = {min_eig!r}"
        )
    return gram, calls


@dataclass(frozen=True)
class ReconstructionResult:
    states: StateTuple
    gram: np.ndarray
    oracle_calls: int
    call_bound: int


def reconstruct_tuple(oracle, n: int, tol: float = 1e-8,
                      edge_tol: float = DEFAULT_EDGE_TOL) -> ReconstructionResult:
    """Reconstruct a tuple, up to projective equivalence, from its invariants.

    Factorizes the canonical Gram; the realized tuple lives in the Gram's
    numerical rank.  ``oracle_calls`` reports the evaluations used, which is
    at most (n - 1)^2 whenever the frame graph is connected.
    """
    gram, calls = canonical_gram_from_invariants(oracle, n, tol, edge_tol)
    states = factor_gram(gram, tol=max(tol, 1e-10))
    return ReconstructionResult(
        states=states, gram=gram, oracle_calls=calls, call_bound=(n - 1) ** 2
    )


def _bracelet_representative(word: tuple) -> tuple:
    best = word
    rev = word[::-1]
    for k in range(len(word)):
        for w in (word[k:] + word[:k], rev[k:] + rev[:k]):
            if w < best:
                best = w
    return best


def bracelet_words(n_states: int, max_degree: int, max_words: int):
    """Canonical index words of length <= max_degree, up to rotation and
    reversal (lexicographically least representative kept)."""
    raw = sum(n_states ** length for length in range(1, max_degree + 1))
    if raw > max_words:
        raise BudgetExceededError(
            f"word enumeration needs {raw} candidates, cap is {max_words}"
        )
    for length in range(1, max_degree + 1):
        for word in itertools.product(range(n_states), repeat=length):
            if word == _bracelet_representative(word):
                yield word


def mixed_orbit_equal(psi: StateTuple, phi: StateTuple, max_degree: int | None = None,
                      tol: float = 1e-8, max_words: int = 500_000) -> bool:
    """Compare two mixed tuples through invariants of bounded degree.

    Invariants are evaluated on one representative per rotation/reversal
    class of index words up to ``max_degree`` (default d^2, which is a
    complete set; smaller budgets only ever falsify equivalence).
    """
    if len(psi) != len(phi):
        raise ValidationError(
            f"tuples have different lengths {len(psi)} and {len(phi)}"
        )
    if psi.dim != phi.dim:
        raise ValidationError(
            f"tuples have different dimensions {psi.dim} and {phi.dim}"
        )
    if max_degree is None:
        max_degree = psi.dim ** 2
    rho = psi.densities()
    sig = phi.densities()
    for word in bracelet_words(len(psi), max_degree, max_words):
        acc_r = rho[word[0]]
        acc_s = sig[word[0]]
        for k in word[1:]:
            acc_r = acc_r @ rho[k]
            acc_s = acc_s @ sig[k]
        if abs(np.trace(acc_r) - np.trace(acc_s)) > tol:
            return False
    return True
