"""Command-line interface: parse tuple documents, dispatch, emit JSON/CSV.

Every subcommand maps onto one library operation group.  Results go to
standard output as JSON (default) or CSV (``--format csv``); complex numbers
serialize as two-element ``[re, im]`` arrays, and CSV uses separate real and
imaginary columns with 17-significant-digit floats.  Randomized commands
print the seed they used; the environment variable ``BARGMANN_SEED``
overrides ``--seed``.  Exit codes: 0 success, 2 invalid input, 1 internal
numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import circulant, equivalence, estimation, geometry, invariants, twoqubit
from .core import StateTuple, check_density_matrix, check_unit_vector
from .errors import NumericalError, ValidationError

FLOAT_FMT = "{:.17g}"


# ---------------------------------------------------------------------------
# document parsing


def _as_complex(value, path: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(x, (int, float)) for x in value)):
        return complex(value[0], value[1])
    raise ValidationError("expected a real number or an [re, im] pair", path)


def _complex_array(data, path: str) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ValidationError("expected a non-empty array", path)
    if isinstance(data[0], list) and len(data[0]) and isinstance(data[0][0], list):
        rows = []
        for r, row in enumerate(data):
            if not isinstance(row, list):
                raise ValidationError("expected a matrix row", f"{path}/{r}")
            rows.append([_as_complex(v, f"{path}/{r}/{c}") for c, v in enumerate(row)])
        return np.array(rows, dtype=complex)
    return np.array([_as_complex(v, f"{path}/{k}") for k, v in enumerate(data)],
                    dtype=complex)


def validate_document(doc) -> StateTuple:
    """Parse and validate a tuple document into a StateTuple.

    The document is ``{"dim": d, "states": [{"kind": "pure"|"mixed",
    "data": ...}, ...]}`` with complex entries as ``[re, im]`` pairs.  The
    first violated invariant is reported with its location and magnitude.
    """
    if not isinstance(doc, dict):
        raise ValidationError("document root must be an object", "")
    if "dim" not in doc or not isinstance(doc["dim"], int) or doc["dim"] < 1:
        raise ValidationError("missing or invalid positive integer field", "/dim")
    if "states" not in doc or not isinstance(doc["states"], list) or not doc["states"]:
        raise ValidationError("missing or empty states array", "/states")
    dim = doc["dim"]
    states = []
    for k, entry in enumerate(doc["states"]):
        path = f"/states/{k}"
        if not isinstance(entry, dict):
            raise ValidationError("state entry must be an object", path)
        kind = entry.get("kind")
        if kind not in ("pure", "mixed"):
            raise ValidationError(f"kind must be 'pure' or 'mixed', got {kind!r}",
                                  f"{path}/kind")
        arr = _complex_array(entry.get("data"), f"{path}/data")
        if kind == "pure":
            if arr.ndim != 1:
                raise ValidationError("pure state data must be a flat amplitude list",
                                      f"{path}/data")
            if arr.shape[0] != dim:
                raise ValidationError(
                    f"pure state has {arr.shape[0]} amplitudes, expected {dim}",
                    f"{path}/data")
            states.append(check_unit_vector(arr, path=f"{path}/data"))
        else:
            if arr.ndim != 2 or arr.shape != (dim, dim):
                raise ValidationError(
                    f"mixed state data must be a {dim} x {dim} matrix, got shape "
                    f"{arr.shape}", f"{path}/data")
            states.append(check_density_matrix(arr, path=f"{path}/data"))
    return StateTuple.from_states(states, dim=dim)


def load_tuple(path: str) -> StateTuple:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}")
    return validate_document(doc)


def load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}")
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise ValidationError("matrix document must contain a 'matrix' field", "/matrix")
    arr = _complex_array(doc["matrix"], "/matrix")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError("matrix must be square", "/matrix")
    return arr


# ---------------------------------------------------------------------------
# serialization


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _matrix_pairs(mat: np.ndarray) -> list:
    return [[_pair(v) for v in row] for row in np.asarray(mat, dtype=complex)]


def _fmt(value) -> str:
    if isinstance(value, float):
        return FLOAT_FMT.format(value)
    return str(value)


def _flatten(prefix: str, value, out: list) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, (list, tuple)):
        for k, v in enumerate(value):
            _flatten(f"{prefix}[{k}]", v, out)
    else:
        out.append((prefix, _fmt(value)))


def _emit(result: dict, fmt: str, rows=None, header=None) -> None:
    """Print a result: JSON object, or CSV (tabular when rows are given)."""
    if fmt == "json":
        print(json.dumps(result, indent=2))
        return
    if rows is not None:
        print(",".join(header))
        for row in rows:
            print(",".join(_fmt(v) for v in row))
        return
    flat: list = []
    _flatten("", result, flat)
    print("key,value")
    for key, value in flat:
        print(f"{key},{value}")


def _resolve_seed(args) -> int:
    env = os.environ.get("BARGMANN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"BARGMANN_SEED must be an integer, got {env!r}")
    return args.seed


def _require_positive(name: str, value: float) -> None:
    if value <= 0.0:
        raise ValidationError(f"{name} must be positive, got {value}")


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_invariant(args) -> None:
    value = invariants.bargmann(load_tuple(args.input))
    _emit({"re": value.real, "im": value.imag, "abs": abs(value),
           "arg": math.atan2(value.imag, value.real)}, args.format)


def _cmd_nproduct(args) -> None:
    states = load_tuple(args.input)
    value = invariants.n_product(states, args.indices)
    _emit({"indices": list(args.indices), "re": value.real, "im": value.imag,
           "abs": abs(value), "arg": math.atan2(value.imag, value.real)},
          args.format)


def _cmd_boundary(args) -> None:
    n, points = args.n, args.points
    if points < 2:
        raise ValidationError(f"points must be at least 2, got {points}")
    rows = []
    for k in range(points):
        theta = 2.0 * math.pi * k / points
        r = geometry.boundary_radius(n, theta)
        rows.append((theta, r, r * math.cos(theta), r * math.sin(theta)))
    if args.plot:
        from . import plotting
        plotting.save_boundary_figure([n], args.plot, points)
    result = {"n": n, "points": points,
              "rows": [{"theta": t, "r": r, "x": x, "y": y} for t, r, x, y in rows]}
    _emit(result, args.format, rows=rows, header=("theta", "r", "x", "y"))


def _cmd_membership(args) -> None:
    _require_positive("--tol", args.tol)
    z = complex(args.re, args.im)
    theta = float(np.mod(np.angle(z), 2.0 * math.pi)) if z != 0 else 0.0
    _emit({
        "n": args.n,
        "point": _pair(z),
        "inside": geometry.region_contains(args.n, z, args.tol),
        "modulus": abs(z),
        "theta": theta,
        "boundary_radius": geometry.boundary_radius(args.n, theta),
    }, args.format)


def _cmd_bounds(args) -> None:
    bounds = geometry.region_bounds(args.n)
    _emit({"n": args.n, "min_real": bounds.min_real, "tau": bounds.tau}, args.format)


def _cmd_obg(args) -> None:
    if (args.t is None) == (args.theta is None):
        raise ValidationError("give exactly one of --t or --theta")
    theta = args.theta
    t = args.t if args.t is not None else geometry.theta_to_t(args.n, theta)
    value = geometry.obg_invariant(args.n, t)
    result = {"n": args.n, "t": t, "value": _pair(value), "abs": abs(value),
              "arg": math.atan2(value.imag, value.real)}
    if theta is not None:
        result["theta"] = theta
    _emit(result, args.format)


def _cmd_envelope(args) -> None:
    n, points = args.n, args.points
    if points < 1:
        raise ValidationError(f"points must be at least 1, got {points}")
    rows = []
    for k in range(points):
        theta = 2.0 * math.pi * k / points
        point = geometry.envelope_touch(n, theta)
        row = [theta, point.r, point.t, point.residual, point.derivative]
        if n == 3:
            row.append(geometry.boundary_cubic_residual(theta, point.r))
        rows.append(tuple(row))
    if args.plot:
        from . import plotting
        plotting.save_envelope_figure(n, args.plot)
    header = ["theta", "r", "t", "residual", "derivative"]
    keys = list(header)
    if n == 3:
        header.append("cubic")
        keys.append("cubic")
    result = {"n": n, "points": points,
              "rows": [dict(zip(keys, row)) for row in rows]}
    _emit(result, args.format, rows=rows, header=header)


def _cmd_circulantize(args) -> None:
    res = circulant.circulantize(load_tuple(args.input))
    _emit({
        "gram": _matrix_pairs(res.gram),
        "phases": list(res.phases),
        "rank": res.rank,
        "states": [[_pair(a) for a in res.states.vector(k)]
                   for k in range(len(res.states))],
        "invariant_before": _pair(res.invariant_before),
        "invariant_after": _pair(res.invariant_after),
    }, args.format)


def _cmd_channel(args) -> None:
    if args.choi:
        if args.n is None:
            raise ValidationError("--choi requires --n")
        choi = circulant.channel_choi_matrix(args.n)
        from .core import partial_transpose
        min_eig = float(np.linalg.eigvalsh(choi)[0])
        min_pt = float(np.linalg.eigvalsh(
            partial_transpose(choi, "B", args.n, args.n))[0])
        _emit({"n": args.n, "min_choi_eigenvalue": min_eig,
               "min_pt_eigenvalue": min_pt,
               "entanglement_breaking_consistent": bool(min_eig > -1e-10
                                                        and min_pt > -1e-10)},
              args.format)
        return
    if args.input is None:
        raise ValidationError("channel needs --input or --choi --n")
    mat = load_matrix(args.input)
    out = circulant.circulant_channel_apply(mat)
    _emit({
        "n": mat.shape[0],
        "output": _matrix_pairs(out),
        "fixed_point_residual": float(np.max(np.abs(out - mat))),
        "is_circulant_input": bool(np.max(np.abs(out - mat)) <= 1e-12),
    }, args.format)


def _cmd_equivalence(args) -> None:
    _require_positive("--tol", args.tol)
    psi = load_tuple(args.input)
    phi = load_tuple(args.input_b)
    if args.mode == "unitary":
        res = equivalence.joint_unitary_equivalent(psi, phi, args.tol)
        result = {"mode": "unitary", "equivalent": res.equivalent,
                  "max_gram_deviation": res.max_deviation}
        if res.witness is not None:
            result["witness"] = _matrix_pairs(res.witness)
    elif args.mode == "projective":
        result = {"mode": "projective",
                  "equivalent": equivalence.joint_projective_equivalent(
                      psi, phi, args.tol)}
    else:
        result = {"mode": "mixed",
                  "max_degree": args.max_degree or psi.dim ** 2,
                  "equivalent": equivalence.mixed_orbit_equal(
                      psi, phi, args.max_degree, args.tol)}
    _emit(result, args.format)


def _cmd_reconstruct(args) -> None:
    _require_positive("--tol", args.tol)
    states = load_tuple(args.input)
    oracle = equivalence.TupleOracle(states)
    res = equivalence.reconstruct_tuple(oracle, len(states), args.tol)
    verified = (states.all_pure
                and equivalence.joint_projective_equivalent(res.states, states,
                                                            max(args.tol, 1e-8)))
    _emit({
        "n": len(states),
        "dim": res.states.dim,
        "oracle_calls": res.oracle_calls,
        "call_bound": res.call_bound,
        "gram": _matrix_pairs(res.gram),
        "states": [[_pair(a) for a in res.states.vector(k)]
                   for k in range(len(res.states))],
        "projective_equivalent_to_input": bool(verified),
    }, args.format)


def _cmd_estimate(args) -> None:
    states = load_tuple(args.input)
    seed = _resolve_seed(args)
    res = estimation.estimate_bargmann(states, args.epsilon, args.delta,
                                       seed=seed, partitions=args.threads)
    exact = invariants.bargmann(states)
    _emit({
        "seed": seed,
        "epsilon": args.epsilon,
        "delta": args.delta,
        "shots_per_part": res.shots_per_part,
        "estimate": _pair(res.estimate),
        "real_mean": res.real_mean,
        "imag_mean": res.imag_mean,
        "exact": _pair(exact),
        "abs_error": abs(res.estimate - exact),
    }, args.format)


def _cmd_pdf_sample(args) -> None:
    seed = _resolve_seed(args)
    stats = invariants.sample_overlap_statistics(
        args.d, args.pairs, seed, radial_bins=args.radial_bins,
        angular_bins=args.angular_bins)
    cells = args.radial_bins * args.angular_bins
    expected = args.pairs / cells
    chi_square = float(np.sum((stats.counts - expected) ** 2 / expected))
    if args.plot:
        from . import plotting
        plotting.save_overlap_figure(stats.samples, args.d, args.plot)
    result = {
        "seed": seed,
        "d": args.d,
        "pairs": args.pairs,
        "mean_abs_sq": stats.mean_abs_sq,
        "expected_mean_abs_sq": 1.0 / args.d,
        "chi_square": chi_square,
        "dof": cells - 1,
        "radial_edges": [float(x) for x in stats.radial_edges],
        "counts": stats.counts.tolist(),
    }
    rows = [(i, j, int(stats.counts[i, j]), expected)
            for i in range(args.radial_bins) for j in range(args.angular_bins)]
    _emit(result, args.format, rows=rows,
          header=("radial_bin", "angular_bin", "count", "expected"))


def _load_two_qubit(path: str) -> np.ndarray:
    states = load_tuple(path)
    if states.dim != 4 or len(states) != 1:
        raise ValidationError(
            "expected a document with one state of dimension 4")
    return states.density(0)


def _cmd_lu(args) -> None:
    _require_positive("--tol", args.tol)
    values = twoqubit.lu_invariants(_load_two_qubit(args.input))
    result = {"invariants": [float(v) for v in values]}
    if args.input_b:
        other = twoqubit.lu_invariants(_load_two_qubit(args.input_b))
        result["invariants_b"] = [float(v) for v in other]
        result["lu_similar"] = bool(np.max(np.abs(values - other)) <= args.tol)
    _emit(result, args.format)


def _cmd_entanglement(args) -> None:
    rho = _load_two_qubit(args.input)
    verdict = twoqubit.entangled_by_invariants(rho)
    oracle = twoqubit.ppt_oracle(rho)
    _emit({
        "lhs": verdict.lhs,
        "entangled": verdict.entangled,
        "boundary_indeterminate": verdict.entangled is None,
        "det_gamma": oracle.det_gamma,
    }, args.format)


def _cmd_imaginarity(args) -> None:
    states = load_tuple(args.input)
    witness = twoqubit.imaginarity_quadratic(states)
    _emit({
        "order": len(states),
        "p": witness.p,
        "q": witness.q,
        "residual": witness.residual,
        "invariant": _pair(witness.invariant),
        "conjugate_root": _pair(np.conj(witness.invariant)),
    }, args.format)


# ---------------------------------------------------------------------------
# parser


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bargmann",
        description="Bargmann invariants: values, attainable region, "
                    "equivalence, reconstruction, estimation, and two-qubit "
                    "criteria.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariant", help="cyclic invariant of a tuple")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_invariant)

    p = sub.add_parser("nproduct", help="invariant of a re-indexed sub-tuple")
    p.add_argument("--input", required=True)
    p.add_argument("--indices", nargs="+", type=int, required=True,
                   help="0-based member indices, repetition allowed")
    _add_common(p)
    p.set_defaults(handler=_cmd_nproduct)

    p = sub.add_parser("boundary", help="attainable-region boundary curve")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--points", type=int, default=360)
    p.add_argument("--plot", help="also render the curve to this image file")
    _add_common(p)
    p.set_defaults(handler=_cmd_boundary)

    p = sub.add_parser("membership", help="test a point against the region")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--re", type=float, required=True)
    p.add_argument("--im", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(handler=_cmd_membership)

    p = sub.add_parser("bounds", help="leftmost real value and peak imaginary part")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("obg", help="boundary-family invariant at t or theta")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float)
    p.add_argument("--theta", type=float)
    _add_common(p)
    p.set_defaults(handler=_cmd_obg)

    p = sub.add_parser("envelope", help="envelope residuals along the boundary")
    p.add_argument("--n", type=int, required=True, choices=(3, 4))
    p.add_argument("--points", type=int, default=360)
    p.add_argument("--plot", help="also render the family to this image file")
    _add_common(p)
    p.set_defaults(handler=_cmd_envelope)

    p = sub.add_parser("circulantize", help="push a pure tuple onto a circulant Gram")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_circulantize)

    p = sub.add_parser("channel", help="cyclic-shift averaging channel")
    p.add_argument("--input")
    p.add_argument("--choi", action="store_true",
                   help="report Choi-matrix positivity data instead")
    p.add_argument("--n", type=int)
    _add_common(p)
    p.set_defaults(handler=_cmd_channel)

    p = sub.add_parser("equivalence", help="joint equivalence of two tuples")
    p.add_argument("--input", required=True)
    p.add_argument("--input-b", required=True)
    p.add_argument("--mode", choices=("unitary", "projective", "mixed"),
                   default="projective")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common(p)
    p.set_defaults(handler=_cmd_equivalence)

    p = sub.add_parser("reconstruct", help="rebuild a tuple from its invariants")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common(p)
    p.set_defaults(handler=_cmd_reconstruct)

    p = sub.add_parser("estimate", help="cycle-test shot-noise estimate")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1,
                   help="number of seeded shot partitions (sequential)")
    _add_common(p)
    p.set_defaults(handler=_cmd_estimate)

    p = sub.add_parser("pdf-sample", help="Haar overlap sampling statistics")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radial-bins", type=int, default=10)
    p.add_argument("--angular-bins", type=int, default=10)
    p.add_argument("--plot", help="also render the samples to this image file")
    _add_common(p)
    p.set_defaults(handler=_cmd_pdf_sample)

    p = sub.add_parser("lu", help="two-qubit local-unitary invariants")
    p.add_argument("--input", required=True)
    p.add_argument("--input-b")
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common(p)
    p.set_defaults(handler=_cmd_lu)

    p = sub.add_parser("entanglement", help="two-qubit entanglement criterion")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_entanglement)

    p = sub.add_parser("imaginarity", help="quadratic witness from pair invariants")
    p.add_argument("--input", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_imaginarity)

    return parser


def run_command(argv) -> int:
    """Dispatch one command line; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.handler(args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
