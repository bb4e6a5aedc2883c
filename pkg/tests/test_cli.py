import json
import math
import os

import numpy as np
import pytest

from bargmann.cli import validate_document
from bargmann.core import StateTuple, random_density
from bargmann.errors import ValidationError
from bargmann.geometry import obg_states
from conftest import bell_state, random_pure_tuple


def bell_doc():
    rho = bell_state()
    return {"dim": 4, "states": [{
        "kind": "mixed",
        "data": [[[float(v.real), float(v.imag)] for v in row] for row in rho],
    }]}


class TestValidateDocument:
    def test_valid_mixed_pair(self, rng):
        doc = {"dim": 2, "states": [
            {"kind": "mixed", "data": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]},
            {"kind": "pure", "data": [[1.0, 0.0], [0.0, 0.0]]},
        ]}
        states = validate_document(doc)
        assert len(states) == 2 and states.dim == 2

    def test_norm_violation_names_location(self):
        doc = {"dim": 2, "states": [{"kind": "pure", "data": [[0.999999, 0.0], [0.0, 0.0]]}]}
        with pytest.raises(ValidationError, match="/states/0/data.*not normalized"):
            validate_document(doc)

    def test_trace_violation_names_trace(self):
        doc = {"dim": 2, "states": [{"kind": "mixed",
                                     "data": [[[0.51, 0.0], [0.0, 0.0]],
                                              [[0.0, 0.0], [0.5, 0.0]]]}]}
        with pytest.raises(ValidationError, match="trace"):
            validate_document(doc)

    def test_bad_kind_rejected(self):
        doc = {"dim": 2, "states": [{"kind": "thermal", "data": [[1.0, 0.0], [0.0, 0.0]]}]}
        with pytest.raises(ValidationError, match="kind"):
            validate_document(doc)

    def test_dimension_mismatch_rejected(self):
        doc = {"dim": 3, "states": [{"kind": "pure", "data": [[1.0, 0.0], [0.0, 0.0]]}]}
        with pytest.raises(ValidationError, match="amplitudes"):
            validate_document(doc)


class TestInvariantCommands:
    def test_invariant_known_value(self, cli, write_tuple):
        path = write_tuple(obg_states(3, 0.5))
        code, out, _ = cli(["invariant", "--input", path])
        assert code == 0
        result = json.loads(out)
        assert set(result) == {"re", "im", "abs", "arg"}
        assert abs(result["re"] + 0.125) < 1e-12
        assert abs(result["im"]) < 1e-12

    def test_nproduct(self, cli, write_tuple, rng):
        t = random_pure_tuple(3, 2, rng)
        path = write_tuple(t)
        code, out, _ = cli(["nproduct", "--input", path, "--indices", "0", "1", "0", "1"])
        assert code == 0
        result = json.loads(out)
        assert result["indices"] == [0, 1, 0, 1]
        assert result["re"] >= -1e-12 and abs(result["im"]) < 1e-12

    def test_invariant_csv_fallback(self, cli, write_tuple):
        path = write_tuple(obg_states(3, 0.5))
        code, out, _ = cli(["invariant", "--input", path, "--format", "csv"])
        assert code == 0
        assert out.splitlines()[0] == "key,value"


class TestBoundaryCommand:
    def test_csv_schema_and_known_rows(self, cli):
        code, out, _ = cli(["boundary", "--n", "3", "--points", "360", "--format", "csv"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "theta,r,x,y"
        assert len(lines) == 361
        first = [float(v) for v in lines[1].split(",")]
        assert first[0] == 0.0 and abs(first[1] - 1.0) < 1e-12
        at_pi = [float(v) for v in lines[181].split(",")]
        assert abs(at_pi[0] - math.pi) < 1e-12
        assert abs(at_pi[1] - 0.125) < 1e-12

    def test_byte_identical_reruns(self, cli):
        argv = ["boundary", "--n", "5", "--points", "64", "--format", "csv"]
        _, out1, _ = cli(argv)
        _, out2, _ = cli(argv)
        assert out1 == out2

    def test_json_round_trip(self, cli):
        code, out, _ = cli(["boundary", "--n", "4", "--points", "16"])
        assert code == 0
        result = json.loads(out)
        assert result["n"] == 4 and len(result["rows"]) == 16

    def test_plot_written(self, cli, tmp_path):
        target = tmp_path / "curve.png"
        code, _, _ = cli(["boundary", "--n", "3", "--points", "32",
                          "--plot", str(target)])
        assert code == 0
        assert target.exists() and target.stat().st_size > 0


class TestRegionCommands:
    def test_membership(self, cli):
        code, out, _ = cli(["membership", "--n", "3", "--re", "-0.2", "--im", "0"])
        assert code == 0 and json.loads(out)["inside"] is False
        code, out, _ = cli(["membership", "--n", "3", "--re", "0.1", "--im", "0.05"])
        assert json.loads(out)["inside"] is True

    def test_bounds(self, cli):
        code, out, _ = cli(["bounds", "--n", "3"])
        result = json.loads(out)
        assert abs(result["min_real"] + 0.125) < 1e-12
        assert abs(result["tau"] - 0.25) < 1e-12

    def test_obg_by_theta_and_t(self, cli):
        code, out, _ = cli(["obg", "--n", "3", "--theta", str(math.pi)])
        result = json.loads(out)
        assert abs(result["t"] - 0.5) < 1e-12
        assert abs(result["value"][0] + 0.125) < 1e-12
        code, out, _ = cli(["obg", "--n", "3", "--t", "0.5"])
        assert abs(json.loads(out)["value"][0] + 0.125) < 1e-12

    def test_obg_requires_exactly_one_parameter(self, cli):
        code, _, err = cli(["obg", "--n", "3"])
        assert code == 2 and "exactly one" in err
        code, _, err = cli(["obg", "--n", "3", "--t", "0.5", "--theta", "1.0"])
        assert code == 2

    def test_envelope_cubic_column(self, cli):
        code, out, _ = cli(["envelope", "--n", "3", "--points", "24", "--format", "csv"])
        lines = out.strip().splitlines()
        assert lines[0] == "theta,r,t,residual,derivative,cubic"
        for line in lines[1:]:
            values = [float(v) for v in line.split(",")]
            assert abs(values[3]) < 1e-8 and abs(values[4]) < 1e-8 and abs(values[5]) < 1e-8

    def test_envelope_plot(self, cli, tmp_path):
        target = tmp_path / "envelope.png"
        code, _, _ = cli(["envelope", "--n", "4", "--points", "8", "--plot", str(target)])
        assert code == 0 and target.exists()


class TestCirculantCommands:
    def test_circulantize(self, cli, write_tuple, rng):
        path = write_tuple(random_pure_tuple(4, 3, rng))
        code, out, _ = cli(["circulantize", "--input", path])
        assert code == 0
        result = json.loads(out)
        gram = np.array([[complex(a, b) for a, b in row] for row in result["gram"]])
        assert np.linalg.eigvalsh(gram)[0] > -1e-9
        before = complex(*result["invariant_before"])
        after = complex(*result["invariant_after"])
        assert abs(after) >= abs(before) - 1e-12

    def test_channel_fixed_point(self, cli, tmp_path):
        from bargmann.circulant import circulant_matrix
        mat = circulant_matrix([1.0, 0.25, 0.25])
        doc = {"matrix": [[[float(v.real), float(v.imag)] for v in row] for row in mat]}
        path = tmp_path / "mat.json"
        path.write_text(json.dumps(doc))
        code, out, _ = cli(["channel", "--input", str(path)])
        result = json.loads(out)
        assert result["fixed_point_residual"] < 1e-12
        assert result["is_circulant_input"] is True

    def test_channel_choi(self, cli):
        code, out, _ = cli(["channel", "--choi", "--n", "4"])
        result = json.loads(out)
        assert result["entanglement_breaking_consistent"] is True

    def test_channel_requires_some_input(self, cli):
        code, _, err = cli(["channel"])
        assert code == 2


class TestEquivalenceCommands:
    def test_projective_mode(self, cli, write_tuple, rng):
        t = random_pure_tuple(3, 2, rng)
        phased = StateTuple.from_vectors(
            [np.exp(1j * rng.uniform(0, 6.28)) * t.vector(k) for k in range(3)])
        path_a = write_tuple(t, "a.json")
        path_b = write_tuple(phased, "b.json")
        code, out, _ = cli(["equivalence", "--input", path_a, "--input-b", path_b])
        assert json.loads(out) == {"mode": "projective", "equivalent": True}
        code, out, _ = cli(["equivalence", "--input", path_a, "--input-b", path_b,
                            "--mode", "unitary"])
        assert json.loads(out)["equivalent"] is False

    def test_mixed_mode(self, cli, write_tuple, rng):
        t = StateTuple.from_states([random_density(2, 2, rng) for _ in range(2)])
        path_a = write_tuple(t, "a.json")
        path_b = write_tuple(t, "b.json")
        code, out, _ = cli(["equivalence", "--input", path_a, "--input-b", path_b,
                            "--mode", "mixed"])
        result = json.loads(out)
        assert result["equivalent"] is True and result["max_degree"] == 4

    def test_reconstruct(self, cli, write_tuple, rng):
        t = random_pure_tuple(4, 2, rng)
        code, out, _ = cli(["reconstruct", "--input", write_tuple(t)])
        result = json.loads(out)
        assert result["oracle_calls"] <= result["call_bound"] == 9
        assert result["projective_equivalent_to_input"] is True


class TestRandomizedCommands:
    def test_estimate_reports_seed_and_is_deterministic(self, cli, write_tuple):
        path = write_tuple(obg_states(3, 0.5))
        argv = ["estimate", "--input", path, "--epsilon", "0.1", "--delta", "0.1",
                "--seed", "11"]
        code, out1, _ = cli(argv)
        assert code == 0
        result = json.loads(out1)
        assert result["seed"] == 11
        assert result["shots_per_part"] == 600
        _, out2, _ = cli(argv)
        assert out1 == out2

    def test_env_seed_overrides_flag(self, cli, write_tuple):
        path = write_tuple(obg_states(3, 0.5))
        argv = ["estimate", "--input", path, "--epsilon", "0.2", "--delta", "0.2",
                "--seed", "1"]
        os.environ["BARGMANN_SEED"] = "99"
        try:
            _, out, _ = cli(argv)
        finally:
            del os.environ["BARGMANN_SEED"]
        assert json.loads(out)["seed"] == 99

    def test_pdf_sample_counts(self, cli):
        code, out, _ = cli(["pdf-sample", "--d", "2", "--pairs", "2000", "--seed", "5"])
        result = json.loads(out)
        assert result["seed"] == 5
        assert sum(sum(row) for row in result["counts"]) == 2000
        assert abs(result["mean_abs_sq"] - 0.5) < 0.05

    def test_pdf_sample_csv_and_plot(self, cli, tmp_path):
        target = tmp_path / "samples.png"
        code, out, _ = cli(["pdf-sample", "--d", "3", "--pairs", "500", "--seed", "2",
                            "--format", "csv", "--plot", str(target)])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "radial_bin,angular_bin,count,expected"
        assert len(lines) == 101
        assert target.exists()


class TestTwoQubitCommands:
    def test_entanglement_bell(self, cli, tmp_path):
        path = tmp_path / "bell.json"
        path.write_text(json.dumps(bell_doc()))
        code, out, _ = cli(["entanglement", "--input", str(path)])
        result = json.loads(out)
        assert abs(result["lhs"] + 0.5) < 1e-10
        assert result["entangled"] is True
        assert abs(result["det_gamma"] + 0.0625) < 1e-12

    def test_lu_pair(self, cli, tmp_path, write_tuple, rng):
        path = tmp_path / "bell.json"
        path.write_text(json.dumps(bell_doc()))
        code, out, _ = cli(["lu", "--input", str(path), "--input-b", str(path)])
        result = json.loads(out)
        assert len(result["invariants"]) == 18
        assert result["lu_similar"] is True

    def test_imaginarity(self, cli, write_tuple, rng):
        t = StateTuple.from_states([random_density(2, 2, rng) for _ in range(3)])
        code, out, _ = cli(["imaginarity", "--input", write_tuple(t)])
        result = json.loads(out)
        assert result["residual"] < 1e-9

    def test_wrong_shape_rejected(self, cli, write_tuple, rng):
        path = write_tuple(random_pure_tuple(2, 2, rng))
        code, _, err = cli(["entanglement", "--input", path])
        assert code == 2


class TestExitCodes:
    def test_unknown_subcommand(self, cli):
        code, _, _ = cli(["spectralize"])
        assert code == 2

    def test_missing_file(self, cli):
        code, _, err = cli(["invariant", "--input", "/nonexistent/file.json"])
        assert code == 2 and "cannot read" in err

    def test_invalid_document(self, cli, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 2, "states": [
            {"kind": "pure", "data": [[0.5, 0.0], [0.0, 0.0]]}]}))
        code, _, err = cli(["invariant", "--input", str(path)])
        assert code == 2 and "not normalized" in err

    def test_invalid_epsilon(self, cli, write_tuple, rng):
        path = write_tuple(random_pure_tuple(2, 2, rng))
        code, _, err = cli(["estimate", "--input", path, "--epsilon", "0",
                            "--delta", "0.1"])
        assert code == 2
