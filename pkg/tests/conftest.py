import io
import json
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from bargmann.cli import run_command
from bargmann.core import StateTuple, haar_unit_vector, make_rng


@pytest.fixture
def rng():
    return make_rng(20240817)


@pytest.fixture
def cli():
    """Run the CLI in-process, capturing exit code, stdout and stderr."""
    def run(argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = run_command(list(argv))
        return code, out.getvalue(), err.getvalue()
    return run


@pytest.fixture
def write_tuple(tmp_path):
    """Write a StateTuple (or raw document dict) to a JSON document file."""
    def write(states, name="tuple.json"):
        if isinstance(states, dict):
            doc = states
        else:
            entries = []
            for k in range(len(states)):
                s = states.states[k]
                if s.ndim == 1:
                    entries.append({"kind": "pure",
                                    "data": [[float(a.real), float(a.imag)] for a in s]})
                else:
                    entries.append({"kind": "mixed",
                                    "data": [[[float(v.real), float(v.imag)] for v in row]
                                             for row in s]})
            doc = {"dim": states.dim, "states": entries}
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return write


def random_pure_tuple(n, d, rng):
    return StateTuple.from_vectors([haar_unit_vector(d, rng) for _ in range(n)])


@pytest.fixture
def pure_tuple_factory():
    return random_pure_tuple


def bell_state():
    v = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    return np.outer(v, v.conj())
