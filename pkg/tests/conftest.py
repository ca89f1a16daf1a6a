import csv
import json
import pathlib

import numpy as np
import pytest
from hypothesis import settings

import fracorder as fo

DATA_DIR = pathlib.Path(__file__).resolve().parent / "data"

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def oracle_rows():
    """Frozen high-precision Mittag-Leffler values: (rho, mu, x, reference)."""
    rows = []
    with open(DATA_DIR / "ml_oracle.csv", newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append((float(rec["rho"]), float(rec["mu"]), float(rec["x"]),
                         float(rec["reference_value"])))
    assert len(rows) > 400
    return rows


@pytest.fixture(scope="session")
def matrix_case_oracle():
    """Frozen dense-matrix solve oracle (independent eigendecomposition)."""
    with open(DATA_DIR / "matrix_case_oracle.json") as fh:
        return json.load(fh)


@pytest.fixture
def explicit_spec():
    return fo.ProblemSpec(
        operator=fo.ExplicitSpectrum(eigenvalues=(1.0, 2.5, 4.0)),
        phi=fo.InitialData.coefficients((1.0, 0.5, 0.25)),
        K=3)


@pytest.fixture
def matrix_spec():
    entries = ((2.0, 0.3, 0.0), (0.3, 3.0, 0.1), (0.0, 0.1, 4.5))
    return fo.ProblemSpec(
        operator=fo.SymmetricMatrix(entries=entries),
        phi=fo.InitialData.vector((0.8, -0.4, 0.3)),
        K=3)


@pytest.fixture
def laplacian_spec():
    return fo.ProblemSpec(
        operator=fo.DirichletLaplacian1D(length=float(np.pi), grid_points=2049),
        phi=fo.InitialData.coefficients((1.0, -0.5, 0.25, 0.1)),
        K=4)


@pytest.fixture
def spec_file(tmp_path):
    """Write a problem-spec dict to a JSON file; returns the path factory."""
    def write(doc, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def demo_spec_doc():
    return {
        "operator": {"kind": "explicit_spectrum", "eigenvalues": [1.0, 2.5, 4.0]},
        "phi": {"coefficients": [1.0, 0.5, 0.25]},
        "K": 3,
        "rho0": 0.5,
    }


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Replay the acceptance-criterion verdict lines after the run."""
    lines = getattr(config, "_criterion_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
