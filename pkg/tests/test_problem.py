import json

import numpy as np
import pytest

import fracorder as fo
from fracorder.errors import BadPayload, SpecError
from fracorder.problem import prepare


class TestSchemaValidation:
    def test_minimal_spec_accepted(self, demo_spec_doc):
        spec = fo.spec_from_dict(demo_spec_doc)
        assert spec.K == 3
        assert spec.rho0 == 0.5

    def test_unknown_top_level_field_rejected(self, demo_spec_doc):
        demo_spec_doc["extra"] = 1
        with pytest.raises(SpecError):
            fo.spec_from_dict(demo_spec_doc)

    def test_unknown_operator_field_rejected(self, demo_spec_doc):
        demo_spec_doc["operator"]["fudge"] = 2.0
        with pytest.raises(SpecError):
            fo.spec_from_dict(demo_spec_doc)

    def test_unknown_phi_field_rejected(self, demo_spec_doc):
        demo_spec_doc["phi"]["normalize"] = True
        with pytest.raises(SpecError):
            fo.spec_from_dict(demo_spec_doc)

    def test_missing_required_rejected(self, demo_spec_doc):
        del demo_spec_doc["K"]
        with pytest.raises(SpecError):
            fo.spec_from_dict(demo_spec_doc)

    def test_rho0_bounds(self, demo_spec_doc):
        demo_spec_doc["rho0"] = 1.0
        with pytest.raises(SpecError):
            fo.spec_from_dict(demo_spec_doc)

    def test_all_operator_kinds_load(self):
        docs = [
            {"operator": {"kind": "explicit_spectrum", "eigenvalues": [2.0, 3.0]},
             "phi": {"coefficients": [1.0, 1.0]}, "K": 2},
            {"operator": {"kind": "symmetric_matrix",
                          "entries": [[2.0, 0.0], [0.0, 3.0]]},
             "phi": {"vector": [1.0, 0.0]}, "K": 2},
            {"operator": {"kind": "dirichlet_laplacian_1d", "length": 3.0,
                          "grid_points": 1025},
             "phi": {"coefficients": [1.0]}, "K": 1},
        ]
        for doc in docs:
            spec = fo.spec_from_dict(doc)
            prep = prepare(spec)
            assert prep.spectrum.count == spec.K


class TestLoadSpec:
    def test_round_trip_file(self, spec_file, demo_spec_doc):
        spec = fo.load_spec(spec_file(demo_spec_doc))
        assert spec.K == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecError):
            fo.load_spec(str(tmp_path / "nope.json"))

    def test_invalid_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        with pytest.raises(SpecError):
            fo.load_spec(str(bad))

    def test_non_object_document(self, tmp_path):
        arr = tmp_path / "arr.json"
        arr.write_text(json.dumps([1, 2, 3]), encoding="utf-8")
        with pytest.raises(SpecError):
            fo.load_spec(str(arr))


class TestProblemSpec:
    def test_sequence_phi_coerced_to_coefficients(self):
        spec = fo.ProblemSpec(operator=fo.ExplicitSpectrum(eigenvalues=(1.0, 2.0)),
                              phi=(1.0, 0.5), K=2)
        assert spec.phi.form == "coefficients"

    def test_construction_is_fail_fast(self):
        # K exceeding the spectrum must fail at construction, not first use.
        with pytest.raises(BadPayload):
            fo.ProblemSpec(operator=fo.ExplicitSpectrum(eigenvalues=(1.0,)),
                           phi=(1.0, 1.0), K=2)

    def test_bad_rho0(self):
        with pytest.raises(SpecError):
            fo.ProblemSpec(operator=fo.ExplicitSpectrum(eigenvalues=(1.0,)),
                           phi=(1.0,), K=1, rho0=1.5)


class TestPrepare:
    def test_cached_and_frozen(self, explicit_spec):
        prep1 = prepare(explicit_spec)
        prep2 = prepare(explicit_spec)
        assert prep1 is prep2
        assert not prep1.phi_coeffs.flags.writeable

    def test_norm_for_coefficients(self, explicit_spec):
        prep = prepare(explicit_spec)
        assert prep.phi_norm_sq == pytest.approx(1.0 + 0.25 + 0.0625, rel=1e-15)

    def test_norm_for_samples_uses_quadrature(self):
        # ||sin||^2 on [0, pi] is pi/2.
        n = 2049
        x = np.linspace(0.0, np.pi, n)
        spec = fo.ProblemSpec(
            operator=fo.DirichletLaplacian1D(length=float(np.pi), grid_points=n),
            phi=fo.InitialData.samples(tuple(np.sin(x))), K=2)
        assert prepare(spec).phi_norm_sq == pytest.approx(np.pi / 2.0, rel=1e-12)
