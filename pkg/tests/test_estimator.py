import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import fracorder as fo
from fracorder.errors import BadPayload, NotAdmissible, NotMonotone
from fracorder.problem import prepare


def _observations(spec, kind, rho, times):
    prep = prepare(spec)
    return np.array([
        [t, fo.w_value(prep.spectrum.eigenvalues, prep.phi_coeffs, kind, t, rho)]
        for t in times])


class TestFit:
    def test_round_trip(self, explicit_spec):
        t0 = fo.threshold_T0(0.5)
        X = _observations(explicit_spec, "norm_sq", 0.68,
                          (t0, 1.5 * t0, 3.0 * t0))
        est = fo.FractionalOrderEstimator(problem=explicit_spec).fit(X)
        assert est.rho_ == pytest.approx(0.68, abs=1e-8)
        assert est.order_spread_ < 1e-7
        assert est.t0_admissible_
        assert est.n_features_in_ == 2
        assert len(est.results_) == 3
        assert np.all(np.isfinite(est.orders_))

    def test_dict_problem_accepted(self, demo_spec_doc):
        spec = fo.spec_from_dict(demo_spec_doc)
        t0 = fo.threshold_T0(0.5)
        X = _observations(spec, "norm_sq", 0.8, (t0,))
        est = fo.FractionalOrderEstimator(problem=demo_spec_doc).fit(X)
        assert est.rho_ == pytest.approx(0.8, abs=1e-8)

    def test_problem_required(self):
        with pytest.raises(BadPayload):
            fo.FractionalOrderEstimator().fit([[90.0, 0.1]])
        with pytest.raises(BadPayload):
            fo.FractionalOrderEstimator(problem="spec.json").fit([[90.0, 0.1]])

    def test_flat_pair_is_one_observation(self, explicit_spec):
        t0 = fo.threshold_T0(0.5)
        X = _observations(explicit_spec, "norm_sq", 0.68, (t0,))
        est = fo.FractionalOrderEstimator(problem=explicit_spec)
        est.fit([float(X[0, 0]), float(X[0, 1])])
        assert est.orders_.shape == (1,)

    def test_observation_shape_enforced(self, explicit_spec):
        est = fo.FractionalOrderEstimator(problem=explicit_spec)
        with pytest.raises(BadPayload):
            est.fit([[90.0, 0.1, 1.0]])
        with pytest.raises(BadPayload):
            est.fit(np.empty((0, 2)))

    def test_inadmissible_row_raises(self, explicit_spec):
        t0 = fo.threshold_T0(0.5)
        with pytest.raises(NotAdmissible):
            fo.FractionalOrderEstimator(problem=explicit_spec).fit(
                [[t0, 1e6]])

    def test_nonmonotone_row_raises_by_default(self):
        spec = fo.ProblemSpec(
            operator=fo.ExplicitSpectrum(eigenvalues=(100.0,)),
            phi=(1.0,), K=1, rho0=0.3)
        est = fo.FractionalOrderEstimator(problem=spec, rho0=0.3)
        with pytest.raises(NotMonotone):
            est.fit([[0.5, 2e-9]])

    def test_nonmonotone_row_skipped_when_allowed(self):
        # One certifiable row and one below-threshold ambiguous row: the
        # lenient mode keeps the good row and reports NaN for the other.
        spec = fo.ProblemSpec(
            operator=fo.ExplicitSpectrum(eigenvalues=(100.0,)),
            phi=(1.0,), K=1, rho0=0.3)
        t_good = fo.threshold_T0(0.3)
        d_good = _observations(spec, "norm_sq", 0.6, (t_good,))[0, 1]
        X = [[t_good, d_good], [0.5, 2e-9]]
        est = fo.FractionalOrderEstimator(problem=spec, rho0=0.3,
                                          require_monotone=False).fit(X)
        assert est.orders_[0] == pytest.approx(0.6, abs=1e-8)
        assert np.isnan(est.orders_[1])
        assert est.results_[1] is None
        assert est.rho_ == pytest.approx(0.6, abs=1e-8)

    def test_all_rows_skipped_raises(self):
        spec = fo.ProblemSpec(
            operator=fo.ExplicitSpectrum(eigenvalues=(100.0,)),
            phi=(1.0,), K=1, rho0=0.3)
        est = fo.FractionalOrderEstimator(problem=spec, rho0=0.3,
                                          require_monotone=False)
        with pytest.raises(NotMonotone):
            est.fit([[0.5, 2e-9]])


class TestPredict:
    def test_round_trips_the_training_observation(self, explicit_spec):
        t0 = fo.threshold_T0(0.5)
        X = _observations(explicit_spec, "norm_sq", 0.68, (t0,))
        est = fo.FractionalOrderEstimator(problem=explicit_spec).fit(X)
        pred = est.predict([t0])
        assert pred[0] == pytest.approx(X[0, 1], rel=1e-9)

    def test_requires_fit(self, explicit_spec):
        est = fo.FractionalOrderEstimator(problem=explicit_spec)
        with pytest.raises(NotFittedError):
            est.predict([1.0])

    def test_times_validated(self, explicit_spec):
        t0 = fo.threshold_T0(0.5)
        X = _observations(explicit_spec, "norm_sq", 0.68, (t0,))
        est = fo.FractionalOrderEstimator(problem=explicit_spec).fit(X)
        for bad in ([], [0.0], [[1.0, 2.0]], [float("nan")]):
            with pytest.raises(BadPayload):
                est.predict(bad)


class TestSklearnContract:
    def test_get_params_round_trip(self, explicit_spec):
        est = fo.FractionalOrderEstimator(problem=explicit_spec, kind="inner_phi",
                                          rho0=0.6, noise_band=1e-4)
        params = est.get_params()
        assert params["kind"] == "inner_phi"
        assert params["rho0"] == 0.6
        rebuilt = fo.FractionalOrderEstimator(**params)
        assert rebuilt.get_params() == params

    def test_clone_is_unfitted(self, explicit_spec):
        t0 = fo.threshold_T0(0.5)
        X = _observations(explicit_spec, "norm_sq", 0.68, (t0,))
        est = fo.FractionalOrderEstimator(problem=explicit_spec).fit(X)
        dup = clone(est)
        assert dup.get_params()["problem"] == explicit_spec
        assert not hasattr(dup, "rho_")

    def test_set_params(self, explicit_spec):
        est = fo.FractionalOrderEstimator(problem=explicit_spec)
        est.set_params(kind="a_norm_sq", rho_tol=1e-8)
        assert est.kind == "a_norm_sq"
        assert est.rho_tol == 1e-8
