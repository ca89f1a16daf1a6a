"""scikit-learn style facade over the order-recovery machinery.

The numerical core lives in plain functions (solve, observe, invert); this
wrapper packages the common workflow "I have scalar observations at one or
more times, give me the order" behind the fit/predict idiom so it can sit
in sklearn pipelines and parameter searches.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from ._validation import as_observation_array
from .errors import BadPayload, NotMonotone
from .inversion import InversionRequest, invert
from .observation import check_kind, w_value
from .problem import ProblemSpec, prepare, spec_from_dict


class FractionalOrderEstimator(BaseEstimator):
    """Recover the fractional time order from scalar observations.

    Parameters
    ----------
    problem : ProblemSpec or dict, default None
        The forward problem (operator, initial data, mode count).  A dict is
        accepted and validated the same way the JSON loader validates files.
        Required by fit; it is a parameter rather than a fit argument so
        that sklearn cloning and grid search work on it.
    kind : str, default "norm_sq"
        Which scalar observation the data represents; one of "norm_sq",
        "a_norm_sq", "inner_phi".
    rho0 : float, default 0.5
        Lower edge of the admissible order interval [rho0, 1].
    rho_tol : float, default 1e-10
        Bracket width at which the root search stops.
    noise_band : float, default 0.0
        Absolute slack added to the admissibility interval before refusing
        an observation; observed values inside the widened interval are
        clamped to the exact one.
    require_monotone : bool, default True
        With the default, a fit observation whose pre-scan shows the
        observation curve is not monotone (possible below the safe-time
        threshold) raises; with False such rows are skipped and recorded
        as NaN in ``orders_``.

    Attributes
    ----------
    results_ : list
        Per-row InversionResult, or None for skipped rows.
    orders_ : ndarray
        Per-row recovered order (NaN for skipped rows).
    rho_ : float
        Mean of the recovered orders, the estimate used by predict.
    order_spread_ : float
        max - min over the recovered orders; a large spread means the rows
        disagree about the order (inconsistent data or below-threshold
        times).
    t0_admissible_ : bool
        True when every fitted row had its observation time at or above
        the monotonicity threshold.
    """

    def __init__(self, problem=None, kind="norm_sq", rho0=0.5,
                 rho_tol=1e-10, noise_band=0.0, require_monotone=True):
        self.problem = problem
        self.kind = kind
        self.rho0 = rho0
        self.rho_tol = rho_tol
        self.noise_band = noise_band
        self.require_monotone = require_monotone

    def _spec(self) -> ProblemSpec:
        if self.problem is None:
            raise BadPayload("problem must be set before fitting")
        if isinstance(self.problem, ProblemSpec):
            return self.problem
        if isinstance(self.problem, dict):
            return spec_from_dict(self.problem)
        raise BadPayload(
            f"problem must be a ProblemSpec or dict, got {type(self.problem).__name__}")

    def fit(self, X, y=None):
        """Recover one order per observation row.

        Parameters
        ----------
        X : array-like of shape (n_samples, 2)
            Columns (t0, d0): observation time and observed scalar value.
        y : ignored
            Present for sklearn API compatibility.
        """
        spec = self._spec()
        check_kind(self.kind)
        obs = as_observation_array(X)
        results = []
        orders = np.full(obs.shape[0], np.nan)
        admissible = True
        for i, (t0, d0) in enumerate(obs):
            req = InversionRequest(spec=spec, kind=self.kind, t0=float(t0),
                                   d0=float(d0), rho0=float(self.rho0),
                                   rho_tol=float(self.rho_tol),
                                   noise_band=float(self.noise_band))
            try:
                res = invert(req)
            except NotMonotone:
                if self.require_monotone:
                    raise
                results.append(None)
                continue
            results.append(res)
            orders[i] = res.rho_hat
            admissible = admissible and res.t0_admissible
        if not np.any(np.isfinite(orders)):
            raise NotMonotone(
                "every observation row was skipped by the monotonicity pre-scan")
        self.results_ = results
        self.orders_ = orders
        self.rho_ = float(np.nanmean(orders))
        valid = orders[np.isfinite(orders)]
        self.order_spread_ = float(np.max(valid) - np.min(valid))
        self.t0_admissible_ = bool(admissible)
        self.n_features_in_ = 2
        return self

    def predict(self, times):
        """Forward-map times to the scalar observation at the fitted order."""
        if not hasattr(self, "rho_"):
            raise NotFittedError(
                "this FractionalOrderEstimator is not fitted yet; call fit first")
        spec = self._spec()
        prep = prepare(spec)
        t = np.atleast_1d(np.asarray(times, dtype=float))
        if t.ndim != 1:
            raise BadPayload(f"times must be one-dimensional, got shape {t.shape}")
        if t.size == 0 or not np.all(np.isfinite(t)) or np.min(t) <= 0.0:
            raise BadPayload("times must be finite and strictly positive")
        vals = [w_value(prep.spectrum.eigenvalues, prep.phi_coeffs,
                        self.kind, float(ti), self.rho_) for ti in t]
        return np.asarray(vals)
