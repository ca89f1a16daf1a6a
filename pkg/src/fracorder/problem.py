"""Problem specification: operator + initial data + truncation policy.

A ProblemSpec pins down everything except the order rho, which stays a
free parameter so the same spec serves forward solves, observation curves,
and order inversion.  JSON ingestion is schema-validated up front and
rejects unknown fields, so a typo in a spec file fails loudly instead of
silently running with defaults.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import jsonschema
import numpy as np

from .errors import SpecError
from .operators import (
    DirichletLaplacian1D,
    ExplicitSpectrum,
    InitialData,
    OperatorDescription,
    Spectrum,
    SymmetricMatrix,
    eigenpairs,
    project,
    simpson_weights,
)

__all__ = ["ProblemSpec", "PreparedProblem", "PROBLEM_SCHEMA",
           "spec_from_dict", "load_spec", "prepare"]


_NUMBER_ARRAY = {"type": "array", "minItems": 1, "items": {"type": "number"}}

PROBLEM_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["operator", "phi", "K"],
    "properties": {
        "operator": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "eigenvalues"],
                    "properties": {
                        "kind": {"const": "explicit_spectrum"},
                        "eigenvalues": _NUMBER_ARRAY,
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "entries"],
                    "properties": {
                        "kind": {"const": "symmetric_matrix"},
                        "entries": {
                            "type": "array",
                            "minItems": 1,
                            "items": _NUMBER_ARRAY,
                        },
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "length"],
                    "properties": {
                        "kind": {"const": "dirichlet_laplacian_1d"},
                        "length": {"type": "number", "exclusiveMinimum": 0},
                        "grid_points": {"type": "integer", "minimum": 3},
                    },
                },
            ]
        },
        "phi": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["coefficients"],
                    "properties": {"coefficients": _NUMBER_ARRAY},
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["samples"],
                    "properties": {"samples": _NUMBER_ARRAY},
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["vector"],
                    "properties": {"vector": _NUMBER_ARRAY},
                },
            ]
        },
        "K": {"type": "integer", "minimum": 1},
        "rho0": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "tail_tol": {"type": "number", "exclusiveMinimum": 0},
    },
}


@dataclass(frozen=True)
class ProblemSpec:
    """Operator description, initial data, retained mode count K.

    ``rho0`` is the lower end of the admissible order interval [rho0, 1];
    it seeds default grids and the inversion bracket.  ``tail_tol``, when
    set, makes forward solves fail rather than return a state whose
    certified truncation tail exceeds it.
    """

    operator: OperatorDescription
    phi: InitialData
    K: int
    rho0: float = 0.5
    tail_tol: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.operator,
                          (ExplicitSpectrum, SymmetricMatrix, DirichletLaplacian1D)):
            raise SpecError(
                f"operator must be a descriptor, got {type(self.operator).__name__}")
        if not isinstance(self.phi, InitialData):
            object.__setattr__(self, "phi", InitialData.coefficients(tuple(self.phi)))
        if not (isinstance(self.K, int) and self.K >= 1):
            raise SpecError(f"K must be a positive integer, got {self.K!r}")
        if not (isinstance(self.rho0, float) and 0.0 < self.rho0 < 1.0):
            raise SpecError(f"rho0 must lie in (0, 1), got {self.rho0!r}")
        if self.tail_tol is not None and not (
                isinstance(self.tail_tol, float)
                and math.isfinite(self.tail_tol) and self.tail_tol > 0.0):
            raise SpecError(f"tail_tol must be positive, got {self.tail_tol!r}")
        # Fail fast: surfaces K-vs-operator mismatches, asymmetric payloads
        # and indefinite matrices at construction time.
        prepare(self)


class PreparedProblem(NamedTuple):
    spectrum: Spectrum
    phi_coeffs: np.ndarray
    phi_norm_sq: float


@lru_cache(maxsize=64)
def prepare(spec: ProblemSpec) -> PreparedProblem:
    """Eigen data and projected coefficients, computed once per spec.

    ``phi_norm_sq`` is the squared H-norm of the full initial data (exact
    for coefficient and vector forms, quadrature for samples); combined
    with Parseval it certifies the projection tail sum_{k>K} |phi_k|^2.
    """
    spectrum = eigenpairs(spec.operator, spec.K)
    coeffs = project(spec.operator, spec.K, spec.phi)
    coeffs.flags.writeable = False
    vals = spec.phi.array
    if spec.phi.form == "samples":
        op = spec.operator
        w = simpson_weights(op.grid_points, op.length / (op.grid_points - 1))
        norm_sq = float(w @ (vals * vals))
    else:
        norm_sq = float(vals @ vals)
    return PreparedProblem(spectrum, coeffs, norm_sq)


def _operator_from_dict(data: dict) -> OperatorDescription:
    kind = data["kind"]
    if kind == "explicit_spectrum":
        return ExplicitSpectrum(tuple(float(v) for v in data["eigenvalues"]))
    if kind == "symmetric_matrix":
        return SymmetricMatrix(tuple(tuple(float(v) for v in row)
                                     for row in data["entries"]))
    payload = {"length": float(data["length"])}
    if "grid_points" in data:
        payload["grid_points"] = int(data["grid_points"])
    return DirichletLaplacian1D(**payload)


def _phi_from_dict(data: dict) -> InitialData:
    form, values = next(iter(data.items()))
    return InitialData(form, tuple(float(v) for v in values))


def spec_from_dict(data: dict) -> ProblemSpec:
    """Build a ProblemSpec from a parsed JSON object, schema-checked."""
    try:
        jsonschema.validate(data, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SpecError(f"problem spec rejected: {exc.message}") from exc
    kwargs = {}
    if "rho0" in data:
        kwargs["rho0"] = float(data["rho0"])
    if "tail_tol" in data:
        kwargs["tail_tol"] = float(data["tail_tol"])
    return ProblemSpec(
        operator=_operator_from_dict(data["operator"]),
        phi=_phi_from_dict(data["phi"]),
        K=int(data["K"]),
        **kwargs,
    )


def load_spec(path: str) -> ProblemSpec:
    """Read and validate a problem-spec JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read spec file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecError("spec file must contain a JSON object")
    return spec_from_dict(data)
