"""
JSON problem files and CSV result files.

A problem file looks like::

    {
      "dim": 3,
      "observables": [{"name": "L1", "builtin": "spin1_L1"},
                      {"name": "A", "basis": [[[1, 0], [0, 0], [0, 0]], ...]}],
      "costs": [{"type": "quadratic", "values": [-1, 0, 1]}],
      "measure": "C",
      "weights": {"samples": 41}
    }

``basis`` lists the ``d`` basis vectors, each as ``d`` complex entries
written ``[re, im]`` (plain numbers are read as real). A single cost entry
applies to every observable. ``weights`` is either one weight vector, a
list of weight vectors or ``{"samples": k}``.
"""

import csv
import json

import numpy as np

from .errors import ErrorMeasure
from .numerics import ValidationError
from .observables import Observable, fourier_pair, projective_from_basis, spin1_triple
from .region import ProblemInstance, sample_weights
from .transport import CostFunction

BUILTINS = ("spin1_L1", "spin1_L2", "spin1_L3", "fourier_position", "fourier_momentum")


def builtin_observable(name, dim):
    if name.startswith("spin1_"):
        if dim != 3:
            raise ValidationError(f"builtin {name!r} needs dim 3, got {dim}")
        return spin1_triple()[int(name[-1]) - 1]
    if name in ("fourier_position", "fourier_momentum"):
        pos, mom = fourier_pair(dim)
        return pos if name == "fourier_position" else mom
    raise ValidationError(f"unknown builtin {name!r}; expected one of {', '.join(BUILTINS)}")


def parse_complex(value, where):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ValidationError(f"{where}: expected a number or an [re, im] pair, got {value!r}")


def parse_complex_matrix(rows, d, where):
    if not isinstance(rows, list) or len(rows) != d:
        raise ValidationError(f"{where}: expected {d} rows")
    out = np.zeros((d, d), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ValidationError(f"{where}[{r}]: expected {d} entries")
        for c, v in enumerate(row):
            out[r, c] = parse_complex(v, f"{where}[{r}][{c}]")
    return out


def parse_observable(entry, d, where):
    if not isinstance(entry, dict):
        raise ValidationError(f"{where}: expected an object")
    name = entry.get("name")
    try:
        if "builtin" in entry:
            obs = builtin_observable(entry["builtin"], d)
        elif "basis" in entry:
            B = parse_complex_matrix(entry["basis"], d, f"{where}.basis")
            obs = projective_from_basis(B.T, values=entry.get("values"))
        elif "elements" in entry:
            els = entry["elements"]
            if not isinstance(els, list):
                raise ValidationError(f"{where}.elements: expected a list of matrices")
            mats = [parse_complex_matrix(E, d, f"{where}.elements[{k}]") for k, E in enumerate(els)]
            obs = Observable(np.array(mats), values=entry.get("values"))
        else:
            raise ValidationError(f"{where}: needs one of 'builtin', 'basis', 'elements'")
    except ValidationError as exc:
        msg = str(exc)
        raise ValidationError(msg if msg.startswith(where) else f"{where}: {msg}") from None
    noise = entry.get("noise")
    if noise is not None:
        if not isinstance(noise, (int, float)) or not 0 <= noise <= 1:
            raise ValidationError(f"{where}.noise: expected a number in [0, 1]")
        uniform = np.array([np.eye(d) / obs.outcomes] * obs.outcomes)
        obs = Observable((1 - noise) * obs.elements + noise * uniform, values=obs.values)
    obs.name = name
    return obs


def parse_cost(entry, size, where):
    if not isinstance(entry, dict) or "type" not in entry:
        raise ValidationError(f"{where}: expected an object with a 'type'")
    kind = entry["type"]
    try:
        if kind == "discrete":
            return CostFunction.discrete(size)
        if kind == "quadratic":
            values = entry.get("values", list(range(size)))
            if len(values) != size:
                raise ValidationError(f"expected {size} outcome values")
            return CostFunction.quadratic(values)
        if kind == "matrix":
            if "matrix" not in entry:
                raise ValidationError("missing 'matrix'")
            return CostFunction.from_matrix(entry["matrix"], entry.get("values"))
    except (ValidationError, TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}.type: unknown cost type {kind!r}; expected discrete, quadratic or matrix")


def parse_weights(spec, n, where="weights"):
    if isinstance(spec, dict):
        k = spec.get("samples")
        if not isinstance(k, int) or k < 1:
            raise ValidationError(f"{where}.samples: expected a positive integer")
        return sample_weights(n, k)
    if isinstance(spec, list) and spec and all(isinstance(v, (int, float)) for v in spec):
        spec = [spec]
    if not isinstance(spec, list) or not spec:
        raise ValidationError(f"{where}: expected a weight vector, a list of them or {{'samples': k}}")
    W = []
    for k, w in enumerate(spec):
        if not isinstance(w, list) or len(w) != n or not all(isinstance(v, (int, float)) for v in w):
            raise ValidationError(f"{where}[{k}]: expected {n} numbers")
        W.append(np.array(w, dtype=float))
    return np.array(W)


class Problem:
    """Parsed problem file."""

    def __init__(self, instance, measure, weights):
        self.instance = instance
        self.measure = measure
        self.weights = weights


def parse_problem(doc, samples=None, measure=None):
    """Validate a decoded problem document.

    ``samples`` and ``measure`` override the corresponding document keys.
    """
    if not isinstance(doc, dict):
        raise ValidationError("problem file: expected a JSON object")
    d = doc.get("dim")
    if not isinstance(d, int) or d < 2:
        raise ValidationError("dim: expected an integer >= 2")
    obs_spec = doc.get("observables")
    if not isinstance(obs_spec, list) or not obs_spec:
        raise ValidationError("observables: expected a non-empty list")
    observables = [parse_observable(e, d, f"observables[{k}]") for k, e in enumerate(obs_spec)]
    cost_spec = doc.get("costs")
    if not isinstance(cost_spec, list) or not cost_spec:
        raise ValidationError("costs: expected a non-empty list")
    if len(cost_spec) == 1:
        cost_spec = cost_spec * len(observables)
    if len(cost_spec) != len(observables):
        raise ValidationError(f"costs: expected 1 or {len(observables)} entries, got {len(cost_spec)}")
    costs = [parse_cost(e, d, f"costs[{k}]") for k, e in enumerate(cost_spec)]
    try:
        instance = ProblemInstance(observables, costs)
    except ValidationError as exc:
        raise ValidationError(f"problem: {exc}") from None
    m = measure if measure is not None else doc.get("measure", "M")
    m = ErrorMeasure.parse(m).value
    n = len(observables)
    if samples is not None:
        weights = sample_weights(n, samples)
    elif "weights" in doc:
        weights = parse_weights(doc["weights"], n)
    else:
        weights = sample_weights(n, 41 if n == 2 else 200)
    return Problem(instance, m, weights)


def load_problem(path, samples=None, measure=None):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_problem(doc, samples=samples, measure=measure)


def csv_header(n):
    return (
        ["sample_index", "measure"]
        + [f"w_{i + 1}" for i in range(n)]
        + ["b"]
        + [f"eps_{i + 1}" for i in range(n)]
        + ["gap", "status"]
    )


def fmt(v):
    return "%.12g" % v


def write_csv(path_or_file, sample):
    """Write a region sample as CSV, one row per boundary point."""
    n = len(sample.caps)
    rows = [csv_header(n)]
    for k, p in enumerate(sample.points):
        rows.append(
            [str(k), p.measure]
            + [fmt(v) for v in p.w]
            + [fmt(p.b)]
            + [fmt(v) for v in p.epsilon]
            + [fmt(p.gap), p.status]
        )
    if hasattr(path_or_file, "write"):
        csv.writer(path_or_file, lineterminator="\n").writerows(rows)
        return
    with open(path_or_file, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def read_csv(path):
    """Parse a result CSV back into a list of dicts with float fields."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        out = []
        for row in reader:
            parsed = {}
            for key, val in row.items():
                if key in ("measure", "status"):
                    parsed[key] = val
                elif key == "sample_index":
                    parsed[key] = int(val)
                else:
                    parsed[key] = float(val)
            out.append(parsed)
    return out


def sample_to_json(sample):
    return {
        "measure": sample.measure,
        "caps": [float(c) for c in sample.caps],
        "points": [
            {
                "w": [float(v) for v in p.w],
                "b": float(p.b),
                "epsilon": [float(v) for v in p.epsilon],
                "gap": float(p.gap),
                "status": p.status,
            }
            for p in sample.points
        ],
    }
