"""Problem configuration: JSON <-> metric, endpoint sets, objective and solver settings.

Schema (all keys except ``metric``, ``x0`` and ``x1`` optional)::

    {
      "metric": {"kind": "euclidean" | "conformal_cos" | "conformal_phi" | "custom", ...},
      "x0": {"kind": "point", "p": [0, 0]},
      "x1": {"kind": "ball", "center": [3, 0], "radius": 1},
      "n": 64,
      "rule": "trapezoidal" | "left",
      "functional": "energy" | "length",
      "n_list": [8, 16, 32, 64, 128, 256],
      "solver": {"max_iters": 5000, "grad_tol": 1e-8, "memory": 10, "seed": 0, "multistart": false},
      "reference": {"d_g": 25.13} | {"min_energy": 631.65}
    }

``conformal_phi`` takes ``phi`` (expression in x1..xD), ``dim``, ``c1``, ``c2``, ``l_h``;
without ``phi`` it is the stock metric exp(sin(x1) cos(x2)) I.  ``custom`` takes a
``H`` matrix of expressions plus ``c1``, ``c2``, ``l_h``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import metric as metrics
from .objectives import DiscreteObjective, Functional, Rule
from .sets import EndpointSet, Point, check_instance, set_from_dict
from .solver import SolveConfig

DEFAULT_N_LIST = (8, 16, 32, 64, 128, 256)


class ConfigError(ValueError):
    """Malformed or inconsistent problem configuration."""


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"missing field '{where}.{key}'")
    return d[key]


def _symbols(dim):
    import sympy

    return sympy.symbols(" ".join(f"x{i + 1}" for i in range(dim)), seq=True)


def _lambdify_broadcast(expr, syms):
    import sympy

    fn = sympy.lambdify(syms, expr, modules="numpy")

    def call(x):
        x = np.asarray(x, dtype=float)
        val = fn(*np.moveaxis(x, -1, 0))
        return np.broadcast_to(np.asarray(val, dtype=float), x.shape[:-1])

    return call


def _parse(text, syms, where):
    import sympy

    try:
        expr = sympy.sympify(text, locals={str(s): s for s in syms})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ConfigError(f"cannot parse expression in '{where}': {text!r}") from exc
    extra = expr.free_symbols - set(syms)
    if extra:
        raise ConfigError(f"unknown symbols {sorted(map(str, extra))} in '{where}'")
    return expr


def _bounds(d, where):
    try:
        return float(_require(d, "c1", where)), float(_require(d, "c2", where)), float(_require(d, "l_h", where))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"'{where}' bounds must be numbers") from exc


def metric_from_dict(d: dict) -> metrics.MetricField:
    if not isinstance(d, dict):
        raise ConfigError("field 'metric' must be an object")
    kind = _require(d, "kind", "metric")
    if kind == "euclidean":
        return metrics.euclidean(int(d.get("dim", 2)))
    if kind == "conformal_cos":
        return metrics.conformal_cos()
    if kind == "conformal_phi":
        if "phi" not in d:
            return metrics.default_conformal_phi()
        import sympy

        dim = int(d.get("dim", 2))
        syms = _symbols(dim)
        phi = _parse(d["phi"], syms, "metric.phi")
        c1, c2, l_h = _bounds(d, "metric")
        grads = [_lambdify_broadcast(sympy.diff(phi, s), syms) for s in syms]
        return metrics.conformal(
            _lambdify_broadcast(phi, syms), dim, c1, c2, l_h,
            grad_phi=lambda x: np.stack([g(x) for g in grads], axis=-1),
            params={"phi": str(d["phi"])})
    if kind == "custom":
        import sympy

        rows = _require(d, "H", "metric")
        dim = len(rows)
        if dim == 0 or any(len(r) != dim for r in rows):
            raise ConfigError("'metric.H' must be a square matrix of expressions")
        syms = _symbols(dim)
        exprs = [[_parse(e, syms, f"metric.H[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(rows)]
        h_fns = [[_lambdify_broadcast(e, syms) for e in r] for r in exprs]
        dh_fns = [[[_lambdify_broadcast(sympy.diff(e, s), syms) for e in r] for r in exprs] for s in syms]
        c1, c2, l_h = _bounds(d, "metric")

        def h(x):
            return np.stack([np.stack([f(x) for f in r], axis=-1) for r in h_fns], axis=-2)

        def dh(x):
            return np.stack([np.stack([np.stack([f(x) for f in r], axis=-1) for r in mat], axis=-2)
                             for mat in dh_fns], axis=-3)

        return metrics.MetricField(dim=dim, h_eval=h, dh_eval=dh, c1=c1, c2=c2, l_h=l_h,
                                   name="custom", params={"H": rows})
    raise ConfigError(f"unknown metric kind {kind!r} in 'metric.kind'")


def metric_to_dict(m: metrics.MetricField) -> dict:
    d = {"kind": m.name}
    if m.name == "euclidean":
        d["dim"] = m.dim
    elif m.name in ("conformal_phi", "custom"):
        d.update(m.params)
        d.update(dim=m.dim, c1=m.c1, c2=m.c2, l_h=m.l_h)
    return d


@dataclass
class Problem:
    metric: metrics.MetricField
    x0: EndpointSet
    x1: EndpointSet
    n: int = 64
    rule: Rule = Rule.TRAPEZOIDAL
    functional: Functional = Functional.ENERGY
    n_list: tuple = DEFAULT_N_LIST
    solver: SolveConfig = field(default_factory=SolveConfig)
    d_g: Optional[float] = None

    def objective(self, rule=None) -> DiscreteObjective:
        return DiscreteObjective(self.metric, Rule(rule or self.rule), self.functional)

    def reference_distance(self) -> Optional[float]:
        """d^g(X0, X1) when supplied or known in closed form, else None."""
        if self.d_g is not None:
            return self.d_g
        if isinstance(self.x0, Point) and isinstance(self.x1, Point):
            a, b = self.x0.p, self.x1.p
            if self.metric.name == "euclidean":
                return float(np.linalg.norm(b - a))
            if self.metric.name == "conformal_cos" and a[1] == 0.0 and b[1] == 0.0:
                # the axis segment is minimal; its length is the antiderivative gap of 2 - cos
                return float(abs((2 * b[0] - np.sin(b[0])) - (2 * a[0] - np.sin(a[0]))))
        return None


def problem_from_dict(d: dict) -> Problem:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    m = metric_from_dict(_require(d, "metric", "config"))
    try:
        x0 = set_from_dict(_require(d, "x0", "config"))
        x1 = set_from_dict(_require(d, "x1", "config"))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed endpoint set: missing or invalid field {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed endpoint set: {exc}") from exc
    try:
        check_instance(x0, x1)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if x0.dim != m.dim:
        raise ConfigError(f"endpoint dimension {x0.dim} does not match metric dimension {m.dim}")
    try:
        rule = Rule(d.get("rule", "trapezoidal"))
        functional = Functional(d.get("functional", "energy"))
    except ValueError as exc:
        raise ConfigError(f"invalid 'rule' or 'functional': {exc}") from exc
    n = d.get("n", 64)
    if not isinstance(n, int) or n < 1:
        raise ConfigError("field 'n' must be a positive integer")
    solver_d = d.get("solver", {})
    known = {f.name for f in fields(SolveConfig)}
    unknown = set(solver_d) - known
    if unknown:
        raise ConfigError(f"unknown solver field(s) {sorted(unknown)} in 'solver'")
    try:
        solver = SolveConfig(**solver_d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid 'solver': {exc}") from exc
    ref = d.get("reference", {})
    d_g = None
    if "d_g" in ref:
        d_g = float(ref["d_g"])
    elif "min_energy" in ref:
        d_g = float(np.sqrt(float(ref["min_energy"])))
    return Problem(metric=m, x0=x0, x1=x1, n=n, rule=rule, functional=functional,
                   n_list=tuple(d.get("n_list", DEFAULT_N_LIST)), solver=solver, d_g=d_g)


def load_problem(path) -> Problem:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return problem_from_dict(data)
