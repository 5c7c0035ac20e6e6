"""Test functions on the positive reals and their Mellin transforms.

Mellin convention: M^s(f) = int_0^inf f(x) x^(s-1) dx.  Test functions have
compact support [a, b] with 0 < a, so M^s(f) is entire in s; it is computed
in log coordinates, int_{log a}^{log b} f(e^v) e^(s v) dv.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from .quadrature import QuadratureError, level_nodes, MAX_LEVEL


@dataclass(frozen=True)
class TestFunction:
    """A smooth function on (0, inf) vanishing outside ``support``.

    ``evaluator`` takes and returns numpy arrays.
    """

    __test__ = False  # keep pytest from collecting this class

    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    support: Tuple[float, float]
    description: str = "f"

    def __post_init__(self):
        a, b = self.support
        if not (0 < a <= b < math.inf):
            raise ValueError(f"support must satisfy 0 < a <= b < inf, got {self.support}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.support
        inside = (x >= a) & (x <= b)
        out = np.zeros_like(x)
        if np.any(inside):
            out[inside] = self.evaluator(x[inside])
        return out if out.ndim else float(out)

    @property
    def is_zero(self) -> bool:
        return self.support[0] == self.support[1]

    def scaled(self, c: float) -> "TestFunction":
        """x -> f(c x)."""
        a, b = self.support
        return TestFunction(lambda x: self.evaluator(c * x), (a / c, b / c), f"{self.description}(x*{c:g})")


def zero_function() -> TestFunction:
    return TestFunction(lambda x: np.zeros_like(x), (1.0, 1.0), "zero")


def _bump_evaluator(center: float, radius: float):
    def f(x):
        x = np.asarray(x, dtype=float)
        u = np.log(np.maximum(x, 1e-300) / center) / radius
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        ui = u[inside]
        out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
        return out

    return f


def make_log_bump(center: float, radius: float) -> TestFunction:
    """exp(-1/(1-u^2)) with u = log(x/center)/radius, zero for |u| >= 1."""
    if not center > 0 or not radius > 0:
        raise ValueError("center and radius must be positive")
    support = (center * math.exp(-radius), center * math.exp(radius))
    return TestFunction(_bump_evaluator(center, radius), support, f"bump:center={center:g},radius={radius:g}")


def indicator(a: float, b: float) -> TestFunction:
    """Indicator of [a, b]; not smooth, used only to validate quadrature."""
    return TestFunction(lambda x: np.ones_like(np.asarray(x, dtype=float)), (a, b), f"indicator[{a:g},{b:g}]")


_SPEC_RE = re.compile(r"^\s*(\w+)\s*:\s*(.*)$")


def parse_function_spec(spec: str) -> TestFunction:
    """Parse ``bump:center=<x>,radius=<r>``."""
    m = _SPEC_RE.match(spec)
    if not m:
        raise ValueError(f"malformed function spec {spec!r}")
    kind, rest = m.group(1), m.group(2)
    params = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        if "=" not in item:
            raise ValueError(f"malformed parameter {item!r} in {spec!r}")
        key, value = (t.strip() for t in item.split("=", 1))
        try:
            params[key] = float(value)
        except ValueError:
            raise ValueError(f"parameter {key} is not a number: {value!r}") from None
    if kind != "bump":
        raise ValueError(f"unknown function kind {kind!r}")
    if set(params) != {"center", "radius"}:
        raise ValueError("bump needs exactly center= and radius=")
    if not params["center"] > 0 or not params["radius"] > 0:
        raise ValueError("bump center and radius must be positive")
    return make_log_bump(params["center"], params["radius"])


@dataclass(frozen=True)
class MellinValue:
    value: complex
    abs_error_estimate: float


def mellin_many(f: TestFunction, s, tol: float = 1e-13, min_level: int = 4):
    """Mellin transform at an array of points; returns (values, error estimates)."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if f.is_zero:
        return np.zeros_like(s), np.zeros(s.shape)
    lo, hi = math.log(f.support[0]), math.log(f.support[1])
    total = None
    previous = None
    for k in range(MAX_LEVEL + 1):
        v, w = level_nodes(lo, hi, k)
        fv = f.evaluator(np.exp(v)) * w
        part = fv @ np.exp(np.outer(v, s))
        total = part if total is None else 0.5 * total + part
        if previous is not None and k >= min_level:
            err = np.abs(total - previous)
            if np.all(err <= np.maximum(tol, 16 * np.finfo(float).eps * np.abs(total))):
                return total, err
        previous = total
    raise QuadratureError(f"Mellin quadrature for {f.description} did not converge")


def mellin(f: TestFunction, s, tol: float = 1e-13) -> MellinValue:
    values, errors = mellin_many(f, [s], tol)
    return MellinValue(complex(values[0]), float(errors[0]))
