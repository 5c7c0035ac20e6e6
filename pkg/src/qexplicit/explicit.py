"""Both sides of the explicit formula for an imaginary quadratic field K.

    sum_v W_v(f)  =  sum_{zeta_K(rho) = 0} M^rho(f) - M^0(f) - M^1(f)

The left side uses the closed-form local terms.  The right side sums over
the certified zeros of zeta and L(s, chi_D) up to height T and adds a
bound for the zeros above T.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .localterms import W_closed, discriminant_part
from .quadfield import RAMIFIED, FieldSpec, PlaceInfo, places_up_to, ramified_places
from .testfn import TestFunction, mellin_many
from .zeros import (LFunctionId, ZeroCache, ZeroList, body_checksum, dirichlet, riemann_zeta,
                    zero_density)

log = logging.getLogger(__name__)

DEFAULT_HEIGHT = 120.0
DEFAULT_TOLERANCE = 1e-4
# |S(t)| = |N(t) - smooth main term| stays below this on the supported range t <= 500
S_BOUND = 2.0


class UnsupportedFieldError(ValueError):
    """The field has class number > 1."""


class UncertifiedZerosError(ValueError):
    """A zero list is missing, too short, or not certified."""


@dataclass
class VerificationReport:
    field: FieldSpec
    test_function: str
    lhs_total: float
    lhs_breakdown: List[Tuple[str, float]]
    rhs_zero_sum: float
    rhs_pole_terms: Tuple[float, float]
    truncation_height: float
    tail_estimate: float
    discrepancy: float
    passed: bool
    tolerance: float
    zero_checksums: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        r = _round12
        return {
            "tool_version": __version__,
            "field": {"d": self.field.d, "D": self.field.D,
                      "class_number_one": self.field.class_number_one},
            "test_function": self.test_function,
            "lhs_total": r(self.lhs_total),
            "lhs_breakdown": [{"place": p, "value": r(v)} for p, v in self.lhs_breakdown],
            "rhs_zero_sum": r(self.rhs_zero_sum),
            "rhs_pole_terms": [r(self.rhs_pole_terms[0]), r(self.rhs_pole_terms[1])],
            "truncation_height": r(self.truncation_height),
            "tail_estimate": r(self.tail_estimate),
            "discrepancy": r(self.discrepancy),
            "tolerance": r(self.tolerance),
            "pass": self.passed,
            "zero_cache_checksums": dict(sorted(self.zero_checksums.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _round12(x: float) -> float:
    # 12 significant digits; adding 0.0 folds -0.0 into 0.0
    return float(f"{x:.12g}") + 0.0


def _require_class_number_one(fld: FieldSpec):
    if not fld.class_number_one:
        raise UnsupportedFieldError(f"D={fld.D}: only class number one fields are supported")


def enumeration_bound(f: TestFunction) -> int:
    """X such that every q^n (n != 0) in supp f has q <= X."""
    a, b = f.support
    return max(2, math.ceil(b), math.ceil(1.0 / a))


def lhs_sum(fld: FieldSpec, f: TestFunction) -> Tuple[float, List[Tuple[PlaceInfo, float]]]:
    """sum_v W_v(f) over all places that can contribute, with a per-place breakdown."""
    _require_class_number_one(fld)
    if f.is_zero:
        return 0.0, []
    X = enumeration_bound(f)
    places = places_up_to(fld, X)
    finite = [v for v in places if v.is_finite]
    extra = [v for v in ramified_places(fld) if v not in finite]
    places = finite + extra + [v for v in places if not v.is_finite]
    breakdown = [(v, W_closed(v, f).value) for v in places]
    return math.fsum(val for _, val in breakdown), breakdown


def ramified_discriminant_sum(fld: FieldSpec, f: TestFunction) -> float:
    """sum over ramified places of log N(d_v) f(1); equals log|D| f(1)."""
    return math.fsum(discriminant_part(v, f) for v in ramified_places(fld))


def pole_terms(f: TestFunction) -> Tuple[float, float]:
    """(M^0(f), M^1(f))."""
    vals, _ = mellin_many(f, [0.0, 1.0])
    return float(vals[0].real), float(vals[1].real)


def _tail_for(lid: LFunctionId, f: TestFunction, T: float) -> float:
    """Bound on sum_{gamma > T} |2 Re M^(1/2 + i gamma)(f)|.

    Stieltjes integral against N(t) = main(t) + S(t): the main part gives
    int_T^inf 2 env(t) density(t) dt, and the S part at most 2 * 2 S_BOUND env(T)
    after integration by parts with a non-increasing envelope.
    """
    span = math.log(f.support[1] / f.support[0])
    step = min(0.25, math.pi / (4.0 * max(span, 1e-3)))
    t_far = T + 100.0
    grid = np.arange(T, t_far + step, step)
    vals, _ = mellin_many(f, 0.5 + 1j * grid)
    env = np.maximum.accumulate(np.abs(vals)[::-1])[::-1]
    y = env * zero_density(lid, grid)
    body = float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(grid)))
    # beyond t_far the Mellin transform decays faster than t^-3, density grows like log t
    body += float(y[-1]) * t_far
    return 2.0 * body + 4.0 * S_BOUND * float(env[0])


def field_l_functions(fld: FieldSpec) -> Tuple[LFunctionId, LFunctionId]:
    return riemann_zeta(), dirichlet(fld.D)


def rhs_sum(fld: FieldSpec, f: TestFunction, T: float,
            zero_lists: Sequence[ZeroList]) -> Tuple[float, float, float, Tuple[float, float]]:
    """(rhs value, zero sum, tail estimate, pole terms) from certified zero lists."""
    _require_class_number_one(fld)
    wanted = set(field_l_functions(fld))
    got = {zl.id for zl in zero_lists}
    if got != wanted:
        raise UncertifiedZerosError(f"need zero lists for {sorted(l.label for l in wanted)}")
    for zl in zero_lists:
        if not zl.certified:
            raise UncertifiedZerosError(f"zero list for {zl.id.label} is not certified")
        if zl.height < T:
            raise UncertifiedZerosError(f"zero list for {zl.id.label} only reaches T={zl.height:g}")
    if f.is_zero:
        return 0.0, 0.0, 0.0, (0.0, 0.0)

    gammas = np.array(sorted(g for zl in zero_lists for g in zl.ordinates if g <= T))
    s = np.concatenate([0.5 + 1j * gammas, 0.5 - 1j * gammas])
    vals, _ = mellin_many(f, s)
    n = len(gammas)
    # zeros come in conjugate pairs; the imaginary parts must cancel for real f
    residual = abs(complex(np.sum(vals)).imag)
    if residual > 1e-12 * max(1.0, float(np.sum(np.abs(vals)))):
        raise ArithmeticError(f"conjugate zero sum has imaginary part {residual:.2e}")
    zero_sum = math.fsum((2.0 * vals[:n].real).tolist())
    m0, m1 = pole_terms(f)
    tail = math.fsum(_tail_for(zl.id, f, T) for zl in zero_lists)
    return zero_sum - m0 - m1, zero_sum, tail, (m0, m1)


def zero_lists_for(fld: FieldSpec, T: float, cache: Optional[ZeroCache] = None,
                   compute: bool = True) -> List[ZeroList]:
    cache = cache if cache is not None else ZeroCache()
    return [cache.get(lid, T, compute=compute) for lid in field_l_functions(fld)]


def verify(fld: FieldSpec, f: TestFunction, T: float = DEFAULT_HEIGHT,
           tolerance: float = DEFAULT_TOLERANCE, zero_lists: Optional[Sequence[ZeroList]] = None,
           cache: Optional[ZeroCache] = None, compute: bool = True) -> VerificationReport:
    """Compare both sides; pass iff |lhs - rhs| <= tolerance + tail estimate."""
    _require_class_number_one(fld)
    if zero_lists is None:
        zero_lists = zero_lists_for(fld, T, cache, compute)
    lhs, breakdown = lhs_sum(fld, f)
    rhs, zero_sum, tail, poles = rhs_sum(fld, f, T, zero_lists)
    discrepancy = lhs - rhs
    checksums = {zl.id.label: body_checksum(zl.truncated(T) if zl.height > T else zl) for zl in zero_lists}
    return VerificationReport(
        field=fld,
        test_function=f.description,
        lhs_total=lhs,
        lhs_breakdown=[(v.label, val) for v, val in breakdown],
        rhs_zero_sum=zero_sum,
        rhs_pole_terms=poles,
        truncation_height=float(T),
        tail_estimate=tail,
        discrepancy=discrepancy,
        passed=abs(discrepancy) <= tolerance + tail,
        tolerance=tolerance,
        zero_checksums=checksums,
    )
