"""Local contributions W_v(f) to the explicit formula.

Each place has three independent routes:

closed_form
    finite places: log N(d_v) f(1) - log q sum_{n != 0} f(q^n) min(1, q^n)
    (the first term only at ramified places); complex place: the five-term
    integral expression, see :func:`W_complex`.
contour
    (1/2 pi i) int_(sigma) M^s(f) d log(zeta_v(s) / zeta_v(1-s)) over
    |Im s| <= T, with the truncated tail bounded from the Mellin decay.
finite_difference
    d/ds R_v^(-s) * f|_v (1) at s = 0, see :func:`qexplicit.riesz.generator_fd`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .quadfield import COMPLEX, INERT, RAMIFIED, SPLIT, PlaceInfo, COMPLEX_PLACE
from .quadrature import integrate
from .riesz import generator_fd, riesz_convolve_padic, unit_group_profile
from .special import EULER_GAMMA, LOG_TWO_PI, digamma
from .testfn import TestFunction, mellin_many

CLOSED_FORM = "closed_form"
CONTOUR = "contour"
FINITE_DIFFERENCE = "finite_difference"


@dataclass(frozen=True)
class LocalTerm:
    place: PlaceInfo
    value: float
    route: str
    error_estimate: float = 0.0


def _prime_power_sum(q: int, f: TestFunction) -> float:
    """sum_{n != 0} f(q^n) min(1, q^n), over the finitely many q^n in supp f."""
    if f.is_zero:
        return 0.0
    a, b = f.support
    lq = math.log(q)
    lo = math.floor(math.log(a) / lq) - 1
    hi = math.ceil(math.log(b) / lq) + 1
    terms = [float(f(float(q) ** n)) * min(1.0, float(q) ** n) for n in range(lo, hi + 1) if n != 0]
    return math.fsum(terms)


def W_unramified(place: PlaceInfo, f: TestFunction) -> LocalTerm:
    if place.kind not in (SPLIT, INERT):
        raise ValueError(f"W_unramified needs a split or inert place, got {place.kind}")
    q = place.q
    return LocalTerm(place, -math.log(q) * _prime_power_sum(q, f) + 0.0, CLOSED_FORM)


def discriminant_part(place: PlaceInfo, f: TestFunction) -> float:
    """log N(d_v) f(1), the part of W_v carried by the different."""
    if f.is_zero:
        return 0.0
    return math.log(place.different_norm) * float(f(1.0))


def W_ramified(place: PlaceInfo, f: TestFunction) -> LocalTerm:
    if place.kind != RAMIFIED:
        raise ValueError(f"W_ramified needs a ramified place, got {place.kind}")
    q = place.q
    value = math.fsum([discriminant_part(place, f), -math.log(q) * _prime_power_sum(q, f)])
    return LocalTerm(place, value, CLOSED_FORM)


SERIES_WINDOW = 1e-4


def _derivatives_at_one(f: TestFunction, h: float = 1e-3):
    f0, fp, fm = float(f(1.0)), float(f(1.0 + h)), float(f(1.0 - h))
    fp2, fm2 = float(f(1.0 + 2 * h)), float(f(1.0 - 2 * h))
    d1 = (8.0 * (fp - fm) - (fp2 - fm2)) / (12.0 * h)
    d2 = (-fp2 + 16.0 * fp - 30.0 * f0 + 16.0 * fm - fm2) / (12.0 * h * h)
    return f0, d1, d2


def W_complex(f: TestFunction, tol: float = 1e-12) -> LocalTerm:
    """Five-term closed form of the complex-place generator.

    W = -2 (gamma + log 2 pi) f(1) - int_1^inf f(u) du/u
        - int_1^inf (f(u) - f(1)) / (u - 1) du/u - int_0^1 f(u) du
        - int_0^1 (u f(u) - f(1)) / (1 - u) du

    Within SERIES_WINDOW of u = 1 the difference quotients are replaced by
    their Taylor expansions; outside the support of f the two subtracted
    integrals are done in closed form.
    """
    if f.is_zero:
        return LocalTerm(COMPLEX_PLACE, 0.0, CLOSED_FORM)
    a, b = f.support
    f1, d1, d2 = _derivatives_at_one(f)
    delta = SERIES_WINDOW
    err = 0.0

    def quad(g, lo, hi):
        nonlocal err
        if hi <= lo:
            return 0.0
        v, e = integrate(g, lo, hi, tol)
        err += e
        return v

    # int_1^inf f(u) du / u  and  int_0^1 f(u) du
    i1 = quad(lambda u: f(u) / u, max(a, 1.0), max(b, 1.0))
    i3 = quad(lambda u: f(u), min(a, 1.0), min(b, 1.0))

    # int_1^inf (f(u) - f(1)) / ((u - 1) u) du
    B = max(b, 1.0 + delta)
    i2 = d1 * math.log1p(delta) + 0.5 * d2 * (delta - math.log1p(delta))
    i2 += quad(lambda u: (f(u) - f1) / ((u - 1.0) * u), 1.0 + delta, B)
    if f1 != 0.0:
        i2 += -f1 * math.log(B / (B - 1.0))

    # int_0^1 (u f(u) - f(1)) / (1 - u) du
    A = min(a, 1.0 - delta)
    g1, g2 = f1 + d1, 2.0 * d1 + d2
    i4 = -g1 * delta + 0.25 * g2 * delta * delta
    i4 += quad(lambda u: (u * f(u) - f1) / (1.0 - u), A, 1.0 - delta)
    if f1 != 0.0:
        i4 += f1 * math.log1p(-A)

    value = math.fsum([-2.0 * (EULER_GAMMA + LOG_TWO_PI) * f1, -i1, -i2, -i3, -i4])
    return LocalTerm(COMPLEX_PLACE, value, CLOSED_FORM, err)


def W_closed(place: PlaceInfo, f: TestFunction) -> LocalTerm:
    if place.kind == COMPLEX:
        return W_complex(f)
    if place.kind == RAMIFIED:
        return W_ramified(place, f)
    return W_unramified(place, f)


def log_derivative_density(place: PlaceInfo, s):
    """d/ds log(zeta_v(s) / zeta_v(1-s)) including the N(d_v)^(s-1/2) factor."""
    s = np.asarray(s, dtype=complex)
    if place.kind == COMPLEX:
        return -2.0 * LOG_TWO_PI + digamma(s) + digamma(1.0 - s)
    q = float(place.q)
    lq = math.log(q)
    a = q ** (s - 1.0)
    b = q ** (-s)
    return math.log(place.different_norm) - lq * a / (1.0 - a) - lq * b / (1.0 - b)


def mellin_envelope(f: TestFunction, t_grid: np.ndarray, sigma: float = 0.5) -> np.ndarray:
    """Non-increasing envelope max_{t' >= t} |M^(sigma + i t')(f)| sampled on an ascending grid."""
    vals, _ = mellin_many(f, sigma + 1j * t_grid)
    return np.maximum.accumulate(np.abs(vals)[::-1])[::-1]


def _tail_bound(place: PlaceInfo, f: TestFunction, sigma: float, T: float) -> float:
    """Bound on (1/pi) int_T^inf |M^s(f) D(s)| dt along Re s = sigma."""
    span = math.log(f.support[1] / f.support[0])
    step = min(0.25, math.pi / (4.0 * max(span, 1e-3)))
    t_far = T + 50.0
    grid = np.arange(T, t_far + step, step)
    env = mellin_envelope(f, grid, sigma)
    dens = np.abs(log_derivative_density(place, sigma + 1j * grid))
    if place.is_finite:
        dens = np.maximum.accumulate(dens[::-1])[::-1]
    y = env * dens
    body = float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(grid)) + y[0] * step)
    # beyond t_far the envelope is at most env[-1] and decays at least like 1/t^2
    body += float(y[-1]) * t_far
    return body / math.pi


def W_contour(place: PlaceInfo, f: TestFunction, sigma: float = 0.5, T: float = 200.0,
              panel: float = 1.0, order: int = 32, tol: float = 1e-6) -> LocalTerm:
    """Truncated vertical-line integral for W_v.

    For real f the integrand at sigma - it is the conjugate of the one at
    sigma + it, so W = (1/pi) int_0^T Re[M^s(f) D(s)] dt.  Composite
    Gauss-Legendre panels; error estimate = panel-refinement change plus
    the tail bound.  Warns when the tail bound exceeds ``tol``.
    """
    if not 0.0 < sigma < 1.0:
        raise ValueError("sigma must lie in (0, 1)")
    if f.is_zero:
        return LocalTerm(place, 0.0, CONTOUR)

    def run(n_per_panel):
        x, w = np.polynomial.legendre.leggauss(n_per_panel)
        n_panels = max(1, int(math.ceil(T / panel)))
        edges = np.linspace(0.0, T, n_panels + 1)
        mids, halves = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
        t = (mids[:, None] + halves[:, None] * x[None, :]).ravel()
        wt = (halves[:, None] * w[None, :]).ravel()
        s = sigma + 1j * t
        m, _ = mellin_many(f, s)
        vals = (m * log_derivative_density(place, s)).real
        return math.fsum(vals * wt) / math.pi

    fine = run(order)
    coarse = run(order // 2)
    tail = _tail_bound(place, f, sigma, T)
    if tail > tol:
        warnings.warn(f"contour tail bound {tail:.2e} exceeds tolerance {tol:.1e} at T={T:g}", RuntimeWarning)
    return LocalTerm(place, fine, CONTOUR, abs(fine - coarse) + tail)


def W_finite_difference(place: PlaceInfo, f: TestFunction, h: float = 0.02) -> LocalTerm:
    value = generator_fd(None if place.kind == COMPLEX else place, f, h)
    return LocalTerm(place, value, FINITE_DIFFERENCE, 0.0)


def c_factor(place: PlaceInfo, s: float) -> float:
    """Rescaling constant c_v^s = N(d_v)^(-s) R_v^(-s) * 1_{O_v^x}(1) (= 1 + O(s^2))."""
    if not place.is_finite:
        return 1.0
    if not abs(s) < 1:
        raise ValueError("c_factor needs |s| < 1")
    value = riesz_convolve_padic(place, unit_group_profile(place), -s, 0)
    return float(np.real(place.different_norm ** (-s) * value))


def c_factor_closed(place: PlaceInfo, s: float) -> float:
    """Shell-calculus closed form (1 - 2/q + q^(s-1)) / (1 - q^(-s-1))."""
    q = float(place.q)
    return (1.0 - 2.0 / q + q ** (s - 1.0)) / (1.0 - q ** (-s - 1.0))
