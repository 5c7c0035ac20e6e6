"""Zeros of zeta(s) and L(s, chi_D) on the critical line.

zeta_K = zeta * L(., chi_D), so the zeros of the Dedekind zeta function are
collected from two real-on-the-line Hardy functions instead of root-solving
zeta_K itself.

Evaluation is Euler-Maclaurin summation of the Hurwitz decomposition
L(s, chi) = k^-s sum_a chi(a) zeta(s, a/k), with the cut-off proportional
to |s|.  Lists are certified by comparing the number of located sign
changes with the argument-principle count of zeros of the completed
function in 0 < Im s <= T.
"""
from __future__ import annotations

import hashlib
import logging
import math
import os
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from scipy import special as sp
from scipy.optimize import brentq

from .quadfield import kronecker

log = logging.getLogger(__name__)

RIEMANN_ZETA = "riemann_zeta"
DIRICHLET = "dirichlet"

EM_TERMS = 14
_B2J = np.array([float(sp.bernoulli(2 * j)[2 * j]) for j in range(1, EM_TERMS + 1)])
_FACT2J = np.array([math.factorial(2 * j) for j in range(1, EM_TERMS + 1)], dtype=float)


class EnvelopeError(ValueError):
    """Raised outside Re s in [-1, 2], |Im s| <= 500."""


@dataclass(frozen=True)
class LFunctionId:
    kind: str
    conductor: int
    parity: str

    def __post_init__(self):
        if self.kind == RIEMANN_ZETA:
            if self.conductor != 1 or self.parity != "even":
                raise ValueError("riemann_zeta has conductor 1 and even parity")
        elif self.kind == DIRICHLET:
            if self.parity != "odd":
                raise ValueError("characters of imaginary quadratic fields are odd")
            if self.conductor < 3:
                raise ValueError("an odd quadratic character has conductor at least 3")
        else:
            raise ValueError(f"unknown L-function kind {self.kind!r}")

    @property
    def discriminant(self) -> int:
        return 1 if self.kind == RIEMANN_ZETA else -self.conductor

    @property
    def label(self) -> str:
        return "zeta" if self.kind == RIEMANN_ZETA else f"L(s,chi_{self.discriminant})"


def riemann_zeta() -> LFunctionId:
    return LFunctionId(RIEMANN_ZETA, 1, "even")


def dirichlet(D: int) -> LFunctionId:
    """L(s, chi_D) for a negative fundamental discriminant D."""
    if D >= 0:
        raise ValueError("only odd characters of imaginary quadratic fields are supported")
    return LFunctionId(DIRICHLET, -D, "odd")


def _character(lid: LFunctionId) -> np.ndarray:
    """chi(a) for a = 1..k."""
    if lid.kind == RIEMANN_ZETA:
        return np.array([1.0])
    return np.array([kronecker(lid.discriminant, a) for a in range(1, lid.conductor + 1)], dtype=float)


def _expm1_over(w: np.ndarray) -> np.ndarray:
    """(e^w - 1)/w for complex w, accurate near 0."""
    out = np.empty_like(w)
    small = np.abs(w) < 1e-3
    ws = w[small]
    out[small] = 1.0 + ws / 2.0 + ws * ws / 6.0 + ws**3 / 24.0
    wl = w[~small]
    out[~small] = (np.exp(wl) - 1.0) / wl
    return out


def _check_envelope(s: np.ndarray):
    if np.any(s.real < -1.0 - 1e-12) or np.any(s.real > 2.0 + 1e-12) or np.any(np.abs(s.imag) > 500.0):
        raise EnvelopeError("l_value is supported for Re s in [-1, 2] and |Im s| <= 500")


def l_value(lid: LFunctionId, s):
    """zeta(s) or L(s, chi_D) by Euler-Maclaurin; scalar or array s."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    _check_envelope(s_arr)
    if lid.kind == RIEMANN_ZETA and np.any(np.abs(s_arr - 1.0) < 1e-15):
        raise ValueError("zeta has a pole at s = 1")
    out = np.empty_like(s_arr)
    # batch by cut-off so that small |s| do not pay for large ones
    cut = np.ceil((np.abs(s_arr) + 30.0) / 2.0).astype(int)
    for N in np.unique(cut):
        sel = cut == N
        out[sel] = _l_value_em(lid, s_arr[sel], int(N))
    return complex(out[0]) if np.ndim(s) == 0 else out


def _l_value_em(lid: LFunctionId, s: np.ndarray, N: int) -> np.ndarray:
    chi = _character(lid)
    k = lid.conductor
    m = np.arange(1, N * k + 1, dtype=float)
    cm = np.tile(chi, N)
    keep = cm != 0
    m, cm = m[keep], cm[keep]
    logm = np.log(m)
    head = np.exp(-np.outer(s, logm)) @ cm

    a = np.arange(1, k + 1, dtype=float)
    live = chi != 0
    a, ca = a[live], chi[live]
    x = N + a / k  # Hurwitz cut-off points
    logx = np.log(x)
    sc = s[:, None]
    if lid.kind == RIEMANN_ZETA:
        pole = x[None, :] ** (1.0 - sc) / (sc - 1.0)
    else:
        # sum_a chi(a) = 0, so x^(1-s)/(s-1) may be replaced by (x^(1-s) - 1)/(s-1)
        w = (1.0 - sc) * logx[None, :]
        pole = -logx[None, :] * _expm1_over(w)
    xs = np.exp(-sc * logx[None, :])
    tail = pole + 0.5 * xs
    rising = sc.copy()  # (s)_(2j-1)
    power = xs / x[None, :]  # x^(-s-1)
    for j in range(EM_TERMS):
        tail = tail + (_B2J[j] / _FACT2J[j]) * rising * power
        rising = rising * (sc + 2 * j + 1) * (sc + 2 * j + 2)
        power = power / (x[None, :] ** 2)
    kfac = np.exp(-s * math.log(k))
    return head + kfac * (tail @ ca)


def _delta(lid: LFunctionId) -> int:
    return 0 if lid.parity == "even" else 1


def gamma_phase(lid: LFunctionId, t):
    """theta(t) with Lambda(1/2 + i t) = |.| e^(i theta) L(1/2 + i t); continuous in t."""
    t = np.asarray(t, dtype=float)
    d = _delta(lid)
    return sp.loggamma((0.5 + d + 1j * t) / 2.0).imag + 0.5 * t * math.log(lid.conductor / math.pi)


def completed(lid: LFunctionId, s):
    """Lambda(s) = (k/pi)^((s+delta)/2) Gamma((s+delta)/2) L(s); zeta uses k = 1, delta = 0."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    d = _delta(lid)
    w = (s_arr + d) / 2.0
    val = np.exp(w * math.log(lid.conductor / math.pi) + sp.loggamma(w)) * l_value(lid, s_arr)
    return complex(val[0]) if np.ndim(s) == 0 else val


def hardy_z(lid: LFunctionId, t):
    """Real-valued e^(i theta(t)) L(1/2 + i t)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    z = np.exp(1j * gamma_phase(lid, t_arr)) * l_value(lid, 0.5 + 1j * t_arr)
    return float(z[0].real) if np.ndim(t) == 0 else z.real


def zero_count_estimate(lid: LFunctionId, T: float) -> float:
    """Stirling main term for the number of zeros with 0 < gamma <= T.

    Increasing for T > 2 pi / k; for zeta it dips slightly on [5, 2 pi].
    """
    if T < 5:
        raise ValueError("estimate is meant for T >= 5")
    k = lid.conductor
    main = T / (2 * math.pi) * math.log(k * T / (2 * math.pi * math.e))
    return main + (7.0 / 8.0 if lid.kind == RIEMANN_ZETA else 1.0 / 8.0)


def zero_density(lid: LFunctionId, t):
    """d/dT of the main term, (1/2 pi) log(k t / 2 pi)."""
    t = np.asarray(t, dtype=float)
    return np.log(np.maximum(lid.conductor * t / (2 * math.pi), 1.0)) / (2 * math.pi)


def _arg_along_top(lid: LFunctionId, T: float) -> float:
    """Continuous change of arg L along sigma + iT as sigma goes from 2 to 1/2.

    |L(2 + it) - 1| <= zeta(2) - 1 < 1, so arg L(2 + iT) is the principal
    value; subintervals are split until consecutive samples differ by less
    than pi/8 in argument.
    """
    def arg_path(lo, hi, depth=0):
        sig = np.linspace(lo, hi, 33)
        vals = l_value(lid, sig + 1j * T)
        steps = np.angle(vals[1:] / vals[:-1])
        total = 0.0
        for i, st in enumerate(steps):
            if abs(st) > math.pi / 8 and depth < 12:
                total += arg_path(sig[i], sig[i + 1], depth + 1)
            else:
                total += st
        return total

    start = float(np.angle(l_value(lid, 2.0 + 1j * T)))
    return start + arg_path(2.0, 0.5)


def argument_count(lid: LFunctionId, T: float) -> int:
    """Number of zeros of Lambda with 0 < Im s <= T, by the argument principle.

    By Lambda(s) = Lambda(1 - s) and Lambda(conj s) = conj Lambda(s), the
    change of arg Lambda around [-1, 2] x [0, T] is twice its change along
    2 -> 2 + iT -> 1/2 + iT.
    """
    if lid.kind == RIEMANN_ZETA:
        # s (s - 1) turns from 2 > 0 to -1/4 - T^2 < 0 through the upper half plane
        phase = float(gamma_phase(lid, T)) + math.pi
    else:
        phase = float(gamma_phase(lid, T))
    total = (phase + _arg_along_top(lid, T)) / math.pi
    n = round(total)
    if abs(total - n) > 0.05:
        raise ArithmeticError(f"argument count not near an integer ({total:.4f}); T too close to a zero?")
    return int(n)


def _real_axis_positive(lid: LFunctionId) -> bool:
    sig = np.linspace(0.5, 2.0, 60)  # avoids s = 1
    vals = completed(lid, sig.astype(complex))
    if lid.kind == RIEMANN_ZETA:
        vals = vals * sig * (sig - 1.0)
        return bool(np.all(vals.real < 0) or np.all(vals.real > 0))
    return bool(np.all(vals.real > 0))


@dataclass(frozen=True)
class ZeroList:
    id: LFunctionId
    ordinates: Tuple[float, ...]
    height: float
    certified: bool
    precision: float = 1e-9

    def __post_init__(self):
        o = self.ordinates
        if any(b <= a for a, b in zip(o[:-1], o[1:])):
            raise ValueError("ordinates must be strictly increasing")
        if o and (o[0] <= 0 or o[-1] > self.height):
            raise ValueError("ordinates must lie in (0, height]")

    def truncated(self, T: float) -> "ZeroList":
        if T > self.height:
            raise ValueError(f"list only covers height {self.height}")
        return replace(self, ordinates=tuple(g for g in self.ordinates if g <= T), height=T)


def _sign_changes(lid: LFunctionId, T: float, spacing_scale: float):
    t = [1e-3]
    while t[-1] < T:
        dens = float(zero_density(lid, t[-1]))
        step = min(0.5, 0.25 / max(dens, 1e-3)) * spacing_scale
        t.append(min(T, t[-1] + step))
    grid = np.array(t)
    z = hardy_z(lid, grid)
    brackets = []
    for i in range(len(grid) - 1):
        if z[i] == 0.0:
            brackets.append((grid[i], grid[i]))
        elif z[i] * z[i + 1] < 0:
            brackets.append((grid[i], grid[i + 1]))
    return brackets


def find_zeros(lid: LFunctionId, T: float, xtol: float = 1e-12, max_refinements: int = 4) -> ZeroList:
    """Zeros 1/2 + i gamma with 0 < gamma <= T, certified by the argument principle.

    The grid is halved when the sign-change count falls short of the
    argument count; a persistent mismatch returns certified=False.
    """
    if not 0 < T <= 500:
        raise ValueError("T must lie in (0, 500]")
    f = lambda x: hardy_z(lid, x)
    expected = argument_count(lid, T)
    scale = 1.0
    ordinates: list = []
    for _ in range(max_refinements + 1):
        ordinates = []
        for lo, hi in _sign_changes(lid, T, scale):
            ordinates.append(lo if lo == hi else brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps))
        if len(ordinates) == expected:
            break
        log.info("%s: %d sign changes vs %d zeros up to T=%g; refining grid", lid.label,
                 len(ordinates), expected, T)
        scale *= 0.5
    certified = len(ordinates) == expected and _real_axis_positive(lid)
    if not certified:
        log.warning("%s: zero list up to T=%g is NOT certified (%d found, %d expected)", lid.label, T,
                    len(ordinates), expected)
    return ZeroList(lid, tuple(ordinates), float(T), certified, precision=max(xtol, 1e-12) * 10)


def certify(zl: ZeroList, tol: float = 1e-8) -> ZeroList:
    """Recompute locally and return the list marked certified if it matches."""
    fresh = find_zeros(zl.id, zl.height)
    ok = fresh.certified and len(fresh.ordinates) == len(zl.ordinates) and all(
        abs(a - b) <= tol * max(1.0, abs(b)) for a, b in zip(zl.ordinates, fresh.ordinates))
    return replace(zl, certified=ok)


# ------------------------------------------------------------------ cache files


class ZeroFileError(ValueError):
    """Malformed zero cache file or checksum mismatch."""


def _format_ordinate(g: float) -> str:
    return f"{g:.12g}"


def _body(ordinates) -> str:
    return "".join(_format_ordinate(g) + "\n" for g in ordinates)


def body_checksum(zl: ZeroList) -> str:
    return hashlib.sha256(_body(zl.ordinates).encode()).hexdigest()


def format_zero_file(zl: ZeroList) -> str:
    header = (f"# kind={zl.id.kind}\n# conductor={zl.id.conductor}\n"
              f"# height={zl.height:.12g}\n# certified={int(zl.certified)}\n")
    body = _body(zl.ordinates)
    return header + body + f"# sha256={hashlib.sha256(body.encode()).hexdigest()}\n"


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        os.chmod(tmp, 0o644)
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def export_zeros(zl: ZeroList, path) -> None:
    _atomic_write(Path(path), format_zero_file(zl))


def parse_zero_file(text: str, trust_certified: bool = False) -> ZeroList:
    header, ordinates, checksum = {}, [], None
    lines = text.splitlines()
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                raise ZeroFileError(f"line {lineno}: malformed header {line!r}")
            if key == "sha256":
                checksum = value.strip()
            else:
                header[key.strip()] = value.strip()
            continue
        try:
            ordinates.append(float(line))
        except ValueError:
            raise ZeroFileError(f"line {lineno}: not a number: {line!r}") from None
    for key in ("kind", "conductor", "height", "certified"):
        if key not in header:
            raise ZeroFileError(f"missing header field {key}")
    if checksum is None:
        raise ZeroFileError("missing sha256 line")
    body = "".join(ln.strip() + "\n" for ln in lines if ln.strip() and not ln.strip().startswith("#"))
    if hashlib.sha256(body.encode()).hexdigest() != checksum:
        raise ZeroFileError("checksum mismatch")
    kind, conductor = header["kind"], int(header["conductor"])
    try:
        lid = riemann_zeta() if kind == RIEMANN_ZETA else LFunctionId(kind, conductor, "odd")
    except ValueError as exc:
        raise ZeroFileError(f"bad L-function header: {exc}") from None
    if lid.conductor != conductor:
        raise ZeroFileError("conductor does not match kind")
    certified = trust_certified and header["certified"] == "1"
    try:
        return ZeroList(lid, tuple(ordinates), float(header["height"]), certified)
    except ValueError as exc:
        raise ZeroFileError(str(exc)) from None


def import_zeros(path) -> ZeroList:
    """Read a zero file; the result is uncertified until :func:`certify` is run."""
    return parse_zero_file(Path(path).read_text(encoding="utf-8"), trust_certified=False)


CACHE_ENV = "QEXPLICIT_CACHE_DIR"


def default_cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "qexplicit")


@dataclass
class ZeroCache:
    """Directory of zero files, one per L-function; writes are atomic."""

    directory: Path = field(default_factory=default_cache_dir)

    def __post_init__(self):
        self.directory = Path(self.directory)

    def path(self, lid: LFunctionId) -> Path:
        return self.directory / f"{lid.kind}_{lid.conductor}.zeros"

    def load(self, lid: LFunctionId) -> Optional[ZeroList]:
        """The cached list, trusting its certified flag (the cache only holds local results)."""
        p = self.path(lid)
        if not p.exists():
            return None
        return parse_zero_file(p.read_text(encoding="utf-8"), trust_certified=True)

    def store(self, zl: ZeroList) -> Path:
        p = self.path(zl.id)
        _atomic_write(p, format_zero_file(zl))
        return p

    def checksum(self, lid: LFunctionId) -> Optional[str]:
        p = self.path(lid)
        return hashlib.sha256(p.read_bytes()).hexdigest() if p.exists() else None

    def get(self, lid: LFunctionId, T: float, compute: bool = True) -> ZeroList:
        cached = self.load(lid)
        if cached is not None and cached.height >= T:
            return cached.truncated(T) if cached.height > T else cached
        if not compute:
            raise FileNotFoundError(f"no cached zeros for {lid.label} up to T={T:g}")
        zl = find_zeros(lid, T)
        if not zl.certified:
            return zl
        self.store(zl)
        # hand back the stored (12-digit) ordinates so later cached runs see identical input
        return self.load(lid)


def dedekind_completed(D: int, s):
    """(2 pi)^(1-s) Gamma(s) zeta(s) L(s, chi_D), the completion with
    xi(s) = |D|^(1/2 - s) xi(1 - s).

    By Legendre duplication, completed(zeta) * completed(L) equals
    |D|^((s+1)/2) / pi times this function.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    val = (np.exp((1.0 - s_arr) * math.log(2 * math.pi) + sp.loggamma(s_arr))
           * l_value(riemann_zeta(), s_arr) * l_value(dirichlet(D), s_arr))
    return complex(val[0]) if np.ndim(s) == 0 else val
