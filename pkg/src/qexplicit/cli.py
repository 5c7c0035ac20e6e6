"""Command-line front end: ``qexplicit {field,local,zeros,verify}``.

Exit codes: 0 success/pass, 1 numeric failure or uncertified zeros,
2 usage error, 3 unsupported field (class number > 1).
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import tomli

from . import __version__
from .explicit import (DEFAULT_HEIGHT, DEFAULT_TOLERANCE, UncertifiedZerosError, UnsupportedFieldError,
                       verify)
from .localterms import W_closed, W_contour, W_finite_difference
from .quadfield import (COMPLEX_PLACE, FieldSpec, discriminant, field_from_discriminant,
                        is_fundamental_discriminant, is_prime, primes_up_to, splitting_type)
from .testfn import parse_function_spec
from .zeros import (DIRICHLET, RIEMANN_ZETA, ZeroCache, ZeroFileError, certify, default_cache_dir,
                    dirichlet, export_zeros, find_zeros, import_zeros, riemann_zeta)

log = logging.getLogger("qexplicit")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3

CONTOUR_TOL = 1e-6
FD_TOL = 1e-5


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    d: Optional[int] = None
    fn: Optional[str] = None
    height: float = DEFAULT_HEIGHT
    tol: float = DEFAULT_TOLERANCE
    cache_dir: Optional[Path] = None
    output: Optional[Path] = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        if not self.height > 0 or not self.tol > 0:
            raise UsageError("height and tol must be positive")


def fmt(x: float) -> str:
    return f"{x + 0.0:.12g}"


def resolve_field(value: int) -> FieldSpec:
    """Accept either a fundamental discriminant D or a squarefree d < 0.

    The two readings agree whenever both apply (d = 1 mod 4 gives D = d).
    """
    if value >= 0:
        raise UsageError("--d must be negative")
    if is_fundamental_discriminant(value):
        return field_from_discriminant(value)
    try:
        return discriminant(value)
    except ValueError:
        raise UsageError(f"{value} is neither a fundamental discriminant nor squarefree") from None


def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomli.load(fh)
    except (OSError, tomli.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise UsageError(f"config must be flat key = value pairs (tables found: {nested})")
    return {k.replace("-", "_"): v for k, v in data.items()}


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge config file and flags; flags win."""
    conf = load_config(getattr(args, "config", None))

    def pick(name, default=None):
        v = getattr(args, name, None)
        return v if v is not None else conf.get(name, default)

    cache = pick("cache_dir")
    out = pick("output")
    d = pick("d")
    cfg = RunConfig(d=int(d) if d is not None else None, fn=pick("fn"),
                    height=float(pick("height", DEFAULT_HEIGHT)), tol=float(pick("tol", DEFAULT_TOLERANCE)),
                    cache_dir=Path(cache) if cache else None, output=Path(out) if out else None)
    cfg.validate()
    return cfg


def _cache(cfg: RunConfig) -> ZeroCache:
    return ZeroCache(cfg.cache_dir or default_cache_dir())


def _need_field(cfg: RunConfig) -> FieldSpec:
    if cfg.d is None:
        raise UsageError("--d is required")
    return resolve_field(cfg.d)


def _need_fn(cfg: RunConfig):
    if not cfg.fn:
        raise UsageError("--fn is required")
    try:
        return parse_function_spec(cfg.fn)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ------------------------------------------------------------------ commands


def cmd_field(args, cfg: RunConfig) -> int:
    fld = _need_field(cfg)
    bound = args.bound if args.bound is not None else int(getattr(args, "_conf_bound", 50))
    if bound < 2:
        raise UsageError("--bound must be at least 2")
    print(f"field {fld.label}  D={fld.D}  class_number_one={str(fld.class_number_one).lower()}")
    print(f"{'p':>6}  {'type':<9} {'N(p)':>8} {'N(d)':>6} {'places':>6}")
    for p in primes_up_to(bound):
        v = splitting_type(fld, p)
        print(f"{p:>6}  {v.kind:<9} {v.norm:>8} {v.different_norm:>6} {v.places_above:>6}")
    return EXIT_OK


def cmd_local(args, cfg: RunConfig) -> int:
    fld = _need_field(cfg)
    f = _need_fn(cfg)
    if args.place == "complex":
        place = COMPLEX_PLACE
    elif args.prime is not None:
        if not is_prime(args.prime):
            raise UsageError(f"{args.prime} is not prime")
        place = splitting_type(fld, args.prime)
    else:
        raise UsageError("give --prime P or --place complex")
    routes = ["closed", "contour", "fd"] if args.route == "all" else [args.route]
    T = args.contour_height
    results = {}
    for r in routes:
        if r == "closed":
            results[r] = W_closed(place, f)
        elif r == "contour":
            results[r] = W_contour(place, f, sigma=args.sigma, T=T, tol=CONTOUR_TOL)
        else:
            results[r] = W_finite_difference(place, f)
    print(f"place {place.label}  f={f.description}")
    for r, term in results.items():
        print(f"  {r:<8} {fmt(term.value):>22}  err<={fmt(term.error_estimate)}")
    status = EXIT_OK
    if "closed" in results:
        base = results["closed"].value
        for r, limit in (("contour", CONTOUR_TOL), ("fd", FD_TOL)):
            if r in results:
                delta = results[r].value - base
                allowed = limit + results[r].error_estimate
                ok = abs(delta) <= allowed
                print(f"  delta {r}-closed = {fmt(delta)}  allowed {fmt(allowed)}  {'ok' if ok else 'MISMATCH'}")
                if not ok:
                    status = EXIT_FAIL
    return status


def _lid_from_args(args, cfg: RunConfig):
    if args.kind in ("zeta", RIEMANN_ZETA):
        return riemann_zeta()
    if args.conductor is not None:
        return dirichlet(-abs(args.conductor))
    if cfg.d is not None:
        return dirichlet(resolve_field(cfg.d).D)
    raise UsageError("dirichlet needs --conductor or --d")


def cmd_zeros(args, cfg: RunConfig) -> int:
    cache = _cache(cfg)
    action = args.action
    if action == "import":
        if not args.file:
            raise UsageError("zeros import needs --file")
        try:
            zl = import_zeros(args.file)
        except (OSError, ZeroFileError) as exc:
            print(f"import failed: {exc}", file=sys.stderr)
            return EXIT_FAIL
        if args.certify:
            zl = certify(zl)
        path = cache.store(zl)
        print(f"imported {len(zl.ordinates)} ordinates for {zl.id.label} into {path} certified={int(zl.certified)}")
        if not zl.certified:
            print(f"hint: run `qexplicit zeros certify --kind {zl.id.kind} --conductor {zl.id.conductor}`")
        return EXIT_OK
    lid = _lid_from_args(args, cfg)
    if action == "compute":
        zl = find_zeros(lid, cfg.height)
        print(f"{lid.label}: {len(zl.ordinates)} zeros up to T={fmt(zl.height)} certified={int(zl.certified)}")
        if not zl.certified:
            return EXIT_FAIL
        print(f"wrote {cache.store(zl)}")
        return EXIT_OK
    try:
        zl = cache.load(lid)
    except ZeroFileError as exc:
        print(f"cache file for {lid.label} is corrupt: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if zl is None:
        print(f"no cached zeros for {lid.label}; run `qexplicit zeros compute`", file=sys.stderr)
        return EXIT_FAIL
    if action == "export":
        if args.file:
            export_zeros(zl, args.file)
            print(f"exported {len(zl.ordinates)} ordinates to {args.file}")
        else:
            from .zeros import format_zero_file
            sys.stdout.write(format_zero_file(zl))
        return EXIT_OK
    if action == "certify":
        zl = certify(zl)
        cache.store(zl)
        print(f"{lid.label}: certified={int(zl.certified)} up to T={fmt(zl.height)}")
        return EXIT_OK if zl.certified else EXIT_FAIL
    raise UsageError(f"unknown zeros action {action}")


def cmd_verify(args, cfg: RunConfig) -> int:
    fld = _need_field(cfg)
    f = _need_fn(cfg)
    if f.is_zero:
        raise UsageError("test function is identically zero")
    try:
        report = verify(fld, f, cfg.height, cfg.tol, cache=_cache(cfg), compute=not args.no_compute)
    except FileNotFoundError as exc:
        print(f"{exc}\nhint: run `qexplicit zeros compute --height {fmt(cfg.height)}` for zeta and "
              f"L(s,chi_{fld.D}), or drop --no-compute", file=sys.stderr)
        return EXIT_FAIL
    except UncertifiedZerosError as exc:
        print(f"{exc}\nhint: run `qexplicit zeros certify` (or `zeros compute`) for this L-function",
              file=sys.stderr)
        return EXIT_FAIL
    text = report.to_json()
    if cfg.output:
        cfg.output.write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat TOML file with defaults (flags win)")
    common.add_argument("--cache-dir", dest="cache_dir", default=None,
                        help="zero cache directory (default $QEXPLICIT_CACHE_DIR or ~/.cache/qexplicit)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="qexplicit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qexplicit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pf = sub.add_parser("field", parents=[common], help="splitting table of a field")
    pf.add_argument("--d", type=int, help="fundamental discriminant D or squarefree d < 0")
    pf.add_argument("--bound", type=int, default=None, help="primes up to this bound (default 50)")

    pl = sub.add_parser("local", parents=[common], help="local term W_v(f)")
    pl.add_argument("--d", type=int)
    pl.add_argument("--fn", help="bump:center=<x>,radius=<r>")
    pl.add_argument("--prime", type=int)
    pl.add_argument("--place", choices=["complex"])
    pl.add_argument("--route", choices=["closed", "contour", "fd", "all"], default="closed")
    pl.add_argument("--sigma", type=float, default=0.5)
    pl.add_argument("--contour-height", dest="contour_height", type=float, default=200.0)

    pz = sub.add_parser("zeros", parents=[common], help="compute/import/export/certify zero lists")
    pz.add_argument("action", choices=["compute", "import", "export", "certify"])
    pz.add_argument("--kind", choices=["zeta", RIEMANN_ZETA, DIRICHLET], default="zeta")
    pz.add_argument("--conductor", type=int)
    pz.add_argument("--d", type=int)
    pz.add_argument("--height", type=float)
    pz.add_argument("--file")
    pz.add_argument("--certify", action="store_true", help="re-certify after import")

    pv = sub.add_parser("verify", parents=[common], help="check the explicit formula")
    pv.add_argument("--d", type=int)
    pv.add_argument("--fn")
    pv.add_argument("--height", type=float)
    pv.add_argument("--tol", type=float)
    pv.add_argument("--output")
    pv.add_argument("--no-compute", dest="no_compute", action="store_true",
                    help="fail instead of computing missing zero lists")
    return p


COMMANDS = {"field": cmd_field, "local": cmd_local, "zeros": cmd_zeros, "verify": cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(args)
        if args.command == "field" and args.bound is None:
            args._conf_bound = load_config(args.config).get("bound", 50)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedFieldError as exc:
        print(f"unsupported field: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
