"""Command-line front end: plot-ready CSV/JSON emission and verification.

Subcommands
-----------
points   generate a point set (lattice / jitter / poisson), write CSV + sidecar
bounds   certified tail sums and sandwich checks as a JSON report
ramsey   dephasing profile CSV: t, C, err, gauss, bound_rhs
spectra  cosine-product CSV (t, C, err); `spectra cantor` emits (x, D, C(D))
basis    orthonormality and Fourier reports as JSON
verify   run the property suite, print a PASS/FAIL table, exit nonzero on failure

Every CSV carries a header row and 17-significant-digit values, plus a JSON
sidecar (same path + ".json") echoing the full configuration and the library
version, so identical config + seed reproduces byte-identical files.  Exit
codes: 0 success, 1 verification failure, 2 argument errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import __version__
from . import basis as basis_mod
from . import bounds as bounds_mod
from . import pointsets, ramsey, spectra
from ._rng import counter_uniform, counter_uniform_open

__all__ = ["RunConfig", "main", "run"]


@dataclass(frozen=True)
class RunConfig:
    """Parameter record of one CLI invocation; round-trips through JSON."""

    subcommand: str
    params: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        return cls(subcommand=data["subcommand"], params=data["params"])


def _write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    data = np.column_stack([np.asarray(c, dtype=np.float64) for c in columns])
    np.savetxt(path, data, fmt="%.17g", delimiter=",",
               header=",".join(header), comments="")


def _write_sidecar(path: str, config: RunConfig, extra: dict | None = None) -> None:
    payload = {"config": json.loads(config.to_json()),
               "version": __version__}
    if extra:
        payload.update(extra)
    with open(path + ".json", "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2))
        fh.write("\n")


# window defaults per dimension for `ramsey` (d = 1 affords a very wide
# window; the certificate budget at alpha = 1 needs one)
_RAMSEY_RMAX = {1: 1.0e6, 2: 200.0, 3: 60.0}


def _build_set(args) -> pointsets.PointSet:
    if args.rmax is None:
        args.rmax = _RAMSEY_RMAX[args.dim]
    if args.set == "lattice":
        return pointsets.gen_lattice(args.dim, args.rmax)
    if args.set == "jitter":
        return pointsets.gen_jittered(args.dim, args.rmax, args.jitter, args.seed)
    return pointsets.gen_poisson_disk(args.dim, args.rmax, args.rmin, args.seed)


def _set_params(args) -> dict:
    return {"dim": args.dim, "set": args.set, "rmax": args.rmax,
            "seed": args.seed, "jitter": args.jitter, "rmin": args.rmin}


def _add_set_flags(p: argparse.ArgumentParser,
                   default_rmax: float | None) -> None:
    p.add_argument("--dim", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--set", choices=("lattice", "jitter", "poisson"),
                   default="lattice")
    p.add_argument("--rmax", type=float, default=default_rmax,
                   help="window radius (ramsey default depends on --dim)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter", type=float, default=0.25,
                   help="jitter amplitude eta for --set jitter")
    p.add_argument("--rmin", type=float, default=1.0,
                   help="hard-core distance for --set poisson")


def _cmd_points(args) -> int:
    ps = _build_set(args)
    radii = pointsets.measure_radii(ps, margin=args.margin)
    ps.to_csv(args.out)
    cfg = RunConfig("points", {**_set_params(args), "margin": args.margin,
                               "out": args.out})
    _write_sidecar(args.out, cfg, {
        "n_points": ps.n_points,
        "meta": ps.meta,
        "radii": {"r_pack": radii.r_pack, "r_cover": radii.r_cover,
                  "probe_resolution": radii.probe_resolution}})
    return 0


def _cmd_bounds(args) -> int:
    ps = _build_set(args)
    radii = pointsets.measure_radii(ps, margin=args.margin)
    rows = []
    ok_all = True
    for r in args.r:
        res = bounds_mod.sandwich_check(ps, radii, args.alpha, r)
        ok_all &= res.holds
        rows.append({"r": res.r, "lower": res.lower, "sum": res.finite_sum,
                     "err": res.tail_err, "upper": res.upper,
                     "holds": res.holds})
    cfg = RunConfig("bounds", {**_set_params(args), "alpha": args.alpha,
                               "r": list(args.r), "margin": args.margin,
                               "out": args.out})
    report = {"config": json.loads(cfg.to_json()), "version": __version__,
              "radii": {"r_pack": radii.r_pack, "r_cover": radii.r_cover,
                        "probe_resolution": radii.probe_resolution},
              "rows": rows, "all_hold": bool(ok_all)}
    with open(args.out, "w") as fh:
        fh.write(json.dumps(report, sort_keys=True, indent=2))
        fh.write("\n")
    return 0


def _cmd_ramsey(args) -> int:
    ps = _build_set(args)
    radii = pointsets.measure_radii(ps, margin=args.margin)
    times = np.arange(0.0, args.tmax + 0.5 * args.dt, args.dt)
    prof = ramsey.evaluate_profile(ps, radii, args.alpha, args.r, times,
                                   args.tol)
    diag = ramsey.compact_bound_check(prof)
    _write_csv(args.out, ["t", "C", "err", "gauss", "bound_rhs"],
               [prof.times, prof.values, prof.err, prof.gaussian,
                diag.bound_rhs])
    cfg = RunConfig("ramsey", {**_set_params(args), "alpha": args.alpha,
                               "r": args.r, "tmax": args.tmax, "dt": args.dt,
                               "tol": args.tol, "margin": args.margin,
                               "out": args.out})
    _write_sidecar(args.out, cfg, {
        "s2": {"value": prof.s2.value, "err": prof.s2.err},
        "s4": {"value": prof.s4.value, "err": prof.s4.err},
        "sup_dist": diag.sup_dist, "compact_bound_ok": diag.envelope_ok})
    return 0


def _cmd_spectra(args) -> int:
    if args.mode == "cantor":
        idx = np.arange(args.n, dtype=np.int64)
        # open-interval sampler: odd 53-bit mantissas are never dyadic at
        # any level the digit map inspects, so D(x) is always defined
        xs = counter_uniform_open(args.seed, idx)
        rows_x, rows_d, rows_c = [], [], []
        for x in xs:
            d_val = spectra.d_map_exact(float(x), args.depth)
            rows_x.append(float(x))
            rows_d.append(float(d_val))
            rows_c.append(spectra.cantor_function(d_val, args.depth))
        _write_csv(args.out, ["x", "D", "C_of_D"],
                   [np.array(rows_x), np.array(rows_d), np.array(rows_c)])
        cfg = RunConfig("spectra", {"mode": "cantor", "n": args.n,
                                    "seed": args.seed, "depth": args.depth,
                                    "out": args.out})
        _write_sidecar(args.out, cfg)
        return 0
    times = np.arange(0.0, args.tmax + 0.5 * args.dt, args.dt)
    if args.tmax >= math.pi:
        # pi never lands on a rational grid, yet it is the natural probe
        # point for self-similar products; include it explicitly
        times = np.sort(np.append(times, math.pi))
    vals = np.empty(times.size)
    errs = np.empty(times.size)
    prod = spectra.CosProduct(args.base, depth=args.depth)
    for i, t in enumerate(times):
        cv = prod.evaluate(float(t))
        vals[i], errs[i] = cv.value, cv.err
    _write_csv(args.out, ["t", "C", "err"], [times, vals, errs])
    cfg = RunConfig("spectra", {"mode": "product", "base": args.base,
                                "tmax": args.tmax, "dt": args.dt,
                                "depth": args.depth, "out": args.out})
    _write_sidecar(args.out, cfg)
    return 0


def _cmd_basis(args) -> int:
    rng_idx = np.arange(2 * args.pairs, dtype=np.int64)
    draws = counter_uniform(args.seed, rng_idx)
    pairs = []
    for i in range(args.pairs):
        a = _random_index(draws[2 * i], args.kmax)
        b = _random_index(draws[2 * i + 1], args.kmax)
        ip = basis_mod.inner_product(a, b)
        pairs.append({"alpha": list(a), "beta": list(b), "inner": ip,
                      "expected": 1.0 if a == b else 0.0})
    fourier = []
    for k in range(1, args.kmax + 1):
        for n in range(-args.nrange, args.nrange + 1):
            m = (1 << k) * n + (1 << (k - 1))
            c = basis_mod.fourier_coeff(k, m)
            fourier.append({"k": k, "n": n, "m": m,
                            "re": c.real, "im": c.imag,
                            "predicted_mag": (1.0 / math.pi) / abs(n + 0.5)})
    cfg = RunConfig("basis", {"pairs": args.pairs, "seed": args.seed,
                              "kmax": args.kmax, "nrange": args.nrange,
                              "out": args.out})
    report = {"config": json.loads(cfg.to_json()), "version": __version__,
              "orthonormality": pairs, "fourier_support": fourier}
    with open(args.out, "w") as fh:
        fh.write(json.dumps(report, sort_keys=True, indent=2))
        fh.write("\n")
    return 0


def _random_index(u: float, kmax: int) -> tuple[int, ...]:
    """Small random ascending index set decoded from one uniform draw."""
    bits = int(u * (1 << kmax)) & ((1 << kmax) - 1)
    return tuple(n + 1 for n in range(kmax) if (bits >> n) & 1)


# ---------------------------------------------------------------------------
# verify: the self-contained property suite


def _verify_checks(quick: bool) -> list[tuple[str, Callable[[], bool]]]:
    checks: list[tuple[str, Callable[[], bool]]] = []

    def viete() -> bool:
        ts = np.arange(0.1, 50.0 + 1e-9, 0.1)
        prod = spectra.CosProduct(2, depth=40)
        worst = max(abs(prod.evaluate(float(t)).value - math.sin(t) / t)
                    for t in ts)
        return worst <= 1e-10

    checks.append(("product(base 2) equals sin(t)/t on (0,50]", viete))

    def oscillation() -> bool:
        c = spectra.cos_product(3, math.pi, 1e-13)
        if abs(c.value - spectra.L_ORACLE) > 1e-12 + c.err:
            return False
        seq = spectra.persistent_oscillation(3, 8 if quick else 12)
        return all(abs(v - (-1.0) ** i * spectra.L_ORACLE) <= 1e-10
                   for i, v in seq)

    checks.append(("oscillation C(3^i pi) = (-1)^i C(pi), non-decaying",
                   oscillation))

    def recursion() -> bool:
        n = 20 if quick else 100
        for b in (2, 3, 4, 5):
            ts = counter_uniform(7, np.arange(n, dtype=np.int64),
                                 np.int64(b)) * 60.0 - 30.0
            if not all(spectra.recursion_check(b, float(t)) for t in ts):
                return False
        return True

    checks.append(("rescaling identity C(b t) = cos(t) C(t)", recursion))

    def sandwich() -> bool:
        for d in (1, 2):
            ps = pointsets.gen_lattice(d, 60.0)
            radii = pointsets.measure_radii(ps, margin=0.0 if d == 1 else 20.0)
            for alpha in (d + 0.5, d + 1.0):
                for r in np.linspace(3.0 * radii.r_cover_upper, 30.0, 4):
                    res = bounds_mod.sandwich_check(ps, radii, alpha, float(r))
                    if not res.holds:
                        return False
        return True

    checks.append(("integral sandwich brackets every tail sum", sandwich))

    def annulus() -> bool:
        ps = pointsets.gen_jittered(2, 40.0, 0.25, 11)
        radii = pointsets.measure_radii(ps, margin=10.0)
        n = 20 if quick else 100
        u = counter_uniform(13, np.arange(2 * n, dtype=np.int64))
        rp = min(radii.r_pack, float(ps.meta["r_pack_structural"]))
        for i in range(n):
            a = rp + u[2 * i] * 20.0
            b = a + 0.5 + u[2 * i + 1] * 15.0
            rep = pointsets.check_annulus_bounds(ps, radii, float(a), float(b))
            if not rep.holds:
                return False
        return True

    checks.append(("volume bounds bracket every annulus count", annulus))

    def compact() -> bool:
        ps = pointsets.gen_lattice(1, 2000.0)
        radii = pointsets.measure_radii(ps)
        times = np.arange(0.0, 6.0 + 1e-9, 0.02)
        for r in (10.0, 30.0):
            prof = ramsey.evaluate_profile(ps, radii, 2.0, r, times, 0.1)
            if not ramsey.compact_bound_check(prof).envelope_ok:
                return False
        return True

    checks.append(("Gaussian distance below (t^4/12) S4/S2^2", compact))

    def orthonormal() -> bool:
        n = 50 if quick else 200
        u = counter_uniform(17, np.arange(2 * n, dtype=np.int64))
        for i in range(n):
            a = _random_index(u[2 * i], 12)
            b = _random_index(u[2 * i + 1], 12)
            expected = 1.0 if a == b else 0.0
            if basis_mod.inner_product(a, b) != expected:
                return False
        for nn in range(0, 13):
            pw = basis_mod.partial_sum_x(nn)
            if abs(basis_mod.l2_distance_to_x(pw)
                   - 2.0 ** (-nn) / math.sqrt(3.0)) > 1e-12:
                return False
        return True

    checks.append(("basis orthonormality and staircase error law",
                   orthonormal))

    def fourier() -> bool:
        kmax = 5 if quick else 10
        for k in range(1, kmax + 1):
            for n in (-3, -1, 0, 1, 4):
                m = (1 << k) * n + (1 << (k - 1))
                c = basis_mod.fourier_coeff(k, m)
                if abs(abs(c) - (1.0 / math.pi) / abs(n + 0.5)) > 1e-12:
                    return False
                if abs(basis_mod.fourier_coeff(k, m + 1)) > 1e-12:
                    return False
        return t_check(kmax)

    def t_check(kmax: int) -> bool:
        return all(basis_mod.t_fourier_action_check(k, 20)
                   for k in range(1, min(kmax, 4) + 1))

    checks.append(("Fourier support, magnitudes, and doubling action",
                   fourier))

    def cantor_roundtrip() -> bool:
        n = 100 if quick else 1000
        depth = 40 if quick else 50
        budget = 2.0 ** (-depth) + 3.0 ** (-depth) + 1e-12
        xs = counter_uniform_open(23, np.arange(n, dtype=np.int64))
        for x in xs:
            d_val = spectra.d_map_exact(float(x), depth)
            c_val = spectra.cantor_function(d_val, depth + 5)
            if abs(c_val - float(x)) > budget:
                return False
        rep = spectra.char_function_check(10 ** 4, [1.0, math.pi], 29)
        return rep.all_ok

    checks.append(("Cantor transport C(D(x)) = x and its spectrum",
                   cantor_roundtrip))

    def soundness() -> bool:
        ps1 = pointsets.gen_lattice(1, 500.0)
        ps2 = pointsets.gen_lattice(1, 1000.0)
        rad1 = pointsets.measure_radii(ps1)
        rad2 = pointsets.measure_radii(ps2)
        for alpha, r in ((1.0, 5.0), (1.5, 3.0), (2.0, 8.0)):
            a = bounds_mod.delone_tail_sum(ps1, rad1, 2 * alpha, r)
            b = bounds_mod.delone_tail_sum(ps2, rad2, 2 * alpha, r)
            if not (a.lo <= b.value <= a.hi):
                return False
        times = np.arange(0.0, 5.0, 0.05)
        p1 = ramsey.evaluate_profile(ps1, rad1, 2.0, 10.0, times, 0.1)
        p2 = ramsey.evaluate_profile(ps2, rad2, 2.0, 10.0, times, 0.1)
        return bool(np.all(np.abs(p1.values - p2.values)
                           <= p1.err + p2.err))

    checks.append(("doubling the window stays inside certificates",
                   soundness))
    return checks


def _cmd_verify(args) -> int:
    checks = _verify_checks(args.quick)
    width = max(len(name) for name, _ in checks) + 2
    failures = 0
    for name, fn in checks:
        try:
            ok = fn()
            detail = ""
        except Exception as exc:  # a crash is a failure with a reason
            ok = False
            detail = f"  ({exc})"
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        print(f"{name:<{width}} {status}{detail}")
    print(f"{failures} of {len(checks)} checks failed"
          if failures else f"all {len(checks)} checks passed")
    return 1 if failures else 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="centralspin",
        description="Certified central-spin dephasing on Delone point sets")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("points", help="generate a point set")
    _add_set_flags(p, default_rmax=20.0)
    p.add_argument("--margin", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_points)

    p = sub.add_parser("bounds", help="certified tail sums + sandwich report")
    _add_set_flags(p, default_rmax=60.0)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--r", type=float, nargs="+", default=[5.0, 10.0])
    p.add_argument("--margin", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("ramsey", help="dephasing profile CSV")
    _add_set_flags(p, default_rmax=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--r", type=float, default=10.0)
    p.add_argument("--tmax", type=float, default=8.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--tol", type=float, default=0.1)
    p.add_argument("--margin", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ramsey)

    p = sub.add_parser("spectra", help="cosine-product / Cantor emission")
    p.add_argument("mode", nargs="?", choices=("product", "cantor"),
                   default="product")
    p.add_argument("--base", type=int, default=3)
    p.add_argument("--tmax", type=float, default=30.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--depth", type=int, default=40)
    p.add_argument("--n", type=int, default=200,
                   help="sample count for cantor mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_spectra)

    p = sub.add_parser("basis", help="orthonormality + Fourier JSON report")
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--nrange", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=_cmd_verify)
    return ap


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        # refusals (tolerance not certifiable, region too small, bad ranges)
        # are expected outcomes, not crashes: report and exit nonzero
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
