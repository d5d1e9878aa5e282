"""Command-line entry point: every experiment is a subcommand emitting CSV.

Each run writes `<name>.csv` plus a `<name>.meta.json` sidecar holding the
full configuration, library versions, seeds, and wall time, into
`out/<subcommand>/<timestamp>/` (or a directory given with --out).  Exit
codes: 0 success, 2 precondition violation, 3 budget exceeded, 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__, integers, partitions, rmt
from .characters import (
    rh_check,
    verify_b_series_identity,
    verify_variance_identity,
)
from .errors import BudgetExceededError, InternalCheckError, PreconditionError
from .ffield import DEFAULT_MAX_ENUM, k_q_constant, variance_brute

DEFAULT_THREADS = int(os.environ.get("ZVAR_THREADS", "1"))


class _Budget:
    def __init__(self, max_seconds: float | None):
        self.t0 = time.monotonic()
        self.max_seconds = max_seconds

    def check(self):
        if self.max_seconds and time.monotonic() - self.t0 > self.max_seconds:
            raise BudgetExceededError(
                f"soft time budget of {self.max_seconds}s exceeded"
            )


def _frac_str(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return format(float(x), ".12g")


def _parse_z(text: str):
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    if "j" in text or "i" in text:
        return complex(text.replace("i", "j"))
    f = float(text)
    return Fraction(f) if f == int(f) else f


def _parse_grid(text: str | None, points: int, upper: float = 1.0):
    if text:
        return [float(s) for s in text.split(",")]
    return [upper * i / points for i in range(1, points + 1)]


def _write_output(args, name: str, header: list[str], rows: list[list],
                  meta: dict, t0: float) -> str:
    if args.out:
        outdir = args.out
    else:
        stamp = datetime.datetime.now(datetime.timezone.utc).strftime(
            "%Y%m%dT%H%M%S%f"
        )
        outdir = os.path.join("out", name, stamp)
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, f"{name}.csv")
    with open(csv_path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_frac_str(v) if not isinstance(v, str) else v
                              for v in row) + "\n")
    meta_full = {
        "subcommand": name,
        "config": {k: v for k, v in vars(args).items() if k != "func"},
        "versions": {"zvar": __version__, "numpy": np.__version__},
        "wall_time_s": time.monotonic() - t0,
        "timestamp_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    meta_full.update(meta)
    with open(os.path.join(outdir, f"{name}.meta.json"), "w") as fh:
        json.dump(meta_full, fh, indent=2, default=str)
    return csv_path


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def cmd_zmeasure_table(args):
    z = _parse_z(args.z)
    zp = _parse_z(args.zprime) if args.zprime else None
    params = partitions.ZParams.of(z, zp)
    rows = []
    for lam in partitions.enumerate_partitions(args.n):
        m = partitions.z_measure(args.n, params, lam)
        rows.append(["+".join(map(str, lam.parts)) or "0", _frac_str(m)])
    return ["partition", "measure"], rows, {}


def cmd_curve_g(args):
    grid = _parse_grid(args.grid, args.points)
    curve = partitions.g_curve(args.n, grid)
    return ["s", "value"], [[s, v] for s, v in curve], {"n": args.n}


def cmd_curve_fz(args):
    z = _parse_z(args.z)
    grid = _parse_grid(args.grid, args.points or args.n)
    curve = partitions.fz_curve(z, args.n, grid, with_derivative=args.derivative)
    if args.derivative:
        return ["s", "value", "derivative"], [list(r) for r in curve], {}
    return ["s", "value"], [list(r) for r in curve], {}


def cmd_t_coeff(args):
    val = partitions.t_coefficient(args.n, args.N)
    return ["n", "N", "value"], [[args.n, args.N, _frac_str(val)]], {}


def cmd_ff_verify_lemma21(args):
    z = _parse_z(args.z) if args.z else None
    alpha = "dz" if args.alpha.startswith("d") else "b"
    if alpha == "dz" and z is None:
        z = {"dhalf": Fraction(1, 2), "d2": Fraction(2)}.get(args.alpha)
        if z is None:
            raise PreconditionError("pass --z for alpha=dz")
    rep = verify_variance_identity(args.q, args.n, args.h, alpha, z=z)
    return (
        ["q", "n", "h", "alpha", "lhs", "rhs", "abs_diff"],
        [[rep.q, rep.n, rep.h, args.alpha, rep.lhs, rep.rhs, rep.abs_diff]],
        {},
    )


def cmd_ff_verify_b_series_identity(args):
    rows = verify_b_series_identity(args.q, args.m, args.nmax)
    out = [
        [r.char_index, r.n, r.direct.real, r.direct.imag, r.series.real,
         r.series.imag, r.abs_diff]
        for r in rows
    ]
    worst = max(r.abs_diff for r in rows)
    return (
        ["chi", "n", "direct_re", "direct_im", "series_re", "series_im",
         "abs_diff"],
        out,
        {"worst_abs_diff": worst},
    )


def cmd_ff_variance(args):
    z = _parse_z(args.z) if args.z else None
    alpha = "dz" if args.alpha == "dz" else "b"
    rows = []
    budget = _Budget(args.max_seconds)
    for q in [int(s) for s in args.q.split(",")]:
        budget.check()
        N = args.n - args.h - 1
        res = variance_brute(alpha, q, args.n, args.h, z=z,
                             max_enum=args.max_enum)
        if alpha == "b":
            tref = float(partitions.t_coefficient(args.n, N))
        else:
            zz = Fraction(z) if not isinstance(z, float) else z
            tref = float(
                partitions.pochhammer(zz * zz, args.n)
                / math.factorial(args.n)
                * partitions.prob_lambda1_le(args.n, zz, N - 1)
            )
        scaled = res.value / q ** (args.h + 1)
        try:
            rhs = verify_variance_identity(q, args.n, args.h, alpha, z=z).rhs
        except BudgetExceededError:
            rhs = float("nan")
        rows.append(
            [q, args.n, args.h, N, res.value, tref, scaled / tref, rhs,
             abs(res.value - rhs)]
        )
    return (
        ["q", "n", "h", "N", "var_brute", "t_coeff_scaled", "ratio",
         "charsum_rhs", "abs_diff"],
        rows,
        {},
    )


def cmd_ff_rh_check(args):
    rows = []
    for q in [int(s) for s in args.q.split(",")]:
        for m in range(2, args.m + 1):
            checked, worst = rh_check(q, m)
            rows.append([q, m, checked, worst])
    return ["q", "m", "characters", "worst_modulus_deviation"], rows, {}


def cmd_rmt_exact(args):
    z = _parse_z(args.z)
    zp = _parse_z(args.zprime) if args.zprime else z
    closed = rmt.rmt_integral_exact(args.n, z, zp, args.N)
    schur = rmt.schur_route_integral(args.n, z, zp, args.N)
    return (
        ["n", "z", "zprime", "N", "schur_sum", "closed_form", "equal"],
        [[args.n, str(z), str(zp), args.N, _frac_str(schur), _frac_str(closed),
          int(schur == closed)]],
        {},
    )


def cmd_rmt_mc(args):
    z = _parse_z(args.z)
    zp = _parse_z(args.zprime) if args.zprime else z
    diag: dict = {}
    est, se, ref = rmt.mc_verify_thm42(
        args.n, z, zp, args.N, samples=args.samples, seed=args.seed,
        m=args.m, chains=args.chains, diagnostics=diag
    )
    sig = abs(est - ref) / se if se else 0.0
    return (
        ["n", "z", "zprime", "N", "estimate", "se", "reference", "sigmas"],
        [[args.n, str(z), str(zp), args.N, est, se, ref, sig]],
        {"m": args.m, "sampler": diag},
    )


def cmd_gamma_k(args):
    est, se = partitions.gamma_k_mc(args.k, args.c, args.samples, args.seed,
                                    workers=args.threads)
    return ["k", "c", "estimate", "se"], [[args.k, args.c, est, se]], {}


def _sieve_for(args, upper: int):
    return integers.sieve_b(upper, threads=args.threads)


def cmd_fig1(args):
    X = int(args.x)
    if args.h_grid:
        deltas = [math.log(float(h)) / math.log(float(args.x))
                  for h in args.h_grid.split(",")]
    else:
        deltas = [float(s) for s in args.deltas.split(",")]
    H_max = int(X ** max(deltas)) + 10
    sieve = _sieve_for(args, 2 * X + H_max)
    rows = integers.fig1_rows(sieve, X, deltas, samples=args.samples,
                              seed=args.seed)
    return (
        ["delta", "H", "vb_norm", "prediction"],
        [[r.delta, r.H, r.normalized, r.prediction] for r in rows],
        {"se": [r.se for r in rows], "X": X,
         "prediction_note": "finite-n prediction (n=50 curve)"},
    )


def cmd_fig2(args):
    X = int(args.x)
    deltas = np.linspace(args.delta_min, args.delta_max, args.count)
    sieve = _sieve_for(args, X)
    rows = integers.fig2_rows(sieve, X, deltas)
    return (
        ["delta", "p", "vbap_norm", "prediction"],
        [[r.delta, r.p, r.normalized, r.prediction] for r in rows],
        {"X": X, "prediction_note": "finite-n prediction (n=50 curve)"},
    )


def cmd_appendix_c(args):
    X = int(args.x)
    sieve = _sieve_for(args, X)
    rows = integers.appendix_c_rows(sieve, X, args.primes)
    return (
        ["delta", "p", "data", "prediction"],
        [[r.delta, r.p, r.normalized, r.prediction] for r in rows],
        {"X": X, "delta_of_max": integers.hl_delta_max(X)},
    )


def cmd_constants(args):
    rows = [
        ["K", integers.landau_K()],
        ["K_naive_1e6", integers.landau_K_naive()],
        ["zeta_2", integers.zeta_real(2.0)],
        ["L1_chi4", integers.l4_real(1.0)],
        ["a_1", integers.a_z_euler(1.0)[0]],
        ["a_2_euler", integers.a_z_euler(2.0)[0]],
        ["a_2_fit", integers.a2_dirichlet_fit(int(args.x))],
    ]
    for q in (3, 5, 7, 11, 13):
        rows.append([f"K_{q}", k_q_constant(q)])
    return ["name", "value"], rows, {}


def cmd_dz_variance(args):
    X = int(args.x)
    z = float(_parse_z(args.z))
    deltas = [float(s) for s in args.deltas.split(",")]
    rows = integers.dz_variance_rows(X, z, deltas)
    return (
        ["z", "X", "p", "delta", "vdz_norm", "prediction"],
        [[z, X, r.p, r.delta, r.normalized, r.prediction] for r in rows],
        {},
    )


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--out", default=None, help="output directory")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    sp.add_argument("--max-enum", type=float, default=DEFAULT_MAX_ENUM,
                    dest="max_enum")
    sp.add_argument("--max-seconds", type=float, default=None,
                    dest="max_seconds")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zvar",
        description="variance experiments for sums of two squares and "
        "divisor weights",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def cmd(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        _add_common(sp)
        sp.set_defaults(func=fn, name=name)
        return sp

    sp = cmd("zmeasure-table", cmd_zmeasure_table)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--zprime", default=None)

    sp = cmd("curve-g", cmd_curve_g)
    sp.add_argument("--n", type=int, default=50)
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--grid", default=None)

    sp = cmd("curve-fz", cmd_curve_fz)
    sp.add_argument("--z", required=True)
    sp.add_argument("--n", type=int, default=60)
    sp.add_argument("--points", type=int, default=None)
    sp.add_argument("--grid", default=None)
    sp.add_argument("--derivative", action="store_true")

    sp = cmd("t-coeff", cmd_t_coeff)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)

    sp = cmd("ff-verify-lemma21", cmd_ff_verify_lemma21)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--alpha", default="b", choices=["b", "dz", "dhalf", "d2"])
    sp.add_argument("--z", default=None)

    sp = cmd("ff-verify-lemma22", cmd_ff_verify_b_series_identity)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--m", type=int, default=4)
    sp.add_argument("--nmax", type=int, default=8)

    sp = cmd("ff-variance", cmd_ff_variance)
    sp.add_argument("--q", default="3,5,7")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--alpha", default="b", choices=["b", "dz"])
    sp.add_argument("--z", default=None)

    sp = cmd("ff-rh-check", cmd_ff_rh_check)
    sp.add_argument("--q", default="3,5,7")
    sp.add_argument("--m", type=int, default=4)

    sp = cmd("rmt-exact", cmd_rmt_exact)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--zprime", default=None)
    sp.add_argument("--N", type=int, required=True)

    sp = cmd("rmt-mc", cmd_rmt_mc)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--zprime", default=None)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--chains", type=int, default=256)

    sp = cmd("gamma-k", cmd_gamma_k)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--samples", type=int, default=1_000_000)

    sp = cmd("fig1", cmd_fig1)
    sp.add_argument("--x", type=float, default=1e8)
    sp.add_argument("--deltas", default="0.3,0.5,0.7")
    sp.add_argument("--h-grid", default=None, dest="h_grid",
                    help="comma-separated interval lengths H (overrides --deltas)")
    sp.add_argument("--samples", type=int, default=100_000)

    sp = cmd("fig2", cmd_fig2)
    sp.add_argument("--x", type=float, default=1e8)
    sp.add_argument("--delta-min", type=float, default=0.2, dest="delta_min")
    sp.add_argument("--delta-max", type=float, default=0.8, dest="delta_max")
    sp.add_argument("--count", type=int, default=16)

    sp = cmd("appendix-c", cmd_appendix_c)
    sp.add_argument("--x", type=float, default=1e8)
    sp.add_argument("--primes", type=int, default=10)

    sp = cmd("constants", cmd_constants)
    sp.add_argument("--x", type=float, default=1e6,
                    help="partial-sum limit for the a_2 fit route")

    sp = cmd("dz-variance", cmd_dz_variance)
    sp.add_argument("--x", type=float, default=1e6)
    sp.add_argument("--z", default="0.5")
    sp.add_argument("--deltas", default="0.3,0.5,0.7")

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.monotonic()
    try:
        header, rows, meta = args.func(args)
        path = _write_output(args, args.name, header, rows, meta, t0)
    except PreconditionError as e:
        json.dump({"error": str(e), "type": "precondition"}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except BudgetExceededError as e:
        json.dump({"error": str(e), "type": "budget"}, sys.stderr)
        sys.stderr.write("\n")
        return 3
    except InternalCheckError as e:
        json.dump({"error": str(e), "type": "internal-check"}, sys.stderr)
        sys.stderr.write("\n")
        return 4
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
