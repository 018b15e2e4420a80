"""Command-line front end: single evaluations and sweeps, CSV or JSON out.

    gapdet det      --kernel sine --s 6 --tol 1e-10
    gapdet compare  --kernel chf --alpha 0.3 --beta 0.2i --s-grid 3:12:1
    gapdet scaling  --mode toeplitz --alpha 0 --beta 0 --s 2 --n-grid 128,256,512

Exit status: 0 ok, 2 invalid input, 3 nonconvergence somewhere in the sweep
(all records are still written, with ``converged`` false on the bad ones).
"""

from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .asymptotics import di3_rhs, gap_ln_asymptotic, toeplitz_ln_asymptotic
from .errors import AccuracyError, GapdetError, NonConvergenceError, ParameterDomainError
from .fredholm import auto_tolerance, fredholm_det
from .hankel import HankelWeight, hankel_det, hankel_scaling_ratio
from .kernels import Family, KernelSpec
from .toeplitz import (
    ArcSymbol,
    dln_second_derivative_fd,
    dln_second_derivative_richardson,
    dn_near_pi_ln,
    scaling_ratio,
    selberg_an,
    toeplitz_det,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_NONCONV = 0, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """'0.3', '0.2i', '-1.5+0.2i', '1e-3-2i' -> complex."""
    t = str(text).strip().replace(" ", "").replace("j", "i")
    if not t:
        raise InputError("empty number")
    try:
        if t.endswith("i"):
            body = t[:-1]
            # split at the last sign that is not an exponent sign
            cut = -1
            for i in range(len(body) - 1, 0, -1):
                if body[i] in "+-" and body[i - 1] not in "eE":
                    cut = i
                    break
            if cut < 0:
                im = body if body not in ("", "+", "-") else body + "1"
                return complex(0.0, float(im))
            re, im = body[:cut], body[cut:]
            if im in ("+", "-"):
                im += "1"
            return complex(float(re), float(im))
        return complex(float(t), 0.0)
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def parse_grid(text: str, integer: bool = False) -> list:
    """'lo:hi:step' (inclusive) or a comma list."""
    conv = int if integer else float
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            if not step > 0:
                raise InputError("grid step must be positive")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            vals = [lo + i * step for i in range(max(count, 0))]
            vals = [conv(round(v)) if integer else conv(round(v, 12)) for v in vals]
        else:
            vals = [conv(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"cannot parse grid {text!r}") from None
    if not vals:
        raise InputError(f"grid {text!r} is empty")
    return vals


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _flatten(rec: dict) -> dict:
    out = {}
    for k, v in rec.items():
        if isinstance(v, dict):
            for kk, vv in v.items():
                out[f"{k}_{kk}"] = vv
        else:
            out[k] = v
    return out


# ---------------------------------------------------------------------------
# per-point tasks (module level so they pickle for the process pool)
# ---------------------------------------------------------------------------


def _spec(args) -> KernelSpec:
    fam = Family(args.kernel)
    if fam is Family.CHF:
        return KernelSpec.chf(args.alpha, args.beta)
    if fam is Family.BESSEL1:
        return KernelSpec.bessel1(args.alpha)
    if fam is Family.BESSEL2:
        return KernelSpec.bessel2(args.a)
    return KernelSpec.sine()


def _tol_for(spec, s, tol):
    if tol is None:
        return auto_tolerance(spec, s)
    return tol


def _task_det(spec, tol, s):
    tol = _tol_for(spec, s, tol)
    r = fredholm_det(spec, s, tol=tol)
    return {
        "s": s,
        "tol_used": tol,
        "det": _cplx(r.value),
        "ln_det": _cplx(r.log_value),
        "m_final": r.m_final,
        "err_estimate": r.err_estimate,
        "converged": r.converged,
    }


def _task_asym(spec, s):
    a = gap_ln_asymptotic(spec, s)
    return {"s": s, "ln_asym": _cplx(a.ln_value), "error_order": a.error_order}


def _task_compare(spec, tol, s):
    tol = _tol_for(spec, s, tol)
    r = fredholm_det(spec, s, tol=tol)
    a = gap_ln_asymptotic(spec, s)
    diff = r.log_value - a.ln_value
    if spec.family is Family.BESSEL2:
        scaled, label = abs(diff) * math.sqrt(s), "residual_times_sqrt_s"
    else:
        scaled, label = abs(diff) * s, "residual_times_s"
    return {
        "s": s,
        "ln_det": _cplx(r.log_value),
        "ln_asym": _cplx(a.ln_value),
        "residual": abs(diff),
        label: scaled,
        "m_final": r.m_final,
        "tol_used": tol,
        "err_estimate": r.err_estimate,
        "converged": r.converged,
    }


def _task_toeplitz(alpha, beta, phi, n):
    r = toeplitz_det(ArcSymbol(alpha, beta, phi), n)
    kind = "Dn0" if phi == 0 else "Dnphi"
    a = toeplitz_ln_asymptotic(kind, alpha, beta, n, phi)
    return {
        "n": n,
        "phi": phi,
        "ln_det": _cplx(r.log_value),
        "method": r.method,
        "coeff_accuracy": r.coeff_accuracy,
        "ln_asym": _cplx(a.ln_value),
        "difference": abs(r.log_value - a.ln_value),
        "converged": True,
    }


def _task_hankel(alpha, phi, n):
    r = hankel_det(HankelWeight(alpha, phi), n)
    rec = {
        "n": n,
        "phi": phi,
        "sign": _cplx(r.sign),
        "ln_abs_det": r.log_abs,
        "precision_bits": r.precision_bits_used,
    }
    if phi == 0:
        a = toeplitz_ln_asymptotic("DH0", alpha, 0, n)
        rec["ln_asym"] = _cplx(a.ln_value)
        rec["difference"] = abs(r.log_value - a.ln_value)
    rec["converged"] = True
    return rec


def _task_scaling(mode, alpha, beta, s, tol, n):
    if mode == "toeplitz":
        ratio = scaling_ratio(n, s, alpha, beta)
        spec = KernelSpec.sine() if alpha == 0 and beta == 0 else KernelSpec.chf(alpha, beta)
        length = s
    else:
        ratio = hankel_scaling_ratio(n, s, alpha)
        # the Hankel ratio tends to the Bessel2 determinant on (0, (2s)^2)
        spec, length = KernelSpec.bessel2(complex(alpha) - 0.5), 4.0 * s * s
    ref = fredholm_det(spec, length, tol=_tol_for(spec, length, tol))
    return {
        "n": n,
        "s": s,
        "ratio": _cplx(ratio),
        "fredholm": _cplx(ref.value),
        "deviation": abs(ratio - ref.value),
        "converged": ref.converged,
    }


def _task_selberg(n):
    ln_a = selberg_an(n)
    asym = toeplitz_ln_asymptotic("An", n=n).ln_value.real
    return {"n": n, "ln_An": ln_a, "ln_asym": asym, "difference": abs(ln_a - asym), "converged": True}


def _task_near_pi(alpha, beta, eps, n):
    r = toeplitz_det(ArcSymbol(alpha, beta, math.pi - eps), n)
    pred = dn_near_pi_ln(n, alpha, eps)
    return {
        "n": n,
        "eps": eps,
        "ln_det": _cplx(r.log_value),
        "ln_leading": _cplx(pred),
        "relative_error": abs(math.exp((r.log_value - pred).real) - 1.0),
        "converged": True,
    }


def _task_diffid(alpha, beta, n, h, phi):
    fd = dln_second_derivative_fd(alpha, beta, n, phi, h)
    rich = dln_second_derivative_richardson(alpha, beta, n, phi, h)
    rhs = di3_rhs(alpha, beta, n, phi)
    bound = 5.0 / (n * math.sin(0.5 * phi))
    return {
        "phi": phi,
        "n": n,
        "fd": _cplx(fd),
        "fd_richardson": _cplx(rich),
        "rhs": _cplx(rhs),
        "difference": abs(fd - rhs),
        "difference_richardson": abs(rich - rhs),
        "bound": bound,
        "converged": True,
    }


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def _s_values(args):
    if args.s_grid:
        vals = parse_grid(args.s_grid)
    elif args.s is not None:
        vals = [args.s]
    else:
        raise InputError("give --s or --s-grid")
    if any(not v > 0 for v in vals):
        raise InputError("s must be positive")
    return vals


def _n_values(args):
    if args.n_grid:
        vals = parse_grid(args.n_grid, integer=True)
    elif args.n is not None:
        vals = [args.n]
    else:
        raise InputError("give --n or --n-grid")
    if any(v < 1 for v in vals):
        raise InputError("n must be >= 1")
    return vals


def _plan(args):
    """(task, grid, x column, y columns) for the chosen subcommand."""
    cmd = args.command
    if cmd == "det":
        return functools.partial(_task_det, _spec(args), args.tol), _s_values(args), "s", ["ln_det_re"]
    if cmd == "asym":
        if args.kind:
            kind = args.kind
            ns = _n_values(args)
            task = functools.partial(_asym_kind_task, kind, args.alpha, args.beta, args.phi or 0.0)
            return task, ns, "n", ["ln_asym_re"]
        return functools.partial(_task_asym, _spec(args)), _s_values(args), "s", ["ln_asym_re"]
    if cmd == "compare":
        task = functools.partial(_task_compare, _spec(args), args.tol)
        return task, _s_values(args), "s", ["ln_det_re", "ln_asym_re", "residual"]
    if cmd == "toeplitz":
        phi = args.phi or 0.0
        task = functools.partial(_task_toeplitz, args.alpha, args.beta, phi)
        return task, _n_values(args), "n", ["ln_det_re", "ln_asym_re", "difference"]
    if cmd == "hankel":
        task = functools.partial(_task_hankel, args.alpha, args.phi or 0.0)
        return task, _n_values(args), "n", ["ln_abs_det"]
    if cmd == "scaling":
        if args.s is None:
            raise InputError("scaling needs --s")
        task = functools.partial(_task_scaling, args.mode, args.alpha, args.beta, args.s, args.tol)
        return task, _n_values(args), "n", ["ratio_re", "fredholm_re", "deviation"]
    if cmd == "selberg":
        if args.eps is not None:
            task = functools.partial(_task_near_pi, args.alpha, args.beta, args.eps)
            return task, _n_values(args), "n", ["ln_det_re", "ln_leading_re", "relative_error"]
        return _task_selberg, _n_values(args), "n", ["ln_An", "ln_asym", "difference"]
    if cmd == "diffid":
        if args.phi is None and not args.phi_grid:
            raise InputError("diffid needs --phi")
        if args.n is None:
            raise InputError("diffid needs --n")
        phis = parse_grid(args.phi_grid) if args.phi_grid else [args.phi]
        task = functools.partial(_task_diffid, args.alpha, args.beta, args.n, args.h)
        return task, phis, "phi", ["fd_re", "fd_richardson_re", "rhs_re"]
    raise InputError(f"unknown command {cmd}")


def _asym_kind_task(kind, alpha, beta, phi, n):
    a = toeplitz_ln_asymptotic(kind, alpha, beta, n, phi)
    return {"n": n, "kind": kind, "ln_asym": _cplx(a.ln_value), "error_order": a.error_order}


def _timed(task, x):
    t0 = time.perf_counter()
    try:
        rec = task(x)
    except (NonConvergenceError, AccuracyError) as exc:
        rec = {"x": x, "converged": False, "error": str(exc)}
    rec["wall_s"] = round(time.perf_counter() - t0, 6)
    return rec


def _run_points(task, grid, jobs):
    fn = functools.partial(_timed, task)
    if jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map keeps grid order whatever the completion order
            return list(pool.map(fn, grid))
    return [fn(x) for x in grid]


def render(records, fmt: str, command: str) -> str:
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "generator": f"gapdet {__version__}",
            "command": command,
            "records": records,
        }
        return json.dumps(doc, indent=2) + "\n"
    flat = [_flatten(r) for r in records]
    cols = []
    for r in flat:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    buf.write(f"# gapdet-csv schema_version={SCHEMA_VERSION} command={command}\n")
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in flat:
        w.writerow(r)
    return buf.getvalue()


def _plot_data(records, xcol, ycols) -> str:
    lines = ["# " + " ".join([xcol, *ycols])]
    for r in map(_flatten, records):
        row = [r.get(xcol, r.get("x"))] + [r.get(c, float("nan")) for c in ycols]
        lines.append(" ".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"


def _parse_tol(text: str):
    if text == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise InputError(f"bad tolerance {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kernel", choices=[f.value for f in Family], default="sine")
    common.add_argument("--alpha", type=parse_complex, default=0j)
    common.add_argument("--beta", type=parse_complex, default=0j)
    common.add_argument("--a", type=parse_complex, default=0j)
    common.add_argument("--s", type=float)
    common.add_argument("--s-grid")
    common.add_argument("--n", type=int)
    common.add_argument("--n-grid")
    common.add_argument("--phi", type=float)
    common.add_argument("--phi-grid")
    common.add_argument("--eps", type=float)
    common.add_argument("--h", type=float, help="finite-difference step (diffid); default phi/100")
    common.add_argument("--kind", choices=["Dn0", "Dnphi", "An", "DH0"])
    common.add_argument("--mode", choices=["toeplitz", "hankel"], default="toeplitz")
    common.add_argument(
        "--tol",
        type=_parse_tol,
        default=None,
        help="Nystrom tolerance, or 'auto' (default): 1e-10 raised to 10x the roundoff floor",
    )
    common.add_argument("--out", choices=["csv", "json"], default="json")
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--emit-plot-data", metavar="PATH", help="also write x/y columns for plotting")

    p = argparse.ArgumentParser(prog="gapdet", description="Gap determinants and their asymptotics.")
    p.add_argument("--version", action="version", version=f"gapdet {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "det": "Fredholm determinant det(I - K) by Nystrom",
        "asym": "closed-form asymptotic value",
        "compare": "numeric ln det against the asymptotic formula on an s grid",
        "toeplitz": "arc Toeplitz determinant D_n(phi)",
        "hankel": "Hankel determinant D_n^H(phi)",
        "scaling": "Toeplitz/Hankel ratios against the limiting Fredholm determinant",
        "selberg": "Selberg integral ln A_n, or D_n(pi - eps) with --eps",
        "diffid": "second phi-derivative of ln D_n against its large-n form",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.tol is not None and not args.tol > 0:
            raise InputError("tol must be positive")
        if args.jobs < 1:
            raise InputError("jobs must be >= 1")
        task, grid, xcol, ycols = _plan(args)
        records = _run_points(task, grid, args.jobs)
    except (InputError, ParameterDomainError) as exc:
        print(f"gapdet: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GapdetError as exc:
        print(f"gapdet: {exc}", file=sys.stderr)
        return EXIT_NONCONV

    text = render(records, args.out, args.command)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.emit_plot_data:
        with open(args.emit_plot_data, "w") as fh:
            fh.write(_plot_data(records, xcol, ycols))
    if not all(r.get("converged", True) for r in records):
        print("gapdet: nonconvergence in at least one grid point", file=sys.stderr)
        return EXIT_NONCONV
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
