"""Command-line front end.

Verbs: ``bound``, ``recover``, ``certify``, ``sharpness``, ``cvd-check``,
``convolve``. Exit status is 0 on success, 1 when the bound is violated or
an interpolation is inconsistent (or a CVD screen fails), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from .convolution import ConvSpec, convolve_spectral
from .errors import ConvRecError, InconsistentInterpolationError
from .harness import (PsiSpec, RecoveryReport, TrialResult, cvd_check, gen_psi,
                      method_report, run_certification, sharpness_experiment)
from .kernels import parse_kernel
from .recovery import residual_error
from .spectral import DEFAULT_GRID, TWO_PI, TrigPoly

VERBS = ("bound", "recover", "certify", "sharpness", "cvd-check", "convolve")
DIGITS = 12


@dataclass
class Command:
    verb: str
    kernel_specs: list = field(default_factory=list)
    s: int = 1
    grid: int = DEFAULT_GRID
    psi_specs: list = field(default_factory=list)
    trials: int = 100
    seed: int = 0
    widths: Optional[list] = None
    output: Optional[str] = None
    format: str = "text"
    threads: int = 1
    perturb_alpha: float = 0.0
    funcs: list = field(default_factory=list)
    order: int = 8
    scan: int = 8

    @property
    def n(self) -> int:
        return len(self.kernel_specs)


def _parse_pairs(text: str):
    kind, _, rest = text.strip().partition(":")
    pairs = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {item!r}")
        pairs[key.strip()] = value.strip()
    return kind.strip().lower(), pairs


def parse_psi(text: str) -> PsiSpec:
    """``box:center=0,width=0.01``, ``random_trig:order=5,seed=7``,
    ``random_atoms:count=3,seed=1`` or ``constant`` (each accepts ``norm=``)."""
    kind, pairs = _parse_pairs(text)
    types = {"center": float, "width": float, "order": int, "count": int,
             "seed": int, "norm": float}
    kwargs = {}
    for key, value in pairs.items():
        if key not in types:
            raise ValueError(f"unknown psi parameter {key!r}")
        kwargs[key] = types[key](value)
    return PsiSpec(kind, **kwargs)


def parse_func(text: str) -> TrigPoly:
    """``trig:a0=2,a1=1,b3=0.5`` -> the corresponding trigonometric polynomial."""
    kind, pairs = _parse_pairs(text)
    if kind != "trig":
        raise ValueError(f"unknown function kind {kind!r}")
    a0 = float(pairs.pop("a0", 0.0))
    coef = {}
    for key, value in pairs.items():
        if key[:1] not in "ab" or not key[1:].isdigit() or int(key[1:]) < 1:
            raise ValueError(f"bad coefficient name {key!r}")
        coef[(key[0], int(key[1:]))] = float(value)
    order = max((j for _, j in coef), default=0)
    a = [coef.get(("a", j), 0.0) for j in range(1, order + 1)]
    b = [coef.get(("b", j), 0.0) for j in range(1, order + 1)]
    return TrigPoly(order, a0, a, b)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kernel", action="append", default=[], dest="kernel_specs",
                        help="kernel mini-syntax, e.g. poisson:q=0.5 (repeat for chains)")
    common.add_argument("--s", type=int, default=1)
    common.add_argument("--grid", type=int, default=DEFAULT_GRID)
    common.add_argument("--output", default=None)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="convrec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("bound", parents=[common])
    p.add_argument("--perturb-alpha", type=float, default=0.0)

    p = sub.add_parser("recover", parents=[common])
    p.add_argument("--psi", action="append", default=[], dest="psi_specs")
    p.add_argument("--perturb-alpha", type=float, default=0.0)

    p = sub.add_parser("certify", parents=[common])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--psi", action="append", default=[], dest="psi_specs")
    p.add_argument("--perturb-alpha", type=float, default=0.0)

    p = sub.add_parser("sharpness", parents=[common])
    p.add_argument("--widths", default=None,
                   help="comma-separated box widths (default 2pi/2^6 .. 2pi/2^10)")
    p.add_argument("--scan", type=int, default=8)

    p = sub.add_parser("cvd-check", parents=[common])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("convolve", parents=[common])
    p.add_argument("--func", action="append", default=[], dest="funcs",
                   help="trigonometric polynomial, e.g. trig:a0=2,a1=1")
    p.add_argument("--order", type=int, default=8)
    return parser


def parse(args) -> Command:
    """Parse and validate command-line arguments.

    Usage errors exit with status 2.
    """
    parser = _build_parser()
    ns = parser.parse_args(list(args))
    values = vars(ns)
    if ns.verb != "convolve" and not ns.kernel_specs:
        parser.error(f"{ns.verb} requires at least one --kernel")
    if ns.verb == "convolve" and not (ns.kernel_specs or ns.funcs):
        parser.error("convolve requires --kernel or --func operands")
    try:
        [parse_kernel(k) for k in ns.kernel_specs]
        [parse_psi(p) for p in values.get("psi_specs", [])]
        [parse_func(f) for f in values.get("funcs", [])]
    except (ValueError, ConvRecError) as exc:
        parser.error(str(exc))
    if ns.s < 1:
        parser.error("--s must be positive")
    if ns.grid < 16 or ns.grid & (ns.grid - 1):
        parser.error("--grid must be a power of two >= 16")
    if ns.threads < 1:
        parser.error("--threads must be positive")
    if values.get("trials", 1) < 1:
        parser.error("--trials must be positive")
    psis = values.get("psi_specs", [])
    if psis and ns.verb in ("recover", "certify") and len(psis) != len(ns.kernel_specs):
        parser.error("give one --psi per --kernel")
    widths = None
    if values.get("widths"):
        try:
            widths = [float(w) for w in ns.widths.split(",")]
        except ValueError:
            parser.error("--widths must be comma-separated numbers")
    return Command(
        verb=ns.verb, kernel_specs=list(ns.kernel_specs), s=ns.s, grid=ns.grid,
        psi_specs=list(psis), trials=values.get("trials", 100),
        seed=values.get("seed", 0), widths=widths, output=ns.output,
        format=ns.format, threads=ns.threads,
        perturb_alpha=values.get("perturb_alpha", 0.0),
        funcs=list(values.get("funcs", [])), order=values.get("order", 8),
        scan=values.get("scan", 8))


def _r(x: float) -> float:
    # + 0.0 folds negative zero
    return float(f"{x:.{DIGITS}g}") + 0.0


def _f(x: float) -> str:
    return f"{_r(x):.{DIGITS}g}"


def _rounded(obj):
    if isinstance(obj, float):
        return _r(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def to_json(payload: dict) -> str:
    return json.dumps(_rounded(payload), indent=2) + "\n"


def _report_text(rep: RecoveryReport) -> str:
    lines = [
        "kernels: " + " * ".join(rep.kernels),
        f"n = {rep.n}  s = {rep.s}  grid = {rep.grid}",
        f"information per factor = {2 * rep.s - 1}  total = {rep.n * (2 * rep.s - 1)}",
        f"sigma = {_f(rep.sigma)}",
        f"bound = {_f(rep.bound)}",
    ]
    for j in sorted(rep.alpha):
        if j >= 0:
            a = rep.alpha[j]
            sign = "-" if _r(a.imag) < 0 else "+"
            lines.append(f"alpha[{j}] = {_f(a.real)} {sign} {_f(abs(a.imag))}i")
    if rep.trials:
        lines.append(f"trials = {len(rep.trials)}")
        lines.append(f"max_ratio = {_f(rep.max_ratio)}")
        lines.append(f"violations = {rep.violations}")
        if len(rep.trials) == 1:
            t = rep.trials[0]
            lines.append(f"residual = {_f(t.residual)}")
            lines.append(f"ratio = {_f(t.ratio)}")
    return "\n".join(lines) + "\n"


def _report_csv(rep: RecoveryReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seed", "residual", "bound", "ratio"])
    for t in rep.trials:
        writer.writerow([t.seed, _f(t.residual), _f(rep.bound), _f(t.ratio)])
    return buf.getvalue()


def render_report(rep: RecoveryReport, fmt: str) -> str:
    if fmt == "json":
        return to_json(rep.to_dict())
    if fmt == "csv":
        return _report_csv(rep)
    return _report_text(rep)


def _render_rows(header, rows, fmt, meta):
    if fmt == "json":
        payload = dict(meta)
        payload["rows"] = [dict(zip(header, row)) for row in rows]
        return to_json(payload)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_f(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()
    lines = [f"{k}: {_f(v) if isinstance(v, float) else v}" for k, v in meta.items()]
    lines.append("  ".join(header))
    for row in rows:
        lines.append("  ".join(_f(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def execute(cmd: Command) -> int:
    """Run a parsed command; returns the exit status."""
    kernels = [parse_kernel(k) for k in cmd.kernel_specs]
    status = 0
    try:
        if cmd.verb in ("bound", "recover", "certify"):
            if cmd.verb == "bound":
                rep, _ = method_report(kernels, cmd.s, cmd.grid, cmd.perturb_alpha)
            elif cmd.verb == "recover":
                rep, mult = method_report(kernels, cmd.s, cmd.grid, cmd.perturb_alpha)
                specs = [parse_psi(p) for p in cmd.psi_specs] or [PsiSpec("constant")] * len(kernels)
                psis = [gen_psi(spec, cmd.grid) for spec in specs]
                residual, _, ratio = residual_error(psis, kernels, cmd.s, mult)
                rep.trials = [TrialResult(0, residual, ratio)]
                rep.max_ratio = ratio
                rep.violations = int(ratio > 1.0 + 1e-6)
            else:
                specs = [parse_psi(p) for p in cmd.psi_specs] or None
                rep = run_certification(kernels, cmd.s, cmd.trials, cmd.seed, cmd.grid,
                                        threads=cmd.threads,
                                        perturb_alpha=cmd.perturb_alpha, psi_specs=specs)
            text = render_report(rep, cmd.format)
            status = 1 if rep.violations else 0
        elif cmd.verb == "sharpness":
            widths = cmd.widths or [TWO_PI / 2 ** k for k in range(6, 11)]
            rows = sharpness_experiment(kernels, cmd.s, widths, cmd.grid, cmd.scan)
            rep, _ = method_report(kernels, cmd.s, cmd.grid)
            meta = {"kernels": rep.kernels, "n": rep.n, "s": rep.s, "grid": rep.grid,
                    "bound": rep.bound}
            text = _render_rows(["width", "ratio"], rows, cmd.format, meta)
        elif cmd.verb == "cvd-check":
            target = kernels[0] if len(kernels) == 1 else kernels
            res = cvd_check(target, cmd.trials, cmd.seed)
            meta = {"kernels": cmd.kernel_specs, "trials": res.trials}
            row = (res.passes, res.failures, res.degenerate)
            if cmd.format == "text":
                text = " * ".join(cmd.kernel_specs) + ": " + res.summary() + "\n"
            else:
                text = _render_rows(["passes", "failures", "degenerate"], [row],
                                    cmd.format, meta)
            status = 1 if res.flagged else 0
        else:
            grid_ops = [parse_func(f).sample(cmd.grid) for f in cmd.funcs]
            poly = convolve_spectral(ConvSpec(tuple(kernels) + tuple(grid_ops)), cmd.order)
            rows = [(0, poly.a0, 0.0)] + [(j, float(poly.a[j - 1]), float(poly.b[j - 1]))
                                        for j in range(1, poly.order + 1)]
            meta = {"operands": cmd.kernel_specs + cmd.funcs, "order": poly.order}
            text = _render_rows(["j", "a", "b"], rows, cmd.format, meta)
    except InconsistentInterpolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvRecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cmd.output:
        with open(cmd.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv=None) -> int:
    cmd = parse(sys.argv[1:] if argv is None else argv)
    return execute(cmd)


if __name__ == "__main__":
    sys.exit(main())
