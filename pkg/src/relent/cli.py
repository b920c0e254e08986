"""Command-line interface.

Usage::

    relent compute  --family w --f2 0.1666666667 --pair AB --method constrained
    relent compute  --input state.json --method mixture
    relent theorem1
    relent mregs    --family w --f2 0.3333333333
    relent mregs    --family w --sweep 0.05:0.5:0.05 --format csv
    relent additivity --family w --f2 0.1666666667
    relent bound    --rho1 a.json --rho2 b.json
    relent state    --family lambda --a2 0.5

Exit status: 0 on success, 1 on bad input, 2 when an optimizer did not
converge.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from . import published
from .analysis import (
    ContinuityInput,
    additivity_check,
    continuity_bound,
    continuity_bound_between,
    lambda_audit,
    mregs_balance,
    necessary_residual,
)
from .entropy import necnew_rhs, relative_entropy
from .qlinalg import DensityMatrix, ValidationError, load_density_matrix, trace_norm
from .reeopt import OptimizerConfig, ree_constrained, ree_mixture, solve_stationarity
from .states import PAIRS, StateFamilyParams, family_state, reduced, w_reduced
from .symmetry import ConstrainedSigmaParams, constrained_sigma, is_invariant, w_ab_symmetry_group

EXIT_OK, EXIT_INPUT, EXIT_UNCONVERGED = 0, 1, 2

log = logging.getLogger("relent")


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# argument helpers


def parse_sweep(text: str) -> list[float]:
    try:
        start, stop, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise InputError(f"--sweep expects start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise InputError("--sweep needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def family_params(args, family: str) -> StateFamilyParams | None:
    if family == "w":
        if args.f2 is None and args.e2 is None:
            raise InputError("family w needs --f2 or --e2")
        return StateFamilyParams.w(f2=args.f2, e2=args.e2)
    if family == "lambda":
        if args.a2 is None:
            raise InputError("family lambda needs --a2")
        return StateFamilyParams.lambda_(a2=args.a2)
    return None


def target_state(args) -> tuple[DensityMatrix, str]:
    """Resolve ``--input`` or ``--family/--pair`` into a bipartite state."""
    if (args.input is None) == (args.family is None):
        raise InputError("give exactly one of --input or --family")
    if args.input is not None:
        return load_density_matrix(args.input), f"file:{args.input}"
    family = args.family.lower()
    psi = family_state(family, family_params(args, family))
    if len(psi.dims) == 2:
        return psi.density_matrix(), family
    pair = (args.pair or "AB").upper()
    if pair not in PAIRS:
        raise InputError(f"--pair must be one of {sorted(PAIRS)}")
    return reduced(psi, pair), f"{family}:{pair}"


def optimizer_config(args) -> OptimizerConfig:
    base = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            base = json.load(fh)
    for key in ("seed", "restarts", "mixture_size", "max_iter", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    return OptimizerConfig.from_dict(base)


# --------------------------------------------------------------------------
# output


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def render(report, fmt: str) -> str:
    """Render a report (dict, or list of row dicts for sweeps)."""
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    rows = report if isinstance(report, list) else report.get("rows")
    if rows is None:
        rows = [{k: v for k, v in report.items() if k != "closest_state"}]
        if fmt == "table":
            flat = _flatten(rows[0])
            width = max(len(k) for k in flat)
            return "\n".join(f"{k:<{width}}  {_fmt(v)}" for k, v in flat.items())
    flat_rows = [_flatten(r) for r in rows]
    columns = list(dict.fromkeys(k for r in flat_rows for k in r))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for r in flat_rows:
            writer.writerow({k: _fmt(v) for k, v in r.items()})
        text = buf.getvalue().rstrip("\n")
    else:
        cells = [[_fmt(r.get(c, "")) for c in columns] for r in flat_rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
        text = "\n".join(lines)
    if isinstance(report, dict):
        extras = {k: v for k, v in report.items() if k != "rows"}
        if extras and fmt == "table":
            text += "\n\n" + "\n".join(f"{k}: {_fmt(v)}" for k, v in extras.items())
    return text


def emit(report, args) -> None:
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --------------------------------------------------------------------------
# subcommands


def _solve(rho: DensityMatrix, method: str, config: OptimizerConfig):
    if method == "constrained":
        return ree_constrained(rho)
    return ree_mixture(rho, config)


def cmd_compute(args) -> int:
    rho, label = target_state(args)
    config = optimizer_config(args)
    result = _solve(rho, args.method, config)
    report = result.to_dict()
    report["target"] = label
    report["tolerance"] = {"gradient": config.grad_tol, "value_stall": config.value_tol}
    emit(report, args)
    return EXIT_OK if result.converged else EXIT_UNCONVERGED


def theorem1_report(config: OptimizerConfig) -> dict:
    f2 = published.F2
    params = ConstrainedSigmaParams(*published.SIGMA_XYZ)
    sol = solve_stationarity(params)
    rho_a = sol.state
    rho_ab = w_reduced(StateFamilyParams.w(f2=f2), "AB")
    analytic = relative_entropy(rho_a, constrained_sigma(params))
    constrained = ree_constrained(rho_ab)
    mixture = ree_mixture(rho_ab, config)
    recon = float(np.max(np.abs(rho_a.data - (rho_ab.data + published.PERTURBATION))))
    delta = trace_norm(rho_a.data - rho_ab.data)
    delta_printed = trace_norm(published.PERTURBATION)
    bound = continuity_bound(ContinuityInput(delta, 4))
    prediction = necnew_rhs(f2)
    residual = necessary_residual(f2, constrained.value)
    violated = residual > bound + 1e-5
    p = constrained.params
    rows = [
        {"quantity": "E_S(rho_a) at fixed sigma", "value": analytic, "method": "analytic", "tolerance": 1e-9},
        {"quantity": "E_S(rho_AB(2/3,1/6))", "value": constrained.value, "method": "constrained", "tolerance": 1e-5},
        {"quantity": "E_S(rho_AB(2/3,1/6))", "value": mixture.value, "method": "mixture", "tolerance": 1e-4},
        {"quantity": "sigma x", "value": p["x"], "method": "constrained", "tolerance": 1e-5},
        {"quantity": "sigma y", "value": p["y"], "method": "constrained", "tolerance": 1e-5},
        {"quantity": "sigma z", "value": p["z"], "method": "constrained", "tolerance": 1e-5},
        {"quantity": "rho_a reconstruction residual", "value": recon, "method": "stationarity-inverse", "tolerance": 1e-12},
        {"quantity": "trace distance (solved rho_a)", "value": delta, "method": "trace-norm", "tolerance": 1e-12},
        {"quantity": "trace distance (printed perturbation)", "value": delta_printed, "method": "trace-norm", "tolerance": 1e-12},
        {"quantity": "continuity bound", "value": bound, "method": "closed-form", "tolerance": 3e-9},
        {"quantity": "balance prediction", "value": prediction, "method": "closed-form", "tolerance": 5e-5},
        {"quantity": "balance residual", "value": residual, "method": "constrained-minus-closed-form", "tolerance": 1e-5},
    ]
    return {
        "rows": rows,
        "verdict": "balance condition violated" if violated else "balance condition not violated",
        "converged": bool(constrained.converged and mixture.converged),
        "note": "a violation means E_S must be asymptotically subadditive for GHZ and EPR states "
                "to generate the W family reversibly",
    }


def cmd_theorem1(args) -> int:
    report = theorem1_report(optimizer_config(args))
    emit(report, args)
    return EXIT_OK if report["converged"] else EXIT_UNCONVERGED


def _pair_values(psi, method: str, config: OptimizerConfig) -> tuple[dict, bool]:
    group = w_ab_symmetry_group()
    values, converged = {}, True
    for pair in ("AB", "AC", "BC"):
        rho = reduced(psi, pair)
        use = method
        if use == "constrained" and not is_invariant(rho, group):
            use = "mixture"
        res = _solve(rho, use, config)
        converged &= res.converged
        values[pair] = (res.value, use)
    return values, converged


def cmd_mregs(args) -> int:
    if args.family is None:
        raise InputError("mregs needs --family")
    family = args.family.lower()
    config = optimizer_config(args)
    if args.sweep:
        key = {"w": "f2", "lambda": "a2"}.get(family)
        if key is None:
            raise InputError("sweeps are defined for the w and lambda families")
        rows, converged = [], True
        for val in parse_sweep(args.sweep):
            setattr(args, key, val)
            if key == "f2":
                args.e2 = None
            psi = family_state(family, family_params(args, family))
            values, ok = _pair_values(psi, args.method, config)
            converged &= ok
            rep = mregs_balance(psi, values, tol=args.tol)
            row = {key: val}
            row.update({k: v for k, v in rep.to_dict().items() if k not in ("note", "pure_cut_checks")})
            rows.append(row)
        emit({"rows": rows, "note": rep.note}, args)
        return EXIT_OK if converged else EXIT_UNCONVERGED
    psi = family_state(family, family_params(args, family))
    values, converged = _pair_values(psi, args.method, config)
    emit(mregs_balance(psi, values, tol=args.tol).to_dict(), args)
    return EXIT_OK if converged else EXIT_UNCONVERGED


def cmd_additivity(args) -> int:
    rho, label = target_state(args)
    if len(rho.dims) != 2:
        raise InputError("additivity needs a bipartite state")
    report = additivity_check(rho, 2, optimizer_config(args), tol=args.tol)
    out = report.to_dict()
    out["target"] = label
    out["within_tolerance"] = abs(report.gap) <= args.tol
    emit(out, args)
    return EXIT_OK if report.converged else EXIT_UNCONVERGED


def cmd_lambda(args) -> int:
    config = optimizer_config(args)
    values = parse_sweep(args.sweep) if args.sweep else [args.a2]
    if values == [None]:
        raise InputError("lambda needs --a2 or --sweep")
    rows = [lambda_audit(a2, config).to_dict() for a2 in values]
    emit(rows if len(rows) > 1 or args.format != "json" else rows[0], args)
    return EXIT_OK if all(r["converged"] for r in rows) else EXIT_UNCONVERGED


def cmd_bound(args) -> int:
    if args.rho1 and args.rho2:
        rho1, rho2 = load_density_matrix(args.rho1), load_density_matrix(args.rho2)
        delta, bound = continuity_bound_between(rho1, rho2)
        dim = rho1.dim
    elif args.delta is not None and args.dim is not None:
        delta, dim = args.delta, args.dim
        bound = continuity_bound(ContinuityInput(delta, dim))
    else:
        raise InputError("bound needs --rho1 and --rho2, or --delta and --dim")
    emit({"delta": delta, "dim": dim, "bound_bits": bound, "method": "closed-form", "log_base": 2}, args)
    return EXIT_OK


def cmd_state(args) -> int:
    if args.family is None:
        raise InputError("state needs --family")
    family = args.family.lower()
    psi = family_state(family, family_params(args, family))
    report = {"family": family, "dims": list(psi.dims),
              "amplitudes": [float(a.real) for a in psi.amplitudes]}
    if len(psi.dims) == 3:
        pairs = [args.pair.upper()] if args.pair else ["AB", "AC", "BC"]
        for pair in pairs:
            report[pair] = reduced(psi, pair).to_dict()
    if args.format == "table":
        lines = [f"family: {family}", "amplitudes: " + " ".join(f"{a:.10g}" for a in report["amplitudes"])]
        for pair in ("AB", "AC", "BC"):
            if pair in report:
                lines.append(f"rho_{pair}:")
                lines += ["  " + " ".join(f"{v:12.9f}" for v in row) for row in report[pair]["re"]]
        text = "\n".join(lines)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return EXIT_OK
    emit(report, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--config", help="optimizer settings as a JSON file")
    common.add_argument("--seed", type=int)
    common.add_argument("--restarts", type=int)
    common.add_argument("--mixture-size", dest="mixture_size", type=int)
    common.add_argument("--max-iter", dest="max_iter", type=int)
    common.add_argument("--workers", type=int)

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", choices=("w", "lambda", "ghz", "epr"), type=str.lower)
    fam.add_argument("--e2", type=float)
    fam.add_argument("--f2", type=float)
    fam.add_argument("--a2", type=float)
    fam.add_argument("--pair", type=str.upper, choices=sorted(PAIRS))

    parser = argparse.ArgumentParser(prog="relent", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common, fam], help="relative entropy of entanglement of one state")
    p.add_argument("--input", help="density matrix JSON file")
    p.add_argument("--method", choices=("constrained", "mixture"), default="mixture")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("theorem1", parents=[common], help="W-family e^2=2/3, f^2=1/6 reproduction table")
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("mregs", parents=[common, fam], help="GHZ/EPR balance audit")
    p.add_argument("--method", choices=("constrained", "mixture"), default="mixture")
    p.add_argument("--sweep", help="start:stop:step over f2 (w) or a2 (lambda)")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_mregs)

    p = sub.add_parser("additivity", parents=[common, fam], help="two-copy additivity probe")
    p.add_argument("--input", help="density matrix JSON file")
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(func=cmd_additivity)

    p = sub.add_parser("lambda", parents=[common], help="Lambda-family prediction vs optimizer bound")
    p.add_argument("--a2", type=float)
    p.add_argument("--sweep", help="start:stop:step over a2")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("bound", parents=[common], help="continuity bound between two states")
    p.add_argument("--rho1")
    p.add_argument("--rho2")
    p.add_argument("--delta", type=float)
    p.add_argument("--dim", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("state", parents=[common, fam], help="print a family state and its reductions")
    p.set_defaults(func=cmd_state)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for non-convergence here
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, ValidationError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"relent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
