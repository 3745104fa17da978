"""``pdmlab`` command-line interface.

Exit status: 0 on success, 1 for invalid input or configuration (one-line
diagnostic on stderr), 2 for numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .classical import integrate
from .eigen import eigendecompose
from .errors import NumericalError, PdmError, ValidationError
from .grid import Grid, trapezoid_inner, trapezoid_norm
from .ladder import build_ladder, commutator_test, factorization_test
from .operator import OrderingParams, build_von_roos, verify_pct_equivalence
from .output import format_value, write_csv, write_dat, write_json
from .pct import PctMap, q_range_bounded
from .potentials import PotentialField, cruz_corrected_potential, effective_potential, oscillator_field
from .profiles import BUILTINS, builtin, parse_profile
from .scan import default_a_values, ordering_scan

PROG = "pdmlab"


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, ordering: bool = True, grid_n: int = 2001):
    g = p.add_argument_group("profile and grid")
    g.add_argument("--config", help="JSON file with option values; command-line flags win")
    g.add_argument("--dump-config", action="store_true", help="print the resolved configuration as JSON and exit")
    g.add_argument("--profile", help=f"builtin mass profile ({', '.join(BUILTINS)})")
    g.add_argument("--profile-expr", help="mass profile expression in x, e.g. '1+lam*x^2'")
    g.add_argument("--param", action="append", default=None, metavar="NAME=VALUE", help="profile parameter (repeatable)")
    g.add_argument("--x-ref", type=float, default=0.0, help="anchor of the transformation, q(x_ref)=0")
    g.add_argument("--xmin", type=float, default=-10.0)
    g.add_argument("--xmax", type=float, default=10.0)
    g.add_argument("--n", type=int, default=grid_n, help="number of grid nodes, walls included")
    if ordering:
        o = p.add_argument_group("ordering")
        o.add_argument("--a", type=float, help="ordering exponent a (j = l = a)")
        o.add_argument("--b", type=float, help="ordering exponent b (k = 2b); defaults to -1/2 - a")
        o.add_argument("--preset", choices=["bdd", "zk", "mm"], help="named ordering")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Position-dependent-mass oscillator toolkit")
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("spectrum", help="lowest eigenvalues of the von Roos Hamiltonian")
    _common(p)
    p.add_argument("--potential", choices=["oscillator", "free"], default="oscillator")
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--out", help="CSV with columns n, E, residual")
    p.add_argument("--eigvec-out", help="eigenvector CSV path; state n goes to <stem>_<n><suffix>")

    p = sub.add_parser("scan", help="sweep a along b = -1/2 - a")
    _common(p, ordering=False)
    p.add_argument("--a-min", type=float, default=-0.75)
    p.add_argument("--a-max", type=float, default=0.25)
    p.add_argument("--a-steps", type=int, default=33)
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--out", help="CSV with columns a, b, deviation, c1, c2, E0...")
    p.add_argument("--dat-out", help="gnuplot file of a vs deviation (default: --out with .dat suffix)")

    p = sub.add_parser("classical", help="integrate classical PDM dynamics")
    _common(p, ordering=False)
    p.add_argument("--potential", choices=["oscillator", "free"], default="oscillator")
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--p0", type=float, default=0.0)
    p.add_argument("--tend", type=float, default=2 * math.pi)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--stride", type=int, default=1, help="record every STRIDE-th step")
    p.add_argument("--out", help="CSV with columns t, x, p, q, qdot, energy")

    p = sub.add_parser("potentials", help="oscillator, effective and corrected potentials")
    _common(p)
    p.add_argument("--out", help="CSV with columns x, q, V, V_eff, V_plus, V_minus")

    p = sub.add_parser("pct-table", help="tabulate the point canonical transformation")
    _common(p, ordering=False)
    p.add_argument("--out", help="CSV with columns x, sqrt_m, q")

    p = sub.add_parser("verify-ladder", help="commutator and factorisation checks")
    _common(p, grid_n=4001)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--out", help="JSON report")

    p = sub.add_parser("verify-pct", help="residual of the transformed Hamiltonian")
    _common(p, grid_n=1001)
    p.add_argument("--potential", choices=["oscillator", "free"], default="oscillator")
    p.add_argument("--no-veff", action="store_true", help="leave the effective potential out")
    p.add_argument("--refinements", type=int, default=2)
    p.add_argument("--out", help="JSON report")

    p = sub.add_parser("operator", help="assemble the Hamiltonian matrix")
    _common(p)
    p.add_argument("--potential", choices=["oscillator", "free"], default="oscillator")
    p.add_argument("--dump", nargs="?", const="-", help="write i, x, diag, offdiag as CSV (default stdout)")
    return parser


# option resolution ------------------------------------------------------


def _params(items) -> dict[str, float]:
    out = {}
    for item in items or []:
        name, sep, value = str(item).partition("=")
        if not sep or not name.strip():
            raise ValidationError(f"--param expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ValidationError(f"--param {name.strip()} is not a number: {value!r}") from None
    return out


def _profile(args):
    params = _params(args.param)
    if args.profile and args.profile_expr:
        raise ValidationError("use either --profile or --profile-expr, not both")
    if args.profile_expr:
        return parse_profile(args.profile_expr, params)
    return builtin(args.profile or "const", **params)


def _grid(args) -> Grid:
    return Grid(args.xmin, args.xmax, args.n)


def _ordering(args) -> OrderingParams:
    if args.preset:
        if args.a is not None or args.b is not None:
            raise ValidationError("--preset cannot be combined with --a/--b")
        return OrderingParams.preset(args.preset)
    a, b = args.a, args.b
    if a is None and b is None:
        return OrderingParams.preset("mm")
    if a is None:
        a = -0.5 - b
    return OrderingParams.from_ab(a, b)


def _ab_unconstrained(args) -> tuple[float, float]:
    if args.preset:
        return OrderingParams.preset(args.preset).ab
    a = -0.25 if args.a is None else args.a
    b = -0.5 - a if args.b is None else args.b
    return a, b


def _require_out(args, name: str = "out"):
    if not getattr(args, name):
        raise ValidationError(f"--{name.replace('_', '-')} is required")
    return getattr(args, name)


def _pmap(profile, args) -> PctMap:
    return PctMap(profile, x_ref=args.x_ref, x_range=(args.xmin, args.xmax))


def _field(kind: str, pmap: PctMap, grid: Grid) -> Optional[PotentialField]:
    return oscillator_field(pmap, grid) if kind == "oscillator" else None


# commands -----------------------------------------------------------------


def cmd_spectrum(args):
    out = _require_out(args)
    ordering = _ordering(args)
    profile = _profile(args)
    grid = _grid(args)
    if not 1 <= args.levels <= grid.n - 2:
        raise ValidationError(f"--levels must be between 1 and {grid.n - 2}")
    pmap = _pmap(profile, args)
    H = build_von_roos(profile, ordering, grid, _field(args.potential, pmap, grid))
    spec = eigendecompose(H, args.levels)
    write_csv(out, ("n", "E", "residual"), (range(len(spec)), spec.eigenvalues, spec.residuals))
    if args.eigvec_out:
        base = Path(args.eigvec_out)
        for i in range(len(spec)):
            path = base.with_name(f"{base.stem}_{i}{base.suffix or '.csv'}")
            write_csv(path, ("x", "psi"), (grid.points, spec.eigenvectors[i]))


def cmd_scan(args):
    out = _require_out(args)
    profile = _profile(args)
    grid = _grid(args)
    a_values = default_a_values(args.a_min, args.a_max, args.a_steps)
    result = ordering_scan(profile, grid, a_values, args.levels, pmap=_pmap(profile, args))
    header = ["a", "b", "deviation", "c1", "c2"] + [f"E{i}" for i in range(args.levels)]
    rows = result.rows
    cols = [[r.a for r in rows], [r.b for r in rows], [r.deviation for r in rows], [r.c1 for r in rows], [r.c2 for r in rows]]
    cols += [[r.energies[i] for r in rows] for i in range(args.levels)]
    write_csv(out, header, cols)
    dat = args.dat_out or str(Path(out).with_suffix(".dat"))
    write_dat(dat, result.a, result.deviation, comment=f"a deviation  profile={profile.name}")


def cmd_classical(args):
    out = _require_out(args)
    profile = _profile(args)
    traj = integrate(profile, args.potential, args.x0, args.p0, args.tend, args.dt, _pmap(profile, args), stride=args.stride)
    names, cols = traj.columns()
    write_csv(out, names, cols)


def cmd_potentials(args):
    out = _require_out(args)
    a, b = _ab_unconstrained(args)
    profile = _profile(args)
    grid = _grid(args)
    pmap = _pmap(profile, args)
    x = grid.points
    q = pmap.forward(x)
    V = 0.5 * q * q
    cols = (
        x,
        q,
        V,
        effective_potential(profile, a, b, V, x),
        cruz_corrected_potential(profile, pmap, a, +1, x),
        cruz_corrected_potential(profile, pmap, a, -1, x),
    )
    write_csv(out, ("x", "q", "V", "V_eff", "V_plus", "V_minus"), cols)


def cmd_pct_table(args):
    out = _require_out(args)
    profile = _profile(args)
    grid = _grid(args)
    pmap = _pmap(profile, args)
    x = grid.points
    write_csv(out, ("x", "sqrt_m", "q"), (x, pmap.sqrt_mass(x), pmap.forward(x)))


def cmd_verify_ladder(args):
    out = _require_out(args)
    ordering = _ordering(args)
    a, b = ordering.ab
    profile = _profile(args)
    grid = _grid(args)
    pmap = _pmap(profile, args)
    H = build_von_roos(profile, ordering, grid, oscillator_field(pmap, grid))
    spec = eigendecompose(H, max(args.levels, 2))
    pair = build_ladder(profile, grid, a, pmap)
    x = grid.points
    probe = np.asarray(profile(x), dtype=float) ** 0.25 * np.exp(-0.5 * pmap.forward(x) ** 2)
    fact = factorization_test(pair, H, spec, range(args.levels))
    raised = pair.raising(spec.state(0))
    report = {
        "profile": profile.name,
        "a": a,
        "b": b,
        "grid": {"x_min": grid.x_min, "x_max": grid.x_max, "n": grid.n},
        "commutator_deviation": commutator_test(pair, [probe]),
        "annihilation_norm": trapezoid_norm(pair.lowering(spec.state(0)), grid),
        "raising_overlap": abs(trapezoid_inner(spec.state(1), raised, grid)) / trapezoid_norm(raised, grid),
        "factorization": fact.to_dict(),
        "q_range_bounded": q_range_bounded(profile),
    }
    write_json(out, report)


def cmd_verify_pct(args):
    out = _require_out(args)
    ordering = _ordering(args)
    profile = _profile(args)
    grid = _grid(args)
    V = "oscillator" if args.potential == "oscillator" else None
    rep = verify_pct_equivalence(
        profile, ordering, grid, V, pmap=_pmap(profile, args), include_veff=not args.no_veff, refinements=args.refinements
    )
    report = rep.to_dict()
    report.update(profile=profile.name, potential=args.potential, residual_at_x_ref=rep.residual_at(args.x_ref))
    write_json(out, report)


def cmd_operator(args):
    ordering = _ordering(args)
    profile = _profile(args)
    grid = _grid(args)
    pmap = _pmap(profile, args)
    H = build_von_roos(profile, ordering, grid, _field(args.potential, pmap, grid))
    if args.dump is None:
        print(f"{H.size}x{H.size} tridiagonal operator; ordering (j,k,l)={H.metadata['ordering']}")
        return
    off = np.append(H.offdiag, 0.0)
    cols = (range(1, grid.n - 1), grid.interior, H.diag, off)
    header = ("i", "x", "diag", "offdiag")
    if args.dump == "-":
        print(",".join(header))
        for row in zip(*cols):
            print(",".join(format_value(v) for v in row))
    else:
        write_csv(args.dump, header, cols)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "scan": cmd_scan,
    "classical": cmd_classical,
    "potentials": cmd_potentials,
    "pct-table": cmd_pct_table,
    "verify-ladder": cmd_verify_ladder,
    "verify-pct": cmd_verify_pct,
    "operator": cmd_operator,
}

_INTERNAL = {"config", "dump_config"}


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {args.config} is not valid JSON: {exc.msg}") from None
        if not isinstance(config, dict):
            raise ValidationError("config file must hold a JSON object")
        command = config.pop("command", args.command)
        if command != args.command:
            raise ValidationError(f"config is for {command!r}, not {args.command!r}")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(config) - known)
        if unknown:
            raise ValidationError(f"unknown config key {unknown[0]!r}")
        sub.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if not argv:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        args = parse_args(argv)
        if args.dump_config:
            cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _INTERNAL}
            print(json.dumps(cfg, indent=2, sort_keys=True))
            return 0
        COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"{PROG}: numerical failure: {_one_line(exc)}", file=sys.stderr)
        return 2
    except (PdmError, ValueError) as exc:
        print(f"{PROG}: error: {_one_line(exc)}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{PROG}: error: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
        return 1
    return 0


def _one_line(exc: Exception) -> str:
    return " ".join(str(exc).split())


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
