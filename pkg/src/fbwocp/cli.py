"""``focp`` command line: solve, compare, sweep, tables, validate."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .analysis import DEFAULT_GRID, convergence_sweep, error_table, exact_problem1, write_sweep_csv
from .basis import BasisSpec
from .operational import IllConditionedGramError
from .quadrature import DEFAULT_ORDER
from .solver import (
    METHODS,
    FocpProblem,
    SingularKKTError,
    ToleranceError,
    dynamics_residual,
    evaluate_solution,
    solve_kkt,
)
from .validation import run_checks

log = logging.getLogger("fbwocp")

EXIT_OK, EXIT_PARSE, EXIT_SINGULAR, EXIT_TOLERANCE = 0, 2, 3, 4
BUNDLED = ("problem1", "problem2")
DEFAULT_MUS = (1.0, 0.99, 0.9, 0.8, 0.7, 0.6, 0.5)


class ProblemFileError(ValueError):
    pass


@dataclass
class RunConfig:
    problem_path: str
    method: str = "fbw"
    k: int = 2
    M: int = 3
    mu: list = field(default_factory=lambda: [1.0])
    quad_order: int = DEFAULT_ORDER
    output_dir: Path = Path(".")
    grid: tuple = DEFAULT_GRID
    M_max: int | None = None

    def spec(self, mu: float, M: int | None = None) -> BasisSpec:
        return BasisSpec(self.k, self.M if M is None else M, mu)


def _read_problem_text(path: str) -> tuple[str, str]:
    if path in BUNDLED:
        return path, resources.files("fbwocp").joinpath("problems", f"{path}.json").read_text("utf-8")
    p = Path(path)
    if not p.is_file():
        raise ProblemFileError(f"{path}: no such file (bundled problems: {', '.join(BUNDLED)})")
    return str(p), p.read_text("utf-8")


def _matrix(data, key, where):
    try:
        a = np.asarray(data[key], dtype=float)
    except KeyError:
        raise ProblemFileError(f"{where}: missing field '{key}'") from None
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"{where}: field '{key}' is not numeric ({exc})") from None
    return a


def parse_problem(path: str) -> FocpProblem:
    where, text = _read_problem_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ProblemFileError(f"{where}: top level must be an object")
    weights = data.get("weights")
    if not isinstance(weights, dict):
        raise ProblemFileError(f"{where}: field 'weights' must be an object with keys a, b, c")
    polys = {}
    for key in ("a", "b", "c"):
        polys[key] = _matrix(weights, key, f"{where}: weights")
        if polys[key].ndim != 1 or polys[key].size == 0:
            raise ProblemFileError(f"{where}: weights.{key} must be a nonempty coefficient list")
    arrays = {key: _matrix(data, key, where) for key in ("alpha", "beta", "gamma", "x0")}
    for key, shape in (("alpha", (2, 2)), ("beta", (2, 2)), ("gamma", (2,)), ("x0", (2,))):
        if arrays[key].shape != shape:
            raise ProblemFileError(f"{where}: field '{key}' must have shape {shape}, got {arrays[key].shape}")
    forcing = data.get("forcing", [[0.0], [0.0]])
    if not isinstance(forcing, list) or len(forcing) != 2:
        raise ProblemFileError(f"{where}: field 'forcing' must hold two coefficient lists")
    try:
        forcing = tuple(np.asarray(f, dtype=float).reshape(-1) for f in forcing)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"{where}: field 'forcing' is not numeric ({exc})") from None
    if abs(np.linalg.det(arrays["alpha"])) < 1e-12:
        raise ProblemFileError(f"{where}: field 'alpha' is singular")
    return FocpProblem(
        weight_a=polys["a"], weight_b=polys["b"], weight_c=polys["c"],
        alpha=arrays["alpha"], beta=arrays["beta"], gamma=arrays["gamma"],
        forcing=forcing, x0=arrays["x0"], name=str(data.get("name", Path(where).stem)),
    )


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _print_table(header, rows) -> None:
    cells = [list(header)] + [[c if isinstance(c, str) else f"{c:.6g}" for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        print("  ".join(c.rjust(wd) for c, wd in zip(r, widths)))


def cmd_solve(cfg: RunConfig) -> int:
    problem = parse_problem(cfg.problem_path)
    mu = cfg.mu[0]
    spec = cfg.spec(mu)
    sol = solve_kkt(problem, spec, method=cfg.method, quad_order=cfg.quad_order)
    grid = np.asarray(cfg.grid, dtype=float)
    x1, x2, u = evaluate_solution(sol, grid)
    dyn = dynamics_residual(sol, problem, grid)
    out = Path(cfg.output_dir)
    _write_csv(out / "solution.csv", ["zeta", "x1", "x2", "u"],
               [[_fmt(v) for v in row] for row in zip(grid, x1, x2, u)])
    _write_csv(out / "summary.csv", ["mu", "method", "k", "M", "J", "kkt_residual", "dynamics_residual"],
               [[_fmt(mu), cfg.method, spec.k, spec.M, _fmt(sol.cost), _fmt(sol.kkt_residual), _fmt(dyn)]])
    print(f"{problem.name} {cfg.method} {spec}: J = {sol.cost:.6g}, kkt residual {sol.kkt_residual:.2e}")
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    problem = parse_problem(cfg.problem_path)
    rows = []
    for mu in cfg.mu:
        costs = [solve_kkt(problem, cfg.spec(mu), method=m, quad_order=cfg.quad_order).cost for m in ("obw", "fbw")]
        rows.append((mu, *costs))
    _write_csv(Path(cfg.output_dir) / "compare.csv", ["mu", "J_obw", "J_fbw"],
               [[_fmt(v) for v in r] for r in rows])
    _print_table(["mu", "OBW", "FBW"], rows)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    problem = parse_problem(cfg.problem_path)
    top = cfg.M_max if cfg.M_max is not None else cfg.M + 3
    mu = cfg.mu[0]
    specs = [cfg.spec(mu, M) for M in range(cfg.M, top + 1)]
    exact = exact_problem1 if problem.name == "problem1" and mu == 1.0 else None
    rows = convergence_sweep(problem, specs, method=cfg.method, exact=exact,
                             grid=cfg.grid, quad_order=cfg.quad_order)
    write_sweep_csv(rows, Path(cfg.output_dir) / "sweep.csv")
    _print_table(["spec", "J", "max_err"],
                 [(str(r.spec), r.cost, "-" if r.max_err is None else r.max_err) for r in rows])
    return EXIT_OK


def cmd_tables(cfg: RunConfig) -> int:
    """Pointwise x1, x2, u for every (mu, method), one CSV per quantity."""
    problem = parse_problem(cfg.problem_path)
    grid = np.asarray(cfg.grid, dtype=float)
    columns, header = [], ["zeta"]
    for mu in cfg.mu:
        for m in ("obw", "fbw"):
            sol = solve_kkt(problem, cfg.spec(mu), method=m, quad_order=cfg.quad_order)
            columns.append(evaluate_solution(sol, grid))
            header.append(f"{m}_mu{mu:g}")
    out = Path(cfg.output_dir)
    for q, name in enumerate(("x1", "x2", "u")):
        rows = [[grid[i]] + [col[q][i] for col in columns] for i in range(len(grid))]
        _write_csv(out / f"table_{name}.csv", header, [[_fmt(v) for v in r] for r in rows])
        print(f"{name}:")
        _print_table(header, rows)
    if problem.name == "problem1" and 1.0 in cfg.mu:
        report = error_table(solve_kkt(problem, cfg.spec(1.0), method=cfg.method, quad_order=cfg.quad_order),
                             exact_problem1, grid)
        report.write_csv(out / "errors.csv")
        print("absolute errors at mu = 1:")
        _print_table(["zeta", "E_x1", "E_x2", "E_u"], list(report.rows()))
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    results = run_checks()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_TOLERANCE


COMMANDS = {
    "solve": cmd_solve,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "tables": cmd_tables,
    "validate": cmd_validate,
}


def _grid(text: str) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated numbers, got {text!r}") from None
    if not vals or any(not 0.0 <= v <= 1.0 for v in vals):
        raise argparse.ArgumentTypeError("grid points must lie in [0, 1]")
    return vals


def _mu(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"mu must be a number, got {text!r}") from None
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError(f"mu must lie in (0, 1], got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    env_q = os.environ.get("FOCP_QUAD_ORDER")
    try:
        default_q = int(env_q) if env_q else DEFAULT_ORDER
    except ValueError:
        default_q = DEFAULT_ORDER
        log.warning("ignoring non-integer FOCP_QUAD_ORDER=%r", env_q)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", nargs="?", default="problem1",
                        help="problem JSON file or a bundled name (problem1, problem2)")
    common.add_argument("--method", choices=METHODS, default="fbw")
    common.add_argument("--k", type=int, default=2)
    common.add_argument("--M", type=int, default=3)
    common.add_argument("--M-max", type=int, default=None, help="largest M for sweep")
    common.add_argument("--mu", type=_mu, action="append", help="fractional order; repeatable")
    common.add_argument("--quad-order", type=int, default=default_q)
    common.add_argument("--out", type=Path, default=Path("."))
    common.add_argument("--grid", type=_grid, default=DEFAULT_GRID)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="focp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=(fn.__doc__ or "").split("\n")[0] or None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    mus = args.mu or (list(DEFAULT_MUS) if args.command in ("compare", "tables") else [1.0])
    cfg = RunConfig(
        problem_path=args.problem, method=args.method, k=args.k, M=args.M, mu=mus,
        quad_order=args.quad_order, output_dir=args.out, grid=args.grid, M_max=args.M_max,
    )
    try:
        return COMMANDS[args.command](cfg)
    except ProblemFileError as exc:
        print(f"focp: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SingularKKTError, IllConditionedGramError) as exc:
        print(f"focp: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except ToleranceError as exc:
        print(f"focp: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ValueError as exc:
        print(f"focp: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
