"""Command-line entry point.

Subcommands: solve, convergence, oracle-compare, properties, norms, report.
Configuration comes from flags, optionally layered over a flat ``key=value``
config file (flags win).  All floating output uses 17 significant digits so
CSVs round-trip doubles exactly.

Exit codes: 0 success, 1 validation error, 2 property violation.
"""

import argparse
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from .chernoff import (
    ConvergenceTrace,
    DyadicSchedule,
    SolverConfig,
    iterate,
    one_step,
    parse_dyadic,
    solve,
)
from .dominating import DominatingParams, domination_check, t_op
from .grid import GridFunction, GridSpec, discrete_gradient_sup, sup_norm, write_csv
from .hamiltonian import Hamiltonian
from .kernel import heat_step
from .oracle import exact_solution
from .orlicz import YoungFunction, luxemburg_norm, norm_equivalence_check
from .regularity import PropertyViolation, apriori_bound_report

__all__ = ["main", "parse_config", "RunConfig"]

_COMMANDS = ("solve", "convergence", "oracle-compare", "properties", "norms", "report")

_DEFAULTS = {
    "half_width": 10.0,
    "points": 2048,
    "truncation": 8.0,
    "cauchy_tol": 1e-4,
    "H": "quadratic:1",
    "f": "log-bump",
    "t": "1/2",
    "n": 6,
    "R": 1.0,
    "out": None,
    "seed": 0,
}


@dataclass
class RunConfig:
    command: str
    half_width: float
    points: int
    truncation: float
    cauchy_tol: float
    H: str
    f: str
    t: str
    n: int
    R: float
    out: str | None
    seed: int


def _read_config_file(path: str) -> dict:
    """Flat key=value text; blank lines and #-comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def parse_config(argv) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="hjflow",
        description="Chernoff-iteration solver for the viscous Hamilton-Jacobi equation",
    )
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--half-width", dest="half_width", type=float)
    parser.add_argument("--points", type=int, help="grid intervals per axis (power of two)")
    parser.add_argument("--truncation", type=float, help="kernel window in sqrt(t) multiples")
    parser.add_argument("--cauchy-tol", dest="cauchy_tol", type=float)
    parser.add_argument("--H", help="quadratic:c | power:a,q | zero | sampled:path")
    parser.add_argument(
        "--f", help="gaussian-bump:sigma | log-bump | hat:w | indicator:a,b | file:path"
    )
    parser.add_argument("--t", help='dyadic time "k/2^n"')
    parser.add_argument("--n", type=int, help="finest dyadic level")
    parser.add_argument("--R", type=float, help="Orlicz norm parameter R >= 1")
    parser.add_argument("--out", help="output path (CSV or report)")
    parser.add_argument("--seed", type=int, help="seed for the properties command")
    args = parser.parse_args(argv)

    merged = dict(_DEFAULTS)
    known = set(_DEFAULTS)
    if args.config:
        file_conf = _read_config_file(args.config)
        unknown = set(file_conf) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        casts = {
            "half_width": float, "points": int, "truncation": float,
            "cauchy_tol": float, "n": int, "R": float, "seed": int,
        }
        for key, value in file_conf.items():
            merged[key] = casts.get(key, str)(value)
    for f in fields(RunConfig):
        if f.name == "command":
            continue
        flag_value = getattr(args, f.name, None)
        if flag_value is not None:
            merged[f.name] = flag_value
    config = RunConfig(command=args.command, **merged)
    parse_dyadic(config.t)  # validate early; raises with the dyadic message
    if config.n < 0:
        raise ValueError("level must be nonnegative")
    if config.R < 1:
        raise ValueError("R must be at least 1")
    return config


def _build_hamiltonian(spec: str) -> Hamiltonian:
    kind, _, rest = spec.partition(":")
    if kind == "zero":
        return Hamiltonian.zero()
    if kind == "quadratic":
        return Hamiltonian.quadratic(float(rest or 1.0))
    if kind == "power":
        a, q = (float(x) for x in rest.split(","))
        return Hamiltonian.power(a, q)
    if kind == "sampled":
        if not rest:
            raise ValueError("sampled Hamiltonian needs a CSV path: sampled:path")
        return Hamiltonian.from_csv(rest)
    raise ValueError(f"unknown Hamiltonian spec {spec!r}")


def _build_initial(spec: str, grid: GridSpec) -> GridFunction:
    kind, _, rest = spec.partition(":")
    if kind == "gaussian-bump":
        sigma = float(rest or 1.0)
        if sigma <= 0:
            raise ValueError("gaussian-bump width must be positive")
        return GridFunction.from_callable(grid, lambda x: np.exp(-(x**2) / (2.0 * sigma**2)))
    if kind == "log-bump":
        return GridFunction.from_callable(grid, lambda x: np.log1p(np.exp(-(x**2) / 2.0)))
    if kind == "hat":
        w = float(rest or 1.0)
        if w <= 0:
            raise ValueError("hat width must be positive")
        return GridFunction.from_callable(grid, lambda x: np.maximum(1.0 - np.abs(x) / w, 0.0))
    if kind == "indicator":
        a, b = (float(x) for x in rest.split(","))
        if b <= a:
            raise ValueError("indicator needs a < b")
        return GridFunction.from_callable(
            grid, lambda x: ((x >= a) & (x <= b)).astype(np.float64)
        )
    if kind == "file":
        if not rest:
            raise ValueError("file preset needs a path: file:path")
        from .grid import read_csv

        return read_csv(rest, grid)
    raise ValueError(f"unknown initial-data preset {spec!r}")


def _solver_config(rc: RunConfig, ham: Hamiltonian) -> SolverConfig:
    schedule = DyadicSchedule.up_to(rc.t, rc.n)
    return SolverConfig(
        hamiltonian=ham,
        schedule=schedule,
        truncation_multiple=rc.truncation,
        cauchy_tol=rc.cauchy_tol,
    )


def _out_path(rc: RunConfig, default: str) -> str:
    return rc.out if rc.out else default


def _cmd_solve(rc: RunConfig) -> int:
    grid = GridSpec(1, rc.half_width, rc.points)
    ham = _build_hamiltonian(rc.H)
    f = _build_initial(rc.f, grid)
    config = _solver_config(rc, ham)
    result, trace = solve(f, config)
    write_csv(result, _out_path(rc, "solution.csv"))
    if len(trace.rows) > 1 and not trace.cauchy:
        print("warning: Cauchy tolerance not reached at the finest level", file=sys.stderr)
    return 0


def _cmd_convergence(rc: RunConfig, with_oracle: bool = False) -> int:
    grid = GridSpec(1, rc.half_width, rc.points)
    ham = _build_hamiltonian(rc.H)
    if with_oracle and not (
        ham.kind == "quadratic" and abs(ham.params["c"] - 1.0) <= 1e-12
    ):
        raise ValueError("oracle-compare requires --H quadratic:1")
    f = _build_initial(rc.f, grid)
    config = _solver_config(rc, ham)
    oracle = exact_solution(f, float(parse_dyadic(rc.t)), rc.truncation) if with_oracle else None
    _, trace = solve(f, config, oracle=oracle)
    trace.write_csv(_out_path(rc, "trace.csv"))
    return 0


def _cmd_properties(rc: RunConfig) -> int:
    """Contraction, monotonicity, convexity and domination on random bumps."""
    grid = GridSpec(1, rc.half_width, rc.points)
    ham = _build_hamiltonian(rc.H)
    config = _solver_config(rc, ham)
    table = config.ensure_table()
    t = float(parse_dyadic(rc.t))
    if t <= 0:
        raise ValueError("properties command needs t > 0")
    rng = np.random.default_rng(rc.seed)
    x = grid.axis()
    checks = 0
    for _ in range(10):
        c1, c2 = rng.uniform(-3, 3, size=2)
        w1, w2 = rng.uniform(0.5, 2.0, size=2)
        a1, a2 = rng.uniform(-1, 1, size=2)
        f = GridFunction(grid, a1 * np.exp(-((x - c1) ** 2) / w1**2))
        g = GridFunction(grid, a2 * np.exp(-((x - c2) ** 2) / w2**2))
        sf = one_step(f, t, ham, table, None, rc.truncation)
        sg = one_step(g, t, ham, table, None, rc.truncation)
        contraction = sup_norm(sf.with_values(sf.values - sg.values)) - sup_norm(
            f.with_values(f.values - g.values)
        )
        if contraction > 1e-12:
            raise PropertyViolation(f"sup-norm contraction violated by {contraction}")
        upper = GridFunction(grid, np.maximum(f.values, g.values))
        s_upper = one_step(upper, t, ham, table, None, rc.truncation)
        mono = max(
            float(np.max(sf.values - s_upper.values)),
            float(np.max(sg.values - s_upper.values)),
        )
        if mono > 1e-12:
            raise PropertyViolation(f"monotonicity violated by {mono}")
        mix = GridFunction(grid, 0.5 * (f.values + g.values))
        s_mix = one_step(mix, t, ham, table, None, rc.truncation)
        convexity = float(np.max(s_mix.values - 0.5 * (sf.values + sg.values)))
        if convexity > 1e-12:
            raise PropertyViolation(f"convexity violated by {convexity}")
        params = DominatingParams.for_growth_constant(ham.growth_constant)
        dom = domination_check(f, rc.t, config, params, level=min(rc.n, 4))
        if max(dom.one_step_violation, dom.iterate_violation) > 1e-6:
            raise PropertyViolation(f"domination violated by {dom}")
        grad_growth = discrete_gradient_sup(sf) - discrete_gradient_sup(f)
        if grad_growth > 10.0 * grid.spacing:
            raise PropertyViolation(f"gradient sup grew by {grad_growth}")
        checks += 1
    print(f"properties: {checks} random instances, all inequalities hold")
    return 0


def _cmd_norms(rc: RunConfig) -> int:
    grid = GridSpec(1, rc.half_width, rc.points)
    ham = _build_hamiltonian(rc.H)
    f = _build_initial(rc.f, grid)
    young = YoungFunction.for_growth_constant(ham.growth_constant)
    norm_r = luxemburg_norm(f, young, rc.R)
    norm_1 = luxemburg_norm(f, young, 1.0)
    lhs_ok, rhs_ok = norm_equivalence_check(f, young, rc.R)
    lines = [
        f"b={young.b:.17g}",
        f"R={rc.R:.17g}",
        f"norm_phi_R={norm_r:.17g}",
        f"norm_phi_1={norm_1:.17g}",
        f"equivalence_lower_ok={int(lhs_ok)}",
        f"equivalence_upper_ok={int(rhs_ok)}",
    ]
    text = "\n".join(lines) + "\n"
    if rc.out:
        with open(rc.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not (lhs_ok and rhs_ok):
        raise PropertyViolation("Luxemburg norm equivalence failed")
    return 0


def _cmd_report(rc: RunConfig) -> int:
    grid = GridSpec(1, rc.half_width, rc.points)
    ham = _build_hamiltonian(rc.H)
    f = _build_initial(rc.f, grid)
    config = _solver_config(rc, ham)
    t = parse_dyadic(rc.t)
    if t <= 0:
        raise ValueError("report command needs t > 0")
    horizon = [t * k / 4 for k in range(1, 5)]
    report = apriori_bound_report(f, config, horizon)
    report.write(_out_path(rc, "report.txt"))
    return 0


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    threads = os.environ.get("CHJ_THREADS")
    if threads is not None:
        try:
            if int(threads) < 0:
                raise ValueError
        except ValueError:
            print(f"error: CHJ_THREADS must be a nonnegative integer, got {threads!r}",
                  file=sys.stderr)
            return 1
        # computation is deterministic regardless of the worker cap; the cap
        # only bounds library-level parallelism
        if int(threads) > 0:
            os.environ.setdefault("OMP_NUM_THREADS", threads)
    try:
        rc = parse_config(argv)
    except SystemExit as exc:  # argparse errors
        return 1 if exc.code not in (0, None) else 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if rc.command == "solve":
            return _cmd_solve(rc)
        if rc.command == "convergence":
            return _cmd_convergence(rc)
        if rc.command == "oracle-compare":
            return _cmd_convergence(rc, with_oracle=True)
        if rc.command == "properties":
            return _cmd_properties(rc)
        if rc.command == "norms":
            return _cmd_norms(rc)
        if rc.command == "report":
            return _cmd_report(rc)
        raise ValueError(f"unknown command {rc.command!r}")
    except PropertyViolation as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
