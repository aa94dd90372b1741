"""Command-line front end: analytic visibility, fringes, sweeps, Monte Carlo,
and fiber-length design, with CSV output suitable for plotting elsewhere.

Exit codes: 0 success, 2 usage/parse errors, 3 physics or configuration
contract violations, 4 infeasible design problems, 5 statistics failures.
All numeric output uses 9 significant digits in scientific notation, and
identical inputs (config plus seed) produce byte-identical output.
"""

import argparse
import sys

import numpy as np

from . import montecarlo
from .designer import DesignProblem, solve_lengths
from .dispersion import BUILTIN_FIBERS, load_fiber_catalog
from .errors import (
    ConfigParseError,
    ContractViolationError,
    DataError,
    DomainError,
    ConfigurationError,
    FransonError,
    InfeasibleDesignError,
    StatisticsError,
)
from .expconfig import parse_experiment_file
from .interference import COMPLEX_INTEGRAL, PHASE_SWEEP, coincidence_rate, visibility
from .noise import alpha_sweep, bell_significance, observed_visibility
from .presets import PRESET_NAMES, preset_experiment, preset_summary

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PHYSICS = 3
EXIT_INFEASIBLE = 4
EXIT_STATISTICS = 5


def _sci(x: float) -> str:
    """Fixed scientific notation, 9 significant digits."""
    return f"{x:.8e}"


def _load_experiment(args):
    if getattr(args, "preset", None) and getattr(args, "config", None):
        raise ConfigParseError("give either --preset or --config, not both")
    if getattr(args, "preset", None):
        return preset_experiment(args.preset)
    if getattr(args, "config", None):
        return parse_experiment_file(args.config)
    raise ConfigParseError("one of --preset or --config is required")


def _apply_run_overrides(args, run):
    seed = args.seed if args.seed is not None else run.seed
    gates = args.gates if args.gates is not None else run.gates
    batches = args.batches if args.batches is not None else run.batches
    phases = getattr(args, "phases", None) or run.phases
    return seed, gates, batches, phases


def _write_fringe_csv(path, cfg, points):
    phis = np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("phi_rad,coincidence_rate\n")
        for phi in phis:
            fh.write(f"{_sci(phi)},{_sci(coincidence_rate(cfg, phi))}\n")


def cmd_visibility(args) -> int:
    exp = _load_experiment(args)
    cfg = exp.franson
    res_int = visibility(cfg, COMPLEX_INTEGRAL)
    res_swp = visibility(cfg, PHASE_SWEEP)
    chosen = res_int if args.method == COMPLEX_INTEGRAL else res_swp
    v_obs = observed_visibility(chosen.visibility, exp.noise)
    bell = bell_significance(min(v_obs, 1.0), args.sigma_v)

    rows = [
        ("preset", args.preset or args.config),
        ("method", chosen.method),
        ("intrinsic_visibility_integral", _sci(res_int.visibility)),
        ("intrinsic_visibility_sweep", _sci(res_swp.visibility)),
        ("c_max", _sci(chosen.c_max)),
        ("c_min", _sci(chosen.c_min)),
        ("phase_at_max_rad", _sci(chosen.phase_at_max_rad)),
        ("alpha", _sci(exp.noise.alpha)),
        ("observed_visibility", _sci(v_obs)),
        ("bell_s_value", _sci(bell.s_value)),
        ("bell_sigma_violation", _sci(bell.sigma_violation)),
        ("bell_sigma_v_input", _sci(args.sigma_v)),
    ]
    if exp.franson.spectrum.passband_fraction != 1.0:
        rows.append(("passband_fraction", _sci(cfg.spectrum.passband_fraction)))
    for key, val in rows:
        print(f"{key:32s} {val}")
    if args.out:
        _write_fringe_csv(args.out, cfg, args.points)
        print(f"{'fringe_csv':32s} {args.out}")
    return EXIT_OK


def cmd_fringe(args) -> int:
    exp = _load_experiment(args)
    if args.out:
        _write_fringe_csv(args.out, exp.franson, args.points)
    else:
        phis = np.linspace(0.0, 2.0 * np.pi, args.points, endpoint=False)
        print("phi_rad,coincidence_rate")
        for phi in phis:
            print(f"{_sci(phi)},{_sci(coincidence_rate(exp.franson, phi))}")
    return EXIT_OK


def cmd_alpha_sweep(args) -> int:
    exp = _load_experiment(args)
    try:
        alphas = sorted(float(a) for a in args.alphas.split(",") if a.strip())
    except ValueError:
        raise ConfigParseError(f"bad alpha list {args.alphas!r}")
    if not alphas:
        raise ConfigParseError("alpha list is empty")

    v0 = visibility(exp.franson, COMPLEX_INTEGRAL).visibility
    analytic = alpha_sweep(v0, alphas)

    seed, gates, batches, phases = _apply_run_overrides(args, exp.run)
    mc_rows = {}
    if gates and args.montecarlo:
        from dataclasses import replace

        for a in alphas:
            est = montecarlo.estimate_visibility(
                exp.franson,
                replace(exp.noise, alpha=a),
                exp.detector,
                n_gates=gates,
                phases=np.linspace(0.0, 2.0 * np.pi, phases, endpoint=False),
                batches=batches,
                seed=seed,
            )
            mc_rows[a] = (est.v, est.sigma_v)

    lines = ["alpha,V_analytic,V_montecarlo,sigma_mc"]
    for a, v in analytic:
        if a in mc_rows:
            vm, sm = mc_rows[a]
            lines.append(f"{_sci(a)},{_sci(v)},{_sci(vm)},{_sci(sm)}")
        else:
            lines.append(f"{_sci(a)},{_sci(v)},nan,nan")
    csv_text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)

    if len(alphas) >= 2:
        slope, intercept = np.polyfit(alphas, [v for _, v in analytic], 1)
        print(f"{'fitted_slope_analytic':32s} {_sci(slope)}")
        print(f"{'fitted_intercept_analytic':32s} {_sci(intercept)}")
        if len(mc_rows) >= 2:
            slope_mc, intercept_mc = np.polyfit(
                sorted(mc_rows), [mc_rows[a][0] for a in sorted(mc_rows)], 1
            )
            print(f"{'fitted_slope_montecarlo':32s} {_sci(slope_mc)}")
            print(f"{'fitted_intercept_montecarlo':32s} {_sci(intercept_mc)}")
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    exp = _load_experiment(args)
    seed, gates, batches, phases = _apply_run_overrides(args, exp.run)
    phase_grid = np.linspace(0.0, 2.0 * np.pi, phases, endpoint=False)

    est = montecarlo.estimate_visibility(
        exp.franson,
        exp.noise,
        exp.detector,
        n_gates=gates,
        phases=phase_grid,
        batches=batches,
        seed=seed,
    )
    v0 = visibility(exp.franson, COMPLEX_INTEGRAL).visibility
    v_pipeline = observed_visibility(v0, exp.noise)

    print(f"{'fringe_estimator':32s} {est.fit_method}")
    print(f"{'gates_per_phase':32s} {est.n_gates_per_phase}")
    print(f"{'batches':32s} {batches}")
    print(f"{'V_montecarlo':32s} {_sci(est.v)}")
    print(f"{'sigma_V':32s} {_sci(est.sigma_v)}")
    print(f"{'V_analytic_pipeline':32s} {_sci(v_pipeline)}")
    print(f"{'deviation_sigmas':32s} {_sci((est.v - v_pipeline) / est.sigma_v if est.sigma_v else 0.0)}")

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            header = ",".join(f"offset_{o:+d}" for o in est.offsets)
            fh.write(f"phi_rad,{header}\n")
            for j, phi in enumerate(est.phases):
                row = ",".join(str(int(c)) for c in est.per_phase_histogram[j])
                fh.write(f"{_sci(phi)},{row}\n")
        print(f"{'per_phase_csv':32s} {args.out}")

    if args.events or args.histogram:
        stream = montecarlo.simulate_run(
            exp.franson,
            exp.noise,
            exp.detector,
            n_gates=gates,
            seed=seed,
            phi_tilde=args.phase,
        )
        if args.events:
            stream.to_csv(args.events)
            print(f"{'events_csv':32s} {args.events}")
        if args.histogram:
            m = montecarlo.gate_offset(exp.franson, exp.detector)
            hist = montecarlo.count_coincidences(stream, window_offsets=max(3, m))
            hist.to_csv(args.histogram)
            print(f"{'histogram_csv':32s} {args.histogram}")
    return EXIT_OK


def _parse_problem_file(path, catalog) -> DesignProblem:
    import configparser

    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh, source=str(path))
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigParseError(f"{path}: {exc}", line=line) from exc
    if "problem" not in cp:
        raise ConfigParseError(f"{path}: missing [problem] section")
    sec = cp["problem"]
    known = {
        "target_d_beta2_l_ps2",
        "delta_t_ns",
        "short_fiber",
        "short_length_mm",
        "long_fibers",
    }
    unknown = set(sec.keys()) - known
    if unknown:
        raise ConfigParseError(f"{path}: [problem] unknown keys {sorted(unknown)}")

    def fiber(name):
        name = name.strip()
        if name not in catalog:
            raise ConfigParseError(
                f"{path}: unknown fiber {name!r} (known: {sorted(catalog)})"
            )
        return catalog[name]

    try:
        long_fibers = tuple(fiber(n) for n in sec["long_fibers"].split(","))
        return DesignProblem(
            target_d_beta2_l_ps2=float(sec["target_d_beta2_l_ps2"]),
            delta_t_ns=float(sec["delta_t_ns"]),
            short_fiber=fiber(sec["short_fiber"]),
            long_fibers=long_fibers,
            short_length_mm=float(sec["short_length_mm"]),
        )
    except KeyError as exc:
        raise ConfigParseError(f"{path}: [problem] missing key {exc}")
    except ValueError as exc:
        raise ConfigParseError(f"{path}: {exc}")


def cmd_design(args) -> int:
    catalog = dict(BUILTIN_FIBERS)
    if args.catalog:
        catalog.update(load_fiber_catalog(args.catalog))
    problem = _parse_problem_file(args.problem, catalog)
    sol = solve_lengths(problem)

    for name, length in zip(sol.fibers, sol.lengths_mm):
        print(f"{'length_mm_' + name:32s} {_sci(length)}")
    print(f"{'achieved_d_beta2_l_ps2':32s} {_sci(sol.achieved_d_beta2_l_ps2)}")
    print(f"{'achieved_delay_ns':32s} {_sci(sol.achieved_delay_ns)}")
    print(f"{'residual_d_beta2_l_ps2':32s} {_sci(sol.achieved_d_beta2_l_ps2 - problem.target_d_beta2_l_ps2)}")
    print(f"{'residual_delay_ps':32s} {_sci((sol.achieved_delay_ns - problem.delta_t_ns) * 1e3)}")

    if args.emit_arm:
        segments = ", ".join(
            f"{name}:{length:.6f}" for name, length in zip(sol.fibers, sol.lengths_mm)
        )
        print()
        print(f"[{args.emit_arm}]")
        print(f"delta_t_ns = {problem.delta_t_ns}")
        print("phase_rad = 0.0")
        print(f"long = {segments}")
        print(f"short = {problem.short_fiber.name}:{problem.short_length_mm:.6f}")
    return EXIT_OK


def cmd_presets(args) -> int:
    if args.action != "list":
        raise ConfigParseError(f"unknown presets action {args.action!r}")
    for name in PRESET_NAMES:
        print(f"{name:8s} {preset_summary(name)}")
    return EXIT_OK


def _add_experiment_args(p, with_run=False):
    p.add_argument("--preset", choices=PRESET_NAMES, help="bundled scenario")
    p.add_argument("--config", help="experiment file path")
    if with_run:
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--gates", type=int, default=None)
        p.add_argument("--batches", type=int, default=None)
        p.add_argument("--phases", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fransonsim",
        description="Franson interferometry with chromatic dispersion: "
        "visibility, fringes, Monte Carlo detection, fiber design.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("visibility", help="analytic visibility report")
    _add_experiment_args(p)
    p.add_argument("--method", choices=(PHASE_SWEEP, COMPLEX_INTEGRAL), default=COMPLEX_INTEGRAL)
    p.add_argument("--sigma-v", type=float, default=0.002, help="visibility uncertainty for Bell significance")
    p.add_argument("--out", help="write per-phase fringe CSV here")
    p.add_argument("--points", type=int, default=256, help="fringe CSV phase points")
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("fringe", help="coincidence rate vs phase as CSV")
    _add_experiment_args(p)
    p.add_argument("--points", type=int, default=256)
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    p.set_defaults(func=cmd_fringe)

    p = sub.add_parser("alpha-sweep", help="observed visibility vs pair rate")
    _add_experiment_args(p, with_run=True)
    p.add_argument("--alphas", default="0.0024,0.01,0.02,0.04", help="comma-separated pair rates")
    p.add_argument("--montecarlo", action="store_true", help="also run the Monte Carlo estimator")
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    p.set_defaults(func=cmd_alpha_sweep)

    p = sub.add_parser("montecarlo", help="event-level visibility estimate")
    _add_experiment_args(p, with_run=True)
    p.add_argument("--out", help="per-phase coincidence histogram CSV")
    p.add_argument("--events", help="export one run's event stream CSV")
    p.add_argument("--histogram", help="export one run's offset histogram CSV")
    p.add_argument("--phase", type=float, default=0.0, help="phase for --events/--histogram run")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("design", help="solve fiber lengths for a dispersion target")
    p.add_argument("--problem", required=True, help="problem file path")
    p.add_argument("--catalog", help="extra fiber catalog file")
    p.add_argument("--emit-arm", metavar="SECTION", help="print an arm config fragment under this section name")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("presets", help="preset utilities")
    p.add_argument("action", choices=("list",))
    p.set_defaults(func=cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleDesignError as exc:
        print(f"error: infeasible design: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except StatisticsError as exc:
        print(f"error: statistics: {exc}", file=sys.stderr)
        return EXIT_STATISTICS
    except (ConfigurationError, ContractViolationError, DataError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except FransonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
