"""Command-line front end: check, solve, select, sweep, realize and simulate models."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from src.cli.model_file import ModelFile, parse_matrix_file, parse_model
from src.cli.output import (
    format_complex,
    format_matrix,
    write_kernel_csv,
    write_table_csv,
    write_vector_csv,
)
from src.model.structures import (
    ModelCM,
    check_general_regular,
    check_regular,
    check_weak_consistency,
    check_well_posed,
)
from src.polyalg.matrix_poly import polyeig
from src.realize.minimal import minimal_realization
from src.selection.determinacy import select_stability
from src.selection.gain import gain_sweep
from src.selection.least_squares import select_least_squares
from src.solver.general import solve_general
from src.solver.simulation import simulate_paths
from src.solver.solution import solve_total
from src.utils.config import (
    DEFAULT_HORIZON,
    DEFAULT_PATHS,
    DEFAULT_TOLERANCES,
    REPORT_FILE_NAME,
    RESULTS_DIR,
    ensure_dir,
)
from src.utils.errors import InputError, RatexpError, SelectionFailed
from src.utils.logger import logger, save_report, set_log_level


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _one_step(model_file: ModelFile, command: str) -> ModelCM:
    if model_file.is_general:
        raise InputError(f"'{command}' needs a [matrices] model")
    return model_file.model


def resolve_af0(model: ModelCM, choice: str) -> np.ndarray:
    """AF0 from 'lsq', 'stable' or a matrix file."""
    if choice == "lsq":
        return select_least_squares(model)
    if choice == "stable":
        report = select_stability(model)
        if not report.is_determinate:
            raise SelectionFailed(f"Stability selection is {report.classification.value}, not Determinate")
        return report.AF0
    return parse_matrix_file(Path(choice))


def _print_eigenvalues(values: np.ndarray) -> None:
    for value in values:
        print(f"  {format_complex(value)}  |{abs(value):.7f}|")


def cmd_check(args) -> None:
    model_file = parse_model(args.model)
    model = model_file.model
    if model_file.is_general:
        print(f"regular: {_yes(check_general_regular(model))}")
        return
    regular = check_regular(model)
    print(f"regular: {_yes(regular)}")
    if not regular:
        return
    print(f"well-posed: {_yes(check_well_posed(model))}")
    if model_file.init is not None:
        print(f"weakly consistent: {_yes(check_weak_consistency(model, model_file.init))}")
    eigs = polyeig(model.characteristic())
    print(f"finite eigenvalues ({eigs.finite.size}, {eigs.infinite_count} infinite):")
    _print_eigenvalues(eigs.finite)


def cmd_eig(args) -> None:
    model_file = parse_model(args.model)
    poly = model_file.model.denominator() if model_file.is_general else model_file.model.characteristic()
    eigs = polyeig(poly)
    print(f"finite: {eigs.finite.size}, infinite: {eigs.infinite_count}")
    _print_eigenvalues(eigs.finite)
    if args.out:
        table = np.column_stack([eigs.finite.real, eigs.finite.imag, np.abs(eigs.finite)])
        write_table_csv(ensure_dir(args.out) / "eigenvalues.csv", ["re", "im", "modulus"], table)


def cmd_solve(args) -> None:
    model_file = parse_model(args.model)
    out = ensure_dir(args.out)
    if model_file.is_general:
        solution = solve_general(model_file.model, model_file.free, args.horizon)
        write_kernel_csv(out / "G.csv", "G", solution.Gt)
        for i, kernel in solution.Fit.items():
            write_kernel_csv(out / f"F_{i}.csv", f"F_{i}", kernel)
        print(f"G~_0 =\n{format_matrix(solution.Gt[0])}")
        print(f"existence for all free parameters: {_yes(solution.well_posed)}")
        save_report({"kind": "general", "horizon": args.horizon, "G0": solution.Gt[0],
                     "well_posed": solution.well_posed}, out / REPORT_FILE_NAME)
        return

    model = model_file.model
    AF0 = resolve_af0(model, args.af0)
    solution = solve_total(model, AF0, model_file.init_or_zeros(), args.horizon)
    write_kernel_csv(out / "G.csv", "G", solution.Gt)
    write_kernel_csv(out / "F.csv", "F", solution.Ft)
    write_vector_csv(out / "xbar.csv", "xbar", solution.xbar)
    print(f"AF0 =\n{format_matrix(solution.AF0)}")
    print(f"AF0 + B =\n{format_matrix(solution.error_coeff)}")
    save_report({"kind": "one-step", "af0": args.af0, "horizon": args.horizon, "AF0": solution.AF0,
                 "error_coeff": solution.error_coeff, "F0": solution.forecast_gain()}, out / REPORT_FILE_NAME)


def cmd_select(args) -> None:
    model = _one_step(parse_model(args.model), "select")
    if args.criterion == "lsq":
        AF0 = select_least_squares(model)
        print(f"least squares AF0 =\n{format_matrix(AF0)}")
        report = {"criterion": "lsq", "AF0": AF0}
    else:
        determinacy = select_stability(model)
        print(f"classification: {determinacy.classification.value}")
        print("unstable eigenvalues:")
        _print_eigenvalues(determinacy.unstable_eigs)
        if determinacy.is_determinate:
            print(f"AF0 =\n{format_matrix(determinacy.AF0)}")
            print(f"realized order: {determinacy.realized_order}")
            _print_eigenvalues(determinacy.realized_poles)
        report = {"criterion": "stable", **determinacy.to_dict()}
    if args.out:
        save_report(report, ensure_dir(args.out) / REPORT_FILE_NAME)


def cmd_sweep(args) -> None:
    model = _one_step(parse_model(args.model), "sweep-gain")
    if args.start <= 0 or args.stop <= 0 or args.steps < 1:
        raise InputError("--from and --to must be positive and --steps at least 1")
    grid = np.logspace(np.log10(args.start), np.log10(args.stop), args.steps)
    result = gain_sweep(model, grid, include_zero=args.include_zero, show_progress=True)
    out = ensure_dir(args.out)
    columns = ["eps"] + [f"{part}{k}" for k in range(result.width()) for part in ("re", "im")]
    write_table_csv(out / "loci.csv", columns, result.table())
    for end in (0, -1):
        print(f"eps = {result.epsilons[end]:.3g}:")
        _print_eigenvalues(result.loci[end][~np.isnan(result.loci[end])])
    save_report({"epsilons": result.epsilons, "infinite_counts": result.infinite_counts,
                 "failures": result.failures}, out / REPORT_FILE_NAME)


def cmd_realize(args) -> None:
    model = _one_step(parse_model(args.model), "realize")
    solution = solve_total(model, resolve_af0(model, args.af0), None, 1)
    system = minimal_realization(solution.Gz if args.kernel == "G" else solution.Fz)
    print(f"order: {system.order}")
    for name in ("A", "B", "C", "D"):
        print(f"{name} =\n{format_matrix(getattr(system, name))}")
    print("poles:")
    _print_eigenvalues(system.poles())
    if args.out:
        save_report({"kernel": args.kernel, "order": system.order, "A": system.A, "B": system.B,
                     "C": system.C, "D": system.D, "poles": system.poles()},
                    ensure_dir(args.out) / REPORT_FILE_NAME)


def cmd_simulate(args) -> None:
    model_file = parse_model(args.model)
    model = _one_step(model_file, "simulate")
    solution = solve_total(model, resolve_af0(model, args.af0), model_file.init_or_zeros(), args.horizon)
    ensemble = simulate_paths(model, solution, model_file.shocks_or_default(), args.paths, args.horizon,
                              show_progress=True)
    out = ensure_dir(args.out)
    write_vector_csv(out / "mean_error.csv", "e", ensemble.mean_error())
    write_vector_csv(out / "x_path0.csv", "x", ensemble.x[0])
    print(f"identity residual: {ensemble.identity_residual:.3e}")
    print(f"mean error within 4 sigma / sqrt(N): {_yes(ensemble.within_bound())}")
    save_report({"paths": args.paths, "horizon": args.horizon, "seed": model_file.shocks_or_default().seed,
                 "identity_residual": ensemble.identity_residual, "within_bound": ensemble.within_bound(),
                 "error_std": ensemble.error_std}, out / REPORT_FILE_NAME)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Solve linear rational-expectations models")
    parser.add_argument("--log-level", default="INFO", help="Logging level (DEBUG, INFO, WARNING, ...)")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Regularity, well-posedness and eigenvalues")
    check.add_argument("model", type=Path)
    check.set_defaults(handler=cmd_check)

    eig = sub.add_parser("eig", help="Finite eigenvalues of the characteristic matrix")
    eig.add_argument("model", type=Path)
    eig.add_argument("--out", type=Path, help="Directory for eigenvalues.csv")
    eig.set_defaults(handler=cmd_eig)

    solve = sub.add_parser("solve", help="Solve for the given free parameter")
    solve.add_argument("model", type=Path)
    solve.add_argument("--af0", default="lsq", help="'lsq', 'stable' or a matrix file")
    solve.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    solve.add_argument("--out", type=Path, default=RESULTS_DIR)
    solve.set_defaults(handler=cmd_solve)

    select = sub.add_parser("select", help="Select AF0 by stability or least squares")
    select.add_argument("model", type=Path)
    select.add_argument("--criterion", choices=["stable", "lsq"], default="stable")
    select.add_argument("--out", type=Path)
    select.set_defaults(handler=cmd_select)

    sweep = sub.add_parser("sweep-gain", help="Eigenvalue loci of [z^2 eps Ahat - zI + A]")
    sweep.add_argument("model", type=Path)
    sweep.add_argument("--from", dest="start", type=float, default=1e-6)
    sweep.add_argument("--to", dest="stop", type=float, default=1.0)
    sweep.add_argument("--steps", type=int, default=60)
    sweep.add_argument("--include-zero", action="store_true", help="Prepend eps = 0")
    sweep.add_argument("--out", type=Path, default=RESULTS_DIR)
    sweep.set_defaults(handler=cmd_sweep)

    realize = sub.add_parser("realize", help="Minimal state-space realization of G[z] or F[z]")
    realize.add_argument("model", type=Path)
    realize.add_argument("--af0", default="lsq")
    realize.add_argument("--kernel", choices=["G", "F"], default="G")
    realize.add_argument("--out", type=Path)
    realize.set_defaults(handler=cmd_realize)

    simulate = sub.add_parser("simulate", help="Monte-Carlo paths and forecast-error statistics")
    simulate.add_argument("model", type=Path)
    simulate.add_argument("--af0", default="lsq")
    simulate.add_argument("--paths", type=int, default=DEFAULT_PATHS)
    simulate.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    simulate.add_argument("--out", type=Path, default=RESULTS_DIR)
    simulate.set_defaults(handler=cmd_simulate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    set_log_level(args.log_level)
    logger.debug(f"Tolerances: {DEFAULT_TOLERANCES}")
    try:
        args.handler(args)
    except RatexpError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
