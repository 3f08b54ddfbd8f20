"""The lna-fim command line tool.

    lna-fim fim      --model M --params P --design D
    lna-fim sweep    --model M --params P --spec S [--criterion C]
    lna-fim ellipse  --model M --params P --design D --pair A B
    lna-fim compare  --model M --params P --design D [--design E]
    lna-fim validate --model M --params P [--design D]
    lna-fim simulate --model M --params P --delta 1 --count 10

Every subcommand also accepts --experiment NAME to use a registered
experiment instead of model, parameter and design files. Exit codes are
0 on success, 1 when an oracle check fails, 2 for invalid input and 3
for numerical failures.

"""

from lna_fim import __version__
from lna_fim.experiment import Experiment, load_network, load_point
from lna_fim.experiment import load_design
from lna_fim.registration import spec
from lna_fim.engine.solver_config import SolverConfig
from lna_fim.engine.stationary import stationary_state
from lna_fim.observations.observation_design import ObservationDesign
from lna_fim.design.sweep import SweepSpec, CRITERIA, check_criteria
from lna_fim.design.sweep import sweep_delta, sweep_count, refine_optimum
from lna_fim.design.comparison import compare_designs
from lna_fim.oracles.ssa import ssa_simulate
from lna_fim.oracles.oracle_check import default_checks, run_validation
from lna_fim.manifest import RunManifest
from lna_fim.errors import InputError, NumericalError
import numpy as np
import argparse
import warnings
import logging
import json
import time
import sys
import os


logger = logging.getLogger(__name__)


# oracle checks selectable with --check
CHECKS = ("ssa_moments", "finite_difference", "score_identity")


def common_parser():
    """Flags shared by every subcommand"""

    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--rtol", type=float, default=1e-8)
    parser.add_argument("--atol", type=float, default=1e-10)
    parser.add_argument("--scale", choices=["log", "natural"], default="log")
    parser.add_argument("--rank-tol", type=float, default=1e-8)
    parser.add_argument("--out", type=str, default=".")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jitter", type=float, default=0.0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--verbose", action="store_true")
    return parser


def input_parser(design=True):
    """Flags naming the model, parameter and design inputs"""

    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--model", type=str, default=None)
    parser.add_argument("--params", type=str, default=None)
    parser.add_argument("--experiment", type=str, default=None)
    if design:
        parser.add_argument("--design", type=str, default=None)
    return parser


def build_parser():
    parser = argparse.ArgumentParser(
        "lna-fim", description="Fisher information of stochastic reaction "
                               "networks under the linear noise "
                               "approximation")
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True
    common = common_parser()

    fim = subparsers.add_parser(
        "fim", parents=[common, input_parser()],
        help="the Fisher information of one design")
    fim.add_argument("--dump-trajectory", action="store_true")

    sweep = subparsers.add_parser(
        "sweep", parents=[common, input_parser(design=False)],
        help="design criteria over sampling intervals")
    sweep.add_argument("--spec", type=str, required=True)
    sweep.add_argument("--criterion", action="append",
                       choices=list(CRITERIA), default=[])
    sweep.add_argument("--counts", type=int, nargs="+", default=None)
    sweep.add_argument("--delta", type=float, default=1.0)

    ellipse = subparsers.add_parser(
        "ellipse", parents=[common, input_parser()],
        help="a two-parameter cross-section of the neutral space")
    ellipse.add_argument("--pair", type=str, nargs=2, required=True)
    ellipse.add_argument("--epsilon", type=float, default=1.0)
    ellipse.add_argument("--points", type=int, default=256)
    ellipse.add_argument("--slice", action="store_true")

    compare = subparsers.add_parser(
        "compare", parents=[common, input_parser(design=False)],
        help="eigenvalues of several designs side by side")
    compare.add_argument("--design", type=str, action="append", default=[])
    compare.add_argument("--regimes", type=str, nargs="+", default=[])
    compare.add_argument("--sigma-eps2", type=float, default=1.0)

    validate = subparsers.add_parser(
        "validate", parents=[common, input_parser()],
        help="independent oracle checks of the pipeline")
    validate.add_argument("--trajectories", type=int, default=100000)
    validate.add_argument("--draws", type=int, default=10000)
    validate.add_argument("--band", type=float, default=3.0)
    validate.add_argument("--check", action="append", choices=CHECKS,
                          default=[])

    simulate = subparsers.add_parser(
        "simulate", parents=[common, input_parser(design=False)],
        help="exact stochastic simulations of the network")
    simulate.add_argument("--x0", type=float, nargs="+", default=None)
    simulate.add_argument("--times", type=float, nargs="+", default=None)
    simulate.add_argument("--delta", type=float, default=1.0)
    simulate.add_argument("--count", type=int, default=10)
    simulate.add_argument("--trajectories", type=int, default=1000)
    simulate.add_argument("--dump-samples", action="store_true")
    return parser


def write_json(path, content):
    with open(path, "w") as f:
        json.dump(content, f, indent=2)
    return path


def build_experiment(args, manifest, design=None):
    """Build the experiment named by --experiment, or from the model,
    parameter and design inputs, with the global flags applied

    """

    solver_kwargs = dict(rtol=args.rtol, atol=args.atol)
    if args.experiment:
        specification = spec(args.experiment)
        experiment = specification.make(solver_kwargs=solver_kwargs,
                                        scale=args.scale,
                                        rank_tolerance=args.rank_tol)
        manifest.add_input(specification.model)
        manifest.add_input(specification.parameters)
    else:
        design = design if design is not None \
            else getattr(args, "design", None)
        if not args.model or not args.params:
            raise InputError("--model and --params are required unless "
                             "--experiment is given")
        if design is None:
            raise InputError("--design is required unless --experiment "
                             "is given")
        experiment = Experiment(args.model, args.params, design,
                                config=SolverConfig(**solver_kwargs),
                                scale=args.scale,
                                rank_tolerance=args.rank_tol)
        for path in (args.model, args.params, design):
            manifest.add_input(path)

    if args.jitter > 0.0:
        experiment = experiment.with_design(
            experiment.design.copy(jitter=args.jitter))
    manifest.parameters = experiment.point.to_dict()
    manifest.solver = experiment.config.to_dict()
    manifest.regime = experiment.regime
    return experiment


def cmd_fim(args, manifest):
    experiment = build_experiment(args, manifest)
    report = experiment.report()
    outputs = [write_json(os.path.join(args.out, "fim.json"), dict(
        experiment=experiment.name, design=experiment.design.to_dict(),
        **report.to_dict()))]

    path = os.path.join(args.out, "summary.txt")
    with open(path, "w") as f:
        f.write(report.summary())
    outputs.append(path)

    if args.dump_trajectory:
        path = os.path.join(args.out, "trajectory.csv")
        experiment.trajectory().to_frame().to_csv(path, index=False)
        outputs.append(path)
    print(f"rank {report.rank} of {len(report.parameters)}")
    return outputs, 0


def cmd_sweep(args, manifest):
    sweep = SweepSpec.from_json(args.spec)
    manifest.add_input(args.spec)
    criteria = check_criteria(sweep.criteria + list(args.criterion))
    experiment = build_experiment(args, manifest, design=sweep.design)

    if args.counts:
        table = sweep_count(experiment, args.counts, args.delta,
                            criteria=criteria, workers=args.workers)
        path = os.path.join(args.out, "sweep_count.csv")
        table.to_csv(path, index=False)
        return [path], 0

    sweep.criteria = criteria
    table = sweep_delta(experiment, sweep, workers=args.workers)
    path = os.path.join(args.out, "sweep.csv")
    table.to_csv(path, index=False)
    for criterion in criteria:
        try:
            optimum = refine_optimum(table, criterion)
        except InputError as error:
            logger.warning("%s", error)
            continue
        print(f"{criterion}: best delta {optimum.best_delta:.6g} "
              f"(refined {optimum.refined_delta:.6g}, "
              f"value {optimum.refined_value:.6g})")
    return [path], 0


def cmd_ellipse(args, manifest):
    if not args.epsilon > 0.0:
        raise InputError("--epsilon must be positive")
    experiment = build_experiment(args, manifest)
    ellipse = experiment.ellipse(args.epsilon, tuple(args.pair),
                                 profile=not args.slice,
                                 points=args.points)
    stem = os.path.join(args.out, f"ellipse_{experiment.design.name}")
    ellipse.to_frame().to_csv(f"{stem}.csv", index=False)
    write_json(f"{stem}.json", dict(
        pair=list(ellipse.names), epsilon=args.epsilon,
        profile=ellipse.profile, center=ellipse.center.tolist(),
        semi_axes=ellipse.semi_axes.tolist(), axes=ellipse.axes.tolist(),
        radii=[r if np.isfinite(r) else "inf"
               for r in ellipse.radii.tolist()]))
    return [f"{stem}.csv", f"{stem}.json"], 0


def cmd_compare(args, manifest):
    if not args.design and not args.experiment:
        raise InputError("at least one --design is required unless "
                         "--experiment is given")
    designs = [load_design(d) for d in args.design]
    for path in args.design:
        manifest.add_input(path)
    if args.jitter > 0.0:
        designs = [d.copy(jitter=args.jitter) for d in designs]
    base = build_experiment(args, manifest,
                            design=designs[0] if designs else None)
    manifest.regime = None

    # regime names are applied to the first design
    candidates = designs + list(args.regimes)
    comparison = compare_designs(base, candidates or [base.design],
                                 sigma_eps2=args.sigma_eps2)
    path = write_json(os.path.join(args.out, "compare.json"),
                      comparison.to_dict())
    table = os.path.join(args.out, "compare.csv")
    comparison.to_frame().to_csv(table)
    return [path, table], 0


def validation_experiment(args, manifest):
    """The experiment under test, by default a short time series of every
    species started at the stationary state

    """

    if args.experiment or args.design:
        return build_experiment(args, manifest)
    if not args.model:
        raise InputError("--model is required unless --experiment is given")
    network = load_network(args.model)
    design = ObservationDesign("TS", np.arange(1.0, 6.0), network.species,
                               name="validation")
    return build_experiment(args, manifest, design=design)


def cmd_validate(args, manifest):
    experiment = validation_experiment(args, manifest)
    manifest.seed = args.seed
    selected = args.check or list(CHECKS)
    checks = {check.name: check for check in default_checks(
        trajectories=args.trajectories, seed=args.seed, band=args.band,
        draws=args.draws, workers=args.workers)}
    results = run_validation(experiment, [checks[c] for c in selected])
    passed = all(result.passed for result in results)
    path = write_json(os.path.join(args.out, "validate.json"), dict(
        experiment=experiment.name, passed=passed,
        checks=[dict(name=r.name, passed=r.passed, details=r.details)
                for r in results]))
    for result in results:
        print(f"{result.name}: {'pass' if result.passed else 'FAIL'}")
    return [path], 0 if passed else 1


def cmd_simulate(args, manifest):
    if args.experiment:
        experiment = spec(args.experiment).make()
        network, point = experiment.network, experiment.point
    else:
        if not args.model or not args.params:
            raise InputError("--model and --params are required unless "
                             "--experiment is given")
        network = load_network(args.model)
        point = load_point(network, args.params, scale="natural")
        manifest.add_input(args.model)
        manifest.add_input(args.params)
    manifest.parameters = point.to_dict()
    manifest.seed = args.seed

    if args.times is not None:
        times = np.asarray(args.times, dtype=float)
    else:
        times = args.delta * np.arange(1, args.count + 1)
    if args.x0 is not None:
        x0 = np.asarray(args.x0, dtype=float)
    else:
        x0 = np.maximum(np.round(stationary_state(
            network, point.values).phi), 0.0)

    ensemble = ssa_simulate(network, point.values, x0, times,
                            args.trajectories, seed=args.seed,
                            workers=args.workers)
    outputs = [write_json(os.path.join(args.out, "ssa_summary.json"),
                          ensemble.summary())]
    if args.dump_samples:
        path = os.path.join(args.out, "ssa_samples.csv")
        ensemble.to_frame().to_csv(path, index=False)
        outputs.append(path)
    return outputs, 0


COMMANDS = dict(fim=cmd_fim, sweep=cmd_sweep, ellipse=cmd_ellipse,
                compare=cmd_compare, validate=cmd_validate,
                simulate=cmd_simulate)


def main(argv=None):
    """Run one subcommand and return its exit code"""

    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")

    manifest = RunManifest(__version__, args.command, scale=args.scale)
    start = time.time()
    try:
        os.makedirs(args.out, exist_ok=True)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            outputs, status = COMMANDS[args.command](args, manifest)
    except NumericalError as error:
        print(f"lna-fim: numerical error: {error}", file=sys.stderr)
        return 3
    except (InputError, ValueError, OSError) as error:
        print(f"lna-fim: input error: {error}", file=sys.stderr)
        return 2

    for warning in caught:
        message = f"{warning.category.__name__}: {warning.message}"
        logger.warning("%s", message)
        manifest.add_warning(message)
    manifest.wall_clock_seconds = time.time() - start
    for path in outputs:
        manifest.write(path)
    return status


if __name__ == "__main__":
    sys.exit(main())
