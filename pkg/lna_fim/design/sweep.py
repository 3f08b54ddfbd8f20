from lna_fim.observations.observation_design import ObservationDesign
from lna_fim.resources import ModelResource
from lna_fim.errors import LnaFimError, DesignError
from collections import namedtuple
import multiprocessing
import numpy as np
import pandas as pd
import logging
import json
import os


logger = logging.getLogger(__name__)


# design criteria and whether larger values are better
CRITERIA = dict(log_det=True, trace_inverse=False, min_eigenvalue=True)


Optimum = namedtuple("Optimum", ["criterion", "best_delta", "best_value",
                                 "refined_delta", "refined_value"])


def check_criteria(criteria):
    criteria = list(criteria) if criteria else ["log_det"]
    for criterion in criteria:
        if criterion not in CRITERIA:
            raise DesignError(f"unknown criterion {criterion!r} (choose "
                              f"from {', '.join(CRITERIA)})")
    return list(dict.fromkeys(criteria))


class SweepSpec(object):
    """An equidistant sampling design swept over the interval between
    measurements at a fixed number of measurements

    Public Attributes:

    design: ObservationDesign
        the base design whose times are replaced by t0 + i delta
    deltas: np.ndarray
        the positive sampling intervals to evaluate, in grid order
    count: int
        the number of measurements n
    criteria: List[str]
        names of the design criteria to report

    """

    def __init__(self, design, deltas, count, criteria=("log_det",)):
        self.design = design
        self.deltas = np.asarray(deltas, dtype=float).reshape(-1)
        self.count = int(count)
        self.criteria = check_criteria(criteria)

        if self.deltas.size == 0:
            raise DesignError("the delta grid is empty")
        if np.any(~np.isfinite(self.deltas)) or np.any(self.deltas <= 0.0):
            raise DesignError("delta values must be positive")
        if self.count < 1:
            raise DesignError("count must be at least one")

    @classmethod
    def from_dict(cls, config, base_dir=None):
        """Build a sweep from an object with keys design, count, criteria
        and either deltas or delta_min, delta_max and points (a
        logarithmic grid)

        """

        if not isinstance(config, dict):
            raise DesignError("a sweep specification must be an object")
        for key in ("design", "count"):
            if key not in config:
                raise DesignError(f"missing sweep key '{key}'")

        design = config["design"]
        if isinstance(design, str):
            path = os.path.join(base_dir, design) if base_dir else design
            resource = ModelResource.locate(path)
            if not resource.is_available:
                resource = ModelResource.locate(design)
            design = ObservationDesign.from_json(resource.path)
        else:
            design = ObservationDesign.from_dict(design)

        if "deltas" in config:
            deltas = config["deltas"]
        elif {"delta_min", "delta_max", "points"} <= set(config):
            if config["delta_min"] <= 0 or config["delta_max"] <= 0:
                raise DesignError("sweep keys 'delta_min' and 'delta_max' "
                                  "must be positive")
            deltas = np.geomspace(config["delta_min"], config["delta_max"],
                                  int(config["points"]))
        else:
            raise DesignError("missing sweep key 'deltas'")
        return cls(design, deltas, config["count"],
                   config.get("criteria", ["log_det"]))

    @classmethod
    def from_json(cls, path):
        with open(path, "r") as f:
            try:
                config = json.load(f)
            except json.JSONDecodeError as error:
                raise DesignError(f"malformed sweep file {path}: {error}")
        return cls.from_dict(config, base_dir=os.path.dirname(
            os.path.abspath(path)))

    def design_at(self, delta):
        times = self.design.t0 + delta * np.arange(1, self.count + 1)
        return self.design.with_times(times)


def evaluate_design(arguments):
    """Run the full pipeline for one grid point, recording failures as
    row-level errors instead of raising

    """

    experiment, design, key, criteria = arguments
    try:
        report = experiment.with_design(design).report()
        return [(key, c, report.criterion(c), "ok") for c in criteria]
    except LnaFimError as error:
        logger.warning("design point %s failed: %s", key, error)
        return [(key, c, np.nan, f"error: {error}") for c in criteria]


def run_rows(tasks, workers):
    """Evaluate tasks in grid order, fanning out over a process pool"""

    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [evaluate_design(task) for task in tasks]
    with multiprocessing.Pool(workers) as pool:
        return pool.map(evaluate_design, tasks)


def sweep_delta(experiment, spec, workers=1):
    """Evaluate design criteria over a grid of sampling intervals

    Arguments:

    experiment: Experiment
        the network and parameter point, whose design is replaced
    spec: SweepSpec
        the base design, delta grid, measurement count and criteria
    workers: int
        the number of worker processes, serial when 1

    Returns:

    table: pd.DataFrame
        rows (delta, criterion, value, status) in grid order

    """

    tasks = [(experiment, spec.design_at(delta), float(delta), spec.criteria)
             for delta in spec.deltas]
    logger.info("sweeping %d delta values with %s workers",
                len(tasks), workers)
    rows = [row for rows in run_rows(tasks, workers) for row in rows]
    return pd.DataFrame(rows, columns=["delta", "criterion",
                                       "value", "status"])


def sweep_count(experiment, counts, delta, criteria=("log_det",),
                workers=1):
    """Evaluate design criteria against the number of measurements at a
    fixed sampling interval

    Arguments:

    experiment: Experiment
        the network, parameter point and base design
    counts: Sequence[int]
        the numbers of measurements to evaluate
    delta: float
        the sampling interval
    criteria: Sequence[str]
        names of the design criteria to report
    workers: int
        the number of worker processes, serial when 1

    Returns:

    table: pd.DataFrame
        rows (count, criterion, value, status) in the order of counts

    """

    criteria = check_criteria(criteria)
    if not delta > 0:
        raise DesignError("delta must be positive")
    design = experiment.design
    tasks = []
    for count in counts:
        if int(count) < 1:
            raise DesignError("counts must be at least one")
        times = design.t0 + delta * np.arange(1, int(count) + 1)
        tasks.append((experiment, design.with_times(times),
                      int(count), criteria))
    rows = [row for rows in run_rows(tasks, workers) for row in rows]
    return pd.DataFrame(rows, columns=["count", "criterion",
                                       "value", "status"])


def refine_optimum(table, criterion="log_det"):
    """The best grid point of a delta sweep, refined by a parabola through
    it and its two neighbours in log delta

    Arguments:

    table: pd.DataFrame
        the output of sweep_delta
    criterion: str
        the criterion whose optimum is located

    Returns:

    optimum: Optimum
        the best grid point and the refined optimum, the refined values
        equal the grid values when the best point is on the boundary

    """

    rows = table[table["criterion"] == criterion]
    deltas = rows["delta"].to_numpy(dtype=float)
    values = rows["value"].to_numpy(dtype=float)
    finite = np.isfinite(values)
    if not np.any(finite):
        raise DesignError(f"no finite {criterion} values to optimize")

    sign = 1.0 if CRITERIA[criterion] else -1.0
    score = np.where(finite, sign * values, -np.inf)
    best = int(np.argmax(score))
    if best == 0 or best == len(values) - 1 \
            or not np.all(finite[best - 1:best + 2]):
        return Optimum(criterion, deltas[best], values[best],
                       deltas[best], values[best])

    # vertex of the parabola through three points in log delta
    x = np.log(deltas[best - 1:best + 2])
    coefficients = np.polyfit(x, values[best - 1:best + 2], 2)
    if sign * coefficients[0] >= 0.0:
        return Optimum(criterion, deltas[best], values[best],
                       deltas[best], values[best])
    vertex = -coefficients[1] / (2.0 * coefficients[0])
    return Optimum(criterion, deltas[best], values[best],
                   float(np.exp(vertex)),
                   float(np.polyval(coefficients, vertex)))
