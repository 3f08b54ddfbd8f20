from lna_fim.engine.integrator import check_times
from lna_fim.networks.reaction_network import NEGATIVE_RATE_TOLERANCE
from lna_fim.errors import InputError, NumericalError, NegativeRateError
from dataclasses import dataclass
from typing import Tuple
import multiprocessing
import numpy as np
import pandas as pd
import logging


logger = logging.getLogger(__name__)


# the hard cap on reaction events of a single trajectory
MAX_EVENTS = 10 ** 9


# trajectories simulated together with one random stream
BLOCK_SIZE = 4096


@dataclass(frozen=True, eq=False)
class SsaEnsemble(object):
    """Copy numbers of independent exact simulations of the chemical
    master equation, sampled at common observation times

    Public Attributes:

    seed: int
        the seed from which every block stream was derived
    count: int
        the number of trajectories
    times: np.ndarray
        the T observation times
    species: Tuple[str]
        species names indexing the last axis of the samples
    samples: np.ndarray
        a count x T x N integer array of copy numbers

    Public Methods:

    means() -> np.ndarray:
        empirical means at every observation time, T x N
    covariances() -> np.ndarray:
        empirical covariances at every observation time, T x N x N
    lag_covariance(int, int) -> np.ndarray:
        the empirical covariance between the states at two times
    summary() -> dict:
        every estimate with its Monte Carlo standard error

    """

    seed: int
    count: int
    times: np.ndarray
    species: Tuple[str, ...]
    samples: np.ndarray

    def __post_init__(self):
        self.times.setflags(write=False)
        self.samples.setflags(write=False)

    def deviations(self):
        return self.samples - self.samples.mean(axis=0)

    def means(self):
        return self.samples.mean(axis=0)

    def mean_standard_errors(self):
        return self.samples.std(axis=0, ddof=1) / np.sqrt(self.count)

    def lag_products(self, i, j):
        """Products of deviations (x_a(t_i) - m_a)(x_b(t_j) - m_b) of
        every trajectory, count x N x N

        """

        d = self.deviations()
        return np.einsum("sa,sb->sab", d[:, i], d[:, j])

    def lag_covariance(self, i, j):
        """The empirical cov(x(t_i), x(t_j)) along single trajectories"""
        return self.lag_products(i, j).sum(axis=0) / (self.count - 1)

    def lag_standard_errors(self, i, j):
        return self.lag_products(i, j).std(axis=0, ddof=1) \
            / np.sqrt(self.count)

    def covariances(self):
        return np.stack([self.lag_covariance(i, i)
                         for i in range(self.times.size)])

    def covariance_standard_errors(self):
        return np.stack([self.lag_standard_errors(i, i)
                         for i in range(self.times.size)])

    def summary(self):
        return dict(
            seed=int(self.seed), count=int(self.count),
            times=self.times.tolist(), species=list(self.species),
            means=self.means().tolist(),
            mean_standard_errors=self.mean_standard_errors().tolist(),
            covariances=self.covariances().tolist(),
            covariance_standard_errors=(
                self.covariance_standard_errors().tolist()))

    def to_frame(self):
        """One row per trajectory and time with one column per species"""

        count, steps, n = self.samples.shape
        columns = {"trajectory": np.repeat(np.arange(count), steps),
                   "time": np.tile(self.times, count)}
        flat = self.samples.reshape(count * steps, n)
        for a, name in enumerate(self.species):
            columns[name] = flat[:, a]
        return pd.DataFrame(columns)


def check_rates(rates):
    if rates.size and rates.min() < -NEGATIVE_RATE_TOLERANCE:
        raise NegativeRateError(f"negative transition rate "
                                f"{rates.min():.6g} in the simulation",
                                stage="ssa")
    return np.maximum(rates, 0.0)


def simulate_block(arguments):
    """Simulate one block of trajectories with the Gillespie direct method,
    advancing every unfinished trajectory by one event per iteration

    Arguments:

    arguments: tuple
        network, theta, x0, times, size, seed, block index, t0 and the
        event cap of a trajectory

    Returns:

    samples: np.ndarray
        a size x T x N integer array of copy numbers

    """

    network, theta, x0, times, size, seed, block, t0, max_events = arguments
    rng = np.random.default_rng([seed, block])
    stoichiometry = network.stoichiometry.T.astype(np.int64)
    steps = times.size

    states = np.tile(x0, (size, 1))
    clock = np.full(size, float(t0))
    cursor = np.zeros(size, dtype=np.int64)
    events = np.zeros(size, dtype=np.int64)
    samples = np.empty((size, steps, x0.size), dtype=np.int64)
    active = np.arange(size)

    while active.size:
        rates = check_rates(network.batch_drift(
            states[active].T.astype(float), theta))
        total = rates.sum(axis=0)
        waits = rng.exponential(size=active.size)
        with np.errstate(divide="ignore", invalid="ignore"):
            arrival = np.where(total > 0.0, clock[active] + waits / total,
                               np.inf)

        # the state holds until the next event, record it at every
        # observation time passed in between
        while True:
            pending = cursor[active] < steps
            due = np.zeros(active.size, dtype=bool)
            due[pending] = times[cursor[active][pending]] < arrival[pending]
            if not np.any(due):
                break
            rows = active[due]
            samples[rows, cursor[rows]] = states[rows]
            cursor[rows] += 1

        running = cursor[active] < steps
        fire, rates, total = active[running], rates[:, running], \
            total[running]
        arrival = arrival[running]

        # pick the reaction whose cumulative rate first exceeds u a0
        threshold = rng.random(fire.size) * total
        reaction = (np.cumsum(rates, axis=0) < threshold).sum(axis=0)
        reaction = np.minimum(reaction, stoichiometry.shape[0] - 1)
        states[fire] += stoichiometry[reaction]
        clock[fire] = arrival
        events[fire] += 1
        if fire.size and events[fire].max() > max_events:
            raise NumericalError(f"more than {max_events} events in one "
                                 f"trajectory", stage="ssa")
        active = fire

    return samples


def ssa_simulate(network, theta, x0, times, count, seed=0,
                 block_size=BLOCK_SIZE, workers=1, t0=0.0,
                 max_events=MAX_EVENTS):
    """Sample exact realisations of the chemical master equation with the
    Gillespie direct method

    Arguments:

    network: ReactionNetwork
        an autonomous network whose rates are evaluated on copy numbers
    theta: np.ndarray
        a length L parameter vector in natural scale
    x0: np.ndarray
        nonnegative integer initial copy numbers at t0
    times: np.ndarray
        strictly increasing observation times not before t0
    count: int
        the number of independent trajectories
    seed: int
        the root seed, block b draws from default_rng([seed, b])
    block_size: int
        the number of trajectories simulated together
    workers: int
        the number of worker processes blocks are spread over
    t0: float
        the start time of every trajectory
    max_events: int
        the event cap of a single trajectory

    Returns:

    ensemble: SsaEnsemble
        copy numbers of every trajectory at every observation time,
        identical for a given seed regardless of workers

    """

    if not network.is_autonomous:
        raise InputError("the simulation needs rates that do not "
                         "depend on time")
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.size != network.num_species:
        raise InputError(f"x0 has {x0.size} entries but the model has "
                         f"{network.num_species} species")
    if np.any(x0 < 0) or np.any(x0 != np.round(x0)):
        raise InputError("x0 must hold nonnegative integers")
    if int(count) < 1 or int(block_size) < 1:
        raise InputError("count and block_size must be positive")
    times = check_times(times, t0)
    theta = np.asarray(theta, dtype=float)

    count, block_size = int(count), int(block_size)
    sizes = [min(block_size, count - start)
             for start in range(0, count, block_size)]
    tasks = [(network, theta, x0.astype(np.int64), times, size, int(seed),
              block, float(t0), int(max_events))
             for block, size in enumerate(sizes)]
    logger.info("simulating %d trajectories in %d blocks",
                count, len(tasks))

    # blocks come back in index order whatever the scheduling
    if workers is None or workers <= 1 or len(tasks) <= 1:
        blocks = [simulate_block(task) for task in tasks]
    else:
        with multiprocessing.Pool(workers) as pool:
            blocks = pool.map(simulate_block, tasks)
    return SsaEnsemble(int(seed), count, times, tuple(network.species),
                       np.concatenate(blocks, axis=0))
