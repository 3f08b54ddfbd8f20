from lna_fim.networks.expressions import Expr, TIME
from lna_fim.errors import ParseError, EvaluationError, NegativeRateError
from lna_fim.errors import ClampedRateWarning
from collections import namedtuple
import numpy as np
import sympy
import warnings


# rates in [-NEGATIVE_RATE_TOLERANCE, 0) are integrator roundoff and
# are clamped to zero, anything below is an invalid state
NEGATIVE_RATE_TOLERANCE = 1e-9


# rate values and their first and second partial derivatives
RateDerivatives = namedtuple("RateDerivatives", [
    "rates", "d_species", "d_parameters",
    "d_species_species", "d_species_parameters"])


def clamp_rates(rates):
    """Clamp transition rates that are negative by at most the roundoff
    tolerance to zero, raising NegativeRateError below the tolerance

    """

    rates = np.asarray(rates, dtype=float)
    if rates.size and rates.min() < 0.0:
        j = int(np.argmin(rates))
        if rates[j] < -NEGATIVE_RATE_TOLERANCE:
            raise NegativeRateError(
                f"transition rate {j + 1} is negative ({rates[j]:.6g})",
                stage="diffusion")
        warnings.warn("transition rates in [-1e-9, 0) clamped to zero",
                      ClampedRateWarning)
        rates = np.where(rates < 0.0, 0.0, rates)
    return rates


class CompiledRates(object):

    def __init__(self, network):
        """Compile the rate laws of a network and all the first and second
        partial derivatives the variational systems need into python
        functions of (species vector, parameter vector, time)

        Arguments:

        network: ReactionNetwork
            the network whose rate expressions are compiled

        """

        x = [sympy.Symbol(s) for s in network.species]
        theta = [sympy.Symbol(p) for p in network.parameters]
        rates = [e.node for e in network.rates]
        arguments = [x, theta, TIME]

        # first partials with respect to species and parameters
        d_x = [[sympy.diff(f, xi) for xi in x] for f in rates]
        d_theta = [[sympy.diff(f, tk) for tk in theta] for f in rates]

        # second partials for the variance and propagator sensitivities
        d_xx = [[[sympy.diff(g, xm) for xm in x] for g in row]
                for row in d_x]
        d_xtheta = [[[sympy.diff(g, tk) for tk in theta] for g in row]
                    for row in d_x]

        def compile_math(expr):
            return sympy.lambdify(arguments, expr,
                                  modules="math", dummify=True)

        self.rates = compile_math(rates)
        self.d_species = compile_math(d_x)
        self.d_parameters = compile_math(d_theta)
        self.d_species_species = compile_math(d_xx)
        self.d_species_parameters = compile_math(d_xtheta)

        # a numpy version that accepts a column of states per trajectory
        self.batch_rates = sympy.lambdify(
            arguments, rates, modules="numpy", dummify=True)


def _call(function, x, theta, t, stage):
    """Call a compiled rate function and convert numerical failures
    into EvaluationError

    """

    try:
        return np.array(function(x, theta, t), dtype=float)
    except ZeroDivisionError:
        raise EvaluationError("division by zero in a rate law", stage=stage)
    except (ValueError, OverflowError, TypeError) as error:
        raise EvaluationError(f"domain error in a rate law: {error}",
                              stage=stage)


class ReactionNetwork(object):
    """A chemical reaction network with N species, L parameters and R
    reactions whose transition rates are symbolic expressions

    Public Attributes:

    species: Tuple[str]
        species names in declaration order
    parameters: Tuple[str]
        parameter names in declaration order
    reactants: np.ndarray
        an N x R integer matrix of reactant multiplicities
    products: np.ndarray
        an N x R integer matrix of product multiplicities
    stoichiometry: np.ndarray
        the N x R integer matrix S = products - reactants
    rates: Tuple[Expr]
        the R transition rate expressions f_j(x, theta, t)

    Public Methods:

    drift(np.ndarray, np.ndarray, float) -> np.ndarray:
        the length R vector of transition rates F(x, theta, t)
    jacobian(np.ndarray, np.ndarray, float) -> np.ndarray:
        the N x N matrix A with A_ik = sum_j s_ij df_j / dx_k
    diffusion(np.ndarray, np.ndarray, float) -> np.ndarray:
        the N x N matrix E E^T = S diag(F) S^T
    rate_derivatives(np.ndarray, np.ndarray, float) -> RateDerivatives:
        rates and every first and second partial derivative at a point

    """

    def __init__(self, species, parameters, reactants, products, rates):
        """Create an immutable reaction network and validate it

        Arguments:

        species: Sequence[str]
            species names, which must be unique
        parameters: Sequence[str]
            parameter names, which must be unique and distinct from species
        reactants: np.ndarray
            an N x R matrix of nonnegative integer reactant multiplicities
        products: np.ndarray
            an N x R matrix of nonnegative integer product multiplicities
        rates: Sequence[Expr]
            R rate expressions over species, parameters and 't'

        """

        self.species = tuple(species)
        self.parameters = tuple(parameters)
        self.rates = tuple(r if isinstance(r, Expr) else Expr(r)
                           for r in rates)

        # store read-only integer copies of the stoichiometry
        self.reactants = np.array(reactants, dtype=int).reshape(
            len(self.species), len(self.rates))
        self.products = np.array(products, dtype=int).reshape(
            len(self.species), len(self.rates))
        self.stoichiometry = self.products - self.reactants
        for matrix in (self.reactants, self.products, self.stoichiometry):
            matrix.setflags(write=False)

        # no two species or parameters may share a name
        names = self.species + self.parameters
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ParseError(f"duplicate name {duplicates[0]}")

        # every reaction must change the state
        for j in range(self.num_reactions):
            if not np.any(self.stoichiometry[:, j]):
                raise ParseError(
                    f"reaction {j + 1} has an all-zero stoichiometry column")

        # every symbol must resolve to a species, a parameter or time
        known = set(names) | {TIME.name}
        for rate in self.rates:
            unknown = sorted(rate.symbols - known)
            if unknown:
                raise ParseError(f"undeclared symbol {unknown[0]}")

        self._compiled = None

    @property
    def num_species(self):
        return len(self.species)

    @property
    def num_parameters(self):
        return len(self.parameters)

    @property
    def num_reactions(self):
        return len(self.rates)

    @property
    def is_autonomous(self):
        """True when no transition rate depends explicitly on time"""
        return all(TIME.name not in r.symbols for r in self.rates)

    @property
    def compiled(self):
        if self._compiled is None:
            self._compiled = CompiledRates(self)
        return self._compiled

    def species_index(self, name):
        try:
            return self.species.index(name)
        except ValueError:
            raise ParseError(f"undeclared symbol {name}")

    def drift(self, x, theta, t=0.0):
        """The vector of transition rates F(x, theta, t)

        Arguments:

        x: np.ndarray
            a length N state vector of copy numbers
        theta: np.ndarray
            a length L parameter vector in natural scale
        t: float
            the time at which rates are evaluated

        Returns:

        rates: np.ndarray
            a length R vector whose j-th entry is f_j(x, theta, t)

        """

        return _call(self.compiled.rates, x, theta, t, "drift")

    def jacobian(self, phi, theta, t=0.0):
        """The matrix A = S dF/dphi of the macroscopic rate equation"""
        return self.stoichiometry @ _call(
            self.compiled.d_species, phi, theta, t, "jacobian").reshape(
            self.num_reactions, self.num_species)

    def diffusion(self, phi, theta, t=0.0):
        """The symmetric positive semidefinite matrix E E^T = S diag(F) S^T,
        with rates clamped to zero within roundoff of zero

        """

        rates = clamp_rates(self.drift(phi, theta, t))
        return (self.stoichiometry * rates) @ self.stoichiometry.T

    def rate_derivatives(self, phi, theta, t=0.0, second_order=True):
        """Rates with every first and second partial derivative needed by
        the variational equations, evaluated at one point

        Arguments:

        phi: np.ndarray
            a length N state vector
        theta: np.ndarray
            a length L parameter vector in natural scale
        t: float
            the time at which rates are evaluated
        second_order: bool
            whether the second partials are evaluated, they are None
            otherwise

        Returns:

        derivatives: RateDerivatives
            rates (R,), d_species (R, N), d_parameters (R, L),
            d_species_species (R, N, N), d_species_parameters (R, N, L)

        """

        n, r, l = self.num_species, self.num_reactions, self.num_parameters
        compiled = self.compiled
        if not second_order:
            return RateDerivatives(
                _call(compiled.rates, phi, theta, t, "rates"),
                _call(compiled.d_species, phi, theta, t,
                      "rates").reshape(r, n),
                _call(compiled.d_parameters, phi, theta, t,
                      "rates").reshape(r, l), None, None)
        return RateDerivatives(
            _call(compiled.rates, phi, theta, t, "rates"),
            _call(compiled.d_species, phi, theta, t,
                  "rates").reshape(r, n),
            _call(compiled.d_parameters, phi, theta, t,
                  "rates").reshape(r, l),
            _call(compiled.d_species_species, phi, theta, t,
                  "rates").reshape(r, n, n),
            _call(compiled.d_species_parameters, phi, theta, t,
                  "rates").reshape(r, n, l))

    def batch_drift(self, states, theta, t=0.0):
        """Transition rates for many states at once

        Arguments:

        states: np.ndarray
            an N x B array holding one state per column
        theta: np.ndarray
            a length L parameter vector in natural scale
        t: float
            the time at which rates are evaluated

        Returns:

        rates: np.ndarray
            an R x B array of transition rates

        """

        states = np.asarray(states, dtype=float)
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            try:
                columns = self.compiled.batch_rates(states, theta, t)
            except FloatingPointError as error:
                raise EvaluationError(f"rate law failed: {error}",
                                      stage="batch_drift")
        return np.stack([np.broadcast_to(np.asarray(c, dtype=float),
                                         states.shape[1:])
                         for c in columns], axis=0)

    def __eq__(self, other):
        return isinstance(other, ReactionNetwork) \
            and self.species == other.species \
            and self.parameters == other.parameters \
            and np.array_equal(self.reactants, other.reactants) \
            and np.array_equal(self.products, other.products) \
            and self.rates == other.rates

    def __hash__(self):
        return hash((self.species, self.parameters, self.rates))

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_compiled"] = None
        return state

    def __repr__(self):
        return "ReactionNetwork(species={}, parameters={}, " \
               "reactions={})".format(self.species, self.parameters,
                                      self.num_reactions)
