from lna_fim.errors import EvaluationError
from sympy.printing.str import StrPrinter
import sympy


# the symbol that stands for time inside rate expressions
TIME = sympy.Symbol("t")


# unary functions that may appear inside a rate expression
FUNCTIONS = dict(exp=sympy.exp, log=sympy.log, sqrt=sympy.sqrt)


class DslPrinter(StrPrinter):
    """Prints sympy expressions in the syntax accepted by the model parser,
    which writes powers with '^' and never uses named constants

    """

    def _print_Exp1(self, expr):
        return "exp(1)"

    def doprint(self, expr):
        return super(DslPrinter, self).doprint(expr).replace("**", "^")


class Expr(object):
    """An immutable rate expression over species, parameters and time,
    stored as a sympy expression tree whose powers have constant
    exponents and whose functions are restricted to exp, log and sqrt

    Public Attributes:

    node: sympy.Expr
        the underlying sympy expression tree
    symbols: frozenset
        the names of every free symbol appearing in the expression

    Public Methods:

    evaluate(dict) -> float:
        evaluates the expression exactly as compiled python arithmetic at
        an environment mapping symbol names to values
    differentiate(str) -> Expr:
        returns the exact symbolic partial derivative with respect
        to the named symbol

    """

    def __init__(self, node):
        """Wrap a sympy expression as a rate expression

        Arguments:

        node: sympy.Expr or number
            an expression tree built from symbols, rationals, the
            arithmetic operators and the functions exp, log and sqrt

        """

        self.node = sympy.sympify(node)
        self.symbols = frozenset(s.name for s in self.node.free_symbols)
        self._function = None
        self._arguments = tuple(sorted(self.symbols))

    @property
    def is_constant(self):
        return not self.symbols

    def evaluate(self, env):
        """Evaluate the expression at an environment of symbol values

        Arguments:

        env: Mapping[str, float]
            values for every symbol in the expression, including 't'
            when the expression depends on time

        Returns:

        value: float
            the value of the expression at env

        """

        # compile the expression the first time it is evaluated
        if self._function is None:
            self._function = sympy.lambdify(
                [sympy.Symbol(name) for name in self._arguments],
                self.node, modules="math", dummify=True)

        # look up the arguments in the order they were compiled with
        try:
            arguments = [float(env[name]) for name in self._arguments]
        except KeyError as error:
            raise EvaluationError(f"unbound symbol {error.args[0]}",
                                  stage="evaluate")

        try:
            value = self._function(*arguments)
        except ZeroDivisionError:
            raise EvaluationError(f"division by zero in {self}",
                                  stage="evaluate")
        except (ValueError, OverflowError) as error:
            raise EvaluationError(f"domain error in {self}: {error}",
                                  stage="evaluate")

        # fractional powers of negative floats silently become complex
        if isinstance(value, complex):
            raise EvaluationError(f"domain error in {self}: complex result",
                                  stage="evaluate")
        return float(value)

    def differentiate(self, symbol):
        """Exact partial derivative with respect to one symbol

        Arguments:

        symbol: str
            the name of a species, a parameter, or 't'

        Returns:

        derivative: Expr
            the symbolic derivative, constant folded by sympy

        """

        return Expr(sympy.diff(self.node, sympy.Symbol(symbol)))

    def __eq__(self, other):
        return isinstance(other, Expr) and self.node == other.node

    def __hash__(self):
        return hash(self.node)

    def __getstate__(self):
        return dict(node=self.node)

    def __setstate__(self, state):
        self.__init__(state["node"])

    def __str__(self):
        return DslPrinter().doprint(self.node)

    def __repr__(self):
        return f"Expr({self})"


def eval_expr(expression, env):
    """Evaluate a rate expression at an environment of symbol values,
    raising EvaluationError on division by zero or on log / sqrt
    of a non-positive value

    """

    return expression.evaluate(env)


def differentiate(expression, symbol):
    """Exact symbolic derivative of a rate expression, repeated
    application yields the second partials of the rate laws

    """

    return expression.differentiate(symbol)


def is_finite_real(node):
    """True when constant folding left no infinities, nans or imaginary
    units inside an expression tree

    """

    return not node.has(sympy.zoo, sympy.nan, sympy.oo, -sympy.oo, sympy.I)
