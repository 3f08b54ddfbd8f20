"""Parser for the line-oriented reaction network language

    # gene expression
    species r p
    params  k_r k_p g_r g_p
    reaction 0 -> r        @ k_r
    reaction r -> r + p    @ k_p * r
    reaction r -> 0        @ g_r * r
    reaction p -> 0        @ g_p * p

Reaction sides are sums of integer-weighted species ('2*p' or '2 p'),
'0' is the empty side, and '@' introduces the rate expression, which
uses the usual precedence ('^' above unary minus above '*' and '/'
above '+' and '-'), parentheses and the functions exp, log and sqrt.

"""

from lna_fim.networks.expressions import Expr, DslPrinter, FUNCTIONS
from lna_fim.networks.expressions import TIME, is_finite_real
from lna_fim.networks.reaction_network import ReactionNetwork
from lna_fim.errors import ParseError
from collections import namedtuple
import numpy as np
import sympy
import keyword
import re


# the lexical tokens of a single line
TOKEN_PATTERN = re.compile(r"""
    (?P<number>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<op>[-+*/^(),@])
  | (?P<space>\s+)
  | (?P<comment>\#.*)
""", re.VERBOSE)


# keywords that begin a statement
STATEMENTS = {"species", "params", "parameters", "reaction"}


# names that cannot be used for species or parameters
RESERVED = STATEMENTS | set(FUNCTIONS) | {TIME.name}


Token = namedtuple("Token", ["kind", "text", "line", "column"])


def tokenize(line_text, line):
    """Split one line of model source into tokens, dropping whitespace
    and comments

    """

    tokens, position = [], 0
    while position < len(line_text):
        match = TOKEN_PATTERN.match(line_text, position)
        if match is None:
            raise ParseError(f"unexpected character "
                             f"'{line_text[position]}'",
                             line, position + 1)
        if match.lastgroup not in ("space", "comment"):
            tokens.append(Token(match.lastgroup, match.group(),
                                line, position + 1))
        position = match.end()
    return tokens


class ExpressionParser(object):

    def __init__(self, tokens, symbols):
        """Recursive descent parser for one rate expression

        Arguments:

        tokens: List[Token]
            the tokens following '@' on a reaction line
        symbols: Dict[str, sympy.Symbol]
            the declared species and parameter symbols plus 't'

        """

        self.tokens = tokens
        self.symbols = symbols
        self.position = 0

    def peek(self):
        if self.position < len(self.tokens):
            return self.tokens[self.position]
        return None

    def advance(self):
        token = self.peek()
        self.position += 1
        return token

    def error(self, message, token=None):
        token = token or self.peek() or self.tokens[-1]
        return ParseError(message, token.line, token.column)

    def expect(self, text):
        token = self.peek()
        if token is None or token.text != text:
            raise self.error(f"expected '{text}'")
        return self.advance()

    def parse(self):
        if not self.tokens:
            raise ParseError("empty rate expression")
        node = self.parse_sum()
        if self.peek() is not None:
            raise self.error(f"unexpected '{self.peek().text}'")
        if not is_finite_real(node):
            raise self.error("expression folds to a non-finite "
                             "or complex constant", self.tokens[0])
        return node

    def parse_sum(self):
        node = self.parse_product()
        while self.peek() is not None and self.peek().text in ("+", "-"):
            if self.advance().text == "+":
                node = node + self.parse_product()
            else:
                node = node - self.parse_product()
        return node

    def parse_product(self):
        node = self.parse_unary()
        while self.peek() is not None and self.peek().text in ("*", "/"):
            if self.advance().text == "*":
                node = node * self.parse_unary()
            else:
                node = node / self.parse_unary()
        return node

    def parse_unary(self):
        if self.peek() is not None and self.peek().text == "-":
            self.advance()
            return -self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_primary()
        if self.peek() is not None and self.peek().text == "^":
            caret = self.advance()
            exponent = self.parse_unary()

            # constant exponents keep every derivative rule total
            if exponent.free_symbols:
                raise self.error("exponent must be a constant", caret)
            return sympy.Pow(base, exponent)
        return base

    def parse_primary(self):
        token = self.advance()
        if token is None:
            raise self.error("unexpected end of expression")

        if token.kind == "number":
            return sympy.Rational(token.text)

        if token.kind == "name" and token.text in FUNCTIONS:
            self.expect("(")
            argument = self.parse_sum()
            self.expect(")")
            return FUNCTIONS[token.text](argument)

        if token.kind == "name":
            if token.text not in self.symbols:
                raise self.error(f"undeclared symbol {token.text}", token)
            return self.symbols[token.text]

        if token.text == "(":
            node = self.parse_sum()
            self.expect(")")
            return node

        raise self.error(f"unexpected '{token.text}'", token)


def parse_side(tokens, species):
    """Parse one side of a reaction into a vector of multiplicities"""

    counts = np.zeros(len(species), dtype=int)
    if len(tokens) == 1 and tokens[0].text == "0":
        return counts

    # split the side into '+' separated terms
    terms, current = [], []
    for token in tokens:
        if token.text == "+":
            terms.append(current)
            current = []
        else:
            current.append(token)
    terms.append(current)

    for term in terms:
        if not term:
            anchor = tokens[0] if tokens else None
            raise ParseError("empty term in reaction side",
                             anchor.line if anchor else None,
                             anchor.column if anchor else None)

        # a term is 'name', 'k name' or 'k * name'
        coefficient, name = 1, term[-1]
        prefix = [t for t in term[:-1] if t.text != "*"]
        if len(prefix) > 1 or len(term) > 3:
            raise ParseError("malformed reaction term",
                             term[0].line, term[0].column)
        if prefix:
            if prefix[0].kind != "number" \
                    or not prefix[0].text.isdigit() \
                    or int(prefix[0].text) == 0:
                raise ParseError("stoichiometric coefficients must be "
                                 "positive integers",
                                 prefix[0].line, prefix[0].column)
            coefficient = int(prefix[0].text)
        if name.kind != "name":
            raise ParseError(f"expected a species, found '{name.text}'",
                             name.line, name.column)
        if name.text not in species:
            raise ParseError(f"undeclared symbol {name.text}",
                             name.line, name.column)
        counts[species.index(name.text)] += coefficient
    return counts


def declare(tokens, species, parameters):
    """Validate the names of a species or params statement"""

    names = []
    for token in tokens:
        if token.kind != "name":
            raise ParseError(f"expected a name, found '{token.text}'",
                             token.line, token.column)
        if token.text in RESERVED or keyword.iskeyword(token.text):
            raise ParseError(f"reserved name {token.text}",
                             token.line, token.column)
        if token.text in species or token.text in parameters \
                or token.text in names:
            raise ParseError(f"duplicate name {token.text}",
                             token.line, token.column)
        names.append(token.text)
    return names


def parse_model(text):
    """Parse model source text into a ReactionNetwork

    Arguments:

    text: str
        UTF-8 model source in the reaction network language

    Returns:

    network: ReactionNetwork
        a network whose species and parameter orders follow their
        declaration order and whose stoichiometry is assembled from the
        reactant and product multiplicities

    """

    species, parameters = [], []
    reactants, products, rates = [], [], []

    for line, line_text in enumerate(text.splitlines(), start=1):
        tokens = tokenize(line_text, line)
        if not tokens:
            continue

        head, rest = tokens[0], tokens[1:]
        if head.text not in STATEMENTS:
            raise ParseError(f"unknown statement '{head.text}'",
                             head.line, head.column)

        # declarations may appear on several lines
        if head.text == "species":
            species.extend(declare(rest, species, parameters))
            continue
        if head.text in ("params", "parameters"):
            parameters.extend(declare(rest, species, parameters))
            continue

        # a reaction is 'lhs -> rhs @ expression'
        arrows = [i for i, t in enumerate(rest) if t.kind == "arrow"]
        ats = [i for i, t in enumerate(rest) if t.text == "@"]
        if len(arrows) != 1 or len(ats) != 1 or ats[0] < arrows[0]:
            raise ParseError("a reaction must read 'lhs -> rhs @ rate'",
                             head.line, head.column)
        arrow, at = arrows[0], ats[0]
        if arrow == 0 or at == arrow + 1:
            raise ParseError("reaction sides must not be empty "
                             "(use 0 for nothing)", head.line, head.column)

        reactant = parse_side(rest[:arrow], species)
        product = parse_side(rest[arrow + 1:at], species)
        if np.array_equal(reactant, product):
            raise ParseError("reaction has an all-zero stoichiometry column",
                             head.line, head.column)

        symbols = {name: sympy.Symbol(name)
                   for name in species + parameters}
        symbols[TIME.name] = TIME
        rate_tokens = rest[at + 1:]
        if not rate_tokens:
            raise ParseError("empty rate expression",
                             rest[at].line, rest[at].column)
        rates.append(Expr(ExpressionParser(rate_tokens, symbols).parse()))
        reactants.append(reactant)
        products.append(product)

    if not species:
        raise ParseError("no species declared")
    if not rates:
        raise ParseError("no reactions declared")

    return ReactionNetwork(species, parameters,
                           np.stack(reactants, axis=1),
                           np.stack(products, axis=1), rates)


def format_side(counts, species):
    terms = [(name if c == 1 else f"{c}*{name}")
             for c, name in zip(counts, species) if c]
    return " + ".join(terms) if terms else "0"


def format_model(network):
    """Print a ReactionNetwork back into model source that parses to an
    identical network

    """

    printer = DslPrinter()
    lines = ["species " + " ".join(network.species)]
    if network.parameters:
        lines.append("params " + " ".join(network.parameters))
    for j, rate in enumerate(network.rates):
        lines.append("reaction {} -> {} @ {}".format(
            format_side(network.reactants[:, j], network.species),
            format_side(network.products[:, j], network.species),
            printer.doprint(rate.node)))
    return "\n".join(lines) + "\n"
