from lna_fim.experiment import load_network
from lna_fim.networks.parser import parse_model
import numpy as np
import pytest


# the gene expression parameter set with g_p = 0.7
GENE_THETA = np.array([10.0, 4.0, 1.0, 0.7])


# the bundled p53 parameter point
P53_THETA = np.array([90.0, 0.05, 2.0, 5.0, 1.2, 0.8, 0.8])


# a birth process faster than death, its only fixed point x = 0 is unstable
UNSTABLE_SOURCE = """
species x
params  b d
reaction x -> 2*x   @ b * x
reaction x -> 0     @ d * x
"""


@pytest.fixture(scope="session")
def gene_network():
    return load_network("gene_expression.net")


@pytest.fixture(scope="session")
def p53_network():
    return load_network("p53.net")


@pytest.fixture(scope="session")
def birth_death_network():
    return load_network("birth_death.net")


@pytest.fixture(scope="session")
def decay_network():
    return load_network("decay.net")


@pytest.fixture(scope="session")
def unstable_network():
    return parse_model(UNSTABLE_SOURCE)


@pytest.fixture
def gene_theta():
    return GENE_THETA.copy()


@pytest.fixture
def p53_theta():
    return P53_THETA.copy()


@pytest.fixture
def unstable_files(tmp_path):
    """A model and parameter file of the unstable birth process"""

    model = tmp_path / "unstable.net"
    model.write_text(UNSTABLE_SOURCE)
    params = tmp_path / "unstable.json"
    params.write_text('{"b": 2.0, "d": 1.0}')
    return str(model), str(params)
