from lna_fim.registration import registry, register, make, spec
from lna_fim.experiment import Experiment
from lna_fim.networks import parse_model, format_model, ParameterPoint
from lna_fim.engine import SolverConfig, InitialCondition
from lna_fim.observations import ObservationDesign
from lna_fim.fisher import FimReport


__version__ = "0.1.0"


# observation settings shared by the gene expression experiments
GENE_DESIGN = dict(delta=1.0, count=50, observed=["p"])


# a 5 fold increased initial mean and 25 fold increased initial variance
PERTURBED_INIT = dict(mode="stationary", mean_scale=5, variance_scale=25)


# the p53 experiments start at the stationary state, the guess keeps the
# fixed point solver away from the root with negative copy numbers
P53_INIT = dict(mode="stationary", guess=[30.0, 45.0, 45.0])


register('GeneExpression-TS-v0',
         'gene_expression.net',
         'gene_expression_a.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="TS",
             sigma_eps2=0.0,
             init=dict(mode="stationary"),
             **GENE_DESIGN))


register('GeneExpression-TP-v0',
         'gene_expression.net',
         'gene_expression_a.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="TP",
             sigma_eps2=0.0,
             init=dict(mode="stationary"),
             **GENE_DESIGN))


register('GeneExpression-DT-v0',
         'gene_expression.net',
         'gene_expression_a.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="DT",
             sigma_eps2=1.0,
             init=dict(mode="stationary"),
             **GENE_DESIGN))


register('GenePerturbed-TS-v0',
         'gene_expression.net',
         'gene_expression_a.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="TS",
             sigma_eps2=0.0,
             init=PERTURBED_INIT,
             **GENE_DESIGN))


register('GenePerturbed-TP-v0',
         'gene_expression.net',
         'gene_expression_a.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="TP",
             sigma_eps2=0.0,
             init=PERTURBED_INIT,
             **GENE_DESIGN))


register('GenePerturbed-DT-v0',
         'gene_expression.net',
         'gene_expression_a.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="DT",
             sigma_eps2=1.0,
             init=PERTURBED_INIT,
             **GENE_DESIGN))


register('P53-TS-v0',
         'p53.net',
         'p53.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="TS",
             delta=1.0,
             count=30,
             observed=["p", "y0", "y"],
             sigma_eps2=0.0,
             init=P53_INIT))


register('P53-TP-v0',
         'p53.net',
         'p53.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="TP",
             delta=1.0,
             count=30,
             observed=["p", "y0", "y"],
             sigma_eps2=0.0,
             init=P53_INIT))


register('P53-DT-v0',
         'p53.net',
         'p53.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="DT",
             delta=1.0,
             count=30,
             observed=["p", "y0", "y"],
             sigma_eps2=1.0,
             init=P53_INIT),

         # keyword arguments for the integrator
         solver_kwargs=dict(
             rtol=1e-8,
             atol=1e-10))


register('BirthDeath-TS-v0',
         'birth_death.net',
         'birth_death.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="TS",
             delta=0.5,
             count=10,
             observed=["x"],
             sigma_eps2=0.0,
             init=dict(mode="stationary")))


register('BirthDeath-TP-v0',
         'birth_death.net',
         'birth_death.json',

         # keyword arguments for building the design
         design_kwargs=dict(
             regime="TP",
             delta=0.5,
             count=10,
             observed=["x"],
             sigma_eps2=0.0,
             init=dict(mode="stationary")))
