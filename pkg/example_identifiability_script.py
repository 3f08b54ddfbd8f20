import lna_fim
import numpy as np
from lna_fim.analytic import scale_to_correlation, gene_expression_moments


if __name__ == "__main__":

    parameter_sets = ["gene_expression_a.json", "gene_expression_b.json",
                      "gene_expression_c.json", "gene_expression_d.json"]

    all_log_det = []

    for parameters in parameter_sets:

        experiment = lna_fim.make(
            'GeneExpression-TS-v0',

            parameters=parameters,

            design_kwargs=dict(
                delta=1.0,
                count=50,
                observed=["p"]),

            solver_kwargs=dict(
                rtol=1e-8,
                atol=1e-10))

        theta = dict(zip(experiment.network.parameters,
                         experiment.point.values))
        correlation = gene_expression_moments(**theta).correlation

        for regime in ["TS", "TP", "DT"]:
            report = experiment.with_regime(
                regime, sigma_eps2=1.0 if regime == "DT" else None).report()
            print(parameters, regime, f"rho_rp={correlation:.3f}",
                  f"rank={report.rank}", f"log_det={report.log_det:.4g}")

        all_log_det.append(experiment.report().log_det)

    best_parameters = parameter_sets[np.argmax(np.array(all_log_det))]
    print("most informative time series:", best_parameters)

    # the same means at a stronger RNA-protein correlation
    theta = dict(zip(experiment.network.parameters, experiment.point.values))
    scaled = lna_fim.make('GeneExpression-TS-v0',
                          parameters=scale_to_correlation(theta, 0.8))
    print("rho_rp=0.8", "rank={}".format(scaled.report().rank))
