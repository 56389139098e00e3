"""Continued fraction regression with a memetic trainer.

The package fits regressors of the form

    f(x) = g0(x) + h0(x) / (g1(x) + h1(x) / (g2(x) + ...))

with affine terms, trained by a population search with Nelder-Mead
refinement and deepened one subfraction at a time.  Around the core model
it provides feature selection (correlation ranking and repeated-subsample
lasso), linear baselines, external prediction import, and rank-based
multi-method comparison statistics (Friedman test, Nemenyi critical
difference).
"""

from .baselines import (ImportedPredictions, LinearModel, export_predictions,
                        import_predictions, ols_fit, run_records_from_predictions)
from .data import Dataset, load_dataset, save_dataset
from .errors import ModelDocumentError, SchemaError
from .features import (LassoResult, counts_to_percentages, date_bins, lasso_fit,
                       lasso_lambda_max, lasso_objective, lasso_selection_protocol,
                       pearson_rank)
from .generators import gen_sinc, gen_sparse_linear
from .harness import run_benchmark, run_ood
from .itercfr import fit
from .memetic import Agent, MAConfig, evolve, fitness
from .model import (GUARD, ContinuedFractionModel, EvalReport, LinearTerm,
                    deserialize, evaluate, extend_depth, model_from_weights, mse,
                    serialize, weights)
from .reports import format_model
from .simplex import SimplexConfig, minimize
from .stats import (DescribeRow, FirstPlaceRow, PosthocResult, RankMatrix, RunRecord,
                    build_rank_matrix, describe, first_place_table, friedman_test,
                    load_run_records, nemenyi_cd, out_of_domain_split, posthoc_pairwise,
                    rank_methods, save_run_records, split_80_20)

__version__ = "0.1.0"

__all__ = [
    "ContinuedFractionModel", "LinearTerm", "EvalReport", "GUARD",
    "evaluate", "mse", "serialize", "deserialize", "weights",
    "model_from_weights", "extend_depth", "format_model",
    "SimplexConfig", "minimize",
    "MAConfig", "Agent", "fitness", "evolve",
    "fit",
    "Dataset", "load_dataset", "save_dataset",
    "SchemaError", "ModelDocumentError",
    "LassoResult", "counts_to_percentages", "pearson_rank", "lasso_fit",
    "lasso_objective", "lasso_lambda_max", "lasso_selection_protocol", "date_bins",
    "LinearModel", "ols_fit", "ImportedPredictions", "import_predictions",
    "export_predictions", "run_records_from_predictions",
    "RunRecord", "RankMatrix", "DescribeRow", "PosthocResult", "FirstPlaceRow",
    "split_80_20", "out_of_domain_split", "describe", "rank_methods",
    "build_rank_matrix", "friedman_test", "nemenyi_cd", "posthoc_pairwise",
    "first_place_table", "save_run_records", "load_run_records",
    "gen_sinc", "gen_sparse_linear",
    "run_benchmark", "run_ood",
    "__version__",
]
