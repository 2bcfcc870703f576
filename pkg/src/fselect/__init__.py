"""Cramer's V based max-association / min-redundancy feature selection."""

from .association import AssociationValue, ContingencyTable, chi2, cramers_v, cvtest, gen_ct
from .bench import Timing, TimingReport, measure, run_bench
from .cv import CvCurve, FoldPlan, cv_curve, make_folds, nb_classify
from .dataset import (
    DatasetError,
    DiscreteDataset,
    DiscretizerSpec,
    RawDataset,
    discretize,
    from_codes,
    load_csv,
)
from .engine import EngineConfig, ParallelEngine, TaskBatch, par_fold
from .selector import Objective, SelectionReport, relevance_vector, score_curve, select, step_score

__version__ = "0.1.0"


def sample_csv_path() -> str:
    """Path of the bundled 150-row iris sample."""
    from importlib.resources import files

    return str(files(__name__) / "data" / "iris.csv")
