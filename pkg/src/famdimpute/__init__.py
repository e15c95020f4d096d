"""Single imputation of mixed continuous/categorical data by iterative FAMD."""
from .data_model import (Column, DataError, FuzzyIndicator, IndicatorExpansion, Kind,
                         MixedDataset, add_interaction, bin_continuous, decode, encode)
from .imputer import ImputationResult, ImputeConfig, Use, impute, impute_subset, initialize
from .metrics import ErrorReport, nrmse, pfc, score
from .model_selection import CvReport, cross_validate

__version__ = "0.1.0"

__all__ = [
    "Column", "CvReport", "DataError", "ErrorReport", "FuzzyIndicator", "ImputationResult",
    "ImputeConfig", "IndicatorExpansion", "Kind", "MixedDataset", "Use", "add_interaction",
    "bin_continuous", "cross_validate", "decode", "encode", "impute", "impute_subset",
    "initialize", "nrmse", "pfc", "score",
]
