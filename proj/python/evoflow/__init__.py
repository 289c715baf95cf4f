"""Grammar-guided evolutionary search over machine-learning workflows."""

from ._core import (
    ConfigError,
    DataError,
    EngineConfig,
    GrammarError,
    balanced_accuracy,
    default_grammar,
    ensemble_predict,
    lint_grammar,
    macro_f1,
    run_search,
    sample_workflow,
    stratified_kfold,
)

__all__ = [
    "ConfigError",
    "DataError",
    "EngineConfig",
    "GrammarError",
    "balanced_accuracy",
    "default_grammar",
    "ensemble_predict",
    "lint_grammar",
    "macro_f1",
    "run_search",
    "sample_workflow",
    "stratified_kfold",
]
