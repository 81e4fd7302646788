from .atoms import enumerate_atoms
from .search import ScoredPattern, SynthesisConfig, synthesize_patterns
from .linear import LabelModel, train_label_model, predict, evaluate_models

__all__ = [
    "enumerate_atoms",
    "ScoredPattern",
    "SynthesisConfig",
    "synthesize_patterns",
    "LabelModel",
    "train_label_model",
    "predict",
    "evaluate_models",
]
