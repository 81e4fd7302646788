"""teachloop: an interactive machine-teaching workbench.

Learn human-readable pattern rules from text annotations, probe the model's
decision boundary with generated counterfactual sentences, and render
word-level diffs so a human can label counterfactuals in batch and steer
retraining.
"""

__version__ = "0.1.0"
