"""Toolkit for building, serving, and scoring memory-load entailment suites.

The pipeline has three legs: generate a counterbalanced item set from a
verb/noun lexicon and a bank of vetted premises, run a timed yes/no
annotation experiment over HTTP, and score the collected responses
against gold labels or model predictions.
"""

__version__ = "0.1.0"
