"""Cohomological field theory layer: expression trees, theories, Q, K, d."""

from .theories import BUILTINS, Conventions, Theory, builtin_theory, with_conventions
from .evaluate import Config, EvaluationError, Evaluator, random_config
from .derivation import TreeDerivation, apply_derivation, dual_apply, k_components, q_derivation
from .actions import action_min, action_standard, gauge_fermion_min, gauge_fermion_standard
from .schema import convention_audit, dumps, theory_from_json, theory_to_json

__all__ = [
    "BUILTINS", "Conventions", "Theory", "builtin_theory", "with_conventions",
    "Config", "EvaluationError", "Evaluator", "random_config",
    "TreeDerivation", "apply_derivation", "dual_apply", "k_components", "q_derivation",
    "action_min", "action_standard", "gauge_fermion_min", "gauge_fermion_standard",
    "convention_audit", "dumps", "theory_from_json", "theory_to_json",
]
