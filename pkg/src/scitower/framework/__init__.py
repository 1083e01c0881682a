"""Finite-instance SCI machinery: problems, algorithms, trees, weak towers."""
from .problems import (AlgorithmVerdict, ConsistencyVerdict, Factorization,
                       FiniteProblem, HeightZeroAlgorithm, QueryPolicy, check_consistency,
                       check_general_algorithm, check_pairs, factorize,
                       finite_query_factorization, random_problem, inseparable_pair_problem,
                       separates_fibers)
from .trees import (FiberFormula, Leaf, Literal, Test, decision_tree_eval, fiber_formula,
                    sign_tree)
from .weak_hansen import (DeepEstimator, IntermediateEstimator, Violation,
                          check_deep_estimator, truncation_limits, violation_finder,
                          weak_hansen_instance)

__all__ = [
    "AlgorithmVerdict", "ConsistencyVerdict", "Factorization", "FiniteProblem",
    "HeightZeroAlgorithm", "QueryPolicy", "check_consistency", "check_general_algorithm",
    "check_pairs", "factorize", "finite_query_factorization", "random_problem",
    "inseparable_pair_problem", "separates_fibers", "FiberFormula", "Leaf", "Literal", "Test",
    "decision_tree_eval", "fiber_formula", "sign_tree", "DeepEstimator",
    "IntermediateEstimator", "Violation", "check_deep_estimator", "truncation_limits",
    "violation_finder", "weak_hansen_instance",
]
