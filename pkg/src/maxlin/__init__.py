"""
Recursive max-linear structural equation models on DAGs.

Coefficient matrices over the max-times semiring, max-weighted path
analysis, structure identification from a coefficient matrix, component
bounds and minimal representations, and simulation.
"""
from .dag import (
    Dag,
    ancestors,
    children,
    dag_from_reachability,
    descendants,
    is_polytree,
    is_reachability_matrix,
    parents,
    reachability_matrix,
    to_dot,
    topological_order,
    transitive_closure,
    transitive_reduction,
)
from .exceptions import CycleError, MatrixValidationError, MaxLinError, ModelError, PathLimitError
from .inference import (
    Representation,
    an_low,
    bounds,
    de_high,
    minimal_representation,
    nmw_ancestors,
    parent_representation,
    raw_bounds,
)
from .model import (
    RecursiveMLModel,
    compute_B,
    compute_B_oracle,
    compute_log_B,
    eval_max_linear,
    iter_paths,
    max_weight_by_length,
    path_weight,
)
from .paths import has_max_weighted_path_through, induced_submodel, is_max_weighted, max_weighted_polytree, through_value
from .semiring import (
    DEFAULT_TOLERANCE,
    Tolerance,
    as_matrix,
    elementwise_max,
    identity,
    matrices_close,
    max_plus_product,
    max_times_power,
    max_times_product,
)
from .simulation import NoiseSpec, SampleBatch, check_order_relations, random_model, recursive_evaluate, sample_noise, simulate
from .structure import (
    Interval,
    Validation,
    WeightSpace,
    admissible_dags,
    count_admissible_dags,
    minimum_ml_dag_from_B,
    minimum_ml_dag_from_model,
    validate_B,
    validate_on_dag,
    weight_space,
)

__version__ = "0.1.0"


def __getattr__(name):
    # estimators pull in scikit-learn; load them only on first use
    if name in ("MaxLinearSEM", "ComponentPredictor"):
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module 'maxlin' has no attribute {name!r}")
