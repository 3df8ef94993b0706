"""Multi-objective NM-landscapes, Boltzmann distributions and their factorizations."""
from .analysis import (
    MutualInfoMatrix,
    SimulationRecord,
    SweepConfig,
    SweepResult,
    mi_matrix,
    mutual_information,
    run_simulation,
    run_sweep,
)
from .distribution import (
    BivariateMarginal,
    DistributionTable,
    UnivariateMarginals,
    bivariate_marginal,
    boltzmann,
    product_distribution,
    univariate_marginals,
)
from .errors import MnmError, NormalizationError, ParameterError, ResourceError
from .landscape import (
    GaussianStream,
    InteractionTerm,
    NmLandscape,
    enumerate_term_sets,
    generate_landscape,
    sample_coefficient,
    truncate,
)
from .mop import (
    MnmProblem,
    ObjectiveSpec,
    ObjectiveTable,
    Transform,
    evaluate_objective,
    full_table,
    make_bi_objective,
)
from .pareto import (
    FrontComparison,
    FrontResult,
    compare_fronts,
    dominates,
    front_from_distributions,
    pareto_front,
)

__version__ = "0.1.0"
