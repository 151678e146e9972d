"""Exact solvers, verifiers, and counterexample generators for resource buying games."""

from .convex import (
    marginal_cost_payments,
    network_best_response,
    pne_by_marginal_pricing,
    sequential_insertion,
)
from .errors import (
    CapacityError,
    GameError,
    InputError,
    InvariantViolationError,
    SchemaError,
    UnsupportedClassError,
)
from .gallery import (
    AntichainWitness,
    build_no_pne_game,
    diamond_connection,
    fig1a,
    nonmatroid_witness,
)
from .matroid_solver import AlgorithmTrace, solve_unweighted_matroid
from .matroids import (
    CutCertificate,
    ExplicitBasesMatroid,
    FreeMatroid,
    GraphicMatroid,
    Matroid,
    MatroidView,
    PartitionMatroid,
    UniformMatroid,
    contract,
    delete,
    enumerate_bases,
    exchange_set,
    is_basis,
    is_coloop,
    is_cut,
    max_bottleneck_min_cut,
    min_weight_basis,
    rank,
    validate_explicit_bases,
)
from .model import (
    Arc,
    ConfigurationProfile,
    CostFunction,
    ExplicitAntichain,
    GameInstance,
    Graph,
    INFINITE_COST,
    NetworkTerminals,
    PaymentMatrix,
    Player,
    Resource,
    StrategyProfile,
    classify_marginal,
    load,
    private_cost,
    social_cost,
    validate_profile,
)
from .support import (
    DeltaTable,
    FixedSet,
    check_supportable_matroid,
    construct_payments,
    delta_table,
    fixed_elements,
    social_optimum_bruteforce,
    solve_weighted_matroid,
)
from .verify import (
    SupportabilityResult,
    VerificationReport,
    best_response,
    pne_exists_exhaustive,
    supportable,
    verify_pne,
)
