"""rrlab: committee-model functions on downward lattice digraphs,
regressive-regularity search, and displacement-set subset-sum solving."""

from .displacement import (
    DisplacementInstance,
    Element,
    build_instance,
    delta,
    gamma,
    is_log_bounded,
    lower_sets,
)
from .errors import (
    CapExceededError,
    CommitteeError,
    ContractViolation,
    DimensionError,
    DomainError,
    EmptyDomainError,
    LogBoundError,
    NotCappedError,
    RhoViolation,
    RrlabError,
    SolverInputError,
    ValidationError,
)
from .evaluate import (
    Evaluation,
    MinRho,
    OffsetRho,
    RhoFamily,
    TableRho,
    check_jump_free_pair,
    compare_evaluations,
    eval_h_rho,
    eval_s_hat,
    phi_set,
)
from .graph import (
    DownwardGraph,
    GraphTemplate,
    Layering,
    RandomGraphTemplate,
    adjacency,
    gen_random_downward,
    induced_subgraph,
    layers,
    validate_downward,
)
from .lattice import (
    FiniteDomain,
    OrderSignature,
    Point,
    cube,
    diag,
    domain_max,
    enumerate_order_types,
    is_capped,
    max_norm,
    min_coord,
    order_signature,
    setmax,
)
from .regularity import (
    RegularityVerdict,
    RegularityWitness,
    SearchBounds,
    SearchResult,
    check_regressive_regular,
    regressive_values,
    restrict_capped,
    restrict_capped_report,
    search_regular,
)
from .selection import (
    CommitteeSpec,
    IndexRule,
    MaxRule,
    MinRule,
    SelectionRule,
    TableRule,
    apply_selection,
    committees,
    pad_committee,
)
from .solve import (
    SolveStats,
    Witness,
    bench_scaling,
    brute_solve,
    structured_solve,
    verify_witness,
)

__version__ = "0.1.0"
