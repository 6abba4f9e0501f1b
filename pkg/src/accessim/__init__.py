"""Access selection and cooperation simulator for multi-operator wireless networks."""

from .model import (
    ClassRequirements,
    DemandTable,
    MetricsReport,
    OperatorLedger,
    OperatorNetwork,
    QoSRequirements,
    ReplicationResult,
    Scenario,
    ScenarioError,
    ServiceClass,
    ServiceKind,
    ServiceRequest,
    Session,
    Technology,
    TrafficProfile,
    UserPreferences,
    default_scenario,
    ensure_valid,
    load_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
    validate_scenario,
)
from .scoring import NormalizedQoS, ScoreBreakdown, candidate_score, normalize_offer, user_score
from .selection import (
    AdmissionDecision,
    Outcome,
    admit,
    feasible,
    select_serving_operator,
    transfer_objective,
)
from .engine import (
    CapacityAccountingError,
    RngStreams,
    generate_arrival,
    run_experiment,
    run_replication,
)
from .analytics import (
    BlockingStats,
    ComparisonEntry,
    CooperationComparison,
    ExchangeMatrix,
    accrue,
    blocking_stats,
    compare_cooperation,
    exchange_matrix,
    profit_stats,
    session_volume_kbytes,
)

__version__ = "0.1.0"
