"""Artificial Age Score: an entropy-informed, bounded log penalty on recall."""

from .estimator import AgeScoreTransformer
from .exceptions import AASError, DomainError, RecordParseError, ValidationError
from .info_theory import (
    ProbabilityDistribution,
    empirical_distribution,
    entropy,
    max_entropy,
    normalized_entropy,
    redundancy,
)
from .kernel import DEFAULT_EPSILON, KernelConfig, derivative_bounds, phi, phi_derivative, phi_sup
from .protocol import ProtocolSpec, canonical_phase1, canonical_phase2, simulate
from .records import dump_records, parse_records
from .score import (
    ChannelObservation,
    ScoreBounds,
    SessionScore,
    TermContribution,
    aas,
    aas_incremental,
    bounds,
    partition_score,
    term,
    transfer_weights,
    weight_transfer_effect,
)
from .session import (
    PhaseSummary,
    RecallRecord,
    ScoreConfig,
    aggregate,
    expected_mean,
    grade,
    score_phase,
    score_session,
)

__version__ = "0.1.0"
