"""Agent-based simulation and mean-field theory of communication bootstrapped by statistical learning."""

__version__ = "0.1.0"

from .attention import (
    AttentionDraw,
    AttentionParams,
    concentration_from_certainty,
    estimate_alignment,
    estimate_certainty,
    sample_attention_pair,
)
from .errors import ConfigError, UndefinedStatisticError
from .memory import (
    AssociationMemory,
    InteractionHistoryEntry,
    batch_posterior_predictive,
    interpretation_distribution,
    production_distribution,
    record_interaction,
)
from .experiment import ExperimentConfig, load_config, run_experiment, sweep
from .metrics import (
    MetricsRecord,
    blind_success,
    communicative_gain,
    dominance_profile,
    signal_variability,
)
from .society import InteractionRecord, SocietyConfig, SocietyState, init_society, run, step
from .theory import (
    RegimeReport,
    classify_regime,
    communicative_fixed_point,
    dominant_count_pmf,
    predicted_gain,
    symmetric_rhs,
    threshold_gamma,
    two_agent_dynamics,
    variability_estimate,
)

