"""Permutation-resolving losses for source separation: PIT, SinkPIT and MCL."""
from .assignment import (
    AssignmentResult,
    TransportPlan,
    exhaustive_best_permutation,
    hungarian,
    plan_entropy,
    plan_to_permutation,
    sinkhorn,
    transport_dual,
    winners,
)
from .losses import LossKind, LossReport, mcl_loss, pit_loss, sinkpit_loss
from .metrics import auc_sdr, collapse_rate, optimal_perm_si_sdr
from .signals import CAP, cost_matrix, mix, neg_si_sdr, neg_si_sdr_grad, si_sdr
from .synth import SynthSpec, gen_scene, gen_sources
from .trainer import TrainConfig, compare_methods, train_direct

__version__ = "0.1.0"
