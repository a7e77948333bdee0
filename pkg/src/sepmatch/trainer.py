"""Direct optimization of free predictions against each separation loss.

There is no separator network here: the predictions themselves are the
parameters. That isolates the matching layer, which is the only thing that
differs between PIT, SinkPIT and MCL.
"""
from dataclasses import dataclass, replace
import time

import numpy as np

from .losses import LossKind, separation_loss
from .metrics import auc_from_scores, usage_collapse
from .assignment import hungarian, winners
from .signals import CAP, as_source_set, mix
from .synth import STREAM_INIT, normals

OPTIMIZERS = ("adaptive_moment", "gradient_descent")
INITS = ("mixture", "noise")


class TrainingDiverged(RuntimeError):
    def __init__(self, step, loss):
        super().__init__(f"training diverged at step {step}: loss={loss!r}")
        self.step = step
        self.loss = loss


@dataclass(frozen=True)
class TrainConfig:
    loss_kind: LossKind = LossKind.PIT_HUNGARIAN
    steps: int = 2000
    learning_rate: float = 0.02
    optimizer: str = "adaptive_moment"
    init_scale: float = 0.1
    # "mixture": mixture plus scaled noise; "noise": scaled noise around zero
    init: str = "mixture"
    seed: int = 0
    epsilon: float = 0.05
    log_every: int = 100
    # learning rate decays geometrically to lr * lr_final_ratio at the last step
    lr_final_ratio: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    zero_mean: bool = False

    def __post_init__(self):
        object.__setattr__(self, "loss_kind", LossKind.parse(self.loss_kind))
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.log_every < 1:
            raise ValueError("log_every must be >= 1")
        if self.init not in INITS:
            raise ValueError(f"init must be one of {INITS}")
        if self.init_scale < 0:
            raise ValueError("init_scale must be non-negative")

    def lr_at(self, step):
        if self.steps <= 1:
            return self.learning_rate
        return self.learning_rate * self.lr_final_ratio ** (step / (self.steps - 1))


@dataclass(frozen=True)
class TrainRecord:
    step: int
    loss: float
    si_sdr: float
    auc_sdr: float
    collapse_rate: float


@dataclass
class TrainTrajectory:
    config: TrainConfig
    records: list
    final_predictions: np.ndarray
    final_permutation: tuple
    wall_time: float = 0.0
    sinkhorn_unconverged_steps: int = 0
    # MCL winner map of the final predictions, whatever loss was trained
    final_winners: tuple = ()

    @property
    def final(self):
        return self.records[-1]

    @property
    def persistent_collapse(self):
        """MCL winners still miss some prediction at the end of training."""
        return self.records[-1].collapse_rate > 0.0

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])


def initial_predictions(targets, config):
    """Starting point for the free predictions.

    Every prediction starts as the mixture (what an untrained separator
    tends to emit) plus independent noise of ``init_scale`` times the
    target RMS. With ``init="noise"`` the mixture term is dropped.
    """
    targets = as_source_set(targets, "targets")
    rms = float(np.sqrt(np.mean(targets**2)))
    noise = config.init_scale * rms * normals(config.seed, STREAM_INIT, targets.shape)
    if config.init == "noise":
        return noise
    return mix(targets)[None, :] + noise


def _snapshot(step, loss, sdr):
    sigma = hungarian(-sdr).permutation
    scores = sdr[np.arange(len(sigma)), list(sigma)]
    won = winners(-sdr)
    usage = np.bincount(np.asarray(won), minlength=len(won))
    record = TrainRecord(step, float(loss), float(np.mean(scores)),
                         auc_from_scores(scores).auc, usage_collapse(usage))
    return record, sigma, won


def train_direct(targets, config=TrainConfig()):
    """Fit free predictions to ``targets`` with the configured loss.

    Records are taken before the first update (step 0), every ``log_every``
    updates, and after the last update. Raises ``TrainingDiverged`` if the
    loss leaves ``[-10 CAP, 10 CAP]`` or stops being finite.
    """
    targets = as_source_set(targets, "targets")
    pred = initial_predictions(targets, config)
    m = np.zeros_like(pred)
    v = np.zeros_like(pred)
    records = []
    unconverged = 0
    start = time.perf_counter()

    def check(step, loss):
        if not np.isfinite(loss) or abs(loss) > 10 * CAP or not np.all(np.isfinite(pred)):
            raise TrainingDiverged(step, loss)

    for step in range(config.steps):
        report = separation_loss(config.loss_kind, targets, pred,
                                 epsilon=config.epsilon, zero_mean=config.zero_mean)
        check(step, report.loss)
        if report.plan is not None and not report.plan.converged:
            unconverged += 1
        if step % config.log_every == 0:
            records.append(_snapshot(step, report.loss, -report.costs)[0])
        grad = report.gradient
        lr = config.lr_at(step)
        if config.optimizer == "gradient_descent":
            pred = pred - lr * grad
        else:
            t = step + 1
            m = config.beta1 * m + (1 - config.beta1) * grad
            v = config.beta2 * v + (1 - config.beta2) * grad * grad
            m_hat = m / (1 - config.beta1**t)
            v_hat = v / (1 - config.beta2**t)
            pred = pred - lr * m_hat / (np.sqrt(v_hat) + 1e-8)

    report = separation_loss(config.loss_kind, targets, pred,
                             epsilon=config.epsilon, zero_mean=config.zero_mean)
    check(config.steps, report.loss)
    record, sigma, won = _snapshot(config.steps, report.loss, -report.costs)
    records.append(record)
    return TrainTrajectory(config, records, pred, sigma,
                           time.perf_counter() - start, unconverged, won)


@dataclass(frozen=True)
class MethodSummary:
    method: LossKind
    si_sdr: float
    auc_sdr: float
    collapse_rate: float
    wall_time: float
    final_loss: float
    permutation: tuple


COMPARED = (LossKind.PIT_HUNGARIAN, LossKind.SINKPIT, LossKind.MCL)


def compare_methods(targets, base=TrainConfig(), methods=COMPARED):
    """Train each method from the same initialization and summarize the end state."""
    out = []
    for kind in methods:
        traj = train_direct(targets, replace(base, loss_kind=kind))
        last = traj.final
        out.append(MethodSummary(kind, last.si_sdr, last.auc_sdr, last.collapse_rate,
                                 traj.wall_time, last.loss, traj.final_permutation))
    return out
