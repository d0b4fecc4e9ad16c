"""Minibatch training with Adam, LR decay, early stopping, and epoch reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergenceError, EmptyDataError, ParseError, ShapeError, ValidationError
from ..features import ScalerParams, WindowSet
from .network import Mode, backward_batch, forward_batch, make_dropout_masks
from .optimizer import AdamState, adam_step, clip_gradients, lr_schedule
from .params import (DEFAULT_DROPOUT_RATE, DEFAULT_HIDDEN_SIZES, LstmModel,
                     init_model)

MAX_GRAD_NORM = 5.0

TRAIN_REPORT_HEADER = "epoch,train_mse,val_mse,lr"


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    decay_rate: float = 0.01
    max_epochs: int = 200
    patience: int = 10
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if not 0 < self.beta1 < self.beta2 < 1:
            raise ValidationError("betas must satisfy 0 < beta1 < beta2 < 1")
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be positive")
        if self.decay_rate < 0:
            raise ValidationError("decay_rate must be non-negative")
        if self.max_epochs < 1 or self.patience < 1 or self.batch_size < 1:
            raise ValidationError("max_epochs, patience, and batch_size must be >= 1")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_mse: float
    val_mse: float
    lr: float


@dataclass
class TrainReport:
    epochs: list[EpochRecord] = field(default_factory=list)
    stopped_epoch: int = 0
    best_epoch: int = 0

    def to_csv(self) -> str:
        lines = [TRAIN_REPORT_HEADER]
        for rec in self.epochs:
            lines.append(f"{rec.epoch},{rec.train_mse!r},{rec.val_mse!r},{rec.lr!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "TrainReport":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != TRAIN_REPORT_HEADER:
            raise ParseError(f"expected header {TRAIN_REPORT_HEADER!r}", line=1)
        epochs = []
        for lineno, line in enumerate(lines[1:], start=2):
            parts = line.split(",")
            if len(parts) != 4:
                raise ParseError(f"expected 4 fields, got {len(parts)}", line=lineno)
            try:
                epochs.append(EpochRecord(int(parts[0]), float(parts[1]),
                                          float(parts[2]), float(parts[3])))
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
        if not epochs:
            raise EmptyDataError("report has no epochs")
        best = min(epochs, key=lambda r: r.val_mse).epoch
        return cls(epochs=epochs, stopped_epoch=epochs[-1].epoch, best_epoch=best)


def evaluate(model: LstmModel, windows: WindowSet, batch_size: int = 256) -> float:
    """Infer-mode MSE over a window set."""
    n = len(windows)
    if n == 0:
        raise EmptyDataError("cannot evaluate on an empty window set")
    sse = 0.0
    for start in range(0, n, batch_size):
        batch = windows.inputs[start:start + batch_size]
        preds, _ = forward_batch(batch, model, Mode.INFER)
        diff = preds - windows.targets[start:start + batch_size]
        sse += float(diff @ diff)
    return sse / n


def predict_windows(model: LstmModel, windows: WindowSet, batch_size: int = 256) -> np.ndarray:
    """Infer-mode predictions for every window, in order."""
    n = len(windows)
    out = np.empty(n)
    for start in range(0, n, batch_size):
        preds, _ = forward_batch(windows.inputs[start:start + batch_size], model, Mode.INFER)
        out[start:start + len(preds)] = preds
    return out


def train(
    windows: WindowSet,
    val_windows: WindowSet,
    config: TrainConfig,
    *,
    model: LstmModel | None = None,
    hidden_sizes: tuple[int, ...] = DEFAULT_HIDDEN_SIZES,
    dropout_rate: float = DEFAULT_DROPOUT_RATE,
    scaler: ScalerParams | None = None,
    feature_names: tuple[str, ...] = (),
) -> tuple[LstmModel, TrainReport]:
    """Fit on `windows`, early-stop on `val_windows`, return the best snapshot.

    All randomness (init, shuffles, dropout masks) is drawn from one generator
    seeded with config.seed, so identical inputs give identical results.
    """
    if len(windows) == 0 or len(val_windows) == 0:
        raise EmptyDataError("training and validation window sets must be non-empty")
    if windows.lookback != val_windows.lookback:
        raise ShapeError("train and validation lookbacks differ")
    if windows.inputs.shape[2] != val_windows.inputs.shape[2]:
        raise ShapeError("train and validation column counts differ")

    rng = np.random.default_rng(config.seed)
    if model is None:
        model = init_model(
            input_size=windows.inputs.shape[2],
            lookback=windows.lookback,
            rng=rng,
            hidden_sizes=hidden_sizes,
            dropout_rate=dropout_rate,
            scaler=scaler,
            feature_names=feature_names,
        )

    params = model.parameters()
    adam = AdamState.init_like(params)
    n = len(windows)
    step_t = 0
    best_val = math.inf
    best_epoch = 0
    best_params = model.copy_parameters()
    waited = 0
    records: list[EpochRecord] = []

    for epoch_idx in range(config.max_epochs):
        epoch = epoch_idx + 1
        lr = lr_schedule(config.learning_rate, config.decay_rate, epoch_idx)
        order = rng.permutation(n)
        sse = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            batch_x = windows.inputs[idx]
            batch_y = windows.targets[idx]
            masks = make_dropout_masks(model, len(idx), rng)
            preds, fwd_cache = forward_batch(batch_x, model, Mode.TRAIN, masks)
            diff = preds - batch_y
            # Overflow to inf is the divergence signal itself, not a fault.
            with np.errstate(over="ignore"):
                batch_sse = float(diff @ diff)
            if not math.isfinite(batch_sse):
                raise DivergenceError("training loss is non-finite", epoch=epoch)
            sse += batch_sse
            dpred = (2.0 / len(idx)) * diff
            grads = backward_batch(fwd_cache, dpred)
            grads, _ = clip_gradients(grads, MAX_GRAD_NORM)
            step_t += 1
            new_params, adam = adam_step(
                params, grads, adam, step_t, lr,
                beta1=config.beta1, beta2=config.beta2, epsilon=config.epsilon)
            model.set_parameters(new_params)

        train_mse = sse / n
        val_mse = evaluate(model, val_windows, config.batch_size)
        if not math.isfinite(val_mse):
            raise DivergenceError("validation loss is non-finite", epoch=epoch)
        records.append(EpochRecord(epoch=epoch, train_mse=train_mse,
                                   val_mse=val_mse, lr=lr))

        if val_mse < best_val:
            best_val = val_mse
            best_epoch = epoch
            best_params = model.copy_parameters()
            waited = 0
        else:
            waited += 1
            if waited >= config.patience:
                break

    model.set_parameters(best_params)
    report = TrainReport(epochs=records, stopped_epoch=records[-1].epoch,
                         best_epoch=best_epoch)
    return model, report
