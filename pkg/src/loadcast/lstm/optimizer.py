"""Adam with bias correction, time-based learning-rate decay, gradient clipping."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError, ValidationError


@dataclass
class AdamState:
    """First and second moment estimates, one pair per parameter tensor."""

    m: list[np.ndarray]
    v: list[np.ndarray]

    @classmethod
    def init_like(cls, params: list[np.ndarray]) -> "AdamState":
        return cls(m=[np.zeros_like(p) for p in params],
                   v=[np.zeros_like(p) for p in params])


def adam_step(
    params: list[np.ndarray],
    grads: list[np.ndarray],
    state: AdamState,
    t: int,
    lr: float,
    *,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> tuple[list[np.ndarray], AdamState]:
    """One Adam update (t counts steps from 1). Returns new params and state.

    w <- w - lr * mhat / (sqrt(vhat) + eps), with mhat/vhat the
    bias-corrected moments.
    """
    if t < 1:
        raise ValidationError("step counter t starts at 1")
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ShapeError("params, grads, and moments must align")
    new_params: list[np.ndarray] = []
    new_m: list[np.ndarray] = []
    new_v: list[np.ndarray] = []
    bc1 = 1.0 - beta1 ** t
    bc2 = 1.0 - beta2 ** t
    for p, grad, m, v in zip(params, grads, state.m, state.v):
        if p.shape != grad.shape:
            raise ShapeError(f"gradient shape {grad.shape} does not match parameter {p.shape}")
        m2 = beta1 * m + (1.0 - beta1) * grad
        v2 = beta2 * v + (1.0 - beta2) * grad * grad
        mhat = m2 / bc1
        vhat = v2 / bc2
        new_params.append(p - lr * mhat / (np.sqrt(vhat) + epsilon))
        new_m.append(m2)
        new_v.append(v2)
    return new_params, AdamState(m=new_m, v=new_v)


def lr_schedule(base_lr: float, decay_rate: float, epoch: int) -> float:
    """Time-based decay: lr / (1 + decay * epoch), epoch counted from 0."""
    if epoch < 0:
        raise ValidationError("epoch must be non-negative")
    return base_lr / (1.0 + decay_rate * epoch)


def global_norm(grads: list[np.ndarray]) -> float:
    total = 0.0
    for grad in grads:
        total += float(np.sum(grad * grad))
    return math.sqrt(total)


def clip_gradients(grads: list[np.ndarray], max_norm: float) -> tuple[list[np.ndarray], float]:
    """Scale all gradients by max_norm/||g|| when the global norm exceeds it."""
    norm = global_norm(grads)
    if norm <= max_norm or norm == 0.0:
        return grads, norm
    scale = max_norm / norm
    return [grad * scale for grad in grads], norm
