"""Forward and backward passes over the stacked network.

``cell_forward`` advances one layer one timestep and exists mainly as the
reference implementation of the gate equations. Training and inference go
through ``forward_batch``/``backward_batch``, which run whole windows through
the selected sequence kernels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyDataError, ShapeError, StateError
from .backend import kernels
from .kernels_py import _sigmoid
from .params import LstmLayerParams, LstmModel


class Mode(enum.Enum):
    TRAIN = "train"
    INFER = "infer"


@dataclass(frozen=True)
class LstmState:
    """Hidden and cell state for one layer, shape (hidden,) each."""

    h: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        if self.h.shape != self.c.shape or self.h.ndim != 1:
            raise ShapeError("state vectors must be 1-D and share a shape")

    @classmethod
    def zeros(cls, hidden_size: int) -> "LstmState":
        return cls(h=np.zeros(hidden_size), c=np.zeros(hidden_size))


@dataclass(frozen=True)
class CellCache:
    """Everything a single-step backward pass would need."""

    x: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    f: np.ndarray
    i: np.ndarray
    g: np.ndarray
    o: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray


def cell_forward(x: np.ndarray, state: LstmState, params: LstmLayerParams):
    """One LSTM step: returns ``(new_state, cache)``.

    f = sigmoid(W_f [h, x] + b_f)      i = sigmoid(W_i [h, x] + b_i)
    g = tanh(W_c [h, x] + b_c)         o = sigmoid(W_o [h, x] + b_o)
    c' = f * c + i * g                 h' = o * tanh(c')
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (params.input_size,):
        raise ShapeError(f"expected input of shape ({params.input_size},), got {x.shape}")
    if state.h.shape != (params.hidden_size,):
        raise ShapeError(f"expected state of shape ({params.hidden_size},), got {state.h.shape}")
    z = np.concatenate([state.h, x])
    f = _sigmoid(params.w_f @ z + params.b_f)
    i = _sigmoid(params.w_i @ z + params.b_i)
    g = np.tanh(params.w_c @ z + params.b_c)
    o = _sigmoid(params.w_o @ z + params.b_o)
    c = f * state.c + i * g
    tanh_c = np.tanh(c)
    h = o * tanh_c
    cache = CellCache(x=x, h_prev=state.h, c_prev=state.c,
                      f=f, i=i, g=g, o=o, c=c, tanh_c=tanh_c)
    return LstmState(h=h, c=c), cache


@dataclass
class ForwardCache:
    """Per-layer activations recorded by ``forward_batch``."""

    model: LstmModel
    mode: Mode
    layer_inputs: list[np.ndarray]        # input to each layer, (T, B, D_l)
    layer_h: list[np.ndarray]             # raw hidden sequences, (T, B, H_l)
    gate_caches: list[tuple]              # (f, i, g, o, c, tanh_c) per layer
    masks: list[np.ndarray] | None        # dropout masks, (T, B, H_l) per layer
    top_last: np.ndarray                  # post-dropout final-layer output at t = T-1


def make_dropout_masks(model: LstmModel, batch_size: int,
                       rng: np.random.Generator) -> list[np.ndarray]:
    """Inverted-dropout masks (entries 0 or 1/(1-p)), one per layer.

    Masks are drawn per element across timesteps, batch, and units, in layer
    order; callers relying on determinism must hand in the run's single rng.
    """
    p = model.dropout_rate
    masks = []
    for hidden in model.hidden_sizes:
        shape = (model.lookback, batch_size, hidden)
        if p == 0.0:
            masks.append(np.ones(shape))
        else:
            keep = (rng.random(shape) >= p).astype(np.float64)
            masks.append(keep / (1.0 - p))
    return masks


def forward_batch(inputs: np.ndarray, model: LstmModel, mode: Mode = Mode.INFER,
                  masks: list[np.ndarray] | None = None):
    """Run a batch of windows through the stack and the linear head.

    ``inputs`` is (B, L, D), one row per window, matching WindowSet layout.
    Returns ``(predictions, cache)`` with predictions of shape (B,).
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 3:
        raise ShapeError(f"inputs must be (batch, lookback, columns), got {inputs.shape}")
    batch, lookback, cols = inputs.shape
    if batch == 0:
        raise EmptyDataError("empty batch")
    if lookback != model.lookback:
        raise ShapeError(f"window length {lookback} does not match model lookback {model.lookback}")
    if cols != model.input_size:
        raise ShapeError(f"window has {cols} columns, model expects {model.input_size}")
    if mode is Mode.TRAIN:
        if masks is None:
            raise StateError("Train-mode forward requires dropout masks")
        if len(masks) != len(model.layers):
            raise ShapeError("need one dropout mask per layer")

    x = np.ascontiguousarray(inputs.transpose(1, 0, 2))   # (T, B, D)
    layer_inputs: list[np.ndarray] = []
    layer_h: list[np.ndarray] = []
    gate_caches: list[tuple] = []
    for idx, layer in enumerate(model.layers):
        layer_inputs.append(x)
        h, *gates = kernels.layer_forward(
            x, layer.w_f, layer.w_i, layer.w_c, layer.w_o,
            layer.b_f, layer.b_i, layer.b_c, layer.b_o)
        layer_h.append(h)
        gate_caches.append(tuple(gates))
        if mode is Mode.TRAIN:
            if masks[idx].shape != h.shape:
                raise ShapeError(f"mask {idx} has shape {masks[idx].shape}, expected {h.shape}")
            x = np.ascontiguousarray(h * masks[idx])
        else:
            x = h

    top_last = x[-1]                                       # (B, H_top)
    predictions = top_last @ model.head_w + model.head_b[0]
    cache = ForwardCache(model=model, mode=mode, layer_inputs=layer_inputs,
                         layer_h=layer_h, gate_caches=gate_caches,
                         masks=masks if mode is Mode.TRAIN else None,
                         top_last=top_last)
    return predictions, cache


def forward(window: np.ndarray, model: LstmModel) -> float:
    """Inference on a single (lookback, columns) window."""
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 2:
        raise ShapeError(f"window must be 2-D, got shape {window.shape}")
    preds, _ = forward_batch(window[np.newaxis], model, Mode.INFER)
    return float(preds[0])


def backward_batch(cache: ForwardCache, dpred: np.ndarray) -> list[np.ndarray]:
    """Gradients of a scalar loss w.r.t. every parameter.

    ``dpred`` holds d(loss)/d(prediction) per window. The returned list
    matches ``model.parameters()`` order. Dropout masks recorded on the
    forward pass are applied identically here.
    """
    if cache.mode is not Mode.TRAIN:
        raise StateError("backward requires a cache from a Train-mode forward")
    model = cache.model
    dpred = np.asarray(dpred, dtype=np.float64)
    batch = cache.top_last.shape[0]
    if dpred.shape != (batch,):
        raise ShapeError(f"dpred must have shape ({batch},), got {dpred.shape}")

    dhead_w = cache.top_last.T @ dpred
    dhead_b = np.array([dpred.sum()])

    T = model.lookback
    top_h = model.hidden_sizes[-1]
    d_out = np.zeros((T, batch, top_h))
    d_out[-1] = np.outer(dpred, model.head_w)

    layer_grads: list[list[np.ndarray]] = [None] * len(model.layers)  # type: ignore[list-item]
    for idx in range(len(model.layers) - 1, -1, -1):
        layer = model.layers[idx]
        dh = np.ascontiguousarray(d_out * cache.masks[idx])
        dx, *grads = kernels.layer_backward(
            dh, cache.layer_inputs[idx], cache.layer_h[idx],
            *cache.gate_caches[idx],
            layer.w_f, layer.w_i, layer.w_c, layer.w_o)
        layer_grads[idx] = [np.ascontiguousarray(gr) for gr in grads]
        d_out = dx

    flat: list[np.ndarray] = []
    for grads in layer_grads:
        flat.extend(grads)
    flat.extend([dhead_w, dhead_b])
    return flat


def mse(predictions: np.ndarray, targets: np.ndarray) -> float:
    predictions = np.asarray(predictions, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if predictions.shape != targets.shape:
        raise ShapeError(f"shape mismatch: {predictions.shape} vs {targets.shape}")
    if predictions.size == 0:
        raise EmptyDataError("mse of zero samples is undefined")
    diff = predictions - targets
    return float(np.mean(diff * diff))
