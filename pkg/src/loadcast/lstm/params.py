"""Model parameter containers, initialization, and the versioned model file."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeError, ValidationError
from ..features import ScalerParams

MODEL_FORMAT_VERSION = 1

DEFAULT_HIDDEN_SIZES = (50, 50, 50, 50)
DEFAULT_DROPOUT_RATE = 0.2

# Saturating the forget gate at init keeps early gradients from vanishing
# through the cell-state chain.
FORGET_BIAS_INIT = 1.0


@dataclass
class LstmLayerParams:
    """Gate weights over the concatenation [h_prev, x] plus gate biases.

    Each weight matrix has shape (hidden, hidden + input); the first
    ``hidden`` columns act on the previous hidden state.
    """

    w_f: np.ndarray
    w_i: np.ndarray
    w_c: np.ndarray
    w_o: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray

    def __post_init__(self):
        shape = self.w_f.shape
        if len(shape) != 2:
            raise ShapeError("gate weights must be 2-D")
        for name in ("w_i", "w_c", "w_o"):
            if getattr(self, name).shape != shape:
                raise ShapeError("all four gate matrices must share one shape")
        hidden = shape[0]
        if shape[1] <= hidden:
            raise ShapeError("gate matrices must be (hidden, hidden + input) with input >= 1")
        for name in ("b_f", "b_i", "b_c", "b_o"):
            if getattr(self, name).shape != (hidden,):
                raise ShapeError(f"{name} must have shape ({hidden},)")
        for name in ("w_f", "w_i", "w_c", "w_o", "b_f", "b_i", "b_c", "b_o"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValidationError(f"{name} contains non-finite entries")

    @property
    def hidden_size(self) -> int:
        return self.w_f.shape[0]

    @property
    def input_size(self) -> int:
        return self.w_f.shape[1] - self.w_f.shape[0]

    def arrays(self) -> list[np.ndarray]:
        return [self.w_f, self.w_i, self.w_c, self.w_o,
                self.b_f, self.b_i, self.b_c, self.b_o]


@dataclass
class LstmModel:
    """Stacked-layer parameter set plus the scaler it was trained with."""

    layers: list[LstmLayerParams]
    head_w: np.ndarray
    head_b: np.ndarray  # shape (1,)
    dropout_rate: float
    lookback: int
    scaler: ScalerParams
    feature_names: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.layers:
            raise ShapeError("model needs at least one layer")
        for below, above in zip(self.layers, self.layers[1:]):
            if above.input_size != below.hidden_size:
                raise ShapeError(
                    f"layer input size {above.input_size} does not match "
                    f"previous hidden size {below.hidden_size}"
                )
        if self.head_w.shape != (self.layers[-1].hidden_size,):
            raise ShapeError("head weights must match the final hidden size")
        if self.head_b.shape != (1,):
            raise ShapeError("head bias must have shape (1,)")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValidationError("dropout_rate must be in [0, 1)")
        if self.lookback < 1:
            raise ValidationError("lookback must be positive")
        if self.scaler.n_columns != self.input_size:
            raise ShapeError(
                f"scaler has {self.scaler.n_columns} columns, model input is {self.input_size}"
            )

    @property
    def input_size(self) -> int:
        return self.layers[0].input_size

    @property
    def hidden_sizes(self) -> tuple[int, ...]:
        return tuple(layer.hidden_size for layer in self.layers)

    def parameters(self) -> list[np.ndarray]:
        """All parameter tensors in declared order (per layer: w_f, w_i,
        w_c, w_o, b_f, b_i, b_c, b_o; then head_w, head_b)."""
        out: list[np.ndarray] = []
        for layer in self.layers:
            out.extend(layer.arrays())
        out.extend([self.head_w, self.head_b])
        return out

    def set_parameters(self, arrays: list[np.ndarray]):
        current = self.parameters()
        if len(arrays) != len(current):
            raise ShapeError(f"expected {len(current)} tensors, got {len(arrays)}")
        for tgt, src in zip(current, arrays):
            if tgt.shape != src.shape:
                raise ShapeError(f"shape mismatch {src.shape} vs {tgt.shape}")
            tgt[...] = src

    def copy_parameters(self) -> list[np.ndarray]:
        return [p.copy() for p in self.parameters()]


def parameter_names(model: LstmModel) -> list[str]:
    names = []
    for idx in range(len(model.layers)):
        for part in ("w_f", "w_i", "w_c", "w_o", "b_f", "b_i", "b_c", "b_o"):
            names.append(f"layer{idx}.{part}")
    names.extend(["head_w", "head_b"])
    return names


def _glorot(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    fan_out, fan_in = shape
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def init_layer(rng: np.random.Generator, input_size: int, hidden_size: int) -> LstmLayerParams:
    shape = (hidden_size, hidden_size + input_size)
    return LstmLayerParams(
        w_f=_glorot(rng, shape),
        w_i=_glorot(rng, shape),
        w_c=_glorot(rng, shape),
        w_o=_glorot(rng, shape),
        b_f=np.full(hidden_size, FORGET_BIAS_INIT, dtype=np.float64),
        b_i=np.zeros(hidden_size),
        b_c=np.zeros(hidden_size),
        b_o=np.zeros(hidden_size),
    )


def init_model(
    input_size: int,
    lookback: int,
    *,
    rng: np.random.Generator,
    hidden_sizes: tuple[int, ...] = DEFAULT_HIDDEN_SIZES,
    dropout_rate: float = DEFAULT_DROPOUT_RATE,
    scaler: ScalerParams | None = None,
    feature_names: tuple[str, ...] = (),
) -> LstmModel:
    """Glorot-uniform weights, zero biases except the forget gate."""
    layers = []
    size_in = input_size
    for hidden in hidden_sizes:
        layers.append(init_layer(rng, size_in, hidden))
        size_in = hidden
    head_w = _glorot(rng, (1, hidden_sizes[-1]))[0]
    if scaler is None:
        scaler = ScalerParams.identity(input_size)
    if not feature_names:
        feature_names = tuple(f"x{i}" for i in range(input_size - 1))
    return LstmModel(
        layers=layers,
        head_w=head_w,
        head_b=np.zeros(1),
        dropout_rate=dropout_rate,
        lookback=lookback,
        scaler=scaler,
        feature_names=feature_names,
    )


def model_to_json(model: LstmModel) -> str:
    """Serialize to the versioned model document (floats round-trip exactly)."""
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "lookback": model.lookback,
        "dropout_rate": model.dropout_rate,
        "feature_names": list(model.feature_names),
        "scaler": {"means": list(model.scaler.means), "stds": list(model.scaler.stds)},
        "layers": [
            {
                "input_size": layer.input_size,
                "hidden_size": layer.hidden_size,
                "w_f": layer.w_f.tolist(),
                "w_i": layer.w_i.tolist(),
                "w_c": layer.w_c.tolist(),
                "w_o": layer.w_o.tolist(),
                "b_f": layer.b_f.tolist(),
                "b_i": layer.b_i.tolist(),
                "b_c": layer.b_c.tolist(),
                "b_o": layer.b_o.tolist(),
            }
            for layer in model.layers
        ],
        "head": {"w": model.head_w.tolist(), "b": float(model.head_b[0])},
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def model_from_json(text: str) -> LstmModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"model file is not valid JSON: {exc}") from None
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValidationError(
            f"unsupported model format_version {version!r} (expected {MODEL_FORMAT_VERSION})"
        )
    layers = [
        LstmLayerParams(
            w_f=np.array(spec["w_f"], dtype=np.float64),
            w_i=np.array(spec["w_i"], dtype=np.float64),
            w_c=np.array(spec["w_c"], dtype=np.float64),
            w_o=np.array(spec["w_o"], dtype=np.float64),
            b_f=np.array(spec["b_f"], dtype=np.float64),
            b_i=np.array(spec["b_i"], dtype=np.float64),
            b_c=np.array(spec["b_c"], dtype=np.float64),
            b_o=np.array(spec["b_o"], dtype=np.float64),
        )
        for spec in doc["layers"]
    ]
    return LstmModel(
        layers=layers,
        head_w=np.array(doc["head"]["w"], dtype=np.float64),
        head_b=np.array([doc["head"]["b"]], dtype=np.float64),
        dropout_rate=doc["dropout_rate"],
        lookback=doc["lookback"],
        scaler=ScalerParams(tuple(doc["scaler"]["means"]), tuple(doc["scaler"]["stds"])),
        feature_names=tuple(doc["feature_names"]),
    )


def save_model(model: LstmModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model))


def load_model(path) -> LstmModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(fh.read())
