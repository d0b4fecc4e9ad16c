"""From-scratch stacked LSTM: parameters, kernels, training, forecasting."""

from .backend import KERNEL_BACKEND, available_backends, select_backend
from .forecasting import forecast, forecast_range
from .network import (CellCache, ForwardCache, LstmState, Mode, backward_batch,
                      cell_forward, forward, forward_batch, make_dropout_masks, mse)
from .optimizer import AdamState, adam_step, clip_gradients, global_norm, lr_schedule
from .params import (DEFAULT_DROPOUT_RATE, DEFAULT_HIDDEN_SIZES,
                     MODEL_FORMAT_VERSION, LstmLayerParams, LstmModel,
                     init_layer, init_model, load_model, model_from_json,
                     model_to_json, parameter_names, save_model)
from .training import (MAX_GRAD_NORM, EpochRecord, TrainConfig, TrainReport,
                       evaluate, predict_windows, train)

__all__ = [
    "KERNEL_BACKEND", "available_backends", "select_backend",
    "forecast", "forecast_range",
    "CellCache", "ForwardCache", "LstmState", "Mode", "backward_batch",
    "cell_forward", "forward", "forward_batch", "make_dropout_masks", "mse",
    "AdamState", "adam_step", "clip_gradients", "global_norm", "lr_schedule",
    "DEFAULT_DROPOUT_RATE", "DEFAULT_HIDDEN_SIZES", "MODEL_FORMAT_VERSION",
    "LstmLayerParams", "LstmModel", "init_layer", "init_model", "load_model",
    "model_from_json", "model_to_json", "parameter_names", "save_model",
    "MAX_GRAD_NORM", "EpochRecord", "TrainConfig", "TrainReport",
    "evaluate", "predict_windows", "train",
]
