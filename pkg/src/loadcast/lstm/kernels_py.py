"""Pure-numpy sequence kernels: one LSTM layer over a full batch of windows.

Both kernel backends implement the same contract:

``layer_forward(x, w_f, w_i, w_c, w_o, b_f, b_i, b_c, b_o)``
    x is (T, B, D) float64 C-contiguous. Returns ``(h, f, i, g, o, c, tanh_c)``
    where every output is (T, B, H). Initial hidden and cell states are zero.

``layer_backward(dh, x, h, f, i, g, o, c, tanh_c, w_f, w_i, w_c, w_o)``
    dh is the loss gradient w.r.t. h (T, B, H). Returns
    ``(dx, dw_f, dw_i, dw_c, dw_o, db_f, db_i, db_c, db_o)``.

Gate order everywhere is f, i, g (candidate), o. Each weight matrix is
(H, H + D) over the concatenation [h_prev, x].
"""

from __future__ import annotations

import numpy as np


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # exp overflow for very negative z still yields the correct limit 0.0
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def _stack(w_f, w_i, w_c, w_o):
    return np.concatenate([w_f, w_i, w_c, w_o], axis=0)


def layer_forward(x, w_f, w_i, w_c, w_o, b_f, b_i, b_c, b_o):
    T, B, D = x.shape
    H = w_f.shape[0]
    w = _stack(w_f, w_i, w_c, w_o)                  # (4H, H+D)
    u_t = np.ascontiguousarray(w[:, :H].T)          # (H, 4H) recurrent part
    v_t = np.ascontiguousarray(w[:, H:].T)          # (D, 4H) input part
    bias = np.concatenate([b_f, b_i, b_c, b_o])

    # input projection for every timestep in one matmul
    a = (x.reshape(T * B, D) @ v_t + bias).reshape(T, B, 4 * H)

    h = np.empty((T, B, H))
    f = np.empty((T, B, H))
    i = np.empty((T, B, H))
    g = np.empty((T, B, H))
    o = np.empty((T, B, H))
    c = np.empty((T, B, H))
    tanh_c = np.empty((T, B, H))

    c_prev = np.zeros((B, H))
    h_prev = np.zeros((B, H))
    for t in range(T):
        at = a[t] + h_prev @ u_t
        f[t] = _sigmoid(at[:, :H])
        i[t] = _sigmoid(at[:, H:2 * H])
        g[t] = np.tanh(at[:, 2 * H:3 * H])
        o[t] = _sigmoid(at[:, 3 * H:])
        c[t] = i[t] * g[t] + f[t] * c_prev
        tanh_c[t] = np.tanh(c[t])
        h[t] = o[t] * tanh_c[t]
        c_prev = c[t]
        h_prev = h[t]
    return h, f, i, g, o, c, tanh_c


def layer_backward(dh, x, h, f, i, g, o, c, tanh_c, w_f, w_i, w_c, w_o):
    T, B, D = x.shape
    H = h.shape[2]
    w = _stack(w_f, w_i, w_c, w_o)
    u = np.ascontiguousarray(w[:, :H])              # (4H, H)
    v = np.ascontiguousarray(w[:, H:])              # (4H, D)

    da = np.empty((T, B, 4 * H))
    dh_rec = np.zeros((B, H))
    dc_next = np.zeros((B, H))
    for t in range(T - 1, -1, -1):
        dht = dh[t] + dh_rec
        do = dht * tanh_c[t]
        dc = dht * o[t] * (1.0 - tanh_c[t] ** 2) + dc_next
        c_prev = c[t - 1] if t > 0 else 0.0
        da[t, :, :H] = dc * c_prev * f[t] * (1.0 - f[t])
        da[t, :, H:2 * H] = dc * g[t] * i[t] * (1.0 - i[t])
        da[t, :, 2 * H:3 * H] = dc * i[t] * (1.0 - g[t] ** 2)
        da[t, :, 3 * H:] = do * o[t] * (1.0 - o[t])
        dh_rec = da[t] @ u
        dc_next = dc * f[t]

    da2 = da.reshape(T * B, 4 * H)
    dx = (da2 @ v).reshape(T, B, D)
    h_prev = np.concatenate([np.zeros((1, B, H)), h[:-1]], axis=0).reshape(T * B, H)
    du = da2.T @ h_prev                              # (4H, H)
    dv = da2.T @ x.reshape(T * B, D)                 # (4H, D)
    db = da2.sum(axis=0)
    dw = np.concatenate([du, dv], axis=1)            # (4H, H+D)
    return (dx,
            dw[:H], dw[H:2 * H], dw[2 * H:3 * H], dw[3 * H:],
            db[:H], db[H:2 * H], db[2 * H:3 * H], db[3 * H:])
