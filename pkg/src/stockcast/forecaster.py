"""From-scratch single-layer LSTM regressor, trained with BPTT and Adam.

The cell is the standard formulation: logistic input/forget/output
gates, tanh candidate, with a dense head on the final hidden state and a
ReLU at the output (normalized close targets are non-negative, so the
ReLU loses nothing). Everything runs in float64 and is fully
deterministic given the config seed: weight init draws from one seeded
stream, epoch shuffles from a second, so init_weights(config) always
matches what train(config) started from.

Gradients are exact analytic BPTT, including the ReLU subgradient
(defined as 0 at exactly 0); the test suite checks them against central
finite differences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import LengthMismatch, NonFiniteActivation, TrainingDiverged

GATES = ("i", "f", "o", "g")

#: Checkpoint / gradient / Adam traversal order. Changing it breaks
#: checkpoint compatibility; bump CHECKPOINT_FORMAT if you must.
PARAM_ORDER = (
    "W_i", "W_f", "W_o", "W_g",
    "U_i", "U_f", "U_o", "U_g",
    "b_i", "b_f", "b_o", "b_g",
    "w_out", "b_out",
)

CHECKPOINT_FORMAT = "stockcast-lstm-v1"

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class LstmConfig:
    """Model and training knobs. Defaults follow the reference protocol:
    one layer of 256 units, Adam at 0.001, batches of 128, 100 epochs."""

    hidden_units: int = 256
    learning_rate: float = 0.001
    batch_size: int = 128
    epochs: int = 100
    lookback: int = 30
    seed: int = 0
    grad_clip: float = 5.0

    def __post_init__(self):
        if min(self.hidden_units, self.batch_size, self.epochs, self.lookback) < 1:
            raise ValueError("hidden_units, batch_size, epochs, lookback must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


class LstmWeights:
    """Parameter container keyed by PARAM_ORDER names.

    W_* map inputs to the hidden layer, U_* are the recurrent maps, b_*
    the gate biases; w_out/b_out form the dense head.
    """

    def __init__(self, params):
        missing = [name for name in PARAM_ORDER if name not in params]
        if missing:
            raise ValueError(f"missing parameters: {missing}")
        self.params = {name: np.asarray(params[name], dtype=np.float64)
                       for name in PARAM_ORDER}

    def __getitem__(self, name):
        return self.params[name]

    def items(self):
        return [(name, self.params[name]) for name in PARAM_ORDER]

    @property
    def n_features(self):
        return self.params["W_i"].shape[0]

    @property
    def hidden_units(self):
        return self.params["W_i"].shape[1]

    def copy(self):
        return LstmWeights({name: arr.copy() for name, arr in self.params.items()})


def init_weights(config, n_features):
    """Seed-determined uniform init in [-k, k], k = 1/sqrt(hidden).

    The forget-gate bias is set to 1.0 (not drawn) so early training
    does not wash out the cell state.
    """
    h = config.hidden_units
    k = 1.0 / np.sqrt(h)
    rng = np.random.default_rng([config.seed, 0])
    params = {}
    for name in PARAM_ORDER:
        if name == "b_f":
            params[name] = np.ones(h, dtype=np.float64)
            continue
        if name == "w_out":
            shape = (h,)
        elif name == "b_out":
            shape = ()
        elif name.startswith("W_"):
            shape = (n_features, h)
        elif name.startswith("U_"):
            shape = (h, h)
        else:  # gate biases
            shape = (h,)
        params[name] = rng.uniform(-k, k, size=shape)
    return LstmWeights(params)


def _sigmoid(x):
    # Piecewise form avoids overflow in exp for large |x|.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _forward_batch(weights, X):
    """Unrolled forward pass over a (batch, lookback, features) array.

    Returns predictions (batch,) and the activation cache BPTT needs.

    Raises:
        NonFiniteActivation: a prediction came out inf/nan.
    """
    X = np.asarray(X, dtype=np.float64)
    B, T, _ = X.shape
    H = weights.hidden_units
    p = weights.params
    h = np.zeros((B, H))
    c = np.zeros((B, H))
    steps = []
    for t in range(T):
        x = X[:, t, :]
        gate_i = _sigmoid(x @ p["W_i"] + h @ p["U_i"] + p["b_i"])
        gate_f = _sigmoid(x @ p["W_f"] + h @ p["U_f"] + p["b_f"])
        gate_o = _sigmoid(x @ p["W_o"] + h @ p["U_o"] + p["b_o"])
        gate_g = np.tanh(x @ p["W_g"] + h @ p["U_g"] + p["b_g"])
        c_new = gate_f * c + gate_i * gate_g
        tanh_c = np.tanh(c_new)
        h_new = gate_o * tanh_c
        steps.append({
            "x": x, "h_prev": h, "c_prev": c,
            "i": gate_i, "f": gate_f, "o": gate_o, "g": gate_g,
            "tanh_c": tanh_c,
        })
        h, c = h_new, c_new
    z = h @ p["w_out"] + p["b_out"]
    pred = np.maximum(z, 0.0)
    if not np.all(np.isfinite(pred)):
        raise NonFiniteActivation("non-finite prediction; training diverged?")
    return pred, {"steps": steps, "h_last": h, "z": z, "X": X}


def lstm_forward(weights, X):
    """Forward one (lookback, features) sample -> (prediction, cache)."""
    pred, cache = _forward_batch(weights, np.asarray(X, dtype=np.float64)[None, :, :])
    return float(pred[0]), cache


def mse_loss(predictions, targets):
    """Mean squared error between two equal-length vectors."""
    predictions = np.asarray(predictions, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if predictions.shape != targets.shape:
        raise LengthMismatch(
            f"predictions {predictions.shape} vs targets {targets.shape}"
        )
    if predictions.size == 0:
        raise LengthMismatch("need at least one prediction")
    return float(np.mean((predictions - targets) ** 2))


def _zero_grads(weights):
    return {name: np.zeros_like(arr) for name, arr in weights.items()}


def _backward_batch(weights, cache, targets):
    """Exact gradients of batch-mean MSE w.r.t. every parameter."""
    p = weights.params
    targets = np.asarray(targets, dtype=np.float64)
    z = cache["z"]
    pred = np.maximum(z, 0.0)
    B = z.shape[0]
    grads = _zero_grads(weights)

    # dL/dz through the ReLU; subgradient at exactly 0 is 0.
    dz = (2.0 / B) * (pred - targets) * (z > 0)
    grads["w_out"] = cache["h_last"].T @ dz
    grads["b_out"] = np.asarray(dz.sum())
    dh = np.outer(dz, p["w_out"])
    dc = np.zeros_like(dh)

    for step in reversed(cache["steps"]):
        i, f, o, g = step["i"], step["f"], step["o"], step["g"]
        tanh_c = step["tanh_c"]
        do = dh * tanh_c
        dc = dc + dh * o * (1.0 - tanh_c ** 2)
        di = dc * g
        df = dc * step["c_prev"]
        dg = dc * i
        da = {
            "i": di * i * (1.0 - i),
            "f": df * f * (1.0 - f),
            "o": do * o * (1.0 - o),
            "g": dg * (1.0 - g ** 2),
        }
        x, h_prev = step["x"], step["h_prev"]
        dh = np.zeros_like(dh)
        for gate in GATES:
            grads[f"W_{gate}"] += x.T @ da[gate]
            grads[f"U_{gate}"] += h_prev.T @ da[gate]
            grads[f"b_{gate}"] += da[gate].sum(axis=0)
            dh += da[gate] @ p[f"U_{gate}"].T
        dc = dc * f
    return grads


def backward(weights, cache, target):
    """Gradients of single-sample squared error; cache from lstm_forward."""
    return _backward_batch(weights, cache, np.asarray([target], dtype=np.float64))


def clip_gradients(grads, max_norm):
    """Scale all gradients so their global L2 norm is at most max_norm."""
    total = np.sqrt(sum(float(np.sum(g ** 2)) for g in grads.values()))
    if total > max_norm and total > 0:
        scale = max_norm / total
        for g in grads.values():
            g *= scale
    return grads


@dataclass
class AdamState:
    """First/second moment accumulators plus the shared timestep."""

    m: dict
    v: dict
    t: int = 0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPS

    @classmethod
    def for_weights(cls, weights):
        return cls(
            m={name: np.zeros_like(arr) for name, arr in weights.items()},
            v={name: np.zeros_like(arr) for name, arr in weights.items()},
        )


def adam_step(weights, grads, state, lr):
    """One bias-corrected Adam update, in place; returns (weights, state)."""
    state.t += 1
    b1, b2, eps, t = state.beta1, state.beta2, state.eps, state.t
    for name, param in weights.items():
        g = grads[name]
        state.m[name] = b1 * state.m[name] + (1.0 - b1) * g
        state.v[name] = b2 * state.v[name] + (1.0 - b2) * g ** 2
        m_hat = state.m[name] / (1.0 - b1 ** t)
        v_hat = state.v[name] / (1.0 - b2 ** t)
        param -= lr * m_hat / (np.sqrt(v_hat) + eps)
    return weights, state


def train(dataset, config):
    """Train on a WindowedDataset; returns (weights, loss_history).

    Mini-batches follow a seed-determined shuffle each epoch (last batch
    may be short). loss_history holds one training MSE per epoch,
    accumulated over the batches as they were seen.

    Raises:
        TrainingDiverged: activations went non-finite.
    """
    X = np.asarray(dataset.X, dtype=np.float64)
    y = np.asarray(dataset.y, dtype=np.float64)
    n = X.shape[0]
    if n < 1:
        raise ValueError("need at least one training sample")
    weights = init_weights(config, X.shape[2])
    state = AdamState.for_weights(weights)
    shuffle_rng = np.random.default_rng([config.seed, 1])
    loss_history = []
    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(n)
        sq_sum = 0.0
        try:
            for start in range(0, n, config.batch_size):
                idx = order[start:start + config.batch_size]
                pred, cache = _forward_batch(weights, X[idx])
                sq_sum += float(np.sum((pred - y[idx]) ** 2))
                grads = _backward_batch(weights, cache, y[idx])
                clip_gradients(grads, config.grad_clip)
                adam_step(weights, grads, state, config.learning_rate)
        except NonFiniteActivation as exc:
            raise TrainingDiverged(epoch) from exc
        epoch_loss = sq_sum / n
        if not np.isfinite(epoch_loss):
            raise TrainingDiverged(epoch)
        loss_history.append(epoch_loss)
    return weights, loss_history


def predict(weights, dataset, chunk_size=512):
    """One prediction per sample, order preserved; empty in, empty out."""
    X = np.asarray(dataset.X, dtype=np.float64)
    if X.shape[0] == 0:
        return np.empty(0, dtype=np.float64)
    preds = []
    for start in range(0, X.shape[0], chunk_size):
        pred, _ = _forward_batch(weights, X[start:start + chunk_size])
        preds.append(pred)
    return np.concatenate(preds)


# --- checkpoints ---------------------------------------------------------------

def save_checkpoint(path, weights, config):
    """Write weights + config echo as JSON; parameters in PARAM_ORDER."""
    payload = {
        "format": CHECKPOINT_FORMAT,
        "config": {
            "hidden_units": config.hidden_units,
            "learning_rate": config.learning_rate,
            "batch_size": config.batch_size,
            "epochs": config.epochs,
            "lookback": config.lookback,
            "seed": config.seed,
            "grad_clip": config.grad_clip,
        },
        "n_features": weights.n_features,
        "params": {name: arr.tolist() for name, arr in weights.items()},
    }
    Path(path).write_text(json.dumps(payload, indent=1), encoding="utf-8")


def load_checkpoint(path):
    """Read a checkpoint back; returns (weights, config). Exact round-trip."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"unsupported checkpoint format {payload.get('format')!r}")
    config = LstmConfig(**payload["config"])
    weights = LstmWeights({name: np.array(value, dtype=np.float64)
                           for name, value in payload["params"].items()})
    return weights, config


__all__ = [
    "LstmConfig",
    "LstmWeights",
    "AdamState",
    "PARAM_ORDER",
    "GATES",
    "init_weights",
    "lstm_forward",
    "mse_loss",
    "backward",
    "clip_gradients",
    "adam_step",
    "train",
    "predict",
    "save_checkpoint",
    "load_checkpoint",
]
