"""Single-hidden-layer perceptron trained with per-sample backpropagation.

Forward pass (column vector x of Q bits)::

    h = sigmoid(Wh @ [x; 1] - threshold)     Wh is P x (Q+1), last column bias
    y = sigmoid(Wo @ [h; 1])                 Wo is C x (P+1), last column bias

with sigmoid(z) = 1 / (1 + exp(-lambda * z)). The cost of one sample is
half the squared error, Phi = 0.5 * sum((y - e)^2), minimized by stochastic
gradient descent with a momentum term:

    dW(t) = -eta * dPhi/dW + momentum * dW(t-1)

Weight initialization draws every entry with fixed magnitude sqrt(eta / N)
— N the layer's fan-in, counting the constant bias input — and a random
sign, and refuses configurations where that magnitude leaves (-0.2, 0.2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.special import expit

from .features import EncodedVector

MODEL_FORMAT_VERSION = 1

#: Initialization magnitudes must stay inside (-0.2, 0.2).
INIT_MAGNITUDE_LIMIT = 0.2


class ModelFormatError(ValueError):
    """Unreadable or inconsistent model file."""


def _frozen_array(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class MlpModel:
    """Immutable network: sizes, weights, activation slope, and routing metadata.

    weights_hidden is P x (Q+1) and weights_output C x (P+1); the last
    column of each is the bias. class_labels, when present, name the C
    output units; cluster_id records which stroke-count cluster the model
    serves. internal_threshold is subtracted from hidden pre-activations.
    """

    layer_sizes: tuple[int, int, int]
    weights_hidden: np.ndarray
    weights_output: np.ndarray
    lambda_: float = 1.0
    internal_threshold: float = 0.0
    class_labels: tuple[str, ...] | None = None
    cluster_id: int | None = None

    def __post_init__(self):
        q, p, c = self.layer_sizes
        if min(q, p, c) < 1:
            raise ValueError(f"layer sizes must be positive, got {self.layer_sizes}")
        if self.lambda_ <= 0:
            raise ValueError(f"sigmoid slope must be positive, got {self.lambda_}")
        wh = _frozen_array(self.weights_hidden)
        wo = _frozen_array(self.weights_output)
        if wh.shape != (p, q + 1):
            raise ValueError(f"hidden weights shape {wh.shape}, expected {(p, q + 1)}")
        if wo.shape != (c, p + 1):
            raise ValueError(f"output weights shape {wo.shape}, expected {(c, p + 1)}")
        if not (np.isfinite(wh).all() and np.isfinite(wo).all()):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "weights_hidden", wh)
        object.__setattr__(self, "weights_output", wo)
        object.__setattr__(self, "layer_sizes", (int(q), int(p), int(c)))
        if self.class_labels is not None:
            object.__setattr__(self, "class_labels", tuple(self.class_labels))
            if len(self.class_labels) != c:
                raise ValueError(
                    f"{len(self.class_labels)} class labels for {c} output units"
                )


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for stochastic backprop training."""

    learning_rate: float = 0.1
    momentum: float = 0.05
    internal_threshold: float = 0.0
    max_epochs: int = 150
    target_error: float = 5e-4
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.learning_rate < 1.0:
            raise ValueError(f"learning_rate must be in (0, 1), got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")


def _sigmoid(z: np.ndarray, lam: float) -> np.ndarray:
    return expit(lam * z)


def init_weights(
    layer_sizes: Sequence[int],
    learning_rate: float = 0.1,
    seed: int = 0,
    lambda_: float = 1.0,
    internal_threshold: float = 0.0,
    class_labels: Sequence[str] | None = None,
    cluster_id: int | None = None,
) -> MlpModel:
    """Build a model whose every weight has magnitude sqrt(eta / fan-in)
    and a seeded random sign.

    Fan-in counts the bias input: Q+1 for the hidden layer, P+1 for the
    output layer. Raises when either magnitude reaches 0.2, i.e. the fan-in
    is too small for the learning rate.
    """
    q, p, c = (int(v) for v in layer_sizes)
    rng = np.random.default_rng(seed)
    mats = []
    for rows, fan_in in ((p, q + 1), (c, p + 1)):
        magnitude = float(np.sqrt(learning_rate / fan_in))
        if magnitude >= INIT_MAGNITUDE_LIMIT:
            raise ValueError(
                f"init magnitude sqrt({learning_rate}/{fan_in}) = {magnitude:.4f} "
                f">= {INIT_MAGNITUDE_LIMIT}; increase fan-in or lower the learning rate"
            )
        signs = rng.integers(0, 2, size=(rows, fan_in)) * 2 - 1
        mats.append(signs * magnitude)
    return MlpModel(
        layer_sizes=(q, p, c),
        weights_hidden=mats[0],
        weights_output=mats[1],
        lambda_=lambda_,
        internal_threshold=internal_threshold,
        class_labels=tuple(class_labels) if class_labels is not None else None,
        cluster_id=cluster_id,
    )


def _as_input(x, q: int) -> np.ndarray:
    if isinstance(x, EncodedVector):
        x = x.array
    x = np.asarray(x, dtype=float)
    if x.shape != (q,):
        raise ValueError(f"input shape {x.shape}, expected ({q},)")
    return x


def _forward_parts(model: MlpModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hidden and output activations."""
    lam = model.lambda_
    h = _sigmoid(
        model.weights_hidden[:, :-1] @ x + model.weights_hidden[:, -1] - model.internal_threshold,
        lam,
    )
    y = _sigmoid(model.weights_output[:, :-1] @ h + model.weights_output[:, -1], lam)
    return h, y


def forward(model: MlpModel, x) -> np.ndarray:
    """Output activations for one input vector; each strictly inside (0, 1)."""
    x = _as_input(x, model.layer_sizes[0])
    _, y = _forward_parts(model, x)
    return y


def loss(outputs: np.ndarray, targets: np.ndarray) -> float:
    """Half the summed squared error between outputs and targets."""
    outputs = np.asarray(outputs, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if outputs.shape != targets.shape:
        raise ValueError(f"shape mismatch: {outputs.shape} vs {targets.shape}")
    e = outputs - targets
    return float(0.5 * np.dot(e, e))


def gradients(model: MlpModel, x, target) -> tuple[np.ndarray, np.ndarray]:
    """Analytic dPhi/dW for both weight matrices on one sample."""
    q, _, c = model.layer_sizes
    x = _as_input(x, q)
    target = np.asarray(target, dtype=float)
    if target.shape != (c,):
        raise ValueError(f"target shape {target.shape}, expected ({c},)")
    lam = model.lambda_
    h, y = _forward_parts(model, x)

    delta_out = (y - target) * lam * y * (1.0 - y)
    grad_out = np.empty_like(model.weights_output)
    grad_out[:, :-1] = np.outer(delta_out, h)
    grad_out[:, -1] = delta_out

    delta_hidden = (model.weights_output[:, :-1].T @ delta_out) * lam * h * (1.0 - h)
    grad_hidden = np.empty_like(model.weights_hidden)
    grad_hidden[:, :-1] = np.outer(delta_hidden, x)
    grad_hidden[:, -1] = delta_hidden
    return grad_hidden, grad_out


def train(
    model: MlpModel,
    dataset: Sequence[tuple[object, np.ndarray]],
    config: TrainConfig,
) -> tuple[MlpModel, list[float]]:
    """Per-sample SGD with momentum; returns the trained model and the
    per-epoch mean sample cost.

    Sample order is reshuffled each epoch from the seed. Training stops at
    max_epochs or as soon as an epoch's mean cost reaches target_error.
    """
    if len(dataset) == 0:
        raise ValueError("cannot train on an empty dataset")
    q, _, c = model.layer_sizes
    xs = np.stack([_as_input(x, q) for x, _ in dataset])
    ts = np.stack([np.asarray(t, dtype=float) for _, t in dataset])
    if ts.shape[1] != c:
        raise ValueError(f"target width {ts.shape[1]}, expected {c}")

    wh = model.weights_hidden.copy()
    wo = model.weights_output.copy()
    vel_h = np.zeros_like(wh)
    vel_o = np.zeros_like(wo)
    eta, mom, lam = config.learning_rate, config.momentum, model.lambda_
    theta = config.internal_threshold
    rng = np.random.default_rng(config.seed)

    history: list[float] = []
    for epoch in range(config.max_epochs):
        order = rng.permutation(len(dataset))
        total = 0.0
        for idx in order:
            x, target = xs[idx], ts[idx]
            h = _sigmoid(wh[:, :-1] @ x + wh[:, -1] - theta, lam)
            y = _sigmoid(wo[:, :-1] @ h + wo[:, -1], lam)
            err = y - target
            total += 0.5 * float(np.dot(err, err))

            delta_out = err * lam * y * (1.0 - y)
            delta_hidden = (wo[:, :-1].T @ delta_out) * lam * h * (1.0 - h)

            vel_o[:, :-1] = -eta * np.outer(delta_out, h) + mom * vel_o[:, :-1]
            vel_o[:, -1] = -eta * delta_out + mom * vel_o[:, -1]
            vel_h[:, :-1] = -eta * np.outer(delta_hidden, x) + mom * vel_h[:, :-1]
            vel_h[:, -1] = -eta * delta_hidden + mom * vel_h[:, -1]
            wo += vel_o
            wh += vel_h

        mean_cost = total / len(dataset)
        if not np.isfinite(mean_cost):
            raise RuntimeError(f"training diverged at epoch {epoch}: mean cost {mean_cost}")
        history.append(mean_cost)
        if mean_cost <= config.target_error:
            break

    trained = replace(
        model,
        weights_hidden=wh,
        weights_output=wo,
        internal_threshold=theta,
    )
    return trained, history


def predict(model: MlpModel, x) -> tuple[int, float]:
    """Argmax readout: (class index, winning activation over the activation sum).

    Ties go to the lowest index.
    """
    y = forward(model, x)
    idx = int(np.argmax(y))
    return idx, float(y[idx] / y.sum())


def save_model(model: MlpModel) -> bytes:
    """Serialize to versioned JSON, weights row-major at full precision."""
    doc = {
        "version": MODEL_FORMAT_VERSION,
        "activation": "sigmoid",
        "lambda": model.lambda_,
        "layer_sizes": list(model.layer_sizes),
        "weights_hidden": [float(v) for v in model.weights_hidden.ravel()],
        "weights_output": [float(v) for v in model.weights_output.ravel()],
        "cluster_id": model.cluster_id,
        "class_labels": list(model.class_labels) if model.class_labels is not None else None,
        "internal_threshold": model.internal_threshold,
    }
    return json.dumps(doc, ensure_ascii=False).encode("utf-8")


def load_model(data: bytes | str) -> MlpModel:
    """Inverse of save_model; rejects version or shape mismatches."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelFormatError(f"not UTF-8 text: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError("top level must be an object")
    if doc.get("version") != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported version {doc.get('version')!r}, expected {MODEL_FORMAT_VERSION}"
        )
    if doc.get("activation") != "sigmoid":
        raise ModelFormatError(f"unknown activation {doc.get('activation')!r}")
    try:
        q, p, c = (int(v) for v in doc["layer_sizes"])
        wh = np.array(doc["weights_hidden"], dtype=float)
        wo = np.array(doc["weights_output"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"missing or malformed field: {exc}") from exc
    if wh.size != p * (q + 1):
        raise ModelFormatError(f"{wh.size} hidden weights for layer sizes {(q, p, c)}")
    if wo.size != c * (p + 1):
        raise ModelFormatError(f"{wo.size} output weights for layer sizes {(q, p, c)}")
    labels = doc.get("class_labels")
    try:
        return MlpModel(
            layer_sizes=(q, p, c),
            weights_hidden=wh.reshape(p, q + 1),
            weights_output=wo.reshape(c, p + 1),
            lambda_=float(doc.get("lambda", 1.0)),
            internal_threshold=float(doc.get("internal_threshold", 0.0)),
            class_labels=tuple(labels) if labels is not None else None,
            cluster_id=doc.get("cluster_id"),
        )
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from exc
