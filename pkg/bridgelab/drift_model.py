"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: drift_model.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: A fully-connected ReLU drift approximator written on numpy, with reverse-mode gradients, Adam, EMA and binary checkpoints.
# // AR
# +==== END bridgelab =================+
"""

import struct
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

try:
    from . import constants as CONST
except ImportError:
    import constants as CONST

TimeBatch = Union[float, np.ndarray]


@dataclass(frozen=True)
class MLPSpec:
    """Shape of the network alpha(theta, x, t).

    Attributes:
        input_dim: d + 1, the state with the time appended.
        hidden_widths: widths of the ReLU layers, empty for an affine model.
        output_dim: d.
        init_seed: seed of the He-uniform initialisation.
    """
    input_dim: int
    hidden_widths: Tuple[int, ...]
    output_dim: int
    init_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "hidden_widths", tuple(int(w) for w in self.hidden_widths))
        if self.output_dim < 1 or self.input_dim != self.output_dim + 1:
            raise CONST.DomainError(
                f"network maps (x, t) to a drift: input_dim must be output_dim + 1, got {self.input_dim} and {self.output_dim}"
            )
        if any(w < 1 for w in self.hidden_widths):
            raise CONST.DomainError(f"hidden widths must be positive, got {self.hidden_widths}")

    @classmethod
    def for_dimension(cls, dim: int, hidden_widths: Sequence[int] = CONST.DEFAULT_HIDDEN_WIDTHS, init_seed: int = 0) -> "MLPSpec":
        return cls(input_dim=dim + 1, hidden_widths=tuple(hidden_widths), output_dim=dim, init_seed=init_seed)

    @property
    def layer_shapes(self) -> List[Tuple[int, int]]:
        sizes = [self.input_dim, *self.hidden_widths, self.output_dim]
        return list(zip(sizes[:-1], sizes[1:]))


@dataclass
class _ForwardCache:
    x: np.ndarray
    t: TimeBatch
    version: int
    layer_inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]


class MLPParams:
    """Weights (fan_in, fan_out) and biases of every layer.

    The version counter changes on each in-place update so a cached forward
    pass can tell it belongs to older parameters.
    """

    def __init__(self, spec: MLPSpec, weights: List[np.ndarray], biases: List[np.ndarray]) -> None:
        shapes = spec.layer_shapes
        if len(weights) != len(shapes) or len(biases) != len(shapes):
            raise CONST.DomainError(f"expected {len(shapes)} layers, got {len(weights)} weights and {len(biases)} biases")
        for (fan_in, fan_out), weight, bias in zip(shapes, weights, biases):
            if weight.shape != (fan_in, fan_out) or bias.shape != (fan_out,):
                raise CONST.DomainError(f"layer {fan_in}->{fan_out} got weight {weight.shape} and bias {bias.shape}")
        self.spec: MLPSpec = spec
        self.weights: List[np.ndarray] = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases: List[np.ndarray] = [np.asarray(b, dtype=np.float64) for b in biases]
        self.version: int = 0
        self._cache: Optional[_ForwardCache] = None

    def arrays(self) -> List[np.ndarray]:
        return [*self.weights, *self.biases]

    def bump(self) -> None:
        self.version += 1
        self._cache = None

    def copy(self) -> "MLPParams":
        return MLPParams(self.spec, [w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def zeros_like(self) -> "MLPParams":
        return MLPParams(self.spec, [np.zeros_like(w) for w in self.weights], [np.zeros_like(b) for b in self.biases])

    @property
    def n_parameters(self) -> int:
        return int(sum(a.size for a in self.arrays()))


@dataclass
class MLPGradients:
    """Gradients laid out like MLPParams."""
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def arrays(self) -> List[np.ndarray]:
        return [*self.weights, *self.biases]


def mlp_init(spec: MLPSpec) -> MLPParams:
    """He-uniform weights, zero biases, deterministic per spec.init_seed."""
    rng = np.random.default_rng(spec.init_seed)
    weights = []
    biases = []
    for fan_in, fan_out in spec.layer_shapes:
        limit = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MLPParams(spec, weights, biases)


def _network_input(spec: MLPSpec, x: np.ndarray, t: TimeBatch) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != spec.output_dim:
        raise CONST.DomainError(f"network expects points of shape (n, {spec.output_dim}), got {x.shape}")
    times = np.broadcast_to(np.asarray(t, dtype=np.float64), (x.shape[0],)) if np.ndim(t) == 0 else np.asarray(t, dtype=np.float64)
    if times.shape != (x.shape[0],):
        raise CONST.DomainError(f"need one time per point, got {times.shape} for {x.shape[0]} points")
    return np.concatenate([x, times[:, None]], axis=1)


def _propagate(params: MLPParams, inputs: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray], List[np.ndarray]]:
    layer_inputs = []
    pre_activations = []
    h = inputs
    last = len(params.weights) - 1
    for index, (weight, bias) in enumerate(zip(params.weights, params.biases)):
        layer_inputs.append(h)
        pre = h @ weight + bias
        if index == last:
            return pre, layer_inputs, pre_activations
        pre_activations.append(pre)
        h = np.maximum(pre, 0.0)
    raise CONST.DomainError("network has no layers")


def mlp_forward(params: MLPParams, x_batch: np.ndarray, t_batch: TimeBatch) -> np.ndarray:
    """Evaluate the network and cache activations for mlp_backward.

    Arguments:
        params (MLPParams): The parameters, owned by a single training loop.
        x_batch (np.ndarray): Points (n, d).
        t_batch (TimeBatch): A time per point, or one time for all.

    Returns:
        np.ndarray: Outputs (n, d).

    Raises:
        DomainError: shape mismatch.
    """
    inputs = _network_input(params.spec, x_batch, t_batch)
    output, layer_inputs, pre_activations = _propagate(params, inputs)
    params._cache = _ForwardCache(
        x=x_batch, t=t_batch, version=params.version,
        layer_inputs=layer_inputs, pre_activations=pre_activations,
    )
    return output


def mlp_predict(params: MLPParams, x_batch: np.ndarray, t_batch: TimeBatch) -> np.ndarray:
    """Cache-free forward pass, safe to call from several threads on a frozen snapshot."""
    output, _, _ = _propagate(params, _network_input(params.spec, x_batch, t_batch))
    return output


def mlp_backward(params: MLPParams, x_batch: np.ndarray, t_batch: TimeBatch, loss_grads: np.ndarray) -> MLPGradients:
    """Gradients of a loss wrt every parameter, given dloss/doutput for the cached batch.

    Raises:
        CacheContractError: the cached forward pass is for another batch or older parameters.
        DomainError: loss_grads shape mismatch.
    """
    cache = params._cache
    if cache is None or cache.x is not x_batch or cache.t is not t_batch or cache.version != params.version:
        raise CONST.CacheContractError("mlp_backward needs mlp_forward on the same batch and parameters first")
    g = np.asarray(loss_grads, dtype=np.float64)
    n = cache.layer_inputs[0].shape[0]
    if g.shape != (n, params.spec.output_dim):
        raise CONST.DomainError(f"loss gradients must be ({n}, {params.spec.output_dim}), got {g.shape}")
    n_layers = len(params.weights)
    grad_w: List[np.ndarray] = [np.empty(0)] * n_layers
    grad_b: List[np.ndarray] = [np.empty(0)] * n_layers
    for index in range(n_layers - 1, -1, -1):
        grad_w[index] = cache.layer_inputs[index].T @ g
        grad_b[index] = g.sum(axis=0)
        if index > 0:
            g = (g @ params.weights[index].T) * (cache.pre_activations[index - 1] > 0.0)
    return MLPGradients(weights=grad_w, biases=grad_b)


@dataclass
class AdamState:
    """Adam accumulators shaped like the parameter arrays."""
    first_moment: List[np.ndarray]
    second_moment: List[np.ndarray]
    step: int = 0
    lr: float = CONST.ADAM_LR
    beta1: float = CONST.ADAM_BETA1
    beta2: float = CONST.ADAM_BETA2
    eps: float = CONST.ADAM_EPS


def adam_init(params: MLPParams, lr: float = CONST.ADAM_LR, beta1: float = CONST.ADAM_BETA1, beta2: float = CONST.ADAM_BETA2, eps: float = CONST.ADAM_EPS) -> AdamState:
    if lr <= 0 or not 0 <= beta1 < 1 or not 0 <= beta2 < 1 or eps <= 0:
        raise CONST.DomainError(f"invalid Adam settings lr={lr}, beta1={beta1}, beta2={beta2}, eps={eps}")
    return AdamState(
        first_moment=[np.zeros_like(a) for a in params.arrays()],
        second_moment=[np.zeros_like(a) for a in params.arrays()],
        lr=lr, beta1=beta1, beta2=beta2, eps=eps,
    )


def adam_step(params: MLPParams, grads: MLPGradients, state: AdamState) -> Tuple[MLPParams, AdamState]:
    """Bias-corrected Adam update, applied in place; the parameter version is bumped."""
    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for value, grad, m, v in zip(params.arrays(), grads.arrays(), state.first_moment, state.second_moment):
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * grad * grad
        value -= state.lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
    params.bump()
    return params, state


@dataclass
class EMAState:
    """Shadow parameters used for simulation.

    With warmup the effective decay is min(decay, (1 + k) / (10 + k)) at the
    k-th update, so short runs are not dominated by the initialisation.
    """
    shadow: MLPParams
    decay: float = CONST.EMA_DECAY
    warmup: bool = False
    updates: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.decay <= 1.0:
            raise CONST.DomainError(f"EMA decay must lie in [0, 1], got {self.decay}")

    @property
    def effective_decay(self) -> float:
        if not self.warmup:
            return self.decay
        return min(self.decay, (1.0 + self.updates) / (10.0 + self.updates))


def ema_init(params: MLPParams, decay: float = CONST.EMA_DECAY, warmup: bool = False) -> EMAState:
    return EMAState(shadow=params.copy(), decay=decay, warmup=warmup)


def ema_update(ema: EMAState, params: MLPParams) -> EMAState:
    """shadow <- decay * shadow + (1 - decay) * params."""
    decay = ema.effective_decay
    for shadow, value in zip(ema.shadow.arrays(), params.arrays()):
        shadow *= decay
        shadow += (1.0 - decay) * value
    ema.updates += 1
    ema.shadow.bump()
    return ema


_HEADER = struct.Struct("<IQ")
_SHAPE = struct.Struct("<II")


def checkpoint_bytes(params: MLPParams) -> bytes:
    """MLPV1: magic, u32 layer count, u64 init seed, (u32 fan_in, u32 fan_out) per layer, float64 weights then biases."""
    shapes = params.spec.layer_shapes
    parts = [CONST.CHECKPOINT_MAGIC, _HEADER.pack(len(shapes), params.spec.init_seed)]
    parts.extend(_SHAPE.pack(fan_in, fan_out) for fan_in, fan_out in shapes)
    for weight, bias in zip(params.weights, params.biases):
        parts.append(weight.astype("<f8").tobytes(order="C"))
        parts.append(bias.astype("<f8").tobytes(order="C"))
    return b"".join(parts)


def load_checkpoint_bytes(payload: bytes) -> MLPParams:
    """Inverse of checkpoint_bytes.

    Raises:
        DomainError: bad magic, truncated payload or inconsistent layer table.
    """
    magic = CONST.CHECKPOINT_MAGIC
    if payload[:len(magic)] != magic:
        raise CONST.DomainError("not an MLPV1 checkpoint")
    offset = len(magic)
    try:
        n_layers, init_seed = _HEADER.unpack_from(payload, offset)
        offset += _HEADER.size
        shapes = []
        for _ in range(n_layers):
            shapes.append(_SHAPE.unpack_from(payload, offset))
            offset += _SHAPE.size
    except struct.error as error:
        raise CONST.DomainError(f"truncated MLPV1 header: {error}") from error
    if n_layers < 1 or any(shapes[i][1] != shapes[i + 1][0] for i in range(n_layers - 1)):
        raise CONST.DomainError("MLPV1 layer table is inconsistent")
    spec = MLPSpec(
        input_dim=shapes[0][0],
        hidden_widths=tuple(fan_out for _, fan_out in shapes[:-1]),
        output_dim=shapes[-1][1],
        init_seed=init_seed,
    )
    weights = []
    biases = []
    for fan_in, fan_out in shapes:
        count = fan_in * fan_out + fan_out
        if len(payload) < offset + 8 * count:
            raise CONST.DomainError("truncated MLPV1 payload")
        values = np.frombuffer(payload, dtype="<f8", count=count, offset=offset).astype(np.float64)
        weights.append(values[:fan_in * fan_out].reshape(fan_in, fan_out).copy())
        biases.append(values[fan_in * fan_out:].copy())
        offset += 8 * count
    if offset != len(payload):
        raise CONST.DomainError("trailing bytes after MLPV1 payload")
    return MLPParams(spec, weights, biases)
