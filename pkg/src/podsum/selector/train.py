"""Gradient-descent training loop for the salience model.

Plain fixed-rate descent, one episode's candidate sequence per step
(or one full-batch step per epoch). Sequential fixed-order accumulation
keeps runs bit-reproducible for a given seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from podsum.errors import TrainingError, ValidationError
from podsum.selector import model as selector_model

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpisodeExamples:
    """Training rows for one episode's candidate sequence.

    bits: (T, n_bits) 0/1 floats; context: (T, d_model); labels: (T,) in {0,1}.
    Positions are implicit: candidate slot 0..T-1.
    """

    episode_id: str
    bits: np.ndarray
    context: np.ndarray
    labels: np.ndarray


@dataclass(frozen=True)
class TrainResult:
    params: Dict[str, np.ndarray]
    config: selector_model.ModelConfig
    losses: Tuple[float, ...]  # [0] at init, [k] after epoch k


def _validate_dataset(dataset: List[EpisodeExamples], config) -> int:
    if not dataset:
        raise ValidationError("training dataset is empty")
    n_bits = np.asarray(dataset[0].bits).shape[1]
    for ep in dataset:
        bits = np.asarray(ep.bits)
        ctx = np.asarray(ep.context)
        labels = np.asarray(ep.labels)
        t = bits.shape[0]
        if t == 0:
            raise ValidationError("episode %s has no candidates" % ep.episode_id)
        if bits.shape[1] != n_bits:
            raise ValidationError(
                "episode %s has %d surface bits, expected %d"
                % (ep.episode_id, bits.shape[1], n_bits)
            )
        if ctx.shape != (t, config.d_model):
            raise ValidationError(
                "episode %s context shape %s, expected (%d, %d)"
                % (ep.episode_id, ctx.shape, t, config.d_model)
            )
        if labels.shape != (t,):
            raise ValidationError("episode %s labels misshaped" % ep.episode_id)
        if not np.isin(labels, (0, 1)).all():
            raise ValidationError("episode %s labels must be 0/1" % ep.episode_id)
        if t > config.max_positions:
            raise ValidationError(
                "episode %s has %d candidates, max_positions is %d"
                % (ep.episode_id, t, config.max_positions)
            )
    return n_bits


def _episode_batch(ep: EpisodeExamples):
    bits = np.asarray(ep.bits, dtype=np.float64)[None, :, :]
    ctx = np.asarray(ep.context, dtype=np.float64)[None, :, :]
    labels = np.asarray(ep.labels, dtype=np.intp)[None, :]
    positions = np.arange(labels.shape[1])[None, :]
    return bits, ctx, positions, labels


def dataset_loss(params, dataset, config) -> float:
    """Candidate-weighted mean cross-entropy over the whole dataset."""
    total = 0.0
    count = 0
    for ep in dataset:
        bits, ctx, positions, labels = _episode_batch(ep)
        loss, _ = selector_model.loss_and_grads(
            params, bits, ctx, positions, labels, config
        )
        t = labels.shape[1]
        total += loss * t
        count += t
    return total / count


def dataset_accuracy(params, dataset, config) -> float:
    """Fraction of candidates whose thresholded probability matches the label."""
    hits = 0
    count = 0
    for ep in dataset:
        probs = selector_model.score_candidates(ep.bits, ep.context, params, config)
        preds = (probs > 0.5).astype(int)
        hits += int((preds == np.asarray(ep.labels)).sum())
        count += len(preds)
    return hits / count


def _full_batch_grads(params, dataset, config):
    """Gradient of the global candidate-mean loss, accumulated in order."""
    total_loss = 0.0
    count = 0
    acc = None
    for ep in dataset:
        bits, ctx, positions, labels = _episode_batch(ep)
        loss, grads = selector_model.loss_and_grads(
            params, bits, ctx, positions, labels, config
        )
        t = labels.shape[1]
        total_loss += loss * t
        count += t
        if acc is None:
            acc = {k: g * t for k, g in grads.items()}
        else:
            for k, g in grads.items():
                acc[k] += g * t
    for k in acc:
        acc[k] /= count
    return total_loss / count, acc


def train(dataset: List[EpisodeExamples], config) -> TrainResult:
    """Fit params to the dataset; returns final params and loss trajectory."""
    n_bits = _validate_dataset(dataset, config)
    params = selector_model.init_params(config, n_surface_bits=n_bits)
    lr = config.learning_rate

    losses = [dataset_loss(params, dataset, config)]
    for epoch in range(config.epochs):
        if config.full_batch:
            _, grads = _full_batch_grads(params, dataset, config)
            for k in params:
                params[k] = params[k] - lr * grads[k]
        else:
            for ep in dataset:
                bits, ctx, positions, labels = _episode_batch(ep)
                _, grads = selector_model.loss_and_grads(
                    params, bits, ctx, positions, labels, config
                )
                for k in params:
                    params[k] = params[k] - lr * grads[k]
        epoch_loss = dataset_loss(params, dataset, config)
        if not np.isfinite(epoch_loss):
            raise TrainingError(
                "loss became non-finite after epoch %d (lr=%g); "
                "reduce the learning rate" % (epoch + 1, lr)
            )
        losses.append(epoch_loss)
        log.debug("epoch %d loss %.6f", epoch + 1, epoch_loss)

    return TrainResult(params=params, config=config, losses=tuple(losses))
