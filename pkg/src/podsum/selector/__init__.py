"""Salience selector: hybrid representations, encoder, training, source building."""

from podsum.selector.embedding import (
    ServiceEmbedder,
    StubEmbedder,
    embed_context,
    hash_embed,
)
from podsum.selector.model import (
    ModelConfig,
    assemble_repr,
    encoder_forward,
    init_params,
    load_params,
    loss_and_grads,
    params_from_json,
    params_to_json,
    predict_salience,
    save_params,
    score_candidates,
)
from podsum.selector.source import SourceText, select_source, truncate_lead
from podsum.selector.train import (
    EpisodeExamples,
    TrainResult,
    dataset_accuracy,
    dataset_loss,
    train,
)

__all__ = [
    "EpisodeExamples",
    "ModelConfig",
    "ServiceEmbedder",
    "SourceText",
    "StubEmbedder",
    "TrainResult",
    "assemble_repr",
    "dataset_accuracy",
    "dataset_loss",
    "embed_context",
    "encoder_forward",
    "hash_embed",
    "init_params",
    "load_params",
    "loss_and_grads",
    "params_from_json",
    "params_to_json",
    "predict_salience",
    "save_params",
    "score_candidates",
    "select_source",
    "train",
    "truncate_lead",
]
