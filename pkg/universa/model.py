#
# universa - unified multi-metric speech quality profiler.
#
# Copyright (C) 2025 - 2026 by universa developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
#

"""
Universa network.

The network encodes target audio features, reference audio features and
reference text tokens with three transformer encoders. Two residual
cross-attention modules align hidden states of reference audio, then of
reference text, with hidden states of the target audio. Mean-pooled
fused hidden states are projected by one linear head per metric.

Disabled reference encoders and their cross-attention modules are not
created at all.
"""

from __future__ import annotations

import dataclasses as dtc
import logging
import math

import torch
from torch import nn

from .config import FBANK_DIMS
from .error import ConfigurationError, NonFiniteLossError
from .metric import check_metric_ids, metric_ids
from .prepare import Batch

logger = logging.getLogger(__name__)

@dtc.dataclass(frozen=True)
class ModelConfig:
    """
    Universa network configuration.

    :var metric_ids: Predicted metrics, in metric registry order.
    :var feature_dim: Dimension of target audio features.
    :var ref_feature_dim: Dimension of reference audio features.
    :var text_vocab_size: Size of reference text vocabulary.
    :var d_model: Dimension of hidden states.
    :var heads: Number of attention heads.
    :var layers: Number of transformer layers of each encoder.
    :var ffn_dim: Dimension of feed-forward layers.
    :var dropout: Dropout rate.
    :var use_ref_audio: Enable reference audio encoder.
    :var use_ref_text: Enable reference text encoder.
    """
    metric_ids: tuple[str, ...] = dtc.field(default_factory=metric_ids)
    feature_dim: int = FBANK_DIMS
    ref_feature_dim: int = FBANK_DIMS
    text_vocab_size: int = 503
    d_model: int = 256
    heads: int = 4
    layers: int = 4
    ffn_dim: int = 1024
    dropout: float = 0.1
    use_ref_audio: bool = True
    use_ref_text: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, 'metric_ids', check_metric_ids(self.metric_ids))

        sizes = (
            self.feature_dim, self.ref_feature_dim, self.text_vocab_size,
            self.d_model, self.heads, self.layers, self.ffn_dim,
        )
        if any(v < 1 for v in sizes):
            raise ConfigurationError('Model dimensions have to be positive')
        if self.d_model % self.heads:
            raise ConfigurationError(
                'Hidden state dimension {} not divisible by number of heads {}'
                .format(self.d_model, self.heads)
            )
        if not 0 <= self.dropout < 1:
            raise ConfigurationError('Invalid dropout rate: {}'.format(self.dropout))

class PositionalEncoding(nn.Module):
    """
    Sinusoidal positional encoding followed by dropout.
    """
    def __init__(self, d_model: int, dropout: float):
        super().__init__()
        self.d_model = d_model
        self.dropout = nn.Dropout(dropout)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        size = x.shape[1]
        d = self.d_model
        pos = torch.arange(size, dtype=x.dtype, device=x.device)[:, None]
        i = torch.arange(0, d, 2, dtype=x.dtype, device=x.device)
        angle = pos * torch.exp(-math.log(10000.0) * i / d)

        pe = torch.zeros(size, d, dtype=x.dtype, device=x.device)
        pe[:, 0::2] = torch.sin(angle)
        pe[:, 1::2] = torch.cos(angle)[:, :d // 2]
        return self.dropout(x + pe)

class Encoder(nn.Module):
    """
    Transformer encoder with input embedding.

    The encoder consists of pre-norm transformer layers with final layer
    normalization.
    """
    def __init__(self, embed: nn.Module, config: ModelConfig):
        super().__init__()
        self.embed = embed
        self.pos = PositionalEncoding(config.d_model, config.dropout)
        layer = nn.TransformerEncoderLayer(
            config.d_model,
            config.heads,
            config.ffn_dim,
            config.dropout,
            activation='gelu',
            batch_first=True,
            norm_first=True,
        )
        self.layers = nn.TransformerEncoder(
            layer, config.layers, enable_nested_tensor=False
        )
        self.norm = nn.LayerNorm(config.d_model)

    def forward(self, x: torch.Tensor, mask: torch.Tensor | None=None) -> torch.Tensor:
        h = self.pos(self.embed(x))
        h = self.layers(h, src_key_padding_mask=mask)
        return self.norm(h)

class CrossAttention(nn.Module):
    """
    Residual cross-attention with target hidden states as query.
    """
    def __init__(self, config: ModelConfig):
        super().__init__()
        self.norm = nn.LayerNorm(config.d_model)
        self.attn = nn.MultiheadAttention(
            config.d_model, config.heads, dropout=config.dropout, batch_first=True
        )
        self.dropout = nn.Dropout(config.dropout)

    def forward(
            self,
            query: torch.Tensor,
            memory: torch.Tensor,
            mask: torch.Tensor | None=None,
        ) -> torch.Tensor:
        q = self.norm(query)
        out, _ = self.attn(q, memory, memory, key_padding_mask=mask, need_weights=False)
        return query + self.dropout(out)

class UniVersa(nn.Module):
    """
    Universa network.

    Padding masks of all methods are true for padded positions.
    """
    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        d = config.d_model

        self.target_encoder = Encoder(nn.Linear(config.feature_dim, d), config)

        self.ref_audio_encoder: Encoder | None = None
        self.audio_fusion: CrossAttention | None = None
        if config.use_ref_audio:
            self.ref_audio_encoder = Encoder(nn.Linear(config.ref_feature_dim, d), config)
            self.audio_fusion = CrossAttention(config)

        self.ref_text_encoder: Encoder | None = None
        self.text_fusion: CrossAttention | None = None
        if config.use_ref_text:
            self.ref_text_encoder = Encoder(nn.Embedding(config.text_vocab_size, d), config)
            self.text_fusion = CrossAttention(config)

        self.heads = nn.ModuleDict({m: nn.Linear(d, 1) for m in config.metric_ids})
        self.reset_parameters()

    def reset_parameters(self) -> None:
        """
        Initialize weight matrices with Xavier-uniform distribution and
        biases with zeros.
        """
        for module in self.modules():
            if isinstance(module, nn.Linear):
                nn.init.xavier_uniform_(module.weight)
                if module.bias is not None:
                    nn.init.zeros_(module.bias)
            elif isinstance(module, nn.Embedding):
                nn.init.xavier_uniform_(module.weight)
            elif isinstance(module, nn.MultiheadAttention):
                nn.init.xavier_uniform_(module.in_proj_weight)
                nn.init.zeros_(module.in_proj_bias)

    def encode_target(
            self, features: torch.Tensor, mask: torch.Tensor | None=None
        ) -> torch.Tensor:
        """
        Encode target audio features of shape `(batch, frames, dims)`.
        """
        _check_dim(features, self.config.feature_dim, 'target')
        return self.target_encoder(features, mask)

    def encode_ref_audio(
            self, features: torch.Tensor, mask: torch.Tensor | None=None
        ) -> torch.Tensor:
        """
        Encode reference audio features of shape `(batch, frames, dims)`.
        """
        if self.ref_audio_encoder is None:
            raise ConfigurationError('Reference audio encoder is disabled')
        _check_dim(features, self.config.ref_feature_dim, 'reference audio')
        return self.ref_audio_encoder(features, mask)

    def encode_ref_text(
            self, tokens: torch.Tensor, mask: torch.Tensor | None=None
        ) -> torch.Tensor:
        """
        Encode reference text tokens of shape `(batch, tokens)`.
        """
        if self.ref_text_encoder is None:
            raise ConfigurationError('Reference text encoder is disabled')
        size = self.config.text_vocab_size
        if tokens.numel() and (tokens.min() < 0 or tokens.max() >= size):
            raise ConfigurationError(
                'Token id out of range of vocabulary of size {}'.format(size)
            )
        return self.ref_text_encoder(tokens, mask)

    def fuse(
            self,
            target_h: torch.Tensor,
            ref_audio_h: torch.Tensor | None=None,
            ref_audio_mask: torch.Tensor | None=None,
            ref_text_h: torch.Tensor | None=None,
            ref_text_mask: torch.Tensor | None=None,
        ) -> torch.Tensor:
        """
        Align reference audio, then reference text hidden states with
        target hidden states.
        """
        h = _fuse(self.audio_fusion, target_h, ref_audio_h, ref_audio_mask, 'audio')
        return _fuse(self.text_fusion, h, ref_text_h, ref_text_mask, 'text')

    def predict(self, fused: torch.Tensor, mask: torch.Tensor | None=None) -> torch.Tensor:
        """
        Predict normalized metric values from fused hidden states.

        Result is tensor of shape `(batch, metrics)` with metrics in
        order of model configuration.
        """
        if mask is None:
            pooled = fused.mean(dim=1)
        else:
            valid = (~mask).unsqueeze(-1).to(fused.dtype)
            pooled = (fused * valid).sum(dim=1) / valid.sum(dim=1)
        return torch.cat([self.heads[m](pooled) for m in self.config.metric_ids], dim=-1)

    def forward(self, batch: Batch) -> torch.Tensor:
        h = self.encode_target(batch.features, batch.feature_mask)

        ref_audio_h = None
        if self.ref_audio_encoder is not None:
            if batch.ref_features is None:
                raise ConfigurationError('Reference audio features required')
            ref_audio_h = self.encode_ref_audio(batch.ref_features, batch.ref_feature_mask)

        ref_text_h = None
        if self.ref_text_encoder is not None:
            if batch.tokens is None:
                raise ConfigurationError('Reference text tokens required')
            ref_text_h = self.encode_ref_text(batch.tokens, batch.token_mask)

        fused = self.fuse(
            h, ref_audio_h, batch.ref_feature_mask, ref_text_h, batch.token_mask
        )
        return self.predict(fused, batch.feature_mask)

def utterance_losses(
        raw: torch.Tensor,
        target: torch.Tensor,
        mask: torch.Tensor,
        order: int=1,
    ) -> torch.Tensor:
    """
    Calculate masked loss of each utterance of a batch.

    Absent metrics contribute zero to the loss and its gradient, whatever
    values their targets have.

    :param raw: Normalized predictions of shape `(batch, metrics)`.
    :param target: Normalized targets of shape `(batch, metrics)`.
    :param mask: Label presence flags of shape `(batch, metrics)`.
    :param order: Norm order of the error.
    """
    if raw.shape != target.shape or raw.shape != mask.shape:
        raise ConfigurationError(
            'Shapes of predictions {}, targets {} and mask {} differ'
            .format(tuple(raw.shape), tuple(target.shape), tuple(mask.shape))
        )
    if order < 1:
        raise ConfigurationError('Invalid norm order: {}'.format(order))

    target = torch.where(mask, target, raw.detach())
    err = (raw - target).abs()
    if order != 1:
        err = err ** order
    return torch.where(mask, err, torch.zeros_like(err)).sum(dim=-1)

def masked_l1_loss(
        raw: torch.Tensor,
        target: torch.Tensor,
        mask: torch.Tensor,
        order: int=1,
    ) -> torch.Tensor:
    """
    Calculate masked loss summed over metrics and utterances.

    .. seealso:: :py:func:`utterance_losses`
    """
    return utterance_losses(raw, target, mask, order).sum()

def forward_backward(
        model: UniVersa, batch: Batch, order: int=1
    ) -> tuple[torch.Tensor, dict[str, torch.Tensor]]:
    """
    Calculate loss of a batch and gradients of model parameters.

    Gradients are left in the parameters and are returned as well, keyed
    by parameter name.

    :param model: Universa network.
    :param batch: Batch of prepared inputs.
    :param order: Norm order of the loss.
    """
    model.zero_grad(set_to_none=True)
    raw = model(batch)
    losses = utterance_losses(raw, batch.target, batch.mask, order)

    bad = ~torch.isfinite(losses)
    if bad.any():
        uids = [batch.uids[i] for i in bad.nonzero().flatten().tolist()]
        raise NonFiniteLossError(uids)

    loss = losses.sum()
    loss.backward()
    grads = {
        n: p.grad if p.grad is not None else torch.zeros_like(p)
        for n, p in model.named_parameters()
    }
    return loss.detach(), grads

def _check_dim(features: torch.Tensor, dim: int, name: str) -> None:
    if features.ndim != 3 or features.shape[-1] != dim:
        raise ConfigurationError(
            'Expected {} features of dimension {}, got shape {}'
            .format(name, dim, tuple(features.shape))
        )

def _fuse(
        fusion: CrossAttention | None,
        h: torch.Tensor,
        ref_h: torch.Tensor | None,
        mask: torch.Tensor | None,
        name: str,
    ) -> torch.Tensor:
    if fusion is None:
        if ref_h is not None:
            raise ConfigurationError('Reference {} encoder is disabled'.format(name))
        return h
    if ref_h is None:
        raise ConfigurationError('Reference {} hidden states required'.format(name))
    return fusion(h, ref_h, mask)

# vim: sw=4:et:ai
