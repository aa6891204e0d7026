"""Seeded synthetic-ensemble generator and a Monte Carlo accuracy estimator.

Corpora are reproducible down to the bit from a single 64-bit seed, across
machines and (given this documented protocol) across reimplementations.

Random source
-------------
All randomness comes from Philox4x64-10 keyed with ``SynthConfig.seed``.
Sample ``i`` owns the counter region starting at ``i * 2**64`` and consumes a
single block of float64 uniforms in the layout below; integer draws are
``floor(u * n)``. This is what makes parallel generation safe: partitioning
by sample index cannot change the corpus.

Per-sample uniform layout (``L`` = plate_length, ``A`` = alphabet size)::

    L                  ground-truth symbols           floor(u * A)
    per model, in id order:
      L                substitution events            event iff u < sub_rate
      L                substitution offsets           floor(u * (A-1)); the
                                                      wrong symbol is
                                                      (true + 1 + off) % A
      3 (if insertion_rate > 0)
                       event / position / symbol      pos = floor(u*(len+1))
      2 (if deletion_rate > 0)
                       event / position               pos = floor(u*len)
      1                confidence                     mean + (2u-1)*spread,
                                                      clamped to [0, 1]

Substitutions apply first, then at most one insertion, then at most one
deletion (skipped if it would empty the prediction). The confidence
distribution is the "correct" one when the finished prediction equals the
ground truth, or always when the model is flagged overconfident; otherwise
the "wrong" one. The numeric confidence defaults below are a construction of
this package, not measurements.

The Monte Carlo estimator draws from the same keyed generator at counter
``2**128`` (disjoint from every sample region), so it is statistically
independent of the corpus while still fully determined by the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import errors
from .core import DEFAULT_ALPHABET, Prediction, Sample

_SAMPLE_STRIDE = 1 << 64
_ESTIMATOR_COUNTER = 1 << 128


@dataclass(frozen=True)
class ErrorModel:
    """Noise profile of one synthetic recognizer.

    ``per_char_sub_rate`` is the independent per-position substitution
    probability; insertions/deletions happen at most once per prediction.
    Confidences are uniform on mean +/- spread, clamped to [0, 1]. An
    overconfident model draws wrong predictions' confidences from the
    "correct" distribution, so its confidence carries no signal.
    """

    per_char_sub_rate: float = 0.1
    insertion_rate: float = 0.0
    deletion_rate: float = 0.0
    confidence_when_correct: tuple[float, float] = (0.92, 0.06)
    confidence_when_wrong: tuple[float, float] = (0.55, 0.25)
    overconfident: bool = False

    def __post_init__(self):
        if not 0.0 <= self.per_char_sub_rate < 0.5:
            raise errors.InvalidConfig(
                f"per_char_sub_rate must be in [0, 0.5), got {self.per_char_sub_rate!r}"
            )
        for name in ("insertion_rate", "deletion_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 0.2:
                raise errors.InvalidConfig(
                    f"{name} must be in [0, 0.2], got {v!r}"
                )
        for name in ("confidence_when_correct", "confidence_when_wrong"):
            pair = getattr(self, name)
            if len(pair) != 2:
                raise errors.InvalidConfig(f"{name} must be a (mean, spread) pair")
            object.__setattr__(self, name, (float(pair[0]), float(pair[1])))
            mean, spread = getattr(self, name)
            if not 0.0 < mean <= 1.0:
                raise errors.InvalidConfig(f"{name} mean must be in (0, 1]")
            if not 0.0 <= spread <= 1.0:
                raise errors.InvalidConfig(f"{name} spread must be in [0, 1]")


@dataclass(frozen=True)
class SynthConfig:
    """Full description of a synthetic corpus."""

    seed: int
    n_models: int
    n_samples: int
    plate_length: int
    alphabet: str = DEFAULT_ALPHABET
    per_model: tuple[ErrorModel, ...] = ()
    dataset: str = "synthetic"

    def __post_init__(self):
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise errors.InvalidConfig("seed must be a 64-bit unsigned integer")
        for name in ("n_models", "n_samples", "plate_length"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise errors.InvalidConfig(f"{name} must be a positive integer")
        if len(self.alphabet) < 2:
            raise errors.InvalidConfig("alphabet needs at least two symbols")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise errors.InvalidConfig("alphabet symbols must be unique")
        if not self.dataset:
            raise errors.InvalidConfig("dataset must be non-empty")
        per_model = tuple(self.per_model)
        if not per_model:
            per_model = tuple(ErrorModel() for _ in range(self.n_models))
        if len(per_model) != self.n_models:
            raise errors.InvalidConfig(
                f"per_model has {len(per_model)} entries for {self.n_models} models"
            )
        object.__setattr__(self, "per_model", per_model)

    def model_ids(self) -> list[str]:
        width = max(2, len(str(self.n_models - 1)))
        return [f"m{i:0{width}d}" for i in range(self.n_models)]


def _draws_per_sample(cfg: SynthConfig) -> int:
    total = cfg.plate_length
    for em in cfg.per_model:
        total += 2 * cfg.plate_length + 1
        if em.insertion_rate > 0:
            total += 3
        if em.deletion_rate > 0:
            total += 2
    return total


def _sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=seed, counter=index * _SAMPLE_STRIDE)
    )


def generate(config: SynthConfig) -> list[Sample]:
    """Materialize the corpus described by ``config``.

    Deterministic for a fixed config; see the module docstring for the exact
    protocol.
    """
    L = config.plate_length
    A = len(config.alphabet)
    alphabet = config.alphabet
    ids = config.model_ids()
    total = _draws_per_sample(config)
    width = len(str(config.n_samples))
    samples = []
    for i in range(config.n_samples):
        block = _sample_rng(config.seed, i).random(total)
        gt_codes = (block[:L] * A).astype(np.int64)
        gt_text = "".join(map(alphabet.__getitem__, gt_codes.tolist()))
        off = L
        predictions = {}
        for model_id, em in zip(ids, config.per_model):
            sub_u = block[off:off + L]
            offsets = block[off + L:off + 2 * L]
            off += 2 * L
            codes = gt_codes.copy()
            mask = sub_u < em.per_char_sub_rate
            if mask.any():
                codes[mask] = (
                    gt_codes[mask] + 1 + (offsets[mask] * (A - 1)).astype(np.int64)
                ) % A
            symbols = codes.tolist()
            if em.insertion_rate > 0:
                ue, up, uc = block[off], block[off + 1], block[off + 2]
                off += 3
                if ue < em.insertion_rate:
                    symbols.insert(int(up * (len(symbols) + 1)), int(uc * A))
            if em.deletion_rate > 0:
                ue, up = block[off], block[off + 1]
                off += 2
                if ue < em.deletion_rate and len(symbols) > 1:
                    del symbols[int(up * len(symbols))]
            text = "".join(map(alphabet.__getitem__, symbols))
            mean, spread = (
                em.confidence_when_correct
                if (text == gt_text or em.overconfident)
                else em.confidence_when_wrong
            )
            conf = float(min(1.0, max(0.0, mean + (2.0 * block[off] - 1.0) * spread)))
            off += 1
            predictions[model_id] = Prediction(text, conf)
        samples.append(Sample(
            sample_id=f"s{i:0{width}d}",
            dataset=config.dataset,
            ground_truth=gt_text,
            predictions=predictions,
        ))
    return samples


def mvcp_accuracy_estimate(config: SynthConfig) -> float:
    """Monte Carlo estimate of per-position-vote sequence accuracy.

    Simulates the error process of ``config`` directly on integer symbol
    grids and tallies positional votes with plain array counting, without
    touching the fusion kernels: an independent oracle for the pipeline that
    generates a corpus and fuses it per position with confidence tie-breaks.
    Only length-preserving configs are supported (insertion and deletion
    rates must be zero).
    """
    for em in config.per_model:
        if em.insertion_rate > 0 or em.deletion_rate > 0:
            raise errors.InvalidConfig(
                "the estimator supports only zero insertion/deletion rates"
            )
    S, K, L, A = (config.n_samples, config.n_models,
                  config.plate_length, len(config.alphabet))
    rng = np.random.Generator(
        np.random.Philox(key=config.seed, counter=_ESTIMATOR_COUNTER)
    )
    gt = (rng.random((S, L)) * A).astype(np.int64)
    sub_u = rng.random((S, K, L))
    offsets = (rng.random((S, K, L)) * (A - 1)).astype(np.int64)
    conf_u = rng.random((S, K))

    rates = np.array([em.per_char_sub_rate for em in config.per_model])
    wrong = (gt[:, None, :] + 1 + offsets) % A
    pred = np.where(sub_u < rates[None, :, None], wrong, gt[:, None, :])

    correct = (pred == gt[:, None, :]).all(axis=2)
    means_c = np.array([em.confidence_when_correct[0] for em in config.per_model])
    spreads_c = np.array([em.confidence_when_correct[1] for em in config.per_model])
    means_w = np.array([em.confidence_when_wrong[0] for em in config.per_model])
    spreads_w = np.array([em.confidence_when_wrong[1] for em in config.per_model])
    overconf = np.array([em.overconfident for em in config.per_model])
    use_c = correct | overconf[None, :]
    mean = np.where(use_c, means_c[None, :], means_w[None, :])
    spread = np.where(use_c, spreads_c[None, :], spreads_w[None, :])
    conf = np.clip(mean + (2.0 * conf_u - 1.0) * spread, 0.0, 1.0)

    counts = np.zeros((S, L, A), dtype=np.int32)
    flat = counts.reshape(S * L, A)
    rows = np.arange(S * L)
    for k in range(K):
        flat[rows, pred[:, k, :].reshape(-1)] += 1
    winner_count = counts.max(axis=2)
    true_count = np.take_along_axis(counts, gt[..., None], axis=2)[..., 0]
    holders = (counts == winner_count[..., None]).sum(axis=2)

    pos_ok = (true_count == winner_count) & (holders == 1)
    # Tied positions are rare; resolve them exactly: among tied symbols the
    # one backed by the highest confidence wins, then lowest model index
    # (matching model-id order, since generated ids sort by index).
    tie_mask = (true_count == winner_count) & (holders > 1)
    for s_idx, p_idx in zip(*np.nonzero(tie_mask)):
        tied = np.nonzero(counts[s_idx, p_idx] == winner_count[s_idx, p_idx])[0]
        best_sym = -1
        best_key = None
        for sym in tied:
            backers = np.nonzero(pred[s_idx, :, p_idx] == sym)[0]
            k_best = max(backers, key=lambda k: (conf[s_idx, k], -k))
            key = (conf[s_idx, k_best], -k_best)
            if best_key is None or key > best_key:
                best_key = key
                best_sym = sym
        pos_ok[s_idx, p_idx] = best_sym == gt[s_idx, p_idx]
    return float(pos_ok.all(axis=1).mean())
