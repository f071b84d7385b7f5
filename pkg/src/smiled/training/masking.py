"""Token corruption for masked-LM training.

15% of maskable positions are selected; of those, 80% become [MASK], 10%
a random non-special token, 10% stay unchanged.  [PAD]/[BOS]/[EOS] are
never selected.  All draws come from the caller's generator in a fixed
order, so a fixed seed reproduces the exact corruption.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..tokenizer import BOS_ID, EOS_ID, MASK_ID, PAD_ID, SPECIALS


@dataclass(frozen=True)
class MaskingPolicy:
    select_frac: float = 0.15
    mask_frac: float = 0.80
    random_frac: float = 0.10
    keep_frac: float = 0.10
    seed: int | None = None

    def __post_init__(self):
        for frac in (self.select_frac, self.mask_frac, self.random_frac, self.keep_frac):
            if not 0.0 <= frac <= 1.0:
                raise ValueError("masking fractions must lie in [0, 1]")
        if abs(self.mask_frac + self.random_frac + self.keep_frac - 1.0) > 1e-9:
            raise ValueError("mask + random + keep fractions must sum to 1")


def apply_masking(
    ids: np.ndarray,
    policy: MaskingPolicy,
    rng: np.random.Generator,
    vocab_size: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Return (corrupted ids, target mask).  The target mask marks exactly
    the selected positions; sequences with nothing maskable come back with
    an all-zero mask."""
    ids = np.asarray(ids)
    maskable = ~np.isin(ids, (PAD_ID, BOS_ID, EOS_ID))

    # Draw over the full shape regardless of content so the stream layout
    # is stable.
    selected = (rng.random(ids.shape) < policy.select_frac) & maskable
    action = rng.random(ids.shape)
    random_tokens = rng.integers(len(SPECIALS), max(vocab_size, len(SPECIALS) + 1), size=ids.shape)

    corrupted = ids.copy()
    to_mask = selected & (action < policy.mask_frac)
    to_random = selected & (action >= policy.mask_frac) & (
        action < policy.mask_frac + policy.random_frac
    )
    corrupted[to_mask] = MASK_ID
    corrupted[to_random] = random_tokens[to_random]
    return corrupted, selected
