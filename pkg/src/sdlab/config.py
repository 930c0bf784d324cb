from __future__ import annotations

import os
from dataclasses import dataclass

from .dilation import DEFAULT_GRID
from .kms import SPECHT_MAX_DEGREE
from .numrange import DEFAULT_SAMPLES

SEED_ENV = "SDLAB_SEED"


@dataclass(frozen=True)
class RunConfig:
    grid_size: int = DEFAULT_GRID
    tol: float | None = None  # None: each operation's own default
    max_word_degree: int = SPECHT_MAX_DEGREE
    boundary_samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self):
        if self.grid_size < 8 or self.max_word_degree < 1 or self.boundary_samples < 8:
            raise ValueError("grid_size, max_word_degree and boundary_samples out of range")
        if self.tol is not None and self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


def resolve_seed(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(SEED_ENV)
    return int(env) if env else 0
