"""
Shared helpers for SkinLock commands.
"""

import numpy as np

from ..data import RunWriter
from ..models import RunConfig


def as_model(config: RunConfig, model: str) -> RunConfig:
    """The configuration with its model switched, when a command is tied to one family."""
    if config.model == model:
        return config
    data = config.to_dict()
    data['model'] = model
    return RunConfig.from_dict(data)


def open_writer(config: RunConfig) -> RunWriter:
    return RunWriter(config.out_dir, config.to_dict())


def argmax_site(values) -> int:
    """1-based site of the largest entry."""
    return int(np.argmax(np.asarray(values))) + 1
