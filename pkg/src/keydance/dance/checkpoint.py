"""
dance/checkpoint.py
Checkpoints: a directory with the named parameter container and a JSON
manifest describing how to rebuild the model.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..config import KeydanceConfig
from ..serializers.json_serializer import KeydanceSerializer
from ..storage.container import read_container, write_container
from ..utils.exceptions import FormatError
from ..utils.logging import get_logger
from .network import DanceModelWeights

logger = get_logger(__name__)

WEIGHTS_FILE = 'weights.mdrc'
MANIFEST_FILE = 'checkpoint.json'
CHECKPOINT_FORMAT = 1

@dataclass
class Checkpoint:
    weights: DanceModelWeights
    config: KeydanceConfig
    step: int
    extra: Dict[str, Any]

def save_checkpoint(directory: Union[str, Path], weights: DanceModelWeights, config: KeydanceConfig,
                    step: int, extra: Optional[Dict[str, Any]] = None) -> Path:
    """
    Write weights.mdrc and checkpoint.json into `directory`.

    The manifest holds the full config (model, loss params, schedule, seed), the
    step count and the ordered parameter names. No timestamps, so identical runs
    give identical bytes.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    state = weights.state_dict()
    write_container(directory / WEIGHTS_FILE, state)
    manifest = {
        'format': CHECKPOINT_FORMAT,
        'config': config.to_dict(),
        'seed': config.seed,
        'step': int(step),
        'parameters': list(state),
        'num_parameters': weights.num_parameters(),
        'extra': extra or {},
    }
    (directory / MANIFEST_FILE).write_text(KeydanceSerializer.to_json_string(manifest, indent=2) + '\n')
    logger.info(f"Saved checkpoint at step {step} to {directory}")
    return directory

def load_checkpoint(directory: Union[str, Path]) -> Checkpoint:
    """
    Rebuild the model from a checkpoint directory.

    Raises:
        FormatError: missing files, unknown format or mismatched parameters
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_FILE
    try:
        manifest = json.loads(manifest_path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"cannot read checkpoint manifest {manifest_path}: {e}")
    if manifest.get('format') != CHECKPOINT_FORMAT:
        raise FormatError(f"unsupported checkpoint format {manifest.get('format')!r}")

    config = KeydanceConfig.from_dict(manifest.get('config', {}))
    state = read_container(directory / WEIGHTS_FILE)
    if list(state) != manifest.get('parameters'):
        raise FormatError("checkpoint container and manifest list different parameters")
    weights = DanceModelWeights(config.model, seed=config.seed)
    weights.load_state_dict(state)
    logger.info(f"Loaded checkpoint from {directory} (step {manifest.get('step')})")
    return Checkpoint(weights=weights, config=config, step=int(manifest.get('step', 0)),
                      extra=manifest.get('extra', {}))
