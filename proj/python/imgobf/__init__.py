"""Deterministic image obfuscations and super-class evaluation."""

import json
from pathlib import Path

from . import _core
from ._core import Error, list_obfuscations, sample_params

__version__ = _core.__version__

_PACKAGED_ASSETS = Path(__file__).with_name("assets")


def obfuscate(image, name, seed, image_id="", overrides=None, assets=None):
    """Apply one obfuscation to an (H, W, 3) array of values in [0, 1].

    Parameters are drawn from the seed triple (seed, image_id, name) exactly
    as the corpus pipeline draws them; `overrides` replaces individual values.
    """
    if assets is None and (_PACKAGED_ASSETS / "manifest.json").exists():
        assets = _PACKAGED_ASSETS
    return _core.obfuscate(image, name, seed, image_id, dict(overrides or {}), str(assets or ""))


def evaluate(predictions, labels, k=(), unweighted=True, confusion=False, worst_case=(), oracle=None):
    """Score {model: {obfuscation: {image_id: probabilities}}} against
    {image_id: class_id}. Vectors of length 16 are taken as super-class
    probabilities. Returns the report as nested dicts."""
    text = _core.evaluate_json(
        predictions, labels, list(k), unweighted, confusion, list(worst_case), oracle or ""
    )
    return json.loads(text)


def superclass_table():
    return json.loads(_core.superclass_table_json())


__all__ = [
    "Error",
    "evaluate",
    "list_obfuscations",
    "obfuscate",
    "sample_params",
    "superclass_table",
]
