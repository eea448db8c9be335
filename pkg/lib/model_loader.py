"""
Probe Spectroscopy - Model Loader
Load and save model description files
"""

import os

from lib.model import parse_model, serialize_model


def load_model(model_file):
    """
    Load a spin model from a JSON model file.

    Args:
        model_file: Path to model JSON file

    Returns:
        SpinModel: Validated model
    """
    if not os.path.exists(model_file):
        raise FileNotFoundError(
            f"Model file not found: {model_file}\n"
            "Pass a path to a model JSON file or a bundled model name (see: probe.py models)."
        )

    with open(model_file, "r", encoding="utf-8") as f:
        document = f.read()

    return parse_model(document)


def save_model(model, model_file):
    """
    Write a model as JSON readable by load_model().

    Args:
        model: SpinModel to write
        model_file: Destination path
    """
    directory = os.path.dirname(model_file)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(model_file, "w", encoding="utf-8") as f:
        f.write(serialize_model(model))
