"""
Probe Spectroscopy - Model Catalog
Bundled model files resolvable by name
"""

import json
import os
from pathlib import Path

from lib.config import MODELS_PATH


class ModelCatalog:
    """
    Indexes the model files shipped in the models directory.
    """

    def __init__(self, models_path=MODELS_PATH, verbose=False):
        """
        Initialize the catalog.

        Args:
            models_path: Directory holding model JSON files
            verbose: Print skipped entries
        """
        self.models_path = models_path
        self.verbose = verbose
        self.entries = {}
        self.warnings = []

    def load(self):
        """
        Index every *.json file in the models directory.

        Returns:
            dict: Mapping of model names to {"path", "description", "qubits"}
        """
        if not os.path.exists(self.models_path):
            return {}

        for model_file in sorted(Path(self.models_path).glob("*.json")):
            try:
                with open(model_file, "r", encoding="utf-8") as f:
                    data = json.load(f)
                name = data.get("name", model_file.stem)
                self.entries[name] = {
                    "path": str(model_file),
                    "description": data.get("description", ""),
                    "qubits": data.get("qubits"),
                }
            except (OSError, json.JSONDecodeError, AttributeError) as e:
                message = f"Failed to index model {model_file.name}: {e}"
                self.warnings.append(message)
                if self.verbose:
                    print(f"[Warning] {message}")

        return self.entries

    def resolve(self, name_or_path):
        """
        Map a catalog name to its file; existing paths pass through unchanged.

        Args:
            name_or_path: Bundled model name or filesystem path

        Returns:
            str: Path to a model file (may not exist if neither matched)
        """
        if os.path.exists(name_or_path):
            return name_or_path
        if not self.entries:
            self.load()
        entry = self.entries.get(name_or_path)
        return entry["path"] if entry else name_or_path

    def list_models(self):
        """
        List bundled model names.

        Returns:
            list: Sorted model names
        """
        if not self.entries:
            self.load()
        return sorted(self.entries.keys())
