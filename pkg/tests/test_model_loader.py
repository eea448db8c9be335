"""Tests for model file loading and the bundled model catalog."""

from pathlib import Path

import pytest

from lib.model import ModelFormatError
from lib.model_catalog import ModelCatalog
from lib.model_loader import load_model, save_model


class TestLoadModel:
    def test_bundled_chain(self, models_dir):
        model = load_model(str(models_dir / "spin_chain.json"))
        assert model.name == "spin_chain"
        assert model.n_qubits == 3
        assert len(model.terms) == 5
        assert model.shift == 4.0

    def test_missing_file_has_hint(self, tmp_path):
        with pytest.raises(FileNotFoundError) as excinfo:
            load_model(str(tmp_path / "absent.json"))
        assert "probe.py models" in str(excinfo.value)

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"qubits": 1, "terms": [', encoding="utf-8")
        with pytest.raises(ModelFormatError):
            load_model(str(path))

    def test_save_then_load(self, tmp_path, transverse_pair):
        path = tmp_path / "nested" / "pair.json"
        save_model(transverse_pair, str(path))
        assert load_model(str(path)) == transverse_pair


class TestModelCatalog:
    def test_lists_bundled_models(self, models_dir):
        catalog = ModelCatalog(str(models_dir))
        assert catalog.list_models() == ["spin_chain", "spin_chain_c6", "spin_in_field", "transverse_pair"]

    def test_entries_carry_metadata(self, models_dir):
        entries = ModelCatalog(str(models_dir)).load()
        assert entries["spin_chain"]["qubits"] == 3
        assert "chain" in entries["spin_chain"]["description"].lower()

    def test_resolve_name_and_path(self, models_dir):
        catalog = ModelCatalog(str(models_dir))
        assert catalog.resolve("spin_in_field").endswith("spin_in_field.json")
        path = str(models_dir / "spin_chain.json")
        assert catalog.resolve(path) == path
        assert catalog.resolve("no_such_model") == "no_such_model"

    def test_default_path_ignores_working_directory(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert Path(ModelCatalog().resolve("spin_chain")).is_file()

    def test_bad_entry_becomes_warning(self, tmp_path):
        (tmp_path / "good.json").write_text('{"qubits": 1, "terms": []}', encoding="utf-8")
        (tmp_path / "bad.json").write_text("{not json", encoding="utf-8")
        catalog = ModelCatalog(str(tmp_path))
        assert catalog.list_models() == ["good"]
        assert len(catalog.warnings) == 1
        assert "bad.json" in catalog.warnings[0]

    def test_missing_directory(self, tmp_path):
        assert ModelCatalog(str(tmp_path / "none")).load() == {}
