"""Edit dataset parsing: EditVAL-style nesting and the MagicBrush adapter."""

import json

import pytest

from pixlens.dataset import load_edit_dataset
from pixlens.errors import DatasetError
from pixlens.model import EditType


def write(tmp_path, payload, name="edits.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_empty_dataset(tmp_path):
    dataset = load_edit_dataset(write(tmp_path, {}))
    assert dataset.edits == []
    assert dataset.violations == {}


def test_size_edit_parses(tmp_path):
    payload = {
        "stop sign": {
            "000000391895": [
                {
                    "edit_type": "size_change",
                    "from": "none",
                    "to": "larger",
                    "prompt": "Make the stop sign larger",
                }
            ]
        }
    }
    dataset = load_edit_dataset(write(tmp_path, payload))
    assert len(dataset.edits) == 1
    edit = dataset.edits[0]
    assert edit.edit_type is EditType.SIZE_CHANGE
    assert edit.category == "stop sign"
    assert edit.image_id == "000000391895"
    assert edit.from_attr is None
    assert edit.edit_id == "stop sign-000000391895-000"
    assert dataset.violations == {}


def test_unknown_edit_type_is_schema_error(tmp_path):
    payload = {"dog": {"1": [{"edit_type": "viewpoint_change", "to": "x"}]}}
    with pytest.raises(DatasetError):
        load_edit_dataset(write(tmp_path, payload))


def test_duplicate_edit_id_rejected(tmp_path):
    record = {"edit_id": "dup", "edit_type": "object_addition", "to": "dog"}
    payload = {"dog": {"1": [record, dict(record)]}}
    with pytest.raises(DatasetError):
        load_edit_dataset(write(tmp_path, payload))


def test_instruction_violations_collected_not_fatal(tmp_path):
    payload = {"dog": {"1": [{"edit_id": "bad", "edit_type": "object_replacement", "to": "kid"}]}}
    dataset = load_edit_dataset(write(tmp_path, payload))
    assert dataset.violations == {"bad": ["missing from"]}


def test_record_category_overrides_outer_key(tmp_path):
    payload = {
        "outer": {"1": [{"edit_type": "object_addition", "to": "dog", "category": "inner"}]}
    }
    dataset = load_edit_dataset(write(tmp_path, payload))
    assert dataset.edits[0].category == "inner"


def test_missing_file_raises(tmp_path):
    with pytest.raises(DatasetError):
        load_edit_dataset(tmp_path / "absent.json")


def test_invalid_json_raises(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(DatasetError):
        load_edit_dataset(path)


def test_magicbrush_adapter(tmp_path):
    payload = {
        "edits": [
            {
                "edit_id": "mb-1",
                "image_id": "417d",
                "prompt": "let the dog wear a sweater",
                "attributes": {
                    "edit_type": "alter_parts",
                    "category": "dog",
                    "from": "none",
                    "to": "sweater",
                },
            }
        ]
    }
    dataset = load_edit_dataset(write(tmp_path, payload), source="magicbrush-adapted")
    assert dataset.source == "magicbrush-adapted"
    edit = dataset.edits[0]
    assert edit.edit_type is EditType.ALTER_PARTS
    assert edit.category == "dog"
    assert edit.to == "sweater"
    assert edit.prompt == "let the dog wear a sweater"


def test_magicbrush_missing_attributes_table(tmp_path):
    payload = {"edits": [{"edit_id": "mb-1", "image_id": "x", "prompt": "p"}]}
    with pytest.raises(DatasetError):
        load_edit_dataset(write(tmp_path, payload), source="magicbrush-adapted")


def test_unknown_source_rejected(tmp_path):
    with pytest.raises(ValueError):
        load_edit_dataset(write(tmp_path, {}), source="imagenet")


def test_by_image_grouping(tmp_path):
    payload = {
        "dog": {
            "1": [
                {"edit_id": "a", "edit_type": "object_addition", "to": "ball"},
                {"edit_id": "b", "edit_type": "object_removal", "to": ""},
            ],
            "2": [{"edit_id": "c", "edit_type": "object_addition", "to": "hat"}],
        }
    }
    dataset = load_edit_dataset(write(tmp_path, payload))
    grouped = dataset.by_image()
    assert sorted(grouped) == ["1", "2"]
    assert [e.edit_id for e in grouped["1"]] == ["a", "b"]
