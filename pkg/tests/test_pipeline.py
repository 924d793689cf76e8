"""End-to-end evaluation runs over the synthetic 6-edit fixture."""

import dataclasses
import json

import pytest

from pixlens.dataset import EditDataset, load_edit_dataset
from pixlens.detections import load_archive
from pixlens.errors import RunError
from pixlens.model import EditInstruction, EditType
from pixlens.pipeline import RunConfig, run_evaluation
from pixlens.report import render


@pytest.fixture(scope="module")
def run_inputs(pipeline_fixture):
    dataset = load_edit_dataset(pipeline_fixture.edits_path)
    input_archive = load_archive(pipeline_fixture.det_input_dir)
    edited_archive = load_archive(pipeline_fixture.det_edited_dir)
    return dataset, input_archive, edited_archive


def run(pipeline_fixture, run_inputs, **config_kwargs):
    dataset, input_archive, edited_archive = run_inputs
    config = RunConfig(model="fixture-model", **config_kwargs)
    return run_evaluation(
        dataset,
        pipeline_fixture.images_dir,
        pipeline_fixture.edited_dir,
        input_archive,
        edited_archive,
        config,
    )


def test_empty_dataset_empty_report(pipeline_fixture, run_inputs):
    _, input_archive, edited_archive = run_inputs
    report = run_evaluation(
        EditDataset(source="custom"),
        pipeline_fixture.images_dir,
        pipeline_fixture.edited_dir,
        input_archive,
        edited_archive,
    )
    assert report.records == []
    assert report.aggregates["overall"]["count"] == 0


def test_expected_edit_specific_scores(pipeline_fixture, run_inputs):
    report = run(pipeline_fixture, run_inputs)
    scores = {r.edit_id: r.edit_specific for r in report.records}
    for edit_id, expected in pipeline_fixture.expected.items():
        assert scores[edit_id] == pytest.approx(expected, abs=1e-12), edit_id
    assert scores["e-color"] == pytest.approx(1.0, abs=1e-9)
    assert all(r.evaluation_success for r in report.records)


def test_preservation_computed_for_all_edits(pipeline_fixture, run_inputs):
    report = run(pipeline_fixture, run_inputs)
    for record in report.records:
        assert record.subject is not None, record.edit_id
        assert record.background is not None, record.edit_id
        if record.edit_type == "color_change":
            assert record.subject.color_similarity is None
        else:
            assert record.subject.color_similarity is not None


def test_worker_count_does_not_change_output(pipeline_fixture, run_inputs):
    serial = run(pipeline_fixture, run_inputs, workers=1)
    parallel = run(pipeline_fixture, run_inputs, workers=8)
    assert render(serial, "json") == render(parallel, "json")


def test_undetected_category_marks_failure(pipeline_fixture, run_inputs):
    dataset, input_archive, edited_archive = run_inputs
    ghost = EditInstruction(
        edit_id="e-add",  # reuse existing artifacts for the same image
        edit_type=EditType.OBJECT_REMOVAL,
        category="unicorn",
        to="",
        image_id="img-add",
    )
    tweaked = EditDataset(source="custom", edits=[ghost])
    report = run_evaluation(
        tweaked,
        pipeline_fixture.images_dir,
        pipeline_fixture.edited_dir,
        input_archive,
        edited_archive,
    )
    record = report.records[0]
    assert not record.evaluation_success
    assert record.edit_specific == 0.0
    assert any("evaluation failed" in note for note in record.notes)
    assert report.aggregates["per_edit_type"]["object_removal"]["edit_specific"] is None


def test_invalid_instruction_becomes_failed_record(pipeline_fixture, run_inputs):
    dataset, input_archive, edited_archive = run_inputs
    bad = EditInstruction(
        edit_id="e-add",
        edit_type=EditType.OBJECT_REPLACEMENT,
        category="dog",
        to="kid",
        from_attr=None,
        image_id="img-add",
    )
    tweaked = EditDataset(
        source="custom", edits=[bad], violations={"e-add": ["missing from"]}
    )
    report = run_evaluation(
        tweaked,
        pipeline_fixture.images_dir,
        pipeline_fixture.edited_dir,
        input_archive,
        edited_archive,
    )
    record = report.records[0]
    assert not record.evaluation_success
    assert record.notes == ["invalid instruction: missing from"]


def test_missing_image_raises_run_error(pipeline_fixture, run_inputs):
    dataset, input_archive, edited_archive = run_inputs
    missing = EditDataset(
        source="custom",
        edits=[
            EditInstruction(
                edit_id="nowhere",
                edit_type=EditType.OBJECT_ADDITION,
                category="dog",
                to="ball",
                image_id="img-does-not-exist",
            )
        ],
    )
    with pytest.raises(RunError, match="nowhere"):
        run_evaluation(
            missing,
            pipeline_fixture.images_dir,
            pipeline_fixture.edited_dir,
            input_archive,
            edited_archive,
        )


def test_aggregates_recompute_from_records(pipeline_fixture, run_inputs):
    report = run(pipeline_fixture, run_inputs)
    payload = json.loads(render(report, "json").decode("utf-8"))
    for edit_type, group in payload["aggregates"]["per_edit_type"].items():
        values = [
            r["edit_specific"]
            for r in payload["records"]
            if r["edit_type"] == edit_type and r["evaluation_success"]
        ]
        if values:
            assert group["edit_specific"] == pytest.approx(
                sum(values) / len(values), abs=1e-12
            )


def test_repeated_runs_byte_identical(pipeline_fixture, run_inputs):
    first = render(run(pipeline_fixture, run_inputs), "json")
    second = render(run(pipeline_fixture, run_inputs), "json")
    assert first == second
