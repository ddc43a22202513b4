import json
from pathlib import Path

import pytest

from subcatdyn.cli import corpus_dir, main
from subcatdyn.documents import (
    dump_document,
    load_documents,
    workspace_documents,
)
from subcatdyn.errors import LoadError

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    run.err = captured.err
    return code, captured.out


def test_validate_corpus(capsys):
    code, out = run(capsys, "validate", "--corpus")
    assert code == 0
    assert "all documents valid" in out


def test_validate_reports_bad_reference(tmp_path, capsys):
    doc = {"kind": "dynamics", "name": "lost", "motor": "nowhere",
           "states": {}, "transitions": {}}
    (tmp_path / "lost.json").write_text(json.dumps(doc))
    code, _ = run(capsys, "validate", str(tmp_path))
    assert code == 2
    assert "nowhere" in run.err


def test_parse_error_carries_line(tmp_path):
    (tmp_path / "broken.json").write_text('{\n  "kind": oops\n}')
    with pytest.raises(LoadError) as err:
        load_documents([tmp_path])
    assert "broken.json:2" in str(err.value)


def test_round_trip(tmp_path, corpus):
    docs = workspace_documents(corpus)
    for doc in docs:
        (tmp_path / f"{doc['kind']}_{doc['name']}.json").write_text(dump_document(doc))
    reloaded = load_documents([tmp_path])
    assert reloaded.categories == corpus.categories
    assert reloaded.dynamics == corpus.dynamics
    assert reloaded.clocks == corpus.clocks
    assert reloaded.open_dynamics == corpus.open_dynamics
    assert reloaded.families == corpus.families


def test_directory_load_is_order_independent(corpus):
    files = sorted(corpus_dir().glob("*.json"))
    forward = load_documents(files)
    backward = load_documents(list(reversed(files)))
    assert forward.families == backward.families
    assert forward.open_dynamics == backward.open_dynamics


def test_union_counterexample_golden(capsys):
    code, out = run(capsys, "demo", "union-counterexample")
    assert code == 0
    assert out == (GOLDEN / "union_counterexample.txt").read_text(encoding="utf-8")


def test_demo_mimicry_exit_status(capsys):
    code, out = run(capsys, "demo", "mimicry")
    assert code == 0
    assert "mono-engendered dynamics deterministic: no" in out


def test_demo_unknown(capsys):
    code, _ = run(capsys, "demo", "nope")
    assert code == 2


def test_props_exit_codes(capsys):
    code, out = run(capsys, "props", "alpha1", "--corpus")
    assert code == 1  # deterministic fails
    assert "categorical: yes" in out
    code, out = run(capsys, "props", "clock_x", "--corpus")
    assert code == 0  # a clock passes all five


def test_props_json(capsys):
    code, out = run(capsys, "--format", "json", "props", "alpha1", "--corpus")
    obj = json.loads(out)
    assert obj["checks"]["sub-categorical"]["holds"] is True
    assert obj["checks"]["deterministic"]["holds"] is False


def test_union_command(capsys):
    code, out = run(capsys, "union", "alpha1", "alpha2", "--corpus")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "dynamics"
    assert sorted(map(tuple, doc["transitions"]["u"])) == [("a1", "a2"), ("a1", "a2'")]
    assert sorted(map(tuple, doc["transitions"]["w"])) == [("a1", "a3")]


def test_clean_and_largest_subcat_commands(tmp_path, capsys):
    doc = {
        "kind": "dynamics", "name": "untidy", "motor": "chain3",
        "states": {"1": ["a1"], "2": ["a2", "a2'"], "3": ["a3"]},
        "transitions": {
            "u": [["a1", "a2"]], "v": [["a2", "a3"]], "w": [["a1", "a3"]],
            "id1": [["a1", "a1"]], "id2": [["a2", "a2"]], "id3": [["a3", "a3"]],
        },
    }
    (tmp_path / "untidy.json").write_text(json.dumps(doc))
    code, out = run(capsys, "clean", "untidy", "--in", str(tmp_path), "--corpus")
    assert code == 0
    cleaned = json.loads(out)
    assert cleaned["states"]["2"] == ["a2"]

    bad = dict(doc, name="wild", transitions=dict(doc["transitions"], v=[], w=[["a1", "a3"]]))
    (tmp_path / "wild.json").write_text(json.dumps(bad))
    code, out = run(capsys, "largest-subcat", "wild", "--in", str(tmp_path), "--corpus")
    assert code == 0
    assert json.loads(out)["transitions"]["w"] == []


def test_realizations_command(capsys):
    code, out = run(capsys, "realizations", "mimic_x", "--corpus")
    assert code == 0
    assert "external parts" in out
    code, out = run(capsys, "realizations", "--clock", "clock_x",
                    "--dynamics", "alpha1", "--corpus")
    assert code == 0
    assert "realizations: 4" in out


def test_generate_then_props(tmp_path, capsys):
    code, out = run(capsys, "generate", "mimicry", "--mode", "mono", "--corpus")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "open-dynamics"
    (tmp_path / "gen.json").write_text(json.dumps(doc))
    code, out = run(capsys, "props", "mimicry.mono", "--in", str(tmp_path), "--corpus")
    assert code == 1
    assert "deterministic: no" in out
    assert "sub-categorical: yes" in out


def test_generate_with_provenance(capsys):
    code, out = run(capsys, "generate", "mimicry", "--mode", "primo", "--provenance", "--corpus")
    assert code == 0
    doc, side = json.loads(out)
    assert side["kind"] == "provenance"
    entry = side["entries"][0]
    assert {"arrow", "param", "source", "target", "witnesses"} <= set(entry)
    assert entry["witnesses"]


def test_generate_quotient_mode(tmp_path, capsys):
    part = {"kind": "partition", "name": "all", "partition": [["left|left", "right|right"]]}
    (tmp_path / "part.json").write_text(json.dumps(part))
    code, out = run(capsys, "generate", "mimicry", "--mode", "quotient=all",
                    "--in", str(tmp_path), "--corpus")
    assert code == 0
    assert json.loads(out)["parameters"] == ["left|left+right|right"]


def test_stability_command(capsys):
    code, out = run(capsys, "stability", "mimicry", "--corpus")
    assert code == 1
    assert "categorical family: yes" in out
    assert "primo-stable: no" in out


def test_random_family_command_deterministic(capsys):
    code1, out1 = run(capsys, "--seed", "5", "random-family", "--count", "3")
    code2, out2 = run(capsys, "--seed", "5", "random-family", "--count", "3")
    assert code1 == code2 == 0
    assert out1 == out2
    assert "3/3 families pass" in out1
