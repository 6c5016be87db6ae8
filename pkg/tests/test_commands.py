import json

import pytest
from pydantic import ValidationError

import config
from app.models.schemas import (
    RECORD_MODELS,
    CoherenceReport,
    ComplexStats,
    Config,
    GraftRecord,
    HomologyReport,
    MisReport,
    PresentationRecord,
    Theorem1Report,
    TreesRecord,
)
from main import run


def output_of(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def json_of(capsys, *argv):
    code, out = output_of(capsys, "--format", "json", *argv)
    assert code == 0
    return json.loads(out)


def test_trees(capsys):
    code, out = output_of(capsys, "trees", "3")
    assert code == 0
    assert out.split() == ["((AB)C)", "(A(BC))"]
    code, out = output_of(capsys, "trees", "1")
    assert out.split() == ["A"]


def test_trees_out_of_range(capsys):
    assert run(["trees", "0"]) == 2
    assert run(["trees", "8"]) == 2
    assert run(["--max-n", "8", "trees", "8"]) == 0
    assert run(["--max-n", "11", "trees", "3"]) == 2


def test_random_trees_are_seeded(capsys):
    first = json_of(capsys, "--seed", "7", "trees", "6", "--random", "5")
    second = json_of(capsys, "--seed", "7", "trees", "6", "--random", "5")
    assert first == second
    assert first["count"] == 5


def test_trees_csv(capsys):
    code, out = output_of(capsys, "--format", "csv", "trees", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "index,tree"
    assert len(lines) == 6


def test_complex_stats(capsys):
    record = json_of(capsys, "complex", "4", "--stats")
    assert (record["vertices"], record["edges"], record["squares"], record["pentagons"], record["mis_edges"]) == (
        5, 5, 0, 1, 4,
    )
    assert record["schema_version"] == "1.0"


def test_complex_dot(capsys):
    code, out = output_of(capsys, "complex", "5", "--dot")
    assert code == 0
    assert "digraph" in out
    assert "((((AB)C)D)E)" in out


def test_complex_cap(capsys):
    assert run(["complex", "11", "--stats"]) == 2


def test_mis(capsys):
    record = json_of(capsys, "mis", "5")
    assert record["connected"] and record["touches_all"]
    assert record["h1_rank"] == 0


def test_presentation_scheme(capsys):
    record = json_of(capsys, "presentation", "4", "--scheme", "--simplified")
    assert record["generators"] == ["<1,2,1>"]
    assert record["relators"] == []
    record = json_of(capsys, "presentation", "7", "--scheme", "--simplified")
    assert record["counts"]["generators"] == 42
    assert record["counts"]["relators"] == 11
    record = json_of(capsys, "presentation", "6", "--tietze")
    assert record["counts"]["generators"] == 15


def test_presentation_scheme_table(capsys):
    code, out = output_of(capsys, "presentation", "6", "--scheme", "--raw")
    assert code == 0
    assert "G6: 22 generators (12 old + 10 new)" in out
    assert "reduced: 16 generators (10 old + 6 new), 1 relators" in out
    code, out = output_of(capsys, "presentation", "7", "--raw")
    assert "G7: 59 generators (44 old + 15 new)" in out


def test_presentation_oracle(capsys):
    code, out = output_of(capsys, "presentation", "6", "--oracle", "--simplified")
    assert code == 0
    assert "free rank 15" in out


def test_presentation_needs_three_letters(capsys):
    assert run(["presentation", "2"]) == 2


def test_homology(capsys):
    assert json_of(capsys, "homology", "5", "--fill", "squares")["free_rank"] == 5
    assert json_of(capsys, "homology", "6", "--fill", "all")["free_rank"] == 0
    oracle = json_of(capsys, "homology", "7")
    scheme = json_of(capsys, "homology", "7", "--scheme")
    assert oracle["free_rank"] == scheme["free_rank"] == 35
    assert scheme["verdict"].startswith("not free")


def test_coherence(capsys):
    assert json_of(capsys, "coherence", "--zeta-order", "2", "--n", "4")["pentagon_order"] == 2
    assert json_of(capsys, "coherence", "--zeta-order", "5", "--n", "5")["image_order"] == 5
    record = json_of(capsys, "coherence", "--zeta-order", "1", "--n", "6")
    assert record["coherent"]
    oracle = json_of(capsys, "presentation", "6", "--oracle", "--simplified")
    assert len(record["generator_exponents"]) == len(oracle["generators"]) == 15
    code, out = output_of(capsys, "coherence", "--zeta-order", "2")
    assert "not coherent" in out


def test_graft(capsys):
    record = json_of(capsys, "graft", "A[[BC]D]", "A(BC)", "D", "(EF)((GH)I)", "((JK)L)M")
    assert record["leaves"] == 13
    assert record["result"] == "((A(BC))((D((EF)((GH)I)))(((JK)L)M)))"
    code, out = output_of(capsys, "graft", "(AB)", "A", "B")
    assert out.strip() == "(AB)"


def test_graft_errors(capsys):
    assert run(["graft", "(AB)", "A"]) == 2
    assert run(["graft", "((AB)", "A", "B"]) == 2


def test_theorem1(capsys):
    record = json_of(capsys, "theorem1", "1", "2", "1", "--n", "5")
    assert record["covered"] and record["monotone"]
    assert record["quotient_free_rank"] == 0
    assert run(["theorem1", "1", "1", "1"]) == 2


def test_schemas(capsys, tmp_path):
    code, out = output_of(capsys, "schemas", "--out", str(tmp_path))
    assert code == 0
    files = sorted(tmp_path.glob("*.schema.json"))
    assert len(files) == len(RECORD_MODELS)
    schema = json.loads((tmp_path / "ComplexStats.schema.json").read_text())
    assert "mis_edges" in schema["properties"]


def test_usage_errors(capsys):
    assert run([]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["--format", "dot", "trees", "3"]) == 2
    assert run(["--help"]) == 0


@pytest.mark.parametrize("fmt", ["text", "json", "csv"])
def test_every_format_renders_homology(capsys, fmt):
    code, out = output_of(capsys, "--format", fmt, "homology", "4")
    assert code == 0
    assert out.strip()


def test_homology_scheme_has_no_fill(capsys):
    record = json_of(capsys, "homology", "5", "--scheme")
    assert record["fill"] is None
    assert record["free_rank"] == 5
    assert json_of(capsys, "homology", "5")["fill"] == "squares"
    assert run(["homology", "5", "--scheme", "--fill", "all"]) == 2
    assert run(["homology", "5", "--scheme", "--fill", "squares"]) == 2


def test_log_level(capsys):
    assert run(["--log-level", "bogus", "trees", "3"]) == 2
    assert run(["--log-level", "debug", "trees", "3"]) == 0
    assert Config(log_level="info").log_level == "INFO"
    with pytest.raises(ValidationError):
        Config(log_level="loud")


def test_committed_schemas_match_the_models(capsys, tmp_path):
    assert run(["schemas", "--out", str(tmp_path)]) == 0
    for model in RECORD_MODELS:
        name = f"{model.__name__}.schema.json"
        committed = json.loads((config.SCHEMA_FOLDER / name).read_text())
        assert committed == model.model_json_schema()
        assert json.loads((tmp_path / name).read_text()) == committed


@pytest.mark.parametrize(
    "model, argv",
    [
        (TreesRecord, ["trees", "4"]),
        (ComplexStats, ["complex", "5", "--stats"]),
        (MisReport, ["mis", "5"]),
        (PresentationRecord, ["presentation", "5", "--oracle"]),
        (PresentationRecord, ["presentation", "6", "--scheme", "--raw"]),
        (HomologyReport, ["homology", "5", "--scheme"]),
        (CoherenceReport, ["coherence", "--zeta-order", "3", "--n", "5"]),
        (GraftRecord, ["graft", "(AB)", "(AB)", "C"]),
        (Theorem1Report, ["theorem1", "1", "2", "1", "--n", "5"]),
    ],
)
def test_json_output_matches_its_schema(capsys, model, argv):
    code, out = output_of(capsys, "--format", "json", *argv)
    assert code == 0
    data = json.loads(out)
    schema = json.loads((config.SCHEMA_FOLDER / f"{model.__name__}.schema.json").read_text())
    assert set(schema["required"]) <= set(data) <= set(schema["properties"])
    record = model.model_validate_json(out)
    assert json.loads(record.model_dump_json()) == data
