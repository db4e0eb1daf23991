import json
from importlib import resources

import jsonschema
import numpy as np
import pytest
from click.testing import CliRunner
from referencing import Registry, Resource
from referencing.jsonschema import DRAFT202012

from fts_entangle import cli
from fts_entangle import invariants as inv

NAMES = list(inv.REPRESENTATIVE_KETS)


def schema(name):
    text = resources.files("fts_entangle").joinpath("schemas", name).read_text()
    return json.loads(text)


def validator(name):
    registry = Registry().with_resources(
        (n, Resource.from_contents(schema(n), default_specification=DRAFT202012))
        for n in ("classification_record.schema.json", "invariant_record.schema.json")
    )
    return jsonschema.Draft202012Validator(schema(name), registry=registry)


def run(*args, input=None):
    return CliRunner().invoke(cli.main, list(args), input=input)


def reps_csv():
    rows = ["id," + ",".join(f"re{k},im{k}" for k in range(8))]
    for n in NAMES:
        s = inv.representative(n)
        rows.append(n + "," + ",".join(f"{v.real:g},{v.imag:g}" for v in s))
    return "\n".join(rows) + "\n"


def reps_json(exact=False):
    recs = []
    for n in NAMES:
        s = inv.representative(n)
        amps = [[str(int(v.real)), "0"] if exact else [v.real, v.imag] for v in s]
        recs.append({"id": n, "amplitudes": amps, "exact": exact})
    return json.dumps(recs)


def test_classify_ghz_inline():
    res = run("classify", "--amplitudes", "1,0,0,0,0,0,0,1")
    assert res.exit_code == 0
    rec = json.loads(res.output)[0]
    assert rec["class"] == "GHZ" and rec["rank"] == "4" and rec["q"] == [-2.0, 0.0]


def test_classify_csv_batch(tmp_path):
    p = tmp_path / "reps.csv"
    p.write_text(reps_csv())
    res = run("classify", str(p))
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert [r["class"] for r in out] == NAMES
    assert [r["conventional_class"] for r in out] == NAMES
    validator("classification_record.schema.json").validate(out)


def test_classify_csv_output_columns(tmp_path):
    p = tmp_path / "reps.csv"
    p.write_text(reps_csv())
    res = run("classify", str(p), "--format", "csv")
    lines = res.output.splitlines()
    assert lines[0] == ",".join(cli.CLASSIFY_CSV_COLUMNS)
    assert len(lines) == 8


def test_exact_json_roundtrip(tmp_path):
    p = tmp_path / "reps.json"
    p.write_text(reps_json(exact=True))
    res = run("classify", str(p), "--exact")
    assert res.exit_code == 0
    out = json.loads(res.output)
    ghz = out[-1]
    assert ghz["q"] == ["-2", "0"] and ghz["invariants"]["hyperdet"] == ["1", "0"] and ghz["exact"]
    validator("classification_record.schema.json").validate(out)
    schema_in = schema("state_record.schema.json")
    jsonschema.validate(json.loads(reps_json(exact=True)), schema_in)
    jsonschema.validate(json.loads(reps_json()), schema_in)


def test_stdin_and_determinism():
    a = run("classify", "-", input=reps_json())
    b = run("classify", "-", input=reps_json())
    assert a.exit_code == 0 and a.output == b.output


@pytest.mark.parametrize(
    "args",
    [
        ("classify", "--amplitudes", ""),
        ("classify", "--amplitudes", "1,2,3"),
        ("classify", "--exact", "--amplitudes", "1/0,0,0,0,0,0,0,1"),
        ("classify", "--exact", "--amplitudes", "x,0,0,0,0,0,0,1"),
        ("classify", "--real", "--amplitudes", "1:1,0,0,0,0,0,0,1"),
        ("classify", "/nonexistent/file.json"),
        ("classify",),
    ],
)
def test_parse_errors_exit_1(args):
    res = run(*args)
    assert res.exit_code == 1


def test_bad_json_exit_1():
    assert run("classify", "-", input="[{").exit_code == 1
    assert run("classify", "-", input='[{"id": "x"}]').exit_code == 1


def test_ambiguous_exit_2():
    d = 1e-5
    s = inv.representative("A-BC") + d * inv.ket("100") + d * inv.ket("111")
    amps = ",".join(repr(float(v.real)) for v in s)
    res = run("classify", "--epsilon", "8e-6", "--amplitudes", amps)
    assert res.exit_code == 2
    assert "tolerance-ambiguity" in json.loads(res.output)[0]["flags"]


def test_mismatch_exit_3():
    # epsilon between |q| (about 5.1e-6) and |Det| = |q|/2 splits the two classifiers
    s = inv.ket("000") + 1.6e-3 * inv.ket("111")
    amps = ",".join(repr(float(v.real)) for v in s)
    res = run("classify", "--epsilon", "3.5e-6", "--amplitudes", amps)
    rec = json.loads(res.output)[0]
    assert res.exit_code == 3 and "classifier-mismatch" in rec["flags"]


def test_real_flag():
    res = run("classify", "--real", "--amplitudes", "1,0,0,-1,0,1,1,0")
    rec = json.loads(res.output)[0]
    assert rec["real_orbit"]["orbit_label"] == "U(1)^2[-++]"
    assert rec["real_orbit"]["q_sign"] == "positive"


def test_invariants_command():
    w = inv.representative("W") / np.sqrt(3)
    res = run("invariants", "--amplitudes", ",".join(repr(float(v.real)) for v in w))
    rec = json.loads(res.output)[0]
    assert rec["invariants"]["S_A"] == pytest.approx(8 / 9)
    assert rec["invariants"]["tangle"] == pytest.approx(0)
    validator("invariant_record.schema.json").validate(json.loads(res.output))
    res = run("invariants", "--amplitudes", "1,0,0,0,0,0,0,0", "--format", "csv")
    assert res.output.splitlines()[0] == ",".join(cli.INVARIANTS_CSV_COLUMNS)
    res = run("invariants", "--exact", "--amplitudes", "1,0,0,0,0,0,0,1")
    assert json.loads(res.output)[0]["invariants"]["hyperdet"] == ["1", "0"]


def test_fuzz():
    res = run("fuzz", "--class", "GHZ", "--samples", "1000", "--seed", "42")
    out = json.loads(res.output)
    assert res.exit_code == 0 and out["mismatches"] == 0 and out["wrong_class"] == 0
    res = run("fuzz", "--class", "W", "--samples", "1000", "--seed", "1")
    out = json.loads(res.output)
    assert out["mismatches"] == 0 and out["max_q_drift"] <= 1e-9
    res = run("fuzz", "--class", "GHZ", "--samples", "0", "--seed", "1")
    assert res.exit_code == 0 and json.loads(res.output)["samples"] == 0


def test_fuzz_default_seed_warns():
    res = CliRunner().invoke(cli.main, ["fuzz", "--class", "W", "--samples", "10"])
    assert "warning" in res.stderr and res.exit_code == 0
    a = run("fuzz", "--class", "W", "--samples", "50", "--seed", "5").output
    assert a == run("fuzz", "--class", "W", "--samples", "50", "--seed", "5").output


def test_orbits():
    out = json.loads(run("orbits").output)
    assert [r["computed"] for r in out] == [4, 5, 7, 7]
    out = json.loads(run("orbits", "--projective").output)
    assert [r["computed"] for r in out] == [3, 4, 6, 7]
    res = run("orbits", "--real")
    assert res.exit_code == 0 and [r["computed"] for r in json.loads(res.output)] == [4, 5, 7, 7, 7, 7]
    assert run("orbits", "--real", "--projective").exit_code != 0


def test_hierarchy():
    out = run("hierarchy").output
    assert "GHZ -> A-BC" in out and "W -> A-BC" in out
    assert "GHZ -> W" not in out and "W -> GHZ" not in out
