"""End-to-end CLI runs in a subprocess: exit codes, JSON shapes, determinism."""

import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

CMD = [sys.executable, "-m", "tropigon.cli"]


def run(args, stdin=None):
    p = subprocess.run(CMD + args, input=stdin, capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def run_json(args, payload=None):
    stdin = json.dumps(payload) if payload is not None else None
    code, out, err = run(args, stdin)
    assert err == "", err
    lines = [json.loads(line) for line in out.strip().splitlines()] if out.strip() else []
    return code, lines


DK1 = {"tag": "proper", "field": 1, "sector": [[1, 1, 0, 1]]}


# ----------------------------------------------------------------- field-info


@pytest.mark.parametrize("d", [1, 2, 3, 7, 11, 19, 43, 67, 163])
def test_field_info_all_fields(d):
    code, (info,) = run_json(["field-info", "--field", str(d)])
    assert code == 0
    assert info["d"] == d
    assert set(info) == {
        "case",
        "d",
        "discriminant",
        "norm_omega",
        "omega",
        "sigma",
        "trace_omega",
        "units",
    }
    assert len(info["units"]) == info["sigma"]


def test_field_info_frozen():
    code, (info,) = run_json(["field-info", "--field", "7"])
    assert code == 0
    assert info == {
        "case": 2,
        "d": 7,
        "discriminant": -7,
        "norm_omega": 2,
        "omega": [0, 1],
        "sigma": 2,
        "trace_omega": 1,
        "units": [[1, 0], [-1, 0]],
    }


def test_field_info_rejects_non_heegner():
    code, out, err = run(["field-info", "--field", "5"])
    assert code == 2
    assert json.loads(out)["kind"] == "malformed-input"


def test_field_info_requires_field():
    code, out, _ = run(["field-info"])
    assert code == 2
    assert json.loads(out)["kind"] == "malformed-input"


# ----------------------------------------------------------------------- poly


def test_poly_union_idempotent():
    code, (out,) = run_json(["poly"], {"op": "union", "A": DK1, "B": DK1})
    assert code == 0
    assert out == {"field": 1, "sector": [[1, 1, 0, 1]], "tag": "proper"}


def test_poly_minkowski_doubles():
    code, (out,) = run_json(["poly"], {"op": "minkowski", "A": DK1, "B": DK1})
    assert code == 0
    assert out["sector"] == [[2, 1, 0, 1]]


def test_poly_scale():
    code, (out,) = run_json(
        ["poly"], {"op": "scale", "A": DK1, "k": {"num": [1, 1], "den": 1}}
    )
    assert code == 0
    assert out["sector"] == [[1, 1, 1, 1]]


def test_poly_output_reparses_as_input():
    code, (out,) = run_json(["poly"], {"op": "minkowski", "A": DK1, "B": DK1})
    code2, (again,) = run_json(["poly"], {"op": "union", "A": out, "B": out})
    assert code2 == 0
    assert again == out


def test_poly_unknown_op():
    code, out, _ = run(["poly"], json.dumps({"op": "intersect", "A": DK1, "B": DK1}))
    assert code == 2
    assert json.loads(out)["kind"] == "malformed-input"


def test_malformed_json_is_exit_2():
    code, out, _ = run(["poly"], "this is not json")
    assert code == 2
    parsed = json.loads(out)
    assert parsed["kind"] == "malformed-input" and "error" in parsed


def test_field_flag_mismatch_rejected():
    bad = dict(DK1, field=3)
    code, out, _ = run(["member", "--field", "1"], json.dumps(bad))
    assert code == 2
    assert json.loads(out)["kind"] == "malformed-input"


# --------------------------------------------------------------------- member


def test_member_accepts_ring_polygon():
    code, (out,) = run_json(["member"], DK1)
    assert code == 0
    assert out["member"] is True
    assert out["decomposition"] == [[{"den": 1, "num": [1, 0]}]]


def test_member_with_ideal_generators():
    scaled = {"tag": "proper", "field": 1, "sector": [[1, 2, 1, 2]]}  # (1/(1+i)) D_K
    code, (plain,) = run_json(["member"], scaled)
    assert plain["member"] is False
    code, (gen,) = run_json(
        ["member"], {"polygon": scaled, "generators": [{"num": [1, -1], "den": 2}]}
    )
    assert gen["member"] is True


# ----------------------------------------------------------------------- dual


def test_dual_round_trip():
    code, (env,) = run_json(["dual"], DK1)
    assert code == 0
    assert env == {"lines": [[1, 1, 0, 1], [0, 1, 1, 1]]}
    code, (back,) = run_json(["dual"], env)
    assert code == 0
    assert back == {"field": 1, "sector": [[1, 1, 0, 1]], "tag": "proper"}


def test_dual_bottom_and_zero():
    code, (poly,) = run_json(["dual"], {"tag": "bottom"})
    assert poly == {"field": 1, "sector": [], "tag": "empty"}
    code, (env,) = run_json(["dual"], {"tag": "empty", "field": 1})
    assert env == {"tag": "bottom"}


def test_dual_wrong_field_is_domain_error():
    code, out, _ = run(["dual"], json.dumps(dict(DK1, field=3)))
    assert code == 1
    assert json.loads(out)["kind"] == "wrong-field"


# --------------------------------------------------------------------- primes


def test_primes_frozen_gaussian():
    code, (out,) = run_json(["primes", "--field", "1", "--bound", "7"])
    assert code == 0
    assert out == {
        "bound": 7,
        "field": 1,
        "ideal_counts": [0, 1, 1, 0, 1, 2, 0, 0],
        "primes": [
            {"gen": [1, 1], "kind": "ramified", "p": 2},
            {"gen": [3, 0], "kind": "inert", "p": 3},
            {"gen": [1, 2], "kind": "split", "p": 5},
            {"gen": [2, 1], "kind": "split", "p": 5},
            {"gen": [7, 0], "kind": "inert", "p": 7},
        ],
    }


def test_primes_bound_validation():
    code, out, _ = run(["primes", "--field", "1", "--bound", "1"])
    assert code == 2


# ---------------------------------------------------------------------- adele


P2 = {"p": 2, "gen": [1, 1], "kind": "ramified"}
P5A = {"p": 5, "gen": [2, 1], "kind": "split"}
P5B = {"p": 5, "gen": [1, 2], "kind": "split"}


def test_adele_module_frozen():
    code, (out,) = run_json(
        ["adele", "--field", "1"], {"op": "module", "vector": {"exps": [], "free": []}}
    )
    assert code == 0
    assert out == {"gen": {"den": 2, "num": [1, 0]}, "kind": "principal"}


def test_adele_vector_round_trip():
    vec = {"exps": [[P2, -2]], "free": [P5A]}
    code, (mod,) = run_json(["adele", "--field", "1"], {"op": "vector", "module": {
        "kind": "localized", "gen": {"num": [1, 0], "den": 1}, "free": [P5A]}})
    assert code == 0
    code, (mod2,) = run_json(["adele", "--field", "1"], {"op": "module", "vector": mod})
    assert code == 0
    assert mod2 == {"kind": "localized", "gen": {"den": 1, "num": [1, 0]}, "free": [P5A]}


def test_adele_iso_frozen_witness():
    code, (out,) = run_json(
        ["adele", "--field", "1"],
        {"op": "iso", "A": {"exps": [[P5A, 1]]}, "B": {"exps": [[P5B, 1]]}},
    )
    assert code == 0
    assert out == {"equal": True, "witness": {"den": 5, "num": [4, 3]}}


def test_adele_member():
    code, (out,) = run_json(
        ["adele", "--field", "1"],
        {
            "op": "member",
            "module": {"kind": "principal", "gen": {"num": [1, 0], "den": 2}},
            "q": {"num": [1, 0], "den": 2},
        },
    )
    assert code == 0 and out == {"member": True}


def test_adele_validate_and_act():
    good = {"bound": 10, "values": [[P2, {"num": [1, -1], "den": 2}]]}
    code, (out,) = run_json(["adele", "--field", "1"], {"op": "validate", "section": good})
    assert code == 0 and out == {"valid": True}

    bad = {"bound": 10, "values": [[P2, {"num": [1, 0], "den": 3}]]}
    code, (out,) = run_json(["adele", "--field", "1"], {"op": "validate", "section": bad})
    assert code == 0
    assert out == {
        "valid": False,
        "prime": {"gen": [3, 0], "kind": "inert", "p": 3},
    }

    code, out, _ = run(
        ["adele", "--field", "1"], json.dumps({"op": "act", "section": bad, "k": [1, 1]})
    )
    assert code == 1
    parsed = json.loads(out)
    assert parsed["kind"] == "invalid-section"
    assert parsed["prime"] == {"gen": [3, 0], "kind": "inert", "p": 3}

    code, (out,) = run_json(
        ["adele", "--field", "1"], {"op": "act", "section": good, "k": [1, 1]}
    )
    assert code == 0
    assert out == {"bound": 10, "values": [[P2, {"den": 1, "num": [1, 0]}]]}


# ---------------------------------------------------------------------- stalk


def test_stalk_frozen():
    code, (out,) = run_json(
        ["stalk"], {"polygon": DK1, "k": {"num": [1, -1], "den": 2}}
    )
    assert code == 0
    assert out["member"] is True
    assert out["polygon"] == {"field": 1, "sector": [[1, 2, 1, 2]], "tag": "proper"}
    assert out["decomposition"] == [[{"den": 2, "num": [1, -1]}]]


def test_stalk_zero_scalar_is_domain_error():
    code, out, _ = run(
        ["stalk"], json.dumps({"polygon": DK1, "k": {"num": [0, 0], "den": 1}})
    )
    assert code == 1
    assert json.loads(out)["kind"] == "zero-input"


# --------------------------------------------------------------------- tensor


ENV_SQ = {"lines": [[1, 1, 0, 1], [0, 1, 1, 1]]}
ENV_2SQ = {"lines": [[2, 1, 0, 1], [0, 1, 2, 1]]}


def test_tensor_normalize():
    raw = {"pairs": [[ENV_SQ, {"lines": [[1, 1, 0, 1]]}], [ENV_SQ, {"lines": [[0, 1, 1, 1]]}]]}
    code, (out,) = run_json(["tensor", "normalize"], raw)
    assert code == 0
    # equal first slots merge, so one pair with tmax'ed second remains
    assert out == {"pairs": [[ENV_SQ, ENV_SQ]]}


def test_tensor_sep():
    a = {"pairs": [[ENV_SQ, ENV_2SQ]]}
    b = {"pairs": [[ENV_2SQ, ENV_SQ]]}
    code, (out,) = run_json(["tensor", "sep"], {"A": a, "B": b})
    assert code == 0 and out == {"verdict": "distinct"}
    code, (out,) = run_json(["tensor", "sep"], {"A": a, "B": a})
    assert out == {"verdict": "possibly_equal"}


def test_tensor_reduce():
    one = {"pairs": [[{"lines": [[0, 1, 0, 1]]}, {"lines": [[0, 1, 0, 1]]}]]}
    t = {"pairs": [[ENV_SQ, ENV_SQ]]}
    code, (out,) = run_json(
        ["tensor", "reduce"], {"x": {"a": t, "b": one}, "y": {"a": t, "b": one}}
    )
    assert code == 0
    assert out["status"] == "equal" and out["witness"] == one


def test_tensor_experiment_deterministic():
    code1, lines1 = run_json(["tensor", "experiment", "--bound", "5", "--seed", "11"])
    code2, lines2 = run_json(["tensor", "experiment", "--bound", "5", "--seed", "11"])
    assert code1 == code2 == 0
    assert lines1 == lines2
    assert len(lines1) == 5
    for i, rec in enumerate(lines1):
        assert rec["sample"] == i
        assert set(rec) == {
            "sample",
            "a",
            "a_prime",
            "c",
            "factors_separator",
            "products_separator",
            "products_normalize_equal",
            "candidate",
            "sandwich_violation",
        }
    _, other = run_json(["tensor", "experiment", "--bound", "5", "--seed", "12"])
    assert other != lines1


# --------------------------------------------------------------------- render


def test_render_svg_stdout(tmp_path):
    code, out, err = run(["render"], json.dumps(DK1))
    assert code == 0
    root = ET.fromstring(out)
    assert root.tag.endswith("svg")


def test_render_svg_file(tmp_path):
    target = tmp_path / "out.svg"
    code, (msg,) = run_json(
        ["render", "--svg", str(target)],
        {"polygon": DK1, "overlays": [{"tag": "proper", "field": 1, "sector": [[2, 1, 0, 1]]}]},
    )
    assert code == 0 and msg == {"svg": str(target)}
    root = ET.fromstring(target.read_text())
    assert root.tag.endswith("svg")


def test_render_degenerate_polygons_draw_blank_canvas():
    code, out, _ = run(["render"], json.dumps({"tag": "empty", "field": 1}))
    assert code == 0
    assert "nothing to draw" in out
    ET.fromstring(out)


# ------------------------------------------------------------------- selftest


def test_selftest_help():
    code, out, _ = run(["selftest", "--help"])
    assert code == 0 and "--seed" in out


def test_every_output_line_is_json():
    # a sweep over successful commands: each line of stdout must parse
    calls = [
        (["field-info", "--field", "163"], None),
        (["poly"], {"op": "union", "A": DK1, "B": DK1}),
        (["member"], DK1),
        (["dual"], DK1),
        (["primes", "--field", "3", "--bound", "11"], None),
        (["tensor", "sep"], {"A": {"pairs": [[ENV_SQ, ENV_SQ]]}, "B": {"pairs": [[ENV_SQ, ENV_SQ]]}}),
    ]
    for args, payload in calls:
        code, lines = run_json(args, payload)
        assert code == 0 and lines
