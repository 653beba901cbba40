import json
import random
from pathlib import Path

from toepcalc import reference_example, parse_tower_text, serialize_tower
from toepcalc.cli import corpus_matrix, run_command
from helpers import tower


def write(path: Path, text: str) -> str:
    path.write_text(text)
    return str(path)


def gen_file(tmp_path: Path, stages: int, name: str = "g.tw") -> str:
    out = str(tmp_path / name)
    code, _ = run_command(["generate", "paper-example", "--stages", str(stages), "-o", out])
    assert code == 0
    return out


def test_generate_writes_reference(tmp_path):
    f = gen_file(tmp_path, 2)
    assert parse_tower_text(Path(f).read_text()) == reference_example(2)


def test_validate_good_and_bad(tmp_path):
    f = gen_file(tmp_path, 1)
    code, text = run_command(["validate", f])
    assert code == 0
    assert "status = valid" in text

    bad = write(tmp_path / "bad.tw", "alphabet = 0 1\nperiod 4 = 0 1 0\n")
    code, text = run_command(["validate", bad])
    assert code == 3
    assert text.startswith("error:") and "expected 4 cells" in text

    code, text = run_command(["validate", str(tmp_path / "missing.tw")])
    assert code == 3


def test_analyze_text_report(tmp_path):
    f = gen_file(tmp_path, 2)
    code, text = run_command(["analyze", f])
    assert code == 0
    lines = dict(
        line.split(" = ", 1) for line in text.splitlines() if " = " in line
    )
    assert lines["scale.certified"] == "2^2 * 5"
    assert lines["scale.declared"] == "2^inf * 5"
    assert lines["growth.trend"] == "non-monotone"
    assert lines["growth.min_block_lengths"] == "2 1 17"
    assert lines["stage.10.unknown"] == "3"


def test_analyze_json_report(tmp_path):
    f = gen_file(tmp_path, 2)
    code, text = run_command(["--format", "json", "analyze", f])
    assert code == 0
    d = json.loads(text)
    assert d["scale"]["certified"] == "2^2 * 5"
    assert d["periods"] == [5, 10, 20]


def test_factor_command():
    code, text = run_command(["factor", "--scale", "2^inf * 5", "--count", "4"])
    assert code == 0
    assert "factors = 2 4 40 80" in text
    code, text = run_command(["--format", "json", "factor", "--scale", "2^inf * 5", "--count", "4"])
    assert json.loads(text)["factors"] == [2, 4, 40, 80]
    code, text = run_command(["factor", "--scale", "6^2", "--count", "3"])
    assert code == 3 and text.startswith("error:")


def test_compare_certified_pair(tmp_path):
    f = gen_file(tmp_path, 2)
    code, _ = run_command(["rotate", f, "-k", "7", "-o", str(tmp_path / "r.tw")])
    assert code == 0
    code, _ = run_command(
        ["permute", str(tmp_path / "r.tw"), "--period", "5",
         "--perms", "1,0;1,0;1,0;1,0;1,0", "-o", str(tmp_path / "rp.tw")]
    )
    assert code == 0
    code, text = run_command(["--format", "json", "compare", f, str(tmp_path / "rp.tw")])
    assert code == 0
    d = json.loads(text)
    assert d["verdict"] == "conjugate-certified"
    assert d["stage"] == 5 and d["shift"] == 13


def test_compare_scale_mismatch_is_exit_1(tmp_path):
    a = gen_file(tmp_path, 1)
    b = write(tmp_path / "tri.tw", "alphabet = 0 1\nscale = 3^inf\nperiod 3 = 0 _ _\n")
    code, text = run_command(["compare", a, b])
    assert code == 1
    assert "not-conjugate" in text and "scale" in text


def test_compare_refuted_is_exit_1(tmp_path):
    a = write(tmp_path / "a.tw", serialize_tower(tower("01_", "010011")))
    b = write(tmp_path / "b.tw", serialize_tower(tower("010", "010010")))
    code, text = run_command(["compare", a, b])
    assert code == 1
    assert "refuted-up-to" in text


def test_compare_unknown_is_exit_2(tmp_path):
    a = gen_file(tmp_path, 2, "a.tw")
    b = gen_file(tmp_path, 3, "b.tw")
    code, text = run_command(["compare", a, b])
    assert code == 2
    assert "unknown" in text


def test_invariant_exit_codes(tmp_path):
    a = gen_file(tmp_path, 2, "a.tw")
    b = gen_file(tmp_path, 2, "b.tw")
    code, text = run_command(["invariant", a, b, "--stages", "3"])
    assert code == 0
    assert "scale.equal = true" in text

    tri = write(tmp_path / "tri.tw", "alphabet = 0 1\nscale = 3^inf\nperiod 3 = 0 _ _\n")
    code, _ = run_command(["invariant", a, tri, "--stages", "2"])
    assert code == 1

    # equal declared scales, chi refutes: exit 2 (not a full certificate)
    c = write(tmp_path / "c.tw", "alphabet = 0 1\nscale = 2\nperiod 2 = 0 1\n")
    d = write(tmp_path / "d.tw", "alphabet = 0 1\nscale = 2\nperiod 2 = 0 _\n")
    code, text = run_command(["invariant", c, d, "--stages", "1"])
    assert code == 2
    assert "Refuted" in text


def test_apply_code_drops_scale(tmp_path):
    f = gen_file(tmp_path, 2)
    codefile = write(
        tmp_path / "center.bc",
        "len = 1\n"
        + "".join(f"{a} {b} {c} -> {b}\n" for a in "01" for b in "01" for c in "01"),
    )
    out = str(tmp_path / "out.tw")
    code, _ = run_command(["apply-code", f, "--code", codefile, "-o", out])
    assert code == 0
    t = parse_tower_text(Path(out).read_text())
    assert t.declared_scale is None
    assert t.periods == (5, 10, 20)


def test_permute_round_trip(tmp_path):
    f = gen_file(tmp_path, 2)
    swap = "1,0;1,0;1,0;1,0;1,0"
    once = str(tmp_path / "once.tw")
    twice = str(tmp_path / "twice.tw")
    assert run_command(["permute", f, "--period", "5", "--perms", swap, "-o", once])[0] == 0
    assert run_command(["permute", once, "--period", "5", "--perms", swap, "-o", twice])[0] == 0
    assert Path(twice).read_text() == Path(f).read_text()

    code, text = run_command(["permute", f, "--period", "5", "--perms", "1,0", "-o", once])
    assert code == 3


def test_corpus_matrix_and_determinism(tmp_path):
    gen_file(tmp_path, 2, "a.tw")
    run_command(["rotate", str(tmp_path / "a.tw"), "-k", "5", "-o", str(tmp_path / "b.tw")])
    write(tmp_path / "c.tw", "alphabet = 0 1\nscale = 3^inf\nperiod 3 = 0 _ _\n")
    code, text = run_command(["--format", "json", "corpus", str(tmp_path)])
    assert code == 0  # the matrix itself is the deliverable; cells carry verdicts
    d = json.loads(text)
    assert d["files"] == ["a.tw", "b.tw", "c.tw"]
    assert d["matrix"]["a.tw"]["b.tw"] == "conjugate-certified"
    assert d["matrix"]["a.tw"]["c.tw"] == "not-conjugate"

    files = [tmp_path / n for n in ("a.tw", "b.tw", "c.tw")]
    reports = [corpus_matrix(random.Random(i).sample(files, 3), 2) for i in range(4)]
    assert all(r == reports[0] for r in reports)


def test_corpus_invalid_file_is_exit_3(tmp_path):
    gen_file(tmp_path, 1, "a.tw")
    write(tmp_path / "b.tw", "period 2 = 0 1\n")
    code, text = run_command(["corpus", str(tmp_path)])
    assert code == 3


def test_usage_errors(tmp_path):
    assert run_command(["no-such-command"])[0] == 3
    assert run_command(["compare"])[0] == 3
    assert run_command([])[0] == 3
    code, text = run_command(["--help"])
    assert code == 0 and "subcommand" in text or "usage" in text


def test_rotate_inverse(tmp_path):
    f = gen_file(tmp_path, 2)
    r = str(tmp_path / "r.tw")
    rr = str(tmp_path / "rr.tw")
    run_command(["rotate", f, "-k", "7", "-o", r])
    run_command(["rotate", r, "-k", "-7", "-o", rr])
    assert Path(rr).read_text() == Path(f).read_text()
