import io
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torfol import textformat
from torfol.cli import main
from torfol.errors import FanValidationError, ParseError
from torfol.fan import walls
from torfol.foliation import rays_in_V
from torfol.verify import RandomFanSpec, random_complete_fan

INPUTS = Path(__file__).resolve().parent.parent / "inputs"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_parse_c3_v1():
    F, V = textformat.parse((INPUTS / "c3_v1.txt").read_text())
    assert F.rays == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert rays_in_V(F, V) == [2]


def test_parse_duplicate_ray():
    text = "[fan]\nlattice_rank = 2\nrays = [[1, 0], [1, 0], [0, 1]]\nmax_cones = [[0, 2], [1, 2]]\n[foliation]\nbasis = [[1, 0]]\n"
    with pytest.raises(FanValidationError) as e:
        textformat.parse(text)
    assert "DuplicateRay" in {v.kind for v in e.value.violations}


def test_parse_square_walls():
    F, _ = textformat.parse((INPUTS / "flip_square.txt").read_text())
    assert (0, 1) in [w.rays for w in walls(F) if w.interior]


def test_zero_denominator():
    text = '[fan]\nlattice_rank = 1\nrays = [[1]]\nmax_cones = [[0]]\n\n[foliation]\nbasis = [["1/0"]]\n'
    with pytest.raises(ParseError) as e:
        textformat.parse(text)
    assert e.value.line == 7 and e.value.field == "basis"


def test_bare_rationals_and_multiline():
    text = "[fan]\nlattice_rank = 2\nrays = [[1, 0],\n  [0, 1]]  # comment\nmax_cones = [[0, 1]]\n[foliation]\nbasis = [[1/2, -3/4]]\n"
    F, V = textformat.parse(text)
    assert len(F.rays) == 2 and V.rank == 1


@pytest.mark.parametrize(
    "text, field",
    [
        ("[fan]\nlattice_rank = 2\nrays = [[1, 0]]\n", "max_cones"),
        ("[fan]\nlattice_rank = x\n", "lattice_rank"),
        ("[fan]\nlattice_rank = 1\nrays = [[1.5]]\nmax_cones = [[0]]\n", "rays"),
    ],
)
def test_parse_errors_name_field(text, field):
    with pytest.raises(ParseError) as e:
        textformat.parse(text)
    assert e.value.field == field


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4), st.sampled_from(["projective", "p1product"]), st.integers(0, 3))
def test_parse_serialize_round_trip(seed, n, base, subs):
    F, V = random_complete_fan(RandomFanSpec(seed, n, base, subs))
    text = textformat.serialize(F, V)
    assert textformat.parse(text) == (F, V)
    assert textformat.serialize(*textformat.parse(text)) == text


def test_analyze_c3_v1():
    code, out = run("analyze", INPUTS / "c3_v1.txt")
    assert code == 0
    assert "K_F = -D(0,0,1)" in out
    assert "ray 2 (0,0,1): 0 for i <= -2; span{(0,0,1)} for i = -1; V for i >= 0" in out
    assert "witness: (1,1,0)" in out and "discrepancy -1" in out


@pytest.mark.parametrize("name, code", [("c3_v2.txt", 0), ("c3_e3.txt", 10), ("c3_v1.txt", 20)])
def test_classify_exit_codes(name, code):
    assert run("classify", INPUTS / name)[0] == code


def test_flip_wall_square():
    code, out = run("flip-wall", INPUTS / "flip_square.txt", "--wall", "0,1")
    assert code == 0
    assert "wall relation: -v0 - v1 + v2 + v3 = 0" in out
    assert "K_F.C before = -2" in out and "K_F.C after = 2" in out
    assert "cones after:  {<0,2,3>, <1,2,3>}" in out
    assert "dicritical before: yes" in out and "dicritical after: no" in out
    assert "singular locus after: empty" in out


def test_mmp_p1xp1(tmp_path):
    trace = tmp_path / "trace.txt"
    code, out = run("mmp", INPUTS / "p1xp1_e1.txt", "--trace", trace)
    assert code == 0
    assert "outcome: fibration after 1 steps" in out
    assert "rays ['(1)', '(-1)']" in out or "rays ['(-1)', '(1)']" in out
    walls_, final = textformat.read_trace(trace.read_text())
    assert walls_ == [(1,)]


def test_mmp_p3_needs_override():
    assert run("mmp", INPUTS / "p3_e1.txt")[0] == 2
    code, out = run("mmp", INPUTS / "p3_e1.txt", "--allow-noncanonical")
    assert code == 0 and "warning" in out and "fibre" in out


def test_extremal_p1xp1():
    code, out = run("extremal", INPUTS / "p1xp1_e1.txt")
    assert code == 0 and out.startswith("2 extremal rays")


def test_extremal_requires_complete():
    assert run("extremal", INPUTS / "c3_v1.txt")[0] == 2


def test_verify_command():
    code, out = run("verify", INPUTS / "flip_square.txt")
    assert code == 0 and "FAIL" not in out


def test_missing_file_and_bad_pick(tmp_path):
    assert run("classify", tmp_path / "nope.txt")[0] == 1
    assert run("mmp", INPUTS / "p1xp1_e1.txt", "--pick", "wall=x")[0] != 0


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text('[fan]\nlattice_rank = 1\nrays = [[1]]\nmax_cones = [[0]]\n[foliation]\nbasis = [["1/0"]]\n')
    assert run("classify", bad)[0] == 1


def _final_section(text):
    return text[text.index("[final]"):]


@pytest.mark.parametrize("seed", [5, 6])
def test_trace_replays_byte_identical(tmp_path, seed):
    F, V = random_complete_fan(RandomFanSpec(seed, 3, "p1product" if seed == 5 else "projective", seed % 4))
    doc = tmp_path / "in.txt"
    doc.write_text(textformat.serialize(F, V))
    first = tmp_path / "first.txt"
    assert run("mmp", doc, "--allow-noncanonical", "--trace", first)[0] == 0
    recorded, _ = textformat.read_trace(first.read_text())
    assert len(recorded) > 2
    picks = []
    for w in recorded:
        picks += ["--pick", "wall=" + ",".join(map(str, w))]
    second = tmp_path / "second.txt"
    assert run("mmp", doc, "--allow-noncanonical", "--trace", second, *picks)[0] == 0
    assert _final_section(second.read_text()) == _final_section(first.read_text())
    assert second.read_text() == first.read_text()
