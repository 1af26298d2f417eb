"""Bracketed key-value documents for fans, foliations and MMP traces.

A document is a sequence of ``[section]`` headers followed by
``key = value`` lines.  Values use JSON syntax; a value may continue over
several lines until its brackets balance.  Rationals are written as
``"p/q"`` strings (bare ``p/q`` is accepted too) or plain integers.
``#`` starts a comment outside strings.

    [fan]
    lattice_rank = 3
    rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    max_cones = [[0, 1, 2]]

    [foliation]
    basis = [[1, 1, 0], [0, 0, 1]]
"""

import json
import re
from fractions import Fraction

from .errors import FanValidationError, ParseError, TorfolError
from .fan import FanData, validate
from .foliation import FoliationDatum

_HEADER = re.compile(r"^\[([A-Za-z_][\w.]*)\]$")
_KEY = re.compile(r"^([A-Za-z_]\w*)\s*=\s*(.*)$")
_BARE_RATIONAL = re.compile(r'(?<![\w"./])(-?\d+\s*/\s*-?\d+)(?![\w"./])')
_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(-?\d+))?\s*$")


def _strip_comment(line):
    out, quoted = [], False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        if ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out).strip()


def _balanced(text):
    depth, quoted = 0, False
    for ch in text:
        if ch == '"':
            quoted = not quoted
        elif not quoted and ch in "[{":
            depth += 1
        elif not quoted and ch in "]}":
            depth -= 1
    return depth <= 0


def read_sections(text):
    """``{section: {key: (value, line)}}`` plus the header line of each section."""
    sections, lines_of = {}, {}
    current = None
    pending = None  # (key, start_line, text)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if pending is not None:
            key, start, buf = pending
            buf += " " + line
            if _balanced(buf):
                sections[current][key] = (_decode(buf, start, key), start)
                pending = None
            else:
                pending = (key, start, buf)
            continue
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            current = m.group(1)
            if current in sections:
                raise ParseError(f"section [{current}] appears twice", line=number)
            sections[current], lines_of[current] = {}, number
            continue
        m = _KEY.match(line)
        if not m:
            raise ParseError(f"cannot read {raw.strip()!r}", line=number)
        if current is None:
            raise ParseError("key outside of any section", line=number, field=m.group(1))
        key, value = m.groups()
        if key in sections[current]:
            raise ParseError(f"duplicate key {key!r}", line=number, field=key)
        if _balanced(value):
            sections[current][key] = (_decode(value, number, key), number)
        else:
            pending = (key, number, value)
    if pending is not None:
        raise ParseError("unterminated value", line=pending[1], field=pending[0])
    return sections, lines_of


def _decode(text, line, key):
    text = _BARE_RATIONAL.sub(lambda m: '"' + m.group(1).replace(" ", "") + '"', text.strip())
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed value: {exc.msg}", line=line, field=key) from None


def parse_rational(value, line=None, field=None):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(f"expected a rational, got {value!r}", line=line, field=field)
    if isinstance(value, int):
        return Fraction(value)
    m = _RATIONAL.match(value)
    if not m:
        raise ParseError(f"malformed rational {value!r}", line=line, field=field)
    p, q = int(m.group(1)), int(m.group(2) or 1)
    if q == 0:
        raise ParseError(f"zero denominator in {value!r}", line=line, field=field)
    return Fraction(p, q)


def _integer(value, line, field):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", line=line, field=field)
    return value


def _matrix(value, line, field, cell):
    if not isinstance(value, list) or any(not isinstance(row, list) for row in value):
        raise ParseError("expected a list of lists", line=line, field=field)
    return [[cell(x, line, field) for x in row] for row in value]


def _require(section, key, name, line):
    if key not in section:
        raise ParseError(f"missing key {key!r} in [{name}]", line=line, field=key)
    return section[key]


def fan_from_section(section, name="fan", line=None):
    rank_value, rank_line = _require(section, "lattice_rank", name, line)
    n = _integer(rank_value, rank_line, "lattice_rank")
    if n < 1:
        raise ParseError("lattice_rank must be positive", line=rank_line, field="lattice_rank")
    rays_value, rays_line = _require(section, "rays", name, line)
    rays = _matrix(rays_value, rays_line, "rays", _integer)
    cones_value, cones_line = _require(section, "max_cones", name, line)
    cones = _matrix(cones_value, cones_line, "max_cones", _integer)
    return FanData(n, [tuple(r) for r in rays], cones)


def parse(text, check=True):
    """Read a fan and a foliation; with ``check`` the fan is validated (all violations reported)."""
    sections, lines_of = read_sections(text)
    for name in sections:
        if name not in ("fan", "foliation"):
            raise ParseError(f"unknown section [{name}]", line=lines_of[name])
    if "fan" not in sections:
        raise ParseError("missing section [fan]")
    F = fan_from_section(sections["fan"], "fan", lines_of["fan"])
    if check:
        problems = validate(F)
        if problems:
            raise FanValidationError(problems)
    if "foliation" not in sections:
        raise ParseError("missing section [foliation]")
    basis_value, basis_line = _require(sections["foliation"], "basis", "foliation", lines_of["foliation"])
    basis = _matrix(basis_value, basis_line, "basis", parse_rational)
    try:
        V = FoliationDatum(basis, F.n)
    except TorfolError as exc:
        raise ParseError(str(exc), line=basis_line, field="basis") from None
    return F, V


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f'"{x.numerator}/{x.denominator}"'


def format_vector(v):
    return "[" + ", ".join(format_rational(x) for x in v) + "]"


def format_matrix(rows):
    return "[" + ", ".join(format_vector(r) for r in rows) + "]"


def format_value(value):
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, Fraction)):
        return format_rational(value)
    if isinstance(value, str):
        return json.dumps(value)
    return "[" + ", ".join(format_value(v) for v in value) + "]"


def fan_lines(F, prefix=""):
    return [
        f"{prefix}lattice_rank = {F.n}",
        f"{prefix}rays = {format_matrix(F.rays)}",
        f"{prefix}max_cones = {format_matrix(F.max_cones)}",
    ]


def serialize(F, V):
    lines = ["[fan]", *fan_lines(F), "", "[foliation]", f"basis = {format_matrix(V.basis)}"]
    return "\n".join(lines) + "\n"


def serialize_trace(trace):
    """Machine-readable record of an MMP run, in the same bracketed format."""
    lines = ["[trace]", *fan_lines(trace.fan)]
    lines += [
        f"foliation = {format_matrix(trace.foliation.basis)}",
        f"initial_verdict = {format_value(trace.initial_verdict)}",
        f"noncanonical_override = {format_value(trace.noncanonical_override)}",
        f"outcome = {format_value(trace.outcome)}",
        f"steps = {len(trace.steps)}",
        f"flips = {trace.flips}",
        f"violations = {format_value(trace.violations)}",
    ]
    for s in trace.steps:
        lines += [
            "",
            f"[step.{s.index}]",
            f"wall = {format_value(s.wall)}",
            f"walls = {format_value(s.walls)}",
            f"direction = {format_value(s.direction)}",
            f"kind = {format_value(s.kind)}",
            f"kf_dot = {format_rational(s.kf_dot)}",
            f"contracted_ray = {format_value(s.contracted_ray)}",
            f"picard_before = {s.picard_before}",
            f"picard_after = {s.picard_after}",
            f"dicritical_before = {format_value(s.dicritical_before)}",
            f"dicritical_after = {format_value(s.dicritical_after)}",
        ]
        if s.fan_after is not None:
            lines += fan_lines(s.fan_after, "after_")
        pb = s.pullback
        if pb is not None:
            q = pb.quotient
            lines += [
                f"quotient_subspace = {format_matrix(pb.V_prime)}",
                f"quotient_lattice_rank = {q.lattice_rank}",
                f"quotient_projection = {format_matrix(q.projection)}",
                f"quotient_rays = {format_matrix(q.rays)}",
                f"quotient_max_cones = {format_matrix([c for c in q.cones if c])}",
                f"quotient_is_fan = {format_value(q.is_fan)}",
                f"quotient_is_morphism = {format_value(q.is_morphism)}",
                f"induced_foliation = {format_matrix(pb.induced_basis)}",
            ]
    lines += ["", "[final]", *fan_lines(trace.final_fan)]
    return "\n".join(lines) + "\n"


def read_trace(text):
    """The recorded walls (one per step) and the final fan of a trace document."""
    sections, lines_of = read_sections(text)
    if "trace" not in sections or "final" not in sections:
        raise ParseError("not a trace document")
    steps = sorted(
        (int(name.split(".", 1)[1]), body) for name, body in sections.items() if name.startswith("step.")
    )
    walls = [tuple(body["wall"][0]) for _, body in steps]
    final = fan_from_section(sections["final"], "final", lines_of["final"])
    return walls, final
