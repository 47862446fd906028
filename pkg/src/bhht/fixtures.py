"""Fixture catalogue: flat text files describing (polynomial, G, S, expectations).

Format: section headers in brackets, one datum per line, ``#`` comments.

    [name]        optional; defaults to the file stem
    [polynomial]  one line, fixture polynomial grammar
    [G]           generator lines ``1/m(a1,...,an)``, the name ``J`` for the
                  exponential grading element, or the single word ``full``
    [S]           generator lines in cycle notation, or one named group
                  (A3, A4, A5, D10, Z2x2)
    [expect]      ``key = value`` expectations (pc, duality_equal, error,
                  golden_euler, ...)
    [meta]        free-form ``key = value`` bookkeeping (table row numbers etc.)
"""

import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .diaggroups import subgroup_generated, symmetry_group
from .errors import ParseError
from .permgroups import group_from_generators
from .polynomials import parse_polynomial, serialize_polynomial, weights

DATA_DIR = Path(__file__).parent / "fixtures_data"
ENV_VAR = "SAITO_FIXTURES"


@dataclass
class FixtureSpec:
    name: str
    polynomial_text: str
    g_lines: list
    s_lines: list
    expect: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def matrix(self):
        return parse_polynomial(self.polynomial_text)

    @property
    def nvars(self):
        return self.matrix.n

    def perm_group(self, bound=None):
        kwargs = {} if bound is None else {"bound": bound}
        return group_from_generators(self.nvars, self.s_lines, **kwargs)

    def diagonal_group(self):
        return symmetry_group(self.matrix.anchored())

    def g_subgroup(self, group=None):
        """The configured subgroup of the diagonal symmetry group."""
        group = group or self.diagonal_group()
        if self.g_lines == ["full"]:
            return frozenset(group.elements)
        gens = [parse_group_element(line, group) for line in self.g_lines]
        return subgroup_generated(group, gens)


def parse_group_element(line, group):
    """``1/m(a1,...,an)`` or the name J (weights of the matrix, mod 1)."""
    line = line.strip()
    if line == "J":
        return group.from_fractions([q % 1 for q in weights(group.matrix)])
    if not line.startswith("1/"):
        raise ParseError("bad group element %r" % line)
    try:
        denom_part, rest = line[2:].split("(", 1)
        m = int(denom_part)
        if not rest.endswith(")"):
            raise ValueError
        entries = [int(t) for t in rest[:-1].split(",")]
    except ValueError as exc:
        raise ParseError("bad group element %r" % line) from exc
    return group.from_fractions([Fraction(a, m) for a in entries])


def format_group_subgroup(group, elements):
    """Generator lines for a subgroup, matching the fixture grammar."""
    from .diaggroups import generating_subset
    gens = generating_subset(group, elements)
    if frozenset(elements) == frozenset(group.elements):
        return ["full"]
    return [group.format_element(g) for g in gens] or [group.format_element(group.zero)]


def _parse_value(raw):
    raw = raw.strip()
    low = raw.lower()
    if low in ("true", "yes"):
        return True
    if low in ("false", "no"):
        return False
    try:
        return int(raw)
    except ValueError:
        return raw


def parse_fixture(text, name="fixture"):
    section = None
    data = {"name": [], "polynomial": [], "G": [], "S": [], "expect": [], "meta": []}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in data:
                raise ParseError("unknown section %r" % section, lineno)
            continue
        if section is None:
            raise ParseError("content before any section", lineno)
        data[section].append(line)
    if len(data["polynomial"]) != 1:
        raise ParseError("fixture needs exactly one [polynomial] line")
    expect = {}
    for line in data["expect"]:
        if "=" not in line:
            raise ParseError("bad expectation line %r" % line)
        key, val = line.split("=", 1)
        expect[key.strip()] = _parse_value(val)
    meta = {}
    for line in data["meta"]:
        if "=" not in line:
            raise ParseError("bad meta line %r" % line)
        key, val = line.split("=", 1)
        meta[key.strip()] = _parse_value(val)
    g_lines = data["G"] or ["full"]
    if data["name"]:
        name = data["name"][0]
    return FixtureSpec(name=name, polynomial_text=data["polynomial"][0],
                       g_lines=g_lines, s_lines=data["S"], expect=expect, meta=meta)


def serialize_fixture(spec):
    lines = ["[name]", spec.name, "", "[polynomial]",
             serialize_polynomial(spec.matrix), "", "[G]"]
    lines += spec.g_lines or ["full"]
    lines += ["", "[S]"]
    lines += spec.s_lines
    if spec.expect:
        lines += ["", "[expect]"]
        lines += ["%s = %s" % (k, _fmt(v)) for k, v in sorted(spec.expect.items())]
    if spec.meta:
        lines += ["", "[meta]"]
        lines += ["%s = %s" % (k, _fmt(v)) for k, v in sorted(spec.meta.items())]
    return "\n".join(lines) + "\n"


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def fixtures_dir(override=None):
    if override:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return DATA_DIR


def load_fixture(path):
    path = Path(path)
    return parse_fixture(path.read_text(), name=path.stem)


def load_catalogue(directory=None):
    directory = fixtures_dir(directory)
    out = {}
    for path in sorted(directory.glob("*.fix")):
        out[path.stem] = load_fixture(path)
    return out
