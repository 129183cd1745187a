"""Charts, cases and the case-file format.

A case file looks like::

    case A.1
    expect corank 4 span dx_1,dx_2,dx_3,dy_1
    chart 1
    var x_1 class nonzero
    var y_1, z_1 class inf
    point D = (y_1 : 1 : x_1)
    line E,F = (1 : -1 : 0)
    fact 1: cr(C,A;D,B|E) = zero
    formula 2: cr(C,E;D,B|A) = 1/t_2
    rel: 1:cr(C,E;D,B|A) == 2:cr(C,E;D,B|A)

Besides the core directives there are ``sample`` (free variables for the
cross-chart solver), ``value`` (like ``formula`` but a recomputed closed
form rather than a published one), ``symmetry`` plus ``relsym:`` (a relation together with
its images under a label/chart permutation) and ``chart <id> stabilized``.
"""

import hashlib
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .geometry import ProjLine, ProjPoint, cross, det3, dot, minors
from .invariants import Config, parse_spec
from .poly import (
    ParseError,
    RatFunc,
    VarName,
    format_poly,
    make_ring,
    parse_poly,
    parse_ratfunc,
    poly_eval_partial,
    sort_names,
    variables_of,
)

LABELS = "ABCDEF"
CORPUS_DIR = Path(__file__).parent / "corpus"


class ValidationError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class SampleRejected(RuntimeError):
    pass


class VarClass(Enum):
    INFINITESIMAL = "inf"
    NONZERO = "nonzero"
    GENERIC = "generic"
    FREE = "free"

    def admits(self, value):
        if self is VarClass.NONZERO:
            return value != 0
        if self is VarClass.GENERIC:
            return value != 0 and value != 1
        return True


class FactKind(Enum):
    ZERO = "zero"
    INFINITY = "inf"
    UNDEFINED = "undef"
    NONZERO = "nonzero"


@dataclass
class Chart:
    chart_id: int
    ring: object
    points: dict = field(default_factory=dict)  # label -> ProjPoint over ring
    lines: dict = field(default_factory=dict)  # frozenset(label pair) -> ProjLine
    variables: dict = field(default_factory=dict)  # name -> VarClass
    stabilized: bool = False

    @property
    def infinitesimals(self):
        return [v for v, c in self.variables.items() if c is VarClass.INFINITESIMAL]

    @property
    def parameters(self):
        return [v for v, c in self.variables.items() if c is not VarClass.INFINITESIMAL]

    def config(self):
        return Config(self.points, self.lines)


@dataclass
class Relation:
    lhs: tuple  # (chart_id, spec)
    rhs: object  # (chart_id, spec) or RatFunc
    label: str = ""
    origin: str = "file"  # file | symmetry | saturate

    def charts(self):
        out = [self.lhs[0]]
        if not isinstance(self.rhs, RatFunc):
            out.append(self.rhs[0])
        return out

    def text(self):
        left = f"{self.lhs[0]}:{self.lhs[1]}"
        if isinstance(self.rhs, RatFunc):
            right = str(self.rhs)
        else:
            right = f"{self.rhs[0]}:{self.rhs[1]}"
        return f"{left} == {right}"


@dataclass
class DegeneracyFact:
    chart_id: int
    spec: object
    expected: FactKind


@dataclass
class Formula:
    chart_id: int
    spec: object
    expected: RatFunc
    text: str = ""
    published: bool = True  # False for ``value`` lines (recomputed closed forms)


@dataclass
class Symmetry:
    labels: dict
    charts: dict

    def order(self):
        k = 1
        lab, ch = dict(self.labels), dict(self.charts)
        while k < 64:
            if all(lab.get(x, x) == x for x in LABELS) and all(ch.get(c, c) == c for c in ch):
                return k
            lab = {x: self.labels.get(lab.get(x, x), lab.get(x, x)) for x in LABELS}
            ch = {c: self.charts.get(ch.get(c, c), ch.get(c, c)) for c in self.charts}
            k += 1
        raise ValidationError("symmetry has no finite order on the declared charts")


@dataclass
class CaseSpec:
    case_name: str
    ring: object
    charts: dict = field(default_factory=dict)  # id -> Chart (insertion ordered)
    relations: list = field(default_factory=list)
    facts: list = field(default_factory=list)
    formulas: list = field(default_factory=list)
    expected_corank: object = None
    expected_spanning: list = field(default_factory=list)
    sample_vars: list = field(default_factory=list)
    symmetry: object = None
    source_hash: str = ""

    @property
    def variables(self):
        out = {}
        for ch in self.charts.values():
            out.update(ch.variables)
        return out

    @property
    def variable_names(self):
        return sort_names(self.variables)

    @property
    def infinitesimals(self):
        return [v for v in self.variable_names if self.variables[v] is VarClass.INFINITESIMAL]

    @property
    def parameters(self):
        return [v for v in self.variable_names if self.variables[v] is not VarClass.INFINITESIMAL]


# ---------------------------------------------------------------- parsing

def _split_top(text, sep):
    """Split on sep outside parentheses."""
    depth = 0
    parts, cur = [], []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_triple(text, R, lineno):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError("expected '( e0 : e1 : e2 )'", lineno)
    parts = _split_top(text[1:-1], ":")
    if len(parts) != 3:
        raise ParseError("a point needs three coordinates", lineno)
    return [parse_poly(p, R, lineno) for p in parts]


def _parse_var_list(text):
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        if tok.startswith("d") and "_" in tok and tok[1:2].isalpha():
            tok = tok[1:]
        VarName.parse(tok)
        out.append(tok)
    return out


def _parse_perm(text, lineno, as_int=False):
    mapping = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "->" not in item:
            raise ParseError(f"bad permutation entry {item!r}", lineno)
        a, b = (s.strip() for s in item.split("->"))
        if as_int:
            a, b = int(a), int(b)
        mapping[a] = b
    if sorted(mapping) != sorted(mapping.values()):
        raise ParseError("permutation is not a bijection", lineno)
    return mapping


def _side(text, R, charts, lineno):
    text = text.strip()
    head, sep, rest = text.partition(":")
    if sep and head.strip().isdigit() and rest.strip()[:3] in ("cr(", "tr("):
        cid = int(head)
        if cid not in charts:
            raise ValidationError(f"unknown chart {cid}", lineno)
        try:
            spec = parse_spec(rest)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        return (cid, spec)
    return parse_ratfunc(text, R, lineno)


def _prescan_variables(lines):
    names = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if line.startswith("var "):
            body = line[4:]
            if " class " not in body:
                raise ParseError("expected 'var <name> class <cls>'", lineno)
            decl = body.split(" class ", 1)[0]
            for tok in decl.split(","):
                tok = tok.strip()
                try:
                    VarName.parse(tok)
                except ParseError:
                    raise ParseError(f"bad variable name {tok!r}", lineno) from None
                names.append(tok)
    return names


def parse_case(text, validate=True):
    """Parse a case file into a CaseSpec."""
    lines = text.splitlines()
    names = _prescan_variables(lines)
    R = make_ring(names)
    case = CaseSpec(case_name="", ring=R)
    case.source_hash = hashlib.sha256(text.encode("utf-8")).hexdigest()
    chart = None
    seen_vars = {}
    pending_sym = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split(None, 1)[0]
        rest = line[len(word):].strip()
        if word == "case":
            case.case_name = rest
        elif word == "expect":
            toks = rest.split()
            if len(toks) < 2 or toks[0] != "corank":
                raise ParseError("expected 'expect corank <int> [span <vars>]'", lineno)
            try:
                case.expected_corank = int(toks[1])
            except ValueError:
                raise ParseError("corank must be an integer", lineno) from None
            if len(toks) > 2:
                if toks[2] != "span":
                    raise ParseError("expected 'span' after the corank", lineno)
                case.expected_spanning = _parse_var_list(" ".join(toks[3:]))
        elif word == "sample":
            case.sample_vars = _parse_var_list(rest)
        elif word == "symmetry":
            if not rest.startswith("labels ") or " charts " not in rest:
                raise ParseError("expected 'symmetry labels <perm> charts <perm>'", lineno)
            lab_txt, ch_txt = rest[len("labels "):].split(" charts ", 1)
            case.symmetry = Symmetry(_parse_perm(lab_txt, lineno), _parse_perm(ch_txt, lineno, as_int=True))
        elif word == "chart":
            toks = rest.split()
            if not toks or not toks[0].isdigit():
                raise ParseError("expected 'chart <id>'", lineno)
            cid = int(toks[0])
            if cid in case.charts:
                raise ValidationError(f"chart {cid} declared twice", lineno)
            chart = Chart(cid, R, stabilized="stabilized" in toks[1:])
            case.charts[cid] = chart
        elif word == "var":
            if chart is None:
                raise ParseError("'var' outside a chart", lineno)
            decl, cls = rest.split(" class ", 1)
            try:
                vc = VarClass(cls.strip())
            except ValueError:
                raise ParseError(f"unknown class {cls.strip()!r}", lineno) from None
            for tok in decl.split(","):
                tok = tok.strip()
                if tok in seen_vars:
                    raise ValidationError(f"variable {tok} declared twice", lineno)
                seen_vars[tok] = chart.chart_id
                chart.variables[tok] = vc
        elif word == "point":
            if chart is None:
                raise ParseError("'point' outside a chart", lineno)
            label, _, triple = rest.partition("=")
            label = label.strip()
            if label not in LABELS or len(label) != 1:
                raise ParseError(f"bad point label {label!r}", lineno)
            coords = _parse_triple(triple, R, lineno)
            _check_chart_vars(chart, coords, lineno)
            if all(not c for c in coords):
                raise ValidationError(f"point {label} has all coordinates zero", lineno)
            chart.points[label] = ProjPoint(*coords)
        elif word == "line":
            if chart is None:
                raise ParseError("'line' outside a chart", lineno)
            pair, _, triple = rest.partition("=")
            labs = [s.strip() for s in pair.split(",")]
            if len(labs) != 2 or any(x not in LABELS or len(x) != 1 for x in labs) or labs[0] == labs[1]:
                raise ParseError(f"bad line labels {pair.strip()!r}", lineno)
            coords = _parse_triple(triple, R, lineno)
            _check_chart_vars(chart, coords, lineno)
            chart.lines[frozenset(labs)] = ProjLine(*coords)
        elif word == "fact":
            head, _, body = rest.partition(":")
            if not head.strip().isdigit():
                raise ParseError("expected 'fact <chart>: <spec> = <kind>'", lineno)
            spec_txt, _, kind = body.rpartition("=")
            try:
                fk = FactKind(kind.strip())
                spec = parse_spec(spec_txt)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            case.facts.append(DegeneracyFact(int(head), spec, fk))
        elif word in ("formula", "value"):
            head, _, body = rest.partition(":")
            if not head.strip().isdigit():
                raise ParseError(f"expected '{word} <chart>: <spec> = <ratfunc>'", lineno)
            spec_txt, _, expr = body.partition("=")
            try:
                spec = parse_spec(spec_txt)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            rf = parse_ratfunc(expr, R, lineno)
            case.formulas.append(Formula(int(head), spec, rf, expr.strip(), published=word == "formula"))
        elif word in ("rel:", "relsym:") or line.startswith("rel:") or line.startswith("relsym:"):
            kind, _, body = line.partition(":")
            if "==" not in body:
                raise ParseError("relation needs '=='", lineno)
            left, right = body.split("==", 1)
            lhs = _side(left, R, case.charts, lineno)
            rhs = _side(right, R, case.charts, lineno)
            if isinstance(lhs, RatFunc):
                lhs, rhs = rhs, lhs
            if isinstance(lhs, RatFunc):
                raise ParseError("a relation needs at least one invariant side", lineno)
            rel = Relation(lhs, rhs, label=f"L{lineno}", origin="file")
            case.relations.append(rel)
            if kind.strip() == "relsym":
                rel.origin = "relsym"
                pending_sym.append((rel, lineno))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)
    if not case.case_name:
        raise ValidationError("missing 'case <name>'")
    # forward references to charts declared later are allowed
    for rel in case.relations:
        for cid in rel.charts():
            if cid not in case.charts:
                raise ValidationError(f"relation {rel.label} uses unknown chart {cid}")
    if pending_sym:
        if case.symmetry is None:
            raise ValidationError("'relsym:' needs a 'symmetry' declaration")
        for rel, lineno in pending_sym:
            case.relations.extend(symmetric_images(case, rel, lineno))
    if validate:
        validate_case(case)
    return case


def _check_chart_vars(chart, coords, lineno):
    for c in coords:
        for name in variables_of(c):
            if name not in chart.variables:
                raise ValidationError(f"variable {name} is not declared in chart {chart.chart_id}", lineno)


def rename_ratfunc(rf, chart_map, R):
    """Move each variable x_i to x_{chart_map[i]}."""
    if not chart_map:
        return rf
    names = {}
    for name in variables_of(rf.num) | variables_of(rf.den):
        v = VarName.parse(name)
        if v.chart_id in chart_map:
            names[name] = str(VarName(chart_map[v.chart_id], v.base_name))
    if not names:
        return rf
    from .poly import var

    pairs = {k: var(R, v) for k, v in names.items()}
    num = rf.num.compose([(var(R, k), g) for k, g in pairs.items()])
    den = rf.den.compose([(var(R, k), g) for k, g in pairs.items()])
    return RatFunc(num, den)


def _image_side(side, sym, R):
    if isinstance(side, RatFunc):
        return rename_ratfunc(side, sym.charts, R)
    cid, spec = side
    if cid not in sym.charts:
        raise ValidationError(f"symmetry does not act on chart {cid}")
    return (sym.charts[cid], spec.relabel(sym.labels))


def symmetric_images(case, rel, lineno):
    sym = case.symmetry
    out = []
    cur = rel
    for k in range(1, sym.order()):
        cur = Relation(
            _image_side(cur.lhs, sym, case.ring),
            _image_side(cur.rhs, sym, case.ring),
            label=f"L{lineno}^{k}",
            origin="symmetry",
        )
        for cid in cur.charts():
            if cid not in case.charts:
                raise ValidationError(f"symmetric image of line {lineno} lands on missing chart {cid}")
        out.append(cur)
    return out


# ---------------------------------------------------------------- validation

def _at_base(p, chart):
    return poly_eval_partial(p, {v: 0 for v in chart.infinitesimals})


def validate_case(case):
    for chart in case.charts.values():
        validate_chart(chart)
    for rel in case.relations:
        from .relations import side_value

        for side in (rel.lhs, rel.rhs):
            if isinstance(side, RatFunc):
                continue
            try:
                val = side_value(case, side)
            except Exception as exc:  # MissingLine, DegenerateTriangle
                raise ValidationError(f"relation {rel.label}: {side[1]} on chart {side[0]}: {exc}") from None
            if not val.den:
                raise ValidationError(f"relation {rel.label}: {side[1]} is identically degenerate on chart {side[0]}")
    for f in case.facts:
        if f.chart_id not in case.charts:
            raise ValidationError(f"fact refers to unknown chart {f.chart_id}")
    for f in case.formulas:
        if f.chart_id not in case.charts:
            raise ValidationError(f"formula refers to unknown chart {f.chart_id}")
        chart = case.charts[f.chart_id]
        stray = (variables_of(f.expected.num) | variables_of(f.expected.den)) - set(chart.variables)
        if stray:
            raise ValidationError(f"formula on chart {f.chart_id} uses foreign variables {sorted(stray)}")
    for v in case.expected_spanning + case.sample_vars:
        if v not in case.variables:
            raise ValidationError(f"unknown variable {v}")
    return True


def validate_chart(chart):
    labels = sorted(chart.points)
    if len(labels) < 4:
        raise ValidationError(f"chart {chart.chart_id} has fewer than four points")
    pts = {k: tuple(_at_base(c, chart) for c in p) for k, p in chart.points.items()}
    for k, p in pts.items():
        if all(not c for c in p):
            raise ValidationError(f"chart {chart.chart_id}: point {k} vanishes at the base point")
    for pair, ln in chart.lines.items():
        base_line = tuple(_at_base(c, chart) for c in ln)
        for lab in pair:
            if lab not in pts:
                raise ValidationError(f"chart {chart.chart_id}: line on unknown point {lab}")
            if dot(base_line, pts[lab]):
                a, b = sorted(pair)
                raise ValidationError(f"chart {chart.chart_id}: line l_{a},{b} misses {lab} at the base point")
    if chart.stabilized:
        lines = [tuple(_at_base(c, chart) for c in ln) for ln in chart.lines.values()]
        ok = any(
            all(det3(*trio) for trio in combinations(quad, 3)) for quad in combinations(lines, 4)
        )
        if not ok:
            raise ValidationError(f"chart {chart.chart_id} is flagged stabilized but has no four general lines")
        return True
    for quad in combinations(labels, 4):
        if all(det3(*(pts[x] for x in trio)) for trio in combinations(quad, 3)):
            return True
    raise ValidationError(f"chart {chart.chart_id}: no four points in general position at the base point")


# ---------------------------------------------------------------- printing

def _fmt_triple(t):
    return "(" + " : ".join(format_poly(c) for c in t) + ")"


def format_case(case):
    out = [f"case {case.case_name}"]
    if case.expected_corank is not None:
        s = f"expect corank {case.expected_corank}"
        if case.expected_spanning:
            s += " span " + ",".join("d" + v for v in case.expected_spanning)
        out.append(s)
    if case.sample_vars:
        out.append("sample " + ",".join(case.sample_vars))
    if case.symmetry:
        lab = ",".join(f"{a}->{b}" for a, b in case.symmetry.labels.items())
        ch = ",".join(f"{a}->{b}" for a, b in case.symmetry.charts.items())
        out.append(f"symmetry labels {lab} charts {ch}")
    for chart in case.charts.values():
        out.append("")
        out.append(f"chart {chart.chart_id}" + (" stabilized" if chart.stabilized else ""))
        for name, vc in chart.variables.items():
            out.append(f"var {name} class {vc.value}")
        for label in sorted(chart.points):
            out.append(f"point {label} = {_fmt_triple(chart.points[label])}")
        for pair in sorted(chart.lines, key=sorted):
            a, b = sorted(pair)
            out.append(f"line {a},{b} = {_fmt_triple(chart.lines[pair])}")
    if case.facts:
        out.append("")
    for f in case.facts:
        out.append(f"fact {f.chart_id}: {f.spec} = {f.expected.value}")
    if case.formulas:
        out.append("")
    for f in case.formulas:
        word = "formula" if f.published else "value"
        out.append(f"{word} {f.chart_id}: {f.spec} = {f.expected}")
    if case.relations:
        out.append("")
    for rel in case.relations:
        if rel.origin == "file":
            out.append(f"rel: {rel.text()}")
        elif rel.origin == "relsym":
            out.append(f"relsym: {rel.text()}")
    return "\n".join(out) + "\n"


def case_structure(case):
    """Hashable structural summary used for round-trip comparisons."""
    charts = []
    for c in case.charts.values():
        charts.append(
            (
                c.chart_id,
                c.stabilized,
                tuple(sorted((k, v.value) for k, v in c.variables.items())),
                tuple(sorted((k, tuple(format_poly(x) for x in p)) for k, p in c.points.items())),
                tuple(sorted((tuple(sorted(k)), tuple(format_poly(x) for x in ln)) for k, ln in c.lines.items())),
            )
        )
    rels = tuple((r.text(), r.origin) for r in case.relations)
    facts = tuple((f.chart_id, str(f.spec), f.expected.value) for f in case.facts)
    forms = tuple((f.chart_id, str(f.spec), str(f.expected), f.published) for f in case.formulas)
    return (
        case.case_name,
        case.expected_corank,
        tuple(case.expected_spanning),
        tuple(case.sample_vars),
        tuple(charts),
        rels,
        facts,
        forms,
    )


# ---------------------------------------------------------------- corpus

def load_case(path):
    path = Path(path)
    return parse_case(path.read_text(encoding="utf-8"))


def corpus_files(kind="y6"):
    """Bundled case files; kind is 'y6', 'y5' or 'all'."""
    files = sorted(CORPUS_DIR.glob("*.case"))
    if kind == "y6":
        files = [f for f in files if not f.name.startswith("Y5")]
    elif kind == "y5":
        files = [f for f in files if f.name.startswith("Y5")]
    return files


def bundled_case(name):
    for f in corpus_files("all"):
        head = f.read_text(encoding="utf-8")
        for line in head.splitlines():
            line = line.split("#", 1)[0].strip()
            if line.startswith("case "):
                if line[5:].strip() == name:
                    return parse_case(head)
                break
    raise KeyError(f"no bundled case named {name!r}")


# ---------------------------------------------------------------- relabelling

def relabel_case(case, mapping, new_name=None):
    """Rename point labels everywhere (charts, lines, specs)."""
    m = lambda x: mapping.get(x, x)  # noqa: E731
    out = CaseSpec(
        case_name=new_name or case.case_name,
        ring=case.ring,
        expected_corank=case.expected_corank,
        expected_spanning=list(case.expected_spanning),
        sample_vars=list(case.sample_vars),
        source_hash=case.source_hash,
    )
    for cid, ch in case.charts.items():
        nc = Chart(cid, ch.ring, variables=dict(ch.variables), stabilized=ch.stabilized)
        nc.points = {m(k): p for k, p in ch.points.items()}
        nc.lines = {frozenset(m(x) for x in k): ln for k, ln in ch.lines.items()}
        out.charts[cid] = nc

    def side(s):
        if isinstance(s, RatFunc):
            return s
        return (s[0], s[1].relabel(mapping))

    out.relations = [Relation(side(r.lhs), side(r.rhs), r.label, r.origin) for r in case.relations]
    out.facts = [DegeneracyFact(f.chart_id, f.spec.relabel(mapping), f.expected) for f in case.facts]
    out.formulas = [
        Formula(f.chart_id, f.spec.relabel(mapping), f.expected, f.text, f.published) for f in case.formulas
    ]
    if case.symmetry:
        out.symmetry = Symmetry({m(a): m(b) for a, b in case.symmetry.labels.items()}, dict(case.symmetry.charts))
    return out


# ---------------------------------------------------------------- facts and base configurations

def _classify(num_b, den_b):
    if not num_b and not den_b:
        return FactKind.UNDEFINED
    if not num_b:
        return FactKind.ZERO
    if not den_b:
        return FactKind.INFINITY
    return FactKind.NONZERO


def base_value(case, chart_id, spec, base=None):
    """Classify an invariant at the base point; returns (kind, text)."""
    from .relations import symbolic_value
    from .cotangent import case_base

    if base is None:
        base = case_base(case)
    val = symbolic_value(case.charts[chart_id], spec)
    if not val.den:
        kind = FactKind.UNDEFINED if not val.num else FactKind.INFINITY
        return kind, str(val)
    nb = base.at(val.num)
    db = base.at(val.den)
    kind = _classify(nb.num, db.num)
    if kind is FactKind.NONZERO:
        text = str(nb / db)
    else:
        text = kind.value
    return kind, text


def check_facts(case, base=None):
    """Evaluate every DegeneracyFact at the base point."""
    from .cotangent import case_base

    if base is None:
        base = case_base(case)
    report = []
    for f in case.facts:
        try:
            kind, text = base_value(case, f.chart_id, f.spec, base)
            ok = kind is f.expected
            err = None
        except Exception as exc:
            kind, text, ok, err = None, "", False, f"{type(exc).__name__}: {exc}"
        report.append(
            {
                "chart": f.chart_id,
                "spec": str(f.spec),
                "expected": f.expected.value,
                "computed": kind.value if kind else "error",
                "value": text,
                "pass": ok,
                "error": err,
            }
        )
    return report


def draw_rational(rng, bound):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def sample_parameters(case, rng, bound=97, base=None, retries=200):
    """Admissible values for the free parameters plus the solved ones."""
    from .cotangent import case_base

    if base is None:
        base = case_base(case)
    classes = case.variables
    for _ in range(retries):
        vals = {}
        for p in base.free:
            v = draw_rational(rng, bound)
            while not classes[p].admits(v):
                v = draw_rational(rng, bound)
            vals[p] = v
        ok = True
        for name, rf in base.solved.items():
            val = rf.at(vals)
            if not val.is_finite or not classes[name].admits(val.value()):
                ok = False
                break
            vals[name] = val.value()
        if ok:
            return vals
    raise SampleRejected("could not draw admissible parameters")


def base_configuration(case, chart_id, seed=0, bound=97, params=None):
    """Concrete rational picture of a chart at its base point.

    Infinitesimals are 0, parameters sampled (or taken from ``params``).
    Lines for pairs that collide at the base point come from the limit of the
    join when the chart determines it, else from the declared l_{i,j}.
    Returns (Config, params, undetermined_pairs).
    """
    chart = case.charts[chart_id]
    if params is None:
        params = sample_parameters(case, random.Random(seed), bound)
    assign = {v: 0 for v in chart.infinitesimals}
    assign.update({k: v for k, v in params.items() if k in chart.variables})

    def ev(p):
        q = poly_eval_partial(p, assign)
        if not q.is_ground:
            raise ValueError("unassigned chart variable")
        return Fraction(int(q.LC.numerator), int(q.LC.denominator)) if q else Fraction(0)

    pts = {k: tuple(ev(c) for c in p) for k, p in chart.points.items()}
    lines = {}
    missing = []
    for a, b in combinations(sorted(pts), 2):
        if any(minors(pts[a], pts[b])):
            continue
        key = frozenset((a, b))
        if key in chart.lines:
            lines[key] = tuple(ev(c) for c in chart.lines[key])
            continue
        j = cross(chart.points[a], chart.points[b])
        nz = [c for c in j if c]
        if nz:
            g = nz[0]
            for c in nz[1:]:
                g = g.gcd(c)
            j = tuple(c.exquo(g) if c else c for c in j)
            limit = tuple(ev(c) for c in j)
            if any(limit):
                lines[key] = limit
                continue
        missing.append((a, b))
    return Config(pts, lines), params, missing
