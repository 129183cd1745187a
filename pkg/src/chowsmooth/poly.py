"""Polynomials and rational functions over Q in named chart variables.

Arithmetic is delegated to sympy's sparse ``PolyElement`` (dict of exponent
tuples to exact rationals).  This module adds the pieces the verifier needs
on top: a small parser for the case-file grammar, canonical printing,
partial evaluation, rational functions with gcd reduction, and linear-part
extraction at the base point.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from sympy import QQ
from sympy.polys.rings import ring as _sympy_ring

from .scalars import ExtScalar, as_rational

BASE_ORDER = ("x", "y", "z", "t")
_VAR_RE = re.compile(r"^([a-z]+)_(\d+)$")


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ConstantNonvanishing(ValueError):
    """A relation does not hold at the base point."""


class VarName(NamedTuple):
    chart_id: int
    base_name: str

    @classmethod
    def parse(cls, text):
        m = _VAR_RE.match(text.strip())
        if not m:
            raise ParseError(f"bad variable name {text!r}")
        return cls(int(m.group(2)), m.group(1))

    def sort_key(self):
        b = self.base_name
        rank = BASE_ORDER.index(b) if b in BASE_ORDER else len(BASE_ORDER)
        return (self.chart_id, rank, b)

    def __str__(self):
        return f"{self.base_name}_{self.chart_id}"


def sort_names(names):
    return sorted(set(names), key=lambda n: VarName.parse(n).sort_key())


@lru_cache(maxsize=None)
def _ring_for(names):
    if not names:
        # sympy wants at least one generator; a dummy one is never printed
        R, _ = _sympy_ring("_c", QQ)
        return R
    R, *_ = _sympy_ring(",".join(names), QQ)
    return R


def make_ring(names):
    """Polynomial ring over QQ with the given variable names, canonically ordered."""
    return _ring_for(tuple(sort_names(names)))


@lru_cache(maxsize=None)
def _gen_table(R):
    return {str(g): g for g in R.gens}


def var(R, name):
    """Generator of R called ``name``."""
    try:
        return _gen_table(R)[name]
    except KeyError:
        raise KeyError(f"variable {name} not in ring") from None


def ring_names(R):
    return [str(g) for g in R.gens if str(g) != "_c"]


def qq(value):
    r = as_rational(value)
    return QQ(r.numerator, r.denominator)


def to_fraction(c):
    return Fraction(int(c.numerator), int(c.denominator))


def variables_of(p):
    """Names of the generators that actually occur in p."""
    R = p.ring
    used = set()
    for monom in p.keys():
        for i, e in enumerate(monom):
            if e:
                used.add(str(R.gens[i]))
    return used


def total_degree(p):
    if not p:
        return -1
    return max(sum(m) for m in p.keys())


# ---------------------------------------------------------------- printing

def _monomial_text(R, monom):
    parts = []
    for i, e in enumerate(monom):
        if e == 0:
            continue
        name = str(R.gens[i])
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_poly(p):
    """Canonical text: terms by increasing total degree, then by variable order."""
    if not p:
        return "0"
    R = p.ring
    terms = sorted(p.items(), key=lambda kv: (sum(kv[0]), [-e for e in kv[0]]))
    out = []
    for k, (monom, coeff) in enumerate(terms):
        c = to_fraction(coeff)
        mono = _monomial_text(R, monom)
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------- rational functions

class RatFunc:
    """num/den with den not identically zero; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if den is None:
            den = num.ring.one
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce and num:
            g = num.gcd(den)
            if g != 1:
                num = num.exquo(g)
                den = den.exquo(g)
        if not num:
            den = den.ring.one
        # monic-ish normal form: leading coefficient of den positive and 1
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    @classmethod
    def const(cls, R, value):
        return cls(R(qq(value)))

    def __add__(self, other):
        other = _coerce(self, other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-_coerce(self, other))

    def __rsub__(self, other):
        return _coerce(self, other) - self

    def __mul__(self, other):
        other = _coerce(self, other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(self, other)
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(self, other) / self

    def __pow__(self, k):
        if k < 0:
            return RatFunc(self.den ** (-k), self.num ** (-k))
        return RatFunc(self.num ** k, self.den ** k, reduce=False)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = _coerce(self, other)
            except TypeError:
                return NotImplemented
        return ratfunc_equal(self, other)

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self):
        return not self.num

    def subs(self, assignment):
        """Substitute values (rationals or ring elements) into num and den."""
        num = poly_eval_partial(self.num, assignment)
        den = poly_eval_partial(self.den, assignment)
        return num, den

    def at(self, assignment):
        """ExtScalar value after substituting every occurring variable."""
        num, den = self.subs(assignment)
        if num.ring.ngens and (not num.is_ground or not den.is_ground):
            left = variables_of(num) | variables_of(den)
            raise ValueError(f"unassigned variables {sorted(left)}")
        return ExtScalar(to_fraction(num.LC) if num else 0, to_fraction(den.LC) if den else 0)

    def __str__(self):
        if self.den == 1:
            return format_poly(self.num)
        n = format_poly(self.num)
        d = format_poly(self.den)
        if len(self.num) > 1:
            n = f"({n})"
        if len(self.den) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    __repr__ = __str__


def _coerce(ref, other):
    if isinstance(other, RatFunc):
        return other
    R = ref.ring
    if isinstance(other, (int, Fraction)):
        return RatFunc(R(qq(other)), reduce=False)
    if getattr(other, "ring", None) is R:
        return RatFunc(other, reduce=False)
    raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")


def ratfunc_equal(a, b):
    return not (a.num * b.den - b.num * a.den)


def poly_eval_partial(p, assignment):
    """Substitute the assigned variables; the result stays in p's ring."""
    if not assignment:
        return p
    R = p.ring
    pairs = []
    for name, value in assignment.items():
        if isinstance(name, str):
            g = _gen_table(R).get(name)
            if g is None:
                continue
        else:
            g = name
        if isinstance(value, (int, Fraction)) or not hasattr(value, "ring"):
            value = qq(value)
        pairs.append((g, value))
    if not pairs:
        return p
    return p.subs(pairs) if all(not hasattr(v, "ring") for _, v in pairs) else p.compose(pairs)


def poly_constant(p):
    """The rational value of a ground polynomial."""
    if not p:
        return Fraction(0)
    if not p.is_ground:
        raise ValueError(f"{format_poly(p)} is not constant")
    return to_fraction(p.LC)


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z]+_\d+)|(\S))")


def _tokenize(text):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("var", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return toks


class _ExprParser:
    def __init__(self, text, R, line=None, col0=0):
        self.text = text
        self.R = R
        self.toks = _tokenize(text)
        self.i = 0
        self.line = line
        self.col0 = col0
        self.names = set(ring_names(R))

    def error(self, msg, tok=None):
        col = None
        if tok is not None:
            col = self.col0 + tok[2] + 1
        raise ParseError(msg, self.line, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            self.error("empty expression")
        val = self.expr()
        t = self.peek()
        if t is not None:
            self.error(f"unexpected {t[1]!r}", t)
        return val

    def expr(self):
        t = self.peek()
        neg = False
        if t and t[0] == "op" and t[1] in "+-":
            self.take()
            neg = t[1] == "-"
        val = self.term()
        if neg:
            val = -val
        while True:
            t = self.peek()
            if t and t[0] == "op" and t[1] in "+-":
                self.take()
                rhs = self.term()
                val = val + rhs if t[1] == "+" else val - rhs
            else:
                return val

    def term(self):
        val = self.power()
        while True:
            t = self.peek()
            if t and t[0] == "op" and t[1] in "*/":
                self.take()
                rhs = self.power()
                if t[1] == "*":
                    val = val * rhs
                else:
                    if rhs.is_zero():
                        self.error("division by zero", t)
                    val = val / rhs
            elif t and (t[0] in ("var", "num") or t[1] == "("):
                # juxtaposition is not part of the grammar
                self.error(f"missing operator before {t[1]!r}", t)
            else:
                return val

    def power(self):
        base = self.atom()
        t = self.peek()
        if t and t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if not e or e[0] != "num":
                self.error("exponent must be a nonnegative integer", e or t)
            base = base ** int(e[1])
        return base

    def atom(self):
        t = self.take()
        if t is None:
            self.error("unexpected end of expression")
        kind, text, _ = t
        if kind == "num":
            return RatFunc(self.R(qq(int(text))), reduce=False)
        if kind == "var":
            if text not in self.names:
                self.error(f"undeclared variable {text}", t)
            return RatFunc(var(self.R, text), reduce=False)
        if text == "(":
            val = self.expr()
            close = self.take()
            if not close or close[1] != ")":
                self.error("expected ')'", close or t)
            return val
        if text in "+-":
            # unary sign after an operator, e.g. "2*-x_1"
            inner = self.power()
            return -inner if text == "-" else inner
        self.error(f"unexpected {text!r}", t)


def parse_ratfunc(text, R, line=None, column=0):
    return _ExprParser(text, R, line, column).parse()


def parse_poly(text, R, line=None, column=0):
    rf = parse_ratfunc(text, R, line, column)
    if not rf.den.is_ground:
        raise ParseError(f"{text!r} is not a polynomial", line)
    return rf.num.quo_ground(rf.den.LC)


# ---------------------------------------------------------------- linear part at the base

@dataclass
class LinearForm:
    """P(base) plus the coefficients of the differentials d(var) at the base."""

    constant_check: object
    coefficients: dict = field(default_factory=dict)

    def is_empty(self):
        return not self.constant_check and not any(self.coefficients.values())

    def __str__(self):
        parts = []
        for name, c in self.coefficients.items():
            if c:
                parts.append(f"({format_poly(c)})*d{name}")
        body = " + ".join(parts) if parts else "0"
        if self.constant_check:
            body = f"[{format_poly(self.constant_check)}] + " + body
        return body


def base_assignment(infinitesimals):
    return {name: 0 for name in infinitesimals}


def linearize_at_base(P, infinitesimals, parameters=(), differentiate=None, base=None):
    """Linear part of the cleared relation P at the base point.

    ``base`` maps every infinitesimal to 0 by default; it may also carry
    values for solved parameters (rational or ring elements).  The
    differentials taken are ``differentiate`` (default: the infinitesimals
    only; the verifier passes every chart variable).
    """
    infinitesimals = list(infinitesimals)
    if differentiate is None:
        differentiate = infinitesimals
    occurring = variables_of(P)
    allowed = set(infinitesimals) | set(parameters)
    stray = occurring - allowed
    if stray:
        raise ValueError(f"unclassified variables {sorted(stray)}")
    if base is None:
        base = base_assignment(infinitesimals)
    R = P.ring
    const = poly_eval_partial(P, base)
    coeffs = {}
    for name in differentiate:
        if name not in occurring:
            coeffs[name] = R.zero
            continue
        d = P.diff(var(R, name))
        coeffs[name] = poly_eval_partial(d, base)
    return LinearForm(const, coeffs)


def linear_part_by_scaling(P, infinitesimals):
    """Oracle for linearize_at_base: put v -> eps*v, keep the eps^1 coefficient.

    Works on the term dictionary directly: the eps-degree of a monomial is its
    total degree in the infinitesimals.  Returns {name: coefficient} using the
    same conventions as linearize_at_base (parameters left symbolic).
    """
    R = P.ring
    idx = {str(g): i for i, g in enumerate(R.gens)}
    inf_idx = [idx[n] for n in infinitesimals if n in idx]
    out = {n: R.zero for n in infinitesimals}
    const = R.zero
    for monom, coeff in P.items():
        deg = sum(monom[i] for i in inf_idx)
        if deg == 0:
            const += R({monom: coeff})
        elif deg == 1:
            which = next(i for i in inf_idx if monom[i])
            stripped = list(monom)
            stripped[which] = 0
            out[str(R.gens[which])] += R({tuple(stripped): coeff})
    return LinearForm(const, out)
