"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import ParseError

Exponent = tuple[int, ...]

__all__ = [
    "Polynomial",
    "parse_polynomial",
    "format_polynomial",
    "evaluate",
    "scale",
    "add_constant",
    "as_fraction",
]


def as_fraction(value) -> Fraction:
    """Exact rational view of ``value`` (ints, Fractions, floats, numeric strings)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coefficient {value!r}")
        return Fraction(float(value))
    return Fraction(value)


@dataclass(frozen=True)
class Polynomial:
    """A polynomial ``sum f_a x^a`` stored as a map exponent -> nonzero coefficient.

    Terms are kept in lexicographic order of the exponent vectors, so equality,
    hashing and printing are deterministic.
    """

    nvars: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be positive")
        clean = {}
        for exp, coeff in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {self.nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = clean.get(exp, Fraction(0)) + as_fraction(coeff)
            clean[exp] = c
        ordered = {e: clean[e] for e in sorted(clean) if clean[e] != 0}
        object.__setattr__(self, "terms", ordered)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Exponent, object]], nvars: int) -> "Polynomial":
        acc: dict[Exponent, Fraction] = {}
        for exp, c in terms:
            exp = tuple(exp)
            acc[exp] = acc.get(exp, Fraction(0)) + as_fraction(c)
        return cls(nvars, acc)

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and tuple(self.terms.items()) == tuple(other.terms.items())

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_space(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        return format_polynomial(self)

    def _check_same_space(self, other):
        if other.nvars != self.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def coeff(self, exponent) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    @property
    def constant(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    @property
    def support(self) -> list[Exponent]:
        return list(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def exponent_matrix(self) -> np.ndarray:
        return np.array(list(self.terms) or np.zeros((0, self.nvars)), dtype=float).reshape(-1, self.nvars)

    def coefficient_vector(self) -> np.ndarray:
        return np.array([float(c) for c in self.terms.values()], dtype=float)

    def evaluate_many(self, points) -> np.ndarray:
        """Evaluate at every row of an ``(m, nvars)`` array."""
        X = np.atleast_2d(np.asarray(points, dtype=float))
        if X.shape[1] != self.nvars:
            raise ValueError(f"points have dimension {X.shape[1]}, expected {self.nvars}")
        if not self.terms:
            return np.zeros(X.shape[0])
        E = self.exponent_matrix()
        with np.errstate(over="ignore", invalid="ignore"):
            mono = np.prod(X[:, None, :] ** E[None, :, :], axis=2)
            return mono @ self.coefficient_vector()

    def term_magnitudes(self, points) -> np.ndarray:
        """``sum |f_a x^a|`` at each row; a scale for rounding error in ``evaluate_many``."""
        X = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.terms:
            return np.zeros(X.shape[0])
        E = self.exponent_matrix()
        with np.errstate(over="ignore", invalid="ignore"):
            mono = np.prod(np.abs(X)[:, None, :] ** E[None, :, :], axis=2)
            return mono @ np.abs(self.coefficient_vector())


# ---------------------------------------------------------------------------
# Parsing


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<var>x(?P<index>\d+))
  | (?P<op>[-+*/^])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("ws") is None:
            if m.group("number") is not None:
                tokens.append(("number", m.group("number"), pos))
            elif m.group("var") is not None:
                tokens.append(("var", m.group("index"), pos))
            else:
                tokens.append(("op", m.group("op"), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, nvars):
        self.text = text
        self.nvars = nvars
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            found = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {found!r}", tok[2])
        return tok

    def parse(self):
        acc: dict[Exponent, Fraction] = {}
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            self.take()
        while True:
            exp, coeff = self.term()
            acc[exp] = acc.get(exp, Fraction(0)) + sign * coeff
            tok = self.peek()
            if tok[0] == "end":
                break
            if tok[0] == "op" and tok[1] in "+-":
                sign = -1 if tok[1] == "-" else 1
                self.take()
                continue
            raise ParseError(f"expected '+', '-' or end of input, found {tok[1]!r}", tok[2])
        return Polynomial(self.nvars, acc)

    def term(self):
        exp = [0] * self.nvars
        coeff = Fraction(1)
        tok = self.peek()
        if tok[0] == "number":
            coeff = self.coefficient()
            if self.peek()[:2] != ("op", "*"):
                return tuple(exp), coeff
            self.take()
        elif tok[0] != "var":
            raise ParseError(f"expected a coefficient or variable, found {tok[1] or 'end of input'!r}", tok[2])
        self.power(exp)
        while self.peek()[:2] == ("op", "*"):
            self.take()
            self.power(exp)
        return tuple(exp), coeff

    def coefficient(self):
        tok = self.expect("number")
        text = tok[1]
        if self.peek()[:2] == ("op", "/"):
            self.take()
            den = self.expect("number")
            if not (text.isdigit() and den[1].isdigit()):
                raise ParseError("fractions must be written INT/INT", tok[2])
            if int(den[1]) == 0:
                raise ParseError("division by zero", den[2])
            return Fraction(int(text), int(den[1]))
        return Fraction(text)

    def power(self, exp):
        tok = self.peek()
        if tok[0] != "var":
            raise ParseError(f"expected a variable, found {tok[1] or 'end of input'!r}", tok[2])
        self.take()
        idx = int(tok[1])
        if not 1 <= idx <= self.nvars:
            raise ParseError(f"variable x{idx} out of range 1..{self.nvars}", tok[2])
        e = 1
        if self.peek()[:2] == ("op", "^"):
            self.take()
            nxt = self.peek()
            if nxt[:2] == ("op", "-"):
                raise ParseError("negative exponent", nxt[2])
            num = self.expect("number")
            if not num[1].isdigit():
                raise ParseError(f"non-integer exponent {num[1]!r}", num[2])
            e = int(num[1])
        exp[idx - 1] += e


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse ``text`` such as ``"1/4 + x1^8 + 4*x1^3*x2^3"`` into a :class:`Polynomial`.

    Variables are ``x1 .. x<nvars>``. Coefficients may be integers, ``INT/INT``
    fractions or decimals; all are stored exactly. Like terms are merged and
    zero coefficients dropped.

    Raises
    ------
    ParseError
        With the offending character offset in ``.position``.
    """
    if nvars < 1:
        raise ValueError("nvars must be positive")
    return _Parser(text, nvars).parse()


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_polynomial(f: Polynomial) -> str:
    """Canonical text form; ``parse_polynomial(format_polynomial(f), f.nvars) == f``."""
    if not f.terms:
        return "0"
    parts = []
    for exp, c in f.terms.items():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        pows = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exp) if e]
        if not pows:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(pows)
        else:
            body = _format_coeff(mag) + "*" + "*".join(pows)
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def evaluate(f: Polynomial, x) -> float:
    """Floating point value of ``f`` at the point ``x``."""
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != f.nvars:
        raise ValueError(f"point has dimension {x.shape[0]}, expected {f.nvars}")
    return float(f.evaluate_many(x[None, :])[0])


def scale(f: Polynomial, t) -> Polynomial:
    """Multiply every coefficient by ``t > 0``."""
    t = as_fraction(t)
    if t <= 0:
        raise ValueError("scale factor must be positive")
    return Polynomial(f.nvars, {e: c * t for e, c in f.terms.items()})


def add_constant(f: Polynomial, c) -> Polynomial:
    zero = (0,) * f.nvars
    terms = dict(f.terms)
    terms[zero] = terms.get(zero, Fraction(0)) + as_fraction(c)
    return Polynomial(f.nvars, terms)
