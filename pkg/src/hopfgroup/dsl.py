"""Text forms for scalars, functions and dual elements.

Grammar (whitespace insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := INT | 'z' INT | 'chi(' ELEM ',' 'level=' ['-'] INT ')'
             | 'conj(' expr ')' | '(' expr ')'

``z8`` is a primitive 8th root of unity, so ``1/2 + 3*z8^3`` is a scalar and
``2*chi(1/2, level=1) + z4*chi(0, level=0)`` is a function.  A dual element
is written ``L[<function>]``.  Errors carry a code (LEX, SYNTAX, ELEM, LEVEL)
and the 0-based offset where they were detected.
"""

import re
from fractions import Fraction

from .errors import ElementError, LevelRangeError, UsageError
from .schwartz import BSFunction
from .scalar import CycScalar, root_of_unity

__all__ = [
    "DSLError",
    "parse_scalar",
    "parse_function",
    "parse_dual",
    "format_scalar",
    "format_function",
    "format_dual",
]


class DSLError(UsageError):
    """Parse failure with a stable ``code`` and source ``pos``."""

    def __init__(self, code, message, pos):
        super().__init__(f"{code} at {pos}: {message}")
        self.code = code
        self.pos = pos


_INT = re.compile(r"\d+")


class _Parser:
    def __init__(self, src, group):
        self.src = src
        self.group = group
        self.pos = 0

    # -- low level -------------------------------------------------------
    def _skip(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def _startswith(self, word):
        self._skip()
        return self.src.startswith(word, self.pos)

    def _expect(self, ch):
        if self._peek() != ch:
            found = self._peek() or "end of input"
            raise DSLError("SYNTAX", f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def _int(self):
        self._skip()
        m = _INT.match(self.src, self.pos)
        if not m:
            raise DSLError("SYNTAX", "expected an integer", self.pos)
        self.pos = m.end()
        return int(m.group())

    # -- grammar ---------------------------------------------------------
    def parse(self):
        value = self.expr()
        self._skip()
        if self.pos != len(self.src):
            ch = self.src[self.pos]
            code = "SYNTAX" if ch in "+-*/^()[],=" or ch.isalnum() else "LEX"
            raise DSLError(code, f"unexpected {ch!r}", self.pos)
        return value

    def expr(self):
        value = self.term()
        while self._peek() in ("+", "-") and self._peek():
            op = self.src[self.pos]
            self.pos += 1
            rhs = self.term()
            value = _add(value, rhs) if op == "+" else _add(value, _neg(rhs))
        return value

    def term(self):
        value = self.unary()
        while self._peek() in ("*", "/") and self._peek():
            op = self.src[self.pos]
            at = self.pos
            self.pos += 1
            rhs = self.unary()
            value = _mul(value, rhs, at) if op == "*" else _div(value, rhs, at)
        return value

    def unary(self):
        ch = self._peek()
        if ch == "-":
            self.pos += 1
            return _neg(self.unary())
        if ch == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self._peek() == "^":
            at = self.pos
            self.pos += 1
            sign = 1
            if self._peek() == "-":
                self.pos += 1
                sign = -1
            e = sign * self._int()
            if isinstance(base, BSFunction):
                raise DSLError("SYNTAX", "powers apply to scalars only", at)
            if base.is_zero() and e < 0:
                raise DSLError("SYNTAX", "zero to a negative power", at)
            base = base**e
        return base

    def atom(self):
        ch = self._peek()
        start = self.pos
        if not ch:
            raise DSLError("SYNTAX", "unexpected end of input", self.pos)
        if ch.isdigit():
            return CycScalar(self._int())
        if self._startswith("chi"):
            self.pos += 3
            return self.chi(start)
        if self._startswith("conj"):
            self.pos += 4
            self._expect("(")
            inner = self.expr()
            self._expect(")")
            return inner.star() if isinstance(inner, BSFunction) else inner.conjugate()
        if ch == "z":
            self.pos += 1
            m = _INT.match(self.src, self.pos)
            if not m:
                raise DSLError("SYNTAX", "expected the order of a root of unity after 'z'", self.pos)
            self.pos = m.end()
            n = int(m.group())
            if n < 1:
                raise DSLError("SYNTAX", "root of unity order must be positive", start)
            return root_of_unity(n, 1)
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self._expect(")")
            return inner
        if ch in "+-*/^)],=":
            raise DSLError("SYNTAX", f"unexpected {ch!r}", self.pos)
        raise DSLError("LEX", f"invalid character {ch!r}", self.pos)

    def chi(self, start):
        if self.group is None:
            raise DSLError("SYNTAX", "chi(...) needs a group", start)
        self._expect("(")
        body_start = self.pos
        depth = 0
        split = None
        i = self.pos
        while i < len(self.src):
            c = self.src[i]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    break
                depth -= 1
            elif c == "," and depth == 0:
                split = i
            i += 1
        if i >= len(self.src):
            raise DSLError("SYNTAX", "unterminated chi(", start)
        if split is None:
            raise DSLError("SYNTAX", "chi needs 'level=<n>'", i)
        elem_text = self.src[body_start:split]
        level_text = self.src[split + 1 : i]
        m = re.fullmatch(r"\s*level\s*=\s*([+-]?\d+)\s*", level_text)
        if not m:
            raise DSLError("SYNTAX", "expected 'level=<int>'", split + 1)
        level = int(m.group(1))
        try:
            self.group.check_level(level)
        except LevelRangeError as exc:
            raise DSLError("LEVEL", str(exc), split + 1) from None
        try:
            x = self.group.parse_element(elem_text)
        except ElementError as exc:
            raise DSLError("ELEM", str(exc), body_start) from None
        self.pos = i + 1
        return BSFunction(self.group, level, {x: 1})


def _neg(v):
    return -v


def _add(a, b):
    if isinstance(a, BSFunction) and isinstance(b, BSFunction):
        return a + b
    if isinstance(a, CycScalar) and isinstance(b, CycScalar):
        return a + b
    # a scalar summand is only meaningful when it is zero ("0 + chi(...)")
    s, f = (a, b) if isinstance(a, CycScalar) else (b, a)
    if s.is_zero():
        return f
    raise DSLError("SYNTAX", "cannot add a nonzero constant to a compactly supported function", 0)


def _mul(a, b, at):
    if isinstance(a, BSFunction) and isinstance(b, BSFunction):
        return a * b
    if isinstance(a, BSFunction):
        return a.scale(b)
    if isinstance(b, BSFunction):
        return b.scale(a)
    return a * b


def _div(a, b, at):
    if isinstance(b, BSFunction):
        raise DSLError("SYNTAX", "division by a function", at)
    if b.is_zero():
        raise DSLError("SYNTAX", "division by zero", at)
    if isinstance(a, BSFunction):
        return a.scale(b.inverse())
    return a / b


def parse_scalar(src):
    """Parse a scalar literal such as ``-3/4 + z8^3``."""
    value = _Parser(src, None).parse()
    return value


def parse_function(src, group):
    """Parse the function DSL on ``group``; the literal ``0`` is the zero function."""
    value = _Parser(src, group).parse()
    if isinstance(value, CycScalar):
        if value.is_zero():
            return BSFunction.zero(group)
        raise DSLError("SYNTAX", "expected a function, got a constant", 0)
    return value


def parse_dual(src, group):
    """Parse ``L[<function>]`` into a ConvElement."""
    from .convalg import ConvElement

    s = src.strip()
    if not (s.startswith("L[") and s.endswith("]")):
        raise DSLError("SYNTAX", "dual elements are written L[...]", 0)
    offset = src.index("L[") + 2
    try:
        return ConvElement(parse_function(s[2:-1], group))
    except DSLError as exc:
        raise DSLError(exc.code, str(exc).split(": ", 1)[1], exc.pos + offset) from None


def format_scalar(c):
    return str(c if isinstance(c, CycScalar) else CycScalar(c))


def format_function(f):
    """Canonical DSL text: coarsest level, terms sorted by representative."""
    if f.is_zero():
        return "0"
    fmt = f.group.format_element
    parts = []
    for r, c in f.items():
        chi = f"chi({fmt(r)}, level={f.level})"
        if c.is_rational():
            q = c.to_fraction()
            sign = "-" if q < 0 else "+"
            mag = abs(q)
            body = chi if mag == 1 else f"{_frac(mag)}*{chi}"
        else:
            sign = "+"
            body = f"({c})*{chi}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _frac(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_dual(a):
    return f"L[{format_function(a.symbol)}]"
