"""Text syntax for Laurent polynomials and 1-forms.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT ['/' INT] | 't' INT | 'Q' INT | '(' expr ')'

``tK`` is the K-th torus coordinate and ``QK`` the log form ``dtK/tK``.
A product may contain at most one ``Q`` factor.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .algebra import DlogForm, LaurentPoly

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[tQ])(?P<idx>\d+)|(?P<op>[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class _Value:
    """Either a function (``form`` is None) or a 1-form ``{k: coefficient}``."""

    __slots__ = ("poly", "form")

    def __init__(self, poly: LaurentPoly | None = None, form: Dict[int, LaurentPoly] | None = None):
        self.poly = poly
        self.form = form


class _Parser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.nvars = nvars
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                                 self._offset(len(text) - len(text[pos:].lstrip())))
            start = m.start(m.lastgroup if m.lastgroup != "idx" else "var")
            if m.group("int") is not None:
                self.tokens.append(("int", m.group("int"), start))
            elif m.group("var") is not None:
                self.tokens.append((m.group("var"), m.group("idx"), start))
            else:
                self.tokens.append(("op", m.group("op"), start))
            pos = m.end()
        self.i = 0

    def _offset(self, index: int) -> int:
        return len(self.text[:index].encode("utf-8"))

    def _end(self) -> int:
        return self._offset(len(self.text))

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str):
        tok = self.peek()
        raise ParseError(message, self._offset(tok[2]) if tok else self._end())

    def take_op(self, op: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == op:
            self.i += 1
            return True
        return False

    def take_int(self) -> int:
        tok = self.peek()
        if not tok or tok[0] != "int":
            self.error("expected an integer")
        self.i += 1
        return int(tok[1])

    # values
    def const(self, c) -> _Value:
        return _Value(poly=LaurentPoly.const(self.nvars, c))

    def add(self, a: _Value, b: _Value, sign: int, where: int) -> _Value:
        if a.form is None and b.form is None:
            return _Value(poly=a.poly + b.poly if sign > 0 else a.poly - b.poly)
        if a.form is None or b.form is None:
            zero = (a.form is None and a.poly.is_zero()) or (b.form is None and b.poly.is_zero())
            if not zero:
                raise ParseError("cannot add a function and a 1-form", where)
            a = a if a.form is not None else _Value(form={})
            b = b if b.form is not None else _Value(form={})
        out = dict(a.form)
        for k, f in b.form.items():
            f = f if sign > 0 else -f
            out[k] = out[k] + f if k in out else f
        return _Value(form=out)

    def mul(self, a: _Value, b: _Value, where: int) -> _Value:
        if a.form is not None and b.form is not None:
            raise ParseError("product of two 1-forms is not supported", where)
        if a.form is None and b.form is None:
            return _Value(poly=a.poly * b.poly)
        f, form = (a.poly, b.form) if a.form is None else (b.poly, a.form)
        return _Value(form={k: f * g for k, g in form.items()})

    # grammar
    def expr(self) -> _Value:
        val = self.term()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.i += 1
                rhs = self.term()
                val = self.add(val, rhs, 1 if tok[1] == "+" else -1, self._offset(tok[2]))
            else:
                return val

    def term(self) -> _Value:
        val = self.unary()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.i += 1
                val = self.mul(val, self.unary(), self._offset(tok[2]))
            else:
                return val

    def unary(self) -> _Value:
        if self.take_op("-"):
            v = self.unary()
            return self.mul(self.const(-1), v, 0)
        return self.power()

    def power(self) -> _Value:
        start = self.peek()
        val = self.atom()
        if self.take_op("^"):
            neg = self.take_op("-")
            k = self.take_int()
            k = -k if neg else k
            if val.form is not None:
                raise ParseError("cannot raise a 1-form to a power", self._offset(start[2]))
            if k < 0 and len(val.poly.terms) != 1:
                raise ParseError("negative powers are only allowed for monomials", self._offset(start[2]))
            val = _Value(poly=val.poly ** k)
        return val

    def atom(self) -> _Value:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        kind, text, pos = tok
        if kind == "int":
            self.i += 1
            num = int(text)
            if self.take_op("/"):
                den = self.take_int()
                if den == 0:
                    raise ParseError("zero denominator", self._offset(self.tokens[self.i - 1][2]))
                return self.const(Fraction(num, den))
            return self.const(num)
        if kind in ("t", "Q"):
            self.i += 1
            k = int(text)
            if not 1 <= k <= self.nvars:
                raise ParseError(f"unknown variable index {kind}{k} for {self.nvars} variables",
                                 self._offset(pos))
            if kind == "t":
                return _Value(poly=LaurentPoly.var(self.nvars, k - 1))
            return _Value(form={k - 1: LaurentPoly.const(self.nvars, 1)})
        if self.take_op("("):
            val = self.expr()
            if not self.take_op(")"):
                self.error("expected ')'")
            return val
        self.error(f"unexpected {text!r}")

    def parse(self) -> _Value:
        if not self.tokens:
            raise ParseError("empty expression", 0)
        val = self.expr()
        if self.peek() is not None:
            self.error("unexpected trailing input")
        return val


def infer_nvars(text: str) -> int:
    idx = [int(m.group(1)) for m in re.finditer(r"[tQ](\d+)", text)]
    return max(idx, default=1)


def parse_expression(text: str, nvars: Optional[int] = None) -> Union[LaurentPoly, DlogForm]:
    """Parse a Laurent polynomial or a 1-form; forms are recognised by ``Q``."""
    n = infer_nvars(text) if nvars is None else nvars
    val = _Parser(text, n).parse()
    if val.form is None:
        return val.poly
    return DlogForm(n, 1, {(k,): f for k, f in val.form.items()})


def parse_poly(text: str, nvars: Optional[int] = None) -> LaurentPoly:
    val = parse_expression(text, nvars)
    if isinstance(val, DlogForm):
        raise ParseError("expected a function, got a 1-form", 0)
    return val


def parse_form(text: str, nvars: Optional[int] = None) -> DlogForm:
    val = parse_expression(text, nvars)
    if isinstance(val, LaurentPoly):
        if val.is_zero():
            return DlogForm.zero(val.nvars, 1)
        raise ParseError("expected a 1-form, got a function", 0)
    return val
