"""Exact Laurent polynomials and differential forms in the logarithmic basis.

Coefficients are :class:`fractions.Fraction`.  A form of degree p is stored as
a map from strictly increasing index tuples ``(k1, ..., kp)`` (0-based) to
Laurent polynomials, meaning ``sum f_K * theta_k1 ^ ... ^ theta_kp`` where
``theta_k = dt_k / t_k``.  In this basis the exterior derivative acts on a
monomial ``t^v`` by ``d(t^v) = sum_l v_l t^v theta_l``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, Mapping, Tuple

Exponent = Tuple[int, ...]

MAX_DEGREE = 3


class DimensionError(ValueError):
    pass


class DegreeError(ValueError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(c)


class LaurentPoly:
    """Immutable Laurent polynomial over Q in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = int(nvars)
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != self.nvars:
                    raise DimensionError(
                        f"exponent {exp} has length {len(exp)}, expected {self.nvars}"
                    )
                c = _frac(c)
                if c:
                    clean[exp] = clean.get(exp, Fraction(0)) + c
                    if not clean[exp]:
                        del clean[exp]
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exponent: Iterable[int], coeff=1) -> "LaurentPoly":
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    @classmethod
    def var(cls, nvars: int, k: int, power: int = 1) -> "LaurentPoly":
        exp = [0] * nvars
        exp[k] = power
        return cls(nvars, {tuple(exp): 1})

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def support(self) -> list:
        return sorted(self._terms)

    def coeff(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    def max_abs_exponent(self) -> int:
        return max((abs(e) for exp in self._terms for e in exp), default=0)

    def homogeneous_part(self, exponent: Exponent) -> "LaurentPoly":
        exponent = tuple(exponent)
        return LaurentPoly(self.nvars, {exponent: self.coeff(exponent)})

    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return LaurentPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be raised to negative powers")
            (e, c), = self._terms.items()
            return LaurentPoly(self.nvars, {tuple(k * x for x in e): Fraction(1) / c ** (-k)})
        out = LaurentPoly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def euler(self, l: int) -> "LaurentPoly":
        """Apply ``t_l d/dt_l``: multiplies the monomial ``t^v`` by ``v_l``."""
        return LaurentPoly(self.nvars, {e: c * e[l] for e, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)!r}, nvars={self.nvars})"


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(exp: Exponent) -> str:
    parts = []
    for k, e in enumerate(exp):
        if e == 1:
            parts.append(f"t{k + 1}")
        elif e:
            parts.append(f"t{k + 1}^{e}")
    return "*".join(parts)


def _format_terms(pieces) -> str:
    # pieces: list of (coeff, factor string or "")
    if not pieces:
        return "0"
    out = []
    for i, (c, fac) in enumerate(pieces):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if fac:
            body = fac if a == 1 else f"{format_coeff(a)}*{fac}"
        else:
            body = format_coeff(a)
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_poly(f: LaurentPoly) -> str:
    return _format_terms([(c, format_monomial(e)) for e, c in f.items()])


class DlogForm:
    """Immutable differential form of degree ``degree`` in the theta basis."""

    __slots__ = ("nvars", "degree", "_comps", "_hash")

    def __init__(self, nvars: int, degree: int, components: Mapping[Tuple[int, ...], LaurentPoly] | None = None):
        if not 0 <= degree <= MAX_DEGREE:
            raise DegreeError(f"form degree {degree} outside 0..{MAX_DEGREE}")
        self.nvars = int(nvars)
        self.degree = degree
        comps: Dict[Tuple[int, ...], LaurentPoly] = {}
        for key, f in (components or {}).items():
            key = tuple(key)
            if len(key) != degree or any(b <= a for a, b in zip(key, key[1:])):
                raise ValueError(f"component key {key} is not strictly increasing of length {degree}")
            if any(not 0 <= k < nvars for k in key):
                raise ValueError(f"component key {key} out of range for {nvars} variables")
            if f.nvars != nvars:
                raise DimensionError("coefficient nvars mismatch")
            if not f.is_zero():
                comps[key] = comps[key] + f if key in comps else f
        self._comps = {k: v for k, v in comps.items() if not v.is_zero()}
        self._hash = None

    @classmethod
    def zero(cls, nvars: int, degree: int) -> "DlogForm":
        return cls(nvars, degree)

    @classmethod
    def from_poly(cls, f: LaurentPoly) -> "DlogForm":
        return cls(f.nvars, 0, {(): f})

    @classmethod
    def one_form(cls, coeffs: Iterable[LaurentPoly]) -> "DlogForm":
        coeffs = list(coeffs)
        return cls(coeffs[0].nvars, 1, {(k,): f for k, f in enumerate(coeffs)})

    @classmethod
    def constant(cls, vector: Iterable) -> "DlogForm":
        """Constant-coefficient 1-form ``sum a_k theta_k``."""
        vector = [_frac(a) for a in vector]
        n = len(vector)
        return cls(n, 1, {(k,): LaurentPoly.const(n, a) for k, a in enumerate(vector)})

    @classmethod
    def basis(cls, nvars: int, *indices: int) -> "DlogForm":
        """``theta_{i1} ^ ... ^ theta_{ip}`` for 0-based indices."""
        sign, key = _sort_sign(indices)
        if sign == 0:
            return cls(nvars, len(indices))
        return cls(nvars, len(indices), {key: LaurentPoly.const(nvars, sign)})

    def components(self) -> Dict[Tuple[int, ...], LaurentPoly]:
        return dict(self._comps)

    def items(self):
        return sorted(self._comps.items())

    def component(self, key) -> LaurentPoly:
        return self._comps.get(tuple(key), LaurentPoly.zero(self.nvars))

    def coefficients(self) -> list:
        """Coefficient list ``[f_0, ..., f_{n-1}]`` of a 1-form."""
        if self.degree != 1:
            raise DegreeError("coefficients() is defined for 1-forms")
        return [self.component((k,)) for k in range(self.nvars)]

    def multidegrees(self) -> set:
        return {e for f in self._comps.values() for e in f.terms}

    def homogeneous_part(self, exponent: Exponent) -> "DlogForm":
        return DlogForm(self.nvars, self.degree,
                        {k: f.homogeneous_part(exponent) for k, f in self._comps.items()})

    def constant_vector(self, exponent: Exponent | None = None) -> list:
        """Coefficient vector of a 1-form at one multidegree (default 0)."""
        exponent = (0,) * self.nvars if exponent is None else tuple(exponent)
        return [self.component((k,)).coeff(exponent) for k in range(self.nvars)]

    def is_zero(self) -> bool:
        return not self._comps

    def max_abs_exponent(self) -> int:
        return max((f.max_abs_exponent() for f in self._comps.values()), default=0)

    def _check(self, other: "DlogForm"):
        if not isinstance(other, DlogForm):
            raise TypeError("expected a DlogForm")
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
        if self.degree != other.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check(other)
        comps = dict(self._comps)
        for k, f in other._comps.items():
            comps[k] = comps[k] + f if k in comps else f
        return DlogForm(self.nvars, self.degree, comps)

    def __neg__(self):
        return DlogForm(self.nvars, self.degree, {k: -f for k, f in self._comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "DlogForm":
        """Multiply by a function (LaurentPoly) or a rational constant."""
        if not isinstance(f, LaurentPoly):
            f = LaurentPoly.const(self.nvars, f)
        return DlogForm(self.nvars, self.degree, {k: f * g for k, g in self._comps.items()})

    def __rmul__(self, f):
        return self.scale(f)

    def __eq__(self, other):
        if not isinstance(other, DlogForm):
            return NotImplemented
        return (self.nvars, self.degree, self._comps) == (other.nvars, other.degree, other._comps)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.degree, frozenset(self._comps.items())))
        return self._hash

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"DlogForm({format_form(self)!r}, degree={self.degree}, nvars={self.nvars})"


def _sort_sign(indices) -> Tuple[int, Tuple[int, ...]]:
    """Sign of the permutation sorting ``indices``; 0 on a repeated index."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def format_form(w: DlogForm) -> str:
    if w.degree == 0:
        return format_poly(w.component(()))
    pieces = []
    for key, f in w.items():
        basis = "*".join(f"Q{k + 1}" for k in key)
        for e, c in f.items():
            mono = format_monomial(e)
            pieces.append((c, f"{mono}*{basis}" if mono else basis))
    return _format_terms(pieces)


class UnitMonomial:
    """A unit ``c * t^a`` of a Laurent ring, with ``c`` a nonzero rational."""

    __slots__ = ("coeff", "exponent")

    def __init__(self, coeff, exponent: Iterable[int]):
        coeff = _frac(coeff)
        if not coeff:
            raise ValueError("unit coefficient must be nonzero")
        self.coeff = coeff
        self.exponent = tuple(int(a) for a in exponent)

    @classmethod
    def one(cls, nvars: int) -> "UnitMonomial":
        return cls(1, (0,) * nvars)

    @property
    def nvars(self) -> int:
        return len(self.exponent)

    def __mul__(self, other: "UnitMonomial") -> "UnitMonomial":
        if self.nvars != other.nvars:
            raise DimensionError("nvars mismatch")
        return UnitMonomial(self.coeff * other.coeff,
                            tuple(a + b for a, b in zip(self.exponent, other.exponent)))

    def inverse(self) -> "UnitMonomial":
        return UnitMonomial(1 / self.coeff, tuple(-a for a in self.exponent))

    def __truediv__(self, other: "UnitMonomial") -> "UnitMonomial":
        return self * other.inverse()

    def __pow__(self, k: int) -> "UnitMonomial":
        return UnitMonomial(self.coeff ** k, tuple(k * a for a in self.exponent))

    def is_one(self) -> bool:
        return self.coeff == 1 and not any(self.exponent)

    def as_poly(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.exponent, self.coeff)

    def __eq__(self, other):
        if not isinstance(other, UnitMonomial):
            return NotImplemented
        return (self.coeff, self.exponent) == (other.coeff, other.exponent)

    def __hash__(self):
        return hash((self.coeff, self.exponent))

    def __repr__(self):
        return f"UnitMonomial({format_coeff(self.coeff)}, {list(self.exponent)})"


# operations ---------------------------------------------------------------

def lp_arith(f: LaurentPoly, g: LaurentPoly, op: str) -> LaurentPoly:
    if f.nvars != g.nvars:
        raise DimensionError(f"nvars mismatch: {f.nvars} vs {g.nvars}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def dlog(u: UnitMonomial) -> DlogForm:
    """Logarithmic derivative ``du/u = sum_k a_k theta_k``; constant coefficients."""
    return DlogForm.constant(u.exponent)


def exterior_derivative(w: DlogForm) -> DlogForm:
    if w.degree >= MAX_DEGREE:
        raise DegreeError(f"d of a {w.degree}-form exceeds the degree cap {MAX_DEGREE}")
    n = w.nvars
    out: Dict[Tuple[int, ...], LaurentPoly] = {}
    for key, f in w.items():
        for l in range(n):
            if l in key:
                continue
            df = f.euler(l)
            if df.is_zero():
                continue
            sign, newkey = _sort_sign((l,) + key)
            term = df if sign > 0 else -df
            out[newkey] = out[newkey] + term if newkey in out else term
    return DlogForm(n, w.degree + 1, out)


def d(f) -> DlogForm:
    """Exterior derivative accepting a LaurentPoly as a 0-form."""
    if isinstance(f, LaurentPoly):
        f = DlogForm.from_poly(f)
    return exterior_derivative(f)


def wedge(a: DlogForm, b: DlogForm) -> DlogForm:
    if a.nvars != b.nvars:
        raise DimensionError("nvars mismatch")
    if a.degree + b.degree > MAX_DEGREE:
        raise DegreeError(f"wedge degree {a.degree + b.degree} exceeds the cap {MAX_DEGREE}")
    out: Dict[Tuple[int, ...], LaurentPoly] = {}
    for k1, f in a.items():
        for k2, g in b.items():
            sign, key = _sort_sign(k1 + k2)
            if sign == 0:
                continue
            term = f * g if sign > 0 else -(f * g)
            out[key] = out[key] + term if key in out else term
    return DlogForm(a.nvars, a.degree + b.degree, out)


def basis_keys(nvars: int, degree: int) -> Iterator[Tuple[int, ...]]:
    return combinations(range(nvars), degree)
