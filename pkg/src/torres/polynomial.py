"""Sparse exact polynomials and rational functions with linear-form denominators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class SparsePoly:
    """Polynomial in ``nvars`` variables stored as {exponent tuple: Fraction}.

    Exponents may be negative (Laurent monomials) where callers need it.
    Zero coefficients are never stored.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    e = tuple(int(x) for x in e)
                    if len(e) != nvars:
                        raise ValueError(f"exponent {e} does not have {nvars} entries")
                    self.terms[e] = self.terms.get(e, 0) + c
            self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def constant(cls, nvars: int, c) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "SparsePoly":
        n = len(coeffs)
        return cls(n, {tuple(int(i == k) for i in range(n)): c for k, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, exps: Sequence, c=1) -> "SparsePoly":
        return cls(len(exps), {tuple(exps): c})

    def copy(self) -> "SparsePoly":
        p = SparsePoly(self.nvars)
        p.terms = dict(self.terms)
        return p

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(self.nvars, other)
        return isinstance(other, SparsePoly) and self.nvars == other.nvars and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i + 1}^{k}" if k != 1 else f"x{i + 1}" for i, k in enumerate(e) if k)
            parts.append(f"{self.terms[e]}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = SparsePoly(self.nvars)
        p.terms = out
        return p

    def __neg__(self) -> "SparsePoly":
        return self.scale(-1)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def scale(self, c) -> "SparsePoly":
        c = Fraction(c)
        p = SparsePoly(self.nvars)
        if c:
            p.terms = {e: v * c for e, v in self.terms.items()}
        return p

    def __mul__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        p = SparsePoly(self.nvars)
        p.terms = {e: c for e, c in out.items() if c}
        return p

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            raise ValueError("negative powers are only defined for monomials")
        result = SparsePoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Total degree of a homogeneous nonzero polynomial."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(ds)})")
        return next(iter(ds))

    def homogeneous_components(self) -> dict:
        out: dict = {}
        for e, c in self.terms.items():
            out.setdefault(sum(e), {})[e] = c
        return {d: _from_terms(self.nvars, t) for d, t in out.items()}

    def substitute_linear(self, forms: Sequence[Sequence]) -> "SparsePoly":
        """Replace variable i by the linear form ``forms[i]`` (a coefficient vector)."""
        if len(forms) != self.nvars:
            raise ValueError(f"need {self.nvars} forms, got {len(forms)}")
        m = len(forms[0]) if forms else 0
        lin = [SparsePoly.linear(f) for f in forms]
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = lin[i] ** k
            return cache[key]

        out = SparsePoly(m)
        for e, c in self.terms.items():
            if any(k < 0 for k in e):
                raise ValueError("cannot substitute into a Laurent monomial")
            term = SparsePoly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return total


def _from_terms(nvars: int, terms: dict) -> SparsePoly:
    p = SparsePoly(nvars)
    p.terms = dict(terms)
    return p


def normalize_form(form: Sequence) -> tuple[tuple, Fraction]:
    """Scale a linear form so its first nonzero coefficient is 1.

    Returns ``(normalized, scale)`` with ``form == scale * normalized``.
    """
    form = tuple(Fraction(x) for x in form)
    lead = next((x for x in form if x), None)
    if lead is None:
        raise ZeroDivisionError("zero linear form")
    return tuple(x / lead for x in form), lead


@dataclass(frozen=True)
class RatFun:
    """``num / prod(form_k ** mult_k)`` with linear-form denominators."""

    num: SparsePoly
    den: tuple  # ((form tuple, multiplicity), ...)

    @classmethod
    def make(cls, num: SparsePoly, den: Iterable) -> "RatFun":
        out = []
        for form, mult in den:
            form = tuple(Fraction(x) for x in form)
            if not any(form):
                raise ValueError("denominator form is identically zero")
            if mult < 0:
                raise ValueError("denominator multiplicity must be nonnegative")
            if mult:
                out.append((form, int(mult)))
        return cls(num, tuple(out))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def den_degree(self) -> int:
        return sum(m for _, m in self.den)

    def degree(self) -> int:
        """Degree for a homogeneous numerator (numerator degree minus denominator degree)."""
        if not self.num:
            raise ValueError("zero function has no degree")
        return self.num.degree() - self.den_degree()

    def evaluate(self, point: Sequence):
        d = 1
        for form, m in self.den:
            d = d * sum(c * x for c, x in zip(form, point)) ** m
        return self.num.evaluate(point) / d

    def scale(self, c) -> "RatFun":
        return RatFun(self.num.scale(c), self.den)
