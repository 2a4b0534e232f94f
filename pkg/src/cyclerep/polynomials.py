"""Exact polynomial arithmetic over the rationals.

Univariate polynomials are dense (tuple of coefficients, index = power,
no trailing zeros); bivariate polynomials are sparse (sorted tuple of
((deg_u, deg_v), coefficient) pairs, zero coefficients never stored).
Coefficients are `fractions.Fraction`, so everything in this module is
exact; floating point enters only through the ``*_float`` evaluators
used at the symbolic/numeric boundary.

The degree of the zero polynomial is the sentinel ``NEG_INF`` (minus
infinity), never -1, so degree laws cannot pass vacuously on zero
inputs.

All values are immutable after construction and every operation is a
pure function, so they are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]

NEG_INF = float("-inf")


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"expected an exact rational coefficient, got {type(c).__name__}")


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies x**k."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        cs = [_as_fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls(())

    @classmethod
    def const(cls, c: Scalar) -> "UniPoly":
        return cls((c,))

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> Union[int, float]:
        """Degree, or NEG_INF for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: Union["UniPoly", Scalar]) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return UniPoly(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return UniPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(other.coeffs):
                if cj:
                    out[i + j] += ci * cj
        return UniPoly(out)

    def __rmul__(self, other: Scalar) -> "UniPoly":
        return self * other

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """Exact composition self(inner(x)) by Horner's scheme."""
        result = UniPoly.zero()
        for c in reversed(self.coeffs):
            result = result * inner + UniPoly.const(c)
        return result

    def evaluate(self, x: Scalar) -> Fraction:
        x = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(f"{c}*x^{k}" if k else f"{c}")
        return " + ".join(parts)


def chebyshev(m: int) -> UniPoly:
    """Chebyshev polynomial of the first kind, via the three-term recurrence.

    T_0 = 1, T_1 = x, T_{k+1} = 2x T_k - T_{k-1}.  Degree is exactly m and
    the leading coefficient is 2**(m-1) for m >= 1, so coefficients need
    arbitrary precision.
    """
    if m < 0:
        raise ValueError(f"Chebyshev index must be >= 0, got {m}")
    prev = UniPoly.const(1)
    if m == 0:
        return prev
    cur = UniPoly.x()
    two_x = UniPoly((0, 2))
    for _ in range(m - 1):
        prev, cur = cur, two_x * cur - prev
    return cur


Term = tuple[tuple[int, int], Fraction]


@dataclass(frozen=True)
class BiPoly:
    """Sparse bivariate polynomial in (u, v); zero coefficients never stored."""

    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        raw = self.terms.items() if isinstance(self.terms, Mapping) else self.terms
        acc: dict[tuple[int, int], Fraction] = {}
        for (du, dv), c in raw:
            c = _as_fraction(c)
            if c == 0:
                continue
            key = (int(du), int(dv))
            if key[0] < 0 or key[1] < 0:
                raise ValueError(f"negative exponent {key}")
            acc[key] = acc.get(key, Fraction(0)) + c
        object.__setattr__(
            self, "terms", tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        )

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls(())

    @classmethod
    def const(cls, c: Scalar) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def u(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def v(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def from_uni(cls, p: UniPoly, var: int) -> "BiPoly":
        """Embed a univariate polynomial as p(u) (var=0) or p(v) (var=1)."""
        if var not in (0, 1):
            raise ValueError("var must be 0 (first coordinate) or 1 (second)")
        if var == 0:
            return cls({(k, 0): c for k, c in enumerate(p.coeffs)})
        return cls({(0, k): c for k, c in enumerate(p.coeffs)})

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> Union[int, float]:
        """max(deg_u + deg_v) over stored terms; NEG_INF for zero."""
        if not self.terms:
            return NEG_INF
        return max(du + dv for (du, dv), _ in self.terms)

    def coefficient(self, du: int, dv: int) -> Fraction:
        for key, c in self.terms:
            if key == (du, dv):
                return c
        return Fraction(0)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        acc = dict(self.terms)
        for key, c in other.terms:
            acc[key] = acc.get(key, Fraction(0)) + c
        return BiPoly(acc)

    def __neg__(self) -> "BiPoly":
        return BiPoly(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: Union["BiPoly", Scalar]) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return BiPoly(tuple((k, c * other) for k, c in self.terms))
        acc: dict[tuple[int, int], Fraction] = {}
        for (au, av), ca in self.terms:
            for (bu, bv), cb in other.terms:
                key = (au + bu, av + bv)
                acc[key] = acc.get(key, Fraction(0)) + ca * cb
        return BiPoly(acc)

    def __rmul__(self, other: Scalar) -> "BiPoly":
        return self * other

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = BiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def partial_u(self) -> "BiPoly":
        return BiPoly({(du - 1, dv): du * c for (du, dv), c in self.terms if du >= 1})

    def partial_v(self) -> "BiPoly":
        return BiPoly({(du, dv - 1): dv * c for (du, dv), c in self.terms if dv >= 1})

    def evaluate(self, xu: Scalar, xv: Scalar) -> Fraction:
        xu, xv = _as_fraction(xu), _as_fraction(xv)
        upow: dict[int, Fraction] = {0: Fraction(1)}
        vpow: dict[int, Fraction] = {0: Fraction(1)}

        def power(cache, base, k):
            while len(cache) <= k:
                cache[len(cache)] = cache[len(cache) - 1] * base
            return cache[k]

        acc = Fraction(0)
        for (du, dv), c in self.terms:
            acc += c * power(upow, xu, du) * power(vpow, xv, dv)
        return acc

    def evaluate_float(self, u: float, v: float) -> float:
        # Horner in v inside each u-row, then Horner in u.
        rows: dict[int, dict[int, float]] = {}
        for (du, dv), c in self.terms:
            rows.setdefault(du, {})[dv] = float(c)
        if not rows:
            return 0.0
        acc = 0.0
        for du in range(max(rows), -1, -1):
            row = rows.get(du)
            if row is None:
                rowval = 0.0
            else:
                rowval = 0.0
                for dv in range(max(row), -1, -1):
                    rowval = rowval * v + row.get(dv, 0.0)
            acc = acc * u + rowval
        return acc

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"{c}*u^{du}*v^{dv}" for (du, dv), c in self.terms)


def total_degree(f: BiPoly) -> Union[int, float]:
    return f.total_degree()


def compose_separable(P: BiPoly, p: UniPoly) -> BiPoly:
    """Exact substitution P(p(u), p(v)) for a separable coordinate change.

    Total degree is at most deg(p) * deg(P), with equality whenever the top
    homogeneous part of P is nonzero.
    """
    powers: dict[int, UniPoly] = {0: UniPoly.const(1)}

    def ppow(k: int) -> UniPoly:
        while len(powers) <= k:
            powers[len(powers)] = powers[len(powers) - 1] * p
        return powers[k]

    acc: dict[tuple[int, int], Fraction] = {}
    for (a, b), c in P.terms:
        pa, pb = ppow(a).coeffs, ppow(b).coeffs
        for i, ci in enumerate(pa):
            if ci == 0:
                continue
            for j, cj in enumerate(pb):
                if cj == 0:
                    continue
                key = (i, j)
                acc[key] = acc.get(key, Fraction(0)) + c * ci * cj
    return BiPoly(acc)


def compose_pair(P: BiPoly, p: BiPoly, q: BiPoly) -> BiPoly:
    """Exact substitution P(p(u,v), q(u,v)) for a general polynomial map."""
    ppowers: dict[int, BiPoly] = {0: BiPoly.const(1)}
    qpowers: dict[int, BiPoly] = {0: BiPoly.const(1)}

    def power(cache: dict[int, BiPoly], base: BiPoly, k: int) -> BiPoly:
        while len(cache) <= k:
            cache[len(cache)] = cache[len(cache) - 1] * base
        return cache[k]

    acc = BiPoly.zero()
    for (a, b), c in P.terms:
        acc = acc + power(ppowers, p, a) * power(qpowers, q, b) * c
    return acc


@dataclass(frozen=True)
class VectorField2:
    """Planar polynomial vector field (p_comp, q_comp)."""

    p_comp: BiPoly
    q_comp: BiPoly

    def degree(self) -> Union[int, float]:
        """max of the component total degrees; NEG_INF for the zero field."""
        return max(self.p_comp.total_degree(), self.q_comp.total_degree())

    @property
    def is_zero(self) -> bool:
        return self.p_comp.is_zero and self.q_comp.is_zero


# --- JSON encoding: rationals as "num/den" strings, bit-exact round-trip ---


def fraction_to_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s)


def unipoly_to_json(p: UniPoly) -> dict:
    return {"coeffs": [fraction_to_str(c) for c in p.coeffs]}


def unipoly_from_json(obj: Mapping) -> UniPoly:
    return UniPoly(tuple(fraction_from_str(s) for s in obj["coeffs"]))


def bipoly_to_json(f: BiPoly) -> list:
    return [{"du": du, "dv": dv, "c": fraction_to_str(c)} for (du, dv), c in f.terms]


def bipoly_from_json(items: Iterable[Mapping]) -> BiPoly:
    return BiPoly({(t["du"], t["dv"]): fraction_from_str(t["c"]) for t in items})


def field_to_json(X: VectorField2) -> dict:
    return {"p": bipoly_to_json(X.p_comp), "q": bipoly_to_json(X.q_comp)}


def field_from_json(obj: Mapping) -> VectorField2:
    return VectorField2(bipoly_from_json(obj["p"]), bipoly_from_json(obj["q"]))
