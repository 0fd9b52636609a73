"""Exact arithmetic in a truncated universal Novikov field.

Scalars are finite sums ``sum_i c_i q^{d_i}`` with exact rational exponents
``d_i`` and coefficients ``c_i`` in a cyclotomic number field.  An optional
rational *cutoff* turns the ring into the quotient by exponents ``>= cutoff``:
terms at or above the cutoff are discarded and the element is flagged as
truncated.  Everything is immutable and exact; no floats appear anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable


# ---------------------------------------------------------------------------
# rational helpers

def parse_rational(text: str) -> Fraction:
    """Parse an exact rational of the form ``p``, ``p/q`` or ``-p/q``."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# cyclotomic polynomials and power-basis reduction tables

def euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divide_exact(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    # Exact division of polynomials with known-zero remainder; coefficient
    # lists are low-to-high and the divisor is monic.
    num = list(num)
    dn = len(den) - 1
    out = [Fraction(0)] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            out[i - dn] = c
            for j, d in enumerate(den):
                num[i - dn + j] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


_CYCLOTOMIC_CACHE: dict[int, tuple[Fraction, ...]] = {}


def cyclotomic_polynomial(order: int) -> tuple[Fraction, ...]:
    """Coefficients (low to high) of the ``order``-th cyclotomic polynomial."""
    if order < 1:
        raise ValueError("order must be a positive integer")
    cached = _CYCLOTOMIC_CACHE.get(order)
    if cached is not None:
        return cached
    # x^order - 1 divided by the cyclotomic polynomials of proper divisors.
    poly = [Fraction(-1)] + [Fraction(0)] * (order - 1) + [Fraction(1)]
    for d in range(1, order):
        if order % d == 0:
            poly = _poly_divide_exact(poly, list(cyclotomic_polynomial(d)))
    result = tuple(poly)
    _CYCLOTOMIC_CACHE[order] = result
    return result


_POWER_CACHE: dict[int, list[tuple[Fraction, ...]]] = {}


def _power_table(order: int, upto: int) -> list[tuple[Fraction, ...]]:
    # x^j mod Phi_order for 0 <= j <= upto, as vectors in the power basis.
    phi = euler_phi(order)
    table = _POWER_CACHE.setdefault(order, [])
    if not table:
        for j in range(phi):
            vec = [Fraction(0)] * phi
            vec[j] = Fraction(1)
            table.append(tuple(vec))
    poly = cyclotomic_polynomial(order)
    while len(table) <= upto:
        # x^(j) = x * x^(j-1); reduce the overflow coordinate via Phi.
        prev = table[-1]
        shifted = [Fraction(0)] + list(prev)
        top = shifted.pop()
        if top:
            for i in range(phi):
                shifted[i] -= top * poly[i]
        table.append(tuple(shifted))
    return table


class CyclotomicNumber:
    """Element of the cyclotomic field of a fixed order, in the power basis.

    ``coeffs`` has length ``phi(order)`` and stores the coordinates of the
    element with respect to ``1, z, z^2, ...`` where ``z`` is a fixed
    primitive ``order``-th root of unity.  Elements of different orders are
    coerced into the field of the lcm order before combining.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[Fraction]):
        self.order = int(order)
        vec = tuple(Fraction(c) for c in coeffs)
        phi = euler_phi(self.order)
        if len(vec) != phi:
            raise ValueError(f"expected {phi} coordinates for order {order}, got {len(vec)}")
        self.coeffs = vec

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_rational(cls, value, order: int = 1) -> "CyclotomicNumber":
        phi = euler_phi(order)
        vec = [Fraction(0)] * phi
        vec[0] = Fraction(value)
        return cls(order, vec)

    @classmethod
    def zero(cls, order: int = 1) -> "CyclotomicNumber":
        return cls.from_rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "CyclotomicNumber":
        return cls.from_rational(1, order)

    @classmethod
    def root_of_unity(cls, order: int, power: int = 1) -> "CyclotomicNumber":
        """The root ``z^power`` in the field of the given order."""
        power %= order
        table = _power_table(order, power)
        return cls(order, table[power])

    # -- structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    def to_order(self, order: int) -> "CyclotomicNumber":
        """Embed into the field of a multiple order."""
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError(f"cannot embed order {self.order} into order {order}")
        step = order // self.order
        phi = euler_phi(order)
        table = _power_table(order, step * max(len(self.coeffs) - 1, 0))
        acc = [Fraction(0)] * phi
        for k, c in enumerate(self.coeffs):
            if c:
                vec = table[k * step]
                for i in range(phi):
                    acc[i] += c * vec[i]
        return CyclotomicNumber(order, acc)

    def _unify(self, other: "CyclotomicNumber") -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if self.order == other.order:
            return self, other
        m = math.lcm(self.order, other.order)
        return self.to_order(m), other.to_order(m)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = _coerce_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        return CyclotomicNumber(a.order, (x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, (-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        phi = len(a.coeffs)
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] += x * y
        table = _power_table(a.order, 2 * phi - 2)
        acc = [Fraction(0)] * phi
        for j, c in enumerate(conv):
            if c:
                vec = table[j]
                for i in range(phi):
                    acc[i] += c * vec[i]
        return CyclotomicNumber(a.order, acc)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        if self.is_rational():
            return CyclotomicNumber.from_rational(1 / self.coeffs[0], self.order)
        # Extended Euclid in Q[x] against the (irreducible) cyclotomic polynomial.
        phi_poly = list(cyclotomic_polynomial(self.order))
        f = list(self.coeffs)
        while f and not f[-1]:
            f.pop()
        r0, r1 = phi_poly, f
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            if not r1:
                raise ZeroDivisionError("element not invertible")
        lead = r1[0]
        inv = [c / lead for c in s1]
        phi = euler_phi(self.order)
        inv += [Fraction(0)] * (phi - len(inv))
        return CyclotomicNumber(self.order, inv[:phi])

    def __truediv__(self, other):
        other = _coerce_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, exp: int):
        if exp < 0:
            return self.inverse() ** (-exp)
        result = CyclotomicNumber.one(self.order)
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    def __eq__(self, other):
        other = _coerce_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # Hash in a canonical (minimal nonzero support) form is overkill here;
        # elements are compared through __eq__ in tests and dict keys are names.
        return hash((self.order, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(format_rational(c))
            else:
                mono = f"z{self.order}" if k == 1 else f"z{self.order}^{k}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _coerce_cyclotomic(value):
    if isinstance(value, CyclotomicNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return CyclotomicNumber.from_rational(value)
    return NotImplemented


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    dlead = den[-1]
    for i in range(len(num) - 1, len(den) - 2, -1):
        c = num[i] / dlead
        if c:
            q[i - (len(den) - 1)] = c
            for j, d in enumerate(den):
                num[i - (len(den) - 1) + j] -= c * d
    while num and not num[-1]:
        num.pop()
    return q, num


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [Fraction(0)] * max(0, len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    return out


# ---------------------------------------------------------------------------
# Novikov elements

DEFAULT_CUTOFF = Fraction(3)


class NovikovElement:
    """Finite q-series with rational exponents and cyclotomic coefficients.

    ``terms`` is a sorted tuple of ``(exponent, coefficient)`` pairs with
    strictly increasing exponents and no stored zero coefficients.  ``cutoff``
    is an exact rational or ``None`` for "+infinity"; terms with exponent at
    or above a finite cutoff are never stored.
    """

    __slots__ = ("terms", "cutoff")

    def __init__(self, terms=(), cutoff: Fraction | None = None):
        cleaned: dict[Fraction, CyclotomicNumber] = {}
        for exp, coeff in terms:
            exp = Fraction(exp)
            if not isinstance(coeff, CyclotomicNumber):
                coeff = CyclotomicNumber.from_rational(coeff)
            if cutoff is not None and exp >= cutoff:
                continue
            if exp in cleaned:
                cleaned[exp] = cleaned[exp] + coeff
            else:
                cleaned[exp] = coeff
        self.terms = tuple(sorted(
            ((e, c) for e, c in cleaned.items() if not c.is_zero()),
            key=lambda t: t[0],
        ))
        self.cutoff = Fraction(cutoff) if cutoff is not None else None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, cutoff=None) -> "NovikovElement":
        return cls((), cutoff)

    @classmethod
    def one(cls, cutoff=None) -> "NovikovElement":
        return cls(((Fraction(0), CyclotomicNumber.one()),), cutoff)

    @classmethod
    def monomial(cls, exponent, coefficient=1, cutoff=None) -> "NovikovElement":
        return cls(((Fraction(exponent), coefficient),), cutoff)

    @classmethod
    def q_power(cls, exponent, cutoff=None) -> "NovikovElement":
        return cls.monomial(exponent, 1, cutoff)

    @classmethod
    def from_rational(cls, value, cutoff=None) -> "NovikovElement":
        return cls.monomial(0, Fraction(value), cutoff)

    @classmethod
    def from_cyclotomic(cls, value: CyclotomicNumber, cutoff=None) -> "NovikovElement":
        return cls(((Fraction(0), value),), cutoff)

    # -- structure ----------------------------------------------------------
    @property
    def truncated(self) -> bool:
        return self.cutoff is not None

    def is_zero(self) -> bool:
        return not self.terms

    def val_q(self) -> Fraction | None:
        """Minimal stored exponent; ``None`` encodes +infinity (zero element)."""
        if not self.terms:
            return None
        return self.terms[0][0]

    def leading(self) -> tuple[Fraction, CyclotomicNumber]:
        if not self.terms:
            raise ValueError("zero element has no leading term")
        return self.terms[0]

    def coefficient(self, exponent) -> CyclotomicNumber:
        exponent = Fraction(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        return CyclotomicNumber.zero()

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def order(self) -> int:
        m = 1
        for _, c in self.terms:
            m = math.lcm(m, c.order)
        return m

    def truncate(self, cutoff) -> "NovikovElement":
        cutoff = Fraction(cutoff)
        if self.cutoff is not None:
            cutoff = min(cutoff, self.cutoff)
        return NovikovElement(self.terms, cutoff)

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _merge_cutoff(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other):
        other = _coerce_novikov(other)
        if other is NotImplemented:
            return NotImplemented
        return NovikovElement(self.terms + other.terms,
                              self._merge_cutoff(self.cutoff, other.cutoff))

    __radd__ = __add__

    def __neg__(self):
        return NovikovElement(tuple((e, -c) for e, c in self.terms), self.cutoff)

    def __sub__(self, other):
        other = _coerce_novikov(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_novikov(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, CyclotomicNumber):
            return NovikovElement(tuple((e, c * other) for e, c in self.terms), self.cutoff)
        other = _coerce_novikov(other)
        if other is NotImplemented:
            return NotImplemented
        cutoff = self._merge_cutoff(self.cutoff, other.cutoff)
        acc: dict[Fraction, CyclotomicNumber] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if cutoff is not None and e >= cutoff:
                    continue
                prod = c1 * c2
                if e in acc:
                    acc[e] = acc[e] + prod
                else:
                    acc[e] = prod
        return NovikovElement(tuple(acc.items()), cutoff)

    __rmul__ = __mul__

    def __pow__(self, exp: int):
        if exp < 0:
            raise ValueError("negative powers require an explicit cutoff; use invert")
        result = NovikovElement.one(self.cutoff)
        for _ in range(exp):
            result = result * self
        return result

    def invert(self, cutoff=None) -> "NovikovElement":
        """Inverse, exact for monomials and geometric-series-truncated otherwise.

        The returned ``y`` satisfies ``val_q(y) = -val_q(x)`` and
        ``x * y = 1`` up to terms of exponent ``>= cutoff``.
        """
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        lead_exp, lead_coeff = self.leading()
        inv_lead = NovikovElement.monomial(-lead_exp, lead_coeff.inverse(), self.cutoff)
        if self.is_monomial():
            return inv_lead
        if cutoff is None:
            cutoff = self.cutoff if self.cutoff is not None else DEFAULT_CUTOFF
        cutoff = Fraction(cutoff)
        # The inverse must be accurate enough that the product error stays at
        # or above the cutoff even after multiplying by the leading q-power.
        target = cutoff - min(lead_exp, 0)
        # x = lead * (1 + r) with val(r) > 0; invert the unit factor as a
        # geometric series, truncating once powers of r clear the target.
        rest = (self * inv_lead) - NovikovElement.one()
        rest_val = rest.val_q()
        if rest_val is None:
            return inv_lead
        if rest_val <= 0:
            raise ArithmeticError("leading term did not dominate; cannot invert")
        work = target + max(lead_exp, -lead_exp) + rest_val
        series = NovikovElement.one(work)
        power = NovikovElement.one(work)
        k = 1
        while True:
            power = (power * rest).truncate(work)
            if power.is_zero() or k * rest_val >= work:
                break
            series = series + (power if k % 2 == 0 else -power)
            k += 1
        return (series * inv_lead).truncate(target)

    def __eq__(self, other):
        other = _coerce_novikov(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.terms)

    # -- conversions ---------------------------------------------------------
    def below(self, bound) -> "NovikovElement":
        """The part of the element with exponent strictly below ``bound``."""
        bound = Fraction(bound)
        return NovikovElement(tuple((e, c) for e, c in self.terms if e < bound), self.cutoff)

    def at_or_above(self, bound) -> "NovikovElement":
        bound = Fraction(bound)
        return NovikovElement(tuple((e, c) for e, c in self.terms if e >= bound), self.cutoff)

    def specialize_q_to_one(self) -> CyclotomicNumber:
        """Sum of coefficients: the specialization q -> 1."""
        acc = CyclotomicNumber.zero()
        for _, c in self.terms:
            acc = acc + c
        return acc

    def to_json_dict(self, order: int | None = None) -> dict:
        """JSON form; ``order`` forces a larger cyclotomic order for the
        coefficient coordinates (must be a multiple of the natural one)."""
        order = self.order() if order is None else math.lcm(self.order(), order)
        return {
            "order": order,
            "terms": [
                {
                    "exp": format_rational(e),
                    "coeff": [format_rational(x) for x in c.to_order(order).coeffs],
                }
                for e, c in self.terms
            ],
            "cutoff": format_rational(self.cutoff) if self.cutoff is not None else "inf",
            "truncated": self.truncated,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "NovikovElement":
        order = int(data["order"])
        cutoff = data.get("cutoff", "inf")
        cutoff_val = None if cutoff in (None, "inf") else parse_rational(cutoff)
        terms = []
        for t in data["terms"]:
            coeff = CyclotomicNumber(order, [parse_rational(x) for x in t["coeff"]])
            terms.append((parse_rational(t["exp"]), coeff))
        return cls(terms, cutoff_val)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            cs = repr(c)
            if " " in cs:
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
            else:
                qs = f"q^({format_rational(e)})" if e.denominator != 1 or e < 0 else (
                    "q" if e == 1 else f"q^{e}")
                parts.append(qs if cs == "1" else f"{cs}*{qs}")
        text = " + ".join(parts)
        if self.truncated:
            text += f" [cutoff {format_rational(self.cutoff)}]"
        return text


def _coerce_novikov(value):
    if isinstance(value, NovikovElement):
        return value
    if isinstance(value, (int, Fraction)):
        return NovikovElement.from_rational(value)
    if isinstance(value, CyclotomicNumber):
        return NovikovElement.from_cyclotomic(value)
    return NotImplemented


def val_q(x: NovikovElement) -> Fraction | None:
    """Valuation by powers of q; ``None`` means +infinity (the zero element)."""
    return x.val_q()
