"""Sparse integer Laurent polynomials in one variable ``v``."""

from __future__ import annotations

from typing import Iterable, Mapping

__all__ = ["LaurentPoly", "V", "ONE", "ZERO"]


class LaurentPoly:
    """Immutable map exponent -> nonzero integer coefficient.

    >>> (V - V**-1) * (V + V**-1)
    v^2 - v^-2
    >>> (V + 2 * V**-3).bar()
    2v^3 + v^-1
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for e, a in items:
            a = int(a)
            if a:
                e = int(e)
                c[e] = c.get(e, 0) + a
                if not c[e]:
                    del c[e]
        self._c = c
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def const(cls, a: int) -> "LaurentPoly":
        return cls({0: a})

    @classmethod
    def _wrap(cls, c: dict[int, int]) -> "LaurentPoly":
        p = object.__new__(cls)
        p._c = c
        p._hash = None
        return p

    # accessors

    def __getitem__(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def items(self):
        return sorted(self._c.items(), reverse=True)

    def exponents(self) -> list[int]:
        return sorted(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    @property
    def degree(self) -> int | None:
        return max(self._c) if self._c else None

    @property
    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def evaluate(self, v):
        return sum(a * v ** e for e, a in self._c.items())

    # ring operations

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            b = c.get(e, 0) + a
            if b:
                c[e] = b
            else:
                c.pop(e, None)
        return LaurentPoly._wrap(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap({e: -a for e, a in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._wrap({e: a * other for e, a in self._c.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + a1 * a2
        return LaurentPoly._wrap({e: a for e, a in c.items() if a})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if len(self._c) == 1:
            (e, a), = self._c.items()
            if n < 0 and a not in (1, -1):
                raise ValueError("only units can be inverted")
            return LaurentPoly._wrap({e * n: a ** abs(n)})
        if n < 0:
            raise ValueError("only monomials can be inverted")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v**k``."""
        return LaurentPoly._wrap({e + k: a for e, a in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """The ring involution ``v -> v^-1``."""
        return LaurentPoly._wrap({-e: a for e, a in self._c.items()})

    negate_exponents = bar

    # comparisons

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return self.format()

    def format(self, var: str = "v") -> str:
        if not self._c:
            return "0"
        parts = []
        for e, a in self.items():
            mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
            if not mono:
                body = str(abs(a))
            elif abs(a) == 1:
                body = mono
            else:
                body = f"{abs(a)}{mono}"
            sign = "-" if a < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
V = LaurentPoly.monomial(1)
