"""Rationally additive semirings, exposed through their computable kernel.

Every instance provides zero, one, finite sum, product and star (the
geometric sum), plus literal parsing and rendering.  Arithmetic is exact:
integers, :class:`fractions.Fraction` and two infinity sentinels.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Optional

from . import regex


class Infinity:
    """Signed infinity sentinel; exactly two instances exist."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self) -> str:
        return "INF" if self.sign > 0 else "NEG_INF"

    def __reduce__(self):
        return (_infinity, (self.sign,))


def _infinity(sign):
    return INF if sign > 0 else NEG_INF


INF = Infinity(1)
NEG_INF = Infinity(-1)


class LiteralError(ValueError):
    """A semiring or monoid literal does not parse."""


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise LiteralError(f"bad number literal {text!r}") from exc


class Semiring:
    """Interface shared by all instances.

    Subclasses set ``zero``, ``one`` and ``spec`` and implement the
    operations below.  ``star`` must satisfy ``star(x) == one + x*star(x)``.
    """

    zero: Any
    one: Any
    spec: str

    def add(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def star(self, x):
        raise NotImplementedError

    def eq(self, x, y) -> bool:
        return x == y

    def is_zero(self, x) -> bool:
        return self.eq(x, self.zero)

    def parse_literal(self, text: str):
        raise NotImplementedError

    def render(self, x) -> str:
        raise NotImplementedError

    def right_divide(self, a, b) -> Optional[Any]:
        """Some r with mul(b, r) == a, or None when none is found.

        Only used by the inductive-semantics oracle to spot geometric tails.
        """
        return None

    def sum(self, values):
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total

    def __repr__(self) -> str:
        return f"<semiring {self.spec}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Semiring) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)


class BooleanSemiring(Semiring):
    zero = False
    one = True
    spec = "boolean"

    def add(self, x, y):
        return x or y

    def mul(self, x, y):
        return x and y

    def star(self, x):
        return True

    def parse_literal(self, text):
        t = text.strip()
        if t == "true":
            return True
        if t == "false":
            return False
        raise LiteralError(f"bad boolean literal {text!r}")

    def render(self, x):
        return "true" if x else "false"

    def right_divide(self, a, b):
        if b:
            return a
        return None if a else False


class CountingSemiring(Semiring):
    """N ∪ {∞} with ordinary sum and product."""

    zero = 0
    one = 1
    spec = "counting"

    def add(self, x, y):
        if x is INF or y is INF:
            return INF
        return x + y

    def mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        if x is INF or y is INF:
            return INF
        return x * y

    def star(self, x):
        return 1 if x == 0 else INF

    def parse_literal(self, text):
        t = text.strip()
        if t == "inf":
            return INF
        if t.isdigit():
            return int(t)
        raise LiteralError(f"bad counting literal {text!r}")

    def render(self, x):
        return "inf" if x is INF else str(x)

    def right_divide(self, a, b):
        if b == 0:
            return None
        if a is INF:
            return INF
        if b is INF:
            return 0 if a == 0 else None
        q, r = divmod(a, b)
        return q if r == 0 else None


class TropicalSupSemiring(Semiring):
    """Q ∪ {−∞, +∞} with sup as sum and + as product (the arctic semiring)."""

    zero = NEG_INF
    one = Fraction(0)
    spec = "tropical"

    @staticmethod
    def _key(x):
        if isinstance(x, Infinity):
            return (x.sign, 0)
        return (0, x)

    def add(self, x, y):
        return x if self._key(x) >= self._key(y) else y

    def mul(self, x, y):
        if x is NEG_INF or y is NEG_INF:
            return NEG_INF
        if x is INF or y is INF:
            return INF
        return x + y

    def star(self, x):
        if x is NEG_INF or (not isinstance(x, Infinity) and x <= 0):
            return self.one
        return INF

    def parse_literal(self, text):
        t = text.strip()
        if t == "-inf":
            return NEG_INF
        if t in ("+inf", "inf"):
            return INF
        return _fraction(t)

    def render(self, x):
        if x is NEG_INF:
            return "-inf"
        if x is INF:
            return "+inf"
        return str(x)

    def right_divide(self, a, b):
        if b is NEG_INF:
            return None
        if a is NEG_INF:
            return NEG_INF
        if a is INF:
            return INF if b is not INF else self.one
        if b is INF:
            return None
        return a - b


class NonNegRationalSemiring(Semiring):
    """Q₊ ∪ {∞} with ordinary sum and product."""

    zero = Fraction(0)
    one = Fraction(1)
    spec = "qplus"

    def add(self, x, y):
        if x is INF or y is INF:
            return INF
        return x + y

    def mul(self, x, y):
        if x == 0 or y == 0:
            return self.zero
        if x is INF or y is INF:
            return INF
        return x * y

    def star(self, x):
        if x is INF or x >= 1:
            return INF
        return 1 / (1 - x)

    def parse_literal(self, text):
        t = text.strip()
        if t == "inf":
            return INF
        num, _, den = t.partition("/")
        if not num.isdigit() or (den and not den.isdigit()):
            raise LiteralError(f"bad nonneg-rational literal {text!r}")
        return _fraction(t)

    def render(self, x):
        return "inf" if x is INF else str(x)

    def right_divide(self, a, b):
        if b == 0:
            return None
        if a is INF:
            return INF
        if b is INF:
            return self.zero if a == 0 else None
        return a / b


class LanguageSemiring(Semiring):
    """Rational languages over a declared alphabet; union, concatenation, star."""

    zero = regex.EMPTY
    one = regex.EPS

    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)
        if not self.alphabet:
            raise ValueError("language semiring needs a nonempty alphabet")
        self.spec = "lang:" + ",".join(self.alphabet)

    def add(self, x, y):
        return regex.union(x, y)

    def mul(self, x, y):
        return regex.concat(x, y)

    def star(self, x):
        return regex.star(x)

    def eq(self, x, y):
        if x == y:
            return True
        return regex.language_eq(x, y, self.alphabet)

    def parse_literal(self, text):
        t = text.strip()
        if not (t.startswith("{") and t.endswith("}")):
            raise LiteralError(f"language literal must be braced: {text!r}")
        try:
            return regex.parse(t[1:-1], self.alphabet)
        except regex.RegexSyntaxError as exc:
            raise LiteralError(str(exc)) from exc

    def render(self, x):
        return "{" + regex.render(x) + "}"


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside any (), [], {}, <> nesting."""
    parts, depth, start = [], 0, 0
    for i, c in enumerate(text):
        if c in "([{<":
            depth += 1
        elif c in ")]}>":
            depth -= 1
        elif c == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


class ProductSemiring(Semiring):
    """Component-wise pairing of two instances."""

    def __init__(self, left: Semiring, right: Semiring):
        self.left = left
        self.right = right
        self.zero = (left.zero, right.zero)
        self.one = (left.one, right.one)
        self.spec = f"prod:({left.spec}),({right.spec})"

    def add(self, x, y):
        return (self.left.add(x[0], y[0]), self.right.add(x[1], y[1]))

    def mul(self, x, y):
        return (self.left.mul(x[0], y[0]), self.right.mul(x[1], y[1]))

    def star(self, x):
        return (self.left.star(x[0]), self.right.star(x[1]))

    def eq(self, x, y):
        return self.left.eq(x[0], y[0]) and self.right.eq(x[1], y[1])

    def parse_literal(self, text):
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")):
            raise LiteralError(f"product literal must be parenthesized: {text!r}")
        parts = split_top_level(t[1:-1])
        if len(parts) != 2:
            raise LiteralError(f"product literal needs two components: {text!r}")
        return (self.left.parse_literal(parts[0]), self.right.parse_literal(parts[1]))

    def render(self, x):
        return f"({self.left.render(x[0])},{self.right.render(x[1])})"

    def right_divide(self, a, b):
        r0 = self.left.right_divide(a[0], b[0])
        r1 = self.right.right_divide(a[1], b[1])
        if r0 is None or r1 is None:
            return None
        return (r0, r1)


BOOLEAN = BooleanSemiring()
COUNTING = CountingSemiring()
TROPICAL = TropicalSupSemiring()
QPLUS = NonNegRationalSemiring()


def _strip_parens(text: str) -> str:
    text = text.strip()
    while text.startswith("("):
        depth = 0
        for i, c in enumerate(text):
            depth += (c == "(") - (c == ")")
            if depth == 0:
                break
        if i != len(text) - 1:
            break
        text = text[1:-1].strip()
    return text


def semiring_from_spec(spec: str) -> Semiring:
    """Build an instance from ``boolean|counting|tropical|qplus|lang:<a,b>|prod:<s1>,<s2>``.

    Product components may be parenthesized; otherwise every top-level comma
    is tried as the split point.
    """
    spec = _strip_parens(spec)
    simple = {"boolean": BOOLEAN, "counting": COUNTING, "tropical": TROPICAL, "qplus": QPLUS}
    if spec in simple:
        return simple[spec]
    if spec.startswith("lang:"):
        letters = [a.strip() for a in spec[5:].split(",") if a.strip()]
        return LanguageSemiring(letters)
    if spec.startswith("prod:"):
        body = spec[5:]
        pieces = split_top_level(body)
        for cut in range(1, len(pieces)):
            left, right = ",".join(pieces[:cut]), ",".join(pieces[cut:])
            try:
                return ProductSemiring(semiring_from_spec(left), semiring_from_spec(right))
            except ValueError:
                continue
        raise ValueError(f"cannot split product semiring spec {spec!r}")
    raise ValueError(f"unknown semiring spec {spec!r}")
