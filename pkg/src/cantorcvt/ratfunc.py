"""Exact rational-function arithmetic in the contraction ratio r.

Two layers of exactness are used throughout the package:

* concrete ratios are plain ``fractions.Fraction`` values;
* closed forms in the ratio are :class:`RationalFunction` values, ratios of
  dense integer-coefficient polynomials in a single variable r.

Polynomials are stored as tuples of ints in ascending degree with no trailing
zeros; the zero polynomial is the empty tuple.  A rational function is kept in
a canonical form: numerator and denominator are coprime as polynomials, their
joint integer content is 1, and the leading coefficient of the denominator is
positive.  Canonical form makes equality a tuple comparison and lets closed
forms be compared coefficient-by-coefficient against published formulas.

Root isolation is plain bisection on exact rational midpoints: slow by
computer-algebra standards but unconditionally correct, which is what the
certified thresholds need.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import DivisionByZero, NoSignChange, PoleAtPoint, PoleInInterval

Coeffs = tuple  # ascending-degree tuple of ints (or Fractions mid-computation)


def _strip(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def poly_add(a: Coeffs, b: Coeffs) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def poly_neg(a: Coeffs) -> Coeffs:
    return tuple(-c for c in a)


def poly_sub(a: Coeffs, b: Coeffs) -> Coeffs:
    return poly_add(a, poly_neg(b))


def poly_mul(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _strip(out)


def poly_scale(a: Coeffs, k) -> Coeffs:
    if k == 0:
        return ()
    return tuple(c * k for c in a)


def poly_eval(a: Coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_divmod(a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs]:
    """Quotient and remainder over the rationals (coefficients may be Fractions)."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = [Fraction(c) for c in a]
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    for k in range(len(a) - len(b), -1, -1):
        q = rem[k + len(b) - 1] / lead
        quot[k] = q
        if q:
            for j, c in enumerate(b):
                rem[k + j] -= q * c
    return _strip(quot), _strip(rem)


def poly_content(a: Coeffs) -> int:
    g = 0
    for c in a:
        g = gcd(g, abs(c))
    return g


def poly_primitive(a: Coeffs) -> Coeffs:
    """Primitive part with positive leading coefficient."""
    if not a:
        return ()
    g = poly_content(a)
    if a[-1] < 0:
        g = -g
    return tuple(c // g for c in a)


def poly_gcd(a: Coeffs, b: Coeffs) -> Coeffs:
    """Primitive gcd of two integer polynomials (monic-up-to-content, lead > 0)."""
    if not a:
        return poly_primitive(b)
    if not b:
        return poly_primitive(a)
    fa = tuple(Fraction(c) for c in a)
    fb = tuple(Fraction(c) for c in b)
    while fb:
        fa, fb = fb, poly_divmod(fa, fb)[1]
    # clear rational coefficients, then reduce to the primitive part
    denom_lcm = 1
    for c in fa:
        denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
    return poly_primitive(tuple(int(c * denom_lcm) for c in fa))


def poly_exact_div(a: Coeffs, b: Coeffs) -> Coeffs:
    q, r = poly_divmod(a, b)
    if r:
        raise ValueError("polynomial division is not exact")
    return tuple(int(c) for c in q)


def _clear_fractions(a) -> tuple[Coeffs, int]:
    """Scale a Fraction-coefficient polynomial to integers; return (poly, multiplier)."""
    m = 1
    for c in a:
        c = Fraction(c)
        m = m * c.denominator // gcd(m, c.denominator)
    return tuple(int(Fraction(c) * m) for c in a), m


class RationalFunction:
    """Ratio of integer-coefficient polynomials in the ratio parameter r.

    Immutable and always canonical.  Arithmetic accepts ints, Fractions, and
    other RationalFunctions on either side, so generic formulas can be written
    once and run with either a concrete ratio or the formal parameter.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        if isinstance(num, (int, Fraction)):
            num = (num,)
        if isinstance(den, (int, Fraction)):
            den = (den,)
        num, mn = _clear_fractions(_strip(num))
        den, md = _clear_fractions(_strip(den))
        # the multipliers rescale the other side to keep the value unchanged
        num = poly_scale(num, md)
        den = poly_scale(den, mn)
        if not den:
            raise DivisionByZero("denominator polynomial is identically zero")
        if not num:
            object.__setattr__(self, "num", ())
            object.__setattr__(self, "den", (1,))
            return
        g = poly_gcd(num, den)
        if len(g) > 1 or g[0] != 1:
            num = poly_exact_div(num, g)
            den = poly_exact_div(den, g)
        content = gcd(poly_content(num), poly_content(den))
        if den[-1] < 0:
            content = -content
        num = tuple(c // content for c in num)
        den = tuple(c // content for c in den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def parameter(cls) -> "RationalFunction":
        """The formal ratio parameter r itself."""
        return cls((0, 1))

    @classmethod
    def constant(cls, value) -> "RationalFunction":
        return cls(Fraction(value))

    # -- basic queries ------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def as_fraction(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("not a constant rational function")
        return Fraction(self.num[0] if self.num else 0, self.den[0])

    def degrees(self) -> tuple[int, int]:
        return (len(self.num) - 1, len(self.den) - 1)

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction(Fraction(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(
            poly_add(poly_mul(self.num, o.den), poly_mul(o.num, self.den)),
            poly_mul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(poly_neg(self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(poly_mul(self.num, o.num), poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise DivisionByZero("division by identically-zero rational function")
        return RationalFunction(poly_mul(self.num, o.den), poly_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = RationalFunction(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- evaluation and rendering ---------------------------------------

    def __call__(self, r) -> Fraction:
        return self.evaluate(r)

    def evaluate(self, r) -> Fraction:
        r = Fraction(r)
        d = poly_eval(self.den, r)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at r = {r}")
        return poly_eval(self.num, r) / d

    def to_dict(self) -> dict:
        return {
            "num": [str(c) for c in (self.num or (0,))],
            "den": [str(c) for c in self.den],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RationalFunction":
        return cls(
            tuple(int(c) for c in data["num"]),
            tuple(int(c) for c in data["den"]),
        )

    @staticmethod
    def _poly_str(coeffs: Coeffs) -> str:
        if not coeffs:
            return "0"
        terms = []
        for k in range(len(coeffs) - 1, -1, -1):
            c = coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "r" if k == 1 else f"r^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            terms.append((sign, body))
        head_sign, head = terms[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        num = self._poly_str(self.num)
        if self.den == (1,):
            return num
        return f"({num}) / ({self._poly_str(self.den)})"

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


def isolate_root(
    f: RationalFunction,
    lo: Fraction,
    hi: Fraction,
    tol: Fraction = Fraction(1, 10**12),
) -> Fraction:
    """Bisect f to a root inside [lo, hi] using exact rational midpoints.

    Requires a strict sign change of f across the bracket and a pole-free
    denominator on it.  The result is within tol of the true root; if a
    midpoint hits the root exactly it is returned as-is.
    """
    lo, hi, tol = Fraction(lo), Fraction(hi), Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if lo >= hi:
        raise ValueError("empty bracket")
    dlo = poly_eval(f.den, lo)
    dhi = poly_eval(f.den, hi)
    if dlo == 0 or dhi == 0 or (dlo < 0) != (dhi < 0):
        raise PoleInInterval(f"denominator changes sign or vanishes on [{lo}, {hi}]")
    flo = f.evaluate(lo)
    fhi = f.evaluate(hi)
    if flo == 0 or fhi == 0 or (flo < 0) == (fhi < 0):
        raise NoSignChange(f"no strict sign change on [{lo}, {hi}]")
    neg_left = flo < 0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if poly_eval(f.den, mid) == 0:
            raise PoleInInterval(f"denominator vanishes at bisection point {mid}")
        fm = f.evaluate(mid)
        if fm == 0:
            return mid
        if (fm < 0) == neg_left:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def scan_sign_changes(
    f: RationalFunction,
    lo: Fraction,
    hi: Fraction,
    step: Fraction,
) -> list[tuple[Fraction, Fraction]]:
    """All step-width subintervals of [lo, hi] across which f strictly changes sign."""
    lo, hi, step = Fraction(lo), Fraction(hi), Fraction(step)
    brackets = []
    x = lo
    fx = f.evaluate(x)
    while x < hi:
        y = min(x + step, hi)
        fy = f.evaluate(y)
        if fx != 0 and fy != 0 and (fx < 0) != (fy < 0):
            brackets.append((x, y))
        x, fx = y, fy
    return brackets
