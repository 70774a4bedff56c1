"""Laurent polynomials in q and in (t, q) with integer coefficients.

These are small immutable dict-backed polynomials; enough arithmetic for
bracket evaluation, graded Euler characteristics and Poincare polynomials.
"""

from __future__ import annotations


class LaurentQ:
    """Laurent polynomial in q with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in dict(coeffs).items():
                if v:
                    c[int(e)] = int(v)
        self.coeffs = c

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, LaurentQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        c = dict(self.coeffs)
        for e, v in other.coeffs.items():
            c[e] = c.get(e, 0) + v
        return LaurentQ(c)

    def __sub__(self, other):
        c = dict(self.coeffs)
        for e, v in other.coeffs.items():
            c[e] = c.get(e, 0) - v
        return LaurentQ(c)

    def __neg__(self):
        return LaurentQ({e: -v for e, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentQ({e: v * other for e, v in self.coeffs.items()})
        c = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentQ(c)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by q^k."""
        return LaurentQ({e + k: v for e, v in self.coeffs.items()})

    def mirror(self):
        """Substitute q -> q^-1."""
        return LaurentQ({-e: v for e, v in self.coeffs.items()})

    def is_palindromic(self):
        return self == self.mirror()

    def __repr__(self):
        return f"LaurentQ({self.coeffs!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(_qterm(e, v) for e, v in sorted(self.coeffs.items()))


def _qterm(e, v):
    if e == 0:
        return str(v)
    q = "q" if e == 1 else f"q^{e}"
    if v == 1:
        return q
    if v == -1:
        return f"-{q}"
    return f"{v}{q}"


# The quantum integers [2] and [3] that drive the bracket relations.
QUANTUM2 = LaurentQ({-1: 1, 1: 1})
QUANTUM3 = LaurentQ({-2: 1, 0: 1, 2: 1})


class BiPoly:
    """Laurent polynomial in t and q; keys are (t_exp, q_exp) pairs."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for key, v in dict(coeffs).items():
                if v:
                    t, q = key
                    c[(int(t), int(q))] = int(v)
        self.coeffs = c

    @classmethod
    def monomial(cls, t, q, coeff=1):
        return cls({(t, q): coeff})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return BiPoly(c)

    def __sub__(self, other):
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) - v
        return BiPoly(c)

    def __neg__(self):
        return BiPoly({k: -v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return BiPoly({k: v * other for k, v in self.coeffs.items()})
        c = {}
        for (t1, q1), v1 in self.coeffs.items():
            for (t2, q2), v2 in other.coeffs.items():
                k = (t1 + t2, q1 + q2)
                c[k] = c.get(k, 0) + v1 * v2
        return BiPoly(c)

    __rmul__ = __mul__

    def dualize(self):
        """Substitute (t, q) -> (-t, q^-1)."""
        return BiPoly({(-t, -q): v for (t, q), v in self.coeffs.items()})

    def at_t(self, t_value):
        """Evaluate t at an integer value, returning a LaurentQ."""
        if any(t < 0 for t, _ in self.coeffs) and abs(t_value) != 1:
            raise ValueError("negative t exponents need t = +-1")
        c = {}
        for (t, q), v in self.coeffs.items():
            factor = t_value ** t if t >= 0 else t_value ** (-t)
            c[q] = c.get(q, 0) + v * factor
        return LaurentQ(c)

    def total(self):
        """Sum of all coefficients (rank count for Poincare polynomials)."""
        return sum(self.coeffs.values())

    def t_support(self):
        return sorted({t for t, _ in self.coeffs})

    def q_slice(self, t):
        return LaurentQ({q: v for (tt, q), v in self.coeffs.items() if tt == t})

    def __repr__(self):
        return f"BiPoly({self.coeffs!r})"

    def __str__(self):
        return format_tq(self)


def format_tq(p: BiPoly) -> str:
    """Render in the report style: ``(q^-14 + q^-12) + t^2(q^-16 + q^-14)``.

    q-terms are listed by increasing exponent inside each t-group.
    """
    if not p.coeffs:
        return "0"
    groups = {}
    for (t, q), v in p.coeffs.items():
        groups.setdefault(t, {})[q] = v
    parts = []
    for t in sorted(groups):
        inner = " + ".join(_qterm(q, v) for q, v in sorted(groups[t].items()))
        if t == 0:
            parts.append(f"({inner})")
        elif t == 1:
            parts.append(f"t({inner})")
        else:
            parts.append(f"t^{t}({inner})")
    return " + ".join(parts)


def parse_tq(text: str) -> BiPoly:
    """Parse the output of :func:`format_tq` (whitespace-insensitive).

    Used by golden tests so that formatting details do not make them brittle.
    """
    import re

    s = text.replace(" ", "").replace("\n", "")
    if s in ("", "0"):
        return BiPoly()
    result = {}
    # tokenize into t-groups by splitting on '+' at paren depth 0
    tokens, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0 and cur:
            tokens.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        tokens.append(cur)
    term_re = re.compile(r"^(-?\d+)?(q(?:\^(-?\d+))?)?$")
    for tok in tokens:
        m = re.match(r"^(?:t(?:\^(-?\d+))?)?", tok)
        if m.group(0):
            t = int(m.group(1)) if m.group(1) is not None else 1
            rest = tok[m.end():]
        else:
            t = 0
            rest = tok
        if rest.startswith("(") and rest.endswith(")"):
            rest = rest[1:-1]
        for piece in rest.split("+"):
            piece = piece.strip()
            if not piece:
                continue
            mm = term_re.match(piece)
            if not mm:
                raise ValueError(f"cannot parse term {piece!r}")
            coeff = mm.group(1)
            if coeff in (None, "", "-"):
                coeff = -1 if coeff == "-" else 1
            else:
                coeff = int(coeff)
            if mm.group(2):
                q = int(mm.group(3)) if mm.group(3) is not None else 1
            else:
                q = 0
            key = (t, q)
            result[key] = result.get(key, 0) + coeff
    return BiPoly(result)
