"""Graded rings and exact polynomials.

A :class:`GradedRing` is a positively graded polynomial ring over an exact
field, or a graded quotient of one by a homogeneous ideal.  Elements are
:class:`Poly`: dicts mapping exponent tuples to field scalars.  In a
quotient ring every element is kept in normal form with respect to the
reduced Groebner basis of the defining ideal, so equality is dict equality.
"""

from __future__ import annotations

import itertools
import re

from .errors import ParseError, ValidationError
from .field import Field
from .order import GREVLEX, POT, MonomialOrder, mono_divides


class Poly:
    """Homogeneous-friendly sparse polynomial attached to a ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "GradedRing", terms: dict):
        self.ring = ring
        self.terms = terms

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        f = self.ring.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = f.add(terms.get(e, f.zero), c)
            if f.is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return Poly(self.ring, terms)

    def __neg__(self) -> "Poly":
        f = self.ring.field
        return Poly(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        f = self.ring.field
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = f.add(terms.get(e, f.zero), f.mul(c1, c2))
                if f.is_zero(s):
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return self.ring._make(terms)

    def scale(self, c) -> "Poly":
        f = self.ring.field
        c = f.coerce(c)
        if f.is_zero(c):
            return Poly(self.ring, {})
        return Poly(self.ring, {e: f.mul(c, x) for e, x in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Weighted degree; None for 0, max over terms if inhomogeneous."""
        if not self.terms:
            return None
        w = self.ring.degrees
        return max(sum(wi * ei for wi, ei in zip(w, e)) for e in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        w = self.ring.degrees
        degs = {sum(wi * ei for wi, ei in zip(w, e)) for e in self.terms}
        return len(degs) == 1

    def lt(self) -> tuple[tuple[int, ...], object]:
        """Leading (monomial, coefficient) under the ring's order."""
        e = max(self.terms, key=self.ring.order.key_mono)
        return e, self.terms[e]

    def is_scalar(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_coeff(self):
        zero_e = (0,) * len(self.ring.names)
        return self.terms.get(zero_e, self.ring.field.zero)

    def lift_to_ambient(self) -> "Poly":
        """Reinterpret the stored normal form over the ambient polynomial ring."""
        return Poly(self.ring.ambient, dict(self.terms))

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        _, c = self.lt()
        return self.scale(self.ring.field.inv(c))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ring = self.ring
        f = ring.field
        items = sorted(self.terms.items(), key=lambda t: ring.order.key_mono(t[0]), reverse=True)
        parts = []
        for e, c in items:
            factors = []
            for name, exp in zip(ring.names, e):
                if exp == 1:
                    factors.append(name)
                elif exp > 1:
                    factors.append(f"{name}^{exp}")
            cs = f.to_str(c)
            if not factors:
                body = cs
            elif cs == "1":
                body = "*".join(factors)
            else:
                body = cs + "*" + "*".join(factors)
            parts.append(body)
        return " + ".join(parts)

    __repr__ = __str__


class GradedRing:
    """k[x_1..x_n] with positive variable degrees, possibly mod a homogeneous ideal."""

    def __init__(self, field: Field, names, degrees=None, order: MonomialOrder | None = None,
                 relations=None):
        self.field = field
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValidationError(f"repeated variable names in {self.names}")
        for nm in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", nm):
                raise ValidationError(f"bad variable name {nm!r}")
        self.degrees = tuple(degrees) if degrees is not None else (1,) * len(self.names)
        if len(self.degrees) != len(self.names):
            raise ValidationError("degrees/names length mismatch")
        if any(d <= 0 for d in self.degrees):
            raise ValidationError("variable degrees must be positive")
        self.order = order or MonomialOrder(GREVLEX, module_rule=POT)
        if relations:
            self.ambient = GradedRing(field, self.names, self.degrees, self.order)
            gens = []
            for r in relations:
                p = r if isinstance(r, Poly) else self.ambient.parse(r)
                if p.ring != self.ambient:
                    p = Poly(self.ambient, dict(p.terms))
                if p.is_zero:
                    continue
                if not p.is_homogeneous():
                    raise ValidationError(f"inhomogeneous relation: {p}")
                gens.append(p)
            self.ideal_gens = tuple(gens)
        else:
            self.ambient = self
            self.ideal_gens = ()
        self._gb = None
        self._gb_lts = None
        self._mono_cache: dict[int, tuple] = {}
        self._std_cache: dict[int, tuple] = {}
        self._dim = None

    # -- identity ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, GradedRing):
            return False
        if (self.field, self.names, self.degrees, self.order) != \
           (other.field, other.names, other.degrees, other.order):
            return False
        if len(self.ideal_gens) != len(other.ideal_gens):
            return False
        return all(a.terms == b.terms for a, b in zip(self.ideal_gens, other.ideal_gens))

    def __hash__(self) -> int:
        return hash((self.field, self.names, self.degrees,
                     tuple(tuple(sorted(g.terms.items())) for g in self.ideal_gens)))

    def __repr__(self) -> str:
        base = f"{self.field}[{','.join(self.names)}]"
        if self.ideal_gens:
            base += "/(" + ", ".join(str(g) for g in self.ideal_gens) + ")"
        return base

    @property
    def is_quotient(self) -> bool:
        return bool(self.ideal_gens)

    @property
    def nvars(self) -> int:
        return len(self.names)

    # -- element constructors -------------------------------------------------

    def _make(self, terms: dict) -> Poly:
        """Build an element, reducing modulo the ideal in a quotient ring."""
        if self.ideal_gens:
            terms = self._reduce_terms(terms)
        return Poly(self, terms)

    @property
    def zero(self) -> Poly:
        return Poly(self, {})

    @property
    def one(self) -> Poly:
        return Poly(self, {(0,) * self.nvars: self.field.one})

    def scalar(self, c) -> Poly:
        c = self.field.coerce(c)
        if self.field.is_zero(c):
            return self.zero
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, i: int) -> Poly:
        e = [0] * self.nvars
        e[i] = 1
        return self._make({tuple(e): self.field.one})

    def gens(self) -> list[Poly]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, e: tuple[int, ...], c=None) -> Poly:
        c = self.field.one if c is None else self.field.coerce(c)
        return self._make({tuple(e): c})

    def mono_degree(self, e: tuple[int, ...]) -> int:
        return sum(w * x for w, x in zip(self.degrees, e))

    # -- ideal normal form -----------------------------------------------------

    def ideal_groebner(self) -> list[Poly]:
        """Reduced Groebner basis of the defining ideal (ambient polynomials)."""
        if self._gb is None:
            if not self.ideal_gens:
                self._gb = []
            else:
                from .groebner import poly_groebner
                self._gb = poly_groebner(list(self.ideal_gens))
            self._gb_lts = [g.lt()[0] for g in self._gb]
        return self._gb

    def ideal_lts(self) -> list[tuple[int, ...]]:
        self.ideal_groebner()
        return self._gb_lts

    def _reduce_terms(self, terms: dict) -> dict:
        gb = self.ideal_groebner()
        if not gb:
            return terms
        from .groebner import poly_normal_form
        return poly_normal_form(Poly(self.ambient, dict(terms)), gb).terms

    def reduce(self, p: Poly) -> Poly:
        """Normal form of an ambient polynomial in this quotient."""
        return self._make(dict(p.terms))

    # -- monomial combinatorics -------------------------------------------------

    def monomials_of_degree(self, d: int) -> tuple:
        """All ambient monomials of weighted degree d, order-descending."""
        if d in self._mono_cache:
            return self._mono_cache[d]
        out: list[tuple[int, ...]] = []
        w = self.degrees
        n = self.nvars

        def rec(i: int, rem: int, acc: list[int]):
            if i == n - 1:
                if rem % w[i] == 0:
                    out.append(tuple(acc + [rem // w[i]]))
                return
            for e in range(rem // w[i] + 1):
                rec(i + 1, rem - e * w[i], acc + [e])

        if d >= 0:
            if n == 0:
                if d == 0:
                    out.append(())
            else:
                rec(0, d, [])
        out.sort(key=self.order.key_mono, reverse=True)
        res = tuple(out)
        self._mono_cache[d] = res
        return res

    def std_monomials_of_degree(self, d: int) -> tuple:
        """Monomial k-basis of the degree-d piece of the (quotient) ring."""
        if d in self._std_cache:
            return self._std_cache[d]
        lts = self.ideal_lts()
        res = tuple(e for e in self.monomials_of_degree(d)
                    if not any(mono_divides(l, e) for l in lts))
        self._std_cache[d] = res
        return res

    def dim(self) -> int:
        """Krull dimension, from the initial ideal of the defining ideal."""
        if self._dim is None:
            self._dim = dim_of_monomial_ideal(self.ideal_lts(), self.nvars)
        return self._dim

    def is_artinian(self) -> bool:
        return self.dim() <= 0

    def k_basis(self) -> list[tuple[int, ...]]:
        """All standard monomials of an Artinian quotient, degree-ascending."""
        if not self.is_artinian():
            raise ValidationError(f"ring {self} is not Artinian")
        lts = self.ideal_lts()
        bounds = []
        for i in range(self.nvars):
            b = None
            for l in lts:
                if all(x == 0 for j, x in enumerate(l) if j != i) and l[i] > 0:
                    b = l[i] if b is None else min(b, l[i])
            if b is None:
                raise ValidationError(f"ring {self} is not Artinian")
            bounds.append(b)
        out = []
        for e in itertools.product(*(range(b) for b in bounds)):
            if not any(mono_divides(l, e) for l in lts):
                out.append(e)
        out.sort(key=lambda e: (self.mono_degree(e), tuple(-x for x in self.order.key_mono(e)[1])
                                if self.order.kind == GREVLEX else e))
        return out

    def hilbert_series_values(self, lo: int, hi: int) -> dict[int, int]:
        return {d: len(self.std_monomials_of_degree(d)) for d in range(lo, hi + 1)}

    # -- parsing -----------------------------------------------------------------

    def parse(self, text: str) -> Poly:
        return parse_poly(self, text)


def dim_of_monomial_ideal(lts, nvars: int) -> int:
    """Krull dimension of k[x]/J for a monomial ideal J given by generators.

    The dimension is the largest size of a variable subset V such that no
    generator has support inside V.  Returns -1 when 1 is in the ideal.
    """
    if any(all(x == 0 for x in l) for l in lts):
        return -1
    supports = [frozenset(i for i, x in enumerate(l) if x > 0) for l in lts]
    best = -1
    for size in range(nvars, -1, -1):
        for subset in itertools.combinations(range(nvars), size):
            sset = set(subset)
            if all(not s <= sset for s in supports):
                return size
    return best


# -- polynomial parser ------------------------------------------------------------


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", column=pos + 1)
        if m.group("int") is not None:
            out.append(("int", int(m.group("int")), pos))
        elif m.group("name") is not None:
            out.append(("name", m.group("name"), pos))
        else:
            out.append(("op", m.group("op"), pos))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def parse_poly(ring: GradedRing, text: str) -> Poly:
    """Parse ``c*x^2*y - 3*z`` style polynomials into ring elements."""
    toks = _tokenize(text)
    idx = 0

    def peek():
        return toks[idx]

    def take(kind=None, value=None):
        nonlocal idx
        t = toks[idx]
        if kind and t[0] != kind:
            raise ParseError(f"expected {kind}, got {t[1]!r}", column=t[2] + 1)
        if value is not None and t[1] != value:
            raise ParseError(f"expected {value!r}, got {t[1]!r}", column=t[2] + 1)
        idx += 1
        return t

    var_index = {nm: i for i, nm in enumerate(ring.names)}

    def parse_expr() -> Poly:
        sign = 1
        t = peek()
        if t[0] == "op" and t[1] in "+-":
            take()
            sign = -1 if t[1] == "-" else 1
        p = parse_term()
        acc = p.scale(sign)
        while True:
            t = peek()
            if t[0] == "op" and t[1] in "+-":
                take()
                q = parse_term()
                acc = acc + (q if t[1] == "+" else -q)
            else:
                return acc

    def parse_term() -> Poly:
        p = parse_factor()
        while True:
            t = peek()
            if t[0] == "op" and t[1] == "*":
                take()
                p = p * parse_factor()
            elif t[0] == "op" and t[1] == "/":
                take()
                d = take("int")[1]
                if ring.field.is_prime_field:
                    p = p.scale(ring.field.inv(ring.field.coerce(d)))
                else:
                    from fractions import Fraction
                    p = p.scale(Fraction(1, d))
            else:
                return p

    def parse_factor() -> Poly:
        base = parse_base()
        t = peek()
        if t[0] == "op" and t[1] == "^":
            take()
            n = take("int")[1]
            return base ** n
        return base

    def parse_base() -> Poly:
        t = peek()
        if t[0] == "int":
            take()
            return ring.scalar(t[1])
        if t[0] == "name":
            take()
            if t[1] not in var_index:
                raise ParseError(f"unknown variable {t[1]!r}", column=t[2] + 1)
            return ring.var(var_index[t[1]])
        if t[0] == "op" and t[1] == "(":
            take()
            p = parse_expr()
            take("op", ")")
            return p
        if t[0] == "op" and t[1] == "-":
            take()
            return -parse_base()
        raise ParseError(f"unexpected token {t[1]!r}", column=t[2] + 1)

    p = parse_expr()
    t = peek()
    if t[0] != "end":
        raise ParseError(f"trailing input at {t[1]!r}", column=t[2] + 1)
    return p


# -- ring maps ----------------------------------------------------------------------


class RingMap:
    """Graded k-algebra map determined by variable images."""

    def __init__(self, source: GradedRing, target: GradedRing, images, check: bool = True):
        self.source = source
        self.target = target
        self.images = tuple(img if isinstance(img, Poly) else target.parse(img)
                            for img in images)
        if len(self.images) != source.nvars:
            raise ValidationError("one image per source variable required")
        if check:
            for nm, d, img in zip(source.names, source.degrees, self.images):
                if not img.is_zero and (not img.is_homogeneous() or img.degree() != d):
                    raise ValidationError(
                        f"image of {nm} must be homogeneous of degree {d}, got {img}")
            for g in source.ideal_gens:
                if not self.apply_ambient(g).is_zero:
                    raise ValidationError(f"relation {g} not preserved by ring map")

    def apply_ambient(self, p: Poly) -> Poly:
        """Apply to an ambient-source polynomial, landing in the target."""
        out = self.target.zero
        for e, c in p.terms.items():
            m = self.target.scalar(c)
            for img, exp in zip(self.images, e):
                for _ in range(exp):
                    m = m * img
            out = out + m
        return out

    def __call__(self, p: Poly) -> Poly:
        if p.ring != self.source and p.ring != self.source.ambient:
            raise ValidationError("polynomial not in the map's source ring")
        return self.apply_ambient(p)


def tensor_ring(a: GradedRing, r: GradedRing):
    """A (x)_k R as one graded quotient in disjoint variables.

    Returns (ring, include_left, include_right, project_left) where
    project_left kills the R-variables (the closed fiber A).
    """
    if a.field != r.field:
        raise ValidationError("tensor factors must share the coefficient field")
    if set(a.names) & set(r.names):
        raise ValidationError(f"variable clash in tensor product: {set(a.names) & set(r.names)}")
    names = a.names + r.names
    degrees = a.degrees + r.degrees
    amb = GradedRing(a.field, names, degrees, a.order)
    na, nr = a.nvars, r.nvars
    rels = []
    for g in a.ideal_gens:
        rels.append(Poly(amb, {e + (0,) * nr: c for e, c in g.terms.items()}))
    for g in r.ideal_gens:
        rels.append(Poly(amb, {(0,) * na + e: c for e, c in g.terms.items()}))
    t = GradedRing(a.field, names, degrees, a.order, rels)
    inc_a = RingMap(a, t, [t.var(i) for i in range(na)], check=False)
    inc_r = RingMap(r, t, [t.var(na + i) for i in range(nr)], check=False)
    proj_a = RingMap(t, a, [a.var(i) for i in range(na)] + [a.zero] * nr, check=False)
    return t, inc_a, inc_r, proj_a
