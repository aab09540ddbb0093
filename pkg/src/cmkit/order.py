"""Monomial and module term orders.

Monomials are exponent tuples.  An order is realised as a key function:
bigger key tuple = bigger monomial, so ``max(..., key=order.key_mono)``
selects the leading monomial.  Module terms are ``(component, exponents)``
pairs; the module extension is position-over-term (POT, generator index
ascending, i.e. e_0 is largest) or term-over-position (TOP).
"""

from __future__ import annotations

from .errors import ValidationError

GREVLEX = "grevlex"
LEX = "lex"
WEIGHTED = "weighted"

POT = "position-over-term"
TOP = "term-over-position"


class MonomialOrder:
    __slots__ = ("kind", "weights", "module_rule")

    def __init__(self, kind: str = GREVLEX, weights: tuple[int, ...] | None = None,
                 module_rule: str = POT):
        if kind not in (GREVLEX, LEX, WEIGHTED):
            raise ValidationError(f"unknown monomial order {kind!r}")
        if kind == WEIGHTED and not weights:
            raise ValidationError("weighted order needs a weight vector")
        if module_rule not in (POT, TOP):
            raise ValidationError(f"unknown module rule {module_rule!r}")
        self.kind = kind
        self.weights = tuple(weights) if weights else None
        self.module_rule = module_rule

    @staticmethod
    def parse(text: str) -> "MonomialOrder":
        t = text.strip().lower()
        if t in (GREVLEX, "degrevlex"):
            return MonomialOrder(GREVLEX)
        if t == LEX:
            return MonomialOrder(LEX)
        if t.startswith("weighted"):
            nums = t.split(":", 1)
            if len(nums) == 2:
                w = tuple(int(x) for x in nums[1].replace(",", " ").split())
                return MonomialOrder(WEIGHTED, w)
        raise ValidationError(f"bad order spec {text!r} (grevlex, lex, weighted:w1,w2,...)")

    def key_mono(self, e: tuple[int, ...]):
        if self.kind == GREVLEX:
            return (sum(e), tuple(-x for x in reversed(e)))
        if self.kind == LEX:
            return e
        w = self.weights
        return (sum(wi * xi for wi, xi in zip(w, e)), sum(e), tuple(-x for x in reversed(e)))

    def key_term(self, term: tuple[int, tuple[int, ...]]):
        comp, e = term
        if self.module_rule == POT:
            return (-comp, self.key_mono(e))
        return (self.key_mono(e), -comp)

    def with_module_rule(self, rule: str) -> "MonomialOrder":
        return MonomialOrder(self.kind, self.weights, rule)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MonomialOrder)
                and (self.kind, self.weights, self.module_rule)
                == (other.kind, other.weights, other.module_rule))

    def __hash__(self) -> int:
        return hash((self.kind, self.weights, self.module_rule))

    def __repr__(self) -> str:
        w = f":{','.join(map(str, self.weights))}" if self.weights else ""
        return f"{self.kind}{w}/{self.module_rule}"


def mono_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """a / b, assuming divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))
