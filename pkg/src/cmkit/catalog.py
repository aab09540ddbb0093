"""Stock rings and factorizations used by the test fixtures and the verifier.

The Veronese cones A(m) are presented by the 2x2 minors of the Hankel matrix
[[z0 .. z_{m-1}], [z1 .. z_m]]; the node and cusp are the quadratic
suspensions of the one-variable factorizations (x, x) and (x, x^2).
"""
from __future__ import annotations

from .ring import Field, GradedRing
from .mf import MatrixFactorization, knorrer, hypersurface_quotient

DEFAULT_P = 32003


def default_field() -> Field:
    return Field.gf(DEFAULT_P)


def veronese(m: int, field: Field | None = None) -> GradedRing:
    """A(m): the cone over the rational normal curve of degree m."""
    if m < 1:
        raise ValueError("veronese cone needs m >= 1")
    f = field if field is not None else default_field()
    names = tuple(f"z{i}" for i in range(m + 1))
    rels = []
    for i in range(m):
        for j in range(i + 1, m):
            # z_i z_{j+1} - z_{i+1} z_j
            rels.append(f"z{i}*z{j + 1} - z{i + 1}*z{j}")
    return GradedRing(f, names, relations=rels)


def node_seed(field: Field | None = None) -> MatrixFactorization:
    """(x, x) over k[x]: coker is k over k[x]/(x^2)."""
    f = field if field is not None else default_field()
    q = GradedRing(f, ("x",))
    x = q.var(0)
    return MatrixFactorization(q, x * x, ((x,),), ((x,),), (0,), (1,))


def cusp_seed(field: Field | None = None) -> MatrixFactorization:
    """(x, x^2) over k[x] with deg x = 2: coker is k[x]/(x) over k[x]/(x^3)."""
    f = field if field is not None else default_field()
    q = GradedRing(f, ("x",), degrees=(2,))
    x = q.var(0)
    return MatrixFactorization(q, x * x * x, ((x,),), ((x * x,),), (0,), (2,))


def node_curve(field: Field | None = None) -> GradedRing:
    """k[x,t]/(x^2 + t^2)."""
    return hypersurface_quotient(knorrer(node_seed(field)))


def cusp_curve(field: Field | None = None) -> GradedRing:
    """k[x,t]/(x^3 + t^2), deg x = 2, deg t = 3."""
    return hypersurface_quotient(knorrer(cusp_seed(field)))
