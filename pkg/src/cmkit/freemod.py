"""Graded free modules, their elements, and maps between them.

A free module is a list of generator degrees over a :class:`GradedRing`:
``F = A(-d_0) + ... + A(-d_{r-1})`` with generator ``e_i`` in degree ``d_i``.
Elements are sparse dicts mapping ``(component, exponents)`` to scalars; in a
quotient ring they are kept in normal form componentwise.  Maps are stored as
entry matrices (target rank x source rank).
"""

from __future__ import annotations

from .errors import ValidationError
from .ring import GradedRing, Poly


class FreeModule:
    __slots__ = ("ring", "gen_degrees", "_hash")

    def __init__(self, ring: GradedRing, gen_degrees):
        self.ring = ring
        self.gen_degrees = tuple(gen_degrees)
        self._hash = None

    @property
    def rank(self) -> int:
        return len(self.gen_degrees)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FreeModule) and self.ring == other.ring
                and self.gen_degrees == other.gen_degrees)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, self.gen_degrees))
        return self._hash

    def __repr__(self) -> str:
        return f"Free({self.ring}; degrees={list(self.gen_degrees)})"

    def twist(self, e: int) -> "FreeModule":
        return FreeModule(self.ring, tuple(d - e for d in self.gen_degrees))

    def dual(self) -> "FreeModule":
        return FreeModule(self.ring, tuple(-d for d in self.gen_degrees))

    # -- element constructors ----------------------------------------------

    def _make(self, terms: dict) -> "Vec":
        if self.ring.is_quotient and terms:
            out: dict = {}
            by_comp: dict[int, dict] = {}
            for (c, e), x in terms.items():
                by_comp.setdefault(c, {})[e] = x
            for c, t in by_comp.items():
                red = self.ring._reduce_terms(t)
                for e, x in red.items():
                    out[(c, e)] = x
            terms = out
        return Vec(self, terms)

    @property
    def zero(self) -> "Vec":
        return Vec(self, {})

    def basis_vec(self, i: int) -> "Vec":
        if not 0 <= i < self.rank:
            raise ValidationError(f"basis index {i} out of range")
        return Vec(self, {(i, (0,) * self.ring.nvars): self.ring.field.one})

    def from_entries(self, polys) -> "Vec":
        """Element with the given polynomial coordinates."""
        if len(polys) != self.rank:
            raise ValidationError("entry count must equal rank")
        terms: dict = {}
        for i, p in enumerate(polys):
            if isinstance(p, str):
                p = self.ring.parse(p)
            for e, c in p.terms.items():
                terms[(i, e)] = c
        return self._make(terms)

    def term_degree(self, term) -> int:
        comp, e = term
        return self.ring.mono_degree(e) + self.gen_degrees[comp]


class Vec:
    """Element of a graded free module."""

    __slots__ = ("module", "terms")

    def __init__(self, module: FreeModule, terms: dict):
        self.module = module
        self.terms = terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Vec") -> "Vec":
        f = self.module.ring.field
        terms = dict(self.terms)
        for t, c in other.terms.items():
            s = f.add(terms.get(t, f.zero), c)
            if f.is_zero(s):
                terms.pop(t, None)
            else:
                terms[t] = s
        return Vec(self.module, terms)

    def __neg__(self) -> "Vec":
        f = self.module.ring.field
        return Vec(self.module, {t: f.neg(c) for t, c in self.terms.items()})

    def __sub__(self, other: "Vec") -> "Vec":
        return self + (-other)

    def scale(self, c) -> "Vec":
        f = self.module.ring.field
        c = f.coerce(c)
        if f.is_zero(c):
            return self.module.zero
        return Vec(self.module, {t: f.mul(c, x) for t, x in self.terms.items()})

    def poly_mul(self, p: Poly) -> "Vec":
        f = self.module.ring.field
        terms: dict = {}
        for (comp, e1), c1 in self.terms.items():
            for e2, c2 in p.terms.items():
                t = (comp, tuple(a + b for a, b in zip(e1, e2)))
                s = f.add(terms.get(t, f.zero), f.mul(c1, c2))
                if f.is_zero(s):
                    terms.pop(t, None)
                else:
                    terms[t] = s
        return self.module._make(terms)

    def mono_mul(self, e2: tuple[int, ...], c2) -> "Vec":
        f = self.module.ring.field
        terms = {(comp, tuple(a + b for a, b in zip(e1, e2))): f.mul(c1, c2)
                 for (comp, e1), c1 in self.terms.items()}
        return self.module._make(terms)

    def lt(self):
        """Leading ((component, exponents), coeff) under the module order."""
        order = self.module.ring.order
        t = max(self.terms, key=order.key_term)
        return t, self.terms[t]

    def monic(self) -> "Vec":
        if self.is_zero:
            return self
        _, c = self.lt()
        return self.scale(self.module.ring.field.inv(c))

    def degree(self) -> int | None:
        if not self.terms:
            return None
        return max(self.module.term_degree(t) for t in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {self.module.term_degree(t) for t in self.terms}
        return len(degs) == 1

    def entry(self, i: int) -> Poly:
        ring = self.module.ring
        return Poly(ring, {e: c for (comp, e), c in self.terms.items() if comp == i})

    def entries(self) -> list[Poly]:
        return [self.entry(i) for i in range(self.module.rank)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Vec) and self.module == other.module
                and self.terms == other.terms)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return "(" + ", ".join(str(self.entry(i)) for i in range(self.module.rank)) + ")"


class ModuleMap:
    """Graded map of free modules, stored as a (target rank x source rank) matrix."""

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: FreeModule, target: FreeModule, entries, check: bool = True):
        self.source = source
        self.target = target
        rows = []
        for i in range(target.rank):
            row = []
            for j in range(source.rank):
                p = entries[i][j]
                if isinstance(p, str):
                    p = target.ring.parse(p)
                elif isinstance(p, (int,)):
                    p = target.ring.scalar(p)
                row.append(p)
            rows.append(tuple(row))
        self.entries = tuple(rows)
        if check:
            self.validate()

    def validate(self):
        for i in range(self.target.rank):
            for j in range(self.source.rank):
                p = self.entries[i][j]
                if p.is_zero:
                    continue
                want = self.source.gen_degrees[j] - self.target.gen_degrees[i]
                if not p.is_homogeneous() or p.degree() != want:
                    raise ValidationError(
                        f"entry ({i},{j}) = {p} must be homogeneous of degree {want}")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_columns(target: FreeModule, cols: list[Vec], source_degrees=None) -> "ModuleMap":
        if source_degrees is None:
            source_degrees = []
            for v in cols:
                if v.is_zero:
                    raise ValidationError("zero column needs an explicit source degree")
                source_degrees.append(v.degree())
        source = FreeModule(target.ring, source_degrees)
        entries = [[cols[j].entry(i) for j in range(len(cols))] for i in range(target.rank)]
        return ModuleMap(source, target, entries)

    @staticmethod
    def identity(f: FreeModule) -> "ModuleMap":
        ring = f.ring
        return ModuleMap(f, f, [[ring.one if i == j else ring.zero
                                 for j in range(f.rank)] for i in range(f.rank)], check=False)

    @staticmethod
    def zero(source: FreeModule, target: FreeModule) -> "ModuleMap":
        z = target.ring.zero
        return ModuleMap(source, target, [[z] * source.rank for _ in range(target.rank)],
                         check=False)

    # -- structure -----------------------------------------------------------

    def column(self, j: int) -> Vec:
        terms: dict = {}
        for i in range(self.target.rank):
            for e, c in self.entries[i][j].terms.items():
                terms[(i, e)] = c
        return Vec(self.target, terms)

    def columns(self) -> list[Vec]:
        return [self.column(j) for j in range(self.source.rank)]

    def apply(self, v: Vec) -> Vec:
        if v.module != self.source:
            raise ValidationError("vector not in the map's source")
        out = self.target.zero
        for j in range(self.source.rank):
            p = v.entry(j)
            if not p.is_zero:
                out = out + self.column(j).poly_mul(p)
        return out

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other (matrix product: self.entries @ other.entries)."""
        if other.target != self.source:
            raise ValidationError("composition mismatch")
        ring = self.target.ring
        m, k, n = self.target.rank, self.source.rank, other.source.rank
        entries = []
        for i in range(m):
            row = []
            for j in range(n):
                acc = ring.zero
                for t in range(k):
                    a = self.entries[i][t]
                    b = other.entries[t][j]
                    if not a.is_zero and not b.is_zero:
                        acc = acc + a * b
                row.append(acc)
            entries.append(row)
        return ModuleMap(other.source, self.target, entries, check=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        entries = [[self.entries[i][j] + other.entries[i][j]
                    for j in range(self.source.rank)] for i in range(self.target.rank)]
        return ModuleMap(self.source, self.target, entries, check=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        entries = [[self.entries[i][j] - other.entries[i][j]
                    for j in range(self.source.rank)] for i in range(self.target.rank)]
        return ModuleMap(self.source, self.target, entries, check=False)

    def scale(self, c) -> "ModuleMap":
        entries = [[self.entries[i][j].scale(c) for j in range(self.source.rank)]
                   for i in range(self.target.rank)]
        return ModuleMap(self.source, self.target, entries, check=False)

    def transpose(self) -> "ModuleMap":
        """Dual map Hom(-, A): target^v -> source^v."""
        entries = [[self.entries[i][j] for i in range(self.target.rank)]
                   for j in range(self.source.rank)]
        return ModuleMap(self.target.dual(), self.source.dual(), entries, check=False)

    def twist(self, e: int) -> "ModuleMap":
        return ModuleMap(self.source.twist(e), self.target.twist(e), self.entries, check=False)

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for row in self.entries for p in row)

    def base_change(self, new_ring: GradedRing, poly_map=None) -> "ModuleMap":
        """Reinterpret entries in another ring (same variables, or via a RingMap)."""
        def conv(p: Poly) -> Poly:
            if poly_map is not None:
                return poly_map(p)
            return new_ring._make(dict(p.terms))
        src = FreeModule(new_ring, self.source.gen_degrees)
        tgt = FreeModule(new_ring, self.target.gen_degrees)
        return ModuleMap(src, tgt, [[conv(p) for p in row] for row in self.entries], check=False)

    def __repr__(self) -> str:
        rows = []
        for i in range(self.target.rank):
            rows.append("[" + ", ".join(str(p) for p in self.entries[i]) + "]")
        return "[" + "; ".join(rows) + "]"


def block_map(blocks, source: FreeModule, target: FreeModule) -> ModuleMap:
    """Assemble a map from a 2D grid of blocks (None = zero block)."""
    ring = target.ring
    entries = [[ring.zero] * source.rank for _ in range(target.rank)]
    row_off = 0
    for brow in blocks:
        col_off = 0
        bh = None
        for blk in brow:
            if blk is None:
                raise ValidationError("zero blocks need explicit ModuleMap.zero entries")
            for i in range(blk.target.rank):
                for j in range(blk.source.rank):
                    entries[row_off + i][col_off + j] = blk.entries[i][j]
            if bh is None:
                bh = blk.target.rank
            col_off += blk.source.rank
        row_off += bh or 0
    return ModuleMap(source, target, entries, check=False)
