"""Finitely presented graded modules over a graded (quotient) ring.

A module is a free cover ``F0 = + A(-d_i)`` together with a list of
homogeneous relation vectors.  All Groebner work is delegated to the ambient
polynomial ring: a submodule of a free A-module, A = S/I, is handled as the
corresponding S-submodule with the defining-ideal columns ``I*e_i`` adjoined.
Graded pieces are exact (standard monomials of the initial module), so
Hilbert functions, Krull dimensions and minimal generator selection are all
certified, never floating-point or window-guessed.
"""

from __future__ import annotations

import itertools

from .errors import ComputationLimit, ValidationError
from .freemod import FreeModule, ModuleMap, Vec
from .groebner import ModuleGB
from .linalg import SpanTracker, nullspace, rank as k_rank
from .ring import GradedRing, Poly, dim_of_monomial_ideal


class SubmoduleGB:
    """Groebner data for a submodule of a free A-module (A possibly a quotient).

    Wraps an ambient ModuleGB of the generators plus defining-ideal columns.
    """

    def __init__(self, free: FreeModule, gens: list[Vec]):
        self.free = free
        self.ring = free.ring
        amb = self.ring.ambient
        self.amb_free = FreeModule(amb, free.gen_degrees)
        lifted = [Vec(self.amb_free, dict(v.terms)) for v in gens]
        self.ngens = len(gens)
        icols: list[Vec] = []
        if self.ring.is_quotient:
            for g in self.ring.ideal_groebner():
                for i in range(free.rank):
                    icols.append(Vec(self.amb_free,
                                     {(i, e): c for e, c in g.terms.items()}))
        self.gb = ModuleGB(lifted + icols, self.amb_free, track=True)
        self._lts_by_comp: dict[int, list] = {}
        for (comp, e) in (v.lt()[0] for v in self.gb.reduced()):
            self._lts_by_comp.setdefault(comp, []).append(e)

    def normal_form(self, v: Vec) -> Vec:
        """Canonical representative of v modulo the submodule (over A)."""
        w = Vec(self.amb_free, dict(v.terms))
        r = self.gb.normal_form(w)
        return Vec(self.free, dict(r.terms))

    def contains(self, v: Vec) -> bool:
        return self.normal_form(v).is_zero

    def coeffs_of(self, v: Vec):
        """Write v as an A-combination of the generators; None if not a member."""
        w = Vec(self.amb_free, dict(v.terms))
        r, coeffs = self.gb.nf_with_origin_coeffs(w)
        if not r.is_zero:
            return None
        return [self.ring._make(dict(c.terms)) for c in coeffs[: self.ngens]]

    def syzygies_over_ring(self) -> list[Vec]:
        """Generators of the A-syzygy module of the generators."""
        rep = FreeModule(self.ring, self.gb.rep_module.gen_degrees[: self.ngens])
        out = []
        for s in self.gb.syzygies:
            terms = {(c, e): x for (c, e), x in s.terms.items() if c < self.ngens}
            v = rep._make(terms)
            if not v.is_zero:
                out.append(v)
        return out

    def lead_terms_by_component(self) -> dict[int, list]:
        return self._lts_by_comp

    def std_monomials(self, comp: int, mono_deg: int) -> list[tuple[int, ...]]:
        lts = self._lts_by_comp.get(comp, [])
        out = []
        for e in self.ring.monomials_of_degree(mono_deg):
            if not any(all(a <= b for a, b in zip(l, e)) for l in lts):
                out.append(e)
        return out


class PresentedModule:
    """Graded module given by generator degrees and relation vectors."""

    def __init__(self, ring: GradedRing, gen_degrees, relations=None, check: bool = True):
        self.ring = ring
        self.gen_degrees = tuple(gen_degrees)
        self.free = FreeModule(ring, self.gen_degrees)
        rels = []
        for r in (relations or []):
            if isinstance(r, (list, tuple)):
                r = self.free.from_entries(list(r))
            if r.module.gen_degrees != self.free.gen_degrees:
                raise ValidationError("relation lives in the wrong free module")
            if r.module.ring != ring:
                r = self.free._make(dict(r.terms))
            if r.is_zero:
                continue
            if check and not r.is_homogeneous():
                raise ValidationError(f"inhomogeneous relation {r}")
            rels.append(r)
        self.relations: tuple[Vec, ...] = tuple(rels)
        self._relgb: SubmoduleGB | None = None
        self._min: tuple | None = None
        self._resolutions: dict = {}
        self._dim: int | None = None

    # -- basic structure ------------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.gen_degrees)

    def rel_gb(self) -> SubmoduleGB:
        if self._relgb is None:
            self._relgb = SubmoduleGB(self.free, list(self.relations))
        return self._relgb

    def presentation_map(self) -> ModuleMap:
        """The relation matrix F1 -> F0 as a map of free modules."""
        if self.relations:
            return ModuleMap.from_columns(self.free, list(self.relations))
        return ModuleMap.zero(FreeModule(self.ring, ()), self.free)

    def __repr__(self) -> str:
        return (f"PresentedModule({self.ring}; gens={list(self.gen_degrees)}, "
                f"{len(self.relations)} relations)")

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def free_module(ring: GradedRing, gen_degrees) -> "PresentedModule":
        return PresentedModule(ring, gen_degrees)

    @staticmethod
    def ring_module(ring: GradedRing) -> "PresentedModule":
        return PresentedModule(ring, (0,))

    @staticmethod
    def residue_field(ring: GradedRing) -> "PresentedModule":
        m = PresentedModule(ring, (0,))
        rels = [m.free.from_entries([ring.var(i)]) for i in range(ring.nvars)]
        return PresentedModule(ring, (0,), rels)

    @staticmethod
    def zero_module(ring: GradedRing) -> "PresentedModule":
        return PresentedModule(ring, ())

    @staticmethod
    def from_matrix(ring: GradedRing, gen_degrees, columns) -> "PresentedModule":
        m = PresentedModule(ring, gen_degrees)
        rels = [m.free.from_entries(list(col)) for col in columns]
        return PresentedModule(ring, gen_degrees, rels)

    # -- graded pieces -----------------------------------------------------------

    def graded_basis(self, d: int) -> list[tuple[int, tuple[int, ...]]]:
        """Monomial k-basis of the degree-d piece."""
        gb = self.rel_gb()
        out = []
        for comp, gdeg in enumerate(self.gen_degrees):
            for e in gb.std_monomials(comp, d - gdeg):
                out.append((comp, e))
        return out

    def hf(self, d: int) -> int:
        return len(self.graded_basis(d))

    def hilbert_function(self, lo: int, hi: int) -> dict[int, int]:
        return {d: self.hf(d) for d in range(lo, hi + 1)}

    def coords(self, v: Vec, d: int, basis=None):
        """Coordinates of a degree-d element in the monomial basis of M_d."""
        f = self.ring.field
        basis = basis if basis is not None else self.graded_basis(d)
        idx = {t: i for i, t in enumerate(basis)}
        nf = self.rel_gb().normal_form(v)
        out = [f.zero] * len(basis)
        for t, c in nf.terms.items():
            if t not in idx:
                raise ValidationError(f"element has a stray term {t} in degree {d}")
            out[idx[t]] = c
        return out

    def element_from_coords(self, coords, d: int, basis=None) -> Vec:
        basis = basis if basis is not None else self.graded_basis(d)
        f = self.ring.field
        terms = {}
        for t, c in zip(basis, coords):
            c = f.coerce(c)
            if not f.is_zero(c):
                terms[t] = c
        return Vec(self.free, terms)

    def element_is_zero(self, v: Vec) -> bool:
        return self.rel_gb().contains(v)

    def is_zero(self) -> bool:
        return all(self.element_is_zero(self.free.basis_vec(i)) for i in range(self.ngens))

    # -- invariants ----------------------------------------------------------------

    def krull_dim(self) -> int:
        """Krull dimension of the module; -1 for the zero module."""
        if self._dim is None:
            if self.ngens == 0:
                self._dim = -1
            else:
                lts = self.rel_gb().lead_terms_by_component()
                dims = []
                for comp in range(self.ngens):
                    dims.append(dim_of_monomial_ideal(lts.get(comp, []), self.ring.nvars))
                self._dim = max(dims)
        return self._dim

    def gen_degree_range(self) -> tuple[int, int]:
        if self.ngens == 0:
            return (0, 0)
        return (min(self.gen_degrees), max(self.gen_degrees))

    def default_window(self, steps: int = 1) -> tuple[int, int]:
        lo = min(self.gen_degrees) if self.ngens else 0
        reldegs = [r.degree() for r in self.relations if not r.is_zero]
        maxrel = max(reldegs) if reldegs else (max(self.gen_degrees) + 1 if self.ngens else 1)
        return (lo, lo + 2 * (steps + 1) * max(1, maxrel - lo))

    # -- twists, sums ------------------------------------------------------------------

    def twist(self, e: int) -> "PresentedModule":
        m = PresentedModule(self.ring, tuple(d - e for d in self.gen_degrees))
        rels = [Vec(m.free, dict(r.terms)) for r in self.relations]
        return PresentedModule(m.ring, m.gen_degrees, rels, check=False)

    @staticmethod
    def direct_sum(parts: list["PresentedModule"]) -> "PresentedModule":
        if not parts:
            raise ValidationError("empty direct sum needs a ring")
        ring = parts[0].ring
        gd: list[int] = []
        offs = []
        for p in parts:
            if p.ring != ring:
                raise ValidationError("direct sum over mixed rings")
            offs.append(len(gd))
            gd.extend(p.gen_degrees)
        total = PresentedModule(ring, gd)
        rels = []
        for p, off in zip(parts, offs):
            for r in p.relations:
                rels.append(Vec(total.free,
                                {(c + off, e): x for (c, e), x in r.terms.items()}))
        return PresentedModule(ring, gd, rels, check=False)

    # -- minimal presentations ------------------------------------------------------------

    def minimalize(self):
        """Minimal presentation.  Returns (Mmin, to_min, from_min) with
        mutually inverse isomorphisms given on generators."""
        if self._min is not None:
            return self._min
        ring = self.ring
        f = ring.field
        gens = list(range(self.ngens))           # surviving original generator indices
        gdeg = list(self.gen_degrees)
        rels = [list(r.entries()) for r in self.relations]
        # expr[i] = current expression of original generator i in surviving gens
        expr: list[dict[int, Poly]] = [{i: ring.one} for i in range(self.ngens)]

        def live_cols():
            return list(range(len(gens)))

        changed = True
        while changed:
            changed = False
            for ri, row in enumerate(rels):
                pivot = None
                for ci in live_cols():
                    p = row[ci]
                    if not p.is_zero and p.is_scalar():
                        pivot = ci
                        break
                if pivot is None:
                    continue
                c = row[pivot].constant_coeff()
                inv = f.inv(c)
                # g_pivot = -(1/c) * sum_{j != pivot} row[j] g_j
                sub = {j: row[j].scale(f.neg(inv)) for j in live_cols()
                       if j != pivot and not row[j].is_zero}
                # rewrite other relations
                new_rels = []
                for rj, row2 in enumerate(rels):
                    if rj == ri:
                        continue
                    coef = row2[pivot]
                    if coef.is_zero:
                        new_rels.append([row2[j] for j in live_cols() if j != pivot])
                        continue
                    nr = []
                    for j in live_cols():
                        if j == pivot:
                            continue
                        t = row2[j] + coef * sub.get(j, ring.zero)
                        nr.append(t)
                    new_rels.append(nr)
                # rewrite generator expressions
                keep = [j for j in live_cols() if j != pivot]
                remap = {old: new for new, old in enumerate(keep)}
                for i in range(self.ngens):
                    ei = expr[i]
                    if pivot in ei:
                        coef = ei.pop(pivot)
                        for j, q in sub.items():
                            ei[j] = ei.get(j, ring.zero) + coef * q
                    expr[i] = {remap[j]: q for j, q in ei.items()
                               if j in remap and not q.is_zero}
                gens = [gens[j] for j in keep]
                gdeg = [gdeg[j] for j in keep]
                rels = [r for r in new_rels if any(not p.is_zero for p in r)]
                changed = True
                break

        mmin = PresentedModule(ring, gdeg,
                               [[r[j] for j in range(len(gens))] for r in rels])
        # prune the relation set to minimal generators of the relation module
        if mmin.relations:
            keep_idx = minimal_generator_indices(mmin.free, list(mmin.relations))
            mmin = PresentedModule(ring, gdeg, [mmin.relations[i] for i in keep_idx],
                                   check=False)
        # to_min: original generator i -> expression in surviving gens
        to_cols = []
        for i in range(self.ngens):
            col = [ring.zero] * len(gens)
            for j, q in expr[i].items():
                col[j] = q
            to_cols.append(col)
        to_min = PModMap(self, mmin,
                         [[to_cols[i][j] for i in range(self.ngens)]
                          for j in range(len(gens))])
        # from_min: surviving generator (original index g) -> e_g in self
        from_min = PModMap(mmin, self,
                           [[ring.one if gens[j] == i else ring.zero
                             for j in range(len(gens))] for i in range(self.ngens)])
        self._min = (mmin, to_min, from_min)
        return self._min

    def minimal_gen_degrees(self) -> tuple[int, ...]:
        return self.minimalize()[0].gen_degrees

    def mu(self) -> int:
        """Minimal number of generators."""
        return len(self.minimal_gen_degrees())


def minimal_generator_indices(free: FreeModule, vectors: list[Vec]) -> list[int]:
    """Indices of a minimal generating subset, selected degreewise.

    Graded Nakayama: an element is redundant iff it lies in the span of the
    other generators of degree <= its own; processing degrees in ascending
    order with an exact span tracker keeps exactly one minimal choice, always
    preferring earlier input vectors.
    """
    ring = free.ring
    if not vectors:
        return []
    byd: dict[int, list[int]] = {}
    for i, v in enumerate(vectors):
        if v.is_zero:
            continue
        if not v.is_homogeneous():
            raise ValidationError("minimal generator selection needs homogeneous input")
        byd.setdefault(v.degree(), []).append(i)
    kept: list[int] = []
    free_pm = PresentedModule(ring, free.gen_degrees)
    for d in sorted(byd):
        basis = free_pm.graded_basis(d)
        tracker = SpanTracker(ring.field, len(basis))
        for k in kept:
            v = vectors[k]
            dv = v.degree()
            for e in ring.std_monomials_of_degree(d - dv):
                w = v.mono_mul(e, ring.field.one)
                tracker.add(free_pm.coords(w, d, basis))
        for i in byd[d]:
            c = free_pm.coords(vectors[i], d, basis)
            if tracker.add(c):
                kept.append(i)
    return sorted(kept)


def minimal_generators(free: FreeModule, vectors: list[Vec]) -> list[Vec]:
    return [vectors[i] for i in minimal_generator_indices(free, vectors)]


# -- maps of presented modules ------------------------------------------------------


class PModMap:
    """Map of presented modules, given by generator images (a matrix over A)."""

    def __init__(self, source: PresentedModule, target: PresentedModule, entries,
                 check: bool = False):
        self.source = source
        self.target = target
        ring = target.ring
        rows = []
        for i in range(target.ngens):
            row = []
            for j in range(source.ngens):
                p = entries[i][j]
                if isinstance(p, str):
                    p = ring.parse(p)
                elif isinstance(p, int):
                    p = ring.scalar(p)
                row.append(p)
            rows.append(tuple(row))
        self.entries = tuple(rows)
        if check:
            self.check_well_defined()

    # -- constructors -------------------------------------------------------------

    @staticmethod
    def from_columns(source: PresentedModule, target: PresentedModule,
                     cols: list[Vec]) -> "PModMap":
        entries = [[cols[j].entry(i) for j in range(len(cols))]
                   for i in range(target.ngens)]
        return PModMap(source, target, entries)

    @staticmethod
    def identity(m: PresentedModule) -> "PModMap":
        ring = m.ring
        return PModMap(m, m, [[ring.one if i == j else ring.zero
                               for j in range(m.ngens)] for i in range(m.ngens)])

    @staticmethod
    def zero(source: PresentedModule, target: PresentedModule) -> "PModMap":
        z = target.ring.zero
        return PModMap(source, target, [[z] * source.ngens for _ in range(target.ngens)])

    @staticmethod
    def mult_by(m: PresentedModule, a: Poly) -> "PModMap":
        """Multiplication by a homogeneous ring element, M -> M(deg a)."""
        if not a.is_homogeneous():
            raise ValidationError("multiplication by an inhomogeneous element")
        d = a.degree() or 0
        tgt = m.twist(-d)
        z = m.ring.zero
        return PModMap(m, tgt, [[a if i == j else z for j in range(m.ngens)]
                                for i in range(m.ngens)])

    # -- plumbing ----------------------------------------------------------------

    def free_map(self) -> ModuleMap:
        return ModuleMap(self.source.free, self.target.free, self.entries, check=False)

    def column(self, j: int) -> Vec:
        terms: dict = {}
        for i in range(self.target.ngens):
            for e, c in self.entries[i][j].terms.items():
                terms[(i, e)] = c
        return self.target.free._make(terms)

    def columns(self) -> list[Vec]:
        return [self.column(j) for j in range(self.source.ngens)]

    def apply_vec(self, v: Vec) -> Vec:
        """Image of an element given as a vector in the source's free cover."""
        out = self.target.free.zero
        for j in range(self.source.ngens):
            p = v.entry(j)
            if not p.is_zero:
                out = out + self.column(j).poly_mul(p)
        return out

    def check_well_defined(self):
        gb = self.target.rel_gb()
        for r in self.source.relations:
            if not gb.contains(self.apply_vec(r)):
                raise ValidationError("map does not kill a source relation")

    def compose(self, other: "PModMap") -> "PModMap":
        """self o other."""
        ring = self.target.ring
        m, k, n = self.target.ngens, self.source.ngens, other.source.ngens
        entries = []
        for i in range(m):
            row = []
            for j in range(n):
                acc = ring.zero
                for t in range(k):
                    a, b = self.entries[i][t], other.entries[t][j]
                    if not a.is_zero and not b.is_zero:
                        acc = acc + a * b
                row.append(acc)
            entries.append(row)
        return PModMap(other.source, self.target, entries)

    def __add__(self, other: "PModMap") -> "PModMap":
        entries = [[self.entries[i][j] + other.entries[i][j]
                    for j in range(self.source.ngens)] for i in range(self.target.ngens)]
        return PModMap(self.source, self.target, entries)

    def __sub__(self, other: "PModMap") -> "PModMap":
        entries = [[self.entries[i][j] - other.entries[i][j]
                    for j in range(self.source.ngens)] for i in range(self.target.ngens)]
        return PModMap(self.source, self.target, entries)

    def scale(self, c) -> "PModMap":
        entries = [[p.scale(c) for p in row] for row in self.entries]
        return PModMap(self.source, self.target, entries)

    @property
    def is_zero_map(self) -> bool:
        """Zero as a map of modules (not merely a zero matrix)."""
        gb = self.target.rel_gb()
        return all(gb.contains(self.column(j)) for j in range(self.source.ngens))

    # -- kernel / image / cokernel ----------------------------------------------------

    def kernel(self) -> tuple[PresentedModule, "PModMap"]:
        return kernel_of_map(self)

    def cokernel(self) -> PresentedModule:
        rels = list(self.target.relations) + [c for c in self.columns() if not c.is_zero]
        return PresentedModule(self.target.ring, self.target.gen_degrees, rels, check=False)

    def image(self) -> tuple[PresentedModule, "PModMap"]:
        """Image as a presented module plus its inclusion into the target."""
        cols = self.columns()
        keep = [j for j, c in enumerate(cols) if not self.target.element_is_zero(c)]
        gens = [cols[j] for j in keep]
        sub = submodule_of(self.target, gens)
        incl = PModMap.from_columns(sub, self.target, gens)
        return sub, incl

    def is_injective(self) -> bool:
        k, _ = self.kernel()
        return k.is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel().is_zero()

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def inverse(self) -> "PModMap":
        """Inverse of an isomorphism, by lifting target generators."""
        gb = SubmoduleGB(self.target.free, self.columns() + list(self.target.relations))
        cols = []
        for i in range(self.target.ngens):
            coeffs = gb.coeffs_of(self.target.free.basis_vec(i))
            if coeffs is None:
                raise ValidationError("map is not surjective; no inverse")
            cols.append(coeffs[: self.source.ngens])
        entries = [[cols[i][j] for i in range(self.target.ngens)]
                   for j in range(self.source.ngens)]
        return PModMap(self.target, self.source, entries)

    def restrict_to_degree(self, d: int, src_basis=None, tgt_basis=None):
        """Matrix of the induced k-linear map M_d -> N_d (rows = target basis)."""
        f = self.target.ring.field
        src_basis = src_basis if src_basis is not None else self.source.graded_basis(d)
        tgt_basis = tgt_basis if tgt_basis is not None else self.target.graded_basis(d)
        cols = []
        for (comp, e) in src_basis:
            v = Vec(self.source.free, {(comp, e): f.one})
            cols.append(self.target.coords(self.apply_vec(v), d, tgt_basis))
        return [[cols[j][i] for j in range(len(src_basis))] for i in range(len(tgt_basis))]

    def __repr__(self) -> str:
        rows = ["[" + ", ".join(str(p) for p in row) + "]" for row in self.entries]
        return "PModMap[" + "; ".join(rows) + "]"


def kernel_of_map(f: PModMap) -> tuple[PresentedModule, PModMap]:
    """Kernel of a map of presented modules, with its inclusion into the source."""
    src, tgt = f.source, f.target
    images = f.columns()
    aux = images + list(tgt.relations)
    gb = SubmoduleGB(tgt.free, aux)
    # syzygies of [images | rels | I-cols] restricted to the first block give
    # exactly the vectors v in F0(src) with f(v) = 0 in the target module
    syz = gb.syzygies_over_ring()
    n = src.ngens
    kengens: list[Vec] = []
    for s in syz:
        v = src.free._make({(c, e): x for (c, e), x in s.terms.items() if c < n})
        if not v.is_zero and not src.element_is_zero(v):
            kengens.append(v)
    if not kengens:
        return PresentedModule.zero_module(src.ring), PModMap.zero(
            PresentedModule.zero_module(src.ring), src)
    keep = minimal_generator_indices(src.free, kengens)
    kengens = [kengens[i] for i in keep]
    k = submodule_of(src, kengens)
    incl = PModMap.from_columns(k, src, kengens)
    return k, incl


def submodule_of(m: PresentedModule, gens: list[Vec]) -> PresentedModule:
    """The submodule of M generated by vectors in M's free cover, as a module."""
    aux = list(gens) + list(m.relations)
    gb = SubmoduleGB(m.free, aux)
    syz = gb.syzygies_over_ring()
    n = len(gens)
    rep = FreeModule(m.ring, [v.degree() for v in gens])
    rels = []
    for s in syz:
        v = rep._make({(c, e): x for (c, e), x in s.terms.items() if c < n})
        if not v.is_zero:
            rels.append(v)
    return PresentedModule(m.ring, rep.gen_degrees, rels, check=False)


def subquotient(host: PresentedModule, zgens: list[Vec], bgens: list[Vec]) -> PresentedModule:
    """(span(Z) + rel)/(span(B) + rel) inside the host's free cover.

    The relations on the Z-generators are the first block of the syzygies of
    [Z | B | host relations]: a syzygy there says exactly that a combination
    of Z lands in span(B) + relations.  B should be contained in span(Z) up
    to relations for the result to be the honest subquotient.
    """
    aux = list(zgens) + list(bgens) + list(host.relations)
    gb = SubmoduleGB(host.free, aux)
    syz = gb.syzygies_over_ring()
    n = len(zgens)
    rep = FreeModule(host.ring, [v.degree() for v in zgens])
    rels = []
    for s in syz:
        v = rep._make({(c, e): x for (c, e), x in s.terms.items() if c < n})
        if not v.is_zero:
            rels.append(v)
    return PresentedModule(host.ring, rep.gen_degrees, rels, check=False)


# -- scalars across ring changes -----------------------------------------------------


def base_change(m: PresentedModule, b: GradedRing) -> PresentedModule:
    """M (x)_A B for a further quotient B of the same ambient ring."""
    if b.ambient != m.ring.ambient:
        raise ValidationError("base change needs the same ambient polynomial ring")
    free = FreeModule(b, m.gen_degrees)
    rels = [free._make(dict(r.terms)) for r in m.relations]
    return PresentedModule(b, m.gen_degrees, rels, check=False)


def restrict_scalars(m: PresentedModule, a: GradedRing, jgens: list[Poly]) -> PresentedModule:
    """View a module over B = A/J as an A-module (same generators)."""
    if a.ambient != m.ring.ambient:
        raise ValidationError("restriction needs the same ambient polynomial ring")
    free = FreeModule(a, m.gen_degrees)
    rels = [free._make(dict(r.terms)) for r in m.relations]
    for g in jgens:
        ga = a._make(dict(g.terms))
        for i in range(m.ngens):
            rels.append(free._make({(i, e): c for e, c in ga.terms.items()}))
    return PresentedModule(a, m.gen_degrees, rels, check=False)


def apply_ring_map(m: PresentedModule, phi, target: GradedRing) -> PresentedModule:
    """Push a presentation through a ring map (variable substitution)."""
    free = FreeModule(target, m.gen_degrees)
    rels = []
    for r in m.relations:
        entries = [phi(p) for p in r.entries()]
        rels.append(free.from_entries(entries))
    return PresentedModule(target, m.gen_degrees, rels, check=False)


def apply_ring_map_to_map(f: PModMap, phi, src: PresentedModule,
                          tgt: PresentedModule) -> PModMap:
    entries = [[phi(f.entries[i][j]) for j in range(f.source.ngens)]
               for i in range(f.target.ngens)]
    return PModMap(src, tgt, entries)


# -- Hom modules -------------------------------------------------------------------


class HomModule:
    """Hom_A(M, N) presented as a module, with encode/decode to actual maps."""

    def __init__(self, m: PresentedModule, n: PresentedModule):
        self.m = m
        self.n = n
        ring = m.ring
        if n.ring != ring:
            raise ValidationError("Hom needs modules over one ring")
        slots = [n.twist(d) for d in m.gen_degrees]
        self.h0 = PresentedModule.direct_sum(slots) if slots \
            else PresentedModule.zero_module(ring)
        self.slot_offsets = []
        off = 0
        for _ in m.gen_degrees:
            self.slot_offsets.append(off)
            off += n.ngens
        rel_list = list(m.relations)
        if rel_list:
            rslots = [n.twist(r.degree()) for r in rel_list]
            h1 = PresentedModule.direct_sum(rslots)
            entries = [[ring.zero] * self.h0.ngens for _ in range(h1.ngens)]
            for ri, r in enumerate(rel_list):
                for j in range(m.ngens):
                    p = r.entry(j)
                    if p.is_zero:
                        continue
                    for k in range(n.ngens):
                        entries[ri * n.ngens + k][self.slot_offsets[j] + k] = \
                            entries[ri * n.ngens + k][self.slot_offsets[j] + k] + p
            delta = PModMap(self.h0, h1, entries)
            self.module, self.inclusion = kernel_of_map(delta)
        else:
            self.module, self.inclusion = self.h0, PModMap.identity(self.h0)

    def decode(self, v: Vec) -> PModMap:
        """Turn an element of the Hom module (vector in its free cover) into a map."""
        w = self.inclusion.apply_vec(v)
        entries = [[self.m.ring.zero] * self.m.ngens for _ in range(self.n.ngens)]
        for (c, e), x in w.terms.items():
            j = 0
            while j + 1 < len(self.slot_offsets) and self.slot_offsets[j + 1] <= c:
                j += 1
            k = c - self.slot_offsets[j]
            entries[k][j] = entries[k][j] + Poly(self.m.ring, {e: x})
        return PModMap(self.m, self.n, entries)

    def decode_gen(self, i: int) -> PModMap:
        return self.decode(self.module.free.basis_vec(i))

    def min_gen_maps(self) -> list[PModMap]:
        mmin, _, from_min = self.module.minimalize()
        return [self.decode(from_min.column(i)) for i in range(mmin.ngens)]


def module_hom(m: PresentedModule, n: PresentedModule) -> HomModule:
    return HomModule(m, n)


def hom_space_degree(m: PresentedModule, n: PresentedModule, d: int = 0) -> list[PModMap]:
    """k-basis of the degree-d piece of Hom(M, N), as explicit maps.

    Computed directly by linear algebra: unknowns are the generator images,
    constraints say every relation of M maps to zero in N.
    """
    ring = m.ring
    f = ring.field
    gen_bases = [n.graded_basis(gd + d) for gd in m.gen_degrees]
    offsets = []
    off = 0
    for b in gen_bases:
        offsets.append(off)
        off += len(b)
    nunk = off
    if nunk == 0:
        return []
    rows = []
    for r in m.relations:
        rd = r.degree() + d
        rbasis = n.graded_basis(rd)
        cons = [[f.zero] * nunk for _ in range(len(rbasis))]
        for j in range(m.ngens):
            p = r.entry(j)
            if p.is_zero:
                continue
            for bi, (comp, e) in enumerate(gen_bases[j]):
                w = Vec(n.free, {(comp, e): f.one}).poly_mul(p)
                coords = n.coords(w, rd, rbasis)
                for qi, c in enumerate(coords):
                    if not f.is_zero(c):
                        cons[qi][offsets[j] + bi] = f.add(cons[qi][offsets[j] + bi], c)
        rows.extend(cons)
    sols = nullspace(f, rows, nunk) if rows else \
        [[f.one if i == j else f.zero for j in range(nunk)] for i in range(nunk)]
    out = []
    for s in sols:
        entries = [[ring.zero] * m.ngens for _ in range(n.ngens)]
        for j in range(m.ngens):
            chunk = s[offsets[j]: offsets[j] + len(gen_bases[j])]
            vec = n.element_from_coords(chunk, m.gen_degrees[j] + d, gen_bases[j])
            for (comp, e), x in vec.terms.items():
                entries[comp][j] = entries[comp][j] + Poly(ring, {e: x})
        out.append(PModMap(m, n, entries))
    return out


def find_isomorphism(m: PresentedModule, n: PresentedModule,
                     attempts: int = 200) -> PModMap | None:
    """Search for a graded isomorphism M ~ N (degree-0, deterministic order)."""
    if sorted(m.minimal_gen_degrees()) != sorted(n.minimal_gen_degrees()):
        return None
    basis = hom_space_degree(m, n, 0)
    tried = 0
    candidates = []
    for b in basis:
        candidates.append(b)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            candidates.append(basis[i] + basis[j])
            candidates.append(basis[i] - basis[j])
    lo, hi = m.gen_degree_range()
    probe = [lo, lo + 1, hi + 1]
    for cand in candidates:
        tried += 1
        if tried > attempts:
            break
        ok = True
        for d in probe:
            mb = m.graded_basis(d)
            nb = n.graded_basis(d)
            if len(mb) != len(nb):
                ok = False
                break
            mat = cand.restrict_to_degree(d, mb, nb)
            if k_rank(m.ring.field, mat, len(mb)) != len(mb):
                ok = False
                break
        if not ok:
            continue
        if cand.is_isomorphism():
            return cand
    return None


# -- numerical invariants ---------------------------------------------------------------


def multiplicity(m: PresentedModule, max_extra: int = 24) -> int:
    """Normalized leading coefficient of the Hilbert polynomial.

    dim 0: total length; dim 1: stable value of HF; dim 2: stable slope.
    Higher dimensions extend the finite-difference scheme.
    """
    d = m.krull_dim()
    if d < 0:
        return 0
    lo = min(m.gen_degrees)
    reldegs = [r.degree() for r in m.relations] or [lo + 1]
    start = max(max(m.gen_degrees), max(reldegs)) + 1
    if d == 0:
        total = 0
        deg = lo
        zeros = 0
        while zeros < max(2, start - lo + 2):
            h = m.hf(deg)
            total += h
            zeros = zeros + 1 if h == 0 else 0
            deg += 1
            if deg - lo > 200:
                raise ComputationLimit("length computation did not terminate")
        return total
    vals = [m.hf(deg) for deg in range(start, start + max_extra)]
    diffs = vals
    for _ in range(d - 1):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    for i in range(len(diffs) - 3):
        if diffs[i] == diffs[i + 1] == diffs[i + 2] == diffs[i + 3]:
            return diffs[i]
    raise ComputationLimit("Hilbert function did not stabilize on the window")


def generic_rank(m: PresentedModule) -> int:
    """rank = e(M)/e(A), asserted integral (A should be a domain)."""
    ring_mod = PresentedModule.ring_module(m.ring)
    ea = multiplicity(ring_mod)
    em = multiplicity(m)
    if em % ea != 0:
        raise ValidationError(f"multiplicity ratio {em}/{ea} is not an integer")
    return em // ea
