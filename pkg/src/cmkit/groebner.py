"""Buchberger's algorithm over graded free modules of a polynomial ring.

Everything here runs over the ambient polynomial ring; quotient-ring
computations are handled upstream by adjoining defining-ideal columns.
Inputs are homogeneous, so the sugar of an S-pair is its exact degree and
pairs are processed degree by degree.  The engine optionally tracks, for
every basis element, a representation in terms of the original generators;
S-pairs that reduce to zero then yield syzygies of the input (all original
generators stay in the basis, so the Schreyer argument applies verbatim).

Criteria: the chain criterion is used always (valid for modules); the
product criterion only for rank-one inputs, where each skipped coprime pair
contributes its Koszul syzygy so the tracked syzygies still generate.
"""

from __future__ import annotations

import heapq

from .errors import ValidationError
from .freemod import FreeModule, Vec
from .order import mono_div, mono_divides, mono_lcm
from .ring import Poly


class _Elem:
    __slots__ = ("terms", "rep", "lt", "deg")

    def __init__(self, terms, rep, lt, deg):
        self.terms = terms      # dict (comp, expos) -> coeff, monic
        self.rep = rep          # dict (comp, expos) -> coeff in the rep module, or None
        self.lt = lt            # (comp, expos)
        self.deg = deg


def _dict_sub_scaled(field, target, src, comp_shift_e, c):
    """target -= c * x^e * src for term dicts (src lives in same module)."""
    for (comp, e2), c2 in src.items():
        t = (comp, tuple(a + b for a, b in zip(e2, comp_shift_e)))
        s = field.sub(target.get(t, field.zero), field.mul(c, c2))
        if field.is_zero(s):
            target.pop(t, None)
        else:
            target[t] = s


class ModuleGB:
    """Groebner basis of a submodule of a graded free module, with tracking."""

    def __init__(self, gens: list[Vec], module: FreeModule | None = None, track: bool = True):
        if module is None:
            if not gens:
                raise ValidationError("need a module for an empty generating set")
            module = gens[0].module
        ring = module.ring
        if ring.is_quotient:
            raise ValidationError("Groebner engine runs over the ambient polynomial ring")
        self.module = module
        self.ring = ring
        self.field = ring.field
        self.order = ring.order
        self.track = track
        self.gens = list(gens)
        for v in self.gens:
            if v.module != module:
                raise ValidationError("generators live in different modules")
            if not v.is_homogeneous():
                raise ValidationError(f"inhomogeneous generator {v}")
        rep_degrees = []
        for v in self.gens:
            rep_degrees.append(0 if v.is_zero else v.degree())
        self.rep_module = FreeModule(ring, rep_degrees)
        self._elems: list[_Elem] = []
        self._by_comp: dict[int, list[int]] = {}
        self.syzygies: list[Vec] = []
        self._reduced: list[Vec] | None = None
        self._run()

    # -- reduction ---------------------------------------------------------

    def _full_reduce(self, terms: dict, rep: dict | None, record: dict | None = None):
        """Canonical normal form; optionally records basis coefficients."""
        field = self.field
        key = self.order.key_term
        out: dict = {}
        work = dict(terms)
        while work:
            t = max(work, key=key)
            c = work[t]
            comp, e = t
            hit = None
            for k in self._by_comp.get(comp, ()):
                lte = self._elems[k].lt[1]
                if mono_divides(lte, e):
                    hit = k
                    break
            if hit is None:
                out[t] = c
                del work[t]
                continue
            elem = self._elems[hit]
            m = mono_div(e, elem.lt[1])
            _dict_sub_scaled(field, work, elem.terms, m, c)
            if rep is not None and elem.rep is not None:
                _dict_sub_scaled(field, rep, elem.rep, m, c)
            if record is not None:
                rt = record.setdefault(hit, {})
                s = field.add(rt.get(m, field.zero), c)
                if field.is_zero(s):
                    rt.pop(m, None)
                else:
                    rt[m] = s
        return out

    def _insert(self, terms: dict, rep: dict | None) -> int:
        field = self.field
        lt = max(terms, key=self.order.key_term)
        inv = field.inv(terms[lt])
        if not field.is_zero(field.sub(inv, field.one)):
            terms = {t: field.mul(inv, c) for t, c in terms.items()}
            if rep is not None:
                rep = {t: field.mul(inv, c) for t, c in rep.items()}
        deg = self.module.term_degree(lt)
        idx = len(self._elems)
        self._elems.append(_Elem(terms, rep, lt, deg))
        self._by_comp.setdefault(lt[0], []).append(idx)
        return idx

    # -- main loop -----------------------------------------------------------

    def _run(self):
        field = self.field
        rank1 = self.module.rank == 1
        heap: list = []
        pending: set[tuple[int, int]] = set()

        def push_pairs(j: int):
            ej = self._elems[j]
            comp = ej.lt[0]
            for i in self._by_comp.get(comp, ()):
                if i >= j:
                    continue
                ei = self._elems[i]
                lcm = mono_lcm(ei.lt[1], ej.lt[1])
                deg = self.ring.mono_degree(lcm) + self.module.gen_degrees[comp]
                heapq.heappush(heap, (deg, i, j))
                pending.add((i, j))

        for gi, v in enumerate(self.gens):
            if v.is_zero:
                if self.track:
                    self.syzygies.append(self.rep_module.basis_vec(gi))
                continue
            rep = {(gi, (0,) * self.ring.nvars): field.one} if self.track else None
            terms = self._full_reduce(dict(v.terms), rep)
            if not terms:
                if self.track:
                    self.syzygies.append(Vec(self.rep_module, rep))
                continue
            j = self._insert(terms, rep)
            push_pairs(j)

        while heap:
            deg, i, j = heapq.heappop(heap)
            if (i, j) not in pending:
                continue
            pending.discard((i, j))
            ei, ej = self._elems[i], self._elems[j]
            comp = ei.lt[0]
            lcm = mono_lcm(ei.lt[1], ej.lt[1])
            # product criterion (rank one only): record the Koszul syzygy instead
            if rank1 and all(a == 0 or b == 0 for a, b in zip(ei.lt[1], ej.lt[1])):
                if self.track:
                    ri = Vec(self.rep_module, dict(ei.rep))
                    rj = Vec(self.rep_module, dict(ej.rep))
                    gi_poly = Poly(self.ring, {e: c for (_, e), c in ei.terms.items()})
                    gj_poly = Poly(self.ring, {e: c for (_, e), c in ej.terms.items()})
                    koszul = ri.poly_mul(gj_poly) - rj.poly_mul(gi_poly)
                    if not koszul.is_zero:
                        self.syzygies.append(koszul)
                continue
            # chain criterion
            skip = False
            for k in self._by_comp.get(comp, ()):
                if k == i or k == j:
                    continue
                if mono_divides(self._elems[k].lt[1], lcm):
                    a = (min(i, k), max(i, k))
                    b = (min(j, k), max(j, k))
                    if a not in pending and b not in pending:
                        skip = True
                        break
            if skip:
                continue
            mi = mono_div(lcm, ei.lt[1])
            mj = mono_div(lcm, ej.lt[1])
            terms: dict = {}
            _dict_sub_scaled(field, terms, ei.terms, mi, field.neg(field.one))
            _dict_sub_scaled(field, terms, ej.terms, mj, field.one)
            rep: dict | None = None
            if self.track:
                rep = {}
                _dict_sub_scaled(field, rep, ei.rep, mi, field.neg(field.one))
                _dict_sub_scaled(field, rep, ej.rep, mj, field.one)
            terms = self._full_reduce(terms, rep)
            if terms:
                k = self._insert(terms, rep)
                push_pairs(k)
            elif self.track and rep:
                self.syzygies.append(Vec(self.rep_module, rep))

    # -- queries ---------------------------------------------------------------

    @property
    def basis(self) -> list[Vec]:
        return [Vec(self.module, dict(e.terms)) for e in self._elems]

    @property
    def lead_terms(self) -> list[tuple[int, tuple[int, ...]]]:
        return [e.lt for e in self._elems]

    def normal_form(self, v: Vec) -> Vec:
        if v.module != self.module:
            raise ValidationError("vector lives in a different module")
        return Vec(self.module, self._full_reduce(dict(v.terms), None))

    def contains(self, v: Vec) -> bool:
        return not self._full_reduce(dict(v.terms), None)

    def nf_with_origin_coeffs(self, v: Vec) -> tuple[Vec, list[Poly]]:
        """Normal form r and coefficients c with v = sum c_i * gens_i + r."""
        if not self.track:
            raise ValidationError("GB was built without representation tracking")
        record: dict = {}
        out = self._full_reduce(dict(v.terms), None, record)
        acc = self.rep_module.zero
        for k, monos in record.items():
            p = Poly(self.ring, dict(monos))
            acc = acc + Vec(self.rep_module, dict(self._elems[k].rep)).poly_mul(p)
        return Vec(self.module, out), acc.entries()

    def reduced(self) -> list[Vec]:
        """The unique reduced (auto-reduced, monic, sorted) Groebner basis."""
        if self._reduced is not None:
            return self._reduced
        key = self.order.key_term
        elems = sorted(self._elems, key=lambda e: key(e.lt))
        keep: list[_Elem] = []
        for e in elems:
            lt = e.lt
            if any(k.lt[0] == lt[0] and mono_divides(k.lt[1], lt[1]) for k in keep):
                continue
            keep.append(e)
        out = []
        for e in keep:
            others = [k for k in keep if k is not e]
            saved_elems, saved_by = self._elems, self._by_comp
            self._elems = others
            self._by_comp = {}
            for idx, k in enumerate(others):
                self._by_comp.setdefault(k.lt[0], []).append(idx)
            red = self._full_reduce(dict(e.terms), None)
            self._elems, self._by_comp = saved_elems, saved_by
            if red:
                lt = max(red, key=key)
                inv = self.field.inv(red[lt])
                red = {t: self.field.mul(inv, c) for t, c in red.items()}
                out.append(Vec(self.module, red))
        out.sort(key=lambda v: key(v.lt()[0]), reverse=True)
        self._reduced = out
        return out


def module_syzygies(gens: list[Vec], module: FreeModule | None = None) -> list[Vec]:
    """Generators of the syzygy module of ``gens`` (over the polynomial ring)."""
    gb = ModuleGB(gens, module, track=True)
    return gb.syzygies


# -- polynomial (rank one) conveniences ------------------------------------------


def poly_groebner(polys: list[Poly]) -> list[Poly]:
    """Reduced Groebner basis of a homogeneous ideal."""
    ring = polys[0].ring
    if ring.is_quotient:
        raise ValidationError("ideal Groebner bases are computed in the ambient ring")
    free = FreeModule(ring, (0,))
    gens = [Vec(free, {(0, e): c for e, c in p.terms.items()}) for p in polys]
    gb = ModuleGB(gens, free, track=False)
    return [Poly(ring, {e: c for (_, e), c in v.terms.items()}) for v in gb.reduced()]


def poly_normal_form(p: Poly, gb: list[Poly]) -> Poly:
    """Canonical normal form modulo a Groebner basis (fast scalar path)."""
    ring = p.ring
    field = ring.field
    key = ring.order.key_mono
    reducers = [(g.lt()[0], g.terms) for g in gb]
    out: dict = {}
    work = dict(p.terms)
    while work:
        e = max(work, key=key)
        c = work[e]
        hit = None
        for lte, terms in reducers:
            if mono_divides(lte, e):
                hit = (lte, terms)
                break
        if hit is None:
            out[e] = c
            del work[e]
            continue
        lte, terms = hit
        m = mono_div(e, lte)
        lc = terms[lte]
        factor = field.div(c, lc)
        for e2, c2 in terms.items():
            t = tuple(a + b for a, b in zip(e2, m))
            s = field.sub(work.get(t, field.zero), field.mul(factor, c2))
            if field.is_zero(s):
                work.pop(t, None)
            else:
                work[t] = s
    return Poly(ring, out)
