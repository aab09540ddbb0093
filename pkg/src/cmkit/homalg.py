"""Ext and Tor, comparison maps, Yoneda classes, canonical modules.

Ext is computed contravariantly: resolve the first argument, apply
Hom(-, N) slotwise (Hom(A(-a), N) = N(a)), and take homology.  The homology
is presented exactly as a subquotient module over the ring, so finite length
is decided by the Krull dimension of that presentation; explicit cocycle
bases are then produced degree by degree with exact linear algebra on the
(finite) degree support read off the initial module.
"""

from __future__ import annotations

from .errors import ValidationError
from .freemod import FreeModule, ModuleMap, Vec
from .linalg import SpanTracker, nullspace, solve_matrix
from .modules import (PModMap, PresentedModule, SubmoduleGB, kernel_of_map,
                      subquotient)
from .resolution import FreeResolution, resolve, resolve_ambient
from .ring import GradedRing, Poly


# -- Hom(F, N) as a direct sum of twists ----------------------------------------


def hom_ds(n: PresentedModule, free: FreeModule) -> tuple[PresentedModule, list[int]]:
    """Hom(F, N) = (+)_j N(a_j) for F = (+)_j A(-a_j); returns (module, offsets)."""
    if free.rank == 0:
        return PresentedModule.zero_module(n.ring), []
    parts = [n.twist(a) for a in free.gen_degrees]
    offsets = [j * n.ngens for j in range(free.rank)]
    return PresentedModule.direct_sum(parts), offsets


def hom_transfer(d: ModuleMap, n: PresentedModule,
                 src_ds: PresentedModule, tgt_ds: PresentedModule) -> PModMap:
    """Hom(d, N) : Hom(target(d), N) -> Hom(source(d), N), phi -> phi o d."""
    ring = n.ring
    ng = n.ngens
    rows = tgt_ds.ngens
    cols = src_ds.ngens
    entries = [[ring.zero] * cols for _ in range(rows)]
    for jp in range(d.source.rank):          # slot in the target Hom module
        for j in range(d.target.rank):       # slot in the source Hom module
            p = d.entries[j][jp]
            if p.is_zero:
                continue
            for k in range(ng):
                entries[jp * ng + k][j * ng + k] = entries[jp * ng + k][j * ng + k] + p
    return PModMap(src_ds, tgt_ds, entries)


def tensor_ds(n: PresentedModule, free: FreeModule) -> PresentedModule:
    """F (x) N = (+)_j N(-a_j)."""
    if free.rank == 0:
        return PresentedModule.zero_module(n.ring)
    return PresentedModule.direct_sum([n.twist(-a) for a in free.gen_degrees])


def tensor_transfer(d: ModuleMap, n: PresentedModule,
                    src_ds: PresentedModule, tgt_ds: PresentedModule) -> PModMap:
    """d (x) id_N : source(d) (x) N -> target(d) (x) N."""
    ring = n.ring
    ng = n.ngens
    entries = [[ring.zero] * src_ds.ngens for _ in range(tgt_ds.ngens)]
    for j in range(d.source.rank):
        for i in range(d.target.rank):
            p = d.entries[i][j]
            if p.is_zero:
                continue
            for k in range(ng):
                entries[i * ng + k][j * ng + k] = entries[i * ng + k][j * ng + k] + p
    return PModMap(src_ds, tgt_ds, entries)


# -- degreewise model of Hom(F_i, N)_d --------------------------------------------


class HomDegreeModel:
    """Coordinates for the degree-d piece of Hom(F, N)."""

    def __init__(self, n: PresentedModule, free: FreeModule, d: int):
        self.n = n
        self.free = free
        self.d = d
        self.slot_bases = [n.graded_basis(a + d) for a in free.gen_degrees]
        self.offsets = []
        off = 0
        for b in self.slot_bases:
            self.offsets.append(off)
            off += len(b)
        self.dim = off

    def cols_to_coords(self, cols: list[Vec]) -> list:
        f = self.n.ring.field
        out = [f.zero] * self.dim
        for j, v in enumerate(cols):
            c = self.n.coords(v, self.free.gen_degrees[j] + self.d, self.slot_bases[j])
            for t, x in enumerate(c):
                out[self.offsets[j] + t] = x
        return out

    def coords_to_cols(self, coords) -> list[Vec]:
        cols = []
        for j in range(self.free.rank):
            chunk = coords[self.offsets[j]: self.offsets[j] + len(self.slot_bases[j])]
            cols.append(self.n.element_from_coords(chunk, self.free.gen_degrees[j] + self.d,
                                                   self.slot_bases[j]))
        return cols

    def compose_matrix(self, d_next: ModuleMap, target: "HomDegreeModel"):
        """Matrix of phi -> phi o d_next from this model to ``target``'s model.

        d_next : target.free -> self.free, both Hom'd into N in degree d.
        """
        f = self.n.ring.field
        rows = []
        for j in range(self.free.rank):
            for t, (comp, e) in enumerate(self.slot_bases[j]):
                cols = [self.n.free.zero] * self.free.rank
                cols[j] = Vec(self.n.free, {(comp, e): f.one})
                image_cols = []
                for jp in range(d_next.source.rank):
                    acc = self.n.free.zero
                    for jj in range(d_next.target.rank):
                        p = d_next.entries[jj][jp]
                        if not p.is_zero and not cols[jj].is_zero:
                            acc = acc + cols[jj].poly_mul(p)
                    image_cols.append(acc)
                rows.append(target.cols_to_coords(image_cols))
        # rows currently indexed by source coordinate; transpose to matrix action
        if not rows:
            return [[f.zero] * 0 for _ in range(target.dim)]
        return [[rows[s][r] for s in range(len(rows))] for r in range(target.dim)]


# -- cocycles and Ext spaces -------------------------------------------------------


class Cocycle:
    """Homogeneous cocycle of internal degree d: a map F_i -> N given by columns."""

    __slots__ = ("degree", "cols")

    def __init__(self, degree: int, cols: list[Vec]):
        self.degree = degree
        self.cols = list(cols)

    def compose_diff(self, d_next: ModuleMap, n: PresentedModule) -> "Cocycle":
        cols = []
        for jp in range(d_next.source.rank):
            acc = n.free.zero
            for j in range(d_next.target.rank):
                p = d_next.entries[j][jp]
                if not p.is_zero and not self.cols[j].is_zero:
                    acc = acc + self.cols[j].poly_mul(p)
            cols.append(acc)
        return Cocycle(self.degree, cols)

    def scale(self, c, n: PresentedModule) -> "Cocycle":
        return Cocycle(self.degree, [v.scale(c) for v in self.cols])

    def add(self, other: "Cocycle") -> "Cocycle":
        return Cocycle(self.degree, [a + b for a, b in zip(self.cols, other.cols)])


class ExtClass:
    """Element of an ExtSpace, as coordinates in its frozen basis."""

    def __init__(self, space: "ExtSpace", coords):
        self.space = space
        f = space.field
        self.coords = tuple(f.coerce(c) for c in coords)
        if len(self.coords) != space.total_dim:
            raise ValidationError("class coordinate length mismatch")

    def __add__(self, other: "ExtClass") -> "ExtClass":
        f = self.space.field
        return ExtClass(self.space, [f.add(a, b) for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "ExtClass") -> "ExtClass":
        f = self.space.field
        return ExtClass(self.space, [f.sub(a, b) for a, b in zip(self.coords, other.coords)])

    def scale(self, c) -> "ExtClass":
        f = self.space.field
        c = f.coerce(c)
        return ExtClass(self.space, [f.mul(c, a) for a in self.coords])

    @property
    def is_zero(self) -> bool:
        f = self.space.field
        return all(f.is_zero(c) for c in self.coords)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExtClass) and self.space is other.space
                and self.coords == other.coords)

    def representative(self) -> Cocycle:
        """A cocycle representing the class (sum of basis representatives)."""
        f = self.space.field
        n = self.space.n
        degs = sorted({b.degree for b, c in zip(self.space.basis, self.coords)
                       if not f.is_zero(c)})
        if not degs:
            fi = self.space.resolution.free(self.space.i)
            return Cocycle(0, [n.free.zero] * fi.rank)
        if len(degs) > 1:
            raise ValidationError("mixed-degree class has no single representative")
        d = degs[0]
        rep = None
        for b, c in zip(self.space.basis, self.coords):
            if f.is_zero(c) or b.degree != d:
                continue
            piece = b.scale(c, n)
            rep = piece if rep is None else rep.add(piece)
        return rep

    def __repr__(self) -> str:
        return f"ExtClass{list(self.coords)}"


class ExtSpace:
    """Ext^i(M, N) with exact presentation, dimension data and cocycle basis."""

    def __init__(self, i: int, m: PresentedModule, n: PresentedModule,
                 res: FreeResolution | None = None):
        if i < 0:
            raise ValidationError("Ext index must be >= 0")
        ring = m.ring
        if n.ring != ring:
            raise ValidationError("Ext needs modules over one ring")
        self.i = i
        self.m = m
        self.n = n
        self.ring = ring
        self.field = ring.field
        self.resolution = res if res is not None else resolve(m, steps=i + 1)
        fi = self.resolution.free(i)
        fim1 = self.resolution.free(i - 1) if i >= 1 else FreeModule(ring, ())
        fip1 = self.resolution.free(i + 1)
        hi, _ = hom_ds(n, fi)
        him1, _ = hom_ds(n, fim1)
        hip1, _ = hom_ds(n, fip1)
        self.hi = hi
        # kernel of Hom(d_{i+1}, N) inside Hom(F_i, N)
        if fip1.rank == 0 or hip1.ngens == 0:
            zgens = [hi.free.basis_vec(t) for t in range(hi.ngens)]
        else:
            dnext = hom_transfer(self.resolution.diff(i + 1), n, hi, hip1)
            _, incl = kernel_of_map(dnext)
            zgens = incl.columns()
        # image of Hom(d_i, N)
        if i == 0 or him1.ngens == 0 or fi.rank == 0:
            bgens: list[Vec] = []
        else:
            dthis = hom_transfer(self.resolution.diff(i), n, him1, hi)
            bgens = [c for c in dthis.columns() if not c.is_zero]
        self.presentation = subquotient(hi, zgens, bgens) if hi.ngens else \
            PresentedModule.zero_module(ring)
        self._zgens = zgens
        self._bgens = bgens
        dim = self.presentation.krull_dim()
        self.finite = dim <= 0
        self.dims_by_degree: dict[int, int] = {}
        self.basis: list[Cocycle] = []
        self._deg_solver: dict[int, tuple] = {}
        if self.finite:
            self._build_basis()
        self.total_dim = sum(self.dims_by_degree.values()) if self.finite else None

    # -- degree support of a finite-length presentation -----------------------

    def _support_bound(self) -> tuple[int, int]:
        e = self.presentation
        if e.ngens == 0:
            return (0, -1)
        lts = e.rel_gb().lead_terms_by_component()
        ring = self.ring
        lo = min(e.gen_degrees)
        hi = lo - 1
        for comp in range(e.ngens):
            comp_lts = lts.get(comp, [])
            if any(all(x == 0 for x in l) for l in comp_lts):
                continue          # the whole component is killed
            bound = e.gen_degrees[comp]
            for v in range(ring.nvars):
                pure = None
                for l in comp_lts:
                    if l[v] > 0 and all(x == 0 for u, x in enumerate(l) if u != v):
                        pure = l[v] if pure is None else min(pure, l[v])
                if pure is None:
                    raise ValidationError("support bound requested for non-finite module")
                bound += (pure - 1) * ring.degrees[v]
            hi = max(hi, bound)
        return (lo, hi)

    def _build_basis(self):
        lo, hi = self._support_bound()
        fi = self.resolution.free(self.i)
        fip1 = self.resolution.free(self.i + 1)
        fim1 = self.resolution.free(self.i - 1) if self.i >= 1 else FreeModule(self.ring, ())
        f = self.field
        for d in range(lo, hi + 1):
            target_dim = self.presentation.hf(d)
            model = HomDegreeModel(self.n, fi, d)
            if model.dim == 0:
                if target_dim:
                    raise ValidationError("graded Ext dimensions disagree (internal)")
                continue
            model_next = HomDegreeModel(self.n, fip1, d)
            znext = model.compose_matrix(self.resolution.diff(self.i + 1), model_next) \
                if fip1.rank else []
            kernel = nullspace(f, znext, model.dim) if znext else \
                [[f.one if t == s else f.zero for s in range(model.dim)]
                 for t in range(model.dim)]
            brows = []
            if self.i >= 1 and fim1.rank:
                model_prev = HomDegreeModel(self.n, fim1, d)
                if model_prev.dim:
                    bmat = model_prev.compose_matrix(self.resolution.diff(self.i), model)
                    for s in range(model_prev.dim):
                        brows.append([bmat[r][s] for r in range(model.dim)])
            tracker = SpanTracker(f, model.dim)
            for b in brows:
                tracker.add(b)
            chosen = []
            for v in kernel:
                if tracker.add(v):
                    chosen.append(v)
            if len(chosen) != target_dim:
                raise ValidationError(
                    f"graded Ext dimension mismatch in degree {d}: "
                    f"{len(chosen)} vs {target_dim} (internal)")
            if target_dim:
                self.dims_by_degree[d] = target_dim
            start = len(self.basis)
            for v in chosen:
                self.basis.append(Cocycle(d, model.coords_to_cols(v)))
            self._deg_solver[d] = (model, chosen, brows, start)

    # -- class arithmetic ------------------------------------------------------

    def zero_class(self) -> ExtClass:
        return ExtClass(self, [self.field.zero] * (self.total_dim or 0))

    def class_from_cocycle(self, co: Cocycle, check: bool = True) -> ExtClass:
        """Coordinates of a cocycle in the frozen basis."""
        if not self.finite:
            raise ValidationError("cocycle coordinates need a finite-length Ext space")
        f = self.field
        coords = [f.zero] * self.total_dim
        d = co.degree
        if all(v.is_zero for v in co.cols):
            return ExtClass(self, coords)
        if check:
            nxt = co.compose_diff(self.resolution.diff(self.i + 1), self.n)
            for v in nxt.cols:
                if not self.n.element_is_zero(v):
                    raise ValidationError("not a cocycle: does not kill the next differential")
        if d not in self._deg_solver:
            # degree outside the support: must be a coboundary
            model = HomDegreeModel(self.n, self.resolution.free(self.i), d)
            vec = model.cols_to_coords(co.cols)
            brows = []
            fim1 = self.resolution.free(self.i - 1) if self.i >= 1 else None
            if fim1 is not None and fim1.rank:
                model_prev = HomDegreeModel(self.n, fim1, d)
                if model_prev.dim:
                    bmat = model_prev.compose_matrix(self.resolution.diff(self.i), model)
                    for s in range(model_prev.dim):
                        brows.append([bmat[r][s] for r in range(model.dim)])
            a_rows = [[brows[s][r] for s in range(len(brows))] for r in range(model.dim)]
            sol = solve_matrix(f, a_rows, [[x] for x in vec], len(brows)) \
                if brows else (None if any(not f.is_zero(x) for x in vec) else [])
            if sol is None:
                raise ValidationError("cocycle has a class outside the computed support")
            return ExtClass(self, coords)
        model, chosen, brows, start = self._deg_solver[d]
        vec = model.cols_to_coords(co.cols)
        ncols = len(chosen) + len(brows)
        a_rows = [[(chosen[s][r] if s < len(chosen) else brows[s - len(chosen)][r])
                   for s in range(ncols)] for r in range(model.dim)]
        sol = solve_matrix(f, a_rows, [[x] for x in vec], ncols)
        if sol is None:
            raise ValidationError("cocycle does not lie in kernel + coboundaries (internal)")
        for s in range(len(chosen)):
            coords[start + s] = sol[s][0]
        return ExtClass(self, coords)

    def basis_labels(self) -> list[tuple[int, int]]:
        """(degree, index-within-degree) labels of the frozen basis."""
        out = []
        seen: dict[int, int] = {}
        for b in self.basis:
            t = seen.get(b.degree, 0)
            out.append((b.degree, t))
            seen[b.degree] = t + 1
        return out

    def __repr__(self) -> str:
        if self.finite:
            return (f"Ext^{self.i} dim {self.total_dim} "
                    f"{{{', '.join(f'{d}:{v}' for d, v in sorted(self.dims_by_degree.items()))}}}")
        return f"Ext^{self.i} (infinite length, dim {self.presentation.krull_dim()})"


def ext(i: int, m: PresentedModule, n: PresentedModule,
        res: FreeResolution | None = None) -> ExtSpace:
    return ExtSpace(i, m, n, res)


def ext_window(space: ExtSpace, lo: int, hi: int) -> dict[int, int]:
    """Graded dimensions of (a possibly infinite) Ext space on a window."""
    return space.presentation.hilbert_function(lo, hi)


# -- Tor ----------------------------------------------------------------------------


class TorResult:
    def __init__(self, i: int, m: PresentedModule, n: PresentedModule):
        ring = m.ring
        self.i = i
        res = resolve(m, steps=i + 1)
        fi = res.free(i)
        fip1 = res.free(i + 1)
        ti = tensor_ds(n, fi)
        self.host = ti
        if fi.rank == 0:
            self.presentation = PresentedModule.zero_module(ring)
        else:
            if i == 0:
                zgens = [ti.free.basis_vec(t) for t in range(ti.ngens)]
            else:
                fim1 = res.free(i - 1)
                tim1 = tensor_ds(n, fim1)
                dmap = tensor_transfer(res.diff(i), n, ti, tim1)
                _, incl = kernel_of_map(dmap)
                zgens = incl.columns()
            if fip1.rank == 0:
                bgens = []
            else:
                tip1 = tensor_ds(n, fip1)
                dnext = tensor_transfer(res.diff(i + 1), n, tip1, ti)
                bgens = [c for c in dnext.columns() if not c.is_zero]
            self.presentation = subquotient(ti, zgens, bgens)
        dim = self.presentation.krull_dim()
        self.finite = dim <= 0
        self.is_zero = self.presentation.is_zero()

    def dims_on(self, lo: int, hi: int) -> dict[int, int]:
        return self.presentation.hilbert_function(lo, hi)


def tor(i: int, m: PresentedModule, n: PresentedModule) -> TorResult:
    return TorResult(i, m, n)


# -- comparison maps and functoriality ------------------------------------------------


def lift_map_through_columns(target_free: FreeModule, cols: list[Vec], v: Vec,
                             extra_rels: list[Vec] | None = None):
    """Coefficients c with v = sum c_j cols_j modulo extra relations; None if absent."""
    aux = list(cols) + list(extra_rels or [])
    gb = SubmoduleGB(target_free, aux)
    coeffs = gb.coeffs_of(v)
    if coeffs is None:
        return None
    return coeffs[: len(cols)]


def chain_comparison(res_src: FreeResolution, res_tgt: FreeResolution,
                     f: PModMap, upto: int) -> list[ModuleMap]:
    """Chain maps kappa_j : F_j(src) -> F_j(tgt) lifting f: M -> M'."""
    msrc, mtgt = res_src.module, res_tgt.module
    if (f.source.gen_degrees != msrc.gen_degrees
            or f.target.gen_degrees != mtgt.gen_degrees):
        raise ValidationError("comparison map does not match the resolutions")
    ring = msrc.ring
    # step 0: generators of F_0(src) -> M' -> coordinates in F_0(tgt)
    aug_src = res_src.f0_to_module            # Mmin(src) -> M
    aug_tgt = res_tgt.f0_to_module            # Mmin(tgt) -> M'
    tgt_cols = aug_tgt.columns()              # images of F_0(tgt) gens in M'.free
    kappas: list[ModuleMap] = []
    cols0 = []
    for j in range(res_src.f0.rank):
        v = f.apply_vec(aug_src.column(j))
        coeffs = lift_map_through_columns(mtgt.free, tgt_cols, v, list(mtgt.relations))
        if coeffs is None:
            raise ValidationError("cannot lift map through the augmentation")
        cols0.append(FreeModule(ring, res_tgt.f0.gen_degrees).from_entries(coeffs))
    k0 = ModuleMap(res_src.f0, res_tgt.f0,
                   [[cols0[j].entry(t) for j in range(res_src.f0.rank)]
                    for t in range(res_tgt.f0.rank)], check=False)
    kappas.append(k0)
    for step in range(1, upto + 1):
        d_src = res_src.diff(step)
        d_tgt = res_tgt.diff(step)
        prev = kappas[step - 1]
        need = prev.compose(d_src)            # F_step(src) -> F_{step-1}(tgt)
        cols = []
        tcols = d_tgt.columns()
        for j in range(d_src.source.rank):
            v = need.column(j)
            coeffs = lift_map_through_columns(d_tgt.target, tcols, v)
            if coeffs is None:
                raise ValidationError(f"chain lift failed at step {step}")
            cols.append(d_tgt.source.from_entries(coeffs))
        k = ModuleMap(d_src.source, d_tgt.source,
                      [[cols[j].entry(t) for j in range(d_src.source.rank)]
                       for t in range(d_tgt.source.rank)], check=False)
        kappas.append(k)
    return kappas


def ext_contra(f: PModMap, i: int, n: PresentedModule,
               src_space: ExtSpace | None = None,
               tgt_space: ExtSpace | None = None):
    """Ext^i(f, N) : Ext^i(M', N) -> Ext^i(M, N) for f : M -> M'.

    Returns (matrix over k, function ExtClass -> ExtClass).
    """
    m, mp = f.source, f.target
    sp_mp = tgt_space or ext(i, mp, n)
    sp_m = src_space or ext(i, m, n)
    kappas = chain_comparison(sp_m.resolution, sp_mp.resolution, f, i)
    ki = kappas[i]
    cols = []
    for b in sp_mp.basis:
        pulled = b.compose_diff(ki, n)
        cols.append(sp_m.class_from_cocycle(pulled).coords)
    field = n.ring.field
    mat = [[cols[j][r] for j in range(len(cols))] for r in range(sp_m.total_dim or 0)]

    def act(cls: ExtClass) -> ExtClass:
        if cls.space is not sp_mp:
            raise ValidationError("class belongs to a different Ext space")
        out = [field.zero] * (sp_m.total_dim or 0)
        for j, c in enumerate(cls.coords):
            if field.is_zero(c):
                continue
            for r in range(len(out)):
                out[r] = field.add(out[r], field.mul(c, mat[r][j]))
        return ExtClass(sp_m, out)

    return mat, act, sp_mp, sp_m


def ext_cov(g: PModMap, i: int, m: PresentedModule,
            src_space: ExtSpace | None = None,
            tgt_space: ExtSpace | None = None):
    """Ext^i(M, g) : Ext^i(M, N) -> Ext^i(M, N') for g : N -> N'."""
    n, npr = g.source, g.target
    sp_n = src_space or ext(i, m, n)
    sp_np = tgt_space or ext(i, m, npr, res=sp_n.resolution)
    field = m.ring.field
    cols = []
    for b in sp_n.basis:
        pushed = Cocycle(b.degree, [g.apply_vec(v) for v in b.cols])
        cols.append(sp_np.class_from_cocycle(pushed).coords)
    mat = [[cols[j][r] for j in range(len(cols))] for r in range(sp_np.total_dim or 0)]

    def act(cls: ExtClass) -> ExtClass:
        if cls.space is not sp_n:
            raise ValidationError("class belongs to a different Ext space")
        out = [field.zero] * (sp_np.total_dim or 0)
        for j, c in enumerate(cls.coords):
            if field.is_zero(c):
                continue
            for r in range(len(out)):
                out[r] = field.add(out[r], field.mul(c, mat[r][j]))
        return ExtClass(sp_np, out)

    return mat, act, sp_n, sp_np


# -- canonical module -------------------------------------------------------------------


def canonical_module(ring: GradedRing) -> PresentedModule:
    """omega = Ext^c_S(A, S(-sigma)), sigma = sum of variable degrees, c = codim.

    Computed as the cokernel of the transposed last ambient differential,
    twisted; for c = 0 this is S(-sigma) itself pushed to A.
    """
    amb = ring.ambient
    sigma = sum(amb.degrees)
    a_mod = PresentedModule.ring_module(ring)
    res = resolve_ambient(a_mod)
    c = amb.nvars - ring.dim()
    if res.length != c:
        raise ValidationError(
            "canonical module via the transposed presentation needs a "
            "Cohen-Macaulay ring (ambient projective dimension exceeds codimension)")
    if c == 0:
        return PresentedModule(ring, (sigma,))
    fc = res.free(c)
    dual_c = res.diff(c).transpose()
    # Hom(S(-a), S(-sigma)) = S(a - sigma), generated in degree sigma - a
    gen_degs = tuple(sigma + a for a in fc.dual().gen_degrees)
    free = FreeModule(ring, gen_degs)
    cols = []
    for j in range(dual_c.source.rank):
        entries = [dual_c.entries[t][j] for t in range(dual_c.target.rank)]
        cols.append(free.from_entries([ring._make(dict(p.terms)) for p in entries]))
    omega = PresentedModule(ring, gen_degs, cols)
    mm, _, _ = omega.minimalize()
    return mm


# -- four-term sequences and Yoneda classes ------------------------------------------------


class FourTermSequence:
    """0 -> K -> Y -> X -> N -> 0 with maps alpha, g, pi."""

    def __init__(self, k: PresentedModule, y: PresentedModule, x: PresentedModule,
                 n: PresentedModule, alpha: PModMap, g: PModMap, pi: PModMap):
        self.k, self.y, self.x, self.n = k, y, x, n
        self.alpha, self.g, self.pi = alpha, g, pi

    def certify(self) -> dict:
        """Exactness at all four spots, by exact kernel/image comparisons."""
        out = {}
        out["alpha injective"] = self.alpha.is_injective()
        out["pi surjective"] = self.pi.is_surjective()
        out["g o alpha = 0"] = self.g.compose(self.alpha).is_zero_map
        out["pi o g = 0"] = self.pi.compose(self.g).is_zero_map
        ker_g, incl_g = kernel_of_map(self.g)
        im_alpha_cols = [c for c in self.alpha.columns() if not c.is_zero]
        gb_alpha = SubmoduleGB(self.y.free, im_alpha_cols + list(self.y.relations))
        out["ker g = im alpha"] = all(gb_alpha.contains(incl_g.column(j))
                                      for j in range(ker_g.ngens))
        ker_pi, incl_pi = kernel_of_map(self.pi)
        im_g_cols = [c for c in self.g.columns() if not c.is_zero]
        gb_g = SubmoduleGB(self.x.free, im_g_cols + list(self.x.relations))
        out["ker pi = im g"] = all(gb_g.contains(incl_pi.column(j))
                                   for j in range(ker_pi.ngens))
        out["exact"] = all(out.values())
        return out


def four_term_class(seq: FourTermSequence, space: ExtSpace | None = None,
                    certify: bool = True) -> ExtClass:
    """Yoneda class of a four-term exact sequence in Ext^2(N, K)."""
    if certify:
        cert = seq.certify()
        if not cert["exact"]:
            raise ValidationError(f"sequence is not exact: {cert}")
    n, k = seq.n, seq.k
    sp = space or ext(2, n, k)
    res = sp.resolution
    # h0 : F_0 -> X lifting the augmentation through pi
    pi_cols = seq.pi.columns()
    aug = res.f0_to_module
    h0_cols = []
    for j in range(res.f0.rank):
        v = aug.column(j)
        coeffs = lift_map_through_columns(n.free, pi_cols, v, list(n.relations))
        if coeffs is None:
            raise ValidationError("pi is not surjective onto the resolved module")
        h0_cols.append(seq.x.free.from_entries(coeffs))
    # h1 : F_1 -> Y with g h1 = h0 d_1
    d1 = res.diff(1)
    g_cols = seq.g.columns()
    h1_cols = []
    for jp in range(d1.source.rank):
        acc = seq.x.free.zero
        for j in range(d1.target.rank):
            p = d1.entries[j][jp]
            if not p.is_zero:
                acc = acc + h0_cols[j].poly_mul(p)
        coeffs = lift_map_through_columns(seq.x.free, g_cols, acc, list(seq.x.relations))
        if coeffs is None:
            raise ValidationError("cannot pull h0 o d1 back through g")
        h1_cols.append(seq.y.free.from_entries(coeffs))
    # h2 : F_2 -> K with alpha h2 = h1 d_2
    d2 = res.diff(2)
    a_cols = seq.alpha.columns()
    h2_cols = []
    for jp in range(d2.source.rank):
        acc = seq.y.free.zero
        for j in range(d2.target.rank):
            p = d2.entries[j][jp]
            if not p.is_zero:
                acc = acc + h1_cols[j].poly_mul(p)
        coeffs = lift_map_through_columns(seq.y.free, a_cols, acc, list(seq.y.relations))
        if coeffs is None:
            raise ValidationError("cannot pull h1 o d2 back through alpha")
        h2_cols.append(k.free.from_entries(coeffs))
    co = Cocycle(0, h2_cols)
    return sp.class_from_cocycle(co)


def extension_from_class(cls: ExtClass):
    """Middle term of an extension 0 -> K -> E -> N -> 0 from a class in Ext^1(N, K).

    Returns (E, iota: K -> E, pi: E -> N).
    """
    sp = cls.space
    if sp.i != 1:
        raise ValidationError("extension_from_class needs an Ext^1 class")
    n, k = sp.m, sp.n
    res = sp.resolution
    phi = cls.representative()
    d1 = res.diff(1)
    ring = n.ring
    tw = phi.degree
    # a degree-tw class in Ext^1(N, K) is a degree-0 extension of N by K(tw)
    kk = k.twist(tw) if tw else k
    # E = (K (+) F_0) / < K-relations, (phi(v), -d1(v)) for v in F_1 basis >
    gd = tuple(kk.gen_degrees) + tuple(res.f0.gen_degrees)
    efree = FreeModule(ring, gd)
    rels: list[Vec] = []
    nk = kk.ngens
    for r in kk.relations:
        rels.append(Vec(efree, dict(r.terms)))
    f = ring.field
    for jp in range(d1.source.rank):
        terms: dict = dict(phi.cols[jp].terms)
        for (c, mono), x in d1.column(jp).terms.items():
            t = (nk + c, mono)
            s = f.sub(terms.get(t, f.zero), x)
            if f.is_zero(s):
                terms.pop(t, None)
            else:
                terms[t] = s
        rels.append(Vec(efree, terms))
    emod = PresentedModule(ring, gd, rels, check=False)
    iota = PModMap(kk, emod, [[ring.one if i == j else ring.zero for j in range(nk)]
                              for i in range(emod.ngens)])
    aug = res.f0_to_module
    pi_entries = [[ring.zero] * emod.ngens for _ in range(n.ngens)]
    for j in range(res.f0.rank):
        col = aug.column(j)
        for (c, mono), x in col.terms.items():
            pi_entries[c][nk + j] = pi_entries[c][nk + j] + Poly(ring, {mono: x})
    pi = PModMap(emod, n, pi_entries)
    return emod, iota, pi


def yoneda_class_of_extension(iota: PModMap, pi: PModMap,
                              space: ExtSpace | None = None) -> ExtClass:
    """Class of 0 -> K -> E -> N -> 0 in Ext^1(N, K).

    If the space's coefficient module is K0 and the sequence uses K = K0(t),
    the class is returned in internal degree t of Ext^1(N, K0).
    """
    k, e, n = iota.source, iota.target, pi.source
    sp = space or ext(1, n, k)
    tw = 0
    if k.gen_degrees != sp.n.gen_degrees:
        diffs = {a - b for a, b in zip(sp.n.gen_degrees, k.gen_degrees)}
        if len(k.gen_degrees) != len(sp.n.gen_degrees) or len(diffs) != 1:
            raise ValidationError("kernel module is not a twist of the space's coefficients")
        tw = diffs.pop()
    res = sp.resolution
    pi_cols = pi.columns()
    aug = res.f0_to_module
    h0_cols = []
    for j in range(res.f0.rank):
        coeffs = lift_map_through_columns(n.free, pi_cols, aug.column(j), list(n.relations))
        if coeffs is None:
            raise ValidationError("pi is not surjective")
        h0_cols.append(e.free.from_entries(coeffs))
    d1 = res.diff(1)
    i_cols = iota.columns()
    h1_cols = []
    for jp in range(d1.source.rank):
        acc = e.free.zero
        for j in range(d1.target.rank):
            p = d1.entries[j][jp]
            if not p.is_zero:
                acc = acc + h0_cols[j].poly_mul(p)
        coeffs = lift_map_through_columns(e.free, i_cols, acc, list(e.relations))
        if coeffs is None:
            raise ValidationError("cannot pull back through iota")
        col = k.free.from_entries(coeffs)
        h1_cols.append(Vec(sp.n.free, dict(col.terms)))
    co = Cocycle(tw, h1_cols)
    return sp.class_from_cocycle(co)


# -- duality helpers -----------------------------------------------------------------------


def ext_dual(n: PresentedModule, c: int, omega: PresentedModule | None = None) -> PresentedModule:
    """N^v = Ext^c(N, omega), as a presented module."""
    w = omega if omega is not None else canonical_module(n.ring)
    sp = ext(c, n, w)
    mm, _, _ = sp.presentation.minimalize()
    return mm


def omega_dual(m: PresentedModule, omega: PresentedModule | None = None):
    """Hom(M, omega) with its evaluation data (the Hom module object)."""
    from .modules import module_hom
    w = omega if omega is not None else canonical_module(m.ring)
    return module_hom(m, w)
