"""Square-zero lifting calculus for graded modules.

Given a surjection B' -> B of graded rings whose kernel J squares to zero,
a B-module N may or may not lift to B'.  The machinery here computes the
obstruction class in Ext^2_B(N, N (x) J) from a lifted presentation
(d1~ o d2~ factors through J), constructs a certified lifting when the
class vanishes, realizes the Ext^1 torsor on liftings, and cross-checks
everything against the four-term syzygy representative
0 -> N (x) J -> ker~ -> F0~ -> N -> 0.

Two shapes of input are supported.

* Ring mode: any small-ish square-zero surjection B' -> B and a module N
  over B.  Classes carry honest N (x) J coefficients.
* Coefficient mode: B = G (x) R and B' = G (x) R' for a small extension
  R' -> R of Artin local algebras, and a module flat over R.  Classes are
  decomposed along a k-basis of ker(R' -> R), one Ext class over the
  closed fiber G per kernel element, so that classes of different families
  with the same fiber are comparable coordinatewise (this is what base
  change and the lifting torsor act on).

The regular-quotient entry points (ob via the reduced maximal
Cohen-Macaulay approximation of N over A, the splitting test for pibar,
and the tangent comparison map sigma) live at the end, together with a
dense linear-algebra brute-force search over all module structures that
is used as an independent oracle at very small sizes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .cmapprox import ApproxTriple, HullTriple, certify_short_exact, mcm_approx_cm
from .errors import ComputationLimit, ValidationError
from .freemod import FreeModule, ModuleMap, Vec
from .homalg import (Cocycle, ExtClass, ExtSpace, FourTermSequence,
                     HomDegreeModel, canonical_module, chain_comparison, ext,
                     ext_contra, ext_cov, extension_from_class,
                     lift_map_through_columns, omega_dual, tor,
                     yoneda_class_of_extension)
from .linalg import nullspace, rank as k_rank, solve
from .modules import (PModMap, PresentedModule, SubmoduleGB, apply_ring_map,
                      apply_ring_map_to_map, find_isomorphism, hom_space_degree,
                      kernel_of_map, restrict_scalars)
from .resolution import (FreeResolution, certify_resolution, is_mcm,
                         is_regular_sequence, resolve)
from .ring import GradedRing, Poly, RingMap, tensor_ring


# -- Artin coefficient algebras -----------------------------------------------------


class ArtinAlgebra:
    """A finite-dimensional graded quotient of a polynomial algebra over k.

    Positivity of the variable degrees makes it local with residue field k
    automatically; the monomial basis comes degree-ascending from the
    standard monomials.
    """

    def __init__(self, ring: GradedRing):
        if not ring.is_artinian():
            raise ValidationError("coefficient algebra must be Artinian")
        self.ring = ring
        self.basis = ring.k_basis()                    # exponent tuples
        self.dim = len(self.basis)
        self.basis_degrees = [ring.mono_degree(e) for e in self.basis]
        self.max_ideal_basis = [e for e, d in zip(self.basis, self.basis_degrees) if d > 0]

    @property
    def field(self):
        return self.ring.field

    def __repr__(self) -> str:
        return f"ArtinAlgebra({','.join(self.ring.names)}; dim {self.dim})"


class SmallExtension:
    """A surjection R' -> R of Artin algebras on the same variables with
    m_{R'} . I = 0 for the kernel I, so I is a k-vector space.

    The kernel basis is computed degreewise: standard monomials of R' that
    die in R, closed under the nullspace of the reduction map.
    """

    def __init__(self, upstairs: ArtinAlgebra, downstairs: ArtinAlgebra):
        rp, r = upstairs.ring, downstairs.ring
        if rp.names != r.names or rp.degrees != r.degrees:
            raise ValidationError("small extension needs one variable set on both sides")
        if rp.field != r.field:
            raise ValidationError("small extension over mixed fields")
        for g in rp.ideal_gens:
            if not r._make(dict(g.terms)).is_zero:
                raise ValidationError("upstairs ideal is not contained downstairs")
        self.upstairs = upstairs
        self.downstairs = downstairs
        f = rp.field
        kernel: list[Poly] = []
        down_by_deg: dict[int, list] = {}
        for e, d in zip(downstairs.basis, downstairs.basis_degrees):
            down_by_deg.setdefault(d, []).append(e)
        up_by_deg: dict[int, list] = {}
        for e, d in zip(upstairs.basis, upstairs.basis_degrees):
            up_by_deg.setdefault(d, []).append(e)
        for d in sorted(up_by_deg):
            up = up_by_deg[d]
            down = down_by_deg.get(d, [])
            if not down:
                kernel.extend(Poly(rp, {e: f.one}) for e in up)
                continue
            dindex = {e: i for i, e in enumerate(down)}
            mat = [[f.zero] * len(up) for _ in down]
            for j, e in enumerate(up):
                img = r._make({e: f.one})
                for ee, c in img.terms.items():
                    mat[dindex[ee]][j] = c
            for v in nullspace(f, mat, len(up)):
                terms = {up[j]: v[j] for j in range(len(up)) if not f.is_zero(v[j])}
                if terms:
                    kernel.append(Poly(rp, terms))
        self.kernel_basis = kernel
        self.kernel_degrees = [p.degree() for p in kernel]
        self.labels = [str(p) for p in kernel]
        if upstairs.dim != downstairs.dim + len(kernel):
            raise ValidationError("kernel dimension bookkeeping failed")
        for i in range(rp.nvars):
            for b in kernel:
                if not (rp.var(i) * b).is_zero:
                    raise ValidationError(
                        f"extension is not small: {rp.names[i]} * ({b}) != 0")
        self._solvers: dict[int, tuple] = {}

    def kernel_coords(self, p: Poly):
        """Coordinates of p (a poly in R') in the kernel basis; None if outside."""
        f = self.upstairs.ring.field
        out = [f.zero] * len(self.kernel_basis)
        if p.is_zero:
            return out
        d = p.degree()
        if d not in self._solvers:
            monos = [e for e, dd in zip(self.upstairs.basis, self.upstairs.basis_degrees)
                     if dd == d]
            index = {e: i for i, e in enumerate(monos)}
            alphas = [a for a, dd in enumerate(self.kernel_degrees) if dd == d]
            rows = [[self.kernel_basis[a].terms.get(e, f.zero) for a in alphas]
                    for e in monos]
            self._solvers[d] = (monos, index, alphas, rows)
        monos, index, alphas, rows = self._solvers[d]
        if not alphas:
            return None
        b = [f.zero] * len(monos)
        for e, c in p.terms.items():
            if e not in index:
                return None
            b[index[e]] = c
        x = solve(f, rows, b, len(alphas))
        if x is None:
            return None
        for a, c in zip(alphas, x):
            out[a] = c
        return out


class ExtensionSquare:
    """A map of small extensions: tau': R' -> S' descending to R -> S,
    with the induced k-linear map on kernels recorded as a matrix."""

    def __init__(self, src: SmallExtension, tgt: SmallExtension, images):
        self.src = src
        self.tgt = tgt
        self.tau_up = RingMap(src.upstairs.ring, tgt.upstairs.ring, images)
        down_imgs = [tgt.downstairs.ring._make(dict(img.terms))
                     for img in self.tau_up.images]
        self.tau_down = RingMap(src.downstairs.ring, tgt.downstairs.ring, down_imgs)
        f = src.upstairs.ring.field
        mat = [[f.zero] * len(src.kernel_basis) for _ in tgt.kernel_basis]
        for a, e in enumerate(src.kernel_basis):
            img = self.tau_up(e)
            coords = tgt.kernel_coords(img)
            if coords is None:
                raise ValidationError("square does not carry the kernel into the kernel")
            for b, c in enumerate(coords):
                mat[b][a] = c
        self.kernel_matrix = mat


# -- square-zero ring extensions ----------------------------------------------------


@dataclass
class CoefficientData:
    small_ext: SmallExtension
    geom: GradedRing
    n_geom_vars: int
    kernel_lifts: list          # kernel basis as elements of the upstairs tensor ring
    kernel_degrees: list
    labels: list


class RingExtension:
    """A surjection B' -> B of graded quotients of one polynomial ring,
    with square-zero kernel J.  ``small`` records whether the whole
    maximal ideal kills J (true in pure coefficient cases, false e.g.
    for A/J^2 -> A/J)."""

    def __init__(self, upstairs: GradedRing, downstairs: GradedRing,
                 jgens=None, coeff: CoefficientData | None = None):
        if upstairs.names != downstairs.names or upstairs.degrees != downstairs.degrees:
            raise ValidationError("ring extension needs one variable set on both sides")
        if upstairs.field != downstairs.field:
            raise ValidationError("ring extension over mixed fields")
        for g in upstairs.ideal_gens:
            if not downstairs._make(dict(g.terms)).is_zero:
                raise ValidationError("upstairs ideal is not contained downstairs")
        self.upstairs = upstairs
        self.downstairs = downstairs
        self.field = upstairs.field
        if jgens is None:
            jgens = []
            for g in downstairs.ideal_gens:
                p = upstairs._make(dict(g.terms))
                if not p.is_zero:
                    jgens.append(p)
        else:
            jgens = [upstairs._make(dict(g.terms)) for g in jgens]
            jgens = [g for g in jgens if not g.is_zero]
        self.jgens = jgens
        for i, gi in enumerate(jgens):
            for gj in jgens[i:]:
                if not (gi * gj).is_zero:
                    raise ValidationError("kernel does not square to zero")
        self.small = all((upstairs.var(i) * g).is_zero
                         for i in range(upstairs.nvars) for g in jgens)
        self.coeff = coeff
        self._jmod: PresentedModule | None = None
        self._jgb: SubmoduleGB | None = None
        self._nj_cache: dict[int, tuple] = {}
        self._space_cache: dict[tuple, ExtSpace] = {}
        self._down_map = RingMap(upstairs, downstairs,
                                 [downstairs.var(i) for i in range(downstairs.nvars)],
                                 check=False)

    def lift(self, p: Poly) -> Poly:
        return self.upstairs._make(dict(p.terms))

    def drop(self, p: Poly) -> Poly:
        return self.downstairs._make(dict(p.terms))

    def __repr__(self) -> str:
        kind = "coefficient" if self.coeff else ("small" if self.small else "square-zero")
        return f"RingExtension({kind}; J = ({', '.join(str(g) for g in self.jgens)}))"


def ring_extension(upstairs: GradedRing, downstairs: GradedRing,
                   jgens=None) -> RingExtension:
    return RingExtension(upstairs, downstairs, jgens=jgens)


def coefficient_extension(geom: GradedRing | None, se: SmallExtension) -> RingExtension:
    """The induced surjection G (x) R' -> G (x) R; geom None means the pure
    module case B' = R', B = R (no fixed-fiber coordinates there)."""
    if geom is None:
        return RingExtension(se.upstairs.ring, se.downstairs.ring,
                             jgens=list(se.kernel_basis))
    bp, _, _, _ = tensor_ring(geom, se.upstairs.ring)
    b, _, _, _ = tensor_ring(geom, se.downstairs.ring)
    ng = geom.nvars
    pad = (0,) * ng
    lifts = [bp._make({pad + e: c for e, c in p.terms.items()}) for p in se.kernel_basis]
    coeff = CoefficientData(small_ext=se, geom=geom, n_geom_vars=ng,
                            kernel_lifts=lifts, kernel_degrees=list(se.kernel_degrees),
                            labels=list(se.labels))
    return RingExtension(bp, b, jgens=lifts, coeff=coeff)


def regular_quotient_extension(a: GradedRing, jpolys,
                               downstairs: GradedRing | None = None) -> RingExtension:
    """A/J^2 -> A/J for an ideal J of A given by generators."""
    jp = [a.parse(p) if isinstance(p, str) else p for p in jpolys]
    amb = [p.lift_to_ambient() for p in jp]
    rels_down = list(a.ideal_gens) + amb
    rels_up = list(a.ideal_gens) + [amb[i] * amb[j] for i in range(len(amb))
                                    for j in range(i, len(amb))]
    bp = GradedRing(a.field, a.names, a.degrees, a.order, rels_up)
    b_built = GradedRing(a.field, a.names, a.degrees, a.order, rels_down)
    if downstairs is not None:
        if downstairs != b_built:
            raise ValidationError("module ring does not match A/J")
        b_built = downstairs
    return RingExtension(bp, b_built, jgens=[bp._make(dict(p.terms)) for p in jp])


# -- the kernel and N (x) J as presented modules ------------------------------------


def _kernel_module(pr: RingExtension) -> PresentedModule:
    """J as a module over the downstairs ring: generators pr.jgens, relations
    the upstairs syzygies (J^2 = 0 makes the action factor through B)."""
    if pr._jmod is not None:
        return pr._jmod
    bp, b = pr.upstairs, pr.downstairs
    degs = tuple(g.degree() for g in pr.jgens)
    src = PresentedModule(bp, degs)
    tgt = PresentedModule.ring_module(bp)
    f = PModMap(src, tgt, [[g for g in pr.jgens]])
    _, incl = kernel_of_map(f)
    # the syzygies of the jgens over the upstairs ring are the inclusion's
    # columns; reduced, they present J as a downstairs module (J^2 = 0)
    jfree = FreeModule(b, degs)
    rels = []
    for j in range(incl.source.ngens):
        col = incl.column(j)
        rels.append(jfree._make(dict(col.terms)))
    pr._jmod = PresentedModule(b, degs, [r for r in rels if not r.is_zero], check=False)
    return pr._jmod


def module_tensor(m: PresentedModule, n: PresentedModule):
    """M (x)_B N presented on generator pairs; returns (module, pair index)."""
    ring = m.ring
    pairs = [(i, j) for i in range(m.ngens) for j in range(n.ngens)]
    index = {p: t for t, p in enumerate(pairs)}
    gd = tuple(m.gen_degrees[i] + n.gen_degrees[j] for (i, j) in pairs)
    free = FreeModule(ring, gd)
    rels = []
    for r in m.relations:
        for j in range(n.ngens):
            rels.append(free._make({(index[(i, j)], e): c
                                    for (i, e), c in r.terms.items()}))
    for r in n.relations:
        for i in range(m.ngens):
            rels.append(free._make({(index[(i, j)], e): c
                                    for (j, e), c in r.terms.items()}))
    return PresentedModule(ring, gd, [r for r in rels if not r.is_zero],
                           check=False), index


def _nj_module(pr: RingExtension, n: PresentedModule):
    key = id(n)
    if key not in pr._nj_cache:
        jmod = _kernel_module(pr)
        pr._nj_cache[key] = module_tensor(n, jmod) + (n,)
    nj, idx, _ = pr._nj_cache[key]
    return nj, idx


def _ring_space(pr: RingExtension, n: PresentedModule, i: int) -> ExtSpace:
    key = (i, id(n))
    if key not in pr._space_cache:
        nj, _ = _nj_module(pr, n)
        pr._space_cache[key] = ExtSpace(i, n, nj, res=resolve(n, 3))
    return pr._space_cache[key]


# -- families over Artin coefficients -----------------------------------------------


class FamilyModule:
    """A module over B = G (x) R with fixed closed fiber over G.

    Construction certifies flatness over the Artin coefficients (Tor_1
    against B/m_R B vanishes, plus the Hilbert-function convolution
    identity on a window) and matches the reduced presentation to the
    given fiber module through an explicit graded isomorphism.
    """

    def __init__(self, geom: GradedRing, base: ArtinAlgebra,
                 module: PresentedModule, fiber: PresentedModule,
                 steps: int = 3, certify: bool = True,
                 resolution: FreeResolution | None = None):
        if fiber.ring != geom:
            raise ValidationError("fiber must live over the geometric ring")
        self.geom = geom
        self.base = base
        self.module = module
        self.fiber = fiber
        self.ring = module.ring
        ng = geom.nvars
        if self.ring.names[:ng] != geom.names or \
                self.ring.names[ng:] != base.ring.names:
            raise ValidationError("family ring must be geom (x) base")
        self.proj = RingMap(self.ring, geom,
                            [geom.var(i) for i in range(ng)] + [geom.zero] * base.ring.nvars,
                            check=False)
        self.resolution = resolution if resolution is not None else resolve(module, steps)
        res = self.resolution
        f0g = FreeModule(geom, res.f0.gen_degrees)
        maps = []
        prev = f0g
        for i in range(1, res.length + 1):
            d = res.diff(i)
            srcg = FreeModule(geom, d.source.gen_degrees)
            ent = [[self.proj(d.entries[t][s]) for s in range(d.source.rank)]
                   for t in range(d.target.rank)]
            maps.append(ModuleMap(srcg, prev, ent, check=False))
            prev = srcg
        d1cols = maps[0].columns() if maps else []
        self.n_red = PresentedModule(geom, f0g.gen_degrees,
                                     [c for c in d1cols if not c.is_zero], check=False)
        self.fiber_res = FreeResolution(self.n_red, f0g, maps,
                                        f0_to_module=PModMap.identity(self.n_red),
                                        truncated=True)
        iso = find_isomorphism(self.n_red, fiber)
        if iso is None:
            raise ValidationError("reduced family does not match the given fiber")
        self.iso = iso                      # n_red -> fiber
        self.iso_inv = iso.inverse()        # fiber -> n_red
        # reduction on the original (non-minimal) generators, for maps
        self.red_raw = apply_ring_map(module, self.proj, geom)
        if resolution is not None:
            # prescribed resolution: its cover must be the module's own gens
            if list(res.f0.gen_degrees) != list(module.gen_degrees):
                raise ValidationError("prescribed resolution must cover the given gens")
            one, zero = self.field.one, self.field.zero
            red_min = PModMap(self.red_raw, self.n_red,
                              [[geom.scalar(one) if t == s else geom.scalar(zero)
                                for s in range(module.ngens)]
                               for t in range(module.ngens)])
        else:
            to_min = module.minimalize()[1]
            red_min = apply_ring_map_to_map(to_min, self.proj, self.red_raw, self.n_red)
        self.gens_to_fiber = self.iso.compose(red_min)     # red_raw -> fiber
        self._kappa: dict[int, list] = {}
        self._kappa_rev: dict[int, list] = {}
        self.certificates: dict = {}
        if certify:
            self._certify_flat()

    def _certify_flat(self):
        ng = self.geom.nvars
        nv = self.ring.nvars
        f1 = FreeModule(self.ring, (0,))
        cols = [f1._make({(0, tuple(1 if k == ng + i else 0 for k in range(nv))):
                          self.field.one})
                for i in range(self.base.ring.nvars)]
        gmod = PresentedModule(self.ring, (0,), cols, check=False)
        t1 = tor(1, self.module, gmod)
        self.certificates["tor1 against closed fiber"] = t1.is_zero
        if not t1.is_zero:
            raise ValidationError("family is not flat over its Artin base (Tor_1 != 0)")
        lo, hi = self.module.default_window(steps=1)
        ok = True
        for d in range(lo, hi + 1):
            want = sum(self.fiber.hf(d - bd) for bd in self.base.basis_degrees)
            if self.module.hf(d) != want:
                ok = False
                break
        self.certificates["Hilbert convolution window"] = [lo, hi]
        if not ok:
            raise ValidationError("family Hilbert function does not tensor over the base")
        cert = certify_resolution(self.fiber_res)
        self.certificates["reduced resolution exact"] = cert["exact"]
        if not cert["exact"]:
            raise ValidationError("reduced family resolution failed its exactness window")

    @property
    def field(self):
        return self.ring.field

    def canonical_res(self) -> FreeResolution:
        return resolve(self.fiber, 3)

    def fiber_space(self, i: int) -> ExtSpace:
        cache = getattr(self.fiber, "_deform_spaces", None)
        if cache is None:
            cache = {}
            self.fiber._deform_spaces = cache
        if i not in cache:
            cache[i] = ExtSpace(i, self.fiber, self.fiber, res=self.canonical_res())
        return cache[i]

    def kappa(self, upto: int) -> list:
        """Chain maps F(canonical fiber res) -> F(reduced family res)."""
        if upto not in self._kappa:
            self._kappa[upto] = chain_comparison(self.canonical_res(), self.fiber_res,
                                                 self.iso_inv, upto)
        return self._kappa[upto]

    def kappa_rev(self, upto: int) -> list:
        if upto not in self._kappa_rev:
            self._kappa_rev[upto] = chain_comparison(self.fiber_res, self.canonical_res(),
                                                     self.iso, upto)
        return self._kappa_rev[upto]

    def __repr__(self) -> str:
        return f"FamilyModule(mu={self.resolution.f0.rank}, base dim {self.base.dim})"


def trivial_family(geom: GradedRing, base: ArtinAlgebra,
                   fiber: PresentedModule) -> FamilyModule:
    """The product family: the fiber presentation with constant coefficients."""
    t, _, _, _ = tensor_ring(geom, base.ring)
    pad = (0,) * base.ring.nvars
    free = FreeModule(t, fiber.gen_degrees)
    rels = [free._make({(i, e + pad): c for (i, e), c in r.terms.items()})
            for r in fiber.relations]
    module = PresentedModule(t, fiber.gen_degrees, rels, check=False)
    return FamilyModule(geom, base, module, fiber)


def family_from_matrix(geom: GradedRing, base: ArtinAlgebra, fiber: PresentedModule,
                       gen_degrees, columns) -> FamilyModule:
    """Family given by an explicit relation matrix over geom (x) base."""
    t, _, _, _ = tensor_ring(geom, base.ring)
    module = PresentedModule.from_matrix(t, gen_degrees, columns)
    return FamilyModule(geom, base, module, fiber)


# -- obstruction classes ------------------------------------------------------------


@dataclass
class ObstructionClass:
    """An element of Ext^i(N, N (x) J); i = 2 for obstructions, i = 1 for
    torsor differences.  Coefficient mode carries one class over the closed
    fiber per kernel-basis element; ring mode a single class."""

    i: int
    labels: tuple
    degrees: tuple
    components: tuple | None = None
    ring_class: ExtClass | None = None
    space: ExtSpace | None = None
    report: dict = dc_field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        if self.components is not None:
            return all(c.is_zero for c in self.components)
        return self.ring_class.is_zero

    def coords(self):
        if self.components is not None:
            return tuple(c.coords for c in self.components)
        return self.ring_class.coords

    def same_as(self, other: "ObstructionClass") -> bool:
        return self.coords() == other.coords()

    def add(self, other: "ObstructionClass") -> "ObstructionClass":
        if self.components is not None:
            comp = tuple(a + b for a, b in zip(self.components, other.components))
            return ObstructionClass(self.i, self.labels, self.degrees, comp,
                                    space=self.space)
        return ObstructionClass(self.i, self.labels, self.degrees, None,
                                self.ring_class + other.ring_class, self.space)

    def neg(self) -> "ObstructionClass":
        if self.components is not None:
            comp = tuple(c.scale(self.space.field.neg(self.space.field.one))
                         for c in self.components)
            return ObstructionClass(self.i, self.labels, self.degrees, comp,
                                    space=self.space)
        f = self.space.field
        return ObstructionClass(self.i, self.labels, self.degrees, None,
                                self.ring_class.scale(f.neg(f.one)), self.space)

    def __repr__(self) -> str:
        if self.is_zero:
            return f"ObstructionClass(i={self.i}, zero)"
        if self.components is not None:
            nz = [l for l, c in zip(self.labels, self.components) if not c.is_zero]
            return f"ObstructionClass(i={self.i}, nonzero at {nz})"
        return f"ObstructionClass(i={self.i}, {self.ring_class})"


# -- lifting the differentials ------------------------------------------------------


def _lift_module_map(pr: RingExtension, d: ModuleMap) -> ModuleMap:
    bp = pr.upstairs
    src = FreeModule(bp, d.source.gen_degrees)
    tgt = FreeModule(bp, d.target.gen_degrees)
    ent = [[pr.lift(d.entries[t][s]) for s in range(d.source.rank)]
           for t in range(d.target.rank)]
    return ModuleMap(src, tgt, ent, check=False)


def _perturbation(pr: RingExtension, mm: ModuleMap, which: str) -> ModuleMap | None:
    """A deterministic J-valued homogeneous perturbation of one entry, used to
    re-verify independence of the lift choice.  None when the lift is unique."""
    bp = pr.upstairs
    entries = [(t, s) for t in range(mm.target.rank) for s in range(mm.source.rank)]
    if which == "last":
        entries = entries[::-1]
    for (t, s) in entries:
        dd = mm.source.gen_degrees[s] - mm.target.gen_degrees[t]
        for g in pr.jgens:
            rest = dd - g.degree()
            if rest < 0:
                continue
            monos = bp.std_monomials_of_degree(rest)
            if not monos:
                continue
            p = bp.monomial(monos[0], bp.field.one) * g
            if p.is_zero:
                continue
            ent = [list(row) for row in mm.entries]
            ent[t][s] = ent[t][s] + p
            return ModuleMap(mm.source, mm.target, ent, check=False)
    return None


def _push_cols(cols: list[Vec], mm: ModuleMap, value_free: FreeModule) -> list[Vec]:
    """Columns of (value-map) o mm where cols[t] is the value on mm.target's
    generator t.  Everything happens in value_free."""
    out = []
    for j in range(mm.source.rank):
        acc = value_free.zero
        for t in range(mm.target.rank):
            p = mm.entries[t][j]
            if not p.is_zero and not cols[t].is_zero:
                acc = acc + cols[t].poly_mul(p)
        out.append(acc)
    return out


def _coeff_matrices(pr: RingExtension, mm: ModuleMap):
    """Decompose a J-valued map of upstairs free modules along the kernel
    basis of the coefficient extension: one matrix over the closed fiber
    per basis element."""
    cd = pr.coeff
    se = cd.small_ext
    geom = cd.geom
    ng = cd.n_geom_vars
    f = pr.field
    nals = len(se.kernel_basis)
    rp = se.upstairs.ring
    mats = [[[geom.zero for _ in range(mm.source.rank)]
             for _ in range(mm.target.rank)] for _ in range(nals)]
    for t in range(mm.target.rank):
        for s in range(mm.source.rank):
            g = mm.entries[t][s]
            if g.is_zero:
                continue
            slices: dict[tuple, dict] = {}
            for e, c in g.terms.items():
                slices.setdefault(e[:ng], {})[e[ng:]] = c
            accum = [dict() for _ in range(nals)]
            for eg, rterms in slices.items():
                coords = se.kernel_coords(rp._make(dict(rterms)))
                if coords is None:
                    raise ValidationError("matrix entry is not in the kernel ideal")
                for a, lam in enumerate(coords):
                    if not f.is_zero(lam):
                        accum[a][eg] = f.add(accum[a].get(eg, f.zero), lam)
            for a in range(nals):
                if accum[a]:
                    mats[a][t][s] = geom._make({e: c for e, c in accum[a].items()
                                                if not f.is_zero(c)})
    return mats


def _coeff_classes(fam: FamilyModule, pr: RingExtension, mats, i: int,
                   check: bool = True):
    """Per-kernel-element cocycles F_i(reduced) -> fiber, transported to the
    canonical fiber resolution and read off as Ext classes."""
    cd = pr.coeff
    sp = fam.fiber_space(i)
    kap = fam.kappa(i)[i]
    classes = []
    for a, mat in enumerate(mats):
        cols_red = []
        for s in range(fam.fiber_res.free(i).rank):
            v = fam.n_red.free._make({(t, e): c
                                      for t in range(fam.fiber_res.free(0).rank)
                                      for e, c in mat[t][s].terms.items()})
            cols_red.append(fam.iso.apply_vec(v))
        cols = _push_cols(cols_red, kap, fam.fiber.free)
        co = Cocycle(-cd.kernel_degrees[a], cols)
        classes.append(sp.class_from_cocycle(co, check=check))
    return classes


def _ring_cocycle_cols(pr: RingExtension, n: PresentedModule, mm: ModuleMap):
    """Columns in (N (x) J).free for a J-valued map F_i -> F_0 upstairs, where
    F_0 covers N.  Decomposition is along the chosen J-generators; its
    ambiguity is exactly the recorded J-relations."""
    nj, idx = _nj_module(pr, n)
    bp = pr.upstairs
    if pr._jgb is None:
        f1 = FreeModule(bp, (0,))
        pr._jgb = SubmoduleGB(f1, [f1._make({(0, e): c for e, c in g.terms.items()})
                                   for g in pr.jgens])
    f1 = pr._jgb.free
    cols = []
    for s in range(mm.source.rank):
        terms: dict = {}
        f = pr.field
        for t in range(mm.target.rank):
            g = mm.entries[t][s]
            if g.is_zero:
                continue
            coeffs = pr._jgb.coeffs_of(f1._make({(0, e): c for e, c in g.terms.items()}))
            if coeffs is None:
                raise ValidationError("matrix entry is not in the kernel ideal")
            for u, cu in enumerate(coeffs):
                cd = pr.drop(cu)
                for e, c in cd.terms.items():
                    key = (idx[(t, u)], e)
                    val = f.add(terms.get(key, f.zero), c)
                    if f.is_zero(val):
                        terms.pop(key, None)
                    else:
                        terms[key] = val
        cols.append(nj.free._make(terms))
    return cols


# -- the obstruction ----------------------------------------------------------------


def obstruction(pr: RingExtension, fam, recheck: bool = True) -> ObstructionClass:
    """Obstruction to lifting across pr: the class of the composite of lifted
    differentials d1~ o d2~ read through the kernel.

    ``fam`` is a FamilyModule in coefficient mode, or a plain module over
    the downstairs ring otherwise.  The class is recomputed from perturbed
    lifts when ``recheck`` is set, certifying lift independence.
    """
    if isinstance(fam, FamilyModule) and pr.coeff is not None:
        return _coeff_obstruction(pr, fam, recheck)
    if isinstance(fam, FamilyModule):
        fam = fam.module
    return _ring_obstruction(pr, fam, recheck)


def _eta(pr: RingExtension, res: FreeResolution, perturb: bool = False):
    d1t = _lift_module_map(pr, res.diff(1))
    d2t = _lift_module_map(pr, res.diff(2))
    if perturb:
        p1 = _perturbation(pr, d1t, "first")
        p2 = _perturbation(pr, d2t, "last")
        d1t = p1 if p1 is not None else d1t
        d2t = p2 if p2 is not None else d2t
    eta = d1t.compose(d2t)
    for t in range(eta.target.rank):
        for s in range(eta.source.rank):
            if not pr.drop(eta.entries[t][s]).is_zero:
                raise ValidationError("lifted differentials do not square into the kernel")
    return d1t, d2t, eta


def _coeff_obstruction(pr: RingExtension, fam: FamilyModule,
                       recheck: bool) -> ObstructionClass:
    if fam.ring != pr.downstairs:
        raise ValidationError("family does not live over the extension's downstairs ring")
    cd = pr.coeff
    _, _, eta = _eta(pr, fam.resolution)
    mats = _coeff_matrices(pr, eta)
    classes = _coeff_classes(fam, pr, mats, 2)
    if recheck:
        _, _, eta2 = _eta(pr, fam.resolution, perturb=True)
        again = _coeff_classes(fam, pr, _coeff_matrices(pr, eta2), 2)
        if [c.coords for c in again] != [c.coords for c in classes]:
            raise ValidationError("obstruction class depended on the choice of lift")
    return ObstructionClass(2, tuple(cd.labels), tuple(cd.kernel_degrees),
                            tuple(classes), space=fam.fiber_space(2))


def _ring_obstruction(pr: RingExtension, n: PresentedModule,
                      recheck: bool) -> ObstructionClass:
    if n.ring != pr.downstairs:
        raise ValidationError("module does not live over the extension's downstairs ring")
    res = resolve(n, 3)
    _, _, eta = _eta(pr, res)
    sp = _ring_space(pr, n, 2)
    cols = _ring_cocycle_cols(pr, n, eta)
    cls = sp.class_from_cocycle(Cocycle(0, cols), check=True)
    if recheck:
        _, _, eta2 = _eta(pr, res, perturb=True)
        cls2 = sp.class_from_cocycle(Cocycle(0, _ring_cocycle_cols(pr, n, eta2)),
                                     check=True)
        if cls2.coords != cls.coords:
            raise ValidationError("obstruction class depended on the choice of lift")
    labels = tuple(str(g) for g in pr.jgens)
    degrees = tuple(g.degree() for g in pr.jgens)
    return ObstructionClass(2, labels, degrees, None, cls, sp)


# -- liftings -----------------------------------------------------------------------


@dataclass
class Lifting:
    problem: RingExtension
    family: object                      # FamilyModule or the downstairs module
    module: PresentedModule             # over the upstairs ring
    dmap: ModuleMap                     # F1 -> F0 upstairs; module = coker
    certificates: dict = dc_field(default_factory=dict)


@dataclass
class LiftResult:
    status: str                         # "lifted" | "obstructed"
    lifting: Lifting | None
    obstruction: ObstructionClass

    @property
    def lifted(self) -> bool:
        return self.status == "lifted"


def _down_module(fam) -> PresentedModule:
    return fam.module if isinstance(fam, FamilyModule) else fam


def _base_res(pr: RingExtension, fam) -> FreeResolution:
    if isinstance(fam, FamilyModule):
        return fam.resolution
    return resolve(fam, 3)


def _certify_lifting(pr: RingExtension, fam, dmap: ModuleMap,
                     nprime: PresentedModule) -> dict:
    certs: dict = {}
    res = _base_res(pr, fam)
    d1 = res.diff(1)
    same = all(pr.drop(dmap.entries[t][s]) == d1.entries[t][s]
               for t in range(dmap.target.rank) for s in range(dmap.source.rank))
    certs["reduces to the base presentation"] = same
    if not same:
        raise ValidationError("candidate lifting does not reduce to the base module")
    bp = pr.upstairs
    f1 = FreeModule(bp, (0,))
    bmod = PresentedModule(bp, (0,),
                           [f1._make({(0, e): c for e, c in g.terms.items()})
                            for g in pr.jgens], check=False)
    certs["Tor_1 against B vanishes"] = tor(1, nprime, bmod).is_zero
    if not certs["Tor_1 against B vanishes"]:
        raise ValidationError("candidate lifting has torsion against the quotient")
    nd = _down_module(fam)
    lo, hi = nd.default_window(steps=1)
    hi += max([g.degree() for g in pr.jgens] or [0])
    if isinstance(fam, FamilyModule):
        se = pr.coeff.small_ext
        ok = all(nprime.hf(d) == sum(fam.fiber.hf(d - bd)
                                     for bd in se.upstairs.basis_degrees)
                 for d in range(lo, hi + 1))
    else:
        nj, _ = _nj_module(pr, fam)
        ok = all(nprime.hf(d) == nd.hf(d) + nj.hf(d) for d in range(lo, hi + 1))
    certs["Hilbert function window"] = [lo, hi]
    if not ok:
        raise ValidationError("candidate lifting has the wrong Hilbert function")
    return certs


def _hom_solve(n: PresentedModule, res: FreeResolution, d: int, target_cols):
    """phi: F_1 -> N of internal degree d with phi o d_2 = the given cocycle;
    None if no such exists."""
    src = HomDegreeModel(n, res.free(1), d)
    tgt = HomDegreeModel(n, res.free(2), d)
    a = src.compose_matrix(res.diff(2), tgt)
    b = tgt.cols_to_coords(target_cols)
    x = solve(n.ring.field, a, b, src.dim)
    if x is None:
        return None
    return src.coords_to_cols(x)


def lift_module(pr: RingExtension, fam, recheck: bool = True) -> LiftResult:
    """Lift across the extension, or report the obstruction.

    When the obstruction vanishes a coboundary witness is solved for, the
    lifted presentation is corrected by it, and the resulting module is
    certified (exact reduction, vanishing Tor_1 against the quotient, and
    the Hilbert-function window of a flat lifting)."""
    ob = obstruction(pr, fam, recheck=recheck)
    if not ob.is_zero:
        return LiftResult("obstructed", None, ob)
    res = _base_res(pr, fam)
    d1t, _, eta = _eta(pr, res)
    bp = pr.upstairs
    if isinstance(fam, FamilyModule) and pr.coeff is not None:
        cd = pr.coeff
        mats = _coeff_matrices(pr, eta)
        ng = cd.n_geom_vars
        pad = (0,) * (bp.nvars - ng)
        corr = [[bp.zero for _ in range(d1t.source.rank)]
                for _ in range(d1t.target.rank)]
        for a, mat in enumerate(mats):
            cols = [fam.n_red.free._make({(t, e): c
                                          for t in range(fam.fiber_res.free(0).rank)
                                          for e, c in mat[t][s].terms.items()})
                    for s in range(fam.fiber_res.free(2).rank)]
            xi = _hom_solve(fam.n_red, fam.fiber_res, -cd.kernel_degrees[a], cols)
            if xi is None:
                raise ValidationError("vanishing obstruction without a coboundary witness")
            for s in range(d1t.source.rank):
                for t in range(d1t.target.rank):
                    p = xi[s].entry(t)
                    if p.is_zero:
                        continue
                    lifted = bp._make({e + pad: c for e, c in p.terms.items()})
                    corr[t][s] = corr[t][s] + lifted * cd.kernel_lifts[a]
    else:
        n = _down_module(fam)
        nj, idx = _nj_module(pr, n)
        cols = _ring_cocycle_cols(pr, n, eta)
        xibar = _hom_solve(nj, res, 0, cols)
        if xibar is None:
            raise ValidationError("vanishing obstruction without a coboundary witness")
        corr = [[bp.zero for _ in range(d1t.source.rank)]
                for _ in range(d1t.target.rank)]
        rev = {v: k for k, v in idx.items()}
        for s in range(d1t.source.rank):
            for (pair, e), c in xibar[s].terms.items():
                t, u = rev[pair]
                corr[t][s] = corr[t][s] + \
                    bp._make({e: c}) * pr.jgens[u]
    ent = [[d1t.entries[t][s] - corr[t][s] for s in range(d1t.source.rank)]
           for t in range(d1t.target.rank)]
    dnew = ModuleMap(d1t.source, d1t.target, ent, check=False)
    nprime = PresentedModule(bp, d1t.target.gen_degrees,
                             [c for c in dnew.columns() if not c.is_zero], check=False)
    certs = _certify_lifting(pr, fam, dnew, nprime)
    return LiftResult("lifted", Lifting(pr, fam, nprime, dnew, certs), ob)


# -- the torsor of liftings ---------------------------------------------------------


def _normalize_torsor_element(pr: RingExtension, fam, xi):
    """Accept an ObstructionClass (i=1), a list of fiber classes, or a single
    ring-mode ExtClass, and return the normalized per-coordinate shape."""
    if isinstance(xi, ObstructionClass):
        if xi.i != 1:
            raise ValidationError("torsor elements live in Ext^1")
        return xi.components if xi.components is not None else xi.ring_class
    if isinstance(xi, (list, tuple)):
        return tuple(xi)
    return xi


def torsor_act(lifting: Lifting, xi) -> Lifting:
    """Translate a lifting by a class in Ext^1(N, N (x) J).

    Homogeneity pins the coefficient-mode coordinates to internal degree
    -deg(e_a) for the kernel element e_a; coordinates elsewhere are refused.
    """
    pr, fam = lifting.problem, lifting.family
    data = _normalize_torsor_element(pr, fam, xi)
    bp = pr.upstairs
    d1t = lifting.dmap
    corr = [[bp.zero for _ in range(d1t.source.rank)]
            for _ in range(d1t.target.rank)]
    if isinstance(fam, FamilyModule) and pr.coeff is not None:
        cd = pr.coeff
        sp1 = fam.fiber_space(1)
        kaprev = fam.kappa_rev(1)[1]
        ng = cd.n_geom_vars
        pad = (0,) * (bp.nvars - ng)
        for a, cls in enumerate(data):
            if cls.is_zero:
                continue
            if cls.space is not sp1:
                raise ValidationError("torsor coordinates must live in the fiber Ext^1")
            want = -cd.kernel_degrees[a]
            for j, c in enumerate(cls.coords):
                if not pr.field.is_zero(c) and sp1.basis[j].degree != want:
                    raise ValidationError(
                        "graded liftings only admit torsor coordinates in the degree "
                        f"{want} piece for kernel element {cd.labels[a]}")
            rep = cls.representative()
            mm = ModuleMap(fam.canonical_res().free(1), fam.fiber.free,
                           [[rep.cols[s].entry(t) for s in range(len(rep.cols))]
                            for t in range(fam.fiber.free.rank)], check=False)
            comp = mm.compose(kaprev)
            for s in range(comp.source.rank):
                v = fam.iso_inv.apply_vec(comp.column(s))
                for t in range(d1t.target.rank):
                    p = v.entry(t)
                    if p.is_zero:
                        continue
                    lifted = bp._make({e + pad: c for e, c in p.terms.items()})
                    corr[t][s] = corr[t][s] + lifted * cd.kernel_lifts[a]
    else:
        n = _down_module(fam)
        nj, idx = _nj_module(pr, n)
        sp1 = _ring_space(pr, n, 1)
        cls = data
        if cls.space is not sp1:
            raise ValidationError("torsor coordinates must live in Ext^1(N, N (x) J)")
        rev = {v: k for k, v in idx.items()}
        by_deg: dict[int, list] = {}
        for j, c in enumerate(cls.coords):
            if not pr.field.is_zero(c):
                by_deg.setdefault(sp1.basis[j].degree, []).append((j, c))
        for deg, items in by_deg.items():
            coords = [pr.field.zero] * sp1.total_dim
            for j, c in items:
                coords[j] = c
            rep = ExtClass(sp1, coords).representative()
            for s, v in enumerate(rep.cols):
                for (pair, e), c in v.terms.items():
                    t, u = rev[pair]
                    corr[t][s] = corr[t][s] + bp._make({e: c}) * pr.jgens[u]
    ent = [[d1t.entries[t][s] + corr[t][s] for s in range(d1t.source.rank)]
           for t in range(d1t.target.rank)]
    dnew = ModuleMap(d1t.source, d1t.target, ent, check=False)
    nprime = PresentedModule(bp, d1t.target.gen_degrees,
                             [c for c in dnew.columns() if not c.is_zero], check=False)
    certs = _certify_lifting(pr, fam, dnew, nprime)
    return Lifting(pr, fam, nprime, dnew, certs)


def lifting_difference(l1: Lifting, l2: Lifting) -> ObstructionClass:
    """The Ext^1 class carrying one lifting to the other."""
    same_pr = l1.problem is l2.problem or (
        l1.problem.upstairs == l2.problem.upstairs
        and l1.problem.downstairs == l2.problem.downstairs)
    if not same_pr or l1.family is not l2.family:
        raise ValidationError("liftings must share the extension and the family")
    pr, fam = l1.problem, l1.family
    delta = l1.dmap - l2.dmap
    for t in range(delta.target.rank):
        for s in range(delta.source.rank):
            if not pr.drop(delta.entries[t][s]).is_zero:
                raise ValidationError("liftings do not share their reduction")
    if isinstance(fam, FamilyModule) and pr.coeff is not None:
        cd = pr.coeff
        mats = _coeff_matrices(pr, delta)
        classes = _coeff_classes(fam, pr, mats, 1)
        return ObstructionClass(1, tuple(cd.labels), tuple(cd.kernel_degrees),
                                tuple(classes), space=fam.fiber_space(1))
    n = _down_module(fam)
    sp = _ring_space(pr, n, 1)
    cols = _ring_cocycle_cols(pr, n, delta)
    cls = sp.class_from_cocycle(Cocycle(0, cols), check=True)
    labels = tuple(str(g) for g in pr.jgens)
    return ObstructionClass(1, labels, tuple(g.degree() for g in pr.jgens),
                            None, cls, sp)


# -- base change --------------------------------------------------------------------


def base_change_family(square: ExtensionSquare, geom: GradedRing,
                       fam: FamilyModule) -> FamilyModule:
    """Push a family along the downstairs map of an extension square.

    The minimal resolution is pushed with it (flatness keeps it a minimal
    resolution), so the pushed family's transport data stays in the SAME
    bases and the fiber object is shared -- classes remain comparable."""
    pr_t = coefficient_extension(geom, square.tgt)
    bs = pr_t.downstairs
    ng = geom.nvars
    images = [bs.var(i) for i in range(ng)]
    for img in square.tau_down.images:
        images.append(bs._make({(0,) * ng + e: c for e, c in img.terms.items()}))
    rm = RingMap(fam.ring, bs, images)
    res = fam.resolution
    f0s = FreeModule(bs, res.f0.gen_degrees)
    pushed = []
    prev = f0s
    for i in range(1, res.length + 1):
        d = res.diff(i)
        src = FreeModule(bs, d.source.gen_degrees)
        ent = [[rm(d.entries[t][s]) for s in range(d.source.rank)]
               for t in range(d.target.rank)]
        pushed.append(ModuleMap(src, prev, ent, check=False))
        prev = src
    d1cols = pushed[0].columns() if pushed else []
    module = PresentedModule(bs, f0s.gen_degrees,
                             [c for c in d1cols if not c.is_zero], check=False)
    res_s = FreeResolution(module, f0s, pushed,
                           f0_to_module=PModMap.identity(module), truncated=True)
    return FamilyModule(geom, square.tgt.downstairs, module, fam.fiber,
                        resolution=res_s)


def base_change_lifting(square: ExtensionSquare, geom: GradedRing,
                        lifting: Lifting, fam2: FamilyModule) -> Lifting:
    pr2 = coefficient_extension(geom, square.tgt)
    bsp = pr2.upstairs
    ng = geom.nvars
    images = [bsp.var(i) for i in range(ng)]
    for img in square.tau_up.images:
        images.append(bsp._make({(0,) * ng + e: c for e, c in img.terms.items()}))
    rm = RingMap(lifting.problem.upstairs, bsp, images)
    d = lifting.dmap
    src = FreeModule(bsp, d.source.gen_degrees)
    tgt = FreeModule(bsp, d.target.gen_degrees)
    ent = [[rm(d.entries[t][s]) for s in range(d.source.rank)]
           for t in range(d.target.rank)]
    dnew = ModuleMap(src, tgt, ent, check=False)
    nprime = PresentedModule(bsp, tgt.gen_degrees,
                             [c for c in dnew.columns() if not c.is_zero], check=False)
    certs = _certify_lifting(pr2, fam2, dnew, nprime)
    return Lifting(pr2, fam2, nprime, dnew, certs)


def push_class(square: ExtensionSquare, cls: ObstructionClass) -> ObstructionClass:
    """Apply the kernel matrix of a square to the coefficient coordinates."""
    if cls.components is None:
        raise ValidationError("base change acts on coefficient-mode classes")
    f = cls.space.field
    mat = square.kernel_matrix
    comps = []
    for b in range(len(square.tgt.kernel_basis)):
        acc = cls.space.zero_class()
        for a, comp in enumerate(cls.components):
            c = mat[b][a]
            if not f.is_zero(c):
                acc = acc + comp.scale(c)
        comps.append(acc)
    return ObstructionClass(cls.i, tuple(square.tgt.labels),
                            tuple(square.tgt.kernel_degrees), tuple(comps),
                            space=cls.space)


def base_change_ob(square: ExtensionSquare, geom: GradedRing, fam: FamilyModule,
                   lifting: Lifting | None = None, xi=None) -> dict:
    """Push the obstruction through a square of small extensions and compare
    against the obstruction of the pushed family; optionally also check that
    the torsor action commutes with base change."""
    pr1 = coefficient_extension(geom, square.src)
    pr2 = coefficient_extension(geom, square.tgt)
    ob1 = obstruction(pr1, fam)
    pushed = push_class(square, ob1)
    fam2 = base_change_family(square, geom, fam)
    ob2 = obstruction(pr2, fam2)
    out = {"pushed": pushed.coords(), "recomputed": ob2.coords(),
           "equal": pushed.coords() == ob2.coords()}
    if lifting is not None and xi is not None:
        acted = torsor_act(lifting, xi)
        route1 = base_change_lifting(square, geom, acted, fam2)
        bc = base_change_lifting(square, geom, lifting, fam2)
        xi_cls = xi if isinstance(xi, ObstructionClass) else \
            ObstructionClass(1, tuple(square.src.labels),
                             tuple(square.src.kernel_degrees), tuple(xi),
                             space=fam.fiber_space(1))
        route2 = torsor_act(bc, push_class(square, xi_cls))
        diff = lifting_difference(route1, route2)
        out["torsor routes agree"] = diff.is_zero
        out["torsor difference"] = diff.coords()
    return out


# -- the four-term (syzygy) representative ------------------------------------------


def _yoneda_h2(res: FreeResolution, alpha: PModMap, g: PModMap, pi: PModMap):
    """Degree-two Yoneda representative F_2 -> K of 0 -> K -> Y -> X -> N -> 0,
    by lifting the augmentation up the ladder."""
    n = pi.target
    x, y, k = pi.source, g.source, alpha.source
    aug = res.f0_to_module
    picols = pi.columns()
    h0 = []
    for j in range(res.f0.rank):
        c = lift_map_through_columns(n.free, picols, aug.column(j), list(n.relations))
        if c is None:
            raise ValidationError("cannot lift the augmentation through pi")
        h0.append(x.free.from_entries(c))
    need1 = _push_cols(h0, res.diff(1), x.free)
    gcols = g.columns()
    h1 = []
    for v in need1:
        c = lift_map_through_columns(x.free, gcols, v, list(x.relations))
        if c is None:
            raise ValidationError("cannot lift through g in the four-term ladder")
        h1.append(y.free.from_entries(c))
    need2 = _push_cols(h1, res.diff(2), y.free)
    acols = alpha.columns()
    h2 = []
    for v in need2:
        c = lift_map_through_columns(y.free, acols, v, list(y.relations))
        if c is None:
            raise ValidationError("cannot lift through alpha in the four-term ladder")
        h2.append(k.free.from_entries(c))
    return h2


def _restricted_cover(pr: RingExtension, n: PresentedModule):
    """N as an upstairs module with its free cover, its syzygy kernel, and
    the reduced four-term data 0 -> N (x) J -> Kbar -> F0bar -> N -> 0."""
    bp, b = pr.upstairs, pr.downstairs
    nb = restrict_scalars(n, bp, pr.jgens)
    cover = PresentedModule(bp, nb.gen_degrees)
    one, zero = bp.field.one, bp.field.zero
    eps = PModMap(cover, nb, [[bp.scalar(one) if t == s else bp.scalar(zero)
                               for s in range(nb.ngens)] for t in range(nb.ngens)],
                  check=False)
    k1, incl = kernel_of_map(eps)
    rm = pr._down_map
    k1d = apply_ring_map(k1, rm, b)
    coverd = apply_ring_map(cover, rm, b)
    gmap = apply_ring_map_to_map(incl, rm, k1d, coverd)
    pi = PModMap(coverd, n, [[b.scalar(one) if t == s else b.scalar(zero)
                              for s in range(n.ngens)] for t in range(n.ngens)],
                 check=False)
    # the kernel map: n (x) g_u -> class of g_u . e_n in the syzygy module
    nj, idx = _nj_module(pr, n)
    gb = SubmoduleGB(cover.free, incl.columns())
    cols = []
    for i in range(n.ngens):
        for u, gu in enumerate(pr.jgens):
            v = cover.free._make({(i, e): c for e, c in gu.terms.items()})
            coeffs = gb.coeffs_of(v)
            if coeffs is None:
                raise ValidationError("kernel generator missing from the syzygy module")
            cols.append(k1d.free.from_entries([pr.drop(c) for c in coeffs]))
    ent = [[cols[s].entry(t) for s in range(len(cols))] for t in range(k1d.ngens)]
    alpha = PModMap(nj, k1d, ent)
    return nj, idx, k1d, coverd, alpha, gmap, pi


def four_term_ob(pr: RingExtension, fam, certify: bool = True) -> ObstructionClass:
    """The obstruction via the reduced syzygy sequence; must agree with
    ``obstruction`` coordinatewise (same spaces, same kernel labels)."""
    nd = _down_module(fam)
    res = _base_res(pr, fam)
    nj, idx, k1d, coverd, alpha, gmap, pi = _restricted_cover(pr, nd)
    report = {}
    if certify:
        seq = FourTermSequence(nj, k1d, coverd, nd, alpha, gmap, pi)
        report = seq.certify()
        if not all(report.values()):
            raise ValidationError(f"four-term sequence failed exactness: {report}")
    h2 = _yoneda_h2(res, alpha, gmap, pi)
    if isinstance(fam, FamilyModule) and pr.coeff is not None:
        cd = pr.coeff
        nals = len(pr.jgens)
        sp = fam.fiber_space(2)
        kap = fam.kappa(2)[2]
        rev = {v: k for k, v in idx.items()}
        classes = []
        for a in range(nals):
            cols_red = []
            for v in h2:
                terms = {}
                for (pair, e), c in v.terms.items():
                    t, u = rev[pair]
                    if u != a:
                        continue
                    p = fam.proj(fam.ring._make({e: c}))
                    for ee, cc in p.terms.items():
                        key = (t, ee)
                        terms[key] = fam.field.add(terms.get(key, fam.field.zero), cc)
                raw = fam.red_raw.free._make({k: c for k, c in terms.items()
                                              if not fam.field.is_zero(c)})
                cols_red.append(fam.gens_to_fiber.apply_vec(raw))
            cols = _push_cols(cols_red, kap, fam.fiber.free)
            co = Cocycle(-cd.kernel_degrees[a], cols)
            cls = sp.class_from_cocycle(co, check=True)
            classes.append(cls)
        out = ObstructionClass(2, tuple(cd.labels), tuple(cd.kernel_degrees),
                               tuple(classes), space=sp)
    else:
        sp = _ring_space(pr, nd, 2)
        cls = sp.class_from_cocycle(Cocycle(0, h2), check=True)
        out = ObstructionClass(2, tuple(str(g) for g in pr.jgens),
                               tuple(g.degree() for g in pr.jgens), None, cls, sp)
    out.report.update(report)
    return out


# -- regular quotients: the reduced approximation sequence --------------------------


def ob_regular_quotient(a: GradedRing, jpolys, n: PresentedModule,
                        certify: bool = True,
                        check_equivalences: bool = False) -> ObstructionClass:
    """Obstruction class of A/J^2 -> A/J at a module N over B = A/J, via the
    reduced maximal Cohen-Macaulay approximation sequence
    0 -> N (x) J/J^2 -> Lbar -> Mbar -> N -> 0 over B.

    J must be a regular sequence (Koszul-certified) and N maximal
    Cohen-Macaulay over B."""
    jp = [a.parse(p) if isinstance(p, str) else p for p in jpolys]
    ok, bad = is_regular_sequence(a, jp)
    if not ok:
        raise ValidationError(f"element {bad} of J is not regular")
    pr = regular_quotient_extension(a, jp, downstairs=n.ring)
    b = pr.downstairs
    if not is_mcm(n):
        raise ValidationError("module must be maximal Cohen-Macaulay over A/J")
    n_a = restrict_scalars(n, a, jp)
    trip = mcm_approx_cm(n_a, len(jp), canonical_module(a))
    rm = RingMap(a, b, [b.var(i) for i in range(b.nvars)], check=False)
    mbar = apply_ring_map(trip.m, rm, b)
    lbar = apply_ring_map(trip.l, rm, b)
    rho_bar = apply_ring_map_to_map(trip.rho, rm, lbar, mbar)
    pibar = PModMap(mbar, n, [[rm(trip.pi.entries[t][s])
                               for s in range(trip.m.ngens)]
                              for t in range(n.ngens)])
    nj, idx = _nj_module(pr, n)
    # kernel map columns: f_i times a pi-preimage of each generator, read
    # through rho upstairs and reduced
    picols = trip.pi.columns()
    gbm = SubmoduleGB(trip.m.free, trip.rho.columns() + list(trip.m.relations))
    nrho = len(trip.rho.columns())
    cols = []
    for i in range(n.ngens):
        w = lift_map_through_columns(n_a.free, picols, n_a.free.basis_vec(i),
                                     list(n_a.relations))
        if w is None:
            raise ValidationError("pi is not surjective")
        wv = trip.m.free.from_entries(w)
        for fu in jp:
            coeffs = gbm.coeffs_of(wv.poly_mul(fu))
            if coeffs is None:
                raise ValidationError("f_i . (pi-preimage) escaped the image of rho")
            cols.append(lbar.free.from_entries([rm(c) for c in coeffs[:nrho]]))
    ent = [[cols[s].entry(t) for s in range(len(cols))] for t in range(lbar.ngens)]
    alpha = PModMap(nj, lbar, ent)
    report: dict = {"triple minimal": trip.minimal}
    if certify:
        seq = FourTermSequence(nj, lbar, mbar, n, alpha, rho_bar, pibar)
        cert = seq.certify()
        report.update(cert)
        if not all(v for k, v in cert.items()):
            raise ValidationError(f"reduced approximation sequence not exact: {cert}")
    res = resolve(n, 3)
    h2 = _yoneda_h2(res, alpha, rho_bar, pibar)
    sp = _ring_space(pr, n, 2)
    cls = sp.class_from_cocycle(Cocycle(0, h2), check=True)
    out = ObstructionClass(2, tuple(str(g) for g in pr.jgens),
                           tuple(g.degree() for g in pr.jgens), None, cls, sp)
    out.report.update(report)
    out.report["problem"] = pr
    out.report["triple"] = trip
    out.report["reduced"] = (lbar, mbar, rho_bar, pibar)
    if check_equivalences:
        split, _, _ = splits_pibar(trip, jp, n)
        out.report["pibar splits"] = split
        wb = canonical_module(n.ring)
        ndual = omega_dual(n, wb).module.minimalize()[0]
        obd = ob_regular_quotient(a, jp, ndual, certify=certify,
                                  check_equivalences=False)
        out.report["dual class zero"] = obd.is_zero
        agree = (out.is_zero == split == obd.is_zero)
        out.report["equivalences agree"] = agree
        if not agree:
            raise ValidationError("vanishing/splitting/dual criteria disagree")
    return out


def splits_pibar(trip: ApproxTriple, jpolys, n: PresentedModule | None = None):
    """Exact search for a section of pibar: Mbar -> N over B = A/J.

    Returns (found, section or None, report).  The Hom space in degree zero
    is enumerated and a k-linear system solves pibar o nu = id exactly."""
    a = trip.n.ring
    jp = [a.parse(p) if isinstance(p, str) else p for p in jpolys]
    if n is None:
        rels_down = list(a.ideal_gens) + [p.lift_to_ambient() for p in jp]
        b = GradedRing(a.field, a.names, a.degrees, a.order, rels_down) if jp else a
        rm = RingMap(a, b, [b.var(i) for i in range(b.nvars)], check=False)
        n = apply_ring_map(trip.n, rm, b)
    else:
        b = n.ring
        rm = RingMap(a, b, [b.var(i) for i in range(b.nvars)], check=False)
    mbar = apply_ring_map(trip.m, rm, b)
    pibar = PModMap(mbar, n, [[rm(trip.pi.entries[t][s]) for s in range(trip.m.ngens)]
                              for t in range(n.ngens)])
    basis = hom_space_degree(n, mbar, 0)
    f = b.field

    def encode(h: PModMap):
        out = []
        for j in range(n.ngens):
            out.extend(n.coords(h.column(j), n.gen_degrees[j]))
        return out

    if not basis:
        found = n.is_zero()
        return found, None, {"hom dim": 0}
    comps = [pibar.compose(nu) for nu in basis]
    rows = [encode(c) for c in comps]
    a_rows = [[rows[s][r] for s in range(len(rows))] for r in range(len(rows[0]))]
    target = encode(PModMap.identity(n))
    x = solve(f, a_rows, target, len(basis))
    report = {"hom dim": len(basis)}
    if x is None:
        return False, None, report
    nu = None
    for c, base_map in zip(x, basis):
        piece = base_map.scale(c)
        nu = piece if nu is None else nu + piece
    check = pibar.compose(nu) - PModMap.identity(n)
    if not check.is_zero_map:
        raise ValidationError("section candidate failed the exact check")
    report["verified"] = True
    return True, nu, report


# -- the tangent comparison map -----------------------------------------------------


@dataclass
class SigmaReport:
    matrix: list
    rank: int
    injective: bool
    coker_dim: int
    ext2_fiber_dim: int
    coker_matches_ext2: bool
    source_dim: int
    target_dim: int


def tangent_sigma(a: GradedRing, jpolys, n: PresentedModule,
                  trip: ApproxTriple | None = None) -> SigmaReport:
    """Matrix of the tangent-level comparison Ext^1_B(N,N) -> Ext^1_A(M,M)
    through pullback along the approximation cover M -> N.

    Each basis extension of N over B is restricted to A, pulled back along
    pi to an extension of M by N, and the unique pi-pushforward preimage in
    Ext^1_A(M,M) is solved for.  Injectivity is asserted; the cokernel
    dimension is compared with Ext^2_B(N,N)."""
    jp = [a.parse(p) if isinstance(p, str) else p for p in jpolys]
    b = n.ring
    if trip is None:
        n_a = restrict_scalars(n, a, jp)
        trip = mcm_approx_cm(n_a, len(jp), canonical_module(a))
    else:
        n_a = trip.n
    split, _, _ = splits_pibar(trip, jp, n)
    if not split:
        raise ValidationError("pibar does not split; the comparison map is unavailable")
    m = trip.m
    f = a.field
    sp_b = ext(1, n, n)
    if not sp_b.finite:
        raise ComputationLimit("Ext^1 over the quotient is not finite-dimensional")
    sp_amm = ext(1, m, m)
    sp_amn = ext(1, m, n_a)
    if not (sp_amm.finite and sp_amn.finite):
        raise ComputationLimit("Ext^1 over A is not finite-dimensional")
    mat_pi, act_pi, _, _ = ext_cov(trip.pi, 1, m, sp_amm, sp_amn)
    columns = []
    for t in range(sp_b.total_dim):
        coords = [f.zero] * sp_b.total_dim
        coords[t] = f.one
        e, iota, pi_e = extension_from_class(ExtClass(sp_b, coords))
        e_a = restrict_scalars(e, a, jp)
        ktw_a = restrict_scalars(iota.source, a, jp)
        iota_a = PModMap(ktw_a, e_a, [[a._make(dict(iota.entries[r][s].terms))
                                       for s in range(iota.source.ngens)]
                                      for r in range(e.ngens)])
        pi_e_a = PModMap(e_a, n_a, [[a._make(dict(pi_e.entries[r][s].terms))
                                     for s in range(e.ngens)]
                                    for r in range(n.ngens)])
        ds = PresentedModule.direct_sum([e_a, m])
        ent = [[pi_e_a.entries[r][s] for s in range(e_a.ngens)] +
               [trip.pi.entries[r][s].scale(f.neg(f.one)) for s in range(m.ngens)]
               for r in range(n_a.ngens)]
        h = PModMap(ds, n_a, ent)
        pmod, incl = kernel_of_map(h)
        icols = incl.columns()
        pcols = []
        for j in range(ktw_a.ngens):
            v = ds.free._make({(r, e2): c for (r, e2), c in
                               iota_a.column(j).terms.items()})
            c = lift_map_through_columns(ds.free, icols, v, list(ds.relations))
            if c is None:
                raise ValidationError("pullback kernel misses the extension fiber")
            pcols.append(pmod.free.from_entries(c))
        iota_p = PModMap(ktw_a, pmod,
                         [[pcols[s].entry(r) for s in range(ktw_a.ngens)]
                          for r in range(pmod.ngens)])
        proj_p = PModMap(pmod, m, [incl.entries[e_a.ngens + r]
                                   for r in range(m.ngens)])
        cert = certify_short_exact(iota_p, proj_p)
        if not cert["exact"]:
            raise ValidationError("pullback extension failed its exactness certificate")
        cls_mn = yoneda_class_of_extension(iota_p, proj_p, space=sp_amn)
        x = solve(f, mat_pi, list(cls_mn.coords), sp_amm.total_dim)
        if x is None:
            raise ValidationError("pushforward along pi misses the pullback class")
        columns.append(x)
    dim_src = sp_b.total_dim
    dim_tgt = sp_amm.total_dim
    matrix = [[columns[j][r] for j in range(dim_src)] for r in range(dim_tgt)]
    rank = k_rank(f, matrix, dim_src) if dim_src else 0
    injective = rank == dim_src
    if not injective:
        raise ValidationError("tangent comparison map failed injectivity")
    sp_b2 = ext(2, n, n)
    if not sp_b2.finite:
        raise ComputationLimit("Ext^2 over the quotient is not finite-dimensional")
    coker = dim_tgt - rank
    return SigmaReport(matrix=matrix, rank=rank, injective=injective,
                       coker_dim=coker, ext2_fiber_dim=sp_b2.total_dim,
                       coker_matches_ext2=(coker == sp_b2.total_dim),
                       source_dim=dim_src, target_dim=dim_tgt)


# -- naturality of the obstruction in short exact sequences -------------------------


def _fiber_map(fam_src: FamilyModule, fam_tgt: FamilyModule, fmap: PModMap) -> PModMap:
    """Reduce a family map to a map of the fixed fibers."""
    red = apply_ring_map_to_map(fmap, fam_src.proj, fam_src.red_raw, fam_tgt.red_raw)
    return fam_tgt.gens_to_fiber.compose(red).compose(fam_src.gens_to_fiber.inverse())


def omap_check(pr: RingExtension, fam_inner: FamilyModule, fam_outer: FamilyModule,
               fmap: PModMap, kind: str) -> dict:
    """Compare pushforward and pullback of obstructions along a map of
    families whose third term is flat.

    kind "sub":  fmap is an injection N -> L' (flat cokernel); checks
                 iota_* ob(N) = iota^* ob(L') in Ext^2(N0, L0) per kernel
                 coordinate.
    kind "quot": fmap is a surjection M -> N (flat kernel); checks
                 pibar^* ob(N) = pibar_* ob(M) in Ext^2(M0, N0).
    """
    if kind not in ("sub", "quot"):
        raise ValidationError("kind must be 'sub' or 'quot'")
    if fmap.source is not fam_inner.module or fmap.target is not fam_outer.module:
        raise ValidationError("family map endpoints do not match the families")
    report: dict = {"kind": kind}
    third_flat = None
    if kind == "sub":
        if not fmap.is_injective():
            raise ValidationError("a 'sub' comparison needs an injective family map")
        third = fmap.cokernel()
    else:
        if not fmap.is_surjective():
            raise ValidationError("a 'quot' comparison needs a surjective family map")
        third, _ = kernel_of_map(fmap)
    f1 = FreeModule(fam_inner.ring, (0,))
    ng = fam_inner.geom.nvars
    nv = fam_inner.ring.nvars
    cols = [f1._make({(0, tuple(1 if k == ng + i else 0 for k in range(nv))):
                      fam_inner.field.one})
            for i in range(fam_inner.base.ring.nvars)]
    gmod = PresentedModule(fam_inner.ring, (0,), cols, check=False)
    third_flat = tor(1, third, gmod).is_zero
    report["third term flat"] = third_flat
    if not third_flat:
        raise ValidationError("the complementary term of the sequence is not flat")
    ob_inner = obstruction(pr, fam_inner)
    ob_outer = obstruction(pr, fam_outer)
    f0 = _fiber_map(fam_inner, fam_outer, fmap)
    i = 2
    if kind == "sub":
        # iota_*: Ext^2(N,N) -> Ext^2(N,L); iota^*: Ext^2(L,L) -> Ext^2(N,L)
        mixed = ext(i, fam_inner.fiber, fam_outer.fiber,
                    res=fam_inner.canonical_res())
        _, act_push, _, _ = ext_cov(f0, i, fam_inner.fiber,
                                    fam_inner.fiber_space(i), mixed)
        _, act_pull, _, _ = ext_contra(f0, i, fam_outer.fiber,
                                       mixed, fam_outer.fiber_space(i))
        lhs = [act_push(c) for c in ob_inner.components]
        rhs = [act_pull(c) for c in ob_outer.components]
    else:
        # pibar^*: Ext^2(N,N) -> Ext^2(M,N); pibar_*: Ext^2(M,M) -> Ext^2(M,N)
        mixed = ext(i, fam_inner.fiber, fam_outer.fiber,
                    res=fam_inner.canonical_res())
        _, act_pull, _, _ = ext_contra(f0, i, fam_outer.fiber,
                                       mixed, fam_outer.fiber_space(i))
        _, act_push, _, _ = ext_cov(f0, i, fam_inner.fiber,
                                    fam_inner.fiber_space(i), mixed)
        lhs = [act_pull(c) for c in ob_outer.components]
        rhs = [act_push(c) for c in ob_inner.components]
    report["lhs"] = [c.coords for c in lhs]
    report["rhs"] = [c.coords for c in rhs]
    report["equal"] = report["lhs"] == report["rhs"]
    return report


def omap_difference_check(pr: RingExtension, fam_inner: FamilyModule,
                          fam_outer: FamilyModule, fmap: PModMap, kind: str,
                          inner_lifts, outer_lifts, lifted_maps) -> dict:
    """The Ext^1 analogue of omap_check for two pairs of liftings connected
    by lifted maps reducing to fmap."""
    for lm, li, lo in zip(lifted_maps, inner_lifts, outer_lifts):
        if lm.source is not li.module or lm.target is not lo.module:
            raise ValidationError("lifted maps must connect the lifted modules")
        ent = [[pr.drop(lm.entries[t][s]) for s in range(lm.source.ngens)]
               for t in range(lm.target.ngens)]
        down = PModMap(fmap.source, fmap.target, ent)
        if not (down - fmap).is_zero_map:
            raise ValidationError("lifted map does not reduce to the family map")
    delta = lifting_difference(inner_lifts[0], inner_lifts[1])
    zeta = lifting_difference(outer_lifts[0], outer_lifts[1])
    f0 = _fiber_map(fam_inner, fam_outer, fmap)
    mixed = ext(1, fam_inner.fiber, fam_outer.fiber, res=fam_inner.canonical_res())
    report: dict = {"kind": kind}
    if kind == "sub":
        _, act_push, _, _ = ext_cov(f0, 1, fam_inner.fiber,
                                    fam_inner.fiber_space(1), mixed)
        _, act_pull, _, _ = ext_contra(f0, 1, fam_outer.fiber,
                                       mixed, fam_outer.fiber_space(1))
        lhs = [act_push(c) for c in delta.components]
        rhs = [act_pull(c) for c in zeta.components]
    else:
        _, act_pull, _, _ = ext_contra(f0, 1, fam_outer.fiber,
                                       mixed, fam_outer.fiber_space(1))
        _, act_push, _, _ = ext_cov(f0, 1, fam_inner.fiber,
                                    fam_inner.fiber_space(1), mixed)
        lhs = [act_pull(c) for c in zeta.components]
        rhs = [act_push(c) for c in delta.components]
    report["lhs"] = [c.coords for c in lhs]
    report["rhs"] = [c.coords for c in rhs]
    report["equal"] = report["lhs"] == report["rhs"]
    return report


# -- hypothesis flags for the smoothness criteria -----------------------------------


def ext_vanishing_report(a: GradedRing, n_a: PresentedModule, trip: ApproxTriple,
                         hull: HullTriple) -> dict:
    """Dimensions and vanishing flags of the Ext/Hom spaces that appear as
    hypotheses in the smoothness statements for the induced functor maps."""
    m, l = trip.m, trip.l
    lp, mp = hull.l_prime, hull.m_prime
    out: dict = {}

    def entry(label, i, x, y):
        if x.is_zero() or y.is_zero():
            out[label] = {"vanishes": True, "dim": 0}
            return
        sp = ext(i, x, y)
        rec = {"vanishes": sp.presentation.is_zero(), "finite": sp.finite}
        if sp.finite:
            rec["dim"] = sp.total_dim
            rec["by degree"] = dict(sp.dims_by_degree)
        out[label] = rec

    entry("Ext1(N,M')", 1, n_a, mp)
    entry("Ext1(L,N)", 1, l, n_a)
    entry("Hom(N,M')", 0, n_a, mp)
    entry("Hom(L,N)", 0, l, n_a)
    entry("Ext2(N,M)", 2, n_a, m)
    entry("Ext2(L',N)", 2, lp, n_a)
    out["L zero"] = l.is_zero()
    if not l.is_zero():
        lmin = l.minimalize()[0]
        out["L free"] = len(lmin.relations) == 0
        if out["L free"]:
            out["L free rank"] = lmin.ngens
            out["L free twists"] = list(lmin.gen_degrees)
    else:
        out["L free"] = True
        out["L free rank"] = 0
    amod = PresentedModule.ring_module(a)
    grade = None
    for i in range(a.nvars + 2):
        if not ext(i, n_a, amod).presentation.is_zero():
            grade = i
            break
    out["grade"] = grade
    return out


# -- brute-force oracle over structure constants ------------------------------------


class _Layout:
    """Degreewise k-basis of a finite-length module with variable action
    matrices, for the dense search."""

    def __init__(self, n: PresentedModule):
        ring = n.ring
        if n.krull_dim() > 0:
            raise ComputationLimit("dense search needs finite-length modules")
        f = ring.field
        if n.ngens == 0:
            self.degrees, self.bases, self.dims = [], {}, {}
            self.total = 0
            self.offsets = {}
            self.act = {}
            return
        lo = min(n.gen_degrees)
        maxvar = max(ring.degrees) if ring.degrees else 1
        hi = max(n.gen_degrees)
        d = hi
        zeros = 0
        while zeros < maxvar:
            d += 1
            zeros = zeros + 1 if n.hf(d) == 0 else 0
        hi = d
        self.degrees = [d for d in range(lo, hi + 1) if n.hf(d) > 0]
        self.bases = {d: n.graded_basis(d) for d in self.degrees}
        self.dims = {d: len(self.bases[d]) for d in self.degrees}
        self.offsets = {}
        off = 0
        for d in self.degrees:
            self.offsets[d] = off
            off += self.dims[d]
        self.total = off
        self.act = {}
        for v in range(ring.nvars):
            dv = ring.degrees[v]
            unit = tuple(1 if i == v else 0 for i in range(ring.nvars))
            blocks = {}
            for d in self.degrees:
                tgt = self.bases.get(d + dv, [])
                mat = [[f.zero] * self.dims[d] for _ in tgt]
                if tgt:
                    for j, (comp, e) in enumerate(self.bases[d]):
                        w = Vec(n.free, {(comp, e): f.one}).mono_mul(unit, f.one)
                        coords = n.coords(w, d + dv, tgt)
                        for r, c in enumerate(coords):
                            mat[r][j] = c
                blocks[d] = mat
            self.act[v] = blocks

    def dim_at(self, d):
        return self.dims.get(d, 0)


def _blocks_mul(f, a_blocks, b_blocks, b_shift):
    """Compose graded operators: (a o b)[d] = a[d + b_shift] . b[d]."""
    out = {}
    for d, bmat in b_blocks.items():
        amat = a_blocks.get(d + b_shift)
        if amat is None or not bmat or not amat:
            continue
        rows = len(amat)
        inner = len(bmat)
        cols = len(bmat[0]) if bmat else 0
        res = [[f.zero] * cols for _ in range(rows)]
        for r in range(rows):
            for k in range(inner):
                c = amat[r][k]
                if f.is_zero(c):
                    continue
                for j in range(cols):
                    if not f.is_zero(bmat[k][j]):
                        res[r][j] = f.add(res[r][j], f.mul(c, bmat[k][j]))
        out[d] = res
    return out


def _word_of(e):
    word = []
    for v, m in enumerate(e):
        word.extend([v] * m)
    return word


class _DenseProblem:
    """Linear model of all graded module structures on N (+) (N (x) J)
    lifting the given action: unknowns are the connecting maps c_v, one
    graded block per variable; the defining relations and commutators are
    linear constraints; the kernel-isomorphism test is a rank condition."""

    def __init__(self, pr: RingExtension, n: PresentedModule):
        self.pr = pr
        self.n = n
        ring = pr.downstairs
        self.f = ring.field
        nj, _ = _nj_module(pr, n)
        self.nlay = _Layout(n)
        self.jlay = _Layout(nj)
        self.vdeg = list(ring.degrees)
        # unknown index: (v, d, row in NJ_{d+deg v}, col in N_d)
        self.index = {}
        pos = 0
        for v in range(ring.nvars):
            for d in self.nlay.degrees:
                rows = self.jlay.dim_at(d + self.vdeg[v])
                cols = self.nlay.dim_at(d)
                for r in range(rows):
                    for j in range(cols):
                        self.index[(v, d, r, j)] = pos
                        pos += 1
        self.nunknowns = pos

    def _suffix_op(self, word):
        """The known action of a variable word on N, as graded blocks."""
        f = self.f
        blocks = {d: _identity(f, self.nlay.dim_at(d)) for d in self.nlay.degrees}
        shift = 0
        for v in reversed(word):
            blocks = _blocks_mul(f, self.nlay.act[v], blocks, shift)
            shift += self.vdeg[v]
        return blocks, shift

    def _prefix_op(self, word):
        f = self.f
        blocks = {d: _identity(f, self.jlay.dim_at(d)) for d in self.jlay.degrees}
        shift = 0
        for v in reversed(word):
            blocks = _blocks_mul(f, self.jlay.act[v], blocks, shift)
            shift += self.vdeg[v]
        return blocks, shift

    def _lower_rows(self, weighted_words, rows_accum):
        """Accumulate the linear form of the lower-left block of the operator
        of a k-combination of variable words in the lifted action: one
        prefix . c_v . suffix term per occurrence of a variable."""
        f = self.f
        for word, coeff in weighted_words:
            for k in range(len(word)):
                v = word[k]
                suffix, s_shift = self._suffix_op(word[k + 1:])
                prefix, p_shift = self._prefix_op(word[:k])
                for d in self.nlay.degrees:
                    s = suffix.get(d)
                    if s is None or not s:
                        continue
                    dmid = d + s_shift
                    dctar = dmid + self.vdeg[v]
                    p = prefix.get(dctar)
                    if p is None:
                        continue
                    # coeff * P[beta,gamma] * c_v[gamma,delta] * S[delta,t]
                    for t in range(self.nlay.dim_at(d)):
                        for beta in range(self.jlay.dim_at(dctar + p_shift)):
                            key = (d, t, dctar + p_shift, beta)
                            row = rows_accum.setdefault(key, {})
                            for gamma in range(self.jlay.dim_at(dctar)):
                                pc = p[beta][gamma]
                                if f.is_zero(pc):
                                    continue
                                for delta in range(self.nlay.dim_at(dmid)):
                                    sc = s[delta][t]
                                    if f.is_zero(sc):
                                        continue
                                    u = self.index.get((v, dmid, gamma, delta))
                                    if u is None:
                                        continue
                                    val = f.mul(coeff, f.mul(pc, sc))
                                    row[u] = f.add(row.get(u, f.zero), val)

    def constraints(self):
        f = self.f
        ring = self.pr.upstairs
        groups = []
        for g in ring.ideal_gens:
            groups.append([(_word_of(e), c) for e, c in g.terms.items()])
        for v in range(ring.nvars):
            for w in range(v + 1, ring.nvars):
                groups.append([([v, w], f.one), ([w, v], f.neg(f.one))])
        out = []
        for group in groups:
            acc: dict = {}
            self._lower_rows(group, acc)
            for row in acc.values():
                if any(not f.is_zero(c) for c in row.values()):
                    out.append([row.get(u, f.zero) for u in range(self.nunknowns)])
        return out

    def kernel_map_rank(self, cvec):
        """Rank of the induced map N (x) J -> kernel for one candidate c."""
        f = self.f
        cols = []
        for gs in self.pr.jgens:
            # lower block of gs evaluated in the candidate action, column by column
            for d in self.nlay.degrees:
                for t in range(self.nlay.dim_at(d)):
                    vec = [f.zero] * self.jlay.total
                    for e, coeff in gs.terms.items():
                        word = _word_of(e)
                        for k in range(len(word)):
                            v = word[k]
                            suffix, s_shift = self._suffix_op(word[k + 1:])
                            prefix, p_shift = self._prefix_op(word[:k])
                            s = suffix.get(d)
                            if s is None or not s:
                                continue
                            dmid = d + s_shift
                            dctar = dmid + self.vdeg[v]
                            p = prefix.get(dctar)
                            if p is None:
                                continue
                            for beta in range(self.jlay.dim_at(dctar + p_shift)):
                                acc = f.zero
                                for gamma in range(self.jlay.dim_at(dctar)):
                                    pc = p[beta][gamma]
                                    if f.is_zero(pc):
                                        continue
                                    for delta in range(self.nlay.dim_at(dmid)):
                                        sc = s[delta][t]
                                        if f.is_zero(sc):
                                            continue
                                        u = self.index.get((v, dmid, gamma, delta))
                                        if u is None:
                                            continue
                                        acc = f.add(acc, f.mul(pc, f.mul(sc, cvec[u])))
                                if not f.is_zero(acc):
                                    off = self.jlay.offsets[dctar + p_shift]
                                    vec[off + beta] = f.add(vec[off + beta],
                                                            f.mul(coeff, acc))
                    cols.append(vec)
        if not cols:
            return 0
        rows = [[cols[j][r] for j in range(len(cols))] for r in range(self.jlay.total)]
        return k_rank(f, rows, len(cols))


def _identity(f, n):
    return [[f.one if i == j else f.zero for j in range(n)] for i in range(n)]


def bruteforce_liftings(pr: RingExtension, n: PresentedModule, cap: int = 200000):
    """All graded liftings of N across the extension, by dense enumeration of
    the connecting structure constants.  Returns the list of solutions of
    the linear constraints whose kernel map is an isomorphism.

    Independent of the resolution/Ext machinery: only graded bases, the
    ring's normal forms, and dense linear algebra are used."""
    f = pr.field
    if f.p is None:
        raise ComputationLimit("dense enumeration needs a finite field")
    prob = _DenseProblem(pr, n)
    cons = prob.constraints()
    basis = nullspace(f, cons, prob.nunknowns) if cons else \
        [[f.one if i == j else f.zero for i in range(prob.nunknowns)]
         for j in range(prob.nunknowns)]
    dim = len(basis)
    if f.p ** dim > cap:
        raise ComputationLimit(f"search space {f.p}^{dim} exceeds the cap {cap}")
    need = prob.jlay.total
    found = []
    for combo in itertools.product(range(f.p), repeat=dim):
        cvec = [f.zero] * prob.nunknowns
        for lam, bvec in zip(combo, basis):
            if lam == 0:
                continue
            lamc = f.coerce(lam)
            for u in range(prob.nunknowns):
                cvec[u] = f.add(cvec[u], f.mul(lamc, bvec[u]))
        if prob.kernel_map_rank(cvec) == need:
            found.append(tuple(cvec))
    return found


def bruteforce_lifting_exists(pr: RingExtension, n: PresentedModule,
                              cap: int = 200000) -> bool:
    return bool(bruteforce_liftings(pr, n, cap))
