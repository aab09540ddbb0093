"""Canonical modules, MCM approximations, FID hulls, omega-covers.

The approximation of a CM module N of codimension c is built constructively:
dualize (N^v = Ext^c(N, omega)), resolve c steps, omega-dualize the c-th
syzygy, and splice.  Every emitted triple carries machine-checked
certificates: exactness of the sequence, MCM-ness of the middle term, and an
explicit finite resolution of the kernel by direct sums of omega twists.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import ValidationError
from .freemod import FreeModule, Vec
from .homalg import ExtClass, canonical_module, ext, extension_from_class, \
    yoneda_class_of_extension
from .linalg import solve_matrix
from .modules import (HomModule, PModMap, PresentedModule, SubmoduleGB,
                      find_isomorphism, kernel_of_map, module_hom, submodule_of)
from .resolution import depth, is_mcm, resolve
from .ring import GradedRing, Poly

__all__ = [
    "AddOmegaComplex", "ApproxTriple", "HullTriple", "canonical_module",
    "omega_is_free_twist", "maximal_ideal_module", "mcm_approx_cm",
    "approx_residue_field_dim2", "omega_cover", "fid_hull", "q_prime",
    "fundamental_module", "certify_short_exact",
]


def omega_is_free_twist(w: PresentedModule) -> int | None:
    """The twist e with w = A(-e) when w is free of rank one, else None."""
    mm, _, _ = w.minimalize()
    if mm.ngens == 1 and not mm.relations:
        return mm.gen_degrees[0]
    return None


def maximal_ideal_module(ring: GradedRing) -> PresentedModule:
    """The irrelevant maximal ideal as a presented module."""
    amod = PresentedModule.ring_module(ring)
    gens = [amod.free.from_entries([ring.var(i)]) for i in range(ring.nvars)]
    return submodule_of(amod, gens)


def certify_short_exact(rho: PModMap, pi: PModMap) -> dict:
    """Exactness certificate for 0 -> L -> M -> N -> 0 by exact GB comparisons."""
    out = {}
    out["rho injective"] = rho.is_injective()
    out["pi surjective"] = pi.is_surjective()
    out["pi o rho = 0"] = pi.compose(rho).is_zero_map
    ker, incl = kernel_of_map(pi)
    cols = [c for c in rho.columns() if not c.is_zero]
    gb = SubmoduleGB(rho.target.free, cols + list(rho.target.relations))
    out["ker pi = im rho"] = all(gb.contains(incl.column(j)) for j in range(ker.ngens))
    out["exact"] = all(out.values())
    return out


@dataclass
class AddOmegaComplex:
    """A complex V_{r-1} -> ... -> V_0 -> T with V_j a direct sum of omega twists.

    ``twists[j]`` lists the twists of V_j; ``mats[j]`` (for j >= 1) is the
    polynomial matrix of V_j -> V_{j-1} acting blockwise as multiplication;
    ``aug`` is the map V_0 -> T (a PModMap).
    """

    omega: PresentedModule
    twists: tuple
    mats: tuple
    aug: PModMap | None

    @property
    def length(self) -> int:
        return len(self.twists)

    def module(self, j: int) -> PresentedModule:
        parts = [self.omega.twist(t) for t in self.twists[j]]
        if not parts:
            return PresentedModule.zero_module(self.omega.ring)
        return PresentedModule.direct_sum(parts)

    def map(self, j: int) -> PModMap:
        """The blockwise map V_j -> V_{j-1} (j >= 1)."""
        ring = self.omega.ring
        src, tgt = self.module(j), self.module(j - 1)
        ng = self.omega.ngens
        mat = self.mats[j - 1]
        entries = [[ring.zero] * src.ngens for _ in range(tgt.ngens)]
        for r in range(len(self.twists[j - 1])):
            for s in range(len(self.twists[j])):
                p = mat[r][s]
                if p.is_zero:
                    continue
                for k in range(ng):
                    entries[r * ng + k][s * ng + k] = entries[r * ng + k][s * ng + k] + p
        return PModMap(src, tgt, entries)

    def certify(self) -> dict:
        """d^2 = 0, exactness in the middle, injectivity at the top, and that
        the augmentation maps onto its target with kernel = image of map(1)."""
        out = {}
        r = self.length
        if r == 0:
            out["exact"] = self.aug is None or self.aug.source.ngens == 0
            return out
        if self.aug is not None:
            out["aug surjective"] = self.aug.is_surjective()
            if r == 1:
                out["aug injective"] = self.aug.is_injective()
            if r >= 2:
                out["aug o d1 = 0"] = self.aug.compose(self.map(1)).is_zero_map
                ker, incl = kernel_of_map(self.aug)
                cols = [c for c in self.map(1).columns() if not c.is_zero]
                gb = SubmoduleGB(self.aug.source.free, cols + list(self.aug.source.relations))
                out["ker aug = im d1"] = all(gb.contains(incl.column(j))
                                             for j in range(ker.ngens))
        for j in range(2, r):
            dj, djm1 = self.map(j), self.map(j - 1)
            out[f"d{j-1} o d{j} = 0"] = djm1.compose(dj).is_zero_map
            ker, incl = kernel_of_map(djm1)
            cols = [c for c in dj.columns() if not c.is_zero]
            gb = SubmoduleGB(djm1.source.free, cols + list(djm1.source.relations))
            out[f"ker d{j-1} = im d{j}"] = all(gb.contains(incl.column(t))
                                               for t in range(ker.ngens))
        if r >= 2:
            out["top injective"] = self.map(r - 1).is_injective()
        out["exact"] = all(out.values())
        return out


@dataclass
class ApproxTriple:
    """0 -> L -> M -> N -> 0 with M maximal Cohen-Macaulay and L of finite
    injective dimension (witnessed by an Add(omega) resolution)."""

    n: PresentedModule
    l: PresentedModule
    m: PresentedModule
    rho: PModMap
    pi: PModMap
    minimal: bool
    l_omega_res: AddOmegaComplex | None
    certificates: dict = field(default_factory=dict)


@dataclass
class HullTriple:
    """0 -> N -> L' -> M' -> 0 with L' of finite injective dimension and M' MCM."""

    n: PresentedModule
    l_prime: PresentedModule
    m_prime: PresentedModule
    iota: PModMap
    eta: PModMap
    l_omega_res: AddOmegaComplex | None
    certificates: dict = field(default_factory=dict)


def _is_minimal_triple(l: PresentedModule, m: PresentedModule, rho: PModMap,
                       w: PresentedModule) -> bool:
    """No twist of omega splits off the triple: there is no pair
    a: omega(t) -> L, b: M -> omega(t) with b o rho o a a unit (End(omega)_0 = k)."""
    if l.is_zero():
        return True
    ldegs = Counter(l.minimal_gen_degrees())
    mdegs = Counter(m.minimal_gen_degrees())
    wdegs = w.minimal_gen_degrees()
    for t in sorted({wdegs[0] - d for d in ldegs}):
        shifted = Counter(g - t for g in wdegs)
        if not (shifted <= ldegs and shifted <= mdegs):
            continue
        wt = w.twist(t)
        h_in = module_hom(wt, l)
        h_out = module_hom(m, wt)
        bas_in = h_in.module.graded_basis(0)
        bas_out = h_out.module.graded_basis(0)
        f = w.ring.field
        for ci in range(len(bas_in)):
            coords = [f.one if x == ci else f.zero for x in range(len(bas_in))]
            a = h_in.decode(h_in.module.element_from_coords(coords, 0, bas_in))
            ra = rho.compose(a)
            for cj in range(len(bas_out)):
                coords = [f.one if x == cj else f.zero for x in range(len(bas_out))]
                b = h_out.decode(h_out.module.element_from_coords(coords, 0, bas_out))
                p = express_as_multiplication(wt, b.compose(ra).entries, 0)
                if p is None:
                    raise ValidationError("degree-0 endomorphism of omega is not "
                                          "a scalar (ring not connected CM?)")
                if not p.is_zero:
                    return False
    return True


def _hom_slot_vector(hom: HomModule, dc, j: int, t: int) -> Vec:
    """The element of Hom(K, omega)'s host encoding e_j^* . (inclusion K -> F),
    i.e. K-gen s |-> dc[j][s] * omega-gen t."""
    w = hom.n
    terms = {}
    for s in range(len(hom.m.gen_degrees)):
        p = dc.entries[j][s]
        if p.is_zero:
            continue
        for mono, x in p.terms.items():
            terms[(s * w.ngens + t, mono)] = x
    return Vec(hom.h0.free, terms)


def mcm_approx_cm(n: PresentedModule, c: int,
                  omega: PresentedModule | None = None) -> ApproxTriple:
    """Minimal MCM approximation of a CM module of codimension c."""
    ring = n.ring
    amod = PresentedModule.ring_module(ring)
    if not is_mcm(amod):
        raise ValidationError("the ring itself is not Cohen-Macaulay")
    if n.is_zero():
        raise ValidationError("cannot approximate the zero module")
    dim_n = n.krull_dim()
    if dim_n != ring.dim() - c:
        raise ValidationError(
            f"module has codimension {ring.dim() - dim_n}, not {c}")
    if depth(n) != dim_n:
        raise ValidationError(
            f"module is not Cohen-Macaulay: depth {depth(n)} < dim {dim_n}")
    w = omega if omega is not None else canonical_module(ring)
    if c == 0:
        zero = PresentedModule.zero_module(ring)
        triple = ApproxTriple(
            n=n, l=zero, m=n, rho=PModMap.zero(zero, n), pi=PModMap.identity(n),
            minimal=True,
            l_omega_res=AddOmegaComplex(w, (), (), None))
        triple.certificates = {"exact": True, "M is MCM": True, "L resolution": {"exact": True}}
        return triple

    ndual_raw = ext(c, n, w).presentation
    ndual, _, _ = ndual_raw.minimalize()
    res = resolve(ndual, steps=c + 1)
    fc = res.free(c)
    if fc.rank == 0:
        raise ValidationError("dual module has projective dimension < c (internal)")
    k_mod = PresentedModule(ring, fc.gen_degrees,
                            [res.diff(c + 1).column(j)
                             for j in range(res.diff(c + 1).source.rank)],
                            check=False)
    hom = module_hom(k_mod, w)
    xmin, to_minx, _ = hom.module.minimalize()

    # Theta: Hom(F_{c-1}, omega) -> X, generator (j, t) |-> (e_j^* o incl) . w_t
    dc = res.diff(c)
    fcm1 = res.free(c - 1)
    host_gb = SubmoduleGB(hom.h0.free,
                          hom.inclusion.columns() + list(hom.h0.relations))
    theta_cols_min = []
    for j in range(fcm1.rank):
        for t in range(w.ngens):
            v = _hom_slot_vector(hom, dc, j, t)
            coeffs = host_gb.coeffs_of(v)
            if coeffs is None:
                raise ValidationError("restriction map does not land in Hom(K, omega)")
            col = hom.module.free.from_entries(coeffs[: hom.module.ngens])
            theta_cols_min.append(to_minx.apply_vec(col))

    # N' = coker(Theta) on the generators of X; identify with N
    ncand = PresentedModule(ring, xmin.gen_degrees,
                            list(xmin.relations) + [c for c in theta_cols_min
                                                    if not c.is_zero],
                            check=False)
    iso = find_isomorphism(ncand, n)
    if iso is None:
        raise ValidationError("biduality failed: cokernel of the omega-dual "
                              "is not isomorphic to the input (internal)")
    pi = PModMap(xmin, n, iso.entries)
    l_mod, rho = kernel_of_map(pi)

    # Add(omega) resolution of L: 0 -> Hom(F_0,w) -> ... -> Hom(F_{c-1},w) -> L -> 0
    mats = []
    for j in range(c - 1, 0, -1):
        dj = res.diff(j)       # F_j -> F_{j-1}; transposed blockwise on Hom
        mats.append([[dj.entries[s][r] for s in range(dj.target.rank)]
                     for r in range(dj.source.rank)])
    twists = [tuple(res.free(j).gen_degrees) for j in range(c - 1, -1, -1)]
    l_gb = SubmoduleGB(xmin.free, rho.columns() + list(xmin.relations))
    aug_cols = []
    for v in theta_cols_min:
        coeffs = l_gb.coeffs_of(v)
        if coeffs is None:
            raise ValidationError("image of Theta is not inside ker(pi) (internal)")
        aug_cols.append(l_mod.free.from_entries(coeffs[: l_mod.ngens]))
    addres = AddOmegaComplex(w, tuple(twists), tuple(mats),
                             PModMap.from_columns(AddOmegaComplex(
                                 w, (twists[0],), (), None).module(0), l_mod, aug_cols))

    cert = certify_short_exact(rho, pi)
    cert["M is MCM"] = is_mcm(xmin)
    cert["L resolution"] = addres.certify()
    minimal = _is_minimal_triple(l_mod, xmin, rho, w)
    triple = ApproxTriple(n=n, l=l_mod, m=xmin, rho=rho, pi=pi,
                          minimal=minimal, l_omega_res=addres, certificates=cert)
    if not (cert["exact"] and cert["M is MCM"] and cert["L resolution"]["exact"]):
        raise ValidationError(f"approximation failed its own certificate: {cert}")
    return triple


def approx_residue_field_dim2(ring: GradedRing,
                              omega: PresentedModule | None = None) -> ApproxTriple:
    """MCM approximation of k over a 2-dimensional CM ring, via Hom(-, omega)
    applied to the presentation of the maximal ideal."""
    if ring.dim() != 2:
        raise ValidationError(f"ring has dimension {ring.dim()}, need 2")
    amod = PresentedModule.ring_module(ring)
    if not is_mcm(amod):
        raise ValidationError("the ring itself is not Cohen-Macaulay")
    w = omega if omega is not None else canonical_module(ring)
    k = PresentedModule.residue_field(ring)
    res = resolve(k, steps=3)
    f1, f2 = res.free(1), res.free(2)
    k_mod = PresentedModule(ring, f2.gen_degrees,
                            [res.diff(3).column(j) for j in range(res.diff(3).source.rank)],
                            check=False)
    hom = module_hom(k_mod, w)
    xmin, to_minx, _ = hom.module.minimalize()
    d2 = res.diff(2)
    host_gb = SubmoduleGB(hom.h0.free,
                          hom.inclusion.columns() + list(hom.h0.relations))
    theta_cols = []
    for j in range(f1.rank):
        for t in range(w.ngens):
            v = _hom_slot_vector(hom, d2, j, t)
            coeffs = host_gb.coeffs_of(v)
            if coeffs is None:
                raise ValidationError("restriction map escapes Hom(Syz, omega)")
            theta_cols.append(to_minx.apply_vec(
                hom.module.free.from_entries(coeffs[: hom.module.ngens])))
    ncand = PresentedModule(ring, xmin.gen_degrees,
                            list(xmin.relations) + [v for v in theta_cols if not v.is_zero],
                            check=False)
    iso = find_isomorphism(ncand, k)
    if iso is None:
        raise ValidationError("cokernel of the omega-dualized presentation is not k")
    pi = PModMap(xmin, k, iso.entries)
    l_mod, rho = kernel_of_map(pi)
    d1 = res.diff(1)
    mats = ([[d1.entries[s][r] for s in range(d1.target.rank)]
             for r in range(d1.source.rank)],)
    twists = (tuple(f1.gen_degrees), tuple(res.f0.gen_degrees))
    l_gb = SubmoduleGB(xmin.free, rho.columns() + list(xmin.relations))
    aug_cols = []
    for v in theta_cols:
        coeffs = l_gb.coeffs_of(v)
        if coeffs is None:
            raise ValidationError("Theta image escapes ker(pi) (internal)")
        aug_cols.append(l_mod.free.from_entries(coeffs[: l_mod.ngens]))
    v0 = AddOmegaComplex(w, (twists[0],), (), None).module(0)
    addres = AddOmegaComplex(w, twists, tuple(mats),
                             PModMap.from_columns(v0, l_mod, aug_cols))
    cert = certify_short_exact(rho, pi)
    cert["M is MCM"] = is_mcm(xmin)
    cert["L resolution"] = addres.certify()
    triple = ApproxTriple(n=k, l=l_mod, m=xmin, rho=rho, pi=pi,
                          minimal=_is_minimal_triple(l_mod, xmin, rho, w),
                          l_omega_res=addres, certificates=cert)
    if not (cert["exact"] and cert["M is MCM"] and cert["L resolution"]["exact"]):
        raise ValidationError(f"residue-field approximation failed: {cert}")
    return triple


def omega_cover(m: PresentedModule, omega: PresentedModule | None = None):
    """0 -> M -> omega^n -> M' -> 0 from the minimal generators of Hom(M, omega).

    Returns (iota, W, mprime, eta, certificate); n = mu(Hom(M, omega)).
    """
    ring = m.ring
    if not is_mcm(m):
        raise ValidationError("omega-cover requires a maximal Cohen-Macaulay module")
    w = omega if omega is not None else canonical_module(ring)
    hom = module_hom(m, w)
    hmin, _, from_min = hom.module.minimalize()
    degs = hmin.gen_degrees
    psis = [hom.decode(from_min.column(i)) for i in range(hmin.ngens)]
    wds = PresentedModule.direct_sum([w.twist(d) for d in degs]) if degs \
        else PresentedModule.zero_module(ring)
    ng = w.ngens
    entries = [[ring.zero] * m.ngens for _ in range(wds.ngens)]
    for i, psi in enumerate(psis):
        for k in range(ng):
            for j in range(m.ngens):
                entries[i * ng + k][j] = psi.entries[k][j]
    iota = PModMap(m, wds, entries)
    mprime = iota.cokernel()
    eta = PModMap(wds, mprime, [[ring.one if a == b else ring.zero
                                 for b in range(wds.ngens)] for a in range(mprime.ngens)])
    cert = certify_short_exact(iota, eta)
    cert["M' is MCM"] = mprime.is_zero() or is_mcm(mprime)
    if not (cert["exact"] and cert["M' is MCM"]):
        raise ValidationError(f"omega-cover failed its certificate: {cert}")
    return iota, wds, mprime, eta, cert


def fid_hull(t: ApproxTriple, omega: PresentedModule | None = None) -> HullTriple:
    """Hull 0 -> N -> L' -> M' -> 0: push the omega-cover of M out along pi."""
    ring = t.n.ring
    w = omega if omega is not None else (t.l_omega_res.omega if t.l_omega_res
                                         else canonical_module(ring))
    iota_m, wds, mprime, eta_w, cover_cert = omega_cover(t.m, w)
    n = t.n
    # L' = coker(M --(pi, -iota)--> N (+) W)
    gd = tuple(n.gen_degrees) + tuple(wds.gen_degrees)
    lfree = FreeModule(ring, gd)
    rels = [Vec(lfree, dict(r.terms)) for r in n.relations]
    nn = n.ngens
    for r in wds.relations:
        rels.append(Vec(lfree, {(nn + c, e): x for (c, e), x in r.terms.items()}))
    f = ring.field
    for j in range(t.m.ngens):
        terms = dict(t.pi.column(j).terms)
        for (c, e), x in iota_m.column(j).terms.items():
            key = (nn + c, e)
            s = f.sub(terms.get(key, f.zero), x)
            if f.is_zero(s):
                terms.pop(key, None)
            else:
                terms[key] = s
        if terms:
            rels.append(Vec(lfree, terms))
    lprime = PresentedModule(ring, gd, rels, check=False)
    iota = PModMap(n, lprime, [[ring.one if a == b else ring.zero
                                for b in range(nn)] for a in range(lprime.ngens)])
    eta = PModMap(lprime, mprime,
                  [[ring.zero] * nn + [ring.one if a == b else ring.zero
                                       for b in range(wds.ngens)]
                   for a in range(mprime.ngens)])
    cert = {"cover": cover_cert}
    cert.update({f"hull {k}": v for k, v in certify_short_exact(iota, eta).items()})
    # Add(omega) resolution of L': splice L's resolution onto the cover W.
    # W -> L' is the W-block inclusion; its kernel is iota_m(rho(L)), resolved
    # by L's own complex pushed through iota_m o rho.
    aug = PModMap(wds, lprime,
                  [[ring.one if a == nn + b else ring.zero
                    for b in range(wds.ngens)] for a in range(lprime.ngens)])
    cover_twists = _cover_twists(wds, w)
    if t.l_omega_res is not None and t.l_omega_res.length and not t.l.is_zero():
        lres = t.l_omega_res
        first = iota_m.compose(t.rho).compose(lres.aug)
        mat0 = _express_block_matrix(w, first, lres.twists[0], cover_twists)
        addres = AddOmegaComplex(w, (cover_twists,) + lres.twists,
                                 (mat0,) + lres.mats, aug)
    else:
        addres = AddOmegaComplex(w, (cover_twists,), (), aug)
    cert["L' resolution"] = addres.certify()
    hull = HullTriple(n=n, l_prime=lprime, m_prime=mprime, iota=iota, eta=eta,
                      l_omega_res=addres, certificates=cert)
    if not cert["hull exact"]:
        raise ValidationError(f"hull failed its certificate: {cert}")
    return hull


def _cover_twists(wds: PresentedModule, w: PresentedModule) -> tuple:
    """Recover the twist list of a direct sum of omega twists."""
    ng = w.ngens
    out = []
    for i in range(0, wds.ngens, ng):
        out.append(w.gen_degrees[0] - wds.gen_degrees[i])
    return tuple(out)


def _express_block_matrix(w: PresentedModule, f: PModMap,
                          src_twists, tgt_twists):
    """Express a map between direct sums of omega twists as a polynomial matrix."""
    ring = w.ring
    ng = w.ngens
    rows = len(tgt_twists)
    cols = len(src_twists)
    out = [[ring.zero] * cols for _ in range(rows)]
    for r in range(rows):
        for s in range(cols):
            block = [[f.entries[r * ng + a][s * ng + b] for b in range(ng)]
                     for a in range(ng)]
            p = express_as_multiplication(w, block, tgt_twists[r] - src_twists[s])
            if p is None:
                raise ValidationError("block is not multiplication by a ring element")
            out[r][s] = p
    return out


def express_as_multiplication(w: PresentedModule, block, delta: int) -> Poly | None:
    """Find a in A_delta with block = a . id on w, using End(omega) = A."""
    ring = w.ring
    f = ring.field
    mons = list(ring.std_monomials_of_degree(delta)) if delta >= 0 else []
    cols = []
    rhs = []
    bases = [w.graded_basis(w.gen_degrees[k] + delta) for k in range(w.ngens)]
    for k in range(w.ngens):
        target = w.free.zero
        for a in range(w.ngens):
            p = block[a][k]
            if not p.is_zero:
                target = target + Vec(w.free, {(a, e): x for e, x in p.terms.items()})
        rhs.extend(w.coords(target, w.gen_degrees[k] + delta, bases[k]))
    for mono in mons:
        col = []
        for k in range(w.ngens):
            v = w.free.basis_vec(k).mono_mul(tuple(mono), f.one)
            col.extend(w.coords(v, w.gen_degrees[k] + delta, bases[k]))
        cols.append(col)
    nrows = len(rhs)
    a_rows = [[cols[s][r] for s in range(len(cols))] for r in range(nrows)]
    sol = solve_matrix(f, a_rows, [[x] for x in rhs], len(cols))
    if sol is None:
        return None
    terms = {}
    for s, mono in enumerate(mons):
        if not f.is_zero(sol[s][0]):
            terms[tuple(mono)] = sol[s][0]
    return ring._make(terms)


def q_prime(l_prime: PresentedModule, addres: AddOmegaComplex):
    """Q' = Hom(omega, L') with the finite free resolution induced from the
    Add(omega) resolution of L' (Hom(omega, omega(t)) = A(t))."""
    if addres is None:
        raise ValidationError("q_prime needs the Add(omega) resolution certificate")
    w = addres.omega
    ring = w.ring
    if addres.length == 0:
        return PresentedModule.zero_module(ring), None
    gd0 = tuple(-t for t in addres.twists[0])
    if addres.length == 1:
        q = PresentedModule(ring, gd0)
        resolution = resolve(q, steps=0)
        return q, resolution
    rel_cols = []
    free0 = FreeModule(ring, gd0)
    mat = addres.mats[0]
    for s in range(len(addres.twists[1])):
        entries = [mat[r][s] for r in range(len(addres.twists[0]))]
        rel_cols.append(free0.from_entries(entries))
    q = PresentedModule(ring, gd0, rel_cols, check=False)
    qmin, _, _ = q.minimalize()
    resolution = resolve(qmin, steps=addres.length + 1)
    if resolution.truncated:
        raise ValidationError("Q' did not resolve finitely (internal)")
    return qmin, resolution


def fundamental_module(ring: GradedRing, omega: PresentedModule | None = None):
    """The fundamental extension 0 -> omega -> E -> m -> 0 of a 2-dim CM ring.

    Returns (E, iota, pi, mm, cls).  Errors unless Ext^1(m, omega) is exactly
    one-dimensional (no silent generator choice).
    """
    if ring.dim() != 2:
        raise ValidationError(f"fundamental module needs dimension 2, got {ring.dim()}")
    amod = PresentedModule.ring_module(ring)
    if not is_mcm(amod):
        raise ValidationError("the ring itself is not Cohen-Macaulay")
    w = omega if omega is not None else canonical_module(ring)
    mm = maximal_ideal_module(ring)
    sp = ext(1, mm, w)
    if not sp.finite or sp.total_dim != 1:
        dims = sp.dims_by_degree if sp.finite else "infinite"
        raise ValidationError(
            f"Ext^1(m, omega) must be one-dimensional to single out the "
            f"fundamental class; got {dims}")
    cls = ExtClass(sp, [ring.field.one])
    e_mod, iota, pi = extension_from_class(cls)
    emin, _, _ = e_mod.minimalize()
    back = yoneda_class_of_extension(iota, pi, space=sp)
    if back.is_zero:
        raise ValidationError("fundamental sequence split (internal)")
    if not is_mcm(emin):
        raise ValidationError("fundamental module is not MCM (internal)")
    return e_mod, iota, pi, mm, cls
