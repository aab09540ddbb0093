"""Matrix factorizations of hypersurfaces and the Knorrer constructions.

A factorization (phi, psi) of f over Q satisfies phi.psi = psi.phi = f.I
exactly; both products are rechecked on every construction.  The block
forms here follow the classical displays:

    Phi = [[phi, t.I], [-t.I, psi]],   Psi = [[psi, -t.I], [t.I, phi]]

which factor f + t^2 over Q[t], and the periodic complex

    N <- A^n <- A^2n <- A^2n <- ...   (maps [t.I phi], Phi, Psi, Phi, ...)

over A = Q[t]/(f + t^2).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .freemod import FreeModule, ModuleMap, Vec
from .homalg import canonical_module
from .modules import (PModMap, PresentedModule, SubmoduleGB, find_isomorphism,
                      kernel_of_map, module_hom)
from .resolution import FreeResolution, is_mcm, resolve
from .ring import GradedRing, Poly

__all__ = ["MatrixFactorization", "mf_from_module", "knorrer",
           "eisenbud_resolution", "knorrer_approx", "mf_stats",
           "hypersurface_quotient", "restrict_to_hypersurface_quotient"]


def _matmul(ring: GradedRing, a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ring.zero
            for s in range(k):
                if not a[i][s].is_zero and not b[s][j].is_zero:
                    acc = acc + a[i][s] * b[s][j]
            row.append(acc)
        out.append(row)
    return out


@dataclass(frozen=True)
class MatrixFactorization:
    """phi, psi square over a polynomial ring Q with phi.psi = psi.phi = f.I."""

    q: GradedRing
    f: Poly
    phi: tuple
    psi: tuple
    degs0: tuple
    degs1: tuple

    def __post_init__(self):
        if self.q.is_quotient:
            raise ValidationError("factorization base must be a polynomial ring")
        n = len(self.degs0)
        if not (len(self.phi) == len(self.psi) == len(self.degs1) == n):
            raise ValidationError("phi/psi must be square of the same size")
        d = self.f.degree()
        for i in range(n):
            for j in range(n):
                p, s = self.phi[i][j], self.psi[i][j]
                if not p.is_zero and p.degree() != self.degs1[j] - self.degs0[i]:
                    raise ValidationError(f"phi[{i}][{j}] has the wrong degree")
                if not s.is_zero and s.degree() != self.degs0[j] + d - self.degs1[i]:
                    raise ValidationError(f"psi[{i}][{j}] has the wrong degree")
        for prod in (_matmul(self.q, self.phi, self.psi),
                     _matmul(self.q, self.psi, self.phi)):
            for i in range(n):
                for j in range(n):
                    want = self.f if i == j else self.q.zero
                    if not (prod[i][j] - want).is_zero:
                        raise ValidationError(
                            "phi.psi = psi.phi = f.I fails at "
                            f"({i},{j}): {prod[i][j]} != {want}")

    @property
    def n(self) -> int:
        return len(self.degs0)

    def __repr__(self) -> str:
        return f"MF(n={self.n}, f={self.f})"


def hypersurface_quotient(mf_or_q, f: Poly | None = None) -> GradedRing:
    """Q/(f) for a factorization (or an explicit pair Q, f)."""
    if isinstance(mf_or_q, MatrixFactorization):
        q, f = mf_or_q.q, mf_or_q.f
    else:
        q = mf_or_q
    return GradedRing(q.field, q.names, q.degrees, q.order, [f])


def _lift_poly(p: Poly, target: GradedRing, pad: int = 0) -> Poly:
    terms = {tuple(e) + (0,) * pad: c for e, c in p.terms.items()}
    return target._make(terms)


def mf_from_module(n: PresentedModule) -> MatrixFactorization:
    """Factorization with coker(phi-bar) = N, from the minimal presentation of
    an MCM module over a hypersurface B = Q/(f)."""
    b = n.ring
    if not b.is_quotient or len(b.ideal_gens) != 1:
        raise ValidationError("base ring is not a hypersurface quotient Q/(f)")
    f = b.ideal_gens[0]
    q = b.ambient
    if not is_mcm(n):
        raise ValidationError("module is not maximal Cohen-Macaulay")
    nmin, _, _ = n.minimalize()
    if not nmin.relations:
        raise ValidationError(
            "module is free over the hypersurface; its factorization "
            "degenerates (f.I, I) and is not minimal")
    res = resolve(nmin, 1)
    d1 = res.diff(1)
    if d1.source.rank != d1.target.rank:
        raise ValidationError(
            "presentation matrix is not square: the module has a free "
            "summand or the resolution is not yet periodic")
    nn = d1.target.rank
    phi = tuple(tuple(q._make(dict(d1.entries[i][j].terms)) for j in range(nn))
                for i in range(nn))
    free0 = FreeModule(q, d1.target.gen_degrees)
    cols = [Vec(free0, {(i, e): c for i in range(nn)
                        for e, c in phi[i][j].terms.items()}) for j in range(nn)]
    gb = SubmoduleGB(free0, cols)
    psi_cols = []
    for j in range(nn):
        coeffs = gb.coeffs_of(free0.basis_vec(j).poly_mul(f))
        if coeffs is None:
            raise ValidationError(
                "f.F0 is not contained in the column span: the module has a "
                "free summand over the hypersurface")
        psi_cols.append(coeffs)
    psi = tuple(tuple(psi_cols[j][i] for j in range(nn)) for i in range(nn))
    mf = MatrixFactorization(q, f, phi, psi,
                             tuple(d1.target.gen_degrees),
                             tuple(d1.source.gen_degrees))
    cok = PresentedModule(b, mf.degs0,
                          [Vec(nmin.free, dict(c.terms)) for c in cols], check=False)
    if find_isomorphism(cok, n) is None:
        raise ValidationError("coker(phi) is not the input module (internal)")
    return mf


def _double_grading(mf: MatrixFactorization) -> MatrixFactorization:
    q2 = GradedRing(mf.q.field, mf.q.names, tuple(2 * d for d in mf.q.degrees),
                    mf.q.order)
    remap = lambda p: q2._make(dict(p.terms))
    return MatrixFactorization(
        q2, remap(mf.f),
        tuple(tuple(remap(p) for p in row) for row in mf.phi),
        tuple(tuple(remap(p) for p in row) for row in mf.psi),
        tuple(2 * d for d in mf.degs0), tuple(2 * d for d in mf.degs1))


def _evenize(mf: MatrixFactorization) -> MatrixFactorization:
    return mf if mf.f.degree() % 2 == 0 else _double_grading(mf)


def _fresh_name(taken, base: str = "t") -> str:
    if base not in taken:
        return base
    i = 0
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def knorrer(mf: MatrixFactorization) -> MatrixFactorization:
    """Size-2n factorization of f + t^2 over Q[t] (char k != 2)."""
    if mf.q.field.char == 2:
        raise ValidationError('the quadratic suspension needs "Char k != 2"')
    m = _evenize(mf)
    d = m.f.degree()
    h = d // 2
    tname = _fresh_name(m.q.names)
    q2 = GradedRing(m.q.field, m.q.names + (tname,), m.q.degrees + (h,), m.q.order)
    t = q2.var(len(m.q.names))
    lift = lambda p: _lift_poly(p, q2, pad=1)
    z = q2.zero
    nn = m.n
    big_phi = []
    big_psi = []
    for i in range(nn):
        big_phi.append(tuple(lift(m.phi[i][j]) for j in range(nn))
                       + tuple(t if j == i else z for j in range(nn)))
        big_psi.append(tuple(lift(m.psi[i][j]) for j in range(nn))
                       + tuple(-t if j == i else z for j in range(nn)))
    for i in range(nn):
        big_phi.append(tuple(-t if j == i else z for j in range(nn))
                       + tuple(lift(m.psi[i][j]) for j in range(nn)))
        big_psi.append(tuple(t if j == i else z for j in range(nn))
                       + tuple(lift(m.phi[i][j]) for j in range(nn)))
    return MatrixFactorization(
        q2, lift(m.f) + t * t,
        tuple(big_phi), tuple(big_psi),
        m.degs0 + tuple(x - h for x in m.degs1),
        m.degs1 + tuple(x + h for x in m.degs0))


def restrict_to_hypersurface_quotient(n: PresentedModule, a: GradedRing,
                                      extra_vanishing: list[Poly],
                                      scale: int = 1) -> PresentedModule:
    """N as a module over a larger quotient a, the listed extra variables
    acting by zero; degrees multiply by ``scale`` (grading doubling)."""
    b = n.ring
    nmin, _, _ = n.minimalize()
    pad = a.nvars - b.nvars
    gd = tuple(scale * d for d in nmin.gen_degrees)
    free = FreeModule(a, gd)
    rels = []
    for r in nmin.relations:
        rels.append(Vec(free, {(c, tuple(e) + (0,) * pad): x
                               for (c, e), x in r.terms.items()}))
    for p in extra_vanishing:
        for i in range(nmin.ngens):
            v = free.basis_vec(i).poly_mul(p)
            if not v.is_zero:
                rels.append(v)
    return PresentedModule(a, gd, rels, check=False)


def eisenbud_resolution(mf: MatrixFactorization, steps: int,
                        over_base: bool = False) -> FreeResolution:
    """Periodic free resolution from a factorization.

    Default: the complex N <- A^n <- A^2n <- ... over A = Q[t]/(f + t^2)
    with maps [t.I phi], Phi, Psi alternating.  With ``over_base`` the
    classical 2-periodic resolution of coker(phi) over Q/(f).
    """
    if steps < 2:
        raise ValidationError("the periodic shape needs steps >= 2")
    if over_base:
        a = hypersurface_quotient(mf)
        red = lambda p: a._make(dict(p.terms))
        d = mf.f.degree()
        mats = [mf.phi, mf.psi]
        degs = [mf.degs0, mf.degs1]
        frees = [FreeModule(a, mf.degs0)]
        maps = []
        for i in range(1, steps + 1):
            tw = d * (i // 2)
            src = FreeModule(a, tuple(x + tw for x in degs[i % 2]))
            mat = mats[(i + 1) % 2]
            maps.append(ModuleMap(src, frees[-1],
                                  [[red(p) for p in row] for row in mat]))
            frees.append(src)
        module = PresentedModule(a, mf.degs0, maps[0].columns(), check=False)
        return FreeResolution(module, frees[0], maps, PModMap.identity(module),
                              truncated=True)

    m = _evenize(mf)
    kn = knorrer(mf)
    a = hypersurface_quotient(kn)
    red = lambda p: a._make(dict(p.terms))
    h = m.f.degree() // 2
    t = a.var(a.nvars - 1)
    nn = m.n
    z = a.zero
    d1_entries = [[(t if j == i else z) for j in range(nn)]
                  + [red(_lift_poly(m.phi[i][j], kn.q, pad=1)) for j in range(nn)]
                  for i in range(nn)]
    f0 = FreeModule(a, m.degs0)
    e1 = FreeModule(a, tuple(x + h for x in kn.degs0))
    maps = [ModuleMap(e1, f0, d1_entries)]
    dd = kn.f.degree()
    prev = e1
    for i in range(2, steps + 1):
        if i % 2 == 0:
            mat, base = kn.phi, kn.degs1
            tw = h + dd * ((i - 2) // 2)
        else:
            mat, base = kn.psi, kn.degs0
            tw = h + dd * ((i - 1) // 2)
        src = FreeModule(a, tuple(x + tw for x in base))
        maps.append(ModuleMap(src, prev, [[red(p) for p in row] for row in mat]))
        prev = src
    module = PresentedModule(a, m.degs0, maps[0].columns(), check=False)
    return FreeResolution(module, f0, maps, PModMap.identity(module),
                          truncated=True)


def knorrer_approx(n: PresentedModule):
    """MCM approximation over A = Q[t]/(f + t^2) of an MCM module N over
    B = Q/(f): 0 -> L -> M -> N -> 0 with M from the suspended factorization
    of the dual and L free (the actual rank is certified, not assumed)."""
    from .cmapprox import AddOmegaComplex, ApproxTriple, _is_minimal_triple, \
        certify_short_exact

    b = n.ring
    if not b.is_quotient or len(b.ideal_gens) != 1:
        raise ValidationError("base ring is not a hypersurface quotient Q/(f)")
    if b.field.char == 2:
        raise ValidationError('the quadratic suspension needs "Char k != 2"')
    if not is_mcm(n):
        raise ValidationError("module is not maximal Cohen-Macaulay")
    nmin, _, _ = n.minimalize()

    scale = 2 if b.ideal_gens[0].degree() % 2 else 1
    if not nmin.relations:
        # N is B-free: N = coker(t.I) over A, approximated by the free cover.
        fake = _hypersurface_mf_seed(b)
        kn = knorrer(fake)
        a = hypersurface_quotient(kn)
        t = a.var(a.nvars - 1)
        n_a = restrict_to_hypersurface_quotient(n, a, [t], scale)
        m_mod = PresentedModule(a, tuple(scale * d for d in nmin.gen_degrees))
        pi = PModMap(m_mod, n_a, [[a.one if i == j else a.zero
                                   for j in range(m_mod.ngens)]
                                  for i in range(n_a.ngens)])
        l_mod, rho = kernel_of_map(pi)
        w = canonical_module(a)
        cert = certify_short_exact(rho, pi)
        cert["M is MCM"] = is_mcm(m_mod)
        lmin, _, _ = l_mod.minimalize()
        cert["L free"] = not lmin.relations
        addres = _free_as_add_omega(l_mod, w)
        cert["L resolution"] = addres.certify()
        triple = ApproxTriple(n=n_a, l=l_mod, m=m_mod, rho=rho, pi=pi,
                              minimal=_is_minimal_triple(l_mod, m_mod, rho, w),
                              l_omega_res=addres, certificates=cert)
        if not (cert["exact"] and cert["M is MCM"] and cert["L free"]):
            raise ValidationError(f"free-module approximation failed: {cert}")
        return triple

    w_b = canonical_module(b)
    ndual, _, _ = module_hom(n, w_b).module.minimalize()
    mf_dual = mf_from_module(ndual)
    kn = knorrer(mf_dual)
    a = hypersurface_quotient(kn)
    red = lambda p: a._make(dict(p.terms))
    m_even = _evenize(mf_dual)
    t = a.var(a.nvars - 1)
    h = m_even.f.degree() // 2
    nn = m_even.n
    z = a.zero

    # G = coker(Phi-bar) on the E1 basis; iota_G: G -> A^nn is [t.I phi-bar]
    g_degs = tuple(x + h for x in kn.degs0)
    g_free_target = FreeModule(a, g_degs)
    phi_cols = []
    for j in range(2 * nn):
        terms = {}
        for i in range(2 * nn):
            p = red(kn.phi[i][j])
            for e, c in p.terms.items():
                terms[(i, e)] = c
        phi_cols.append(Vec(g_free_target, terms))
    g_mod = PresentedModule(a, g_degs, phi_cols, check=False)
    d1_entries = [[(t if j == i else z) for j in range(nn)]
                  + [red(_lift_poly(m_even.phi[i][j], kn.q, pad=1))
                     for j in range(nn)] for i in range(nn)]

    w = canonical_module(a)
    hom = module_hom(g_mod, w)
    m_mod, to_min, _ = hom.module.minimalize()
    host_gb = SubmoduleGB(hom.h0.free,
                          hom.inclusion.columns() + list(hom.h0.relations))
    lam_cols = []
    wg = w.ngens
    for i in range(nn):
        for tt in range(wg):
            terms = {}
            for j in range(2 * nn):
                p = d1_entries[i][j]
                for e, c in p.terms.items():
                    terms[(j * wg + tt, e)] = c
            coeffs = host_gb.coeffs_of(Vec(hom.h0.free, terms))
            if coeffs is None:
                raise ValidationError("row functional does not restrict to G (internal)")
            lam_cols.append(to_min.apply_vec(
                hom.module.free.from_entries(coeffs[: hom.module.ngens])))

    n_a = restrict_to_hypersurface_quotient(n, a, [t], scale)
    ncand = PresentedModule(a, m_mod.gen_degrees,
                            list(m_mod.relations) + [c for c in lam_cols
                                                     if not c.is_zero], check=False)
    iso = find_isomorphism(ncand, n_a)
    if iso is None:
        raise ValidationError("cokernel of the free part is not N over the "
                              "suspended hypersurface (internal)")
    pi = PModMap(m_mod, n_a, iso.entries)
    l_mod, rho = kernel_of_map(pi)
    cert = certify_short_exact(rho, pi)
    cert["M is MCM"] = is_mcm(m_mod)
    lmin, _, _ = l_mod.minimalize()
    cert["L free"] = not lmin.relations
    cert["L rank"] = lmin.ngens

    # cross-check: 0 <- N <- A^n <- G(N) <- 0 for the factorization of N itself
    mf_n = mf_from_module(nmin)
    kn_n = knorrer(mf_n)
    m_n = _evenize(mf_n)
    gn_degs = tuple(x + h for x in kn_n.degs0)
    gn_free = FreeModule(a, gn_degs)
    gn_cols = []
    for j in range(2 * m_n.n):
        terms = {}
        for i in range(2 * m_n.n):
            p = red(kn_n.phi[i][j])
            for e, c in p.terms.items():
                terms[(i, e)] = c
        gn_cols.append(Vec(gn_free, terms))
    gn_mod = PresentedModule(a, gn_degs, gn_cols, check=False)
    free_cover = PresentedModule(a, m_n.degs0)
    aug = PModMap(free_cover, n_a, [[a.one if i == j else a.zero
                                     for j in range(free_cover.ngens)]
                                    for i in range(n_a.ngens)])
    incl_entries = [[(t if j == i else z) for j in range(m_n.n)]
                    + [red(_lift_poly(m_n.phi[i][j], kn_n.q, pad=1))
                       for j in range(m_n.n)] for i in range(m_n.n)]
    incl = PModMap(gn_mod, free_cover, incl_entries)
    cert["eisenbud sequence"] = certify_short_exact(incl, aug)["exact"]

    if not lmin.relations:
        addres = _free_as_add_omega(l_mod, w)
    else:
        addres = None
    if addres is not None:
        cert["L resolution"] = addres.certify()
    triple = ApproxTriple(n=n_a, l=l_mod, m=m_mod, rho=rho, pi=pi,
                          minimal=_is_minimal_triple(l_mod, m_mod, rho, w),
                          l_omega_res=addres, certificates=cert)
    if not (cert["exact"] and cert["M is MCM"] and cert["L free"]
            and cert["eisenbud sequence"]):
        raise ValidationError(f"suspended approximation failed: {cert}")
    return triple


def _hypersurface_mf_seed(b: GradedRing) -> MatrixFactorization:
    """The degenerate factorization (f, 1) used only to reach Q[t]/(f + t^2)."""
    f = b.ideal_gens[0]
    q = b.ambient
    return MatrixFactorization(q, f, ((f,),), ((q.one,),), (0,), (f.degree(),))


def _free_as_add_omega(l_mod, w):
    """A free module as a one-step Add(omega) complex (omega free for
    hypersurfaces, so each free generator is an omega twist)."""
    from .cmapprox import AddOmegaComplex, omega_is_free_twist

    ring = w.ring
    e = omega_is_free_twist(w)
    if e is None:
        raise ValidationError("canonical module of a hypersurface should be "
                              "free of rank one (internal)")
    lmin, _, from_min = l_mod.minimalize()
    twists = tuple(e - d for d in lmin.gen_degrees)
    v0 = AddOmegaComplex(w, (twists,), (), None).module(0)
    aug = PModMap(v0, l_mod, from_min.entries)
    return AddOmegaComplex(w, (twists,), (), aug)


def mf_stats(mf: MatrixFactorization) -> dict:
    """n, the multiplicity e of B = Q/(f), and rank(N) = n / e when defined.

    For a hypersurface the maximal-ideal multiplicity is the order of f (the
    least total degree of a term), which agrees with deg f in the standard
    grading but not for weighted ones.
    """
    b = hypersurface_quotient(mf)
    out: dict = {"n": mf.n}
    e = min(sum(exp) for exp in mf.f.terms)
    out["e"] = e
    if b.dim() == 0:
        out["rank"] = None
        out["note"] = "dimension-0 base: rank undefined"
    elif mf.n % e == 0:
        out["rank"] = mf.n // e
    else:
        out["rank"] = None
        out["note"] = ("n/e is not an integer: factorization is non-minimal "
                       "or the base is not a domain")
    return out
