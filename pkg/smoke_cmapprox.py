import time

from cmkit.field import Field
from cmkit.ring import GradedRing
from cmkit.modules import PresentedModule
from cmkit.resolution import BettiTable, resolve
from cmkit.homalg import ext, canonical_module
from cmkit.modules import generic_rank
from cmkit.cmapprox import (mcm_approx_cm, approx_residue_field_dim2,
                            omega_cover, fid_hull, q_prime, fundamental_module,
                            omega_is_free_twist)

t0 = time.time()


def veronese(m, p=32003):
    n = m + 1
    names = [f"z{i}" for i in range(n)]
    rels = []
    for i in range(n - 1):
        for j in range(i + 1, n - 1):
            rels.append(f"z{i}*z{j+1} - z{i+1}*z{j}")
    return GradedRing(Field.gf(p), names, relations=rels)


A = veronese(2)
w = canonical_module(A)
print("omega(A2):", w.minimal_gen_degrees(), "free twist:", omega_is_free_twist(w))

k = PresentedModule.residue_field(A)
t1 = mcm_approx_cm(k, 2)
print("mcm_approx_cm(k,2): mu(M) =", t1.m.mu(), "rank =", generic_rank(t1.m),
      "minimal:", t1.minimal)
print("  L:", t1.l.mu(), t1.l.minimal_gen_degrees())
print("  certs:", {kk: v for kk, v in t1.certificates.items() if kk != "L resolution"})
print("  L-res cert:", t1.certificates["L resolution"])

t2 = approx_residue_field_dim2(A)
print("residue-field path: mu(M) =", t2.m.mu(), "rank =", generic_rank(t2.m))
print("  HF agree:", [t1.m.hf(d) for d in range(0, 5)] == [t2.m.hf(d) for d in range(0, 5)])
b1 = BettiTable.of(resolve(t1.m, 3)).as_dict()
b2 = BettiTable.of(resolve(t2.m, 3)).as_dict()
print("  betti agree:", b1 == b2, b1)

e1 = ext(1, t1.m, t1.m)
print("Ext^1(M,M):", e1)

iota, W, mprime, eta, cert = omega_cover(t1.m)
print("cover of M: n =", W.ngens // w.ngens, "M' mu =", mprime.minimalize()[0].mu())

h = fid_hull(t1)
print("hull: L' mu =", h.l_prime.minimalize()[0].mu(),
      "M' mu =", h.m_prime.minimalize()[0].mu())
print("  hull certs:", {kk: v for kk, v in h.certificates.items()
                        if kk not in ("cover", "L' resolution")})
print("  L'-res:", h.certificates["L' resolution"])

q, qres = q_prime(h.l_prime, h.l_omega_res)
print("Q' = Hom(omega,L'): mu =", q.mu(), "gen degs =", q.minimal_gen_degrees(),
      "pd =", qres.length, "truncated:", qres.truncated)

E, ei, ep, mm, cls = fundamental_module(A)
Emin = E.minimalize()[0]
print("fundamental: mu =", Emin.mu(), "rank =", generic_rank(Emin))

print("total %.2fs" % (time.time() - t0))
