import time

from cmkit.field import Field
from cmkit.ring import GradedRing
from cmkit.modules import PresentedModule, generic_rank, submodule_of
from cmkit.resolution import certify_resolution
from cmkit.homalg import ext
from cmkit.mf import (mf_from_module, knorrer, eisenbud_resolution,
                      knorrer_approx, mf_stats, hypersurface_quotient)

t0 = time.time()
F = Field.gf()

# --- node: B = k[x]/(x^2), N = k ---
B = GradedRing(F, ["x"], relations=["x^2"])
k = PresentedModule.residue_field(B)
mf = mf_from_module(k)
print("mf(k over k[x]/x^2):", [[str(p) for p in r] for r in mf.phi],
      [[str(p) for p in r] for r in mf.psi])
kn = knorrer(mf)
print("knorrer F:", kn.f, " Phi:", [[str(p) for p in r] for r in kn.phi])
res = eisenbud_resolution(mf, 6)
print("eisenbud ranks:", [res.free(i).rank for i in range(7)])
cert = certify_resolution(res)
print("eisenbud exact:", cert["exact"], "window", cert["window"])

tri = knorrer_approx(k)
print("knorrer_approx(k/node): mu(M) =", tri.m.mu(), "L rank =",
      tri.certificates.get("L rank"), "minimal:", tri.minimal)
print("  exact:", tri.certificates["exact"], "MCM:", tri.certificates["M is MCM"],
      "L free:", tri.certificates["L free"], "eis-seq:",
      tri.certificates["eisenbud sequence"])
e1a = ext(1, tri.m, tri.m)
e1b = ext(1, k, k)
e2b = ext(2, k, k)
print("Ext^1_A(M,M) =", e1a.total_dim, " Ext^1_B+Ext^2_B =",
      e1b.total_dim + e2b.total_dim)

# --- N = B free ---
Bmod = PresentedModule.ring_module(B)
trif = knorrer_approx(Bmod)
print("free N: mu(M) =", trif.m.mu(), "mu(L) =", trif.l.mu(),
      "exact:", trif.certificates["exact"], "minimal:", trif.minimal)

# --- cusp: B = k[x]/(x^3), N = B/(x) ---
B3 = GradedRing(F, ["x"], relations=["x^3"])
N3 = PresentedModule(B3, (0,), [["x"]])
mf3 = mf_from_module(N3)
print("mf cusp:", [[str(p) for p in r] for r in mf3.phi],
      [[str(p) for p in r] for r in mf3.psi])
kn3 = knorrer(mf3)
print("cusp A ring:", kn3.q.names, kn3.q.degrees, "F =", kn3.f)
res3 = eisenbud_resolution(mf3, 6)
print("cusp eisenbud ranks:", [res3.free(i).rank for i in range(7)],
      "exact:", certify_resolution(res3)["exact"])
tri3 = knorrer_approx(N3)
print("cusp approx: mu(M) =", tri3.m.mu(), "L rank:", tri3.certificates["L rank"],
      "exact:", tri3.certificates["exact"], "eis-seq:",
      tri3.certificates["eisenbud sequence"])
e1a3 = ext(1, tri3.m, tri3.m)
e1b3 = ext(1, N3, N3)
e2b3 = ext(2, N3, N3)
print("cusp Ext^1_A(M,M) =", e1a3.total_dim, " sum_B =",
      e1b3.total_dim + e2b3.total_dim)

# --- A(2) as hypersurface: (z0,z1) over k[z0,z1,z2]/(z1^2 - z0 z2) ---
A2 = GradedRing(F, ["z0", "z1", "z2"], relations=["z1^2 - z0*z2"])
amod = PresentedModule.ring_module(A2)
mm = submodule_of(amod, [amod.free.from_entries([A2.var(0)]),
                         amod.free.from_entries([A2.var(1)])])
mf_i = mf_from_module(mm)
print("ideal (z0,z1) mf size:", mf_i.n)
print("stats:", mf_stats(mf_i))

# mf_stats guards
print("stats node (dim0):", mf_stats(mf))
Bxy = GradedRing(F, ["x", "y"], relations=["x*y"])
Nx = PresentedModule(Bxy, (0,), [["x"]])
mfxy = mf_from_module(Nx)
print("stats xy (non-domain):", mf_stats(mfxy))

# cusp curve example: B = k[x,y]/(x^2 + y^3), N = maximal ideal
Bc = GradedRing(F, ["x", "y"], (3, 2), relations=["x^2 + y^3"])
bcmod = PresentedModule.ring_module(Bc)
mmc = submodule_of(bcmod, [bcmod.free.from_entries([Bc.var(0)]),
                           bcmod.free.from_entries([Bc.var(1)])])
mfc = mf_from_module(mmc)
print("cusp-curve m: stats:", mf_stats(mfc))

print("total %.2fs" % (time.time() - t0))
