import time
from cmkit.field import Field
from cmkit.ring import GradedRing
from cmkit.modules import PresentedModule, submodule_of, generic_rank
from cmkit.homalg import ext, canonical_module, extension_from_class, ExtClass
from cmkit.resolution import is_mcm, betti

F = Field.gf()
A = GradedRing(F, ["z0", "z1", "z2"], relations=["z0*z2 - z1^2"])
Amod = PresentedModule.ring_module(A)

mm = submodule_of(Amod, [Amod.free.from_entries([A.var(i)]) for i in range(3)])
print("m:", mm, "mu:", mm.minimalize()[0].mu())

w = canonical_module(A)
t0 = time.time()
e1 = ext(1, mm, w)
print("Ext^1(m, omega):", e1, f"[{time.time()-t0:.2f}s]")
assert e1.total_dim == 1

cls = ExtClass(e1, [F.one])
E, iota, pi = extension_from_class(cls)
Emin, _, _ = E.minimalize()
print("fundamental module: mu =", Emin.mu(), "gen degrees", Emin.minimal_gen_degrees())
print("rank:", generic_rank(Emin), "is_mcm:", is_mcm(Emin))

t0 = time.time()
eEE = ext(1, Emin, Emin)
print("Ext^1(E,E):", eEE, f"[{time.time()-t0:.2f}s]")

t0 = time.time()
b = betti(Emin, steps=3)
print(b.render())
print(f"[betti {time.time()-t0:.2f}s]")
