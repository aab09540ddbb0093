from cmkit.field import Field
from cmkit.ring import GradedRing
from cmkit.modules import PresentedModule, PModMap, submodule_of
from cmkit.resolution import resolve
from cmkit.homalg import (ext, tor, canonical_module, extension_from_class,
                          yoneda_class_of_extension, four_term_class,
                          FourTermSequence, ext_dual, ext_contra, ext_cov)

F = Field.gf()

# A(2): quadric cone k[z0,z1,z2]/(z0 z2 - z1^2)
A = GradedRing(F, ["z0", "z1", "z2"], relations=["z0*z2 - z1^2"])
k = PresentedModule.residue_field(A)
Amod = PresentedModule.ring_module(A)

e1 = ext(1, k, k)
print("Ext^1_A(k,k):", e1)
assert e1.finite and e1.total_dim == 3, e1.total_dim

e2 = ext(2, k, k)
print("Ext^2_A(k,k):", e2)
assert e2.finite and e2.total_dim == 4, e2.total_dim

e0 = ext(0, k, Amod)
print("Hom_A(k,A):", e0)
assert e0.finite and e0.total_dim == 0

t1 = tor(1, k, k)
print("Tor_1(k,k) dims:", t1.dims_on(-1, 4), "finite:", t1.finite)
assert sum(t1.dims_on(-1, 4).values()) == 3

w = canonical_module(A)
print("omega(A(2)):", w, "gen degrees", w.gen_degrees)
assert w.gen_degrees == (1,)

# R = k[x]/(x^2): extension round trip
R = GradedRing(F, ["x"], relations=["x^2"])
kk = PresentedModule.residue_field(R)
ekk = ext(1, kk, kk)
print("Ext^1_R(k,k):", ekk)
assert ekk.total_dim == 1 and list(ekk.dims_by_degree) == [-1]
cls = ekk.zero_class()
one = [F.one]
from cmkit.homalg import ExtClass
cls1 = ExtClass(ekk, one)
E, iota, pi = extension_from_class(cls1)
print("extension middle:", E, "min gens:", E.minimal_gen_degrees())
back = yoneda_class_of_extension(iota, pi, space=ekk)
print("round trip:", back.coords, "vs", cls1.coords)
assert back.coords == cls1.coords
assert E.minimalize()[0].mu() == 1   # the nonsplit extension is cyclic (= R itself)

E0, iota0, pi0 = extension_from_class(ekk.zero_class())
assert E0.minimalize()[0].mu() == 2  # split: k (+) k(-? ) has two gens

# four-term class of the start of the resolution of k over A(2): nonzero
res = resolve(k, steps=3)
f0 = PresentedModule.free_module(A, res.f0.gen_degrees)
f1 = PresentedModule.free_module(A, res.free(1).gen_degrees)
from cmkit.resolution import syzygy_module
syz2 = syzygy_module(k, 2)
# maps: syz2 -> F1 (inclusion via d_2 columns on generators), F1 -> F0 (d_1), F0 -> k
d2 = res.diff(2)
alpha = PModMap(syz2, f1, [[d2.entries[i][j] for j in range(d2.source.rank)]
                           for i in range(d2.target.rank)])
d1 = res.diff(1)
g = PModMap(f1, f0, [[d1.entries[i][j] for j in range(d1.source.rank)]
                     for i in range(d1.target.rank)])
aug = res.f0_to_module
pi2 = PModMap(f0, k, [[aug.entries[i][j] for j in range(aug.source.ngens)]
                      for i in range(aug.target.ngens)])
seq = FourTermSequence(syz2, f1, f0, k, alpha, g, pi2)
cert = seq.certify()
print("four-term certify:", cert)
assert cert["exact"]
c4 = four_term_class(seq)
print("four-term class:", c4.coords)
assert not c4.is_zero

# functoriality smoke: Ext^1(k, k) -> Ext^1(k, A/m^2) along k -> ? skip; use ext_cov with identity
idk = PModMap.identity(k)
mat, act, _, _ = ext_cov(idk, 1, k, src_space=e1)
print("ext_cov(id) matrix:", mat)
assert all(mat[i][j] == (F.one if i == j else F.zero) for i in range(3) for j in range(3))

mat2, act2, _, _ = ext_contra(idk, 1, k, src_space=e1, tgt_space=e1)
print("ext_contra(id) matrix:", mat2)
assert all(mat2[i][j] == (F.one if i == j else F.zero) for i in range(3) for j in range(3))

print("OK homalg")
