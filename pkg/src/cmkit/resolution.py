"""Graded free resolutions, Betti tables, Koszul complexes, depth.

Resolutions are built step by step: exact kernels from Groebner syzygies,
then minimal generator selection degree by degree, so every differential of
a resolution produced here has entries in the irrelevant maximal ideal and
the resolution is minimal by construction.  ``minimalize`` (unit-entry
Gaussian cancellation) is still provided for complexes assembled by hand.
"""

from __future__ import annotations

from .errors import ComputationLimit, ValidationError
from .freemod import FreeModule, ModuleMap, Vec
from .linalg import rank as k_rank
from .modules import (PModMap, PresentedModule, SubmoduleGB,
                      minimal_generator_indices, restrict_scalars)
from .ring import GradedRing


class FreeResolution:
    """A chain  ... -> F_2 -> F_1 -> F_0 (-> M)  of graded free modules."""

    def __init__(self, module: PresentedModule, f0: FreeModule, maps: list[ModuleMap],
                 f0_to_module: PModMap | None = None, truncated: bool = False):
        self.module = module
        self.f0 = f0
        self.maps = list(maps)           # maps[i] = d_{i+1} : F_{i+1} -> F_i
        self.truncated = truncated
        # f0_to_module: images of the F_0 generators inside the module's cover
        if f0_to_module is None:
            f0_to_module = PModMap.identity(module) if f0.gen_degrees == module.gen_degrees \
                else None
        self.f0_to_module = f0_to_module
        self._validate()

    def _validate(self):
        prev = self.f0
        for i, d in enumerate(self.maps):
            if d.target != prev:
                raise ValidationError(f"differential {i + 1} has the wrong target")
            prev = d.source
        for i in range(len(self.maps) - 1):
            comp = self.maps[i].compose(self.maps[i + 1])
            if not comp.is_zero:
                raise ValidationError(f"d_{i + 1} o d_{i + 2} != 0")

    @property
    def length(self) -> int:
        return len(self.maps)

    def free(self, i: int) -> FreeModule:
        if i == 0:
            return self.f0
        if i <= len(self.maps):
            return self.maps[i - 1].source
        return FreeModule(self.f0.ring, ())

    def diff(self, i: int) -> ModuleMap:
        """d_i : F_i -> F_{i-1} (zero map beyond the computed length)."""
        if 1 <= i <= len(self.maps):
            return self.maps[i - 1]
        return ModuleMap.zero(self.free(i), self.free(i - 1))

    def betti(self, i: int) -> int:
        return self.free(i).rank

    def graded_betti(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for i in range(self.length + 1):
            for d in self.free(i).gen_degrees:
                out[(i, d)] = out.get((i, d), 0) + 1
        return out

    def is_minimal(self) -> bool:
        for d in self.maps:
            for row in d.entries:
                for p in row:
                    if not p.is_zero and p.is_scalar():
                        return False
        return True

    def __repr__(self) -> str:
        ranks = [self.free(i).rank for i in range(self.length + 1)]
        tail = " (truncated)" if self.truncated else ""
        return "Resolution ranks " + ",".join(map(str, ranks)) + tail


def resolve(m: PresentedModule, steps: int, minimal: bool = True) -> FreeResolution:
    """Minimal free resolution of M over its own ring, to the given length.

    steps >= 1; the result is flagged truncated when the kernel at the last
    computed step is still nonzero.
    """
    if steps < 1:
        raise ValidationError("resolution needs steps >= 1")
    cached = m._resolutions.get("q")
    if cached is not None and (cached.length >= steps or not cached.truncated):
        return cached
    mmin, _, from_min = m.minimalize()
    f0 = mmin.free
    f0_to_m = from_min
    maps: list[ModuleMap] = []
    current_free = f0
    current_cols = list(mmin.relations)
    truncated = False
    for step in range(steps):
        if not current_cols:
            break
        d = ModuleMap.from_columns(current_free, current_cols)
        maps.append(d)
        if step == steps - 1:
            gb = SubmoduleGB(current_free, current_cols)
            nxt = _syzygy_gens(gb, d.source, current_cols)
            truncated = bool(nxt)
            break
        gb = SubmoduleGB(current_free, current_cols)
        nxt = _syzygy_gens(gb, d.source, current_cols)
        current_free = d.source
        current_cols = nxt
    res = FreeResolution(m, f0, maps, f0_to_m, truncated)
    m._resolutions["q"] = res
    return res


def _syzygy_gens(gb: SubmoduleGB, rep_free: FreeModule, cols) -> list[Vec]:
    syz = gb.syzygies_over_ring()
    vecs = []
    for s in syz:
        v = rep_free._make(dict(s.terms))
        if not v.is_zero:
            vecs.append(v)
    if not vecs:
        return []
    keep = minimal_generator_indices(rep_free, vecs)
    return [vecs[i] for i in keep]


def resolve_ambient(m: PresentedModule) -> FreeResolution:
    """Finite minimal free resolution over the ambient polynomial ring."""
    ring = m.ring
    amb = ring.ambient
    if ring.is_quotient:
        ma = restrict_scalars(m, amb, [g.lift_to_ambient() for g in ring.ideal_gens])
    else:
        ma = m
    res = resolve(ma, steps=amb.nvars + 1)
    if res.truncated:
        raise ValidationError("ambient resolution failed to terminate (impossible)")
    return res


def depth(m: PresentedModule) -> int:
    """depth over the irrelevant maximal ideal, by Auslander-Buchsbaum upstairs."""
    if m.is_zero():
        raise ValidationError("undefined depth: the zero module")
    res = resolve_ambient(m)
    return m.ring.ambient.nvars - res.length


def is_mcm(m: PresentedModule) -> bool:
    """Maximal Cohen-Macaulay over the module's ring (zero module: False)."""
    if m.is_zero():
        return False
    return depth(m) == m.ring.dim()


def syzygy_module(m: PresentedModule, i: int, steps: int | None = None) -> PresentedModule:
    """The i-th syzygy module (i >= 1) of the minimal resolution."""
    if i < 1:
        raise ValidationError("syzygy index must be >= 1")
    res = resolve(m, steps=max(steps or 0, i + 1))
    if res.truncated and res.length < i + 1:
        raise ComputationLimit(f"resolution truncated before step {i + 1}")
    fi = res.free(i)
    if fi.rank == 0:
        return PresentedModule.zero_module(m.ring)
    rels = res.diff(i + 1).columns() if res.length >= i + 1 else []
    return PresentedModule(m.ring, fi.gen_degrees, rels, check=False)


def minimalize(res: FreeResolution) -> FreeResolution:
    """Cancel unit entries from a (possibly non-minimal) resolution.

    Standard Gaussian cancellation: if d_i has a unit at (a, b), the step is
    replaced by its Schur complement, d_{i+1} drops row b, and d_{i-1} (or
    the augmentation) drops column a; idempotent on minimal complexes.
    """
    field = res.f0.ring.field
    ring = res.f0.ring
    frees = [res.free(i) for i in range(res.length + 1)]
    mats = [[list(row) for row in d.entries] for d in res.maps]
    aug = [[res.f0_to_module.entries[i][j] for j in range(res.f0.rank)]
           for i in range(res.f0_to_module.target.ngens)] if res.f0_to_module else None
    degs = [list(f.gen_degrees) for f in frees]

    def find_unit():
        for i, mat in enumerate(mats):
            for a, row in enumerate(mat):
                for b, p in enumerate(row):
                    if not p.is_zero and p.is_scalar():
                        return i, a, b
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        i, a, b = hit
        mat = mats[i]
        u = mat[a][b].constant_coeff()
        inv = field.inv(u)
        nrows, ncols = len(mat), len(mat[0])
        new = []
        for r in range(nrows):
            if r == a:
                continue
            row = []
            for c in range(ncols):
                if c == b:
                    continue
                row.append(mat[r][c] - mat[r][b] * mat[a][c].scale(inv))
            new.append(row)
        mats[i] = new
        degs[i] = [d for r, d in enumerate(degs[i]) if r != a]
        degs[i + 1] = [d for c, d in enumerate(degs[i + 1]) if c != b]
        if i + 1 < len(mats):
            mats[i + 1] = [row for r, row in enumerate(mats[i + 1]) if r != b]
        if i == 0:
            if aug is not None:
                aug = [[row[c] for c in range(len(row)) if c != a] for row in aug]
        else:
            mats[i - 1] = [[row[c] for c in range(len(row)) if c != a]
                           for row in mats[i - 1]]
        # drop now-empty tail steps
        while mats and (not mats[-1] or not mats[-1][0]):
            if all(p.is_zero for row in mats[-1] for p in row):
                mats.pop()
                degs.pop()
            else:
                break

    new_frees = [FreeModule(ring, tuple(d)) for d in degs[: len(mats) + 1]]
    new_maps = []
    for i, mat in enumerate(mats):
        new_maps.append(ModuleMap(new_frees[i + 1], new_frees[i], mat, check=False))
    new_aug = None
    if aug is not None:
        new_aug = PModMap(PresentedModule(ring, new_frees[0].gen_degrees),
                          res.f0_to_module.target, aug)
    out = FreeResolution(res.module, new_frees[0], new_maps, None, res.truncated)
    out.f0_to_module = new_aug
    return out


# -- Betti tables ---------------------------------------------------------------


class BettiTable:
    """Graded Betti numbers with a Macaulay-style text rendering."""

    def __init__(self, graded: dict[tuple[int, int], int]):
        self.graded = dict(graded)

    @staticmethod
    def of(res: FreeResolution) -> "BettiTable":
        return BettiTable(res.graded_betti())

    def total(self, i: int) -> int:
        return sum(v for (j, _), v in self.graded.items() if j == i)

    def max_step(self) -> int:
        return max((i for (i, _) in self.graded), default=0)

    def as_dict(self) -> dict[str, int]:
        return {f"{i},{d}": v for (i, d), v in sorted(self.graded.items())}

    def render(self) -> str:
        if not self.graded:
            return "(zero module)"
        imax = self.max_step()
        rows = sorted({d - i for (i, d) in self.graded})
        lines = []
        header = ["      "] + [f"{i:>6}" for i in range(imax + 1)]
        lines.append("".join(header))
        for r in rows:
            cells = [f"{r:>4}: "]
            for i in range(imax + 1):
                v = self.graded.get((i, r + i), 0)
                cells.append(f"{v if v else '.':>6}")
            lines.append("".join(cells))
        totals = ["total:"] + [f"{self.total(i):>6}" for i in range(imax + 1)]
        lines.append("".join(totals))
        return "\n".join(lines)


def betti(m: PresentedModule, steps: int = 6) -> BettiTable:
    return BettiTable.of(resolve(m, steps))


# -- Koszul complexes -------------------------------------------------------------


def koszul_complex(ring: GradedRing, elements) -> list[ModuleMap]:
    """Koszul complex K(f_1..f_n): maps d_i : K_i -> K_{i-1}.

    Basis of K_p: e_T for p-subsets T, with the usual alternating signs.
    """
    import itertools as _it

    els = [ring.parse(f) if isinstance(f, str) else f for f in elements]
    for f in els:
        if not f.is_homogeneous() or f.is_zero:
            raise ValidationError("Koszul complex needs nonzero homogeneous elements")
    n = len(els)
    fdeg = [f.degree() for f in els]
    subsets = [list(_it.combinations(range(n), p)) for p in range(n + 1)]
    frees = [FreeModule(ring, tuple(sum(fdeg[i] for i in t) for t in subsets[p]))
             for p in range(n + 1)]
    maps = []
    for p in range(1, n + 1):
        idx = {t: c for c, t in enumerate(subsets[p - 1])}
        entries = [[ring.zero] * len(subsets[p]) for _ in range(len(subsets[p - 1]))]
        for c, t in enumerate(subsets[p]):
            for pos, i in enumerate(t):
                rest = tuple(x for x in t if x != i)
                sign = -1 if pos % 2 else 1
                entries[idx[rest]][c] = entries[idx[rest]][c] + els[i].scale(sign)
        maps.append(ModuleMap(frees[p], frees[p - 1], entries, check=False))
    return maps


def koszul_homology_is_zero(ring: GradedRing, elements, i: int) -> bool:
    """Whether H_i of the Koszul complex on the ring vanishes."""
    maps = koszul_complex(ring, elements)
    n = len(maps)
    if i < 1 or i > n:
        raise ValidationError(f"Koszul homology index {i} out of range 1..{n}")
    di = maps[i - 1]
    f_i = di.source
    host = PresentedModule(ring, f_i.gen_degrees)
    # kernel of d_i at the free level over the ring
    gb = SubmoduleGB(di.target, di.columns())
    kergens = []
    for s in gb.syzygies_over_ring():
        v = f_i._make(dict(s.terms))
        if not v.is_zero:
            kergens.append(v)
    if i < n:
        img = maps[i].columns()
    else:
        img = []
    imgb = SubmoduleGB(f_i, img)
    return all(imgb.contains(v) for v in kergens)


def is_regular_sequence(ring: GradedRing, elements) -> tuple[bool, int | None]:
    """Koszul test: (True, None) or (False, first i >= 1 with H_i != 0)."""
    els = list(elements)
    for i in range(1, len(els) + 1):
        if not koszul_homology_is_zero(ring, els, i):
            return False, i
    return True, None


# -- exactness certification -------------------------------------------------------


def certify_resolution(res: FreeResolution, extra: int = 0) -> dict:
    """Degreewise rank certificate for exactness of a computed resolution.

    Window: [min generator degree, min + 2*(steps+1)*max relation degree]
    (shifted by ``extra``), per the documented computation-limit defaults.
    """
    m = res.module
    lo, hi = m.default_window(steps=res.length)
    hi += extra
    ring = m.ring
    f = ring.field
    frees = [res.free(i) for i in range(res.length + 1)]
    fpres = [PresentedModule(ring, fr.gen_degrees) for fr in frees]
    ok = True
    detail = []
    for d in range(lo, hi + 1):
        dims = [len(p.graded_basis(d)) for p in fpres]
        ranks = []
        for i in range(1, res.length + 1):
            pm = PModMap(fpres[i], fpres[i - 1], res.diff(i).entries)
            mat = pm.restrict_to_degree(d)
            ranks.append(k_rank(f, mat, dims[i]) if (mat and dims[i]) else 0)
        row = {"degree": d, "ok": True}
        # spot 0: HF(M)_d = dim F0_d - rank(d1)_d
        if m.hf(d) != dims[0] - (ranks[0] if ranks else 0):
            row["ok"] = False
        # spot i (1 <= i < length): dim ker(d_i)_d = rank(d_{i+1})_d
        for i in range(1, res.length):
            if dims[i] - ranks[i - 1] != ranks[i]:
                row["ok"] = False
        # final spot of a complete resolution: d_length is injective
        if res.length >= 1 and not res.truncated:
            i = res.length
            if dims[i] - ranks[i - 1] != 0:
                row["ok"] = False
        detail.append(row)
        ok = ok and row["ok"]
    return {"window": [lo, hi], "exact": ok, "degrees": detail}
