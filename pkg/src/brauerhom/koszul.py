"""Koszul complexes over the twisted Brauer categories, and their homology.

Chain spaces are coinvariants of (hom space) x (module level).  They are
realized in reduced block form: the right action on hom spaces is free
(first complexes), while for the dual hom spaces a single orbit with a
signed stabilizer remains (second complexes).  Differentials come from
inner multiplication by the canonical degree-one pairing element.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import perms
from .diagrams import CatTag, Morphism, alpha, beta, compose, hom_basis
from .linalg import ContractViolation, ExactMatrix, homology_dim, rank
from .modules import DownModule
from .reps import Quotient, SymRep, quotient_space
from .sparse import LinMap

_ONE = Fraction(1)


def complex_tag(module_tag: CatTag) -> CatTag:
    """The upward category a module's Koszul complexes live over (quadratic dual)."""
    if module_tag.shape == "walled":
        return CatTag("walled", None, -module_tag.order, "up")
    if module_tag.shape == "undirected":
        return CatTag("undirected", module_tag.flip, -module_tag.order, "up")
    if module_tag.shape == "directed":
        return CatTag("directed", None, -module_tag.order, "up")
    raise ValueError("no Koszul pairing for ordered shapes")


class HomologyTable:
    """Homology dimensions with truncation-certification flags."""

    def __init__(self):
        self.rows = []

    def add(self, external, internal, dim, certified):
        self.rows.append((external, internal, dim, certified))

    def dims(self):
        return {(ext, internal): d for ext, internal, d, _ in self.rows}

    def certified_dims(self):
        return {
            (ext, internal): d for ext, internal, d, cert in self.rows if cert
        }


class KoszulComplex:
    """A built complex: chain data per internal spot plus exact differentials."""

    def __init__(self, flavor, setting, module, external, N, spots, diffs, spot_order):
        self.flavor = flavor
        self.setting = setting
        self.module = module
        self.external = external
        self.N = N
        self.spots = spots
        self.diffs = diffs
        self.spot_order = spot_order
        self._check_dd()

    def _check_dd(self):
        for key in self.spot_order:
            nxt = self._step(key)
            if key in self.diffs and nxt in self.diffs:
                prod = self.diffs[nxt].mul(self.diffs[key])
                if not prod.is_zero():
                    raise ContractViolation(f"d.d != 0 at {key} -> {self._step(nxt)}")

    def _step(self, key):
        if self.setting == "walled":
            return (key[0] - 1, key[1] - 1)
        return key - 2

    def chain_dim(self, key):
        spot = self.spots.get(key)
        return spot.dim if spot else 0

    def differential(self, key) -> ExactMatrix:
        if key in self.diffs:
            return self.diffs[key]
        return ExactMatrix.zeros(self.chain_dim(self._step(key)), self.chain_dim(key))

    def certified(self, key):
        if self.setting == "walled":
            s, t = key
            incoming_total = s + t + 2
        else:
            incoming_total = key + 2
        if incoming_total <= self.N:
            return True
        if self.flavor == "first":
            # chains vanish above the external size: nothing is missing
            bound = (
                self.external[0] + self.external[1]
                if self.setting == "walled"
                else self.external
            )
            return incoming_total > bound
        return False

    def homology(self) -> HomologyTable:
        table = HomologyTable()
        for key in self.spot_order:
            up_key = (
                (key[0] + 1, key[1] + 1) if self.setting == "walled" else key + 2
            )
            d_in = (
                self.diffs[up_key]
                if up_key in self.diffs
                else ExactMatrix.zeros(self.chain_dim(key), self.chain_dim(up_key))
            )
            d_out = self.differential(key)
            table.add(self.external, key, homology_dim(d_in, d_out), self.certified(key))
        return table


class SecondSpot:
    """Chain space of a second complex at one internal spot: a twisted quotient.

    Vectors are classes of the module level modulo the signed stabilizer
    of the canonical dual hom-basis element.
    """

    def __init__(self, mod: DownModule, ctag: CatTag, external, key):
        self.key = key
        self.external = external
        self.walled = ctag.walled
        rep = mod.level(key)
        self.rep = rep
        gens = []
        chars = []
        if self.walled:
            a, b = external
            s, t = key
            k = s - a
            self.pair_count = k
            for r in range(1, k):
                sig = (
                    perms.transposition(s, a + r, a + r + 1),
                    perms.transposition(t, b + r, b + r + 1),
                )
                gens.append(rep.act(sig))
                chars.append(ctag.order)
        else:
            u = external
            n = key
            tt = (n - u) // 2
            self.pair_count = tt
            if ctag.shape == "undirected":
                for p in range(1, tt + 1):
                    gens.append(rep.act(perms.transposition(n, u + 2 * p - 1, u + 2 * p)))
                    chars.append(ctag.flip)
            for p in range(1, tt):
                sig = perms.compose(
                    perms.transposition(n, u + 2 * p - 1, u + 2 * p + 1),
                    perms.transposition(n, u + 2 * p, u + 2 * p + 2),
                )
                gens.append(rep.act(sig))
                chars.append(ctag.order)
        self.quotient = quotient_space(rep.dim, gens, chars) if rep.dim else quotient_space(0, [])
        self.dim = self.quotient.dim

    def external_action(self, sigma) -> ExactMatrix:
        """Action of an automorphism of the external object on the classes."""
        if self.walled:
            s, t = self.key
            ext = (
                tuple(list(sigma[0]) + list(range(len(sigma[0]) + 1, s + 1))),
                tuple(list(sigma[1]) + list(range(len(sigma[1]) + 1, t + 1))),
            )
        else:
            n = self.key
            ext = tuple(list(sigma) + list(range(len(sigma) + 1, n + 1)))
        return self.quotient.project_map(self.rep.act(ext), self.quotient)


def build_second(mod: DownModule, external, N) -> KoszulComplex:
    """The second (dual) Koszul complex of a downward module at one external object."""
    ctag = complex_tag(mod.tag)
    walled = ctag.walled
    if walled:
        a, b = external
        if N < a + b:
            raise ContractViolation("truncation smaller than the external object")
        keys = []
        k = 0
        while a + k + b + k <= N:
            keys.append((a + k, b + k))
            k += 1
    else:
        u = external
        if N < u:
            raise ContractViolation("truncation smaller than the external object")
        keys = list(range(u, N + 1, 2))
    spots = {key: SecondSpot(mod, ctag, external, key) for key in keys}
    diffs = {}
    for key in keys:
        if walled:
            tgt = (key[0] - 1, key[1] - 1)
        else:
            tgt = key - 2
        if tgt not in spots or spots[key].dim == 0:
            continue
        diffs[key] = _second_differential(mod, ctag, external, spots[key], spots[tgt])
    return KoszulComplex("second", "walled" if walled else "unwalled", mod, external, N, spots, diffs, keys)


def _second_differential(mod, ctag, external, src: SecondSpot, dst: SecondSpot):
    if src.pair_count == 0 or src.rep.dim == 0:
        return ExactMatrix.zeros(dst.dim, src.dim)
    total = LinMap.zero(src.rep.dim, dst.rep.dim)
    if ctag.walled:
        a, b = external
        s, t = src.key
        k = src.pair_count
        for r in range(1, k + 1):
            term = mod.pair_action(src.key, (a + r, b + r)).scale(
                Fraction(ctag.order) ** (k - r)
            )
            total = total.add(term)
    else:
        u = external
        n = src.key
        tt = src.pair_count
        for p in range(1, tt + 1):
            term = mod.pair_action(n, (u + 2 * p - 1, u + 2 * p)).scale(
                Fraction(ctag.order) ** (tt - p)
            )
            total = total.add(term)
    return dst.quotient.project_map(total, src.quotient)


class FirstSpot:
    """Chain space of a first complex: free orbit representatives tensor module."""

    def __init__(self, mod: DownModule, ctag: CatTag, external, key):
        self.key = key
        self.walled = ctag.walled
        self.rep = mod.level(key)
        reps = []
        for mor in hom_basis(ctag, key, external):
            if self.walled:
                if mor.inj[0] == tuple(sorted(mor.inj[0])) and mor.inj[1] == tuple(
                    sorted(mor.inj[1])
                ):
                    reps.append(mor)
            else:
                if mor.inj == tuple(sorted(mor.inj)):
                    reps.append(mor)
        self.hom_reps = reps
        self.hom_index = {m.key(): i for i, m in enumerate(reps)}
        self.dim = len(reps) * self.rep.dim


def build_first(mod: DownModule, external, N) -> KoszulComplex:
    """The first Koszul complex of a downward module at one external object."""
    ctag = complex_tag(mod.tag)
    walled = ctag.walled
    if walled:
        a, b = external
        if N < a + b:
            raise ContractViolation("truncation smaller than the external object")
        keys = sorted((a - k, b - k) for k in range(0, min(a, b) + 1))
    else:
        u = external
        if N < u:
            raise ContractViolation("truncation smaller than the external object")
        keys = list(range(u % 2, u + 1, 2))
    spots = {key: FirstSpot(mod, ctag, external, key) for key in keys}
    diffs = {}
    for key in keys:
        tgt = (key[0] - 1, key[1] - 1) if walled else key - 2
        if tgt not in spots or spots[key].dim == 0:
            continue
        diffs[key] = _first_differential(mod, ctag, spots[key], spots[tgt])
    return KoszulComplex("first", "walled" if walled else "unwalled", mod, external, N, spots, diffs, keys)


def _first_differential(mod, ctag, src: FirstSpot, dst: FirstSpot):
    mdim = src.rep.dim
    cols = [[] for _ in range(src.dim)]
    for hi, mor in enumerate(src.hom_reps):
        if ctag.walled:
            s, t = src.key
            pair_iter = [((i, j), beta(ctag, s - 1, t - 1, i, j)) for i in range(1, s + 1) for j in range(1, t + 1)]
        else:
            n = src.key
            if ctag.shape == "directed":
                pair_iter = [
                    ((i, j), alpha(ctag, n - 2, i, j))
                    for i in range(1, n + 1)
                    for j in range(1, n + 1)
                    if i != j
                ]
            else:
                pair_iter = [
                    ((i, j), alpha(ctag, n - 2, i, j))
                    for i in range(1, n + 1)
                    for j in range(i + 1, n + 1)
                ]
        for (i, j), gen in pair_iter:
            out = compose(gen, mor)
            ti = dst.hom_index.get(out.key())
            if ti is None:
                continue
            act = mod.pair_action(src.key, (i, j))
            tdim = dst.rep.dim
            for col in range(mdim):
                entries = [
                    (ti * tdim + row, out.coeff * c) for row, c in act.cols[col]
                ]
                cols[hi * mdim + col].extend(entries)
    mat = LinMap.from_columns(src.dim, dst.dim, cols)
    return mat.to_exact()


def homology(cx: KoszulComplex) -> HomologyTable:
    """Homology dimensions of a built complex, with certification flags."""
    return cx.homology()
