"""Day convolution, symmetric/exterior powers, and the wall functors.

Convolution spaces are kept in labelled form: a basis element is an
ordered decomposition of the underlying (pair of) set(s) together with a
tensor index into the factor levels.  Powers are realized as quotient
class spaces of the place-permutation action; the quotient is by
generator differences, which in characteristic zero gives the same space
as the averaging projector image.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import perms
from .reps import FB2Module, FBModule, Quotient, SymRep, quotient_space, trivial_rep, zero_rep
from .sparse import LinMap

_ONE = Fraction(1)


def _subsets(universe, size):
    return itertools.combinations(universe, size)


def _ordered_decompositions(universe, d, allowed_sizes):
    """Ordered tuples of d disjoint sorted tuples covering universe."""
    universe = tuple(universe)
    if d == 0:
        return [()] if not universe else []
    out = []

    def rec(remaining, parts):
        slot = len(parts)
        if slot == d - 1:
            if len(remaining) in allowed_sizes:
                out.append(tuple(parts + [tuple(remaining)]))
            return
        for size in sorted(allowed_sizes):
            if size > len(remaining):
                break
            for part in _subsets(remaining, size):
                rest = tuple(x for x in remaining if x not in set(part))
                rec(rest, parts + [part])

    rec(universe, [])
    return out


def _ordered_bidecompositions(left_universe, right_universe, d, allowed_bisizes):
    """Ordered tuples of d pairwise-disjoint pairs of sorted tuples."""
    if d == 0:
        return [()] if not (left_universe or right_universe) else []
    left_sizes = sorted({p for p, _ in allowed_bisizes})
    out = []

    def rec(rem_l, rem_r, parts):
        slot = len(parts)
        if slot == d - 1:
            if (len(rem_l), len(rem_r)) in allowed_bisizes:
                out.append(tuple(parts + [(tuple(rem_l), tuple(rem_r))]))
            return
        for lsize in left_sizes:
            if lsize > len(rem_l):
                break
            rsizes = sorted({q for p, q in allowed_bisizes if p == lsize})
            for lpart in _subsets(rem_l, lsize):
                rest_l = tuple(x for x in rem_l if x not in set(lpart))
                for rsize in rsizes:
                    if rsize > len(rem_r):
                        break
                    for rpart in _subsets(rem_r, rsize):
                        rest_r = tuple(x for x in rem_r if x not in set(rpart))
                        rec(rest_l, rest_r, parts + [(lpart, rpart)])

    rec(tuple(left_universe), tuple(right_universe), [])
    return out


def _part_key(part, walled):
    return (len(part[0]), len(part[1])) if walled else len(part)


class ConvolutionSpace:
    """The d-fold Day convolution of a module's levels at one (bi-)level."""

    def __init__(self, module, d, key):
        self.walled = isinstance(module, FB2Module)
        self.module = module
        self.d = d
        self.key = key
        allowed = set(module.levels)
        if self.walled:
            m, n = key
            self.labels = _ordered_bidecompositions(range(1, m + 1), range(1, n + 1), d, allowed)
            self.sizes = (m, n)
        else:
            self.labels = _ordered_decompositions(range(1, key + 1), d, allowed)
            self.sizes = (key,)
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.fiber_reps = []
        self.fiber_dims = []
        self.offsets = []
        off = 0
        for lab in self.labels:
            reps = [module.level(_part_key(p, self.walled)) for p in lab]
            fdim = 1
            for r in reps:
                fdim *= r.dim
            self.fiber_reps.append(reps)
            self.fiber_dims.append(fdim)
            self.offsets.append(off)
            off += fdim
        self.dim = off

    def flat(self, label_idx, fiber_idx):
        return self.offsets[label_idx] + fiber_idx

    def fiber_strides(self, label_idx):
        reps = self.fiber_reps[label_idx]
        strides = [1] * len(reps)
        for k in range(len(reps) - 2, -1, -1):
            strides[k] = strides[k + 1] * reps[k + 1].dim
        return strides

    def place_generator(self, k, parity_sign):
        """Action of the place transposition (k k+1), 1-indexed, with sign."""
        cols = [None] * self.dim
        sgn = Fraction(parity_sign)
        for li, lab in enumerate(self.labels):
            swapped = list(lab)
            swapped[k - 1], swapped[k] = swapped[k], swapped[k - 1]
            ti = self.label_index[tuple(swapped)]
            strides = self.fiber_strides(li)
            dims = [r.dim for r in self.fiber_reps[li]]
            tstrides = self.fiber_strides(ti)
            for fi in range(self.fiber_dims[li]):
                multi = []
                rem = fi
                for s, dd in zip(strides, dims):
                    multi.append(rem // s)
                    rem %= s
                multi[k - 1], multi[k] = multi[k], multi[k - 1]
                tfi = sum(m * s for m, s in zip(multi, tstrides))
                cols[self.flat(li, fi)] = ((self.flat(ti, tfi), sgn),)
        return LinMap(self.dim, self.dim, cols)

    def _sym_generator_split(self, li, lab, i, which_side):
        """Label and per-factor fiber maps for an adjacent transposition (i i+1)."""
        # which part contains i / i+1 (for walled: on the given side)
        def locate(x):
            for pi, part in enumerate(lab):
                members = part[which_side] if self.walled else part
                if x in members:
                    return pi
            raise AssertionError("label does not cover its set")

        a, b = locate(i), locate(i + 1)
        if a == b:
            part = lab[a]
            members = part[which_side] if self.walled else part
            pos = members.index(i) + 1
            return lab, a, pos
        new = list(lab)
        if self.walled:
            pa = list(new[a][which_side])
            pb = list(new[b][which_side])
            pa[pa.index(i)] = i + 1
            pb[pb.index(i + 1)] = i
            if which_side == 0:
                new[a] = (tuple(sorted(pa)), new[a][1])
                new[b] = (tuple(sorted(pb)), new[b][1])
            else:
                new[a] = (new[a][0], tuple(sorted(pa)))
                new[b] = (new[b][0], tuple(sorted(pb)))
        else:
            pa = list(new[a])
            pb = list(new[b])
            pa[pa.index(i)] = i + 1
            pb[pb.index(i + 1)] = i
            new[a] = tuple(sorted(pa))
            new[b] = tuple(sorted(pb))
        return tuple(new), None, None

    def sym_generator(self, i, which_side=0):
        """Action of s_i of the ambient group (side 0 = left factor for walled)."""
        cols = [None] * self.dim
        for li, lab in enumerate(self.labels):
            new_lab, factor, pos = self._sym_generator_split(li, lab, i, which_side)
            ti = self.label_index[new_lab]
            strides = self.fiber_strides(li)
            dims = [r.dim for r in self.fiber_reps[li]]
            if factor is None:
                # membership swap: fiber carried over unchanged
                for fi in range(self.fiber_dims[li]):
                    cols[self.flat(li, fi)] = ((self.flat(ti, fi), _ONE),)
            else:
                rep = self.fiber_reps[li][factor]
                if self.walled and which_side == 1:
                    gen = rep.gen(1, pos)
                else:
                    gen = rep.gen(0, pos)
                for fi in range(self.fiber_dims[li]):
                    multi = []
                    rem = fi
                    for s, dd in zip(strides, dims):
                        multi.append(rem // s)
                        rem %= s
                    col = gen.cols[multi[factor]]
                    entries = []
                    for tgt, coeff in col:
                        tmulti = list(multi)
                        tmulti[factor] = tgt
                        tfi = sum(m * s for m, s in zip(tmulti, strides))
                        entries.append((self.flat(ti, tfi), coeff))
                    cols[self.flat(li, fi)] = tuple(entries)
        return LinMap(self.dim, self.dim, cols)

    def sym_generators(self):
        gens = []
        if self.walled:
            m, n = self.key
            for i in range(1, m):
                gens.append(self.sym_generator(i, 0))
            for j in range(1, n):
                gens.append(self.sym_generator(j, 1))
        else:
            for i in range(1, self.key):
                gens.append(self.sym_generator(i, 0))
        return gens

    def as_symrep(self):
        flat_labels = []
        for li, lab in enumerate(self.labels):
            for fi in range(self.fiber_dims[li]):
                flat_labels.append((lab, fi))
        return SymRep(self.sizes, self.dim, self.sym_generators(), labels=flat_labels, check=False)


class PowerLevel:
    """One (bi-)level of S^d or Lambda^d of a module, realized on classes."""

    def __init__(self, module, d, parity, key):
        if parity not in ("symmetric", "exterior"):
            raise ValueError("parity must be 'symmetric' or 'exterior'")
        self.space = ConvolutionSpace(module, d, key)
        self.parity = parity
        self.d = d
        self.key = key
        sgn = -1 if parity == "exterior" else 1
        place_gens = [self.space.place_generator(k, 1) for k in range(1, d)]
        self.quotient = quotient_space(self.space.dim, place_gens, [sgn] * max(d - 1, 0))
        self.dim = self.quotient.dim
        self._gens = [
            self.quotient.project_map(g, self.quotient) for g in self.space.sym_generators()
        ]
        self._rep = SymRep(
            self.space.sizes,
            self.dim,
            [LinMap.from_exact(g) for g in self._gens],
            labels=[self._unflatten(self.quotient.lift(k)[0][0]) for k in range(self.dim)],
            check=False,
        )

    def _unflatten(self, flat):
        offsets = self.space.offsets
        li = 0
        for i, off in enumerate(offsets):
            if off <= flat:
                li = i
            else:
                break
        return (self.space.labels[li], flat - offsets[li])

    def rep(self) -> SymRep:
        return self._rep

    def resolve(self, label, fiber_entries):
        """Sparse class vector of sum coeff * (label, fiber_idx)."""
        li = self.space.label_index.get(tuple(label))
        if li is None:
            return ()
        vec = [(self.space.flat(li, fi), c) for fi, c in fiber_entries]
        coords = self.quotient.project(vec)
        return tuple((i, c) for i, c in enumerate(coords) if c != 0)

    def class_rep(self, k):
        """(label, fiber_idx) representative of the k-th class."""
        return self._unflatten(self.quotient.lift(k)[0][0])


def power(module, d, parity):
    """d-th symmetric or exterior Day power, as a module of the same kind."""
    walled = isinstance(module, FB2Module)
    levels = {}
    if walled:
        bound = module.truncation
        for m in range(0, bound + 1):
            for n in range(0, bound + 1 - m):
                lv = PowerLevel(module, d, parity, (m, n))
                if lv.dim:
                    levels[(m, n)] = lv.rep()
        return FB2Module(levels, module.truncation)
    for n in range(0, module.truncation + 1):
        lv = PowerLevel(module, d, parity, n)
        if lv.dim:
            levels[n] = lv.rep()
    return FBModule(levels, module.truncation)


def day_convolve(a, b, truncation=None):
    """Day convolution of two modules of the same kind."""
    walled = isinstance(a, FB2Module)
    if walled != isinstance(b, FB2Module):
        raise ValueError("day_convolve: mixed module kinds")

    if truncation is None:
        truncation = min(a.truncation, b.truncation)
    levels = {}
    if walled:
        keys = [
            (m, n)
            for m in range(0, truncation + 1)
            for n in range(0, truncation + 1 - m)
        ]
    else:
        keys = list(range(0, truncation + 1))
    for key in keys:
        space = _pair_convolution(a, b, key, walled)
        if space.dim:
            levels[key] = space.as_symrep()
    return (FB2Module if walled else FBModule)(levels, truncation)



def _pair_convolution(a, b, key, walled):
    """Convolution of two different modules: decompositions into two slots."""

    class Space(ConvolutionSpace):
        def __init__(self):
            self.walled = walled
            self.d = 2
            self.key = key
            if walled:
                m, n = key
                allowed_a = set(a.levels)
                allowed_b = set(b.levels)
                labels = []
                for lab in _ordered_bidecompositions(
                    range(1, m + 1), range(1, n + 1), 2, allowed_a | allowed_b
                ):
                    if _part_key(lab[0], True) in allowed_a and _part_key(lab[1], True) in allowed_b:
                        labels.append(lab)
                self.labels = labels
                self.sizes = (m, n)
            else:
                allowed = set(a.levels) | set(b.levels)
                labels = []
                for lab in _ordered_decompositions(range(1, key + 1), 2, allowed):
                    if len(lab[0]) in a.levels and len(lab[1]) in b.levels:
                        labels.append(lab)
                self.labels = labels
                self.sizes = (key,)
            self.label_index = {lab: i for i, lab in enumerate(self.labels)}
            self.fiber_reps = []
            self.fiber_dims = []
            self.offsets = []
            off = 0
            for lab in self.labels:
                reps = [
                    a.level(_part_key(lab[0], walled)),
                    b.level(_part_key(lab[1], walled)),
                ]
                fdim = reps[0].dim * reps[1].dim
                self.fiber_reps.append(reps)
                self.fiber_dims.append(fdim)
                self.offsets.append(off)
                off += fdim
            self.dim = off

    return Space()


def swap_map(a, b, key, truncation=None):
    """The symmetry (a . b)(key) -> (b . a)(key) in labelled bases."""
    walled = isinstance(a, FB2Module)
    src = _pair_convolution(a, b, key, walled)
    dst = _pair_convolution(b, a, key, walled)
    cols = [None] * src.dim
    for li, lab in enumerate(src.labels):
        tlab = (lab[1], lab[0])
        ti = dst.label_index[tlab]
        da = src.fiber_reps[li][0].dim
        db = src.fiber_reps[li][1].dim
        for fa in range(da):
            for fb in range(db):
                cols[src.flat(li, fa * db + fb)] = ((dst.flat(ti, fb * da + fa), _ONE),)
    return LinMap(src.dim, dst.dim, cols)


def amalg_pull(m: FBModule) -> FB2Module:
    """Restriction along disjoint union: (pull m)(p, q) = m(p+q), block action."""
    levels = {}
    for total, rep in m.levels.items():
        for p in range(0, total + 1):
            q = total - p
            gens = []
            for i in range(1, p):
                gens.append(rep.gens[i - 1])
            for j in range(1, q):
                gens.append(rep.gens[p + j - 1])
            levels[(p, q)] = SymRep((p, q), rep.dim, gens, labels=rep.labels, check=False)
    return FB2Module(levels, m.truncation)


class AmalgPushLevel:
    """Level n of the push-forward along disjoint union, with labelled basis."""

    def __init__(self, g: FB2Module, n):
        self.n = n
        self.g = g
        self.labels = []
        self.offsets = []
        self.fiber_reps = []
        off = 0
        for p in range(0, n + 1):
            for U in itertools.combinations(range(1, n + 1), p):
                rep = g.level((p, n - p))
                if rep.dim == 0:
                    continue
                self.labels.append(U)
                self.fiber_reps.append(rep)
                self.offsets.append(off)
                off += rep.dim
        self.dim = off
        self.label_index = {u: i for i, u in enumerate(self.labels)}

    def flat(self, li, fi):
        return self.offsets[li] + fi

    def locate(self, flat):
        li = 0
        for i, off in enumerate(self.offsets):
            if off <= flat:
                li = i
            else:
                break
        return li, flat - self.offsets[li]

    def sym_generators(self):
        gens = []
        for i in range(1, self.n):
            cols = [None] * self.dim
            for li, U in enumerate(self.labels):
                in_u_i = i in U
                in_u_i1 = (i + 1) in U
                rep = self.fiber_reps[li]
                if in_u_i == in_u_i1:
                    if in_u_i:
                        pos = U.index(i) + 1
                        gen = rep.gen(0, pos)
                    else:
                        comp = tuple(x for x in range(1, self.n + 1) if x not in U)
                        pos = comp.index(i) + 1
                        gen = rep.gen(1, pos)
                    ti = li
                    for fi in range(rep.dim):
                        cols[self.flat(li, fi)] = tuple(
                            (self.flat(ti, t), c) for t, c in gen.cols[fi]
                        )
                else:
                    newU = tuple(sorted((set(U) - {i}) | {i + 1})) if in_u_i else tuple(
                        sorted((set(U) - {i + 1}) | {i})
                    )
                    ti = self.label_index[newU]
                    for fi in range(rep.dim):
                        cols[self.flat(li, fi)] = ((self.flat(ti, fi), _ONE),)
            gens.append(LinMap(self.dim, self.dim, cols))
        return gens

    def rep(self):
        flat_labels = []
        for li, U in enumerate(self.labels):
            for fi in range(self.fiber_reps[li].dim):
                flat_labels.append((U, fi))
        return SymRep((self.n,), self.dim, self.sym_generators(), labels=flat_labels, check=False)


def amalg_push(g: FB2Module) -> FBModule:
    """Push-forward along disjoint union: level n = sum over splittings."""
    levels = {}
    for n in range(0, g.truncation + 1):
        lv = AmalgPushLevel(g, n)
        if lv.dim:
            levels[n] = lv.rep()
    return FBModule(levels, g.truncation)
