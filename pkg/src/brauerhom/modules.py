"""Modules over the twisted downward/upward Brauer categories.

A DownModule stores, per (bi-)level, the action of the canonical
degree-one contraction (the pair of largest labels); all other pair
actions are synthesized by conjugating with the groupoid action.  Power
modules of operads realize their levels as class spaces and keep the
grading by power degree in the basis metadata.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import perms
from .convolution import AmalgPushLevel, PowerLevel, amalg_pull
from .diagrams import CatTag, alpha, beta, compose, hom_basis, postcompose_perm
from .operads import CyclicOperadData, DioperadData, Report, to_cyclic, to_dioperad
from .reps import FB2Module, FBModule, SymRep, perm_power_rep, zero_rep
from .sparse import LinMap

_ONE = Fraction(1)


def direct_sum_reps(sizes, reps, labels=None):
    dims = [r.dim for r in reps]
    total = sum(dims)
    n_gens = sum(max(s - 1, 0) for s in sizes)
    gens = []
    for k in range(n_gens):
        cols = []
        off = 0
        for r in reps:
            for col in r.gens[k].cols:
                cols.append(tuple((i + off, c) for i, c in col))
            off += r.dim
        gens.append(LinMap(total, total, cols))
    return SymRep(sizes, total, gens, labels=labels, check=False)


class GradedPowerLevel:
    """Direct sum over power degrees of one realized power level."""

    def __init__(self, pieces):
        # pieces: list of (d, PowerLevel) in increasing d
        self.pieces = pieces
        self.offsets = []
        off = 0
        for _, lv in pieces:
            self.offsets.append(off)
            off += lv.dim
        self.dim = off

    def rep(self, sizes):
        labels = []
        for (d, lv), off in zip(self.pieces, self.offsets):
            for k in range(lv.dim):
                lab, fib = lv.class_rep(k)
                labels.append((d, lab, fib))
        return direct_sum_reps(sizes, [lv.rep() for _, lv in self.pieces], labels=labels)

    def degree_slice(self, d):
        for (dd, lv), off in zip(self.pieces, self.offsets):
            if dd == d:
                return lv, off
        return None, None

    def resolve(self, d, label, fiber_entries):
        lv, off = self.degree_slice(d)
        if lv is None:
            return ()
        return tuple((i + off, c) for i, c in lv.resolve(label, fiber_entries))

    def class_rep(self, k):
        for (d, lv), off in zip(self.pieces, self.offsets):
            if k < off + lv.dim:
                lab, fib = lv.class_rep(k - off)
                return d, lab, fib
        raise IndexError(k)


class DownModule:
    """A module over a twisted downward Brauer category."""

    def __init__(self, tag: CatTag, module, contractions, level_data=None):
        if tag.direction != "down":
            raise ValueError("DownModule tags point downward")
        self.tag = tag
        self.module = module
        self.contractions = contractions
        self.level_data = level_data or {}
        self.truncation = module.truncation

    @property
    def walled(self):
        return self.tag.walled

    def level(self, key) -> SymRep:
        return self.module.level(key)

    def contraction(self, key) -> LinMap:
        """Action of the canonical contraction out of the given level."""
        if key in self.contractions:
            return self.contractions[key]
        if self.walled:
            m, n = key
            return LinMap.zero(self.level(key).dim, self.level((m - 1, n - 1)).dim)
        return LinMap.zero(self.level(key).dim, self.level(key - 2).dim)

    def pair_action(self, key, pair) -> LinMap:
        """Action of the (ordered or walled) pair's contraction, by equivariance."""
        c = self.contraction(key)
        if self.walled:
            m, n = key
            i, j = pair
            sl = perms.moving_perm(m, (m,), (i,))
            sr = perms.moving_perm(n, (n,), (j,))
            return c.compose(self.level(key).act((perms.inverse(sl), perms.inverse(sr))))
        n = key
        i, j = pair
        sigma = perms.moving_perm(n, (n - 1, n), (i, j))
        return c.compose(self.level(key).act(perms.inverse(sigma)))


class UpModule:
    """A module over a twisted upward Brauer category (generators raise levels)."""

    def __init__(self, tag: CatTag, module, raisings, level_data=None):
        if tag.direction != "up":
            raise ValueError("UpModule tags point upward")
        self.tag = tag
        self.module = module
        self.raisings = raisings
        self.level_data = level_data or {}
        self.truncation = module.truncation

    @property
    def walled(self):
        return self.tag.walled

    def level(self, key) -> SymRep:
        return self.module.level(key)

    def raising(self, key) -> LinMap:
        if key in self.raisings:
            return self.raisings[key]
        if self.walled:
            m, n = key
            return LinMap.zero(self.level(key).dim, self.level((m + 1, n + 1)).dim)
        return LinMap.zero(self.level(key).dim, self.level(key + 2).dim)

    def pair_action(self, key, pair) -> LinMap:
        """Action of the degree-one generator adding the given pair of new labels."""
        u = self.raising(key)
        if self.walled:
            m, n = key
            i, j = pair
            sl = perms.moving_perm(m + 1, (m + 1,), (i,))
            sr = perms.moving_perm(n + 1, (n + 1,), (j,))
            return self.level((m + 1, n + 1)).act((sl, sr)).compose(u)
        n = key
        i, j = pair
        sigma = perms.moving_perm(n + 2, (n + 1, n + 2), (i, j))
        return self.level(n + 2).act(sigma).compose(u)


def _move_front_sign(d, a, b, parity):
    """Sign of reordering factor positions (a, b, rest ascending); 0-indexed a, b."""
    if parity == "symmetric":
        return 1
    order = [a, b] + [k for k in range(d) if k not in (a, b)]
    return perms.sign(tuple(x + 1 for x in order))


def _power_pieces(module, key, parity, max_d):
    pieces = []
    for d in range(0, max_d + 1):
        lv = PowerLevel(module, d, parity, key)
        if lv.dim:
            pieces.append((d, lv))
    return GradedPowerLevel(pieces)


def power_module_cyclic(c: CyclicOperadData, parity, _validate=True) -> DownModule:
    """The downward module structure on the symmetric/exterior powers of c.

    Callers are expected to have validated c (the CLI and the verifiers
    do); only the support condition is re-checked here.
    """
    if c.module.level(0).dim != 0:
        raise ValueError("cyclic operad data must vanish at level 0")
    N = c.truncation
    min_tot = min(c.module.support) if c.module.support else N + 1
    graded = {}
    reps = {}
    for n in range(0, N + 1):
        g = _power_pieces(c.module, n, parity, n // min_tot if n else 0)
        if g.dim:
            graded[n] = g
            reps[n] = g.rep((n,))
    module = FBModule(reps, N)
    contractions = {}
    for n in range(2, N + 1):
        if n not in graded or (n - 2) not in graded:
            continue
        contractions[n] = _cyclic_contraction(c, graded[n], graded[n - 2], n, parity)
    tag = CatTag("undirected", 1 if parity == "symmetric" else -1,
                 1 if parity == "symmetric" else -1, "down")
    return DownModule(tag, module, contractions, level_data=graded)


def _cyclic_contraction(c, src: GradedPowerLevel, dst: GradedPowerLevel, n, parity):
    cols = []
    x, y = n - 1, n
    for k in range(src.dim):
        d, label, fib = src.class_rep(k)
        if d < 2:
            cols.append(())
            continue
        a = b = None
        for pi, part in enumerate(label):
            if x in part:
                a = pi
            if y in part:
                b = pi
        if a == b:
            cols.append(())
            continue
        sign = _move_front_sign(d, a, b, parity)
        lv, _ = src.degree_slice(d)
        space = lv.space
        li = space.label_index[label]
        reps_ = space.fiber_reps[li]
        strides = space.fiber_strides(li)
        multi = []
        rem = fib
        for s in strides:
            multi.append(rem // s)
            rem %= s
        comp = c.component(label[a], label[b], x, y)
        dims_b = reps_[b].dim
        vec = comp.cols[multi[a] * dims_b + multi[b]]
        merged = tuple(v for v in sorted(set(label[a]) | set(label[b])) if v not in (x, y))
        new_label = (merged,) + tuple(
            part for pi, part in enumerate(label) if pi not in (a, b)
        )
        rest_idx = [multi[pi] for pi in range(d) if pi not in (a, b)]
        # fiber strides in the target label: merged factor first, rest in order
        tgt_lv, _ = dst.degree_slice(d - 1)
        entries = []
        if tgt_lv is not None and new_label in tgt_lv.space.label_index:
            tli = tgt_lv.space.label_index[new_label]
            tstrides = tgt_lv.space.fiber_strides(tli)
            base = sum(ix * s for ix, s in zip(rest_idx, tstrides[1:]))
            for row, coeff in vec:
                flat = row * tstrides[0] + base
                entries.append((flat, coeff * sign))
            resolved = dst.resolve(d - 1, new_label, entries)
        else:
            resolved = ()
        cols.append(resolved)
    return LinMap.from_columns(src.dim, dst.dim, cols)


def power_module_dioperad(d: DioperadData, parity, _validate=True) -> DownModule:
    """The walled downward module structure on the powers of a dioperad."""
    if d.module.level((0, 0)).dim != 0:
        raise ValueError("dioperad data must vanish at bi-level (0,0)")
    N = d.truncation
    min_tot = min((m + n) for m, n in d.module.support) if d.module.support else N + 1
    graded = {}
    reps = {}
    for m in range(0, N + 1):
        for n in range(0, N + 1 - m):
            tot = m + n
            g = _power_pieces(d.module, (m, n), parity, tot // min_tot if tot else 0)
            if g.dim:
                graded[(m, n)] = g
                reps[(m, n)] = g.rep((m, n))
    module = FB2Module(reps, N)
    contractions = {}
    for key in list(graded):
        m, n = key
        if m < 1 or n < 1 or (m - 1, n - 1) not in graded:
            continue
        contractions[key] = _dioperad_contraction(d, graded[key], graded[(m - 1, n - 1)], key, parity)
    tag = CatTag("walled", None, 1 if parity == "symmetric" else -1, "down")
    return DownModule(tag, module, contractions, level_data=graded)


def _dioperad_contraction(dop, src: GradedPowerLevel, dst: GradedPowerLevel, key, parity):
    m, n = key
    cols = []
    for k in range(src.dim):
        d, label, fib = src.class_rep(k)
        if d < 2:
            cols.append(())
            continue
        a = b = None
        for pi, (lp, rp) in enumerate(label):
            if m in lp:
                a = pi
            if n in rp:
                b = pi
        if a is None or b is None or a == b:
            cols.append(())
            continue
        sign = _move_front_sign(d, a, b, parity)
        lv, _ = src.degree_slice(d)
        space = lv.space
        li = space.label_index[label]
        reps_ = space.fiber_reps[li]
        strides = space.fiber_strides(li)
        multi = []
        rem = fib
        for s in strides:
            multi.append(rem // s)
            rem %= s
        comp = dop.component(label[a], label[b], m, n)
        vec = comp.cols[multi[a] * reps_[b].dim + multi[b]]
        merged_l = tuple(v for v in sorted(set(label[a][0]) | set(label[b][0])) if v != m)
        merged_r = tuple(v for v in sorted(set(label[a][1]) | set(label[b][1])) if v != n)
        new_label = ((merged_l, merged_r),) + tuple(
            part for pi, part in enumerate(label) if pi not in (a, b)
        )
        rest_idx = [multi[pi] for pi in range(d) if pi not in (a, b)]
        tgt_lv, _ = dst.degree_slice(d - 1)
        resolved = ()
        if tgt_lv is not None and new_label in tgt_lv.space.label_index:
            tli = tgt_lv.space.label_index[new_label]
            tstrides = tgt_lv.space.fiber_strides(tli)
            base = sum(ix * s for ix, s in zip(rest_idx, tstrides[1:]))
            entries = [(row * tstrides[0] + base, coeff * sign) for row, coeff in vec]
            resolved = dst.resolve(d - 1, new_label, entries)
        cols.append(resolved)
    return LinMap.from_columns(src.dim, dst.dim, cols)


def wall_restrict(g: DownModule) -> DownModule:
    """Restriction of an unwalled downward module along the wall functor.

    The walled contraction at (s, t) is the unwalled contraction at the
    ordered pair (s, s+t) read through the block identification.
    """
    if g.walled:
        raise ValueError("wall_restrict expects an unwalled module")
    module = amalg_pull(g.module)
    contractions = {}
    for (p, q) in module.levels:
        if p < 1 or q < 1:
            continue
        c = g.pair_action(p + q, (p, p + q))
        if not c.is_zero():
            contractions[(p, q)] = c
    tag = CatTag("walled", None, g.tag.order, "down")
    level_data = {key: g.level_data.get(key[0] + key[1]) for key in module.levels}
    return DownModule(tag, module, contractions, level_data=level_data)


def _push_levels(f_module: FB2Module):
    data = {}
    reps = {}
    for n in range(0, f_module.truncation + 1):
        lv = AmalgPushLevel(f_module, n)
        if lv.dim:
            data[n] = lv
            reps[n] = lv.rep()
    return data, reps


def unwall_push(f: DownModule, flip: int) -> DownModule:
    """The unwalled module induced by a walled one: sum over wall placements.

    The ordered pair (s, t) acts through the wall when s lies left and t
    right; the reversed crossing costs the chosen flip sign; same-block
    pairs act by zero.
    """
    if not f.walled:
        raise ValueError("unwall_push expects a walled module")
    data, reps = _push_levels(f.module)
    module = FBModule(reps, f.truncation)
    contractions = {}
    for n in range(2, f.truncation + 1):
        if n not in data or (n - 2) not in data:
            continue
        contractions[n] = _unwall_contraction(f, data[n], data[n - 2], n, flip, directed=False)
    tag = CatTag("undirected", flip, f.tag.order, "down")
    return DownModule(tag, module, contractions, level_data=data)


def unwall_push_directed(f: DownModule) -> DownModule:
    """Directed-category intermediate of unwall_push (no direction folding)."""
    if not f.walled:
        raise ValueError("unwall_push_directed expects a walled module")
    data, reps = _push_levels(f.module)
    module = FBModule(reps, f.truncation)
    contractions = {}
    for n in range(2, f.truncation + 1):
        if n not in data or (n - 2) not in data:
            continue
        contractions[n] = _unwall_contraction(f, data[n], data[n - 2], n, None, directed=True)
    tag = CatTag("directed", None, f.tag.order, "down")
    return DownModule(tag, module, contractions, level_data=data)


def _unwall_contraction(f, src: AmalgPushLevel, dst: AmalgPushLevel, n, flip, directed):
    cols = [()] * src.dim
    x, y = n - 1, n
    for li, U in enumerate(src.labels):
        comp = tuple(v for v in range(1, n + 1) if v not in set(U))
        rep = src.fiber_reps[li]
        key = (len(U), n - len(U))
        terms = []
        if x in U and y not in U:
            pair = (U.index(x) + 1, comp.index(y) + 1)
            terms.append((f.pair_action(key, pair), tuple(v for v in U if v != x), _ONE))
        if (not directed) and y in U and x not in U:
            pair = (U.index(y) + 1, comp.index(x) + 1)
            terms.append((f.pair_action(key, pair), tuple(v for v in U if v != y), Fraction(flip)))
        if not terms:
            continue
        for mat, newU, sgn in terms:
            ti = dst.label_index.get(newU)
            if ti is None:
                continue
            for fi in range(rep.dim):
                entries = [
                    (dst.flat(ti, row), coeff * sgn) for row, coeff in mat.cols[fi]
                ]
                old = cols[src.flat(li, fi)]
                cols[src.flat(li, fi)] = tuple(list(old) + entries)
    return LinMap.from_columns(src.dim, dst.dim, cols)


def undirect(m: DownModule, flip: int) -> DownModule:
    """Restrict a directed-category module to the undirected category.

    The unordered pair acts by (directed) + flip * (reversed direction).
    """
    if m.tag.shape != "directed":
        raise ValueError("undirect expects a directed-category module")
    contractions = {}
    for n in list(m.contractions):
        fwd = m.pair_action(n, (n - 1, n))
        rev = m.pair_action(n, (n, n - 1))
        contractions[n] = fwd.add(rev.scale(flip))
    tag = CatTag("undirected", flip, m.tag.order, "down")
    return DownModule(tag, m.module, contractions, level_data=dict(m.level_data))


def symplectic_tensor_module(dim2n: int, truncation: int) -> DownModule:
    """Tensor powers of a symplectic space; contraction by the standard form."""
    if dim2n % 2 or dim2n < 2:
        raise ValueError("the symplectic space must have positive even dimension")
    half = dim2n // 2
    reps = {n: perm_power_rep(dim2n, n) for n in range(0, truncation + 1)}
    module = FBModule(reps, truncation)

    def omega(i, j):
        if j == i + half:
            return _ONE
        if i == j + half:
            return -_ONE
        return Fraction(0)

    contractions = {}
    for n in range(2, truncation + 1):
        src, dst = reps[n], reps[n - 2]
        index = {w: i for i, w in enumerate(dst.labels)}
        cols = []
        for w in src.labels:
            coeff = omega(w[-2], w[-1])
            if coeff == 0:
                cols.append(())
            else:
                cols.append(((index[w[:-2]], coeff),))
        contractions[n] = LinMap(src.dim, dst.dim, cols)
    tag = CatTag("undirected", -1, 1, "down")
    return DownModule(tag, module, contractions)


def check_module_relations(mod) -> Report:
    """Verify generator equivariance and the degree-two quadratic relations."""
    if isinstance(mod, UpModule):
        return _check_up_relations(mod)
    report = Report(
        "module relations over " + mod.tag.shape, verified_range=f"<= {mod.truncation}"
    )
    if mod.walled:
        _check_down_walled(mod, report)
    else:
        _check_down_unwalled(mod, report)
    return report


def _check_down_unwalled(mod, report):
    order = mod.tag.order
    flip = mod.tag.flip
    for n in sorted(mod.contractions):
        rep = mod.level(n)
        c = mod.contraction(n)
        if mod.tag.shape == "undirected":
            tau = perms.transposition(n, n - 1, n)
            if c.compose(rep.act(tau)) != c.scale(flip):
                report.fail(n, "orientation", "pair reversal sign mismatch")
        # equivariance against every adjacent transposition
        for k in range(1, n):
            sigma = perms.transposition(n, k, k + 1)
            i, j = sigma[n - 2], sigma[n - 1]
            lhs = mod.pair_action(n, (i, j)).compose(rep.act(sigma))
            comp_labels = tuple(v for v in range(1, n + 1) if v not in (n - 1, n))
            sbar = perms.restriction_std(sigma, comp_labels)
            rhs = mod.level(n - 2).act(sbar).compose(c)
            if lhs != rhs:
                report.fail(n, "equivariance", f"generator {k}")
        if n - 4 < 0 or mod.level(n - 4).dim == 0:
            continue
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        for (i, j), (k, l) in itertools.combinations(pairs, 2):
            if len({i, j, k, l}) < 4:
                continue
            rest_ij = tuple(v for v in range(1, n + 1) if v not in (i, j))
            rest_kl = tuple(v for v in range(1, n + 1) if v not in (k, l))
            a = mod.pair_action(n - 2, (rest_ij.index(k) + 1, rest_ij.index(l) + 1)).compose(
                mod.pair_action(n, (i, j))
            )
            b = mod.pair_action(n - 2, (rest_kl.index(i) + 1, rest_kl.index(j) + 1)).compose(
                mod.pair_action(n, (k, l))
            )
            if a != b.scale(order):
                report.fail(n, "quadratic", f"pairs {(i, j)} and {(k, l)}")
                break


def _check_down_walled(mod, report):
    order = mod.tag.order
    for (m, n) in sorted(mod.contractions):
        rep = mod.level((m, n))
        c = mod.contraction((m, n))
        for side, size in ((0, m), (1, n)):
            for k in range(1, size):
                if side == 0:
                    sigma = (perms.transposition(m, k, k + 1), perms.identity(n))
                else:
                    sigma = (perms.identity(m), perms.transposition(n, k, k + 1))
                i = sigma[0][m - 1]
                j = sigma[1][n - 1]
                lhs = mod.pair_action((m, n), (i, j)).compose(rep.act(sigma))
                sbar = (
                    perms.restriction_std(sigma[0], tuple(range(1, m))),
                    perms.restriction_std(sigma[1], tuple(range(1, n))),
                )
                rhs = mod.level((m - 1, n - 1)).act(sbar).compose(c)
                if lhs != rhs:
                    report.fail((m, n), "equivariance", f"side {side} generator {k}")
        if m < 2 or n < 2 or mod.level((m - 2, n - 2)).dim == 0:
            continue
        walled_pairs = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
        for (i, j), (k, l) in itertools.combinations(walled_pairs, 2):
            if i == k or j == l:
                continue
            li = tuple(v for v in range(1, m + 1) if v != i)
            rj = tuple(v for v in range(1, n + 1) if v != j)
            lk = tuple(v for v in range(1, m + 1) if v != k)
            rl = tuple(v for v in range(1, n + 1) if v != l)
            a = mod.pair_action((m - 1, n - 1), (li.index(k) + 1, rj.index(l) + 1)).compose(
                mod.pair_action((m, n), (i, j))
            )
            b = mod.pair_action((m - 1, n - 1), (lk.index(i) + 1, rl.index(j) + 1)).compose(
                mod.pair_action((m, n), (k, l))
            )
            if a != b.scale(order):
                report.fail((m, n), "quadratic", f"pairs {(i, j)} and {(k, l)}")
                break


def _check_up_relations(mod):
    report = Report(
        "module relations over upward " + mod.tag.shape,
        verified_range=f"<= {mod.truncation}",
    )
    if mod.walled:
        for (m, n) in sorted(mod.raisings):
            u = mod.raising((m, n))
            tgt2 = (m + 2, n + 2)
            if mod.level(tgt2).dim == 0:
                continue
            for (i, j) in itertools.product(range(1, m + 3), range(1, n + 3)):
                for (k, l) in itertools.product(range(1, m + 3), range(1, n + 3)):
                    if i == k or j == l:
                        continue
                    li = tuple(v for v in range(1, m + 3) if v != i)
                    rj = tuple(v for v in range(1, n + 3) if v != j)
                    lk = tuple(v for v in range(1, m + 3) if v != k)
                    rl = tuple(v for v in range(1, n + 3) if v != l)
                    a = mod.pair_action((m + 1, n + 1), (i, j)).compose(
                        mod.pair_action((m, n), (li.index(k) + 1, rj.index(l) + 1))
                    )
                    b = mod.pair_action((m + 1, n + 1), (k, l)).compose(
                        mod.pair_action((m, n), (lk.index(i) + 1, rl.index(j) + 1))
                    )
                    if a != b.scale(mod.tag.order):
                        report.fail((m, n), "quadratic", f"{(i, j)} then {(k, l)}")
                        break
    else:
        for n in sorted(mod.raisings):
            u = mod.raising(n)
            if mod.tag.shape == "undirected":
                tau = perms.transposition(n + 2, n + 1, n + 2)
                if mod.level(n + 2).act(tau).compose(u) != u.scale(mod.tag.flip):
                    report.fail(n, "orientation", "pair reversal sign mismatch")
            if mod.level(n + 4).dim == 0:
                continue
            for (i, j) in itertools.combinations(range(1, n + 5), 2):
                for (k, l) in itertools.combinations(range(1, n + 5), 2):
                    if len({i, j, k, l}) < 4:
                        continue
                    rest_kl = tuple(v for v in range(1, n + 5) if v not in (k, l))
                    rest_ij = tuple(v for v in range(1, n + 5) if v not in (i, j))
                    a = mod.pair_action(n + 2, (k, l)).compose(
                        mod.pair_action(n, (rest_kl.index(i) + 1, rest_kl.index(j) + 1))
                    )
                    b = mod.pair_action(n + 2, (i, j)).compose(
                        mod.pair_action(n, (rest_ij.index(k) + 1, rest_ij.index(l) + 1))
                    )
                    if a != b.scale(mod.tag.order):
                        report.fail(n, "quadratic", f"{(i, j)} vs {(k, l)}")
                        break
    return report


def projective_up_module(tag: CatTag, base, truncation) -> UpModule:
    """The standard projective on a walled or unwalled object, as an UpModule."""
    if tag.direction != "up":
        raise ValueError("projective modules here are upward")
    reps = {}
    raisings = {}
    keys = []
    if tag.walled:
        bx, by = base
        k = 0
        while bx + by + 2 * k <= truncation:
            keys.append((bx + k, by + k))
            k += 1
    else:
        k = 0
        while base + 2 * k <= truncation:
            keys.append(base + 2 * k)
            k += 1
    bases = {}
    for key in keys:
        basis = hom_basis(tag, base, key)
        bases[key] = basis
        if not basis:
            continue
        index = {mor.key(): i for i, mor in enumerate(basis)}
        if tag.walled:
            m, n = key
            gens = []
            for k in range(1, m):
                gens.append(_post_gen(basis, index, (perms.transposition(m, k, k + 1), perms.identity(n))))
            for k in range(1, n):
                gens.append(_post_gen(basis, index, (perms.identity(m), perms.transposition(n, k, k + 1))))
            reps[key] = SymRep((m, n), len(basis), gens, labels=[b.key() for b in basis], check=False)
        else:
            nn = key
            gens = [
                _post_gen(basis, index, perms.transposition(nn, k, k + 1))
                for k in range(1, nn)
            ]
            reps[key] = SymRep((nn,), len(basis), gens, labels=[b.key() for b in basis], check=False)
    module_cls = FB2Module if tag.walled else FBModule
    module = module_cls(reps, truncation)
    for key, basis in bases.items():
        if not basis:
            continue
        if tag.walled:
            m, n = key
            nxt = (m + 1, n + 1)
            if nxt not in reps:
                continue
            gen_m = beta(tag, m, n, m + 1, n + 1)
        else:
            nxt = key + 2
            if nxt not in reps:
                continue
            gen_m = alpha(tag, key, key + 1, key + 2)
        tgt_index = {mor.key(): i for i, mor in enumerate(bases[nxt])}
        cols = []
        for mor in basis:
            out = compose(mor, gen_m)
            cols.append(((tgt_index[out.key()], out.coeff),))
        raisings[key] = LinMap(len(basis), len(bases[nxt]), cols)
    return UpModule(tag, module, raisings, level_data=bases)


def _post_gen(basis, index, sigma):
    cols = []
    for mor in basis:
        out = postcompose_perm(mor, sigma)
        cols.append(((index[out.key()], out.coeff),))
    return LinMap(len(basis), len(basis), cols)


def unwall_push_up(f: UpModule, flip: int) -> UpModule:
    """Upward analogue of unwall_push: the two-summand degree-one action."""
    if not f.walled:
        raise ValueError("unwall_push_up expects a walled module")
    data, reps = _push_levels(f.module)
    module = FBModule(reps, f.truncation)
    raisings = {}
    for n in range(0, f.truncation - 1):
        if n not in data or (n + 2) not in data:
            continue
        src, dst = data[n], data[n + 2]
        cols = [()] * src.dim
        for li, U in enumerate(src.labels):
            key = (len(U), n - len(U))
            rep = src.fiber_reps[li]
            # first term: new left label n+1, new right label n+2
            u1 = f.raising(key)
            t1 = dst.label_index.get(tuple(sorted(U + (n + 1,))))
            # second term: new left label n+2, new right n+1, with the flip sign
            t2 = dst.label_index.get(tuple(sorted(U + (n + 2,))))
            for fi in range(rep.dim):
                entries = []
                if t1 is not None:
                    entries += [(dst.flat(t1, row), c) for row, c in u1.cols[fi]]
                if t2 is not None:
                    entries += [
                        (dst.flat(t2, row), c * flip) for row, c in u1.cols[fi]
                    ]
                cols[src.flat(li, fi)] = tuple(entries)
        raisings[n] = LinMap.from_columns(src.dim, dst.dim, cols)
    tag = CatTag("undirected", flip, f.tag.order, "up")
    return UpModule(tag, module, raisings, level_data=data)


def _phi_walled_to_unwalled(md_walled: DownModule, mc_unwalled: DownModule, key) -> LinMap:
    """Canonical identification of a walled power level inside the unwalled one.

    md_walled is a power module of the dioperad restricted from c; the
    unwalled side resolves bi-decompositions through block concatenation.
    """
    m, n = key
    repB = md_walled.level(key)
    repA = mc_unwalled.level(key) if mc_unwalled.walled else mc_unwalled.level(m + n)
    graded = md_walled.level_data.get(key)
    target = mc_unwalled.level_data.get(key) if mc_unwalled.walled else mc_unwalled.level_data.get(m + n)
    cols = []
    for k in range(repB.dim):
        d, label, fib = graded.class_rep(k)
        parts = tuple(
            tuple(sorted(list(lp) + [m + r for r in rp])) for lp, rp in label
        )
        cols.append(target.resolve(d, parts, ((fib, _ONE),)))
    return LinMap.from_columns(repB.dim, repA.dim, cols)


def compare_cyclic_to_dioperad_modules(c, parity, total_bound) -> Report:
    """Walled restriction of the cyclic power module vs the dioperad power module."""
    report = Report(
        f"wall comparison ({parity})", verified_range=f"bi-levels with total <= {total_bound}"
    )
    mc = power_module_cyclic(c, parity)
    A = wall_restrict(mc)
    B = power_module_dioperad(to_dioperad(c), parity)
    for m in range(0, total_bound + 1):
        for n in range(0, total_bound + 1 - m):
            key = (m, n)
            da, db = A.level(key).dim, B.level(key).dim
            if da != db:
                report.fail(key, "dimension", f"{da} vs {db}")
                continue
            if db == 0:
                continue
            phi = _phi_walled_to_unwalled(B, A, key)
            from .linalg import rank as _rank

            if _rank(phi.to_exact()) != db:
                report.fail(key, "identification", "canonical map is not invertible")
                continue
            for ga, gb in zip(A.level(key).gens, B.level(key).gens):
                if phi.compose(gb) != ga.compose(phi):
                    report.fail(key, "equivariance", "generator actions differ")
                    break
            if m >= 1 and n >= 1 and m + n - 2 >= 0:
                tgt = (m - 1, n - 1)
                if A.level(tgt).dim or B.level(tgt).dim:
                    phi_t = _phi_walled_to_unwalled(B, A, tgt)
                    lhs = phi_t.compose(B.contraction(key))
                    rhs = A.contraction(key).compose(phi)
                    if lhs != rhs:
                        report.fail(key, "contraction", "structure maps differ")
    return report


def compare_dioperad_to_cyclic_modules(dop, parity, total_bound) -> Report:
    """Unwalled push of the dioperad power module vs the cyclic power module."""
    report = Report(
        f"unwall comparison ({parity})", verified_range=f"levels <= {total_bound}"
    )
    flip = 1 if parity == "symmetric" else -1
    md = power_module_dioperad(dop, parity)
    A = unwall_push(md, flip)
    B = power_module_cyclic(to_cyclic(dop), parity)

    def phi_at(nn) -> LinMap:
        repA, repB = A.level(nn), B.level(nn)
        push = A.level_data.get(nn)
        gradedB = B.level_data.get(nn)
        cols = []
        for k in range(repB.dim):
            d, parts, fib = gradedB.class_rep(k)
            lv, _ = gradedB.degree_slice(d)
            space = lv.space
            li = space.label_index[parts]
            strides = space.fiber_strides(li)
            multi = []
            rem = fib
            for s in strides:
                multi.append(rem // s)
                rem %= s
            # each factor's fiber is a push level over the dioperad
            bi_parts = []
            ws = []
            x1 = []
            for part, f in zip(parts, multi):
                push_factor = _factor_push_level(dop, len(part))
                uli, w = push_factor.locate(f)
                u_local = push_factor.labels[uli]
                u_global = tuple(part[u - 1] for u in u_local)
                x1 += list(u_global)
                bi_parts.append((u_global, tuple(v for v in part if v not in set(u_global))))
                ws.append(w)
            x1 = tuple(sorted(x1))
            x2 = tuple(v for v in range(1, nn + 1) if v not in set(x1))
            posl = {v: i + 1 for i, v in enumerate(x1)}
            posr = {v: i + 1 for i, v in enumerate(x2)}
            bi_label = tuple(
                (
                    tuple(posl[v] for v in up),
                    tuple(posr[v] for v in vp),
                )
                for up, vp in bi_parts
            )
            wk = (len(x1), nn - len(x1))
            walled_graded = md.level_data.get(wk)
            if walled_graded is None or push is None:
                cols.append(())
                continue
            # flatten the per-factor fibre indices into the walled fiber index
            lvw, _ = walled_graded.degree_slice(d)
            entries = ()
            if lvw is not None and bi_label in lvw.space.label_index:
                wli = lvw.space.label_index[bi_label]
                wstrides = lvw.space.fiber_strides(wli)
                wf = sum(w * s for w, s in zip(ws, wstrides))
                inner = walled_graded.resolve(d, bi_label, ((wf, _ONE),))
                pi = push.label_index.get(x1)
                if pi is not None:
                    entries = tuple((push.flat(pi, i), cc) for i, cc in inner)
            cols.append(entries)
        return LinMap.from_columns(repB.dim, repA.dim, cols)

    from .linalg import rank as _rank

    for nn in range(0, total_bound + 1):
        da, db = A.level(nn).dim, B.level(nn).dim
        if da != db:
            report.fail(nn, "dimension", f"{da} vs {db}")
            continue
        if db == 0:
            continue
        phi = phi_at(nn)
        if _rank(phi.to_exact()) != db:
            report.fail(nn, "identification", "canonical map is not invertible")
            continue
        for ga, gb in zip(A.level(nn).gens, B.level(nn).gens):
            if phi.compose(gb) != ga.compose(phi):
                report.fail(nn, "equivariance", "generator actions differ")
                break
        if nn >= 2 and (A.level(nn - 2).dim or B.level(nn - 2).dim):
            phi_t = phi_at(nn - 2)
            if phi_t.compose(B.contraction(nn)) != A.contraction(nn).compose(phi):
                report.fail(nn, "contraction", "structure maps differ")
    return report


_PUSH_CACHE = {}


def _factor_push_level(dop, size):
    key = (id(dop), size)
    if key not in _PUSH_CACHE:
        _PUSH_CACHE[key] = AmalgPushLevel(dop.module, size)
    return _PUSH_CACHE[key]
