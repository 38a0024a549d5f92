"""Cyclic operads and dioperads as finite truncated data.

The binary structure map is stored only on canonical skeletal components
(contracted elements are the largest labels of the relevant blocks); all
other components are synthesized by equivariance and symmetry.  Axioms
are validated mechanically, within the truncation, by the module
relation checker.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import perms
from .convolution import amalg_pull, AmalgPushLevel, amalg_push
from .reps import FB2Module, FBModule, SymRep, trivial_rep
from .sparse import LinMap


def _rank_in(sorted_tuple, x):
    return sorted_tuple.index(x) + 1


class CyclicOperadData:
    """A cyclic operad, possibly with unit, truncated at a top level."""

    def __init__(self, module: FBModule, mu, unit=None, truncation=None):
        if module.level(0).dim != 0:
            raise ValueError("a cyclic operad vanishes on the empty set")
        self.module = module
        self.truncation = module.truncation if truncation is None else truncation
        self.mu = dict(mu)
        self.unit = tuple(Fraction(x) for x in unit) if unit is not None else None
        if self.unit is not None and len(self.unit) != module.level(2).dim:
            raise ValueError("unit vector does not live in the binary level")

    def level(self, n) -> SymRep:
        return self.module.level(n)

    def mu_map(self, p, q) -> LinMap:
        """Canonical component C(p) x C(q) -> C(p+q-2), contracting (p, p+q)."""
        m = self.mu.get((p, q))
        if m is None:
            return LinMap.zero(
                self.level(p).dim * self.level(q).dim, self.level(p + q - 2).dim
            )
        return m

    def component(self, U, V, x, y) -> LinMap:
        """Structure component C(U) x C(V) -> C((U u V) - {x,y}) for x in U, y in V.

        Label sets are identified with skeleta by their order isomorphisms.
        """
        U, V = tuple(sorted(U)), tuple(sorted(V))
        if x not in U or y not in V:
            raise ValueError("contracted elements must cross the two blocks")
        p, q = len(U), len(V)
        repU, repV = self.level(p), self.level(q)
        target = self.level(p + q - 2)
        if repU.dim == 0 or repV.dim == 0 or target.dim == 0:
            return LinMap.zero(repU.dim * repV.dim, target.dim)
        aU = perms.moving_perm(p, (_rank_in(U, x),), (p,))
        bV = perms.moving_perm(q, (_rank_in(V, y),), (q,))
        base = self.mu_map(p, q).compose(repU.act(aU).kron(repV.act(bV)))
        merged_list = [u for u in U if u != x] + [v for v in V if v != y]
        h = perms.sort_perm(merged_list)
        return target.act(h).compose(base)


class DioperadData:
    """A dioperad, possibly with unit, truncated at a top total size."""

    def __init__(self, module: FB2Module, mu, unit=None, truncation=None):
        if module.level((0, 0)).dim != 0:
            raise ValueError("a dioperad vanishes on the empty bi-set")
        self.module = module
        self.truncation = module.truncation if truncation is None else truncation
        self.mu = dict(mu)
        self.unit = tuple(Fraction(x) for x in unit) if unit is not None else None
        if self.unit is not None and len(self.unit) != module.level((1, 1)).dim:
            raise ValueError("unit vector does not live at bi-level (1,1)")

    def level(self, key) -> SymRep:
        return self.module.level(tuple(key))

    def mu_map(self, key1, key2) -> LinMap:
        """Canonical component contracting (largest left of first, largest right of second)."""
        m = self.mu.get((tuple(key1), tuple(key2)))
        if m is None:
            m1, n1 = key1
            m2, n2 = key2
            return LinMap.zero(
                self.level(key1).dim * self.level(key2).dim,
                self.level((m1 + m2 - 1, n1 + n2 - 1)).dim,
            )
        return m

    def component(self, first, second, s, t) -> LinMap:
        """Structure component for bi-label sets; s in first's left, t in second's right."""
        (A1, B1), (A2, B2) = first, second
        A1, B1 = tuple(sorted(A1)), tuple(sorted(B1))
        A2, B2 = tuple(sorted(A2)), tuple(sorted(B2))
        if s not in A1 or t not in B2:
            raise ValueError("contraction must run first-left to second-right")
        k1, k2 = (len(A1), len(B1)), (len(A2), len(B2))
        rep1, rep2 = self.level(k1), self.level(k2)
        tkey = (len(A1) + len(A2) - 1, len(B1) + len(B2) - 1)
        target = self.level(tkey)
        if rep1.dim == 0 or rep2.dim == 0 or target.dim == 0:
            return LinMap.zero(rep1.dim * rep2.dim, target.dim)
        aL = perms.moving_perm(k1[0], (_rank_in(A1, s),), (k1[0],))
        bR = perms.moving_perm(k2[1], (_rank_in(B2, t),), (k2[1],))
        conv1 = rep1.act((aL, perms.identity(k1[1])))
        conv2 = rep2.act((perms.identity(k2[0]), bR))
        base = self.mu_map(k1, k2).compose(conv1.kron(conv2))
        left_list = [a for a in A1 if a != s] + list(A2)
        right_list = list(B1) + [b for b in B2 if b != t]
        h = (perms.sort_perm(left_list), perms.sort_perm(right_list))
        return target.act(h).compose(base)


def _swap_kron(d1, d2):
    """LinMap swapping tensor factors: basis (i,j) row-major -> (j,i)."""
    cols = []
    for i in range(d1):
        for j in range(d2):
            cols.append(((j * d1 + i, Fraction(1)),))
    return LinMap(d1 * d2, d2 * d1, cols)


def to_dioperad(c: CyclicOperadData) -> DioperadData:
    """Restriction along disjoint union, projecting onto the cross-wall component."""
    module = amalg_pull(c.module)
    mu = {}
    for (m1, n1) in module.levels:
        for (m2, n2) in module.levels:
            if m1 == 0 and m2 == 0:
                continue
            tkey = (m1 + m2 - 1, n1 + n2 - 1)
            if tkey not in module.levels or tkey[0] < 0 or tkey[1] < 0:
                continue
            M = m1 + m2 - 1
            n = m1 + n1 + m2 + n2
            # universe labels chosen so the target comes out in wall order
            U1 = tuple(sorted(list(range(1, m1)) + [n - 1] + list(range(M + 1, M + n1 + 1))))
            U2 = tuple(
                sorted(list(range(m1, M + 1)) + list(range(M + n1 + 1, n - 1)) + [n])
            )
            if m1 == 0 or n2 == 0:
                continue  # the cross-wall contraction needs both blocks inhabited
            comp = c.component(U1, U2, n - 1, n)
            # convert the first factor from wall order to plain sorted order
            L1 = list(range(1, m1)) + [n - 1] + list(range(M + 1, M + n1 + 1))
            pi1 = perms.sort_perm(L1)
            conv = c.level(m1 + n1).act(pi1).kron(LinMap.identity(c.level(m2 + n2).dim))
            mat = comp.compose(conv)
            if not mat.is_zero():
                mu[((m1, n1), (m2, n2))] = mat
    return DioperadData(module, mu, unit=c.unit, truncation=c.truncation)


def to_cyclic(d: DioperadData) -> CyclicOperadData:
    """Push-forward along disjoint union; contraction assembled across the wall."""
    module = amalg_push(d.module)
    push_levels = {n: AmalgPushLevel(d.module, n) for n in range(0, d.truncation + 1)}
    mu = {}
    for p in module.support:
        for q in module.support:
            tkey = p + q - 2
            if tkey < 0 or tkey > d.truncation or tkey not in module.levels:
                continue
            lp, lq, lt = push_levels[p], push_levels[q], push_levels[tkey]
            cols = [[] for _ in range(lp.dim * lq.dim)]
            for li1, U1 in enumerate(lp.labels):
                V1 = tuple(x for x in range(1, p + 1) if x not in set(U1))
                for li2, U2 in enumerate(lq.labels):
                    V2 = tuple(x for x in range(1, q + 1) if x not in set(U2))
                    # embed the second factor's labels after the first's
                    A2 = tuple(p + x for x in U2)
                    B2 = tuple(p + x for x in V2)
                    case_a = (p in U1) and (q in V2)
                    case_b = (p in V1) and (q in U2)
                    if not (case_a or case_b):
                        continue
                    if case_a:
                        comp = d.component((U1, V1), (A2, B2), p, p + q)
                        swap = None
                        left_list = [a for a in U1 if a != p] + list(A2)
                    else:
                        comp = d.component((A2, B2), (U1, V1), p + q, p)
                        swap = _swap_kron(lp.fiber_reps[li1].dim, lq.fiber_reps[li2].dim)
                        left_list = [a for a in A2 if a != p + q] + list(U1)
                    if swap is not None:
                        comp = comp.compose(swap)
                    # target left-label set, relabelled into the skeleton of p+q-2
                    universe = [x for x in range(1, p + q + 1) if x not in (p, p + q)]
                    pos = {v: i + 1 for i, v in enumerate(universe)}
                    Ut = tuple(sorted(pos[a] for a in left_list))
                    ti = lt.label_index.get(Ut)
                    if ti is None:
                        continue
                    d1, d2 = lp.fiber_reps[li1].dim, lq.fiber_reps[li2].dim
                    for f1 in range(d1):
                        for f2 in range(d2):
                            src = lp.flat(li1, f1) * lq.dim + lq.flat(li2, f2)
                            col = comp.cols[f1 * d2 + f2]
                            for row, coeff in col:
                                cols[src].append((lt.flat(ti, row), coeff))
            mat = LinMap.from_columns(lp.dim * lq.dim, lt.dim, cols)
            if not mat.is_zero():
                mu[(p, q)] = mat
    unit = None
    if d.unit is not None:
        # [e] + [tau]: the normalization for which plugging the unit is the
        # identity relabelling (the halved section only splits the projection)
        l2 = push_levels[2]
        vec = [Fraction(0)] * l2.dim
        for U in ((1,), (2,)):
            li = l2.label_index[U]
            for fi, x in enumerate(d.unit):
                vec[l2.flat(li, fi)] += x
        unit = tuple(vec)
    return CyclicOperadData(module, mu, unit=unit, truncation=d.truncation)


def underlying_operad(d: DioperadData) -> DioperadData:
    """Zero out every bi-level whose second component is not 1."""
    levels = {k: rep for k, rep in d.module.levels.items() if k[1] == 1}
    module = FB2Module(levels, d.truncation)
    mu = {
        (k1, k2): m
        for (k1, k2), m in d.mu.items()
        if k1 in levels and k2 in levels and (k1[0] + k2[0] - 1, 1) in levels
    }
    return DioperadData(module, mu, unit=d.unit, truncation=d.truncation)


def positive_part(d: DioperadData) -> DioperadData:
    """Zero out bi-levels with an empty input or output block."""
    levels = {k: rep for k, rep in d.module.levels.items() if k[0] > 0 and k[1] > 0}
    module = FB2Module(levels, d.truncation)
    keep = set(levels)
    mu = {
        (k1, k2): m
        for (k1, k2), m in d.mu.items()
        if k1 in keep and k2 in keep and (k1[0] + k2[0] - 1, k1[1] + k2[1] - 1) in keep
    }
    unit = d.unit if (1, 1) in keep else None
    return DioperadData(module, mu, unit=unit, truncation=d.truncation)


def opposite(d: DioperadData) -> DioperadData:
    """Swap the two sides of the wall; involutive."""
    levels = {}
    for (m, n), rep in d.module.levels.items():
        gens = list(rep.gens[m - 1 :]) + list(rep.gens[: m - 1])
        levels[(n, m)] = SymRep((n, m), rep.dim, gens, labels=rep.labels, check=False)
    module = FB2Module(levels, d.truncation)
    mu = {}
    for (a1, b1) in levels:
        for (a2, b2) in levels:
            tkey = (a1 + a2 - 1, b1 + b2 - 1)
            if tkey not in levels or a1 == 0 or b2 == 0:
                continue
            # original data: factor_i has left b_i, right a_i
            f2_sets = (
                tuple(range(b1 + 1, b1 + b2 + 1)),
                tuple(range(a1 + 1, a1 + a2 + 1)),
            )
            f1_sets = (tuple(range(1, b1 + 1)), tuple(range(1, a1 + 1)))
            if b2 == 0 or a1 == 0:
                continue
            comp = d.component(f2_sets, f1_sets, b1 + b2, a1)
            swap = _swap_kron(d.level((b1, a1)).dim, d.level((b2, a2)).dim)
            mat = comp.compose(swap)
            if not mat.is_zero():
                mu[((a1, b1), (a2, b2))] = mat
    return DioperadData(module, mu, unit=d.unit, truncation=d.truncation)


def _cyclic_orders(n):
    """Cyclic orders on {1..n} as tuples rotated to start at 1."""
    if n == 0:
        return []
    return [(1,) + rest for rest in itertools.permutations(range(2, n + 1))]


def _canon_cycle(t):
    k = t.index(min(t))
    return t[k:] + t[:k]


def _cyclic_rep(n):
    labels = _cyclic_orders(n)
    index = {c: i for i, c in enumerate(labels)}
    gens = []
    for k in range(1, n):
        s = perms.transposition(n, k, k + 1)
        tgt = [index[_canon_cycle(tuple(s[x - 1] for x in c))] for c in labels]
        gens.append(LinMap.from_perm(tgt))
    return SymRep((n,), len(labels), gens, labels=labels, check=False)


def _graft(c1, c2, x, y, relabel1, relabel2):
    """Glue cyclic orders c1 (at x) and c2 (at y); relabel maps to target labels."""
    i = c1.index(x)
    run1 = c1[i + 1 :] + c1[:i]
    j = c2.index(y)
    run2 = c2[j + 1 :] + c2[:j]
    merged = tuple(relabel1[v] for v in run1) + tuple(relabel2[v] for v in run2)
    return _canon_cycle(merged)


def com_cyclic(truncation, unital=False) -> CyclicOperadData:
    levels = {n: trivial_rep((n,)) for n in range(2, truncation + 1)}
    module = FBModule(levels, truncation)
    mu = {}
    for p in range(2, truncation + 1):
        for q in range(2, truncation + 1):
            if 2 <= p + q - 2 <= truncation:
                mu[(p, q)] = LinMap.identity(1)
    return CyclicOperadData(module, mu, unit=(1,) if unital else None, truncation=truncation)


def assoc_cyclic(truncation) -> CyclicOperadData:
    levels = {n: _cyclic_rep(n) for n in range(2, truncation + 1)}
    module = FBModule(levels, truncation)
    mu = {}
    for p in range(2, truncation + 1):
        for q in range(2, truncation + 1):
            t = p + q - 2
            if t < 2 or t > truncation:
                continue
            src1, src2, tgt = levels[p], levels[q], levels[t]
            # first block keeps labels 1..p-1, second block shifts to p..p+q-2
            relabel1 = {v: v for v in range(1, p)}
            relabel2 = {v: (p - 1) + v for v in range(1, q)}
            cols = []
            for c1 in src1.labels:
                for c2 in src2.labels:
                    g = _graft(c1, c2, p, q, relabel1, relabel2)
                    cols.append(((tgt.labels.index(g), Fraction(1)),))
            mu[(p, q)] = LinMap(src1.dim * src2.dim, tgt.dim, cols)
    return CyclicOperadData(module, mu, truncation=truncation)


def com_operad_unital(truncation) -> DioperadData:
    levels = {(m, 1): trivial_rep((m, 1)) for m in range(1, truncation)}
    module = FB2Module(levels, truncation)
    mu = {}
    for m1 in range(1, truncation):
        for m2 in range(1, truncation):
            if (m1 + m2 - 1, 1) in levels:
                mu[((m1, 1), (m2, 1))] = LinMap.identity(1)
    return DioperadData(module, mu, unit=(1,), truncation=truncation)


def builtin(name, truncation):
    """Built-in corpus operads; truncation >= 2."""
    if truncation < 2:
        raise ValueError("truncation must be at least 2")
    if name == "com_cyclic":
        return com_cyclic(truncation)
    if name == "com_cyclic_unital":
        return com_cyclic(truncation, unital=True)
    if name == "com_operad_unital":
        return com_operad_unital(truncation)
    if name == "assoc_cyclic":
        return assoc_cyclic(truncation)
    raise ValueError(f"unknown builtin operad {name!r}")


@dataclass
class ValidationIssue:
    level: object
    kind: str
    detail: str


class Report:
    """A list of named check results with an overall verdict."""

    def __init__(self, title, verified_range=None):
        self.title = title
        self.verified_range = verified_range
        self.issues = []

    def fail(self, level, kind, detail=""):
        self.issues.append(ValidationIssue(level, kind, detail))

    @property
    def passed(self):
        return not self.issues

    def lines(self):
        out = [f"{self.title}: {'pass' if self.passed else 'FAIL'}"]
        if self.verified_range is not None:
            out.append(f"  verified range: {self.verified_range}")
        for i in self.issues:
            out.append(f"  FAIL {i.kind} at {i.level}: {i.detail}")
        return out


def validate_cyclic(c: CyclicOperadData) -> Report:
    """Check the cyclic operad axioms within the truncation.

    Associativity is verified as commutation of double contractions on the
    symmetric power module; the unit law is checked componentwise.
    """
    from .modules import check_module_relations, power_module_cyclic

    report = Report("cyclic operad axioms", verified_range=f"levels <= {c.truncation}")
    if c.module.level(0).dim != 0:
        report.fail(0, "support", "level 0 is nonzero")
    mod = power_module_cyclic(c, "symmetric", _validate=False)
    sub = check_module_relations(mod)
    for issue in sub.issues:
        report.fail(issue.level, "associativity", issue.detail)
    if c.unit is not None:
        _check_cyclic_unit(c, report)
    return report


def _check_cyclic_unit(c, report):
    rep2 = c.level(2)
    tau = rep2.act(perms.transposition(2, 1, 2))
    u = tuple((i, x) for i, x in enumerate(c.unit) if x != 0)
    if tuple(sorted(tau.apply(u))) != tuple(sorted(u)):
        report.fail(2, "unit", "unit vector is not symmetric")
    for q in c.module.support:
        if q > c.truncation or 2 > c.truncation:
            continue
        # glue the unit's second leg to the operation's largest label
        comp = c.mu_map(2, q)
        expected = c.level(q).act(_unit_cycle(q))
        got_cols = []
        for j in range(c.level(q).dim):
            vec = [(ui * c.level(q).dim + j, x) for ui, x in u]
            got_cols.append(comp.apply(vec))
        got = LinMap.from_columns(c.level(q).dim, c.level(q).dim, got_cols)
        if got != expected:
            report.fail(q, "unit", "plugging the unit does not act by relabelling")


def _unit_cycle(q):
    # target order puts the unit's surviving leg first: q -> 1, k -> k+1
    return tuple(list(range(2, q + 1)) + [1])


def validate_dioperad(d: DioperadData) -> Report:
    from .modules import check_module_relations, power_module_dioperad

    report = Report("dioperad axioms", verified_range=f"total size <= {d.truncation}")
    if d.module.level((0, 0)).dim != 0:
        report.fail((0, 0), "support", "bi-level (0,0) is nonzero")
    mod = power_module_dioperad(d, "symmetric", _validate=False)
    sub = check_module_relations(mod)
    for issue in sub.issues:
        report.fail(issue.level, "associativity", issue.detail)
    if d.unit is not None:
        _check_dioperad_unit(d, report)
    return report


def _check_dioperad_unit(d, report):
    u = tuple((i, x) for i, x in enumerate(d.unit) if x != 0)
    for (m, n) in d.module.support:
        rep = d.level((m, n))
        if m + n > d.truncation:
            continue
        if n >= 1:
            # glue the unit's output into the operation's largest output slot
            comp = d.mu_map((1, 1), (m, n))
            sigma = tuple(list(range(2, n + 1)) + [1])
            expected = rep.act((perms.identity(m), sigma))
            got_cols = []
            for j in range(rep.dim):
                vec = [(ui * rep.dim + j, x) for ui, x in u]
                got_cols.append(comp.apply(vec))
            if LinMap.from_columns(rep.dim, rep.dim, got_cols) != expected:
                report.fail((m, n), "unit", "left unit law fails")
        if m >= 1:
            comp2 = d.mu_map((m, n), (1, 1))
            got_cols = []
            for j in range(rep.dim):
                vec = [(j * len(d.unit) + ui, x) for ui, x in u]
                got_cols.append(comp2.apply(vec))
            if LinMap.from_columns(rep.dim, rep.dim, got_cols) != LinMap.identity(rep.dim):
                report.fail((m, n), "unit", "right unit law fails")
