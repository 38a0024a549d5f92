"""Symmetric-group representations, FB-modules, and coinvariant machinery.

A SymRep stores only the actions of adjacent transpositions (per factor
for S_m x S_n); arbitrary elements are rebuilt along reduced words and
memoised.  All representations are left representations; where a right
module is meant, it is encoded as the left representation g |-> (action
of g^{-1}) and the docstrings say so.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import perms
from .linalg import DimensionError, ExactMatrix, image_basis, rref
from .sparse import LinMap

_MAX_ENUMERATED_GROUP = 40320


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


class SymRep:
    """Representation of S_n (sizes=(n,)) or S_m x S_n (sizes=(m,n))."""

    def __init__(self, sizes, dim, gens, labels=None, check=True):
        sizes = tuple(sizes)
        expected = sum(max(s - 1, 0) for s in sizes)
        if len(gens) != expected:
            raise DimensionError("wrong number of generator actions")
        self.sizes = sizes
        self.dim = dim
        self.gens = [g if isinstance(g, LinMap) else LinMap.from_exact(g) for g in gens]
        for g in self.gens:
            if g.src_dim != dim or g.dst_dim != dim:
                raise DimensionError("generator action has wrong size")
        self.labels = labels
        self._cache = {}
        if check:
            self._check_relations()

    # generator layout: for (m, n) the first m-1 entries are the left factor
    def gen(self, factor, k):
        off = 0
        for f in range(factor):
            off += max(self.sizes[f] - 1, 0)
        return self.gens[off + k - 1]

    def _check_relations(self):
        if self.dim == 0:
            return
        ident = LinMap.identity(self.dim)
        for factor, n in enumerate(self.sizes):
            for k in range(1, n):
                s = self.gen(factor, k)
                if s.compose(s) != ident:
                    raise ValueError("generator is not an involution")
                if k + 1 < n:
                    t = self.gen(factor, k + 1)
                    if s.compose(t).compose(s) != t.compose(s).compose(t):
                        raise ValueError("braid relation fails")
                for j in range(k + 2, n):
                    t = self.gen(factor, j)
                    if s.compose(t) != t.compose(s):
                        raise ValueError("distant generators do not commute")
        if len(self.sizes) == 2:
            for k in range(1, self.sizes[0]):
                for j in range(1, self.sizes[1]):
                    s, t = self.gen(0, k), self.gen(1, j)
                    if s.compose(t) != t.compose(s):
                        raise ValueError("factors do not commute")

    def _act_one(self, factor, p):
        word = perms.adjacent_word(p)
        out = LinMap.identity(self.dim)
        for k in word:
            out = out.compose(self.gen(factor, k))
        return out

    def act(self, g) -> LinMap:
        """Action of g: a permutation tuple, or a pair of tuples for S_m x S_n."""
        if len(self.sizes) == 1:
            key = tuple(g)
            if key not in self._cache:
                self._cache[key] = self._act_one(0, key)
            return self._cache[key]
        gl, gr = g
        key = (tuple(gl), tuple(gr))
        if key not in self._cache:
            self._cache[key] = self._act_one(0, key[0]).compose(self._act_one(1, key[1]))
        return self._cache[key]

    def is_monomial(self):
        return all(g.is_monomial() for g in self.gens)

    def group_order(self):
        out = 1
        for s in self.sizes:
            out *= _factorial(s)
        return out

    def elements(self):
        """All group elements; guarded against huge groups."""
        if self.group_order() > _MAX_ENUMERATED_GROUP:
            raise ValueError("group too large to enumerate")
        if len(self.sizes) == 1:
            return [tuple(p) for p in itertools.permutations(range(1, self.sizes[0] + 1))]
        left = itertools.permutations(range(1, self.sizes[0] + 1))
        return [
            (tuple(l), tuple(r))
            for l in left
            for r in itertools.permutations(range(1, self.sizes[1] + 1))
        ]


def eval_perm(rep: SymRep, g) -> ExactMatrix:
    """Action matrix of a group element, via a reduced word in the generators."""
    if len(rep.sizes) == 1:
        if not perms.is_permutation(tuple(g)) or len(g) != rep.sizes[0]:
            raise ValueError("element does not lie in the representation's group")
    else:
        gl, gr = g
        if len(gl) != rep.sizes[0] or len(gr) != rep.sizes[1]:
            raise ValueError("element does not lie in the representation's group")
        if not (perms.is_permutation(tuple(gl)) and perms.is_permutation(tuple(gr))):
            raise ValueError("element does not lie in the representation's group")
    return rep.act(g).to_exact()


def zero_rep(sizes):
    return SymRep(sizes, 0, [LinMap.zero(0, 0)] * sum(max(s - 1, 0) for s in sizes), check=False)


def trivial_rep(sizes):
    n_gens = sum(max(s - 1, 0) for s in sizes)
    return SymRep(sizes, 1, [LinMap.identity(1)] * n_gens, check=False)


def sign_rep(n):
    return SymRep((n,), 1, [LinMap.from_perm([0], [-1])] * max(n - 1, 0), check=False)


def regular_rep(n):
    """Left translation on the group algebra of S_n; labels are the elements."""
    elems = [tuple(p) for p in itertools.permutations(range(1, n + 1))]
    index = {p: i for i, p in enumerate(elems)}
    gens = []
    for k in range(1, n):
        s = perms.transposition(n, k, k + 1)
        gens.append(LinMap.from_perm([index[perms.compose(s, p)] for p in elems]))
    return SymRep((n,), len(elems), gens, labels=elems, check=False)


def perm_power_rep(v_dim, n):
    """Place permutation of S_n on words of length n over a v_dim alphabet."""
    words = list(itertools.product(range(v_dim), repeat=n))
    index = {w: i for i, w in enumerate(words)}
    gens = []
    for k in range(n - 1):
        tgt = []
        for w in words:
            swapped = list(w)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            tgt.append(index[tuple(swapped)])
        gens.append(LinMap.from_perm(tgt))
    return SymRep((n,), len(words), gens, labels=words, check=False)


class Quotient:
    """Quotient of a vector space by span{ A_g v - chi_g v } for given maps.

    Built by quotient_space; exposes explicit projection and class lifts,
    with a fast union-find route when every relation map is monomial.
    """

    def __init__(self, src_dim, classes, project_fn, lift_fn):
        self.src_dim = src_dim
        self.dim = classes
        self._project = project_fn
        self._lift = lift_fn

    def project(self, vec):
        """Sparse source vector [(idx, coeff)] -> dense class coordinates."""
        return self._project(vec)

    def lift(self, k):
        """A sparse source representative of the k-th class basis vector."""
        return self._lift(k)

    def project_map(self, linmap: LinMap, source: "Quotient") -> ExactMatrix:
        """Matrix of the map induced on quotients (caller guarantees descent)."""
        out = ExactMatrix.zeros(self.dim, source.dim)
        for k in range(source.dim):
            coords = self.project(linmap.apply(source.lift(k)))
            for i, c in enumerate(coords):
                out.data[i][k] = c
        return out


def quotient_space(dim, relation_maps, characters=None) -> Quotient:
    """Quotient by span{ A v - chi v } over the given (map, character) pairs."""
    maps = list(relation_maps)
    if characters is None:
        characters = [1] * len(maps)
    if dim == 0:
        return Quotient(0, 0, lambda vec: [], lambda k: ())
    if all(m.is_monomial() for m in maps):
        return _monomial_quotient(dim, maps, characters)
    return _dense_quotient(dim, maps, characters)


def _monomial_quotient(dim, maps, characters):
    parent = list(range(dim))
    coeff = [Fraction(1)] * dim
    dead = [False] * dim

    # weighted union-find without path compression: e_i = c * e_root
    def resolve(i):
        c = Fraction(1)
        while parent[i] != i:
            c *= coeff[i]
            i = parent[i]
        return i, c

    for m, chi in zip(maps, characters):
        chi = Fraction(chi)
        for i in range(dim):
            col = m.cols[i]
            if not col:
                # A e_i = 0, so chi * e_i = 0 in the quotient
                r, c = resolve(i)
                dead[r] = True
                continue
            t, a = col[0]
            # relation: a e_t = chi e_i  =>  e_t = (chi/a) e_i
            ri, ci = resolve(i)
            rt, ct = resolve(t)
            if ri == rt:
                if ct != (chi / a) * ci:
                    dead[ri] = True
            else:
                # e_{rt} = (chi/a) ci / ct * e_{ri}
                parent[rt] = ri
                coeff[rt] = (chi / a) * ci / ct
                if dead[rt]:
                    dead[ri] = True

    # propagate deadness to roots
    for i in range(dim):
        r, _ = resolve(i)
        if dead[i]:
            dead[r] = True
    roots = [i for i in range(dim) if parent[i] == i and not dead[i]]
    root_index = {r: k for k, r in enumerate(roots)}

    def project(vec):
        out = [Fraction(0)] * len(roots)
        for i, c in vec:
            r, f = resolve(i)
            if dead[r]:
                continue
            out[root_index[r]] += c * f
        return out

    def lift(k):
        return ((roots[k], Fraction(1)),)

    return Quotient(dim, len(roots), project, lift)


def _dense_quotient(dim, maps, characters):
    rows = []
    for m, chi in zip(maps, characters):
        chi = Fraction(chi)
        for i in range(dim):
            row = [Fraction(0)] * dim
            for t, a in m.cols[i]:
                row[t] += a
            row[i] -= chi
            if any(x != 0 for x in row):
                rows.append(row)
    if not rows:
        red, pivots = ExactMatrix.zeros(0, dim), []
    else:
        red, pivots = rref(ExactMatrix.from_rows(rows))
    pivot_set = set(pivots)
    free = [c for c in range(dim) if c not in pivot_set]
    free_index = {c: k for k, c in enumerate(free)}
    pivot_rows = [(r, c) for r, c in enumerate(pivots)]

    def project(vec):
        dense = [Fraction(0)] * dim
        for i, c in vec:
            dense[i] += c
        for r, c in pivot_rows:
            f = dense[c]
            if f != 0:
                rrow = red.data[r]
                for j in range(dim):
                    if rrow[j] != 0:
                        dense[j] -= f * rrow[j]
        return [dense[c] for c in free]

    def lift(k):
        return ((free[k], Fraction(1)),)

    return Quotient(dim, len(free), project, lift)


def tensor_over_sym(a: SymRep, b: SymRep) -> ExactMatrix:
    """Basis (as columns) of the coinvariants of a (x) b over their common group.

    a plays the right-module role: it is interpreted as a right module by
    inversion, so the averaged operator is g |-> a(g) (x) b(g) with both
    factors the stored left actions.
    """
    if a.sizes != b.sizes:
        raise ValueError("tensor_over_sym: group mismatch")
    if a.dim == 0 or b.dim == 0:
        return ExactMatrix.zeros(a.dim * b.dim, 0)
    total = ExactMatrix.zeros(a.dim * b.dim, a.dim * b.dim)
    elems = a.elements()
    for g in elems:
        total = total.add(a.act(g).kron(b.act(g)).to_exact())
    proj = total.scale(Fraction(1, len(elems)))
    return image_basis(proj)


def balanced_tensor_dim(a: SymRep, b: SymRep) -> int:
    """dim of the coinvariants of a (x) b (a as right module by inversion)."""
    if a.sizes != b.sizes:
        raise ValueError("balanced_tensor_dim: group mismatch")
    if a.dim == 0 or b.dim == 0:
        return 0
    gens = [ga.kron(gb) for ga, gb in zip(a.gens, b.gens)]
    return quotient_space(a.dim * b.dim, gens).dim


class FBModule:
    """Finitely supported assignment n -> SymRep(S_n)."""

    def __init__(self, levels, truncation):
        self.levels = {n: rep for n, rep in levels.items() if rep.dim > 0}
        for n, rep in self.levels.items():
            if rep.sizes != (n,):
                raise ValueError(f"level {n} carries a representation of the wrong group")
        self.truncation = truncation

    def level(self, n) -> SymRep:
        if n in self.levels:
            return self.levels[n]
        return zero_rep((n,))

    @property
    def support(self):
        return sorted(self.levels)


class FB2Module:
    """Finitely supported assignment (m, n) -> SymRep(S_m x S_n)."""

    def __init__(self, levels, truncation):
        self.levels = {k: rep for k, rep in levels.items() if rep.dim > 0}
        for (m, n), rep in self.levels.items():
            if rep.sizes != (m, n):
                raise ValueError(f"level {(m, n)} carries a representation of the wrong group")
        self.truncation = truncation

    def level(self, key) -> SymRep:
        if key in self.levels:
            return self.levels[key]
        return zero_rep(tuple(key))

    @property
    def support(self):
        return sorted(self.levels)


def kk_level(n, truncation=None):
    """The FB-module with a single trivial one-dimensional level at n."""
    return FBModule({n: trivial_rep((n,))}, truncation if truncation is not None else n)


def kk_bilevel(m, n, truncation=None):
    return FB2Module(
        {(m, n): trivial_rep((m, n))}, truncation if truncation is not None else m + n
    )


def schur_eval(module, v_dim, w_dim=None) -> int:
    """Dimension of the Schur functor of an FB-module on a v_dim-dimensional space.

    For an FB2Module, pass w_dim for the second variable (bivariant Schur
    dimension on the pair (V, W)).
    """
    if isinstance(module, FBModule):
        total = 0
        for n in module.support:
            total += balanced_tensor_dim(perm_power_rep(v_dim, n), module.level(n))
        return total
    if w_dim is None:
        w_dim = v_dim
    total = 0
    for m, n in module.support:
        left = perm_power_rep(v_dim, m)
        right = perm_power_rep(w_dim, n)
        prod = SymRep(
            (m, n),
            left.dim * right.dim,
            [g.kron(LinMap.identity(right.dim)) for g in left.gens]
            + [LinMap.identity(left.dim).kron(g) for g in right.gens],
            check=False,
        )
        total += balanced_tensor_dim(prod, module.level((m, n)))
    return total
