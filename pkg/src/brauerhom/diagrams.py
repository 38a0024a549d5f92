"""Brauer diagram categories: normal forms, composition, hom bases, functors.

Morphisms are stored in upward normal form (injections into the larger
object plus a list of pairs on the complement); downward categories are
formal opposites flagged on the tag.  Twist signs are carried on the
coefficient by normalize().
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from . import perms

SHAPES = ("ordered-directed", "directed", "undirected", "ordered-walled", "walled")


@dataclass(frozen=True)
class CatTag:
    """Shape, twist signs, and variance of one Brauer category flavour.

    flip: sign for reversing a pair's direction (undirected shapes only).
    order: sign for transposing two pairs in the list (None when ordered).
    """

    shape: str
    flip: int | None = None
    order: int | None = None
    direction: str = "up"

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.shape == "undirected":
            if self.flip not in (1, -1) or self.order not in (1, -1):
                raise ValueError("undirected tags need a sign pair")
        elif self.shape in ("directed", "walled"):
            if self.flip is not None or self.order not in (1, -1):
                raise ValueError(f"{self.shape} tags carry a single ordering sign")
        else:
            if self.flip is not None or self.order is not None:
                raise ValueError("ordered shapes carry no twist")
        if self.direction not in ("up", "down"):
            raise ValueError("direction must be 'up' or 'down'")

    @property
    def walled(self):
        return self.shape in ("ordered-walled", "walled")

    @property
    def ordered(self):
        return self.shape.startswith("ordered")

    def up(self):
        return replace(self, direction="up")

    def down(self):
        return replace(self, direction="down")

    def opposite(self):
        return replace(self, direction="down" if self.direction == "up" else "up")

    def dual(self):
        """Right quadratic dual: the ordering sign changes, variance flips."""
        if self.order is None:
            raise ValueError("ordered categories are not quadratic over their groupoid")
        return replace(self, order=-self.order, direction="down" if self.direction == "up" else "up")


@dataclass(frozen=True)
class Morphism:
    """A (scaled) diagram in upward normal-form data.

    src, dst are the upward endpoints: ints, or (m, n) pairs for walled
    shapes.  inj is the structural injection (a pair of injections for
    walled shapes); pairs is the ordered pair list; coeff the scalar.
    """

    tag: CatTag
    src: object
    dst: object
    inj: tuple
    pairs: tuple
    coeff: Fraction = Fraction(1)

    def degree(self):
        return len(self.pairs)

    @property
    def source(self):
        return self.src if self.tag.direction == "up" else self.dst

    @property
    def target(self):
        return self.dst if self.tag.direction == "up" else self.src

    def key(self):
        """Normal-form identity with the coefficient stripped."""
        return (self.tag, self.src, self.dst, self.inj, self.pairs)

    def scaled(self, c):
        return replace(self, coeff=self.coeff * Fraction(c))


def check_morphism(m: Morphism):
    tag = m.tag
    if tag.walled:
        (sm, sn), (dm, dn) = m.src, m.dst
        injl, injr = m.inj
        k = len(m.pairs)
        if dm - sm != k or dn - sn != k:
            raise ValueError("walled degree mismatch")
        if sorted(set(injl)) != sorted(injl) or len(injl) != sm:
            raise ValueError("left injection malformed")
        if len(set(injr)) != sn:
            raise ValueError("right injection malformed")
        lefts = [p[0] for p in m.pairs]
        rights = [p[1] for p in m.pairs]
        if sorted(lefts + list(injl)) != list(range(1, dm + 1)):
            raise ValueError("left labels not partitioned")
        if sorted(rights + list(injr)) != list(range(1, dn + 1)):
            raise ValueError("right labels not partitioned")
    else:
        if (m.dst - m.src) != 2 * len(m.pairs):
            raise ValueError("degree mismatch")
        if len(set(m.inj)) != m.src:
            raise ValueError("injection malformed")
        touched = list(m.inj)
        for a, b in m.pairs:
            touched += [a, b]
        if sorted(touched) != list(range(1, m.dst + 1)):
            raise ValueError("pairs do not partition the complement")
    return m


def normalize(m: Morphism) -> Morphism:
    """Unique normal form; twist signs are absorbed into the coefficient."""
    check_morphism(m)
    tag = m.tag
    if tag.ordered:
        return m
    coeff = m.coeff
    pairs = list(m.pairs)
    if tag.shape == "undirected":
        oriented = []
        for a, b in pairs:
            if a > b:
                oriented.append((b, a))
                coeff *= tag.flip
            else:
                oriented.append((a, b))
        pairs = oriented
    # sort by smallest member (left label in the walled case)
    keys = [p[0] if tag.walled else min(p) for p in pairs]
    if perms.sign(perms.sort_perm(keys)) == -1:
        coeff *= tag.order
    sorted_pairs = tuple(p for _, p in sorted(zip(keys, pairs)))
    return replace(m, pairs=sorted_pairs, coeff=coeff)


def identity(tag: CatTag, obj) -> Morphism:
    if tag.walled:
        m, n = obj
        return Morphism(tag, obj, obj, (tuple(range(1, m + 1)), tuple(range(1, n + 1))), ())
    return Morphism(tag, obj, obj, tuple(range(1, obj + 1)), ())


def _compose_up(f: Morphism, g: Morphism) -> Morphism:
    """Upward composite: f first, then g; pair convention pushes f's pairs first."""
    if f.dst != g.src:
        raise ValueError("compose: objects do not match")
    tag = f.tag
    if tag.walled:
        gl, gr = g.inj
        fl, fr = f.inj
        inj = (
            tuple(gl[x - 1] for x in fl),
            tuple(gr[x - 1] for x in fr),
        )
        pushed = tuple((gl[a - 1], gr[b - 1]) for a, b in f.pairs)
    else:
        inj = tuple(g.inj[x - 1] for x in f.inj)
        pushed = tuple((g.inj[a - 1], g.inj[b - 1]) for a, b in f.pairs)
    out = Morphism(tag, f.src, g.dst, inj, pushed + g.pairs, f.coeff * g.coeff)
    return normalize(out)


def compose(f: Morphism, g: Morphism) -> Morphism:
    """Composite 'f then g' in the direction-aware sense."""
    if f.tag != g.tag:
        raise ValueError("compose: tag mismatch")
    if f.tag.direction == "up":
        return _compose_up(f, g)
    up = _compose_up(
        replace(g, tag=g.tag.up()),
        replace(f, tag=f.tag.up()),
    )
    return replace(up, tag=f.tag)


def _matchings(points):
    """Perfect matchings as sorted lists of (min, max) pairs, smallest-first order."""
    points = list(points)
    if not points:
        return [()]
    if len(points) % 2:
        return []
    first = points[0]
    out = []
    for k in range(1, len(points)):
        partner = points[k]
        rest = points[1:k] + points[k + 1 :]
        for sub in _matchings(rest):
            out.append(((first, partner),) + sub)
    return out


def _injections(src_count, universe):
    for image in itertools.combinations(universe, src_count):
        for arrangement in itertools.permutations(image):
            yield arrangement


def hom_basis(tag: CatTag, src, dst):
    """All normal forms from src to dst (direction-aware), coefficient 1."""
    if tag.direction == "down":
        src, dst = dst, src
    out = []
    if tag.walled:
        (sm, sn), (dm, dn) = src, dst
        k = dm - sm
        if k < 0 or dn - sn != k:
            return []
        for injl in _injections(sm, range(1, dm + 1)):
            freel = [x for x in range(1, dm + 1) if x not in set(injl)]
            for injr in _injections(sn, range(1, dn + 1)):
                freer = [x for x in range(1, dn + 1) if x not in set(injr)]
                for assignment in itertools.permutations(freer):
                    pairs = tuple(zip(freel, assignment))
                    if tag.shape == "walled":
                        out.append(Morphism(tag, src, dst, (tuple(injl), tuple(injr)), pairs))
                    else:
                        for order in itertools.permutations(pairs):
                            out.append(
                                Morphism(tag, src, dst, (tuple(injl), tuple(injr)), tuple(order))
                            )
        return out
    t2 = dst - src
    if t2 < 0 or t2 % 2:
        return []
    for inj in _injections(src, range(1, dst + 1)):
        free = [x for x in range(1, dst + 1) if x not in set(inj)]
        for match in _matchings(free):
            if tag.shape == "undirected":
                out.append(Morphism(tag, src, dst, tuple(inj), match))
            elif tag.shape == "directed":
                for dirs in itertools.product((0, 1), repeat=len(match)):
                    pairs = tuple(
                        (b, a) if flip else (a, b) for (a, b), flip in zip(match, dirs)
                    )
                    out.append(Morphism(tag, src, dst, tuple(inj), pairs))
            else:  # ordered-directed
                for dirs in itertools.product((0, 1), repeat=len(match)):
                    pairs = [
                        (b, a) if flip else (a, b) for (a, b), flip in zip(match, dirs)
                    ]
                    for order in itertools.permutations(pairs):
                        out.append(Morphism(tag, src, dst, tuple(inj), tuple(order)))
    return out


def hom_dim(tag: CatTag, src, dst) -> int:
    return len(hom_basis(tag, src, dst))


def alpha(tag: CatTag, n, i, j) -> Morphism:
    """Degree-one generator n -> n+2 pairing (i, j), order-preserving elsewhere."""
    if tag.walled:
        raise ValueError("alpha lives in the unwalled shapes")
    rest = tuple(x for x in range(1, n + 3) if x not in (i, j))
    return normalize(Morphism(tag, n, n + 2, rest, ((i, j),)))


def beta(tag: CatTag, m, n, i, j) -> Morphism:
    """Degree-one generator (m, n) -> (m+1, n+1) pairing (i, j) across the wall."""
    if not tag.walled:
        raise ValueError("beta lives in the walled shapes")
    injl = tuple(x for x in range(1, m + 2) if x != i)
    injr = tuple(x for x in range(1, n + 2) if x != j)
    return normalize(Morphism(tag, (m, n), (m + 1, n + 1), (injl, injr), ((i, j),)))


def unwall_morphism(f: Morphism, target_tag: CatTag | None = None) -> Morphism:
    """Image of a walled morphism under disjoint union (left block first)."""
    if not f.tag.walled:
        raise ValueError("unwall_morphism expects a walled morphism")
    (sm, sn), (dm, dn) = f.src, f.dst
    injl, injr = f.inj
    inj = tuple(injl) + tuple(dm + x for x in injr)
    pairs = tuple((a, dm + b) for a, b in f.pairs)
    if target_tag is None:
        target_tag = CatTag(
            "ordered-directed" if f.tag.shape == "ordered-walled" else "directed",
            None,
            f.tag.order,
            f.tag.direction,
        )
    out = Morphism(target_tag, sm + sn, dm + dn, inj, pairs, f.coeff)
    return out if target_tag.ordered else normalize(out)


def split_from_wall(f: Morphism, src_left):
    """Unique walled morphism over f for a prescribed source split.

    f is an (ordered-)directed upward morphism; src_left is the subset of
    the source assigned to the left of the wall.  Returns (dst_left,
    dst_right, walled morphism on non-skeletal label sets as a relabelled
    skeletal morphism, plus the label sets).
    """
    if f.tag.walled:
        raise ValueError("split_from_wall expects an unwalled morphism")
    src_left = tuple(sorted(src_left))
    src_right = tuple(x for x in range(1, f.src + 1) if x not in set(src_left))
    dst_left = sorted(
        [f.inj[x - 1] for x in src_left] + [a for a, _ in f.pairs]
    )
    dst_right = sorted(
        [f.inj[x - 1] for x in src_right] + [b for _, b in f.pairs]
    )
    return _walled_from_blocks(f, src_left, src_right, tuple(dst_left), tuple(dst_right))


def split_towards_wall(f: Morphism, dst_left):
    """Walled morphism under f for a prescribed target split, if one exists.

    Returns None when a pair fails to run left-to-right across the split
    or the injection does not respect the blocks' sizes.
    """
    if f.tag.walled:
        raise ValueError("split_towards_wall expects an unwalled morphism")
    dst_left = set(dst_left)
    for a, b in f.pairs:
        if not (a in dst_left and b not in dst_left):
            return None
    src_left = tuple(sorted(x for x in range(1, f.src + 1) if f.inj[x - 1] in dst_left))
    src_right = tuple(x for x in range(1, f.src + 1) if x not in set(src_left))
    dl = tuple(sorted(dst_left))
    dr = tuple(x for x in range(1, f.dst + 1) if x not in dst_left)
    return _walled_from_blocks(f, src_left, src_right, dl, dr)


def _walled_from_blocks(f, src_left, src_right, dst_left, dst_right):
    posl = {v: i + 1 for i, v in enumerate(dst_left)}
    posr = {v: i + 1 for i, v in enumerate(dst_right)}
    injl = tuple(posl[f.inj[x - 1]] for x in src_left)
    injr = tuple(posr[f.inj[x - 1]] for x in src_right)
    pairs = tuple((posl[a], posr[b]) for a, b in f.pairs)
    shape = "ordered-walled" if f.tag.ordered else "walled"
    tag = CatTag(shape, None, None if f.tag.ordered else f.tag.order, f.tag.direction)
    mor = Morphism(
        tag,
        (len(src_left), len(src_right)),
        (len(dst_left), len(dst_right)),
        (injl, injr),
        pairs,
        f.coeff,
    )
    mor = mor if tag.ordered else normalize(mor)
    return dst_left, dst_right, mor


def transfer_expand(f: Morphism):
    """Expansion of an undirected morphism into signed directed terms.

    Each unordered pair contributes (directed) + flip * (reversed); a
    degree-t morphism expands into 2^t terms in the directed category with
    the same ordering twist.
    """
    if f.tag.shape != "undirected":
        raise ValueError("transfer_expand expects an undirected morphism")
    f = normalize(f)
    dtag = CatTag("directed", None, f.tag.order, f.tag.direction)
    out = []
    t = f.degree()
    for flips in itertools.product((0, 1), repeat=t):
        coeff = f.coeff
        pairs = []
        for (a, b), flip in zip(f.pairs, flips):
            if flip:
                pairs.append((b, a))
                coeff *= f.tag.flip
            else:
                pairs.append((a, b))
        out.append(normalize(Morphism(dtag, f.src, f.dst, f.inj, tuple(pairs), coeff)))
    return out


def mp_project(f: Morphism, flip: int) -> Morphism:
    """Quotient of a directed morphism into the undirected category."""
    if f.tag.shape != "directed":
        raise ValueError("mp_project expects a directed morphism")
    tag = CatTag("undirected", flip, f.tag.order, f.tag.direction)
    return normalize(Morphism(tag, f.src, f.dst, f.inj, f.pairs, f.coeff))


def weight_scale(f: Morphism, lam) -> Morphism:
    """Scale by lam^degree; realizes the weight functors."""
    return f.scaled(Fraction(lam) ** f.degree())


def precompose_perm(f: Morphism, sigma) -> Morphism:
    """f o sigma for sigma a permutation (pair of permutations if walled) of the source."""
    if f.tag.walled:
        sl, sr = sigma
        injl, injr = f.inj
        inj = (
            tuple(injl[sl[i] - 1] for i in range(len(injl))),
            tuple(injr[sr[i] - 1] for i in range(len(injr))),
        )
    else:
        inj = tuple(f.inj[sigma[i] - 1] for i in range(len(f.inj)))
    out = replace(f, inj=inj)
    return out if f.tag.ordered else normalize(out)


def postcompose_perm(f: Morphism, sigma) -> Morphism:
    """sigma o f for sigma a permutation (pair if walled) of the target."""
    if f.tag.walled:
        sl, sr = sigma
        injl, injr = f.inj
        inj = (tuple(sl[x - 1] for x in injl), tuple(sr[x - 1] for x in injr))
        pairs = tuple((sl[a - 1], sr[b - 1]) for a, b in f.pairs)
    else:
        inj = tuple(sigma[x - 1] for x in f.inj)
        pairs = tuple((sigma[a - 1], sigma[b - 1]) for a, b in f.pairs)
    out = replace(f, inj=inj, pairs=pairs)
    return out if f.tag.ordered else normalize(out)
