"""Truncated subgroup-space probes, coset covers, and micro-support builders.

A MarkedGroup is any of the exact map kernels together with a labeled finite
generating set; balls in its word metric are enumerated exactly and
deduplicated, so a subgroup given by a decidable membership predicate can be
truncated to a finite set and compared against other subgroups radius by
radius.  On top of that sit the conjugate-net limit probe, the finite
coset-cover oracle, the deterministic disjoint-open-set search, and the
two-conjugate product a = (g f^-1 g^-1)(h f h^-1) whose defining identities
are verified exactly elsewhere.
"""

import os
from fractions import Fraction
from itertools import combinations

from .cantorv import (
    GERM_FIXES,
    Cylinders,
    EventuallyPeriodic,
    PrefixMap,
    germ_class,
)
from .cantorv import is_identity_on as prefix_identity_on
from .plcircle import (
    ArcSet,
    PLMap,
    germ_data,
    maps_region_to_itself,
    support_fix,
)
from .plcircle import is_identity_on as pl_identity_on
from .scalars import Dyadic

DEFAULT_BUDGET = 200_000


class BudgetError(RuntimeError):
    """Raised when a ball enumeration exceeds its element budget."""


def element_budget(budget=None):
    if budget is not None:
        return budget
    return int(os.environ.get("GERMLAB_BUDGET", DEFAULT_BUDGET))


def _key(element):
    return element.canonical_key()


# -- kernel dispatch ---------------------------------------------------------


def supported_inside(element, region):
    if isinstance(element, PLMap):
        return support_fix(element).support.subset_of(region)
    if isinstance(element, PrefixMap):
        return prefix_identity_on(element, region.complement())
    raise TypeError("unsupported kernel")


def identity_on(element, region):
    if isinstance(element, PLMap):
        return pl_identity_on(element, region)
    if isinstance(element, PrefixMap):
        return prefix_identity_on(element, region)
    raise TypeError("unsupported kernel")


def equal_on(left, right, region):
    return identity_on(right.inverse() * left, region)


def region_invariant(element, region):
    if isinstance(element, PLMap):
        return maps_region_to_itself(element, region)
    if isinstance(element, PrefixMap):
        return region.image(element) == region
    raise TypeError("unsupported kernel")


def identity_germ_at(element, point):
    if isinstance(element, PLMap):
        data = germ_data(element, point)
        return data.left_identity and data.right_identity
    if isinstance(element, PrefixMap):
        return germ_class(element, point) == GERM_FIXES
    raise TypeError("unsupported kernel")


# -- marked groups and balls -------------------------------------------------


class MarkedGroup:
    """A kernel group with a labeled generating set.

    Lowercase letters name the generators; the matching uppercase letters
    name their inverses, so every label word spells an element (rightmost
    letter applied first).
    """

    __slots__ = ("gens", "identity")

    def __init__(self, generators):
        table = {}
        identity = None
        for label in sorted(generators):
            element = generators[label]
            if not (len(label) == 1 and label.isalpha() and label.islower()):
                raise ValueError("labels must be single lowercase letters")
            if element.is_identity():
                raise ValueError("generators must be nontrivial")
            table[label] = element
            table[label.upper()] = element.inverse()
            identity = element * element.inverse()
        if identity is None:
            raise ValueError("at least one generator required")
        object.__setattr__(self, "gens", table)
        object.__setattr__(self, "identity", identity)

    def __setattr__(self, name, value):
        raise AttributeError("MarkedGroup is immutable")

    def labels(self):
        return tuple(sorted(self.gens))

    def spell(self, word):
        out = self.identity
        for letter in word:
            if letter not in self.gens:
                raise ValueError("unknown letter %r" % letter)
            out = out * self.gens[letter]
        return out


class BallTruncation:
    """All distinct elements of word length <= radius, in discovery order."""

    __slots__ = ("radius", "elements", "words", "_index")

    def __init__(self, radius, elements, words):
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "words", tuple(words))
        object.__setattr__(
            self, "_index", {_key(el): w for el, w in zip(elements, words)}
        )

    def __setattr__(self, name, value):
        raise AttributeError("BallTruncation is immutable")

    def __len__(self):
        return len(self.elements)

    def __contains__(self, element):
        return _key(element) in self._index

    def key_set(self):
        return frozenset(self._index)

    def word_for(self, element):
        return self._index[_key(element)]


def ball(group, radius, budget=None):
    limit = element_budget(budget)
    seen = {_key(group.identity): ""}
    elements = [group.identity]
    words = [""]
    frontier = [group.identity]
    for _ in range(radius):
        nxt = []
        for element in frontier:
            base = seen[_key(element)]
            for label in sorted(group.gens):
                candidate = element * group.gens[label]
                k = _key(candidate)
                if k in seen:
                    continue
                if len(elements) + 1 > limit:
                    raise BudgetError(
                        "ball exceeds the %d-element budget" % limit
                    )
                seen[k] = base + label
                elements.append(candidate)
                words.append(base + label)
                nxt.append(candidate)
        frontier = nxt
    return BallTruncation(radius, elements, words)


# -- subgroup predicates -------------------------------------------------------


class SubgroupSpec:
    """A subgroup given by a decidable membership predicate."""

    __slots__ = ("kind", "data")

    def __init__(self, kind, data):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("SubgroupSpec is immutable")

    @classmethod
    def whole_group(cls):
        return cls("whole", ())

    @classmethod
    def trivial(cls):
        return cls("trivial", ())

    @classmethod
    def support_inside(cls, region):
        return cls("support", region)

    @classmethod
    def identity_germ_at(cls, *points):
        return cls("germ", tuple(points))

    @classmethod
    def generated(cls, elements, radius, budget=None):
        return cls("generated", (tuple(elements), radius, budget))

    @classmethod
    def conjugate(cls, spec, g):
        return cls("conjugate", (spec, g))

    def contains(self, element):
        if self.kind == "whole":
            return True
        if self.kind == "trivial":
            return element.is_identity()
        if self.kind == "support":
            return supported_inside(element, self.data)
        if self.kind == "germ":
            return all(identity_germ_at(element, p) for p in self.data)
        if self.kind == "generated":
            elements, radius, budget = self.data
            labels = {chr(ord("a") + i): g for i, g in enumerate(elements)}
            return element in ball(MarkedGroup(labels), radius, budget)
        if self.kind == "conjugate":
            spec, g = self.data
            return spec.contains(g.inverse() * element * g)
        raise ValueError("unknown spec kind %r" % self.kind)

    def describe(self):
        if self.kind == "support":
            return "support-inside(%r)" % (self.data,)
        if self.kind == "germ":
            return "identity-germ-at(%s)" % ", ".join(repr(p) for p in self.data)
        if self.kind == "conjugate":
            return "conjugate(%s)" % self.data[0].describe()
        return self.kind


def chabauty_trunc(spec, group, radius, budget=None):
    full = ball(group, radius, budget)
    kept = [
        (el, w)
        for el, w in zip(full.elements, full.words)
        if spec.contains(el)
    ]
    return BallTruncation(radius, [e for e, _ in kept], [w for _, w in kept])


def chabauty_agree_radius(h_spec, k_spec, group, r_max, budget=None):
    """Largest r <= r_max at which the two truncations coincide."""
    full = ball(group, r_max, budget)
    agree = r_max
    for element, word in zip(full.elements, full.words):
        if h_spec.contains(element) != k_spec.contains(element):
            agree = min(agree, len(word) - 1)
    return agree


def conjugate_net_probe(group, h_spec, conjugators, predicted_limit, radius, budget=None):
    """Compare conjugate truncations against a predicted limit, in net order.

    Reports the least position after which every later conjugate matches the
    predicted limit on the radius ball, or None when the net never settles.
    """
    target = chabauty_trunc(predicted_limit, group, radius, budget).key_set()
    matches = []
    for g in conjugators:
        spec = SubgroupSpec.conjugate(h_spec, g)
        got = chabauty_trunc(spec, group, radius, budget).key_set()
        matches.append(got == target)
    stabilizes_at = None
    for n in range(len(matches), 0, -1):
        if not matches[n - 1]:
            break
        stabilizes_at = n
    return {
        "radius": radius,
        "target_size": len(target),
        "matches": matches,
        "stabilizes_at": stabilizes_at,
    }


def accumulation_probe(h_spec, group, forbidden, search_radius, budget=None):
    """Search for a conjugator pulling every element of P out of H.

    A witness g has gPg^-1 disjoint from H; exhausting the ball without one
    is finite-scale evidence that every conjugate of P meets H.
    """
    full = ball(group, search_radius, budget)
    for p in forbidden:
        if p.is_identity():
            raise ValueError("the forbidden set must not contain the identity")
        if p not in full:
            raise ValueError("forbidden elements must lie in the search ball")
    for element, word in zip(full.elements, full.words):
        inv = element.inverse()
        if all(
            not h_spec.contains(element * p * inv) for p in forbidden
        ):
            return {"witness": word, "exhausted": False}
    return {"witness": None, "exhausted": True}


# -- finite coset covers -------------------------------------------------------


class FiniteGroup:
    """A finite group as a multiplication table over 0..n-1."""

    __slots__ = ("table", "identity")

    def __init__(self, table):
        n = len(table)
        rows = tuple(tuple(row) for row in table)
        if any(len(row) != n for row in rows):
            raise ValueError("table must be square")
        if any(x < 0 or x >= n for row in rows for x in row):
            raise ValueError("entries must index elements")
        identity = None
        for e in range(n):
            if all(rows[e][x] == x and rows[x][e] == x for x in range(n)):
                identity = e
        if identity is None:
            raise ValueError("no identity element")
        for a in range(n):
            if identity not in rows[a]:
                raise ValueError("element %d has no inverse" % a)
            for b in range(n):
                for c in range(n):
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                        raise ValueError("multiplication is not associative")
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "identity", identity)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteGroup is immutable")

    def __len__(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def is_subgroup(self, elements):
        subset = set(elements)
        if self.identity not in subset:
            return False
        return all(self.mul(a, b) in subset for a in subset for b in subset)

    def subgroups(self):
        n = len(self.table)
        rest = [x for x in range(n) if x != self.identity]
        found = []
        for size in range(len(rest) + 1):
            for extra in combinations(rest, size):
                candidate = frozenset((self.identity,) + extra)
                if self.is_subgroup(candidate):
                    found.append(candidate)
        return found

    def coset(self, subgroup, rep):
        return frozenset(self.mul(rep, s) for s in subgroup)


def cyclic_group(n):
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)])


def neumann_check(group, cover):
    """Minimal subgroup index in a finite coset cover.

    The cover is a list of (subgroup elements, coset representative); it must
    exactly cover the group, and the minimum index is asserted to be at most
    the number of cosets.
    """
    covered = set()
    indices = []
    for subgroup, rep in cover:
        elements = frozenset(subgroup)
        if not group.is_subgroup(elements):
            raise ValueError("cover lists a non-subgroup")
        covered |= group.coset(elements, rep)
        indices.append(len(group) // len(elements))
    if covered != set(range(len(group))):
        raise ValueError("not a cover: union misses elements")
    best = min(indices)
    assert best <= len(cover)
    return best


def neumann_sweep(n_max, r_max):
    """Exhaustive coset-cover check over all cyclic groups of order <= n_max.

    Every set of at most r_max distinct cosets whose union is the whole group
    is validated and passed through neumann_check; the worst minimal index
    seen is reported.
    """
    covers_checked = 0
    max_min_index = 0
    for n in range(1, n_max + 1):
        group = cyclic_group(n)
        cosets = []
        seen = set()
        for subgroup in group.subgroups():
            for rep in range(n):
                c = group.coset(subgroup, rep)
                if (subgroup, c) not in seen:
                    seen.add((subgroup, c))
                    cosets.append((subgroup, min(c)))
        for r in range(1, r_max + 1):
            for chosen in combinations(cosets, r):
                union = set()
                for subgroup, rep in chosen:
                    union |= group.coset(subgroup, rep)
                if union != set(range(n)):
                    continue
                best = neumann_check(group, list(chosen))
                covers_checked += 1
                if best > max_min_index:
                    max_min_index = best
                if best > r:
                    raise AssertionError(
                        "index bound violated on Z/%d with %d cosets" % (n, r)
                    )
    return {
        "groups": n_max,
        "r_max": r_max,
        "covers_checked": covers_checked,
        "max_min_index": max_min_index,
    }


# -- disjoint open sets and the micro-support product -------------------------


def _dyadic_arc(k, depth):
    return ArcSet.of((Fraction(k, 1 << depth), Fraction(k + 1, 1 << depth)))


def disjoint_open_search(elements, z, max_depth=8):
    """Regions U_1..U_r and a neighbourhood W of z, all verified disjoint.

    The U_i, together with their images g_i(U_i), are pairwise disjoint, and
    W avoids every U_i and every preimage g_j^-1(U_i).  Candidates are
    scanned smallest-denominator-first, so the outcome is deterministic.
    """
    if not elements:
        raise ValueError("need at least one element")
    if any(g.is_identity() for g in elements):
        raise ValueError("elements must be nontrivial")
    if isinstance(elements[0], PLMap):
        return _disjoint_arcs(elements, Dyadic.coerce(z), max_depth)
    if isinstance(elements[0], PrefixMap):
        return _disjoint_cylinders(elements, z, max_depth)
    raise TypeError("unsupported kernel")


def _disjoint_arcs(elements, z, max_depth):
    orbit = [g(z) for g in elements] + [z]
    chosen = []
    acc = ArcSet.empty()
    for g in elements:
        placed = False
        for depth in range(2, max_depth + 1):
            for k in range(1 << depth):
                u = _dyadic_arc(k, depth)
                if any(u.contains_point(p) for p in orbit):
                    continue
                img = u.image(g)
                if not u.disjoint_from(img):
                    continue
                if not (u.disjoint_from(acc) and img.disjoint_from(acc)):
                    continue
                chosen.append(u)
                acc = acc.union(u).union(img)
                placed = True
                break
            if placed:
                break
        if not placed:
            raise ValueError("no disjoint region found; retry with more depth")
    preimages = [u.preimage(g) for u in chosen for g in elements]
    zf = z.frac().as_fraction()
    for depth in range(2, max_depth + 1):
        step = Fraction(1, 1 << depth)
        scaled = zf / step
        if scaled.denominator == 1:
            lo = (zf - step) % 1
            hi = lo + 2 * step
            if hi <= 1:
                w = ArcSet.of((lo, hi))
            else:
                w = ArcSet.of((lo, Fraction(1)), (Fraction(0), hi - 1))
        else:
            k = scaled.numerator // scaled.denominator
            w = _dyadic_arc(k, depth)
        if all(w.disjoint_from(u) for u in chosen) and all(
            w.disjoint_from(p) for p in preimages
        ):
            return tuple(chosen), w
    raise ValueError("no neighbourhood of z found; retry with more depth")


def _disjoint_cylinders(elements, z, max_depth):
    orbit = [g(z) for g in elements] + [z]
    chosen = []
    acc = Cylinders.empty()
    for g in elements:
        placed = False
        for depth in range(1, max_depth + 1):
            for k in range(1 << depth):
                word = format(k, "0%db" % depth)
                u = Cylinders.of(word)
                if any(u.contains_point(p) for p in orbit):
                    continue
                img = u.image(g)
                if not u.disjoint_from(img):
                    continue
                if not (u.disjoint_from(acc) and img.disjoint_from(acc)):
                    continue
                chosen.append(u)
                acc = acc.union(u).union(img)
                placed = True
                break
            if placed:
                break
        if not placed:
            raise ValueError("no disjoint region found; retry with more depth")
    preimages = [u.image(g.inverse()) for u in chosen for g in elements]
    for depth in range(1, max_depth + 1):
        w = Cylinders.of(z.digits(depth))
        if all(w.disjoint_from(u) for u in chosen) and all(
            w.disjoint_from(p) for p in preimages
        ):
            return tuple(chosen), w
    raise ValueError("no neighbourhood of z found; retry with more depth")


def micro_support_element(gamma, delta, g_ell, regions=None, w=None):
    """The product (gamma g^-1 gamma^-1)(delta g delta^-1).

    When the search regions are supplied, gamma and delta are first checked
    to be supported inside their union and to leave each region invariant.
    """
    if regions is not None:
        union = regions[0]
        for region in regions[1:]:
            union = union.union(region)
        for element in (gamma, delta):
            if not supported_inside(element, union):
                raise ValueError("conjugators must be supported in the regions")
            for region in regions:
                if not region_invariant(element, region):
                    raise ValueError("conjugators must preserve each region")
    return (gamma * g_ell.inverse() * gamma.inverse()) * (
        delta * g_ell * delta.inverse()
    )


def verify_micro_support(a, gamma, delta, u_ell, w):
    """Exact verification of the three defining identities of the product."""
    if not identity_on(a, w):
        raise ValueError("product moves points of W")
    if u_ell.image(a) != u_ell:
        raise ValueError("product does not preserve the region")
    if not equal_on(a, gamma * delta.inverse(), u_ell):
        raise ValueError("product differs from gamma delta^-1 on the region")
    return True
