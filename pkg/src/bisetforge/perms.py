"""Permutations and small permutation groups.

Everything here targets tiny groups (the largest group this package ever
classifies is the 36-element rank-6 product group), so algorithms materialize
full element lists and favor obviousness over asymptotics.  The documented
capacity bound for subgroup enumeration is |G| <= 10**4.

    >>> a = Perm.from_cycle_string("(1,2)", 3)
    >>> b = Perm.from_cycle_string("(1,2,3)", 3)
    >>> (a * b).cycle_string()
    '(2,3)'
    >>> len(symmetric_group(3))
    6
"""

from __future__ import annotations

import itertools

__all__ = [
    "Perm",
    "PermGroup",
    "symmetric_group",
    "cyclic_group",
    "CapacityError",
]

SUBGROUP_CAPACITY = 10_000


class CapacityError(Exception):
    pass


class Perm:
    """A permutation of {0, ..., n-1} stored as its image tuple.

    Composition is function composition: (p * q)(x) = p(q(x)).
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("not a bijection of 0..%d: %r" % (len(images) - 1, images))
        self.images = images

    @property
    def degree(self):
        return len(self.images)

    @classmethod
    def identity(cls, degree):
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles, degree):
        """Build from 0-based cycles, e.g. [(0,1),(2,3)]."""
        images = list(range(degree))
        for cyc in cycles:
            for i, pt in enumerate(cyc):
                images[pt] = cyc[(i + 1) % len(cyc)]
        # from_cycles must not silently overwrite: cycles have to be disjoint
        p = cls(images)
        seen = [pt for cyc in cycles for pt in cyc]
        if len(seen) != len(set(seen)):
            raise ValueError("cycles are not disjoint: %r" % (cycles,))
        return p

    @classmethod
    def from_cycle_string(cls, text, degree=None):
        """Parse 1-based cycle notation like "(1,2)(3,4)" or "()".

        Points may be separated by commas or spaces.  If degree is omitted it
        is the largest point mentioned.
        """
        text = text.strip().replace(" ", "")
        if text in ("()", "", "1", "id"):
            return cls.identity(degree if degree is not None else 0)
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError("bad cycle notation: %r" % (text,))
        cycles = []
        for part in text[1:-1].split(")("):
            pts = [int(tok) for tok in part.split(",") if tok]
            if any(pt < 1 for pt in pts):
                raise ValueError("cycle notation is 1-based: %r" % (text,))
            cycles.append(tuple(pt - 1 for pt in pts))
        need = 1 + max(pt for cyc in cycles for pt in cyc)
        if degree is None:
            degree = need
        if degree < need:
            raise ValueError("degree %d too small for %r" % (degree, text))
        return cls.from_cycles(cycles, degree)

    def __call__(self, x):
        return self.images[x]

    def __mul__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Perm(self.images[other.images[x]] for x in range(self.degree))

    def inverse(self):
        images = [0] * self.degree
        for x, y in enumerate(self.images):
            images[y] = x
        return Perm(images)

    def order(self):
        p, k = self, 1
        e = Perm.identity(self.degree)
        while p != e:
            p, k = p * self, k + 1
        return k

    def cycles(self):
        """Nontrivial cycles, each rotated to start at its least point."""
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_string(self):
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(str(pt + 1) for pt in cyc) + ")" for cyc in cycs)

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Perm%r" % (list(self.images),)


def _close(degree, seed):
    """Smallest subgroup containing the seed perms, as a frozenset."""
    e = Perm.identity(degree)
    elems = {e}
    frontier = [e]
    gens = list(seed)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


class PermGroup:
    """A concrete permutation group with a materialized element list."""

    def __init__(self, degree, generators, _elements=None):
        self.degree = degree
        self.generators = tuple(generators)
        if any(g.degree != degree for g in self.generators):
            raise ValueError("generator degree mismatch")
        if _elements is None:
            _elements = _close(degree, self.generators)
        self.element_set = frozenset(_elements)
        self.elements = tuple(sorted(self.element_set))

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        return p in self.element_set

    def __eq__(self, other):
        return (
            isinstance(other, PermGroup)
            and self.degree == other.degree
            and self.element_set == other.element_set
        )

    def __hash__(self):
        return hash((self.degree, self.element_set))

    def subgroup(self, generators):
        return PermGroup(self.degree, generators)

    def is_subgroup_of(self, other):
        return self.element_set <= other.element_set

    def conjugate_subgroup(self, g, sub):
        """The set {g u g^-1 : u in sub} for a frozenset or PermGroup sub."""
        gi = g.inverse()
        elems = sub.element_set if isinstance(sub, PermGroup) else sub
        return frozenset(g * u * gi for u in elems)

    def all_subgroups(self):
        """Every subgroup, each exactly once, sorted by (order, element list).

        Layer-wise closure: every subgroup is generated by the cyclic
        subgroups it contains, so repeatedly joining cyclic subgroups onto
        the known list reaches everything.
        """
        if self.order > SUBGROUP_CAPACITY:
            raise CapacityError("group of order %d exceeds capacity %d" % (self.order, SUBGROUP_CAPACITY))
        e = Perm.identity(self.degree)
        cyclics = {_close(self.degree, [g]) for g in self.elements if g != e}
        found = {frozenset([e])} | cyclics
        frontier = set(found)
        while frontier:
            fresh = set()
            for sub in frontier:
                for cyc in cyclics:
                    if cyc <= sub:
                        continue
                    joined = _close(self.degree, sub | cyc)
                    if joined not in found:
                        found.add(joined)
                        fresh.add(joined)
            frontier = fresh
        subs = [PermGroup(self.degree, _minimal_gens(self.degree, s), _elements=s) for s in found]
        subs.sort(key=lambda s: (s.order, s.elements))
        return subs

    def are_conjugate(self, sub1, sub2):
        """(True, g) with g sub1 g^-1 == sub2, else (False, None)."""
        s1 = sub1.element_set if isinstance(sub1, PermGroup) else frozenset(sub1)
        s2 = sub2.element_set if isinstance(sub2, PermGroup) else frozenset(sub2)
        if len(s1) != len(s2):
            return False, None
        for g in self.elements:
            if self.conjugate_subgroup(g, s1) == s2:
                return True, g
        return False, None

    def conjugacy_classes_of_subgroups(self):
        """Partition of all_subgroups() into conjugacy classes.

        Classes keep the order of their first (sorted-least) member, so the
        output is deterministic.
        """
        subs = self.all_subgroups()
        classes = []
        for sub in subs:
            for cls in classes:
                ok, _ = self.are_conjugate(cls[0], sub)
                if ok:
                    cls.append(sub)
                    break
            else:
                classes.append([sub])
        return classes

    def double_cosets(self, left, right):
        """Representatives of left\\G/right, first-seen in sorted element order."""
        lefts = left.element_set if isinstance(left, PermGroup) else frozenset(left)
        rights = right.element_set if isinstance(right, PermGroup) else frozenset(right)
        seen = set()
        reps = []
        for g in self.elements:
            if g in seen:
                continue
            reps.append(g)
            for h, k in itertools.product(lefts, rights):
                seen.add(h * g * k)
        return reps


def _minimal_gens(degree, elems):
    """A small generating list for the subgroup given by elems."""
    ordered = sorted(elems, key=lambda p: (-p.order(), p.images))
    gens = []
    span = frozenset([Perm.identity(degree)])
    for p in ordered:
        if p in span:
            continue
        gens.append(p)
        span = _close(degree, gens)
        if len(span) == len(elems):
            break
    return gens


def symmetric_group(n):
    if n <= 1:
        return PermGroup(max(n, 1), [])
    gens = [Perm.from_cycles([(0, 1)], n)]
    if n > 2:
        gens.append(Perm.from_cycles([tuple(range(n))], n))
    return PermGroup(n, gens)


def cyclic_group(n):
    if n <= 1:
        return PermGroup(max(n, 1), [])
    return PermGroup(n, [Perm.from_cycles([tuple(range(n))], n)])
