"""Path algebras with relations, rewriting, and corner algebras.

A path p.q means first p, then q, matching the order in which the images of
the paths are multiplied in the block algebra.  Arrows are ordered by their
listing position; monomials compare by length first, then lexicographically
on arrow positions.  The unique largest term of a relation is its rewriting
head, so the listing order of the arrows decides the orientation of the
rewriting system.
"""

from __future__ import annotations

from fractions import Fraction

from . import fixtures
from .blocks import BlockElement
from .linalg import (
    det_fraction,
    elementary_divisors,
    in_local_span,
    mat_inverse,
    mat_vec,
    transpose,
)

RING_CHAR = {"Q": 0, "Z": 0, "Z2": 0, "Z3": 0, "F2": 2, "F3": 3}


class PresentationError(Exception):
    pass


class RewriteDivergence(PresentationError):
    pass


class SpanError(Exception):
    pass


def ring_normalize(ring, c):
    c = Fraction(c)
    p = RING_CHAR[ring]
    if p == 0:
        return c
    if c.denominator % p == 0:
        raise ValueError("denominator of %s is not invertible mod %d" % (c, p))
    return Fraction((c.numerator * pow(c.denominator, -1, p)) % p)


def ring_is_unit(ring, c):
    c = Fraction(c)
    if c == 0:
        return False
    if ring == "Q":
        return True
    if ring == "Z":
        return c.denominator == 1 and abs(c.numerator) == 1
    if ring == "Z2":
        return c.numerator % 2 != 0 and c.denominator % 2 != 0
    if ring == "Z3":
        return c.numerator % 3 != 0 and c.denominator % 3 != 0
    return ring_normalize(ring, c) != 0


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("repeated vertex name")
        self.arrows = tuple((name, src, tgt) for name, src, tgt in arrows)
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names) or set(names) & set(self.vertices):
            raise ValueError("arrow names must be fresh and distinct")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_index = {}
        self.src = {}
        self.tgt = {}
        for i, (name, s, t) in enumerate(self.arrows):
            if s not in self.vertex_index or t not in self.vertex_index:
                raise ValueError("arrow %s has an unknown endpoint" % name)
            self.arrow_index[name] = i
            self.src[name] = s
            self.tgt[name] = t

    def path(self, src, arrows=()):
        arrows = tuple(arrows)
        at = src
        for a in arrows:
            if self.src[a] != at:
                raise ValueError("arrows do not compose at %s" % a)
            at = self.tgt[a]
        return (src, arrows)

    def path_src(self, path):
        return path[0]

    def path_tgt(self, path):
        src, arrows = path
        return self.tgt[arrows[-1]] if arrows else src

    # Injective on paths: the arrows determine the source unless trivial.
    def path_key(self, path):
        src, arrows = path
        return (
            len(arrows),
            tuple(self.arrow_index[a] for a in arrows),
            self.vertex_index[src],
        )

    def format_path(self, path):
        src, arrows = path
        return ".".join(arrows) if arrows else "(%s)" % src


class PathElement:
    """Linear combination of paths with coefficients in a fixed ring tag."""

    __slots__ = ("quiver", "ring", "terms")

    def __init__(self, quiver, ring, terms=None):
        self.quiver = quiver
        self.ring = ring
        clean = {}
        for path, c in (terms or {}).items():
            c = ring_normalize(ring, c)
            if c != 0:
                clean[path] = c
        self.terms = clean

    @classmethod
    def zero(cls, quiver, ring):
        return cls(quiver, ring)

    @classmethod
    def from_path(cls, quiver, ring, path, coeff=1):
        return cls(quiver, ring, {quiver.path(path[0], path[1]): Fraction(coeff)})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for path, c in other.terms.items():
            out[path] = out.get(path, Fraction(0)) + c
        return PathElement(self.quiver, self.ring, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PathElement(
            self.quiver, self.ring, {p: -c for p, c in self.terms.items()}
        )

    def scale(self, r):
        r = Fraction(r)
        return PathElement(
            self.quiver, self.ring, {p: r * c for p, c in self.terms.items()}
        )

    def __mul__(self, other):
        out = {}
        q = self.quiver
        for (s1, a1), c1 in self.terms.items():
            t1 = q.path_tgt((s1, a1))
            for (s2, a2), c2 in other.terms.items():
                if t1 != s2:
                    continue
                key = (s1, a1 + a2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return PathElement(q, self.ring, out)

    def canonical_terms(self):
        return tuple(
            (path, self.terms[path])
            for path in sorted(self.terms, key=self.quiver.path_key)
        )

    def __eq__(self, other):
        if not isinstance(other, PathElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for path, c in self.canonical_terms():
            bits.append("%s*%s" % (c, self.quiver.format_path(path)))
        return " + ".join(bits)


def make_rules(quiver, ring, relations):
    """Orient relations into head -> tail rules; heads need unit coefficients."""
    rules = []
    for rel in relations:
        if rel.is_zero():
            raise PresentationError("zero relation cannot be oriented")
        srcs = {quiver.path_src(p) for p in rel.terms}
        tgts = {quiver.path_tgt(p) for p in rel.terms}
        if len(srcs) != 1 or len(tgts) != 1:
            raise PresentationError("relation terms are not parallel paths")
        head = max(rel.terms, key=quiver.path_key)
        if not head[1]:
            raise PresentationError("leading term is a trivial path")
        c = rel.terms[head]
        if not ring_is_unit(ring, c):
            raise PresentationError("leading coefficient %s is not a unit" % c)
        rest = dict(rel.terms)
        del rest[head]
        tail = PathElement(quiver, ring, rest).scale(Fraction(-1) / c)
        rules.append((head, tail))
    return rules


def _find_redex(arrows, rules):
    for ri, (head, _) in enumerate(rules):
        h = head[1]
        n = len(h)
        if n == 0 or n > len(arrows):
            continue
        for pos in range(len(arrows) - n + 1):
            if arrows[pos : pos + n] == h:
                return ri, pos
    return None


def _accumulate(ring, table, key, delta):
    c = ring_normalize(ring, table.get(key, Fraction(0)) + delta)
    if c == 0:
        table.pop(key, None)
    else:
        table[key] = c


def normal_form(elem, rules, max_steps=100000):
    """Rewrite until no head divides any term; terminates since heads are
    strictly larger than their tails in the monomial order."""
    q = elem.quiver
    work = dict(elem.terms)
    steps = 0
    while True:
        target = None
        for path in sorted(work, key=q.path_key, reverse=True):
            hit = _find_redex(path[1], rules)
            if hit is not None:
                target = (path, hit)
                break
        if target is None:
            return PathElement(q, elem.ring, work)
        steps += 1
        if steps > max_steps:
            raise RewriteDivergence("no normal form within %d steps" % max_steps)
        (src, arrows), (ri, pos) = target
        head, tail = rules[ri]
        coeff = work.pop((src, arrows))
        prefix = arrows[:pos]
        suffix = arrows[pos + len(head[1]) :]
        for (_, tarrows), tc in tail.terms.items():
            _accumulate(elem.ring, work, (src, prefix + tarrows + suffix), coeff * tc)


def _apply_rule_at(quiver, ring, path, rules, ri, pos):
    src, arrows = path
    head, tail = rules[ri]
    out = {}
    prefix = arrows[:pos]
    suffix = arrows[pos + len(head[1]) :]
    for (_, tarrows), tc in tail.terms.items():
        key = (src, prefix + tarrows + suffix)
        out[key] = out.get(key, Fraction(0)) + tc
    return PathElement(quiver, ring, out)


def local_confluence_failures(quiver, ring, rules, max_steps=100000):
    """Expand every overlap ambiguity both ways; empty result plus
    termination makes the irreducible paths a basis of the quotient."""
    fails = []
    for i, (h1, _) in enumerate(rules):
        a1 = h1[1]
        for j, (h2, _) in enumerate(rules):
            a2 = h2[1]
            for k in range(1, min(len(a1), len(a2))):
                if a1[len(a1) - k :] == a2[:k]:
                    word = (h1[0], a1 + a2[k:])
                    if not _resolves(quiver, ring, rules, word, (i, 0), (j, len(a1) - k), max_steps):
                        fails.append(
                            "unresolved overlap of rules %d and %d on %s"
                            % (i, j, quiver.format_path(word))
                        )
            if i != j and len(a2) <= len(a1):
                for pos in range(len(a1) - len(a2) + 1):
                    if a1[pos : pos + len(a2)] == a2:
                        if not _resolves(quiver, ring, rules, h1, (i, 0), (j, pos), max_steps):
                            fails.append(
                                "unresolved inclusion of rule %d in rule %d" % (j, i)
                            )
    return fails


def _resolves(quiver, ring, rules, word, left, right, max_steps):
    e1 = _apply_rule_at(quiver, ring, word, rules, left[0], left[1])
    e2 = _apply_rule_at(quiver, ring, word, rules, right[0], right[1])
    return normal_form(e1 - e2, rules, max_steps).is_zero()


def irreducible_paths(quiver, rules, length_bound=8):
    """All paths with no head as a factor, provided none reaches the bound."""
    out = []
    frontier = [(v, ()) for v in quiver.vertices]
    length = 0
    while frontier:
        if length >= length_bound:
            raise PresentationError(
                "irreducible path of length %d reaches the bound %d"
                % (length, length_bound)
            )
        out.extend(frontier)
        nxt = []
        for src, arrows in frontier:
            at = quiver.path_tgt((src, arrows))
            for name, s, _ in quiver.arrows:
                if s != at:
                    continue
                cand = arrows + (name,)
                if _find_redex(cand, rules) is None:
                    nxt.append((src, cand))
        frontier = nxt
        length += 1
    return tuple(sorted(out, key=quiver.path_key))


def _solve_unique(rows, rhs):
    """Exact solution of an overdetermined full-rank linear system."""
    m = len(rows)
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv = []
    r = 0
    for col in range(n):
        pr = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        f = aug[r][col]
        aug[r] = [x / f for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                g = aug[i][col]
                aug[i] = [a - g * c for a, c in zip(aug[i], aug[r])]
        piv.append(col)
        r += 1
    if len(piv) != n:
        raise ValueError("system is underdetermined")
    if any(aug[i][n] != 0 for i in range(r, m)):
        raise ValueError("system is inconsistent")
    x = [Fraction(0)] * n
    for i, col in enumerate(piv):
        x[col] = aug[i][n]
    return x


class CornerAlgebra:
    """Free module on named block elements, multiplied in the block algebra.

    express() solves exactly against the basis and raises SpanError when the
    element is outside the rational span.
    """

    def __init__(self, ring, named_basis):
        self.ring = ring
        self.labels = tuple(name for name, _ in named_basis)
        self.elements = tuple(elem for _, elem in named_basis)
        self.by_label = dict(zip(self.labels, self.elements))
        if len(self.by_label) != len(self.labels):
            raise ValueError("repeated basis label")
        self._vectors = [
            [Fraction(c) for c in e.to_vector()] for e in self.elements
        ]
        self._pivots = self._pivot_columns()
        square = [[self._vectors[k][j] for k in range(len(self.labels))] for j in self._pivots]
        self._solver = mat_inverse(square)
        self._unit = None

    def _pivot_columns(self):
        rows = [list(v) for v in self._vectors]
        n = len(rows)
        width = len(rows[0])
        pivots = []
        r = 0
        for col in range(width):
            pr = next((i for i in range(r, n) if rows[i][col] != 0), None)
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            pivots.append(col)
            inv = Fraction(1) / rows[r][col]
            rows[r] = [x * inv for x in rows[r]]
            for i in range(n):
                if i != r and rows[i][col] != 0:
                    f = rows[i][col]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            r += 1
            if r == n:
                break
        if r < n:
            raise ValueError("basis elements are linearly dependent")
        return pivots

    def rank(self):
        return len(self.labels)

    def unit(self):
        """The unique two-sided identity of the span, solved exactly."""
        if self._unit is None:
            n = len(self.labels)
            rows = []
            rhs = []
            for k in range(n):
                prods = [
                    (self.elements[i] * self.elements[k]).to_vector()
                    for i in range(n)
                ]
                target = self.elements[k].to_vector()
                for j in range(22):
                    rows.append([Fraction(prods[i][j]) for i in range(n)])
                    rhs.append(Fraction(target[j]))
            coords = _solve_unique(rows, rhs)
            u = BlockElement.zero()
            for cc, e in zip(coords, self.elements):
                u = u + e.scale(cc)
            for e in self.elements:
                if u * e != e or e * u != e:
                    raise ValueError("span has no two-sided unit")
            self._unit = u
        return self._unit

    def express(self, block):
        vec = [Fraction(c) for c in block.to_vector()]
        rhs = [vec[j] for j in self._pivots]
        coords = mat_vec(self._solver, rhs)
        for j in range(len(vec)):
            s = sum(coords[k] * self._vectors[k][j] for k in range(len(coords)))
            if s != vec[j]:
                raise SpanError("element is outside the span of the basis")
        return coords

    def contains(self, block):
        try:
            self.express(block)
        except SpanError:
            return False
        return True

    def product_coords(self, i, j):
        return self.express(self.elements[i] * self.elements[j])

    def structure_table(self):
        n = len(self.labels)
        return [[tuple(self.product_coords(i, j)) for j in range(n)] for i in range(n)]


class Presentation:
    """Quiver with relations, plus the map of its generators into a corner."""

    def __init__(
        self,
        name,
        ring,
        quiver,
        relations,
        long_kernel,
        vertex_images,
        arrow_images,
        mod_p=None,
    ):
        self.name = name
        self.ring = ring
        self.quiver = quiver
        self.relations = tuple(relations)
        self.long_kernel = tuple(long_kernel)
        self.vertex_images = dict(vertex_images)
        self.arrow_images = dict(arrow_images)
        self.mod_p = mod_p

    @classmethod
    def from_dict(cls, data):
        quiver = Quiver(data["vertices"], [tuple(a) for a in data["arrows"]])
        ring = data["ring"]
        rel = [element_from_terms(quiver, ring, t) for t in data["relations"]]
        lk = [element_from_terms(quiver, ring, t) for t in data["long_kernel"]]
        mod_p = None
        if data.get("mod_p"):
            p = int(data["mod_p"]["p"])
            fring = "F%d" % p
            mod_p = (
                p,
                tuple(
                    element_from_terms(quiver, fring, t)
                    for t in data["mod_p"]["relations"]
                ),
            )
        return cls(
            data["name"],
            ring,
            quiver,
            rel,
            lk,
            data["vertex_images"],
            data["arrow_images"],
            mod_p,
        )

    @classmethod
    def from_fixture(cls, name, fixture_dir=None):
        return cls.from_dict(fixtures.load_presentation(name, fixture_dir))

    def rules(self):
        return make_rules(self.quiver, self.ring, self.relations)

    def basis_paths(self, length_bound=8):
        return irreducible_paths(self.quiver, self.rules(), length_bound)

    def reduce_mod(self, p):
        fring = "F%d" % p
        rel = [
            PathElement(self.quiver, fring, e.terms)
            for e in self.relations
        ]
        lk = [
            PathElement(self.quiver, fring, e.terms)
            for e in self.long_kernel
        ]
        return Presentation(
            "%s_mod%d" % (self.name, p),
            fring,
            self.quiver,
            [r for r in rel if not r.is_zero()],
            [e for e in lk if not e.is_zero()],
            self.vertex_images,
            self.arrow_images,
        )


def element_from_terms(quiver, ring, terms):
    out = {}
    for coeff, src, arrows in terms:
        path = quiver.path(src, tuple(arrows))
        out[path] = out.get(path, Fraction(0)) + Fraction(coeff)
    return PathElement(quiver, ring, out)


def element_to_terms(elem):
    return [
        [str(c), path[0], list(path[1])] for path, c in elem.canonical_terms()
    ]


def same_element_sets(elems_a, elems_b):
    ca = sorted(e.canonical_terms() for e in elems_a)
    cb = sorted(e.canonical_terms() for e in elems_b)
    return ca == cb


def element_image(elem, pres, corner):
    total = BlockElement.zero()
    for (src, arrows), c in elem.terms.items():
        acc = corner.by_label[pres.vertex_images[src]]
        for a in arrows:
            acc = acc * corner.by_label[pres.arrow_images[a]]
        total = total + acc.scale(c)
    return total


def path_image(path, pres, corner):
    return element_image(
        PathElement.from_path(pres.quiver, pres.ring, path), pres, corner
    )


def _vanishes(block, ring, corner):
    p = RING_CHAR[ring]
    if p == 0:
        return block.is_zero()
    coords = corner.express(block)
    return all(ring_normalize(ring, c) == 0 for c in coords)


def verify_presentation(pres, corner, length_bound=8):
    """Mechanical check that the presentation describes the corner algebra.

    Returns a list of problem strings; empty means every check passed:
    idempotent orthogonal vertex images, arrow endpoint compatibility,
    vanishing relations, long kernel contained in the oriented ideal and
    vanishing, local confluence, matching rank, and a unit change of basis
    between the irreducible path images and the corner basis.
    """
    problems = []
    q = pres.quiver
    ring = pres.ring
    vimgs = {v: corner.by_label[pres.vertex_images[v]] for v in q.vertices}
    for v in q.vertices:
        ev = vimgs[v]
        if not _vanishes(ev * ev - ev, ring, corner):
            problems.append("vertex image %s is not idempotent" % v)
    for v in q.vertices:
        for w in q.vertices:
            if v != w and not _vanishes(vimgs[v] * vimgs[w], ring, corner):
                problems.append("vertex images %s,%s are not orthogonal" % (v, w))
    f = BlockElement.zero()
    for v in q.vertices:
        f = f + vimgs[v]
    if not _vanishes(corner.unit() - f, ring, corner):
        problems.append("vertex images do not sum to the corner unit")
    for name, s, t in q.arrows:
        img = corner.by_label[pres.arrow_images[name]]
        if not _vanishes(vimgs[s] * img * vimgs[t] - img, ring, corner):
            problems.append("arrow %s is not supported on %s->%s" % (name, s, t))
    for i, rel in enumerate(pres.relations):
        if not _vanishes(element_image(rel, pres, corner), ring, corner):
            problems.append("relation %d does not vanish in the corner" % i)
    try:
        rules = pres.rules()
    except PresentationError as exc:
        problems.append("orientation failed: %s" % exc)
        return problems
    problems.extend(local_confluence_failures(q, ring, rules))
    try:
        basis = irreducible_paths(q, rules, length_bound)
    except PresentationError as exc:
        problems.append(str(exc))
        return problems
    if len(basis) != corner.rank():
        problems.append(
            "quotient rank %d differs from corner rank %d"
            % (len(basis), corner.rank())
        )
        return problems
    for i, elem in enumerate(pres.long_kernel):
        if not normal_form(elem, rules).is_zero():
            problems.append("listed kernel element %d is outside the ideal" % i)
        if not _vanishes(element_image(elem, pres, corner), ring, corner):
            problems.append("listed kernel element %d does not vanish" % i)
    T = [corner.express(path_image(b, pres, corner)) for b in basis]
    d = det_fraction(T)
    if ring == "Q":
        ok = d != 0
    elif ring in ("Z", "Z2", "Z3"):
        ok = ring_is_unit(ring, d)
    else:
        ok = ring_normalize(ring, d) != 0
    if not ok:
        problems.append("change of basis determinant %s is not a unit" % d)
    return problems


def corner_span_problems(p, named_basis, lattice_gens, idempotents):
    """Check the claimed corner basis spans f.L.f over the localization at p.

    lattice_gens generate the order L over the localization; the sum f of the
    given idempotents cuts the corner.  Projections of generators and the
    claimed basis must span the same local lattice, and the basis must be
    free of rank equal to its length.
    """
    problems = []
    f = BlockElement.zero()
    for e in idempotents:
        f = f + e
    basis_rows = []
    for name, elem in named_basis:
        if (f * elem * f) != elem:
            problems.append("basis element %s is not fixed by the corner" % name)
        basis_rows.append([int(c) for c in elem.to_vector()])
    proj_rows = []
    for g in lattice_gens:
        pg = f * g * f
        vec = pg.to_vector()
        if any(Fraction(c).denominator != 1 for c in vec):
            problems.append("projection of a generator is not integral")
            continue
        proj_rows.append([int(c) for c in vec])
    for name_elem, row in zip(named_basis, basis_rows):
        if not in_local_span(proj_rows, row, p):
            problems.append(
                "basis element %s is outside the projected order" % name_elem[0]
            )
    for i, row in enumerate(proj_rows):
        if not in_local_span(basis_rows, row, p):
            problems.append("projected generator %d escapes the claimed basis" % i)
    divs = [d for d in elementary_divisors(basis_rows) if d != 0]
    if len(divs) != len(basis_rows):
        problems.append("claimed corner basis is not linearly independent")
    return problems
