"""Permutation groups on {0..n-1}: lattices, conjugacy classes, parity condition.

Permutations are tuples p with p[i] = image of point i.  Cycle notation in
text is 1-based, e.g. ``(12)(34)``.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import ParseError, SizeBoundError

DEFAULT_ORDER_BOUND = 10 ** 4


def identity_perm(n):
    return tuple(range(n))


def compose(p, q):
    """p after q."""
    return tuple(p[q[i]] for i in range(len(p)))


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def conjugate(s, t):
    """s t s^-1."""
    return compose(compose(s, t), inverse(s))


def is_even(p):
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign == 1


def cycle_count(p, points=None):
    """Number of cycles of p on the given points (all points by default)."""
    if points is None:
        points = range(len(p))
    points = set(points)
    for i in points:
        if p[i] not in points:
            raise ValueError("permutation does not preserve the point set")
    count = 0
    seen = set()
    for i in sorted(points):
        if i in seen:
            continue
        count += 1
        j = i
        while j not in seen:
            seen.add(j)
            j = p[j]
    return count


def parse_cycles(text, n):
    """Parse 1-based cycle notation like ``(12)(34)`` or ``(1 10 3)``."""
    s = text.strip()
    if s in ("e", "()", ""):
        return identity_perm(n)
    if not s.startswith("("):
        raise ParseError("bad cycle notation %r" % text)
    images = list(range(n))
    depth_chunks = []
    for chunk in s.replace(")(", ")|(").split("|"):
        chunk = chunk.strip()
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ParseError("bad cycle notation %r" % text)
        inner = chunk[1:-1].strip()
        if any(c in inner for c in ", "):
            pts = [int(t) for t in inner.replace(",", " ").split()]
        else:
            pts = [int(c) for c in inner]
        if len(pts) < 2:
            raise ParseError("cycle with fewer than 2 points in %r" % text)
        pts0 = [p - 1 for p in pts]
        if any(p < 0 or p >= n for p in pts0):
            raise ParseError("point out of range in %r (n=%d)" % (text, n))
        if len(set(pts0)) != len(pts0):
            raise ParseError("repeated point in cycle %r" % chunk)
        depth_chunks.append(pts0)
    flat = [p for c in depth_chunks for p in c]
    if len(set(flat)) != len(flat):
        raise ParseError("cycles are not disjoint in %r" % text)
    for cyc in depth_chunks:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a] = b
    return tuple(images)


def cycle_notation(p):
    n = len(p)
    seen = [False] * n
    cycles = []
    for i in range(n):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        cycles.append(cyc)
    if not cycles:
        return "()"
    sep = "" if n <= 9 else " "
    return "".join("(" + sep.join(str(x + 1) for x in c) + ")" for c in cycles)


def closure(generators, n, bound=None):
    els = {identity_perm(n)}
    frontier = [g for g in generators if g not in els]
    els.update(frontier)
    while frontier:
        nxt = []
        for g in generators:
            for h in frontier:
                prod = compose(g, h)
                if prod not in els:
                    els.add(prod)
                    nxt.append(prod)
                    if bound is not None and len(els) > bound:
                        raise SizeBoundError(
                            "group order exceeds bound %d" % bound)
        frontier = nxt
    return frozenset(els)


class PermGroup:
    """A permutation group with its full element list."""

    def __init__(self, n, generators=(), bound=DEFAULT_ORDER_BOUND, _elements=None):
        self.n = n
        self.generators = tuple(tuple(g) for g in generators)
        for g in self.generators:
            if sorted(g) != list(range(n)):
                raise ValueError("not a permutation of 0..%d: %s" % (n - 1, g))
        if _elements is None:
            _elements = closure(self.generators, n, bound)
        elif bound is not None and len(_elements) > bound:
            raise SizeBoundError("group order exceeds bound %d" % bound)
        self.element_set = frozenset(_elements)
        self.elements = tuple(sorted(self.element_set))
        self.order = len(self.elements)

    def __contains__(self, p):
        return tuple(p) in self.element_set

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (isinstance(other, PermGroup) and self.n == other.n
                and self.element_set == other.element_set)

    def __hash__(self):
        return hash((self.n, self.element_set))

    def __repr__(self):
        gens = ",".join(cycle_notation(g) for g in self.generators) or "e"
        return "PermGroup(n=%d, <%s>, order %d)" % (self.n, gens, self.order)

    @cached_property
    def inverses(self):
        return {p: inverse(p) for p in self.elements}

    def is_subgroup_of(self, other):
        return self.n == other.n and self.element_set <= other.element_set

    def subgroup(self, elements):
        els = frozenset(tuple(p) for p in elements)
        gens = generating_set(els)
        return PermGroup(self.n, gens, bound=None, _elements=els)

    @cached_property
    def lattice(self):
        return SubgroupLattice(self)

    def named_generating_set(self):
        return [cycle_notation(g) for g in self.generators]


NAMED_GROUPS = {
    "A3": ["(123)"],
    "A4": ["(123)", "(12)(34)"],
    "A5": ["(12345)", "(123)"],
    "D10": ["(12345)", "(14)(23)"],
    "Z2x2": ["(12)(34)", "(13)(24)"],
}


def group_from_generators(n, gens, bound=DEFAULT_ORDER_BOUND):
    """Build a group from cycle-notation strings, permutation tuples or a name."""
    parsed = []
    for g in gens:
        if isinstance(g, str):
            name = g.strip()
            if name in NAMED_GROUPS:
                parsed.extend(parse_cycles(t, n) for t in NAMED_GROUPS[name])
            else:
                parsed.append(parse_cycles(name, n))
        else:
            parsed.append(tuple(g))
    return PermGroup(n, parsed, bound=bound)


def trivial_group(n):
    return PermGroup(n, ())


def generating_set(elements):
    """Small deterministic generating set of a subgroup given as a set."""
    if not elements:
        return ()
    n = len(next(iter(elements)))
    gens = []
    have = {identity_perm(n)}
    for p in sorted(elements):
        if p not in have:
            gens.append(p)
            have = closure(gens, n, bound=None)
            if len(have) == len(elements):
                break
    return tuple(gens)


class SubgroupLattice:
    """All subgroups of a small group, with conjugacy classes and normalizers.

    Enumeration extends already-found subgroups by single elements, starting
    from the cyclic subgroups, until closure; this finds every subgroup since
    any subgroup is reached by adjoining its generators one at a time.
    """

    def __init__(self, group):
        self.group = group
        self.subgroups = self._enumerate()
        self._index = {s: i for i, s in enumerate(self.subgroups)}
        self._classes = None
        self._normalizers = {}

    def _enumerate(self):
        G = self.group
        n = G.n
        found = {frozenset({identity_perm(n)})}
        queue = []
        for g in G.elements:
            cyc = closure([g], n, bound=None)
            if cyc not in found:
                found.add(cyc)
                queue.append(cyc)
        while queue:
            H = queue.pop()
            if len(H) == G.order:
                continue
            gens_h = list(generating_set(H))
            covered = set(H)
            for g in G.elements:
                if g in covered:
                    continue
                K = closure(gens_h + [g], n, bound=None)
                if K not in found:
                    found.add(K)
                    queue.append(K)
                # skip the rest of the double coset H g H
                covered.update(compose(h1, compose(g, h2)) for h1 in H for h2 in H)
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def __len__(self):
        return len(self.subgroups)

    def index_of(self, subgroup):
        return self._index[frozenset(subgroup)]

    @property
    def conjugacy_classes(self):
        """List of classes; each class is a sorted list of subgroup indices."""
        if self._classes is None:
            G = self.group
            unassigned = set(range(len(self.subgroups)))
            classes = []
            while unassigned:
                i = min(unassigned)
                orbit = {i}
                H = self.subgroups[i]
                for g in G.elements:
                    img = frozenset(conjugate(g, h) for h in H)
                    orbit.add(self._index[img])
                classes.append(sorted(orbit))
                unassigned -= orbit
            classes.sort(key=lambda cls: (len(self.subgroups[cls[0]]),
                                          self.class_key(cls)))
            self._classes = classes
        return self._classes

    def class_key(self, cls):
        return min(tuple(sorted(self.subgroups[i])) for i in cls)

    def class_representative(self, cls):
        """Lexicographically least sorted element list in the class."""
        best = min(cls, key=lambda i: tuple(sorted(self.subgroups[i])))
        return self.subgroups[best]

    def class_of(self, subgroup):
        i = self.index_of(subgroup)
        for cls in self.conjugacy_classes:
            if i in cls:
                return cls
        raise KeyError(subgroup)

    def normalizer(self, subgroup):
        H = frozenset(subgroup)
        if H not in self._normalizers:
            els = {g for g in self.group.elements
                   if all(conjugate(g, h) in H for h in H)}
            self._normalizers[H] = frozenset(els)
        return self._normalizers[H]

    def is_subconjugate(self, inner, outer):
        """True if some conjugate of ``inner`` lies inside ``outer``."""
        inner = frozenset(inner)
        outer = frozenset(outer)
        if len(inner) > len(outer):
            return False
        for g in self.group.elements:
            if all(conjugate(g, h) in outer for h in inner):
                return True
        return False

    def contains_relation(self):
        """Pairs (i, j) with subgroup i a subset of subgroup j."""
        out = set()
        for i, a in enumerate(self.subgroups):
            for j, b in enumerate(self.subgroups):
                if len(a) < len(b) and a <= b:
                    out.add((i, j))
        return out


# -- parity condition -------------------------------------------------------------


def orbit_count(group, points):
    """Number of group orbits on the point set; group must preserve it."""
    points = set(points)
    for p in group.elements:
        if {p[i] for i in points} != points:
            raise ValueError("group does not preserve the point set")
    seen = set()
    count = 0
    for i in sorted(points):
        if i in seen:
            continue
        count += 1
        orbit = {i}
        frontier = [i]
        while frontier:
            v = frontier.pop()
            for p in group.generators or (identity_perm(group.n),):
                w = p[v]
                if w not in orbit:
                    orbit.add(w)
                    frontier.append(w)
        seen |= orbit
    return count


@dataclass(frozen=True)
class PCResult:
    satisfies: bool
    witness: PermGroup | None

    def __bool__(self):
        return self.satisfies


def pc_check(group):
    """Parity condition: every subgroup fixes a subspace of dimension = n mod 2.

    The fixed-space dimension of a subgroup equals its orbit count on the
    points, so the check is purely combinatorial.  Returns a violating
    subgroup as witness when the condition fails.
    """
    n = group.n
    for cls in group.lattice.conjugacy_classes:
        rep = group.lattice.class_representative(cls)
        sub = group.subgroup(rep)
        if (orbit_count(sub, range(n)) - n) % 2 != 0:
            return PCResult(False, sub)
    return PCResult(True, None)


def is_alternating_subgroup(group):
    return all(is_even(p) for p in group.elements)


def orbits_on_subsets(group):
    """Orbits of the group on all subsets of {0..n-1}.

    Returns a list of (representative, stabilizer, orbit size) sorted by
    (representative size, representative); the representative is the
    lexicographically least sorted tuple in its orbit.
    """
    n = group.n
    seen = set()
    out = []
    for mask in range(1 << n):
        base = frozenset(i for i in range(n) if mask >> i & 1)
        if base in seen:
            continue
        orbit = {base}
        frontier = [base]
        while frontier:
            cur = frontier.pop()
            for p in group.generators or (identity_perm(n),):
                img = frozenset(p[i] for i in cur)
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        seen |= orbit
        rep = min(orbit, key=lambda s: tuple(sorted(s)))
        stab = group.subgroup([p for p in group.elements
                               if {p[i] for i in rep} == set(rep)])
        assert group.order == len(orbit) * stab.order
        out.append((tuple(sorted(rep)), stab, len(orbit)))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


# -- coloured Hasse diagram --------------------------------------------------------


@dataclass(frozen=True)
class ColouredHasse:
    """Subgroup-class poset of a stabilizer, coloured by fixed-space codimension parity."""

    nodes: tuple        # canonical class representatives (sorted element tuples)
    orders: tuple       # subgroup order per node
    colours: tuple      # parity bits
    covers: tuple       # (lower, upper) index pairs, covering relations only


def coloured_hasse(stabilizer, points):
    points = tuple(sorted(points))
    lat = stabilizer.lattice
    classes = lat.conjugacy_classes
    nodes = []
    orders = []
    colours = []
    for cls in classes:
        rep = lat.class_representative(cls)
        sub = stabilizer.subgroup(rep)
        nodes.append(tuple(sorted(rep)))
        orders.append(len(rep))
        colours.append((len(points) - orbit_count(sub, points)) % 2)
    less = [[False] * len(classes) for _ in classes]
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            if i != j and lat.is_subconjugate(lat.class_representative(ci),
                                              lat.class_representative(cj)):
                less[i][j] = True
    covers = []
    for i in range(len(classes)):
        for j in range(len(classes)):
            if less[i][j] and not any(less[i][k] and less[k][j]
                                      for k in range(len(classes))):
                covers.append((i, j))
    return ColouredHasse(tuple(nodes), tuple(orders), tuple(colours),
                         tuple(sorted(covers)))
