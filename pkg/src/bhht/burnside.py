"""The restricted Burnside group of a semidirect product G x| S.

Ambient elements are pairs (v, s) of a diagonal-group element and a
permutation, multiplied by (v, s)(w, t) = (v + s.w, st).  Generators of the
free abelian group are conjugacy classes of split subgroups H x| T; marks are
computed by explicit coset enumeration with a canonical minimal-representative
map.
"""

import json
from functools import cached_property

from .diaggroups import generating_subset, perm_act
from .errors import AmbientMismatchError, MembershipError, SizeBoundError
from .permgroups import compose, conjugate, cycle_notation, generating_set, inverse

MARK_SIZE_BOUND = 2 ** 24


class SemidirectAmbient:
    """The group G x| S with its element list and coset machinery."""

    def __init__(self, diag, perms):
        if diag.n != perms.n:
            raise AmbientMismatchError("diagonal and permutation degrees differ")
        self.diag = diag
        self.perms = perms
        self.n = diag.n
        self.order = diag.order * perms.order
        self.identity = (diag.zero, perms.elements[0] if perms.order else None)
        assert self.identity[1] == tuple(range(self.n))
        self._repmaps = {}

    @property
    def signature(self):
        return (self.diag.matrix, self.perms.element_set)

    def compatible(self, other):
        return self.signature == other.signature

    def mul(self, a, b):
        (v, s), (w, t) = a, b
        return (self.diag.add(v, perm_act(s, w)), compose(s, t))

    def inv(self, a):
        v, s = a
        si = inverse(s)
        return (self.diag.neg(perm_act(si, v)), si)

    @cached_property
    def elements(self):
        if self.order > MARK_SIZE_BOUND:
            raise SizeBoundError("semidirect product of order %d exceeds %d"
                                 % (self.order, MARK_SIZE_BOUND))
        out = [(v, s) for v in self.diag.elements for s in self.perms.elements]
        out.sort()
        return out

    @cached_property
    def index(self):
        return {g: i for i, g in enumerate(self.elements)}

    def repmap(self, ht):
        """Canonical coset map for the subgroup: element id -> id of min(g K').

        Representatives are coset minima under the fixed (v, s) total order,
        which makes every downstream enumeration deterministic.
        """
        key = ht.tag
        if key not in self._repmaps:
            els = self.elements
            idx = self.index
            assign = [-1] * len(els)
            reps = []
            members = ht.subgroup_elements()
            for i, g in enumerate(els):
                if assign[i] >= 0:
                    continue
                reps.append(i)
                for k in members:
                    assign[idx[self.mul(g, k)]] = i
            self._repmaps[key] = (reps, assign)
        return self._repmaps[key]


class HTClass:
    """Conjugacy class of a split subgroup H x| T, stored by a canonical representative.

    The representative minimises (sorted T, sorted H) lexicographically over
    conjugation by the elements of S; two split subgroups are conjugate in the
    ambient group iff they are conjugate by some element of S.
    """

    __slots__ = ("ambient", "h_elements", "t_elements", "tag")

    def __init__(self, ambient, h_elements, t_elements):
        from .diaggroups import subgroup_generated
        from .permgroups import closure

        h_elements = frozenset(h_elements)
        t_elements = frozenset(t_elements)
        if ambient.diag.zero not in h_elements:
            raise MembershipError("H must contain the identity")
        if subgroup_generated(ambient.diag,
                              generating_subset(ambient.diag, h_elements)) \
                != h_elements:
            raise MembershipError("H is not closed under addition")
        if not t_elements <= ambient.perms.element_set:
            raise MembershipError("T is not a subgroup of S")
        if closure(generating_set(t_elements), ambient.n, bound=None) != t_elements:
            raise MembershipError("T is not closed under composition")
        for t in t_elements:
            if frozenset(perm_act(t, h) for h in h_elements) != h_elements:
                raise MembershipError(
                    "H is not invariant under T; the split subgroup is ill-formed")
        best_h, best_t = None, None
        best = None
        for s in ambient.perms.elements:
            tc = tuple(sorted(conjugate(s, t) for t in t_elements))
            hc = tuple(sorted(perm_act(s, h) for h in h_elements))
            cand = (tc, hc)
            if best is None or cand < best:
                best = cand
                best_t, best_h = tc, hc
        self.ambient = ambient
        self.h_elements = frozenset(best_h)
        self.t_elements = frozenset(best_t)
        self.tag = best

    @property
    def h_order(self):
        return len(self.h_elements)

    @property
    def t_order(self):
        return len(self.t_elements)

    @property
    def order(self):
        return self.h_order * self.t_order

    def __eq__(self, other):
        return (isinstance(other, HTClass) and self.tag == other.tag
                and self.ambient.compatible(other.ambient))

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return "[G:%d x| S/H:%d x| T:%d]" % (self.ambient.diag.order,
                                             self.h_order, self.t_order)

    def subgroup_elements(self):
        return [(h, t) for h in sorted(self.h_elements)
                for t in sorted(self.t_elements)]

    def generators(self):
        e = tuple(range(self.ambient.n))
        gens = [(h, e) for h in generating_subset(self.ambient.diag, self.h_elements)]
        gens += [(self.ambient.diag.zero, t)
                 for t in generating_set(self.t_elements)]
        return gens

    def describe(self):
        diag = self.ambient.diag
        return {
            "orbitType": "[G⋊S/H⋊T]",
            "T": sorted(cycle_notation(t) for t in generating_set(self.t_elements))
                 or ["()"],
            "H": sorted(diag.format_element(h)
                        for h in generating_subset(diag, self.h_elements))
                 or [diag.format_element(diag.zero)],
            "Torder": self.t_order,
            "Horder": self.h_order,
        }


def ht_conjugate_test(ambient, h1, t1, h2, t2):
    """Some s in S conjugating (H1, T1) to (H2, T2), or None."""
    h1, h2 = frozenset(h1), frozenset(h2)
    t1, t2 = frozenset(t1), frozenset(t2)
    for s in ambient.perms.elements:
        if frozenset(conjugate(s, t) for t in t1) != t2:
            continue
        if frozenset(perm_act(s, h) for h in h1) == h2:
            return s
    return None


def canonicalize(ambient, h_elements, t_elements):
    return HTClass(ambient, h_elements, t_elements)


class BurnsideElement:
    """Finitely supported integer combination of split-subgroup classes."""

    def __init__(self, ambient, coefficients=None):
        self.ambient = ambient
        self.coefficients = {}
        if coefficients:
            for cls, c in coefficients.items():
                if c:
                    if not cls.ambient.compatible(ambient):
                        raise AmbientMismatchError("class over a different group")
                    self.coefficients[cls] = int(c)

    def _require(self, other):
        if not self.ambient.compatible(other.ambient):
            raise AmbientMismatchError("elements over different groups")

    def __add__(self, other):
        self._require(other)
        out = dict(self.coefficients)
        for cls, c in other.coefficients.items():
            out[cls] = out.get(cls, 0) + c
        return BurnsideElement(self.ambient, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return BurnsideElement(self.ambient,
                               {cls: k * c for cls, c in self.coefficients.items()})

    def __eq__(self, other):
        return (isinstance(other, BurnsideElement)
                and self.ambient.compatible(other.ambient)
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash(frozenset(self.coefficients.items()))

    def __bool__(self):
        return bool(self.coefficients)

    def coefficient(self, cls):
        return self.coefficients.get(cls, 0)

    def full_class(self):
        return HTClass(self.ambient, self.ambient.diag.elements,
                       self.ambient.perms.elements)

    def reduce(self):
        """Subtract the class of the one-point set [G x| S / G x| S]."""
        full = self.full_class()
        out = dict(self.coefficients)
        out[full] = out.get(full, 0) - 1
        return BurnsideElement(self.ambient, out)

    def items_sorted(self):
        return sorted(self.coefficients.items(), key=lambda kv: kv[0].tag)

    def records(self):
        out = []
        for cls, c in self.items_sorted():
            rec = cls.describe()
            rec["coefficient"] = c
            out.append(rec)
        return out

    def to_jsonl(self):
        return "\n".join(json.dumps(r, sort_keys=True, separators=(",", ":"))
                         for r in self.records())

    def __repr__(self):
        parts = ["%+d*%r" % (c, cls) for cls, c in self.items_sorted()]
        return " ".join(parts) if parts else "0"


def zero_element(ambient):
    return BurnsideElement(ambient, {})


def generator_element(ambient, h_elements, t_elements, coefficient=1):
    cls = HTClass(ambient, h_elements, t_elements)
    return BurnsideElement(ambient, {cls: coefficient})


def mark(kprime, k):
    """Number of K-fixed points on the coset space (G x| S) / K'.

    Both classes must live over the same ambient group; the count is done by
    explicit coset enumeration with the canonical representative map.
    """
    ambient = kprime.ambient
    if not ambient.compatible(k.ambient):
        raise AmbientMismatchError("marks need a common ambient group")
    reps, assign = ambient.repmap(kprime)
    gens = k.generators()
    if not gens:
        return len(reps)
    els = ambient.elements
    idx = ambient.index
    mul = ambient.mul
    count = 0
    for ri in reps:
        r = els[ri]
        if all(assign[idx[mul(g, r)]] == ri for g in gens):
            count += 1
    return count


def induction(element, perms_big):
    """Reinterpret classes over G x| S' inside G x| S for S' <= S."""
    small = element.ambient
    if not small.perms.is_subgroup_of(perms_big):
        raise AmbientMismatchError("induction target does not contain the source")
    big = SemidirectAmbient(small.diag, perms_big)
    out = {}
    for cls, c in element.coefficients.items():
        lifted = HTClass(big, cls.h_elements, cls.t_elements)
        out[lifted] = out.get(lifted, 0) + c
    return BurnsideElement(big, out)


def saito_dual(element, pairing):
    """Replace every H by its annihilator, keeping T and coefficients.

    ``pairing`` must have its left group equal to the element's diagonal
    group; the result lives over (right group) x| S.
    """
    src = element.ambient
    if pairing.left is not src.diag and pairing.left.matrix != src.diag.matrix:
        raise AmbientMismatchError("pairing does not match the element's group")
    dual_ambient = SemidirectAmbient(pairing.right, src.perms)
    out = {}
    for cls, c in element.coefficients.items():
        dual_h = pairing.annihilator(cls.h_elements)
        lifted = HTClass(dual_ambient, dual_h, cls.t_elements)
        out[lifted] = out.get(lifted, 0) + c
    return BurnsideElement(dual_ambient, out)
