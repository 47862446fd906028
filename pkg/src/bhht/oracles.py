"""Slow, independent cross-checks: naive marks, naive conjugacy, fixed-point sums.

These deliberately avoid the canonical-representative machinery of the main
code paths so they can serve as oracles for it; everything here is plain
enumeration over small groups.
"""

from .burnside import mark
from .diaggroups import subgroup_generated
from .errors import SizeBoundError
from .euler import stratum_chi_fixed


def naive_mark(kprime, k):
    """Fixed cosets counted with explicit coset sets, no canonical map."""
    ambient = kprime.ambient
    members = kprime.subgroup_elements()
    cosets = set()
    for g in ambient.elements:
        cosets.add(frozenset(ambient.mul(g, m) for m in members))
    kelems = k.subgroup_elements()
    count = 0
    for coset in cosets:
        if all(frozenset(ambient.mul(x, g) for g in coset) == coset for x in kelems):
            count += 1
    return count


def brute_conjugate_element(ambient, h1, t1, h2, t2):
    """Some (v, s) in the whole semidirect product conjugating one split subgroup
    onto the other, or None.  Used to validate the S-only conjugacy criterion."""
    first = frozenset((h, t) for h in h1 for t in t1)
    second = frozenset((h, t) for h in h2 for t in t2)
    for g in ambient.elements:
        gi = ambient.inv(g)
        moved = frozenset(ambient.mul(ambient.mul(g, x), gi) for x in first)
        if moved == second:
            return g
    return None


def all_subgroups_abelian(group, limit=20000):
    """Every subgroup of a small diagonal group, by one-element extensions."""
    if group.order > limit:
        raise SizeBoundError("subgroup enumeration capped at order %d" % limit)
    trivial = frozenset({group.zero})
    found = {trivial}
    queue = [trivial]
    while queue:
        h = queue.pop()
        for g in group.elements:
            if g in h:
                continue
            k = subgroup_generated(group, list(h) + [g])
            if k not in found:
                found.add(k)
                queue.append(k)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def split_subgroup_pairs(group, perms, limit=20000):
    """All well-formed (H, T) pairs over a small group, without deduplication."""
    from .diaggroups import perm_act
    pairs = []
    subgroups = all_subgroups_abelian(group, limit)
    lattice = perms.lattice
    for t_set in lattice.subgroups:
        for h in subgroups:
            if all(frozenset(perm_act(t, x) for x in h) == h for t in t_set):
                pairs.append((h, t_set))
    return pairs


def fixed_point_euler(matrix, perms, h_elements, t_elements):
    """chi of the (H x| T)-fixed part of the fibre, summed stratum by stratum.

    Independent of the Burnside bookkeeping: a stratum contributes exactly
    when H acts trivially on it and T preserves it, and then contributes the
    T-fixed determinant count.
    """
    matrix = matrix.anchored()
    n = matrix.n
    t_group = perms.subgroup(t_elements)
    total = 0
    for mask in range(1, 1 << n):
        subset = tuple(i for i in range(n) if mask >> i & 1)
        if any(any(h[i] != 0 for i in subset) for h in h_elements):
            continue
        if any({t[i] for i in subset} != set(subset) for t in t_elements):
            continue
        total += stratum_chi_fixed(matrix, subset, t_group)
    return total


def check_fixed_point_consistency(analysis, limit=2000):
    """Marks of the assembled invariant against direct stratum sums.

    For every split class of the ambient group, the weighted sum of marks of
    the computed equivariant Euler characteristic must equal the fixed-point
    Euler characteristic computed directly from the strata.  Returns the
    number of classes checked; raises AssertionError on any mismatch.
    """
    ambient = analysis.ambient
    if ambient.order > limit:
        raise SizeBoundError("consistency check capped at order %d" % limit)
    from .burnside import HTClass
    done = set()
    checked = 0
    for h, t in split_subgroup_pairs(analysis.group, analysis.perms):
        probe = HTClass(ambient, h, t)
        if probe.tag in done:
            continue
        done.add(probe.tag)
        lhs = sum(c * mark(cls, probe)
                  for cls, c in analysis.element.coefficients.items())
        rhs = fixed_point_euler(analysis.matrix, analysis.perms,
                                probe.h_elements, probe.t_elements)
        if lhs != rhs:
            raise AssertionError(
                "fixed-point mismatch on %r: marks give %d, strata give %d"
                % (probe, lhs, rhs))
        checked += 1
    return checked
