"""Fixed-point statistics of permutation groups and defect estimates from them.

For the regular representation the normalized fixed-point count of g^r is the
indicator of ord(g) dividing r, so averaging over r recovers sums of 1/ord(g).
Truncated averages give estimates that stabilize once the window length is a
multiple of the group exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import CapExceededError
from .groups import FiniteAbelianGroup, element_order, enumeration_cap


@dataclass(frozen=True)
class PermutationGroup:
    """A finite group given by its action on range(degree).

    The element list may contain repeated permutations when the action is
    not faithful; statistics average over the list, not the image set.
    """

    degree: int
    elements: tuple[tuple[int, ...], ...]
    identity_index: int

    @property
    def order(self) -> int:
        return len(self.elements)


def compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a o b)(x) = a[b[x]]."""
    return tuple(a[x] for x in b)


def permutation_group(degree: int, elements) -> PermutationGroup:
    """Validate closure, inverses, and identity, then freeze the group."""
    elems = tuple(tuple(p) for p in elements)
    if not elems:
        raise ValueError("empty element list")
    domain = list(range(degree))
    for p in elems:
        if sorted(p) != domain:
            raise ValueError(f"not a permutation of range({degree}): {p}")
    identity = tuple(domain)
    if identity not in elems:
        raise ValueError("identity permutation missing")
    image = set(elems)
    for a in image:
        inverse = tuple(sorted(range(degree), key=lambda x: a[x]))
        if inverse not in image:
            raise ValueError("element list not closed under inverses")
        for b in image:
            if compose(a, b) not in image:
                raise ValueError("element list not closed under composition")
    return PermutationGroup(degree=degree, elements=elems, identity_index=elems.index(identity))


def _cycle_lengths(perm: tuple[int, ...]) -> list[int]:
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        lengths.append(length)
    return lengths


def permutation_order(perm: tuple[int, ...]) -> int:
    return lcm(*_cycle_lengths(perm)) if perm else 1


def group_exponent(group: PermutationGroup) -> int:
    return lcm(*(permutation_order(p) for p in group.elements))


def fixed_points_of_power(perm: tuple[int, ...], r: int) -> int:
    # A length-c cycle of g contributes c fixed points to g^r exactly when c | r.
    return sum(c for c in _cycle_lengths(perm) if r % c == 0)


def ds_variable(group: PermutationGroup, element_index: int, r: int) -> Fraction:
    """Fixed points of the r-th power, normalized by the degree."""
    if r < 1:
        raise ValueError("power index must be >= 1")
    return Fraction(fixed_points_of_power(group.elements[element_index], r), group.degree)


def ds_perm_estimate(group: PermutationGroup, k: int, window: int) -> Fraction:
    """degree^2 times the window average over r of the k-th moment of the statistic."""
    if window < 1:
        raise ValueError("window length must be >= 1")
    if k < 1:
        raise ValueError("moment index must be >= 1")
    n = group.degree
    total = Fraction(0)
    for r in range(1, window + 1):
        moment = sum(ds_variable(group, g, r) ** k for g in range(group.order))
        total += Fraction(moment, n)
    return Fraction(n * n, window) * total


def ds_defect_estimate(group: FiniteAbelianGroup, k: int, window: int) -> Fraction:
    """Same window average, computed from element orders in the regular action.

    In the regular representation g^r fixes everything or nothing, so the
    normalized statistic is the indicator of ord(g) | r and the k-th moment
    collapses to the plain count.
    """
    if window < 1:
        raise ValueError("window length must be >= 1")
    if k < 1:
        raise ValueError("moment index must be >= 1")
    n = group.order
    orders = [element_order(group, g) for g in group.elements()]
    total = Fraction(0)
    for r in range(1, window + 1):
        hits = sum(1 for o in orders if r % o == 0)
        total += Fraction(hits, n)
    return Fraction(n * n, window) * total


def is_regular(group: PermutationGroup) -> bool:
    """True when the action is the left translation action on the group itself."""
    if group.degree != group.order:
        return False
    for idx, p in enumerate(group.elements):
        if idx == group.identity_index:
            continue
        if fixed_points_of_power(p, 1) != 0:
            return False
    return len(set(group.elements)) == group.order


def ds_delta_exact(group: PermutationGroup, k: int = 1) -> Fraction:
    """Order-weighted sum recovered exactly from a full-exponent window.

    Requires a regular action; at window = exponent the truncated average of
    the divisibility indicator equals 1/ord(g) with no error term.
    """
    if not is_regular(group):
        raise ValueError("statistic is exact only for a regular action")
    window = group_exponent(group)
    return ds_perm_estimate(group, k, window) / group.degree


def regular_representation(group: FiniteAbelianGroup) -> PermutationGroup:
    """Left translation action of an abelian group on itself."""
    if group.order > enumeration_cap():
        raise CapExceededError(f"group order {group.order} exceeds cap {enumeration_cap()}")
    elems = group.element_list()
    index = {g: i for i, g in enumerate(elems)}
    perms = [tuple(index[group.add(g, h)] for h in elems) for g in elems]
    return permutation_group(group.order, perms)


def dihedral_group(n: int) -> PermutationGroup:
    """Rotations and reflections acting on n points.

    For n <= 2 the action is not faithful and the 2n-entry list repeats
    permutations; the list still enumerates the abstract group elements.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    rotations = [tuple((x + k) % n for x in range(n)) for k in range(n)]
    reflections = [tuple((c - x) % n for x in range(n)) for c in range(n)]
    return permutation_group(n, rotations + reflections)


def regular_dihedral_group(n: int) -> PermutationGroup:
    """Left translation action of the dihedral group on its own 2n elements.

    Elements are pairs (s, k) acting on Z_n as x -> (-1)^s x + k, composed as
    (s1, k1) * (s2, k2) = (s1 + s2, (-1)^(s1) k2 + k1).
    """
    if n < 1:
        raise ValueError("need n >= 1")

    def multiply(a, b):
        s1, k1 = a
        s2, k2 = b
        return ((s1 + s2) % 2, ((-k2 if s1 else k2) + k1) % n)

    elems = [(s, k) for s in range(2) for k in range(n)]
    index = {g: i for i, g in enumerate(elems)}
    perms = [tuple(index[multiply(g, h)] for h in elems) for g in elems]
    return permutation_group(2 * n, perms)
