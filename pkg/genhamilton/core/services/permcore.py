"""Exact permutation-group engine built on full element enumeration.

Groups are small enough (a configurable order cap, 10^5 by default) that
every group keeps its complete, sorted element list. Structural questions
(orbits, transitivity, derived subgroup, normality, perfect and dihedral
groups) go to ``sympy.combinatorics``; conjugacy classes, centralizers and
double cosets are computed by direct enumeration over the element list,
which keeps all results deterministic.

Internally a permutation is a tuple of 0-based images; the public surface
speaks 1-based image arrays and cycle notation.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property

from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup

from genhamilton.core.utils.logger import event_log, logger

Images = tuple[int, ...]


class PermGroupError(Exception):
    """Raised when a permutation or group operation fails."""

    pass


class DegreeMismatchError(PermGroupError):
    """Raised when permutations of different degrees are combined."""

    pass


class OrderCapExceededError(PermGroupError):
    """Raised when element enumeration exceeds the configured order cap."""

    pass


class NotInGroupError(PermGroupError):
    """Raised when an element is required to lie in a group but does not."""

    pass


class NotSubgroupError(PermGroupError):
    """Raised when a group is required to be a subgroup but is not."""

    pass


class NotTransitiveError(PermGroupError):
    """Raised when a group must be transitive on its moved points."""

    pass


class NoFaithfulConstituentError(PermGroupError):
    """Raised when no orbit carries a faithful action."""

    pass


class ClassTableError(PermGroupError):
    """Raised when a class table does not belong to the group at hand."""

    pass


def _compose(p: Images, q: Images) -> Images:
    """Apply p first, then q."""
    return tuple(map(q.__getitem__, p))


def _invert(p: Images) -> Images:
    inverse = [0] * len(p)
    for point, image in enumerate(p):
        inverse[image] = point
    return tuple(inverse)


def element_closure(
    degree: int,
    generators: Sequence[Images],
    cap: int | None = None,
    stop_above: int | None = None,
) -> set[Images]:
    """Breadth-first closure of the generators.

    Args:
        degree: Number of points
        generators: Generators as 0-based image tuples
        cap: Raise OrderCapExceededError once more than ``cap`` elements appear
        stop_above: Return early once more than ``stop_above`` elements appear

    Returns:
        The set of all elements found
    """
    identity = tuple(range(degree))
    seen = {identity}
    gens = [g for g in dict.fromkeys(generators) if g != identity]
    frontier = [identity]
    while frontier:
        following = []
        for p in frontier:
            for g in gens:
                q = tuple(map(g.__getitem__, p))
                if q not in seen:
                    seen.add(q)
                    following.append(q)
        if cap is not None and len(seen) > cap:
            raise OrderCapExceededError(
                f"order cap exceeded: group has more than {cap} elements"
            )
        if stop_above is not None and len(seen) > stop_above:
            return seen
        frontier = following
    return seen


class Permutation:
    """A bijection of the points 1..degree.

    Composition reads left to right: ``p * q`` applies p first, then q,
    so conjugation is ``g ** x == x**-1 * g * x``.
    """

    __slots__ = ("_images", "_hash")

    def __init__(self, images: Sequence[int]) -> None:
        """Create a permutation from its 1-based image array.

        Args:
            images: images[i-1] is the image of point i

        Raises:
            PermGroupError: If images is empty or not a bijection of 1..degree
        """
        degree = len(images)
        if degree < 1:
            raise PermGroupError("Permutation degree must be positive")
        try:
            images0 = tuple(int(x) - 1 for x in images)
        except (TypeError, ValueError) as e:
            raise PermGroupError(f"Image array must contain integers: {list(images)}") from e
        if sorted(images0) != list(range(degree)):
            raise PermGroupError(f"Not a bijection of 1..{degree}: {list(images)}")
        self._images = images0
        self._hash = hash(images0)

    @classmethod
    def _raw(cls, images0: Images) -> Permutation:
        """Wrap a trusted 0-based image tuple without validation."""
        perm = cls.__new__(cls)
        perm._images = images0
        perm._hash = hash(images0)
        return perm

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        """The identity on 1..degree."""
        if degree < 1:
            raise PermGroupError("Permutation degree must be positive")
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> Permutation:
        """Parse cycle notation such as ``"(1,2,3)(4,5)"``.

        Cycles need not be disjoint; they are multiplied left to right.
        ``"()"`` is the identity.

        Args:
            text: Cycle notation
            degree: Number of points

        Returns:
            The parsed permutation

        Raises:
            PermGroupError: If the text is malformed or mentions a point
                outside 1..degree
        """
        if degree < 1:
            raise PermGroupError("Permutation degree must be positive")
        compact = re.sub(r"\s+", "", text)
        if not _CYCLES_PATTERN.fullmatch(compact):
            raise PermGroupError(f"Malformed cycle notation: {text!r}")

        cycles = []
        for body in re.findall(r"\(([^()]*)\)", compact):
            if not body:
                continue
            points = [int(p) for p in body.split(",")]
            if len(set(points)) != len(points):
                raise PermGroupError(f"Repeated point in cycle ({body})")
            if any(p < 1 or p > degree for p in points):
                raise PermGroupError(f"Cycle ({body}) mentions a point outside 1..{degree}")
            if len(points) > 1:
                cycles.append([p - 1 for p in points])
        if not cycles:
            return cls.identity(degree)
        return cls.from_sympy(SymPermutation(cycles, size=degree))

    @classmethod
    def from_sympy(cls, perm: SymPermutation) -> Permutation:
        """Wrap a sympy permutation (0-based array form)."""
        return cls._raw(tuple(int(x) for x in perm.array_form))

    def to_sympy(self) -> SymPermutation:
        return SymPermutation(list(self._images))

    @property
    def degree(self) -> int:
        """Number of points."""
        return len(self._images)

    @property
    def images(self) -> tuple[int, ...]:
        """1-based image array."""
        return tuple(x + 1 for x in self._images)

    def image(self, point: int) -> int:
        """Image of a 1-based point."""
        return self._images[point - 1] + 1

    @property
    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point (1-based)."""
        return [tuple(p + 1 for p in cycle) for cycle in self.to_sympy().cyclic_form]

    @property
    def order(self) -> int:
        """Element order (lcm of the cycle lengths)."""
        return int(self.to_sympy().order())

    def compose(self, other: Permutation) -> Permutation:
        """Apply self first, then other."""
        if self.degree != other.degree:
            raise DegreeMismatchError(
                f"Cannot compose permutations of degrees {self.degree} and {other.degree}"
            )
        return Permutation._raw(_compose(self._images, other._images))

    def inverse(self) -> Permutation:
        return Permutation.from_sympy(~self.to_sympy())

    def power(self, k: int) -> Permutation:
        """k-fold product; negative k gives powers of the inverse."""
        return Permutation.from_sympy(self.to_sympy() ** k)

    def conjugate(self, by: Permutation) -> Permutation:
        """``by**-1 * self * by``."""
        if self.degree != by.degree:
            raise DegreeMismatchError(
                f"Cannot conjugate degree {self.degree} by degree {by.degree}"
            )
        return Permutation._raw(_compose(_compose(_invert(by._images), self._images), by._images))

    def __mul__(self, other: Permutation) -> Permutation:
        return self.compose(other)

    def __pow__(self, k: int) -> Permutation:
        return self.power(k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._images == other._images

    def __lt__(self, other: Permutation) -> bool:
        return self._images < other._images

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(str(p) for p in c) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


_CYCLES_PATTERN = re.compile(r"(\((\d+(,\d+)*)?\))+")


def perm_compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply p first, then q: result.images[i] = q.images[p.images[i]]."""
    return p.compose(q)


def perm_power(p: Permutation, k: int) -> Permutation:
    """k-fold composition of p; perm_power(p, -1) is the inverse."""
    return p.power(k)


class PermGroup:
    """A permutation group with its complete element list.

    Instances are built by ``group_from_generators`` or derived from an
    existing group. Elements are enumerated on construction; orbit data
    comes from the cached ``sympy_group`` on first use.
    """

    def __init__(
        self,
        degree: int,
        generators: Sequence[Permutation],
        elements: Iterable[Images],
    ) -> None:
        """Wrap a closed element set.

        Args:
            degree: Number of points
            generators: Generators (kept as given)
            elements: All elements as 0-based image tuples
        """
        for g in generators:
            if g.degree != degree:
                raise DegreeMismatchError(
                    f"Generator {g} has degree {g.degree}, expected {degree}"
                )
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(generators)
        self.elements: tuple[Permutation, ...] = tuple(
            Permutation._raw(x) for x in sorted(elements)
        )
        self.element_set: frozenset[Images] = frozenset(x._images for x in self.elements)
        self.order = len(self.elements)
        self.identity = Permutation.identity(degree)

    @cached_property
    def sympy_group(self) -> PermutationGroup:
        """The same group as a ``sympy.combinatorics.PermutationGroup``."""
        gens = [g.to_sympy() for g in self.generators]
        return PermutationGroup(gens or [self.identity.to_sympy()])

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbits of length at least two, 1-based, ordered by smallest point."""
        nontrivial = [
            tuple(sorted(p + 1 for p in orbit))
            for orbit in self.sympy_group.orbits()
            if len(orbit) > 1
        ]
        return tuple(sorted(nontrivial))

    @cached_property
    def moved_points(self) -> tuple[int, ...]:
        return tuple(sorted(p for orbit in self.orbits for p in orbit))

    @cached_property
    def transitive(self) -> bool:
        """Transitive on the moved points; the trivial group counts as transitive."""
        return self.order == 1 or bool(self.sympy_group.is_transitive(strict=False))

    def __contains__(self, item: object) -> bool:
        return isinstance(item, Permutation) and item._images in self.element_set

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"PermGroup(degree={self.degree}, order={self.order}, generators=[{gens}])"


def group_from_generators(degree: int, gens: Sequence[Permutation], cap: int) -> PermGroup:
    """Enumerate the group generated by ``gens``.

    Args:
        degree: Number of points
        gens: Generators, all of the given degree
        cap: Largest allowed group order

    Returns:
        The group with all elements enumerated

    Raises:
        DegreeMismatchError: If a generator has another degree
        OrderCapExceededError: If the group has more than ``cap`` elements
    """
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatchError(f"Generator {g} has degree {g.degree}, expected {degree}")
    elements = element_closure(degree, [g._images for g in gens], cap=cap)
    group = PermGroup(degree, gens, elements)
    logger.debug(f"Enumerated group of degree {degree} and order {group.order}")
    return group


def subgroup_from_generators(group: PermGroup, gens: Sequence[Permutation]) -> PermGroup:
    """The subgroup of ``group`` generated by ``gens``.

    Raises:
        NotInGroupError: If a generator is not an element of the group
    """
    for g in gens:
        if g not in group:
            raise NotInGroupError(f"{g} is not an element of the group")
    return PermGroup(group.degree, gens, element_closure(group.degree, [g._images for g in gens]))


def subgroup_from_elements(group: PermGroup, elements: Iterable[Permutation]) -> PermGroup:
    """Wrap a closed subset of ``group`` as a subgroup.

    A small generating set is chosen greedily in element order.

    Raises:
        PermGroupError: If the elements are not closed under multiplication
    """
    members = sorted({x._images for x in elements})
    gens: list[Images] = []
    span = {tuple(range(group.degree))}
    for x in members:
        if x not in span:
            gens.append(x)
            span = element_closure(group.degree, gens)
    if len(span) != len(members):
        raise PermGroupError("Element set is not a subgroup")
    return PermGroup(group.degree, [Permutation._raw(g) for g in gens], members)


def is_subgroup(group: PermGroup, sub: PermGroup) -> bool:
    """Element-set inclusion."""
    return sub.degree == group.degree and sub.element_set <= group.element_set


def is_normal(group: PermGroup, sub: PermGroup) -> bool:
    """Whether ``sub`` is a normal subgroup of ``group``."""
    if not is_subgroup(group, sub):
        return False
    return bool(sub.sympy_group.is_normal(group.sympy_group))


def orbits_and_transitivity(group: PermGroup) -> tuple[list[tuple[int, ...]], bool]:
    """Orbits on the moved points, and whether there is exactly one.

    The trivial group has no moved points and counts as transitive.
    """
    return list(group.orbits), group.transitive


class ClassTable:
    """Conjugacy classes of a group in canonical order.

    Classes are sorted by (element order, class size, smallest member);
    the representative of each class is its smallest member, so the
    identity class comes first.
    """

    def __init__(
        self,
        group: PermGroup,
        reps: Sequence[Permutation],
        sizes: Sequence[int],
        orders: Sequence[int],
        class_of: dict[Images, int],
    ) -> None:
        if sum(sizes) != group.order:
            raise ClassTableError(
                f"Class sizes sum to {sum(sizes)}, expected group order {group.order}"
            )
        self.group = group
        self.reps: tuple[Permutation, ...] = tuple(reps)
        self.sizes: tuple[int, ...] = tuple(sizes)
        self.orders: tuple[int, ...] = tuple(orders)
        self._class_of = class_of

    def class_index(self, element: Permutation) -> int:
        """Position of the class containing ``element``."""
        try:
            return self._class_of[element._images]
        except KeyError as e:
            raise NotInGroupError(f"{element} is not an element of the group") from e

    def members(self, index: int) -> list[Permutation]:
        """All elements of the class at ``index``, in element order."""
        return [x for x in self.group.elements if self._class_of[x._images] == index]

    def __len__(self) -> int:
        return len(self.reps)

    def __repr__(self) -> str:
        return f"ClassTable(sizes={list(self.sizes)}, orders={list(self.orders)})"


def conjugacy_classes(group: PermGroup) -> ClassTable:
    """Partition the elements of ``group`` into conjugacy classes.

    Returns:
        The classes in canonical order with sizes and element orders
    """
    conjugators = [(_invert(g._images), g._images) for g in group.generators]
    raw_index: dict[Images, int] = {}
    raw_classes: list[list[Images]] = []

    # Elements come in ascending order, so the first unassigned one is the
    # smallest member of its class.
    for x in group.elements:
        if x._images in raw_index:
            continue
        number = len(raw_classes)
        members = [x._images]
        raw_index[x._images] = number
        for y in members:
            for g_inv, g in conjugators:
                z = _compose(_compose(g_inv, y), g)
                if z not in raw_index:
                    raw_index[z] = number
                    members.append(z)
        raw_classes.append(members)

    keyed = []
    for number, members in enumerate(raw_classes):
        rep = Permutation._raw(members[0])
        keyed.append(((rep.order, len(members), rep._images), number, rep))
    keyed.sort(key=lambda item: item[0])

    position = {number: pos for pos, (_, number, _) in enumerate(keyed)}
    class_of = {element: position[number] for element, number in raw_index.items()}
    table = ClassTable(
        group,
        reps=[rep for _, _, rep in keyed],
        sizes=[key[1] for key, _, _ in keyed],
        orders=[key[0] for key, _, _ in keyed],
        class_of=class_of,
    )
    event_log("classes_computed", {"order": group.order, "classes": len(table)})
    return table


def centralizer(group: PermGroup, g: Permutation) -> PermGroup:
    """All elements of ``group`` commuting with ``g``.

    Raises:
        NotInGroupError: If g is not an element of the group
    """
    if g not in group:
        raise NotInGroupError(f"{g} is not an element of the group")
    g0 = g._images
    commuting = [x for x in group.elements if _compose(g0, x._images) == _compose(x._images, g0)]
    return subgroup_from_elements(group, commuting)


class DoubleCosetDecomposition:
    """Representatives and sizes of the double cosets H r K of a group."""

    def __init__(self, pairs: Sequence[tuple[Permutation, int]]) -> None:
        self.pairs: tuple[tuple[Permutation, int], ...] = tuple(pairs)

    @property
    def total(self) -> int:
        """Sum of the double coset sizes."""
        return sum(size for _, size in self.pairs)

    def __iter__(self) -> Iterator[tuple[Permutation, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


class RightCosets:
    """The right cosets H x of a subgroup, indexed in element order.

    Each coset is represented by its smallest element.
    """

    def __init__(self, group: PermGroup, sub: PermGroup) -> None:
        self.sub = sub
        self.reps: list[Images] = []
        self.coset_of: dict[Images, int] = {}
        sub_elements = [h._images for h in sub.elements]
        for x in group.elements:
            x0 = x._images
            if x0 in self.coset_of:
                continue
            number = len(self.reps)
            self.reps.append(x0)
            for h in sub_elements:
                self.coset_of[_compose(h, x0)] = number

    def double_cosets(self, right: PermGroup) -> DoubleCosetDecomposition:
        """Double cosets H r K as orbits of K on the right cosets of H."""
        right_gens = [k._images for k in right.generators]
        visited = [False] * len(self.reps)
        pairs = []
        for number in range(len(self.reps)):
            if visited[number]:
                continue
            visited[number] = True
            orbit = [number]
            for current in orbit:
                rep = self.reps[current]
                for k in right_gens:
                    target = self.coset_of[_compose(rep, k)]
                    if not visited[target]:
                        visited[target] = True
                        orbit.append(target)
            pairs.append((Permutation._raw(self.reps[number]), len(orbit) * self.sub.order))
        return DoubleCosetDecomposition(pairs)


def double_coset_reps_and_sizes(
    group: PermGroup, left: PermGroup, right: PermGroup
) -> DoubleCosetDecomposition:
    """Decompose ``group`` into double cosets ``left * r * right``.

    Representatives are the smallest elements of their double cosets, so the
    decomposition is listed in ascending representative order.

    Raises:
        NotSubgroupError: If left or right is not contained in the group
    """
    if not is_subgroup(group, left) or not is_subgroup(group, right):
        raise NotSubgroupError("Double coset subgroups must be contained in the group")
    return RightCosets(group, left).double_cosets(right)


def derived_subgroup(group: PermGroup) -> PermGroup:
    """The commutator subgroup G'.

    A perfect group is returned unchanged. Otherwise the generators are
    chosen greedily in element order, so they do not depend on the random
    Schreier-Sims run behind ``PermutationGroup.derived_subgroup``.
    """
    derived = group.sympy_group.derived_subgroup()
    if int(derived.order()) == group.order:
        return group
    images = [tuple(int(x) for x in g.array_form) for g in derived.generators]
    span = element_closure(group.degree, images)
    return subgroup_from_elements(group, (Permutation._raw(x) for x in span))


def is_perfect(group: PermGroup) -> bool:
    return bool(group.sympy_group.is_perfect)


def normal_subgroups_above_derived(group: PermGroup, quotient_cap: int = 4096) -> list[PermGroup]:
    """Proper normal subgroups N with G' <= N < G.

    They are the preimages of the proper subgroups of the abelian quotient
    G/G', which is small enough to enumerate subgroup by subgroup. The
    derived subgroup itself comes first; the rest follow by increasing
    order.

    Args:
        group: The group G
        quotient_cap: Largest quotient order handled

    Returns:
        The subgroups, empty if G is perfect

    Raises:
        OrderCapExceededError: If |G/G'| exceeds ``quotient_cap``
    """
    derived = derived_subgroup(group)
    if derived.order == group.order:
        return []
    quotient_order = group.order // derived.order
    if quotient_order > quotient_cap:
        raise OrderCapExceededError(
            f"order cap exceeded: quotient by the derived subgroup has order {quotient_order} "
            f"(cap {quotient_cap})"
        )

    cosets = RightCosets(group, derived)

    def multiply(a: int, b: int) -> int:
        return cosets.coset_of[_compose(cosets.reps[a], cosets.reps[b])]

    def generated(gens: Iterable[int]) -> frozenset[int]:
        gens = list(gens)
        members = [0]
        seen = {0}
        for m in members:
            for g in gens:
                p = multiply(m, g)
                if p not in seen:
                    seen.add(p)
                    members.append(p)
        return frozenset(seen)

    # Coset 0 holds the identity, the smallest element.
    trivial = frozenset({0})
    found = {trivial}
    queue = [trivial]
    for sub in queue:
        for q in range(quotient_order):
            if q in sub:
                continue
            bigger = generated(sub | {q})
            if bigger not in found:
                found.add(bigger)
                queue.append(bigger)

    proper = sorted(
        (sub for sub in found if len(sub) < quotient_order),
        key=lambda sub: (len(sub), sorted(sub)),
    )
    result = []
    for sub in proper:
        if sub == trivial:
            result.append(derived)
            continue
        members = [x for x in group.elements if cosets.coset_of[x._images] in sub]
        result.append(subgroup_from_elements(group, members))
    event_log(
        "normal_subgroups_above_derived",
        {"order": group.order, "derived": derived.order, "count": len(result)},
    )
    return result


def is_dihedral(group: PermGroup) -> bool:
    """Whether ``group`` is dihedral of order 2n with n >= 2.

    The Klein four-group counts as dihedral, the group of order 2 does not.
    """
    return group.order >= 4 and bool(group.sympy_group.is_dihedral)


def restrict_action(perms: Iterable[Permutation], orbit: Sequence[int]) -> list[Permutation]:
    """Restrict permutations to an invariant point set, renumbered 1..len(orbit).

    Points keep their relative order.
    """
    points = sorted(orbit)
    position = {point: i for i, point in enumerate(points)}
    return [
        Permutation._raw(tuple(position[p.image(point)] for point in points)) for p in perms
    ]


def find_faithful_orbit(group: PermGroup) -> tuple[int, ...]:
    """The first orbit, in point order, on which ``group`` acts faithfully.

    Raises:
        NoFaithfulConstituentError: If every constituent has a kernel
    """
    for orbit in group.orbits:
        image = PermutationGroup([g.to_sympy() for g in restrict_action(group.generators, orbit)])
        if int(image.order()) == group.order:
            return orbit
    raise NoFaithfulConstituentError("no faithful transitive constituent")


def faithful_transitive_constituent(group: PermGroup) -> PermGroup:
    """``group`` itself if transitive, else its first faithful orbit action."""
    if group.transitive:
        return group
    orbit = find_faithful_orbit(group)
    gens = restrict_action(group.generators, orbit)
    constituent = group_from_generators(len(orbit), gens, cap=group.order)
    logger.info(
        f"Replaced intransitive group of degree {group.degree} by its action on "
        f"{len(orbit)} points"
    )
    return constituent
