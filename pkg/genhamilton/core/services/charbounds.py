"""Character-theoretic lower bounds for vertex degrees.

For a maximal subgroup M, the permutation character 1_M^G(g) counts the
conjugates of M containing g. An element s together with g fails to
generate G only if both lie in a common maximal subgroup, which bounds the
number of such g in each class from above; the rest generate.
"""

from collections.abc import Sequence
from fractions import Fraction
from math import gcd

from sympy.ntheory import factorint

from genhamilton.core.models.degrees import CharacterVector, CharTableData, DegreeMatrix
from genhamilton.core.models.reports import L2qReport
from genhamilton.core.services.permcore import (
    ClassTable,
    NotSubgroupError,
    PermGroup,
    conjugacy_classes,
    is_subgroup,
)
from genhamilton.core.utils.logger import logger


class CharacterError(Exception):
    """Raised when character data cannot be used."""

    pass


class DimensionMismatchError(CharacterError):
    """Raised when character and class data have different lengths."""

    pass


class NonIntegralCharacterError(CharacterError):
    """Raised when a permutation character value is not an integer."""

    pass


def permutation_character(group: PermGroup, sub: PermGroup, classes: ClassTable) -> CharacterVector:
    """The permutation character of ``group`` on the cosets of ``sub``.

    The value on class i is |G| * |s_i^G & M| / (|M| * |s_i^G|).

    Raises:
        NotSubgroupError: If sub is not contained in group
    """
    if not is_subgroup(group, sub):
        raise NotSubgroupError("permutation characters need a subgroup of the group")
    counts = [0] * len(classes)
    for element in sub.elements:
        counts[classes.class_index(element)] += 1

    values = []
    for count, size in zip(counts, classes.sizes):
        numerator = group.order * count
        denominator = sub.order * size
        if numerator % denominator:
            raise NonIntegralCharacterError(
                f"permutation character value {numerator}/{denominator} is not an integer"
            )
        values.append(numerator // denominator)
    return CharacterVector(values=tuple(values))


def lower_bounds_vertex_degrees(data: CharTableData) -> DegreeMatrix:
    """Lower bounds for the class-wise vertex degrees.

    Entry [i][j] is max(0, c_j - sum over pi of c_j * pi(s_j) * pi(s_i) / pi(1)),
    with rows and columns shifted past the identity class.

    Raises:
        DimensionMismatchError: If a character does not match the class list
    """
    lengths = data.class_lengths
    n = len(lengths)
    for character in data.characters:
        if len(character.values) != n:
            raise DimensionMismatchError(
                f"character of length {len(character.values)} for {n} classes"
            )

    # pi(s_i) / pi(1) for each character, indexed by class
    ratios = [
        [Fraction(value, character.degree) for value in character.values]
        for character in data.characters
    ]
    entries = []
    for i in range(1, n):
        row = []
        for j in range(1, n):
            excluded = sum(
                (lengths[j] * character.values[j] * ratio[i]
                 for character, ratio in zip(data.characters, ratios)),
                Fraction(0),
            )
            row.append(max(Fraction(0), lengths[j] - excluded))
        entries.append(tuple(row))

    return DegreeMatrix(class_lengths=lengths, entries=tuple(entries), kind="lower_bound")


def is_prime_power(n: int) -> bool:
    """Whether n = p^k for a prime p and k >= 1."""
    return n > 1 and len(factorint(n)) == 1


def l2_order(q: int) -> int:
    """Order of L2(q) = PSL(2, q)."""
    return q * (q * q - 1) // gcd(2, q - 1)


def l2q_field_size(order: int) -> int | None:
    """The smallest prime power q with |L2(q)| = order, or None.

    L2(4) and L2(5) both have order 60; 4 is returned.
    """
    # |L2(q)| >= q(q^2 - 1)/2, and is not monotone in q
    q = 2
    while q * (q * q - 1) // 2 <= order:
        if l2_order(q) == order and is_prime_power(q):
            return q
        q += 1
    return None


def l2q_lemma_check(data: CharTableData) -> L2qReport:
    """Degree checks used to settle the groups L2(q).

    With bds the lower-bound row sums and n[k] the number of elements of
    order k, checks that
        * classes of element order above 5 have bds > |G|/2,
        * classes of order 2 have bds > n[2],
        * classes of order 3, 4 or 5 have bds > n[2] + n[3] + n[4] + n[5].

    Failures are reported as 1-based class positions. ``field_size`` is the
    prime power q with |L2(q)| = |G|, when there is one.
    """
    bounds = lower_bounds_vertex_degrees(data).row_sums()
    orders = data.element_orders
    lengths = data.class_lengths
    counts = {
        k: sum(c for c, o in zip(lengths, orders) if o == k) for k in range(1, 6)
    }
    small_total = counts[2] + counts[3] + counts[4] + counts[5]
    half = Fraction(data.group_order, 2)

    large, order2, small = [], [], []
    for position in range(2, len(lengths) + 1):
        bound = bounds[position - 2]
        order = orders[position - 1]
        if order > 5 and bound <= half:
            large.append(position)
        elif order == 2 and bound <= counts[2]:
            order2.append(position)
        elif 3 <= order <= 5 and bound <= small_total:
            small.append(position)

    report = L2qReport(
        large_orders_ok=not large,
        order2_ok=not order2,
        order3to5_ok=not small,
        large_order_failures=tuple(large),
        order2_failures=tuple(order2),
        order3to5_failures=tuple(small),
        field_size=l2q_field_size(data.group_order),
    )
    if not report.all_ok:
        logger.debug(f"L2(q) degree checks failed: {report.model_dump()}")
    return report


def chartable_from_group(
    group: PermGroup,
    maximal_subgroups: Sequence[PermGroup],
    classes: ClassTable | None = None,
) -> CharTableData:
    """Class data and the permutation characters of the given subgroups.

    The subgroups are taken as the maximal subgroups up to conjugacy; they
    are not checked for maximality.
    """
    if classes is None:
        classes = conjugacy_classes(group)
    characters = tuple(permutation_character(group, sub, classes) for sub in maximal_subgroups)
    return CharTableData(
        class_lengths=classes.sizes,
        element_orders=classes.orders,
        characters=characters,
    )
