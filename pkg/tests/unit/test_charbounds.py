"""Unit tests for character-theoretic degree bounds."""

import json
import re
from fractions import Fraction

import pytest

from genhamilton.core.models.degrees import CharTableData
from genhamilton.core.services.charbounds import (
    chartable_from_group,
    is_prime_power,
    l2_order,
    l2q_field_size,
    l2q_lemma_check,
    lower_bounds_vertex_degrees,
    permutation_character,
)
from genhamilton.core.services.loader import build_group, load_chartable_file, load_group_spec
from genhamilton.core.services.permcore import NotSubgroupError, conjugacy_classes
from tests.conftest import CHARTABLES, GROUPS, make_group

pytestmark = pytest.mark.unit

L2_NAME = re.compile(r"^(?:L2\((\d+)\)|PSL\(2,(\d+)\))$")


@pytest.fixture
def a5_table() -> CharTableData:
    return load_chartable_file(CHARTABLES / "A5.json").to_data()


class TestPermutationCharacter:
    """Test permutation characters computed from subgroups."""

    def test_s3_on_cosets_of_a_transposition(self, s3):
        """Test S3 on cosets of a transposition."""
        sub = make_group(3, "(1,2)")
        character = permutation_character(s3, sub, conjugacy_classes(s3))
        assert character.values == (3, 1, 0)

    def test_a5_on_cosets_of_a4(self, a5):
        """Test A5 on cosets of A4."""
        a4 = make_group(5, "(1,2,3)", "(1,2)(3,4)")
        character = permutation_character(a5, a4, conjugacy_classes(a5))
        assert character.values == (5, 1, 2, 0, 0)
        assert character.degree == 5

    def test_trivial_subgroup_gives_regular_character(self, s3):
        """Test trivial subgroup gives regular character."""
        trivial = make_group(3)
        assert permutation_character(s3, trivial, conjugacy_classes(s3)).values == (6, 0, 0)

    def test_requires_subgroup(self, s3):
        """Test requires subgroup."""
        with pytest.raises(NotSubgroupError):
            permutation_character(s3, make_group(4, "(1,2)"), conjugacy_classes(s3))


class TestLowerBounds:
    """Test the lower bounds for vertex degrees."""

    def test_a5(self, a5_table):
        """Test A5."""
        bounds = lower_bounds_vertex_degrees(a5_table)
        assert bounds.kind == "lower_bound"
        assert [[int(x) for x in row] for row in bounds.entries] == [
            [0, 8, 8, 8],
            [6, 2, 12, 12],
            [10, 20, 10, 10],
            [10, 20, 10, 10],
        ]

    def test_bounds_do_not_exceed_exact_degrees(self, a5, a5_table):
        """Test bounds do not exceed exact degrees."""
        from genhamilton.core.services.gengraph import vertex_degree_matrix

        classes = conjugacy_classes(a5)
        exact = vertex_degree_matrix(a5, classes, [])
        bounds = lower_bounds_vertex_degrees(a5_table)
        for exact_row, bound_row in zip(exact.entries, bounds.entries):
            assert all(b <= e for b, e in zip(bound_row, exact_row))

    def test_without_characters_bounds_are_class_lengths(self):
        """Test without characters bounds are class lengths."""
        data = CharTableData(class_lengths=(1, 3, 2), element_orders=(1, 2, 3))
        bounds = lower_bounds_vertex_degrees(data)
        assert bounds.entries == ((3, 2), (3, 2))

    def test_single_character(self):
        """Test single character."""
        # S3 on the cosets of a transposition: 3 - 3 * 1 * 1/3 = 2 and 2 - 0 = 2
        data = CharTableData(
            class_lengths=(1, 3, 2), element_orders=(1, 2, 3), characters=[(3, 1, 0)]
        )
        bounds = lower_bounds_vertex_degrees(data)
        assert bounds.entries == ((2, 2), (3, 2))
        half = CharTableData(
            class_lengths=(1, 3, 2), element_orders=(1, 2, 3), characters=[(2, 0, 2)]
        )
        assert lower_bounds_vertex_degrees(half).entries == ((3, 2), (3, 0))

    def test_big_numbers_stay_exact(self):
        """Test big numbers stay exact."""
        big = 10**40
        data = CharTableData(
            class_lengths=(1, big - 1, big),
            element_orders=(1, 2, 3),
            characters=[(2, 2, 0)],
        )
        bounds = lower_bounds_vertex_degrees(data)
        assert bounds.entries == ((Fraction(0), Fraction(big)), (Fraction(big - 1), Fraction(big)))


class TestL2qCheck:
    """Test the three degree checks for L2(q)."""

    def test_a5(self, a5_table):
        """Test that A5 fails only the orders 3 to 5 check."""
        report = l2q_lemma_check(a5_table)
        assert report.large_orders_ok
        assert report.order2_ok
        assert not report.order3to5_ok
        assert report.order3to5_failures == (3, 4, 5)
        assert not report.all_ok
        assert report.field_size == 4

    @pytest.mark.parametrize(("name", "q"), [("L2_13.json", 13), ("L2_17.json", 17)])
    def test_larger_fields_pass(self, name, q):
        """Test that L2(13) and L2(17) pass all three checks."""
        report = l2q_lemma_check(load_chartable_file(CHARTABLES / name).to_data())
        assert report.all_ok
        assert report.large_order_failures == ()
        assert report.field_size == q

    def test_table_without_characters(self):
        """Test the checks on a table that lists no characters."""
        report = l2q_lemma_check(load_chartable_file(CHARTABLES / "S3_bare.yaml").to_data())
        assert report.order2_ok
        assert report.order3to5_failures == (3,)
        assert report.field_size == 2

    def test_trivial_group(self):
        """Test that the trivial group passes vacuously and has no field size."""
        report = l2q_lemma_check(CharTableData(class_lengths=(1,), element_orders=(1,)))
        assert report.all_ok
        assert report.field_size is None

    def test_order_of_no_l2q(self):
        """Test that S5 has no field size."""
        report = l2q_lemma_check(load_chartable_file(CHARTABLES / "A5.2.json").to_data())
        assert report.field_size is None


class TestFieldSize:
    """Test the prime power behind an order |L2(q)|."""

    @pytest.mark.parametrize(
        ("n", "expected"),
        [(2, True), (4, True), (8, True), (9, True), (13, True), (1, False), (6, False), (12, False), (15, False)],
    )
    def test_is_prime_power(self, n, expected):
        """Test prime power recognition on small integers."""
        assert is_prime_power(n) is expected

    @pytest.mark.parametrize(
        ("q", "order"), [(2, 6), (3, 12), (4, 60), (7, 168), (8, 504), (9, 360), (11, 660), (13, 1092), (17, 2448)]
    )
    def test_l2_order(self, q, order):
        """Test |L2(q)| for small fields."""
        assert l2_order(q) == order

    def test_smallest_field_is_returned(self):
        """Test that order 60 gives q = 4 rather than 5."""
        assert l2q_field_size(60) == 4

    @pytest.mark.parametrize("order", [1, 24, 120, 720, 7920])
    def test_orders_without_a_field(self, order):
        """Test orders that are not |L2(q)| for any prime power q."""
        assert l2q_field_size(order) is None

    def test_named_l2q_fixtures_have_prime_power_fields(self):
        """Test that every corpus file named L2(q) or PSL(2,q) has q a prime power of the right order."""
        seen = 0
        for path in sorted(CHARTABLES.glob("*.json")) + sorted(GROUPS.glob("*.json")):
            document = json.loads(path.read_text())
            match = L2_NAME.match(document["name"])
            if match is None:
                continue
            q = int(match.group(1) or match.group(2))
            assert is_prime_power(q), path.name
            if path.parent == CHARTABLES:
                order = load_chartable_file(path).to_data().group_order
            else:
                order = build_group(load_group_spec(path), cap=10_000).group.order
            assert order == l2_order(q), path.name
            assert l2q_field_size(order) == q, path.name
            seen += 1
        assert seen >= 6


class TestChartableFromGroup:
    """Test character table data derived from maximal subgroups."""

    def test_a5_matches_stored_table(self, a5, a5_table):
        """Test A5 matches stored table."""
        maximals = [
            make_group(5, "(1,2,3)", "(1,2)(3,4)"),
            make_group(5, "(1,2,3,4,5)", "(2,5)(3,4)"),
            make_group(5, "(1,2,3)", "(1,2)(4,5)"),
        ]
        assert chartable_from_group(a5, maximals) == a5_table

    def test_reuses_class_table(self, s3):
        """Test reuses class table."""
        classes = conjugacy_classes(s3)
        data = chartable_from_group(s3, [make_group(3, "(1,2)")], classes)
        assert data.class_lengths == classes.sizes
        assert data.element_orders == classes.orders
        assert data.characters[0].values == (3, 1, 0)
