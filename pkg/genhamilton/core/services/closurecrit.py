"""Closure iteration and the interval checks for Posa's and Chvatal's criteria.

Sorting the classes by their degree bound gives the sorted degree sequence
as a sequence of blocks; within one block all vertices share a bound. The
positions k where d_k >= k+1 may fail then form one interval per block,
so the criteria can be checked without expanding the sequence.
"""

import re
from collections.abc import Sequence
from fractions import Fraction

from genhamilton.core.models.degrees import DegreeMatrix
from genhamilton.core.models.reports import CriterionReport, HamiltonianInfo, Interval
from genhamilton.core.utils.logger import event_log, logger


class CriterionError(Exception):
    """Raised when class lengths and a degree matrix do not fit together."""

    pass


def _check_dimensions(class_lengths: Sequence[int], bounds: DegreeMatrix) -> None:
    if len(class_lengths) != bounds.dimension + 1:
        raise CriterionError(
            f"{len(class_lengths)} class lengths do not fit a "
            f"{bounds.dimension}x{bounds.dimension} matrix"
        )


def closure_bounds(class_lengths: Sequence[int], bounds: DegreeMatrix) -> DegreeMatrix:
    """Degree bounds for the closure of the graph described by ``bounds``.

    Vertices whose degrees sum to at least |G| - 1 become adjacent in the
    closure, so the whole class pair is saturated.

    Raises:
        CriterionError: On a dimension mismatch
    """
    _check_dimensions(class_lengths, bounds)
    delta = bounds.row_sums()
    threshold = sum(class_lengths) - 1
    entries = []
    for i, row in enumerate(bounds.entries):
        entries.append(
            tuple(
                Fraction(class_lengths[j + 1]) if delta[i] + delta[j] >= threshold else value
                for j, value in enumerate(row)
            )
        )
    return DegreeMatrix(
        class_lengths=tuple(class_lengths),
        entries=tuple(entries),
        kind=bounds.kind,
        closure_index=bounds.closure_index + 1,
    )


def check_posa_chvatal(class_lengths: Sequence[int], bounds: DegreeMatrix) -> CriterionReport:
    """Intervals of positions where either criterion may fail.

    Args:
        class_lengths: Class lengths, identity class first
        bounds: Degree bounds with rows in the same class order

    Returns:
        The Posa-bad intervals, the Chvatal-bad intervals and the sorted
        (bound, class length, class position) triples

    Raises:
        CriterionError: On a dimension mismatch
    """
    _check_dimensions(class_lengths, bounds)
    size = sum(class_lengths)
    degs = sorted(
        (row_sum, class_lengths[i], i + 1)
        for i, row_sum in enumerate(bounds.row_sums(), start=1)
    )

    bad_for_posa: list[Interval] = []
    chvatal_candidates: list[Interval] = []
    half = size // 2 - 1
    pos = 1
    for bound, length, _ in degs:
        # pos is the first position of this block in the sorted sequence
        low1 = max(Fraction(pos), bound)
        upp2 = min(Fraction(half), Fraction(size - 1 - pos), size - 1 - bound)
        pos += length
        upp1 = Fraction(min(half, pos - 1))
        low2 = Fraction(max(1, size - pos))
        if low1 <= upp1:
            bad_for_posa.append(Interval(low=low1, high=upp1))
        if low2 <= upp2:
            chvatal_candidates.append(Interval(low=low2, high=upp2))

    intersections = set()
    for first in bad_for_posa:
        for second in chvatal_candidates:
            low = max(first.low, second.low)
            high = min(first.high, second.high)
            if low <= high:
                intersections.add((low, high))
    bad_for_chvatal = [Interval(low=low, high=high) for low, high in sorted(intersections)]

    for interval in bad_for_chvatal:
        if not interval.contains_integer():
            logger.warning(
                f"Chvatal-bad interval [{interval.low}, {interval.high}] contains no integer"
            )

    return CriterionReport(
        bad_for_posa=tuple(bad_for_posa),
        bad_for_chvatal=tuple(bad_for_chvatal),
        data=tuple(degs),
        closure_index=bounds.closure_index,
    )


def ordinal(n: int) -> str:
    """English ordinal: 0th, 1st, 2nd, 3rd, 4th, ..., 11th, 12th, 13th, 21st."""
    if n % 100 in (11, 12, 13):
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


def render_verdict(posa_closure: int | None, chvatal_closure: int | None) -> str:
    if posa_closure is not None:
        if chvatal_closure is not None and chvatal_closure != posa_closure:
            return (
                f"Chvatal for {ordinal(chvatal_closure)} closure, "
                f"Posa for {ordinal(posa_closure)} closure"
            )
        return f"Posa for {ordinal(posa_closure)} closure"
    if chvatal_closure is not None:
        return f"Chvatal for {ordinal(chvatal_closure)} closure"
    return "no decision"


_VERDICT_PATTERNS = (
    (re.compile(r"Chvatal for (\d+)(?:st|nd|rd|th) closure, Posa for (\d+)(?:st|nd|rd|th) closure"), "both"),
    (re.compile(r"Posa for (\d+)(?:st|nd|rd|th) closure"), "posa"),
    (re.compile(r"Chvatal for (\d+)(?:st|nd|rd|th) closure"), "chvatal"),
)


def parse_verdict(text: str) -> tuple[int | None, int | None]:
    """Recover (posa_closure, chvatal_closure) from a rendered verdict.

    Raises:
        ValueError: If the text is not a verdict
    """
    text = text.strip()
    if text == "no decision":
        return None, None
    for pattern, shape in _VERDICT_PATTERNS:
        match = pattern.fullmatch(text)
        if not match:
            continue
        if shape == "both":
            return int(match.group(2)), int(match.group(1))
        if shape == "posa":
            value = int(match.group(1))
            return value, value
        return None, int(match.group(1))
    raise ValueError(f"Not a verdict: {text!r}")


def hamiltonian_cycle_info(class_lengths: Sequence[int], bounds: DegreeMatrix) -> HamiltonianInfo:
    """The first closures for which the bounds prove Posa's or Chvatal's criterion.

    Closures are iterated until the bounds no longer change.

    Raises:
        CriterionError: On a dimension mismatch
    """
    posa: int | None = None
    chvatal: int | None = None
    reports = []
    index = 0
    while True:
        report = check_posa_chvatal(class_lengths, bounds)
        reports.append(report)
        if posa is None and report.posa_ok:
            posa = index
        if chvatal is None and report.chvatal_ok:
            chvatal = index
        index += 1
        following = closure_bounds(class_lengths, bounds)
        if following.entries == bounds.entries:
            break
        bounds = following

    rendered = render_verdict(posa, chvatal)
    event_log("verdict", {"verdict": rendered, "iterations": index})
    return HamiltonianInfo(
        posa_closure=posa,
        chvatal_closure=chvatal,
        rendered=rendered,
        iterations=index,
        reports=tuple(reports),
    )

