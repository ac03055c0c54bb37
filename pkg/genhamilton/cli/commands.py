"""Command handlers for the genhamilton CLI.

Each ``cmd_*`` handler reads one input file, runs a pipeline and returns a
``CommandReport`` holding the text line(s) for stdout and a JSON-ready
payload. Errors propagate as exceptions; ``exit_code_for`` maps them to
process exit codes.
"""

import json
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field

from genhamilton.core.config import AnalysisConfig
from genhamilton.core.models.degrees import DegreeMatrix
from genhamilton.core.models.files import CharTableFile
from genhamilton.core.models.reports import HamiltonianInfo
from genhamilton.core.services.charbounds import (
    CharacterError,
    chartable_from_group,
    l2q_lemma_check,
    lower_bounds_vertex_degrees,
)
from genhamilton.core.services.closurecrit import CriterionError, hamiltonian_cycle_info
from genhamilton.core.services.gengraph import (
    GraphError,
    OracleCapExceededError,
    adjacency_graph,
    check_degree_consistency,
    hamiltonian_cycle_search,
    naive_criteria_check,
    vertex_degree_matrix,
)
from genhamilton.core.services.loader import (
    LoadedGroup,
    LoaderError,
    build_group,
    load_chartable_file,
    load_group_spec,
)
from genhamilton.core.services.permcore import (
    ClassTable,
    OrderCapExceededError,
    PermGroupError,
    conjugacy_classes,
    normal_subgroups_above_derived,
)
from genhamilton.core.utils.logger import analysis_phase, event_log, logger, setup_logging

POSA_AT_START = "Posa for 0th closure"
NO_CHARACTERS = "no prim. perm. characters"


class OracleInconsistencyError(Exception):
    """Raised when the explicit graph contradicts the criteria."""

    pass


class CommandReport(BaseModel):
    """Output of one command on one input file."""

    name: str
    text: str = ""
    payload: dict[str, Any] = Field(default_factory=dict)


class Outcome(BaseModel):
    """Result of one file in a batch: a report or an error with its exit code."""

    path: str
    report: CommandReport | None = None
    exit_code: int = 0
    error: str | None = None


def _verdict_line(name: str, verdict: str, config: AnalysisConfig) -> str:
    if config.quiet_posa0 and verdict == POSA_AT_START:
        return ""
    return f"{name}: {verdict}"


def _info_payload(info: HamiltonianInfo) -> dict[str, Any]:
    return {
        "verdict": info.rendered,
        "posa_closure": info.posa_closure,
        "chvatal_closure": info.chvatal_closure,
        "iterations": info.iterations,
        "reports": [report.model_dump(mode="json") for report in info.reports],
    }


def analyze_loaded_group(
    loaded: LoadedGroup, config: AnalysisConfig
) -> tuple[ClassTable, DegreeMatrix, HamiltonianInfo]:
    """Exact degrees and the closure verdict for a loaded group."""
    group = loaded.group
    with analysis_phase(loaded.name, "classes") as phase:
        classes = conjugacy_classes(group)
        phase["classes"] = len(classes)
    with analysis_phase(loaded.name, "normal_subgroups") as phase:
        if loaded.normal_subgroups is not None:
            normal = loaded.normal_subgroups
        else:
            normal = normal_subgroups_above_derived(group, config.quotient_cap)
        phase["count"] = len(normal)
    with analysis_phase(loaded.name, "degree_matrix"):
        matrix = vertex_degree_matrix(group, classes, normal)
    with analysis_phase(loaded.name, "closures") as phase:
        info = hamiltonian_cycle_info(classes.sizes, matrix)
        phase["iterations"] = info.iterations
    return classes, matrix, info


def cmd_analyze_group(path: Path, config: AnalysisConfig) -> CommandReport:
    """Verdict from the exact vertex degrees of a group file."""
    loaded = build_group(load_group_spec(path), config.group_order_cap)
    logger.info(f"Analyzing {loaded.name} (order {loaded.group.order})")
    classes, matrix, info = analyze_loaded_group(loaded, config)
    payload = {
        "command": "analyze-group",
        "name": loaded.name,
        "order": loaded.group.order,
        "degree": loaded.group.degree,
        "class_lengths": list(classes.sizes),
        "element_orders": list(classes.orders),
        "representatives": [str(rep) for rep in classes.reps],
        "matrix": matrix.model_dump(mode="json")["entries"],
        **_info_payload(info),
    }
    return CommandReport(
        name=loaded.name,
        text=_verdict_line(loaded.name, info.rendered, config),
        payload=payload,
    )


def cmd_analyze_chartable(path: Path, config: AnalysisConfig) -> CommandReport:
    """Verdict from the character-theoretic bounds of a character table file."""
    table = load_chartable_file(path)
    payload: dict[str, Any] = {
        "command": "analyze-chartable",
        "name": table.name,
        "order": sum(table.class_lengths),
    }
    if not table.has_characters:
        payload["verdict"] = NO_CHARACTERS
        return CommandReport(name=table.name, text=f"{table.name}: {NO_CHARACTERS}", payload=payload)

    data = table.to_data()
    bounds = lower_bounds_vertex_degrees(data)
    info = hamiltonian_cycle_info(data.class_lengths, bounds)
    payload["bounds"] = bounds.model_dump(mode="json")["entries"]
    payload.update(_info_payload(info))
    return CommandReport(
        name=table.name,
        text=_verdict_line(table.name, info.rendered, config),
        payload=payload,
    )


def cmd_oracle(path: Path, config: AnalysisConfig) -> CommandReport:
    """Cross-check the criteria against a search on the explicit generating graph.

    Raises:
        OracleInconsistencyError: If the graph disagrees with the degree matrix,
            or a criterion holds although the search proved there is no cycle
    """
    loaded = build_group(load_group_spec(path), config.group_order_cap)
    group = loaded.group
    if group.order > config.oracle_cap:
        raise OracleCapExceededError(
            f"order cap exceeded: group order {group.order} is above the oracle cap {config.oracle_cap}"
        )
    classes, matrix, info = analyze_loaded_group(loaded, config)
    with analysis_phase(loaded.name, "generating_graph") as phase:
        graph = adjacency_graph(group, config.oracle_cap)
        phase["edges"] = graph.graph.number_of_edges()

    mismatches = check_degree_consistency(graph, classes, matrix)
    if mismatches:
        raise OracleInconsistencyError(
            f"{loaded.name}: vertex degrees disagree with the matrix for classes {mismatches}"
        )

    with analysis_phase(loaded.name, "cycle_search") as phase:
        search = hamiltonian_cycle_search(graph, config.search_budget)
        phase["backtracks"] = search.backtracks
    posa, chvatal = naive_criteria_check(classes.sizes, matrix)
    if search.status == "none" and (posa or chvatal or info.chvatal_closure is not None):
        raise OracleInconsistencyError(
            f"{loaded.name}: a criterion holds but the graph has no Hamiltonian cycle"
        )

    event_log("oracle_result", {"name": loaded.name, "status": search.status})
    if search.status == "witness":
        outcome = f"witness found ({len(graph)} vertices, {search.backtracks} backtracks)"
    elif search.status == "none":
        outcome = f"no Hamiltonian cycle ({search.backtracks} backtracks)"
    else:
        outcome = f"search budget exhausted after {search.backtracks} backtracks"
    text = (
        f"{loaded.name}: {outcome}; posa={str(posa).lower()}, "
        f"chvatal={str(chvatal).lower()}, verdict: {info.rendered}"
    )
    payload = {
        "command": "oracle",
        "name": loaded.name,
        "order": group.order,
        "vertices": len(graph),
        "edges": graph.graph.number_of_edges(),
        "status": search.status,
        "backtracks": search.backtracks,
        "cycle": (
            [str(graph.vertex_elements[v]) for v in search.cycle] if search.cycle else None
        ),
        "posa": posa,
        "chvatal": chvatal,
        "verdict": info.rendered,
    }
    return CommandReport(name=loaded.name, text=text, payload=payload)


def cmd_l2q(path: Path, config: AnalysisConfig) -> CommandReport:
    """The three L2(q) degree checks on a character table file."""
    table = load_chartable_file(path)
    data = table.to_data()
    report = l2q_lemma_check(data)
    if report.field_size is None:
        logger.warning(f"{table.name}: order {data.group_order} is not |L2(q)| for a prime power q")

    def line(label: str, ok: bool, failures: tuple[int, ...]) -> str:
        if ok:
            return f"{table.name}: {label}: pass"
        return f"{table.name}: {label}: fail (classes {', '.join(str(k) for k in failures)})"

    text = "\n".join(
        [
            line("large orders", report.large_orders_ok, report.large_order_failures),
            line("order 2", report.order2_ok, report.order2_failures),
            line("orders 3..5", report.order3to5_ok, report.order3to5_failures),
        ]
    )
    payload = {"command": "l2q", "name": table.name, **report.model_dump(mode="json")}
    payload["all_ok"] = report.all_ok
    return CommandReport(name=table.name, text=text, payload=payload)


def cmd_derive_chartable(path: Path, config: AnalysisConfig) -> CommandReport:
    """Character table data computed from a group file's maximal subgroups.

    Raises:
        LoaderError: If the file lists no maximal subgroups
    """
    loaded = build_group(load_group_spec(path), config.group_order_cap)
    if loaded.maximal_subgroups is None:
        raise LoaderError(f"{loaded.name}: no maximal_subgroups listed")
    data = chartable_from_group(loaded.group, loaded.maximal_subgroups)
    document = CharTableFile.from_data(loaded.name, data).to_document()
    return CommandReport(
        name=loaded.name,
        text=json.dumps(document, indent=2),
        payload={"command": "derive-chartable", **document},
    )


COMMANDS: dict[str, Callable[[Path, AnalysisConfig], CommandReport]] = {
    "analyze-group": cmd_analyze_group,
    "analyze-chartable": cmd_analyze_chartable,
    "oracle": cmd_oracle,
    "l2q": cmd_l2q,
    "derive-chartable": cmd_derive_chartable,
}

# First match wins, so subclasses come before their bases.
_EXIT_CODES: tuple[tuple[type[Exception], int], ...] = (
    (LoaderError, 2),
    (OrderCapExceededError, 3),
    (OracleCapExceededError, 3),
    (OracleInconsistencyError, 5),
    (PermGroupError, 4),
    (GraphError, 4),
    (CharacterError, 2),
    (CriterionError, 2),
)


def exit_code_for(error: Exception) -> int:
    """Process exit code for an error raised by a command."""
    for kind, code in _EXIT_CODES:
        if isinstance(error, kind):
            return code
    return 1


def run_one(command: str, path: str, config: AnalysisConfig) -> Outcome:
    """Run a command on one file, capturing any error."""
    try:
        report = COMMANDS[command](Path(path), config)
        return Outcome(path=path, report=report)
    except Exception as e:
        code = exit_code_for(e)
        if code == 1:
            logger.exception(f"Unexpected error while processing {path}")
        return Outcome(path=path, exit_code=code, error=str(e))


def run_batch(command: str, paths: list[str], config: AnalysisConfig) -> list[Outcome]:
    """Run a command on several files, in argument order.

    With ``config.jobs > 1`` the files are processed in a process pool.
    """
    if config.jobs <= 1 or len(paths) <= 1:
        return [run_one(command, path, config) for path in paths]

    logger.info(f"Processing {len(paths)} files with {config.jobs} workers")
    with ProcessPoolExecutor(
        max_workers=config.jobs, initializer=setup_logging, initargs=(config.log_level,)
    ) as pool:
        futures = [pool.submit(run_one, command, path, config) for path in paths]
        return [future.result() for future in futures]
