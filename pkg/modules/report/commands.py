# The magdiv commands: each reads its inputs, computes, and returns a RunReport

# Imports
import json
import logging
import math
from enum import StrEnum
from pathlib import Path
from typing import Sequence

import numpy as np

from modules.diversity.certificate import verify_certificate
from modules.diversity.exclusion import exclusion_certificate, exclusion_inequality
from modules.diversity.oracle import brute_force
from modules.diversity.peeling import peel
from modules.diversity.probe import probe_euclidean
from modules.diversity.profile import InvalidGrid, diversity_profile, scale_grid
from modules.magnitude.magnitude import (
    continuum_magnitude,
    magnitude,
    simplicial_weight,
    tree_magnitude,
    tree_weights,
)
from modules.metric.finite_metric import FiniteMetric, Measure
from modules.metric.kernel import bilinear_form, build_kernel
from modules.metric.metric_file import load_metric
from modules.misc.config import Config
from modules.misc.converter import format_float
from modules.report.report import RunReport, csv_table, digest_bytes, digest_file
from modules.tree.generator import LengthLaw, random_tree
from modules.tree.tree_file import load_tree, serialize_tree
from modules.tree.weighted_tree import WeightedTree, scale, subdivide, total_length, tree_metric

# Constants
PROFILE_COLUMNS: tuple[str, ...] = ("t", "diversity", "support_size", "certified", "magnitude", "log_slope")
CONVERGE_COLUMNS: tuple[str, ...] = ("k", "magnitude", "target", "gap", "order", "atom_gap")

# Set up logging
logger = logging.getLogger(__name__)


class Command(StrEnum):
    """The subcommands of the magdiv CLI."""

    MAGNITUDE = "magnitude"
    DIVERSITY = "diversity"
    ORACLE = "oracle"
    PROFILE = "profile"
    CONVERGE = "converge"
    GEN = "gen"
    CHECK = "check"
    PROBE = "probe"


class InputKind(StrEnum):
    """Input file formats."""

    TREE = "tree"
    MATRIX = "matrix"


def load_space(path: Path, kind: InputKind, config: Config, check_triangle: bool = True) -> tuple[FiniteMetric, WeightedTree | None]:
    """Returns the metric space stored in the file, and the tree it came from for tree inputs."""

    match kind:
        case InputKind.TREE:
            tree = load_tree(path)
            return tree_metric(tree), tree
        case InputKind.MATRIX:
            return load_metric(path, check_triangle=check_triangle, tolerances=config.tolerances), None


def _dense_residual(m: FiniteMetric, weights: np.ndarray) -> float:
    return float(np.max(np.abs(build_kernel(m).z @ weights - 1.0)))


def cmd_magnitude(path: Path, kind: InputKind = InputKind.TREE, config: Config = Config(), check_triangle: bool = True) -> RunReport:
    """Magnitude and weights: closed form for trees, dense solve for distance matrices."""

    m, tree = load_space(path, kind, config, check_triangle)
    if tree is not None:
        weights = tree_weights(tree)
        value = tree_magnitude(tree)
        extra = {"edges": len(tree.edges), "total_length": total_length(tree)}
    else:
        weights = magnitude(m, config.tolerances)
        value = weights.magnitude
        extra = {}

    residual = _dense_residual(m, weights.values)
    logger.info(f"Magnitude of {m.size} point(s): {value!r} (dense residual {residual:.3g})")
    results = {"points": m.size, "magnitude": value, "weights": weights.as_mapping(), "residual": residual, **extra}
    return RunReport(Command.MAGNITUDE.value, digest_file(path), results)


def cmd_diversity(
    path: Path,
    kind: InputKind = InputKind.TREE,
    scale_factor: float = 1.0,
    config: Config = Config(),
    check_triangle: bool = True,
) -> RunReport:
    """The diversity-maximizing measure of (X, t d) by peeling, with its certificate."""

    m, tree = load_space(path, kind, config, check_triangle)
    if tree is not None and scale_factor != 1.0:
        tree = scale(tree, scale_factor)
        m = tree_metric(tree)
    elif scale_factor != 1.0:
        m = m.scaled(scale_factor)

    solution = peel(m, config.tolerances)
    logger.info(f"Diversity of {m.size} point(s) at scale {scale_factor}: {solution.diversity!r} (certified: {solution.certified})")
    results = {"points": m.size, "scale": scale_factor, **dict(solution)}

    if tree is not None:
        results["excluded_by_inequality"] = [v for v in tree.vertices if exclusion_inequality(tree, v, config.tolerances)]
        results["excluded_by_certificate"] = [
            v for v in tree.vertices if exclusion_certificate(tree, v, config.tolerances) is not None
        ]
    return RunReport(Command.DIVERSITY.value, digest_file(path), results)


def cmd_oracle(path: Path, kind: InputKind = InputKind.TREE, config: Config = Config(), check_triangle: bool = True) -> RunReport:
    """Maximum diversity by exhaustive subset enumeration."""

    m, _ = load_space(path, kind, config, check_triangle)
    solution = brute_force(m, config.tolerances, config.oracle, config.parallel.workers)
    logger.info(f"Oracle diversity of {m.size} point(s): {solution.diversity!r}")
    results = {"points": m.size, "winning_subset": list(solution.active_set), **dict(solution)}
    return RunReport(Command.ORACLE.value, digest_file(path), results)


def cmd_profile(
    path: Path,
    kind: InputKind = InputKind.TREE,
    tmin: float = 1e-3,
    tmax: float = 1e3,
    steps: int = 25,
    log_spacing: bool = True,
    csv_path: Path | None = None,
    config: Config = Config(),
    check_triangle: bool = True,
) -> RunReport:
    """The maximum diversity function sampled on a grid of scales."""

    m, _ = load_space(path, kind, config, check_triangle)
    grid = scale_grid(tmin, tmax, steps, log_spacing)
    profile = [dict(point) for point in diversity_profile(m, grid, config.tolerances, config.parallel.workers)]
    results = {
        "points": m.size,
        "grid": {"tmin": tmin, "tmax": tmax, "steps": steps, "log_spacing": log_spacing},
        "profile": profile,
    }
    report = RunReport(Command.PROFILE.value, digest_file(path), results)
    if csv_path is not None:
        report.outputs[csv_path] = csv_table(PROFILE_COLUMNS, _csv_rows(profile))
    return report


def convergence_table(tree: WeightedTree, k_list: Sequence[int]) -> list[dict]:
    """
    Returns, per subdivision factor k, the magnitude of the subdivided tree, the continuum value 1 + L/2, the gap,
    the observed order log(gap_prev / gap) / log(k / k_prev), and the largest distance between the weights of the
    original vertices and their continuum atoms 1 - deg / 2.
    """

    if not k_list or any(k < 1 for k in k_list) or any(b <= a for a, b in zip(k_list, k_list[1:])):
        raise InvalidGrid("subdivision factors must be positive and strictly increasing")

    target = continuum_magnitude(total_length(tree))
    atoms = simplicial_weight(tree).atoms
    rows = []
    for k in k_list:
        subdivided = subdivide(tree, k)
        value = tree_magnitude(subdivided)
        weights = tree_weights(subdivided).as_mapping()
        gap = target - value
        order = None
        if rows and rows[-1]["gap"] > 0 and gap > 0:
            order = math.log(rows[-1]["gap"] / gap) / math.log(k / rows[-1]["k"])
        atom_gap = max(abs(weights[vertex] - atom) for vertex, atom in atoms.items())
        rows.append({"k": k, "magnitude": value, "target": target, "gap": gap, "order": order, "atom_gap": atom_gap})
    return rows


def cmd_converge(path: Path, k_list: Sequence[int] = (1, 2, 4, 8, 16, 32, 64), csv_path: Path | None = None) -> RunReport:
    """Magnitude of ever finer subdivisions against the continuum value 1 + L/2."""

    tree = load_tree(path)
    rows = convergence_table(tree, list(k_list))
    logger.info(f"Converge: final gap {rows[-1]['gap']:.3g} at k = {rows[-1]['k']}")
    results = {"total_length": total_length(tree), "continuum_magnitude": rows[0]["target"], "table": rows}
    report = RunReport(Command.CONVERGE.value, digest_file(path), results)
    if csv_path is not None:
        report.outputs[csv_path] = csv_table(CONVERGE_COLUMNS, _csv_rows(rows))
    return report


def cmd_gen(n: int, length_law: LengthLaw, seed: int, out: Path) -> RunReport:
    """Writes a random tree file."""

    text = serialize_tree(random_tree(n, length_law, seed))
    digest = digest_bytes(text.encode())
    results = {"n": n, "edges": max(n - 1, 0), "length_law": dict(length_law), "seed": seed, "out": str(out), "digest": digest}
    report = RunReport(Command.GEN.value, digest, results)
    report.outputs[out] = text
    return report


def cmd_check(
    path: Path,
    measure_path: Path,
    kind: InputKind = InputKind.TREE,
    config: Config = Config(),
    check_triangle: bool = True,
) -> RunReport:
    """Evaluates the optimality certificate of a user-supplied measure {label: mass}."""

    m, _ = load_space(path, kind, config, check_triangle)
    with open(measure_path, "r") as file:
        masses = json.load(file)
    if not isinstance(masses, dict):
        raise ValueError("A measure file must hold a JSON object {label: mass}")

    mu = Measure.from_mapping(m.labels, masses)
    if not mu.total > 0.0:
        raise ValueError(f"A measure must have positive total mass, got {mu.total}")
    probability = mu.is_probability(tol=1e-9)
    certificate = verify_certificate(m, mu, config.tolerances)
    results = {
        "points": m.size,
        "probability": probability,
        "diversity": 1.0 / bilinear_form(build_kernel(m), mu, mu),
        "support": list(mu.support(config.tolerances.positivity)),
        "certificate": dict(certificate),
        "certified": certificate.passed and probability,
    }
    return RunReport(Command.CHECK.value, digest_file(path), results)


def cmd_probe(
    count: int = 100,
    min_points: int = 4,
    max_points: int = 12,
    seed: int = 0,
    box: float = 5.0,
    counterexamples_path: Path | None = None,
    config: Config = Config(),
) -> RunReport:
    """Peeling against the oracle on random planar point sets."""

    report = probe_euclidean(count, min_points, max_points, seed, box, config.tolerances, config.oracle)
    results = {"seed": seed, "box": box, "min_points": min_points, "max_points": max_points, **dict(report)}
    run = RunReport(Command.PROBE.value, None, results)
    if counterexamples_path is not None and report.counterexamples:
        run.outputs[counterexamples_path] = json.dumps(
            [dict(counterexample) for counterexample in report.counterexamples], indent=2, sort_keys=True
        ) + "\n"
    return run


def _csv_rows(rows: list[dict]) -> list[dict]:
    return [{key: format_float(value) if isinstance(value, float) else value for key, value in row.items()} for row in rows]
