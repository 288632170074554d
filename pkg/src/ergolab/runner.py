"""
Experiment runner: builds the system, dispatches on the experiment kind and writes the JSON
report, its sidecar and the CSV tables.

CSV columns per experiment:

- entropy: ``n, epsilon, method, count, log_count, slope`` (``epsilon`` is ``words`` or
  ``laps`` for exact counts)
- trace: ``block, start, length, gap, mistakes, allowed``
- trace-verify: ``block, stored, recomputed, allowed, ok`` (certificates) or
  ``xi, other, case, block, tau, offset, offset_in_range`` (families)
- app, sapp: ``delta1, delta2, epsilon, n, outcome, strategies, candidates, exhaustive, reused_from``
- spec: ``epsilon, lengths, spacing``
- unique-ergodicity: ``start, n, function, average``
- cluster: ``i, j, distance, linked``
- interval-classify: ``quantity, value``
- family: ``xi, other, case, block, tau, offset, offset_in_range``
- dichotomy: ``quantity, value``
"""

import json
import logging
import math
import pathlib
import re
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from pydantic import ValidationError

from .config import ExperimentConfig, config_digest
from .config.models import FamilyParams
from .dichotomy import dichotomy, dichotomy_starts
from .entropy import (
    FamilyModel,
    SeparatedFamily,
    build_separated_family,
    entropy_estimate,
    family_cardinality_check,
    family_from_model,
    family_to_model,
    four_point_selector,
    lemma_case,
    verify_family_members,
    verify_pairwise_separation,
)
from .errors import (
    ConfigError,
    ErgolabError,
    HorizonTooShort,
    InvalidParams,
    InvalidSystem,
    ModulusTooLarge,
    SeparationFailure,
    UnknownSystem,
    UnsupportedSystem,
)
from .interval import ClassifierSettings, classify_zero_entropy_app
from .measures import detect_measure_multiplicity, unique_ergodicity_test
from .properties import CellKey, PropertyReport, test_app, test_periodic_exact_spec, test_strict_app
from .reports import dump_json, package_version, to_jsonable, write_csv, write_report
from .systems import (
    DynamicalSystem,
    TestFunctionFamily,
    build_system,
    decode_point,
    default_family,
    encode_point,
    power_system,
    resolve_system,
)
from .tracing import (
    CertificateModel,
    TracingCertificate,
    certificate_from_model,
    certificate_to_model,
    find_modulus,
    lift_power_tracing,
    search_tracing,
    verify_certificate,
)

logger = logging.getLogger(__name__)

Table = tuple[list[str], list[list[Any]]]


@dataclass
class Outcome:
    """What an experiment hands back to :func:`run` for writing."""

    payload: dict[str, Any]
    tables: dict[str, Table] = field(default_factory=dict)
    artifacts: dict[str, dict[str, Any]] = field(default_factory=dict)
    system: str = ""


@dataclass(frozen=True)
class RunResult:
    report: pathlib.Path
    tables: list[pathlib.Path]
    artifacts: list[pathlib.Path]
    payload: dict[str, Any]


def _file_stem(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text).strip("_") or "system"


def _system(config: ExperimentConfig) -> DynamicalSystem:
    assert config.system is not None
    try:
        return build_system(resolve_system(config.system))
    except (UnknownSystem, InvalidSystem) as e:
        raise ConfigError("system", str(e)) from e
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError("system." + ".".join(str(part) for part in first["loc"]), first["msg"]) from e


def _family(sys: DynamicalSystem, params: FamilyParams) -> TestFunctionFamily:
    return default_family(sys, params.bumps, params.radius, params.harmonics)


def _decode_all(sys: DynamicalSystem, values: list[Any], section: str) -> list[Any]:
    try:
        return [decode_point(sys, v) for v in values]
    except (ErgolabError, ValueError) as e:
        raise ConfigError(section, str(e)) from e


def _starts(sys: DynamicalSystem, count: int, seed: int, starts: list[Any] | None, section: str) -> list[Any]:
    try:
        return dichotomy_starts(sys, count, seed, starts)
    except (ErgolabError, ValueError) as e:
        raise ConfigError(section, str(e)) from e


def _certificate_rows(cert: TracingCertificate) -> list[list[Any]]:
    schedule = cert.instance.schedule
    gaps = list(schedule.gaps) + [""] * (len(schedule) - len(schedule.gaps))
    return [
        [k + 1, start, length, gaps[k], count, cert.instance.allowed_mistakes(k + 1)]
        for k, (start, length, count) in enumerate(zip(schedule.starts, schedule.lengths, cert.mistakes, strict=True))
    ]


CERTIFICATE_COLUMNS = ["block", "start", "length", "gap", "mistakes", "allowed"]
CASE_COLUMNS = ["xi", "other", "case", "block", "tau", "offset", "offset_in_range"]


def _word(xi: tuple[int, ...]) -> str:
    return "".join(str(s) for s in xi)


def _entropy(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    p = config.entropy
    estimate = entropy_estimate(sys, p.epsilons, p.n_values, p.method, p.set_budget, config.seed, p.lap_resolution)
    rows = [
        [n, eps, estimate.methods[eps], round(math.exp(log)), log, estimate.slopes[eps]]
        for eps in estimate.epsilons
        for n, log in zip(estimate.n_values, estimate.log_counts[eps], strict=True)
    ]
    for label, logs, slope in (
        ("words", estimate.word_log_counts, estimate.word_slope),
        ("laps", estimate.lap_log_counts, estimate.lap_slope),
    ):
        if logs is not None:
            rows += [[n, label, "exact", round(math.exp(log)), log, slope] for n, log in zip(estimate.n_values, logs, strict=True)]
    payload = to_jsonable(estimate, sys)
    payload["estimate"] = estimate.estimate
    payload["separated_estimate"] = estimate.separated_estimate
    return Outcome(payload, {"entropy": (["n", "epsilon", "method", "count", "log_count", "slope"], rows)}, system=sys.name)


def _trace(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    p = config.trace
    targets = _decode_all(sys, p.targets, "trace.targets") if p.targets else list(sys.landmarks())
    options = {"strategy": p.strategy, "gap_mode": p.gap_mode, "grid_resolution": p.grid_resolution, "seed": config.seed}
    payload: dict[str, Any] = {"power": p.power, "n": p.n, "blocks": p.blocks}

    if p.power == 1:
        outcome = search_tracing(sys, targets, p.n, p.delta1, p.delta2, p.epsilon, p.blocks, config.budget, **options)
        cert, cert_sys = outcome.certificate, sys
    else:
        power_sys = power_system(sys, p.power)
        block = math.ceil(p.n / p.power)
        remainder = p.n % p.power
        gamma = p.gamma if p.gamma is not None else find_modulus(sys, p.power, p.epsilon, seed=config.seed)
        payload.update({"block": block, "remainder": remainder, "gamma": gamma})
        if gamma is None:
            raise ModulusTooLarge(f"No modulus on the grid keeps {p.power} iterates within {p.epsilon}")
        outcome = search_tracing(
            power_sys, targets, block, p.delta1, p.delta2 / 2, gamma, p.blocks, config.budget, **options,
        )
        payload["power_certificate"] = to_jsonable(outcome.certificate, power_sys)
        cert, cert_sys = None, sys
        if outcome.certificate is not None:
            try:
                cert = lift_power_tracing(
                    sys, p.power, outcome.certificate, gamma, remainder, p.epsilon, p.delta1, seed=config.seed,
                )
            except (HorizonTooShort, InvalidParams, ModulusTooLarge) as e:
                payload["lift_error"] = str(e)
                logger.warning("Lift failed: %s", e)

    payload.update({
        "strategy": outcome.strategy,
        "candidates": outcome.candidates,
        "exhausted": outcome.exhausted,
        "exhaustive": outcome.exhaustive,
        "found": cert is not None,
        "outcome": "witness-found" if cert is not None else "no-witness-at-budget",
        "certificate": to_jsonable(cert, cert_sys),
    })
    tables: dict[str, Table] = {}
    artifacts: dict[str, dict[str, Any]] = {}
    if cert is not None:
        tables["blocks"] = (CERTIFICATE_COLUMNS, _certificate_rows(cert))
        artifacts["certificate"] = certificate_to_model(cert_sys, cert).model_dump(mode="json")
    return Outcome(payload, tables, artifacts, sys.name)


def _read_artifact(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as file:
            data = json.load(file)
    except FileNotFoundError as e:
        raise ConfigError("certificate", f"File not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError("certificate", f"Could not parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("certificate", f"{path} does not hold a JSON object")
    return data


def _trace_verify(config: ExperimentConfig) -> Outcome:
    assert config.certificate is not None
    data = _read_artifact(config.certificate)
    try:
        if "members" in data:
            return _verify_family(family_from_model(FamilyModel.model_validate(data)))
        sys, cert = certificate_from_model(CertificateModel.model_validate(data))
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError("certificate." + ".".join(str(part) for part in first["loc"]), first["msg"]) from e
    check = verify_certificate(sys, cert)
    verdict = "certificate valid" if check.valid else "certificate invalid"
    logger.info("%s: %s", config.certificate, verdict)
    payload = {
        "kind": "certificate",
        "verdict": verdict,
        "valid": check.valid,
        "horizon_ok": check.horizon_ok,
        "failing_blocks": check.failing_blocks,
        "blocks": to_jsonable(check.blocks),
    }
    rows = [[b.block, b.stored, b.recomputed, b.allowed, b.ok] for b in check.blocks]
    return Outcome(payload, {"blocks": (["block", "stored", "recomputed", "allowed", "ok"], rows)}, system=sys.name)


def _case_rows(family: SeparatedFamily) -> list[list[Any]]:
    words = sorted(family.members)
    rows = []
    for i, xi in enumerate(words):
        for other in words[i + 1:]:
            case = lemma_case(family, xi, other)
            rows.append([
                _word(xi), _word(other), case.case, case.block, case.tau, case.offset,
                case.offset_in_range(family.m, family.delta) if case.case == 2 else "",
            ])
    return rows


def _family_summary(family: SeparatedFamily) -> dict[str, Any]:
    failing = verify_family_members(family)
    summary: dict[str, Any] = {
        "members": len(family),
        "complete": family_cardinality_check(family),
        "failing_members": [_word(xi) for xi in failing],
        "bound": family.bound,
        "m": family.m,
        "delta": family.delta,
        "depth": family.depth,
        "gamma": family.gamma,
        "gap_policy": family.gap_policy,
        "base_points": [encode_point(y) for y in family.base_points],
    }
    try:
        result = verify_pairwise_separation(family)
    except SeparationFailure as e:
        summary.update({"separated": False, "separation_failure": str(e)})
    else:
        summary.update({
            "separated": result.ok,
            "pairs": result.pairs,
            "cases": to_jsonable(result.cases),
            "min_achieved": result.min_achieved,
        })
    summary["verdict"] = "family valid" if summary["separated"] and not failing and summary["complete"] else "family invalid"
    return summary


def _verify_family(family: SeparatedFamily) -> Outcome:
    payload = {"kind": "family", **_family_summary(family)}
    payload["valid"] = payload["verdict"] == "family valid"
    return Outcome(payload, {"cases": (CASE_COLUMNS, _case_rows(family))}, system=family.system.name)


def _family_build(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    p = config.family
    if p.base_points:
        ys = _decode_all(sys, p.base_points, "family.base_points")
    else:
        candidates = list(sys.landmarks()) + sys.sample_points(np.random.default_rng(config.seed), p.candidates)
        found = four_point_selector(sys, candidates, p.m, p.gamma)
        if found is None:
            raise InvalidParams(f"No four candidates on '{sys.name}' are {4 * p.gamma:g}-separated over {p.m} steps")
        ys = list(found)
    family = build_separated_family(sys, ys, p.m, p.delta, p.depth, p.gamma, config.budget, p.gap_policy, seed=config.seed)
    payload = {"kind": "family", **_family_summary(family)}
    model = family_to_model(family).model_dump(mode="json")
    return Outcome(payload, {"cases": (CASE_COLUMNS, _case_rows(family))}, {"family": model}, sys.name)


def _cell_label(key: CellKey | None) -> str:
    if key is None:
        return ""
    return f"{key.delta1}/{key.delta2}/{key.epsilon}/{key.n}"


def _property_outcome(sys: DynamicalSystem, report: PropertyReport) -> Outcome:
    payload = to_jsonable(report, sys)
    payload.update({"passed": report.passed, "trend": report.trend, "blocks": report.grid.blocks})
    rows = [
        [
            c.key.delta1, c.key.delta2, c.key.epsilon, c.key.n, c.outcome, "+".join(c.strategies),
            c.candidates, c.exhaustive, _cell_label(c.reused_from),
        ]
        for c in report.cells
    ]
    columns = ["delta1", "delta2", "epsilon", "n", "outcome", "strategies", "candidates", "exhaustive", "reused_from"]
    return Outcome(payload, {"cells": (columns, rows)}, system=sys.name)


def _app(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    p = config.app
    grid = p.grid.model_copy(update={"seed": config.seed})
    tester = test_strict_app if config.experiment == "sapp" else test_app
    report = tester(sys, grid, config.budget, gap_mode=p.gap_mode, grid_resolution=p.grid_resolution)
    return _property_outcome(sys, report)


def _spec(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    p = config.spec
    try:
        report = test_periodic_exact_spec(sys, p.profiles, p.epsilons, p.max_spacing, p.period_bound)
    except UnsupportedSystem as e:
        logger.info("Periodic specification unavailable on '%s': %s", sys.name, e)
        return Outcome({"passed": False, "unsupported": str(e)}, system=sys.name)
    payload = to_jsonable(report, sys)
    payload["passed"] = report.passed
    rows = [[c.epsilon, "-".join(map(str, c.lengths)), "" if c.spacing is None else c.spacing] for c in report.cells]
    return Outcome(payload, {"spacings": (["epsilon", "lengths", "spacing"], rows)}, system=sys.name)


def _unique_ergodicity(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    p = config.unique_ergodicity
    starts = _starts(sys, p.start_count, config.seed, p.starts, "unique_ergodicity.starts")
    report = unique_ergodicity_test(sys, _family(sys, p.functions), starts, p.n_values, p.threshold, p.factor)
    payload = to_jsonable(report, sys)
    payload.update({"verdict": report.verdict, "starts": [encode_point(x) for x in starts]})
    payload.pop("rows")
    rows = [[r.start, r.n, r.function, r.average] for r in report.rows]
    return Outcome(payload, {"averages": (["start", "n", "function", "average"], rows)}, system=sys.name)


def _cluster(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    p = config.cluster
    starts = _starts(sys, p.start_count, config.seed, p.starts, "cluster.starts")
    clusters = detect_measure_multiplicity(sys, [(x, p.length) for x in starts], p.eta, _family(sys, p.functions))
    payload = {
        "clusters": clusters.clusters,
        "count": len(clusters.clusters),
        "multiple": clusters.multiple,
        "eta": clusters.eta,
        "length": p.length,
        "starts": [encode_point(x) for x in starts],
        "distances": to_jsonable(clusters.distances),
    }
    size = len(starts)
    rows = [
        [i, j, float(clusters.distances[i, j]), bool(clusters.distances[i, j] <= 2 * p.eta)]
        for i in range(size) for j in range(i + 1, size)
    ]
    return Outcome(payload, {"distances": (["i", "j", "distance", "linked"], rows)}, system=sys.name)


def _interval_classify(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    record = classify_zero_entropy_app(sys, ClassifierSettings(**config.interval.model_dump()))
    payload = to_jsonable(record, sys)
    payload.update({"verdict": record.verdict, "app_passed": record.app_passed})
    rows = [
        ["fixed_points", len(record.fixed_points)],
        ["attraction", record.attraction.verdict if record.attraction else ""],
        ["entropy_slope", record.entropy_slope],
        ["app_threshold", "" if record.app_trace is None else record.app_trace.threshold],
        ["clusters", len(record.clusters)],
        ["fnxgex_violations", "" if record.fnxgex is None else len(record.fnxgex.violations)],
        ["verdict", record.verdict],
    ]
    return Outcome(payload, {"summary": (["quantity", "value"], rows)}, system=sys.name)


def _dichotomy(config: ExperimentConfig) -> Outcome:
    sys = _system(config)
    ue = config.dichotomy.unique_ergodicity
    _starts(sys, ue.start_count, config.seed, ue.starts, "dichotomy.unique_ergodicity.starts")
    record = dichotomy(sys, config.dichotomy, config.budget, config.seed)
    payload = to_jsonable(record, sys)
    payload["unique_ergodicity"].pop("rows")
    payload["unique_ergodicity"]["verdict"] = record.unique_ergodicity.verdict
    payload["app"].update({"passed": record.app.passed, "trend": record.app.trend})
    payload["entropy"]["estimate"] = record.entropy.estimate
    rows = [
        ["app_passed", record.app.passed],
        ["entropy_estimate", record.entropy.estimate],
        ["zero_entropy", record.zero_entropy],
        ["spread", record.unique_ergodicity.spreads[-1]],
        ["clusters", len(record.clusters.clusters)],
        ["uniquely_ergodic", record.uniquely_ergodic],
        ["verdict", record.verdict],
    ]
    rows += [[f"threshold.{k}", v] for k, v in sorted(record.thresholds.items())]
    return Outcome(payload, {"summary": (["quantity", "value"], rows)}, system=sys.name)


EXPERIMENTS: dict[str, Callable[[ExperimentConfig], Outcome]] = {
    "entropy": _entropy,
    "trace": _trace,
    "trace-verify": _trace_verify,
    "app": _app,
    "sapp": _app,
    "spec": _spec,
    "unique-ergodicity": _unique_ergodicity,
    "cluster": _cluster,
    "interval-classify": _interval_classify,
    "family": _family_build,
    "dichotomy": _dichotomy,
}


def provenance(config: ExperimentConfig) -> dict[str, Any]:
    """Header embedded in every report."""
    return {
        "config_sha256": config_digest(config),
        "experiment": config.experiment,
        "seed": config.seed,
        "version": package_version(),
    }


def run(config: ExperimentConfig, out_dir: str | pathlib.Path | None = None) -> RunResult:
    """
    Execute the configured experiment and write its report files.

    The report goes to ``<out>/<stem>.json`` with timing in ``<stem>.meta.json``; CSV tables
    to ``<stem>.<table>.csv``; certificates and families to ``<stem>.<artifact>.json``.

    Raises:
        ConfigError: If the configuration cannot be executed as given.
    """
    started = time.time()
    logger.info("Running '%s' (seed %d)", config.experiment, config.seed)
    outcome = EXPERIMENTS[config.experiment](config)
    directory = pathlib.Path(out_dir if out_dir is not None else config.output.dir)
    stem = config.output.name or _file_stem(f"{config.experiment}-{outcome.system}")

    artifacts = []
    for name, data in outcome.artifacts.items():
        path = directory / f"{stem}.{name}.json"
        directory.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_json(data), encoding="utf-8")
        artifacts.append(path)
    tables = []
    if config.output.csv:
        for name, (columns, rows) in outcome.tables.items():
            tables.append(write_csv(directory / f"{stem}.{name}.csv", columns, rows))

    payload = {"system": outcome.system, **outcome.payload}
    report = write_report(directory / f"{stem}.json", payload, provenance(config), started)
    return RunResult(report, tables, artifacts, payload)
