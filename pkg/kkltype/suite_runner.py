"""
Suites: a list of functions crossed with a list of evaluators, described by a JSON file

    {
      "format_version": 1,
      "name": "appendix",
      "seed": 7,
      "space": {"d": 1, "q": 2},
      "functions": [{"zoo": "parity:n=2"}, {"random": {"n": 6}}, {"file": "f.json"}],
      "evaluators": ["poincare", {"name": "hypercontractivity", "params": {"p": 1.3333333333333333, "q": 2}}],
      "quadrature": {"rel_tol": 1e-9},
      "format": "rows"
    }

Reports come out in function order times evaluator order, however many threads run them.
"""
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from .errors import KKLTypeError, SuiteConfigError
from .inequality_core import EvaluatorRegistry, default_registry
from .log_config import get_logger
from .normed import NormedSpace
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from .reports import InequalityReport
from .sources import FunctionSource, RandomSource, ZooSource, source_from_dict
from .zoo import parse_zoo_spec

logger = get_logger(__name__)

SUITE_FORMAT_VERSION = 1
OUTPUT_FORMATS = ("rows", "structured")

_SPACE_SCHEMA = {
    "type": "object",
    "properties": {
        "d": {"type": "integer", "minimum": 1},
        "q": {"anyOf": [{"type": "number", "minimum": 1}, {"enum": ["inf"]}]},
        "type2_bound": {"type": "number", "minimum": 1},
        "typep_bounds": {"type": "object", "additionalProperties": {"type": "number", "minimum": 1}},
    },
    "additionalProperties": False,
}

SUITE_SCHEMA = {
    "type": "object",
    "required": ["format_version", "functions", "evaluators"],
    "additionalProperties": False,
    "properties": {
        "format_version": {"const": SUITE_FORMAT_VERSION},
        "name": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "space": _SPACE_SCHEMA,
        "functions": {
            "type": "array",
            "items": {
                "type": "object",
                "oneOf": [
                    {"required": ["file"]},
                    {"required": ["zoo"]},
                    {"required": ["random"]},
                ],
                "properties": {
                    "file": {"type": "string"},
                    "zoo": {"type": "string"},
                    "seed": {"type": "integer", "minimum": 0},
                    "random": {
                        "type": "object",
                        "required": ["n"],
                        "properties": {
                            "n": {"type": "integer", "minimum": 1},
                            "d": {"type": "integer", "minimum": 1},
                            "seed": {"type": "integer", "minimum": 0},
                            "model": {"enum": ["cube", "sphere"]},
                        },
                        "additionalProperties": False,
                    },
                    "space": _SPACE_SCHEMA,
                },
                "additionalProperties": False,
            },
        },
        "evaluators": {
            "type": "array",
            "items": {
                "anyOf": [
                    {"type": "string"},
                    {
                        "type": "object",
                        "required": ["name"],
                        "properties": {"name": {"type": "string"}, "params": {"type": "object"}},
                        "additionalProperties": False,
                    },
                ]
            },
        },
        "quadrature": {
            "type": "object",
            "properties": {
                "rel_tol": {"type": "number", "exclusiveMinimum": 0},
                "abs_tol": {"type": "number", "minimum": 0},
                "limit": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "format": {"enum": list(OUTPUT_FORMATS)},
    },
}

_VALIDATOR = Draft7Validator(SUITE_SCHEMA)


class SuiteStatus(Enum):
    OK = "OK"
    FAILED = "FAILED"                    # no (function, evaluator) pair could be evaluated
    PARTIAL_SUCCESS = "PARTIAL_SUCCESS"  # some pairs errored, the rest produced reports
    NO_OP = "NO_OP"                      # nothing to evaluate


class EvaluatorSpec(NamedTuple):
    name: str
    params: Dict[str, Any]


class FunctionEntry(NamedTuple):
    source: FunctionSource
    space: Optional[NormedSpace]


@dataclass
class SuiteConfig:
    name: str
    functions: List[FunctionEntry]
    evaluators: List[EvaluatorSpec]
    space: Optional[NormedSpace] = None
    quad: QuadratureSpec = DEFAULT_QUADRATURE
    output_format: str = "rows"
    seed: Optional[int] = None

    def check(self, registry: Optional[EvaluatorRegistry] = None) -> None:
        """Every evaluator must exist and every randomized source must carry a seed."""
        registry = registry or default_registry()
        unknown = [spec.name for spec in self.evaluators if registry.get_evaluator(spec.name) is None]
        if unknown:
            raise SuiteConfigError(f"Unknown evaluator(s) {unknown}. Known: {', '.join(registry.names())}.")
        if self.output_format not in OUTPUT_FORMATS:
            raise SuiteConfigError(f"Unknown output format '{self.output_format}'.")
        for entry in self.functions:
            source = entry.source
            if isinstance(source, RandomSource) and source.seed is None:
                raise SuiteConfigError(f"Random source {source.label} needs a seed.")
            if isinstance(source, ZooSource):
                try:
                    spec = parse_zoo_spec(source.spec)
                except KKLTypeError as e:
                    raise SuiteConfigError(str(e)) from None
                if spec.name.startswith("random") and "seed" not in spec.params and source.seed is None:
                    raise SuiteConfigError(f"Random zoo function '{source.spec}' needs a seed.")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], base_dir: str = ".",
                  seed: Optional[int] = None) -> "SuiteConfig":
        """Builds and checks a suite; `seed` overrides the suite's own default seed."""
        error = best_match(_VALIDATOR.iter_errors(data))
        if error is not None:
            where = "/".join(str(p) for p in error.absolute_path) or "<root>"
            raise SuiteConfigError(f"Invalid suite at {where}: {error.message}")
        seed = data.get("seed") if seed is None else seed
        try:
            space = NormedSpace.from_dict(data["space"]) if "space" in data else None
            functions = []
            for item in data["functions"]:
                item = dict(item)
                if "file" in item and not os.path.isabs(item["file"]):
                    item["file"] = os.path.join(base_dir, item["file"])
                entry_space = NormedSpace.from_dict(item["space"]) if "space" in item else None
                functions.append(FunctionEntry(source_from_dict(item, default_seed=seed), entry_space))
            quad = QuadratureSpec.from_dict(data.get("quadrature"))
        except KKLTypeError as e:
            raise SuiteConfigError(f"Invalid suite: {e}") from None
        evaluators = [EvaluatorSpec(e, {}) if isinstance(e, str) else EvaluatorSpec(e["name"], dict(e.get("params", {})))
                      for e in data["evaluators"]]
        config = cls(
            name=data.get("name", "suite"),
            functions=functions,
            evaluators=evaluators,
            space=space,
            quad=quad,
            output_format=data.get("format", "rows"),
            seed=seed,
        )
        config.check()
        return config


def load_suite_config(path: str, seed: Optional[int] = None) -> SuiteConfig:
    """Reads and validates a suite file; relative function paths resolve against its directory."""
    try:
        with open(path) as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise SuiteConfigError(f"Suite file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise SuiteConfigError(f"Suite file {path} is not valid JSON (line {e.lineno}): {e.msg}") from None
    return SuiteConfig.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)), seed=seed)


class SuiteResult(NamedTuple):
    status: SuiteStatus
    reports: List[InequalityReport]
    actions_log: List[str]


def _resolve_space(entry: FunctionEntry, config: SuiteConfig, d: int) -> NormedSpace:
    for candidate in (entry.space, entry.source.space(), config.space):
        if candidate is not None:
            return candidate
    return NormedSpace(d=d)


def _run_function(entry: FunctionEntry, config: SuiteConfig,
                  registry: EvaluatorRegistry) -> Tuple[List[InequalityReport], List[str], int, int]:
    """Reports for one function, its log lines, and the numbers of successful and failed pairs."""
    reports: List[InequalityReport] = []
    log: List[str] = []
    label = entry.source.label
    try:
        success, function, error_message = entry.source.load()
    except Exception as e:
        success, function, error_message = False, None, f"Unexpected error loading {label}: {e}"
    if not success:
        logger.error(error_message)
        log.append(f"Failed to load '{label}': {error_message}")
        return reports, log, 0, len(config.evaluators)
    log.append(f"Loaded '{label}' (n={function.n}, d={function.d}).")

    space = _resolve_space(entry, config, function.d)
    ok = failed = 0
    for spec in config.evaluators:
        evaluator = registry.get_evaluator(spec.name)
        try:
            report = evaluator.evaluate(function, space, spec.params, config.quad)
            reports.append(report)
            log.append(f"{spec.name} on '{label}': {report.status.value} (slack {report.slack:.6g}).")
            logger.debug(f"{spec.name} on '{label}': {report!r}")
            ok += 1
        except Exception as e:
            logger.error(f"{spec.name} on '{label}' failed: {e}")
            log.append(f"Error running {spec.name} on '{label}': {e}")
            failed += 1
    return reports, log, ok, failed


def run_suite(config: SuiteConfig, threads: int = 1,
              registry: Optional[EvaluatorRegistry] = None) -> SuiteResult:
    """Runs every evaluator on every function; output order does not depend on `threads`."""
    registry = registry or default_registry()
    if not config.functions or not config.evaluators:
        logger.warning(f"Suite '{config.name}' has nothing to evaluate.")
        return SuiteResult(SuiteStatus.NO_OP, [], ["Suite has no functions or no evaluators."])

    logger.info(f"Running suite '{config.name}': {len(config.functions)} function(s) x "
                f"{len(config.evaluators)} evaluator(s) on {threads} thread(s)")
    run = lambda entry: _run_function(entry, config, registry)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, config.functions))
    else:
        outcomes = [run(entry) for entry in config.functions]

    reports: List[InequalityReport] = []
    actions_log: List[str] = []
    ok = failed = 0
    for item_reports, item_log, item_ok, item_failed in outcomes:
        reports.extend(item_reports)
        actions_log.extend(item_log)
        ok += item_ok
        failed += item_failed

    if failed == 0:
        status = SuiteStatus.OK
    elif ok > 0:
        status = SuiteStatus.PARTIAL_SUCCESS
    else:
        status = SuiteStatus.FAILED
    logger.info(f"Suite '{config.name}' finished. Status: {status.value}, {len(reports)} report(s)")
    return SuiteResult(status, reports, actions_log)


def single_suite(sources: Sequence[FunctionSource], evaluators: Sequence[EvaluatorSpec],
                 space: Optional[NormedSpace] = None, quad: QuadratureSpec = DEFAULT_QUADRATURE,
                 output_format: str = "rows", name: str = "command-line") -> SuiteConfig:
    """A checked suite assembled from command-line pieces instead of a file."""
    config = SuiteConfig(
        name=name,
        functions=[FunctionEntry(source, None) for source in sources],
        evaluators=list(evaluators),
        space=space,
        quad=quad,
        output_format=output_format,
    )
    config.check()
    return config
