"""Command-line pipeline driver.

Subcommands expose each stage (``binarize``, ``lattice``, ``describe``,
``induce``) plus an end-to-end ``pipeline`` run that records a manifest.
Exit codes: 0 success, 1 I/O error, 2 validation or parse error. All
randomness flows from a single seed (``--seed``, else ``GALIMP_SEED``, else
0); nothing reads the clock, so identical invocations write identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import matplotlib
import numpy as np

from . import __version__
from .bayes import BayesConfig, bound_report, filter_graph
from .context import (
    binarize,
    context_from_csv,
    context_to_csv,
    parse_observations,
    parse_symbolic_table,
)
from .errors import GalimpError, ParseError, ValidationError
from .graph import build_descriptive_graph, to_dot, to_json
from .lattice import concepts, hasse, lattice_to_dot, lattice_to_json
from .stats import (
    ClassificationThresholds,
    contingency_to_csv,
    h_matrix_to_csv,
    h_matrix_to_json,
    loevinger_h,
    pair_tables,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2

DEFAULT_EMITS = ("json", "csv", "dot")


@dataclass
class PipelineConfig:
    """Resolved settings of one pipeline run; serialized into the manifest."""

    symbolic: str | None = None
    context: str | None = None
    observations: str | None = None
    population: int | None = None
    h_tend: float = 0.40
    h_quasi: float = 0.60
    h_floor: float = 0.20
    delta: float = 0.90
    prior_weights: tuple[float, float, float, float] = (0.5, 0.5, 0.5, 0.5)
    samples: int = 100_000
    seed: int = 0
    skip_stats: bool = False
    merge_equivalences: bool = False
    emits: tuple[str, ...] = DEFAULT_EMITS

    def thresholds(self) -> ClassificationThresholds:
        return ClassificationThresholds(self.h_tend, self.h_quasi)

    def bayes(self) -> BayesConfig:
        return BayesConfig(
            delta=self.delta,
            prior_weights=self.prior_weights,
            samples=self.samples,
            seed=self.seed,
            h_floor=self.h_floor,
        )

    def to_dict(self) -> dict:
        return {
            "symbolic": self.symbolic,
            "context": self.context,
            "observations": self.observations,
            "population": self.population,
            "h_tend": self.h_tend,
            "h_quasi": self.h_quasi,
            "h_floor": self.h_floor,
            "delta": self.delta,
            "prior_weights": list(self.prior_weights),
            "samples": self.samples,
            "seed": self.seed,
            "skip_stats": self.skip_stats,
            "merge_equivalences": self.merge_equivalences,
            "emits": list(self.emits),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        cfg = cls()
        for key, value in data.items():
            if not hasattr(cfg, key):
                raise ValidationError(f"unknown manifest config key: {key!r}")
            if key in ("prior_weights", "emits") and value is not None:
                value = tuple(value)
            setattr(cfg, key, value)
        return cfg


def load_config(path: str) -> dict:
    """Read a flat ``key = value`` config file (comments with #)."""
    values: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected 'key = value', got {line!r}", row=lineno)
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip().strip("\"'")
            values[key] = value
    return values


def _coerce(value, kind):
    if value is None or not isinstance(value, str):
        return value
    if kind is bool:
        return value.lower() in ("1", "true", "yes", "on")
    if kind is tuple:
        return tuple(float(p) for p in value.split(","))
    return kind(value)


def _resolve(flag_value, config: dict, key: str, default, kind):
    if flag_value is not None:
        return flag_value
    if key in config:
        return _coerce(config[key], kind)
    return default


def _parse_prior(text: str) -> tuple[float, ...]:
    try:
        parts = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ValidationError(f"cannot parse prior weights from {text!r}") from None
    return parts


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _dump_json(data: dict) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def _seed_default() -> int:
    env = os.environ.get("GALIMP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"GALIMP_SEED must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galimp",
        description="Galois lattices and Bayesian-filtered implicative graphs "
        "from term-usage tables.",
    )
    parser.add_argument("--version", action="version", version=f"galimp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bin = sub.add_parser("binarize", help="symbolic table CSV -> binary context CSV")
    p_bin.add_argument("--input", required=True, help="symbolic table CSV")
    p_bin.add_argument("--output", required=True, help="context CSV to write")

    p_lat = sub.add_parser("lattice", help="context CSV -> concepts and Hasse diagram")
    p_lat.add_argument("--context", required=True, help="context CSV")
    p_lat.add_argument("--json", dest="json_out", help="lattice JSON output path")
    p_lat.add_argument("--dot", dest="dot_out", help="lattice DOT output path")

    def add_describe_args(p):
        p.add_argument("--observations", help="usage log CSV (user_id,term)")
        p.add_argument("--population", type=int, help="total population size")
        p.add_argument("--h-tend", type=float, dest="h_tend")
        p.add_argument("--h-quasi", type=float, dest="h_quasi")
        p.add_argument("--h-floor", type=float, dest="h_floor")
        p.add_argument("--out-dir", required=False, help="output directory")
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--merge-equivalences", action="store_true", default=None,
                       help="render mutual q-implications as one double-headed DOT edge")
        for name in ("json", "csv", "dot", "figures"):
            p.add_argument(f"--{name}", dest=f"emit_{name}", action="store_true",
                           default=None, help=f"emit {name} artifacts")

    def add_induce_args(p):
        p.add_argument("--delta", type=float, help="guarantee level in (0,1)")
        p.add_argument("--samples", type=int, help="Monte Carlo draw count")
        p.add_argument("--seed", type=int, help="RNG seed (fallback: GALIMP_SEED)")
        p.add_argument("--prior", help="Dirichlet prior weights w,w,w,w")

    p_desc = sub.add_parser("describe", help="usage log -> contingency, H matrix, descriptive graph")
    add_describe_args(p_desc)

    p_ind = sub.add_parser("induce", help="usage log -> credibility bounds and inductive graph")
    add_describe_args(p_ind)
    add_induce_args(p_ind)

    p_pipe = sub.add_parser("pipeline", help="run binarize -> lattice -> describe -> induce")
    p_pipe.add_argument("--symbolic", help="symbolic table CSV")
    p_pipe.add_argument("--context", help="pre-built context CSV (alternative to --symbolic)")
    p_pipe.add_argument("--skip-stats", action="store_true", default=None,
                        help="lattice-only run, no usage log needed")
    p_pipe.add_argument("--from-manifest", help="re-run the configuration of a manifest JSON")
    add_describe_args(p_pipe)
    add_induce_args(p_pipe)

    return parser


def _emits_from_args(args, config: dict) -> tuple[str, ...]:
    chosen = [name for name in ("json", "csv", "dot", "figures")
              if getattr(args, f"emit_{name}", None)]
    if chosen:
        return tuple(chosen)
    if "emits" in config:
        return tuple(str(config["emits"]).split(","))
    return DEFAULT_EMITS


def _load_usage(args, config: dict):
    observations = _resolve(args.observations, config, "observations", None, str)
    if observations is None:
        raise ValidationError("--observations is required")
    population = _resolve(args.population, config, "population", None, int)
    text = _read_text(observations)
    usage = parse_observations(text, population)
    if population is None:
        print(
            f"warning: --population not given; using the {len(usage.users)} "
            "distinct users in the log",
            file=sys.stderr,
        )
    return usage


def _describe_artifacts(usage, thresholds, h_floor):
    tables = pair_tables(usage)
    quads = {pair: loevinger_h(t) for pair, t in tables.items()}
    graph = build_descriptive_graph(quads, thresholds, h_floor)
    return tables, quads, graph


def _write_describe(out_dir, usage, tables, quads, graph, thresholds, emits,
                    merge_equivalences):
    written = []

    def emit(name, text):
        _write_text(os.path.join(out_dir, name), text)
        written.append(name)

    if "csv" in emits:
        emit("contingency.csv", contingency_to_csv(usage.terms, tables))
        emit("h_matrix.csv", h_matrix_to_csv(usage.terms, quads))
    if "json" in emits:
        emit("h_matrix.json", _dump_json(
            h_matrix_to_json(usage.terms, tables, quads, thresholds, usage.population)))
        emit("descriptive_graph.json", to_json(graph))
    if "dot" in emits:
        emit("descriptive_graph.dot", to_dot(graph, merge_equivalences))
    if "figures" in emits:
        from .report import h_matrix_figure

        path = os.path.join(out_dir, "h_matrix.png")
        h_matrix_figure(usage.terms, quads, path)
        written.append("h_matrix.png")
    return written


def _write_induce(out_dir, tables, graph, bayes_cfg, thresholds, emits,
                  merge_equivalences):
    written = []
    report = bound_report(graph, tables, bayes_cfg, thresholds)
    inductive = filter_graph(graph, tables, bayes_cfg, thresholds)
    if "json" in emits:
        _write_text(os.path.join(out_dir, "bounds.json"), _dump_json(report))
        written.append("bounds.json")
        _write_text(os.path.join(out_dir, "inductive_graph.json"), to_json(inductive))
        written.append("inductive_graph.json")
    if "dot" in emits:
        _write_text(os.path.join(out_dir, "inductive_graph.dot"),
                    to_dot(inductive, merge_equivalences))
        written.append("inductive_graph.dot")
    if "figures" in emits:
        from .report import bounds_figure

        bounds_figure(report, os.path.join(out_dir, "bounds.png"))
        written.append("bounds.png")
    return written


def _require_out_dir(args, config: dict) -> str:
    out_dir = _resolve(getattr(args, "out_dir", None), config, "out_dir", None, str)
    if out_dir is None:
        raise ValidationError("--out-dir is required")
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def cmd_binarize(args) -> int:
    table = parse_symbolic_table(_read_text(args.input))
    _write_text(args.output, context_to_csv(binarize(table)))
    return EXIT_OK


def cmd_lattice(args) -> int:
    context = context_from_csv(_read_text(args.context))
    lattice = hasse(concepts(context))
    if args.json_out:
        _write_text(args.json_out, _dump_json(lattice_to_json(lattice)))
    if args.dot_out:
        _write_text(args.dot_out, lattice_to_dot(lattice))
    return EXIT_OK


def _common_describe(args):
    config = load_config(args.config) if args.config else {}
    thresholds = ClassificationThresholds(
        _resolve(args.h_tend, config, "h_tend", 0.40, float),
        _resolve(args.h_quasi, config, "h_quasi", 0.60, float),
    )
    h_floor = _resolve(args.h_floor, config, "h_floor", 0.20, float)
    emits = _emits_from_args(args, config)
    merge = bool(_resolve(args.merge_equivalences, config, "merge_equivalences", False, bool))
    return config, thresholds, h_floor, emits, merge


def cmd_describe(args) -> int:
    config, thresholds, h_floor, emits, merge = _common_describe(args)
    out_dir = _require_out_dir(args, config)
    usage = _load_usage(args, config)
    tables, quads, graph = _describe_artifacts(usage, thresholds, h_floor)
    _write_describe(out_dir, usage, tables, quads, graph, thresholds, emits, merge)
    return EXIT_OK


def _bayes_from_args(args, config: dict, h_floor: float) -> BayesConfig:
    prior = args.prior
    if prior is not None:
        prior = _parse_prior(prior)
    else:
        prior = _resolve(None, config, "prior_weights", (0.5, 0.5, 0.5, 0.5), tuple)
    return BayesConfig(
        delta=_resolve(args.delta, config, "delta", 0.90, float),
        prior_weights=tuple(prior),
        samples=_resolve(args.samples, config, "samples", 100_000, int),
        seed=_resolve(args.seed, config, "seed", _seed_default(), int),
        h_floor=h_floor,
    )


def cmd_induce(args) -> int:
    config, thresholds, h_floor, emits, merge = _common_describe(args)
    bayes_cfg = _bayes_from_args(args, config, h_floor)
    out_dir = _require_out_dir(args, config)
    usage = _load_usage(args, config)
    tables, quads, graph = _describe_artifacts(usage, thresholds, h_floor)
    _write_induce(out_dir, tables, graph, bayes_cfg, thresholds, emits, merge)
    return EXIT_OK


def _versions() -> dict:
    return {
        "galimp": __version__,
        "python": ".".join(str(v) for v in sys.version_info[:3]),
        "numpy": np.__version__,
        "matplotlib": matplotlib.__version__,
    }


def _pipeline_config(args) -> PipelineConfig:
    if args.from_manifest:
        conflicting = [
            name for name in ("symbolic", "context", "observations", "config")
            if getattr(args, name, None)
        ]
        if conflicting:
            raise ValidationError(
                "--from-manifest cannot be combined with --" + conflicting[0]
            )
        manifest = json.loads(_read_text(args.from_manifest))
        return PipelineConfig.from_dict(manifest["config"])
    config = load_config(args.config) if args.config else {}
    symbolic = _resolve(args.symbolic, config, "symbolic", None, str)
    context = _resolve(args.context, config, "context", None, str)
    if symbolic and context:
        raise ValidationError("--symbolic and --context are mutually exclusive")
    if not symbolic and not context:
        raise ValidationError("one of --symbolic or --context is required")
    skip_stats = bool(_resolve(args.skip_stats, config, "skip_stats", False, bool))
    observations = _resolve(args.observations, config, "observations", None, str)
    if skip_stats and observations:
        raise ValidationError("--skip-stats conflicts with --observations")
    if not skip_stats and not observations:
        raise ValidationError("--observations is required (or pass --skip-stats)")
    _, thresholds, h_floor, emits, merge = _common_describe(args)
    prior = args.prior
    if prior is not None:
        prior = _parse_prior(prior)
    else:
        prior = _resolve(None, config, "prior_weights", (0.5, 0.5, 0.5, 0.5), tuple)
    return PipelineConfig(
        symbolic=os.path.abspath(symbolic) if symbolic else None,
        context=os.path.abspath(context) if context else None,
        observations=os.path.abspath(observations) if observations else None,
        population=_resolve(args.population, config, "population", None, int),
        h_tend=thresholds.h_tend,
        h_quasi=thresholds.h_quasi,
        h_floor=h_floor,
        delta=_resolve(args.delta, config, "delta", 0.90, float),
        prior_weights=tuple(prior),
        samples=_resolve(args.samples, config, "samples", 100_000, int),
        seed=_resolve(args.seed, config, "seed", _seed_default(), int),
        skip_stats=skip_stats,
        merge_equivalences=merge,
        emits=emits,
    )


def cmd_pipeline(args) -> int:
    cfg = _pipeline_config(args)
    thresholds = cfg.thresholds()
    bayes_cfg = None if cfg.skip_stats else cfg.bayes()  # validates early
    out_dir = _require_out_dir(args, {})
    written: list[str] = []

    if cfg.symbolic:
        context = binarize(parse_symbolic_table(_read_text(cfg.symbolic)))
        if "csv" in cfg.emits:
            _write_text(os.path.join(out_dir, "context.csv"), context_to_csv(context))
            written.append("context.csv")
    else:
        context = context_from_csv(_read_text(cfg.context))

    lattice = hasse(concepts(context))
    if "json" in cfg.emits:
        _write_text(os.path.join(out_dir, "lattice.json"),
                    _dump_json(lattice_to_json(lattice)))
        written.append("lattice.json")
    if "dot" in cfg.emits:
        _write_text(os.path.join(out_dir, "lattice.dot"), lattice_to_dot(lattice))
        written.append("lattice.dot")

    if not cfg.skip_stats:
        text = _read_text(cfg.observations)
        usage = parse_observations(text, cfg.population)
        if cfg.population is None:
            print(
                f"warning: population not given; using the {len(usage.users)} "
                "distinct users in the log",
                file=sys.stderr,
            )
        tables, quads, graph = _describe_artifacts(usage, thresholds, cfg.h_floor)
        written += _write_describe(out_dir, usage, tables, quads, graph, thresholds,
                                   cfg.emits, cfg.merge_equivalences)
        written += _write_induce(out_dir, tables, graph, bayes_cfg, thresholds,
                                 cfg.emits, cfg.merge_equivalences)

    manifest = {
        "tool": "galimp pipeline",
        "versions": _versions(),
        "config": cfg.to_dict(),
        "artifacts": written,
    }
    _write_text(os.path.join(out_dir, "manifest.json"), _dump_json(manifest))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    handlers = {
        "binarize": cmd_binarize,
        "lattice": cmd_lattice,
        "describe": cmd_describe,
        "induce": cmd_induce,
        "pipeline": cmd_pipeline,
    }
    try:
        return handlers[args.command](args)
    except GalimpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def run() -> None:
    sys.exit(main())
