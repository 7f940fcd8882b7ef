"""Command line front end.

Resolution order for every setting: flag, then config file, then the
per-experiment default. The fully resolved config is embedded in the report,
so a report plus the package version pins the run.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import experiments
from .errors import UsageError

MESH_KINDS = ("sphere", "ellipsoid", "halfspace", "file")

_GLOBAL_DEFAULTS = {
    "mesh": "sphere",
    "n": 2000,
    "seed": 0,
    "axes": (2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
    "radius": 20.0,
    "eps": None,
    "h": 1e-4,
    "terms": 4,
    "trials": 10000,
    "pairs": 10000,
    "threads": None,
    "mesh_path": None,
    "out": None,
    "tolerances": {},
}

# dense-operator experiments keep n small by default; pointwise Monte Carlo
# experiments want more nodes to push the noise floor down
_EXPERIMENT_DEFAULTS = {
    "cauchy-reproduction": {"n": 20000},
    "cauchy-theorem": {"n": 20000},
    "parenthesization-gap": {"n": 20000},
    "ks-vanishing": {"n": 2000},
    "ks-skew": {"n": 2000},
    "ks-halfspace": {"n": 20000},
    "plemelj": {"n": 300},
    "adjoint-check": {"n": 300, "mesh": "ellipsoid"},
    "szego-ball": {"n": 4000},
    "szego-halfspace": {"n": 20000},
    "neumann-series": {"n": 300},
}

_CONFIG_KEYS = frozenset(_GLOBAL_DEFAULTS) | {"experiment", "tolerance"}


@dataclass
class RunConfig:
    """Fully resolved settings for one experiment run."""

    experiment: str
    mesh: str = "sphere"
    n: int = 2000
    seed: int = 0
    axes: tuple = _GLOBAL_DEFAULTS["axes"]
    radius: float = 20.0
    eps: Optional[float] = None
    h: float = 1e-4
    terms: int = 4
    trials: int = 10000
    pairs: int = 10000
    threads: Optional[int] = None
    mesh_path: Optional[str] = None
    out: Optional[str] = None
    tolerances: dict = field(default_factory=dict)

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def as_dict(self) -> dict:
        # everything that determines the numbers; output paths stay out so
        # identical runs stay byte-identical wherever the report lands
        return {
            "experiment": self.experiment,
            "mesh": self.mesh,
            "n": self.n,
            "seed": self.seed,
            "axes": list(self.axes),
            "radius": self.radius,
            "eps": self.eps,
            "h": self.h,
            "terms": self.terms,
            "trials": self.trials,
            "pairs": self.pairs,
            "threads": self.threads,
            "mesh_path": self.mesh_path,
            "tolerance": dict(sorted(self.tolerances.items())),
        }

    def validate(self) -> None:
        """Reject out-of-range settings before any computation starts."""
        if self.experiment not in experiments.RUNNERS:
            raise UsageError(f"unknown experiment {self.experiment!r}")
        if self.mesh not in MESH_KINDS:
            raise UsageError(f"mesh must be one of {', '.join(MESH_KINDS)}")
        if self.mesh == "file" and not self.mesh_path:
            raise UsageError("mesh 'file' needs --mesh-path")
        if self.mesh != "file" and self.mesh_path:
            raise UsageError("--mesh-path only applies with --mesh file")
        for name, value, low in (
            ("n", self.n, 1),
            ("trials", self.trials, 1),
            ("pairs", self.pairs, 1),
            ("terms", self.terms, 0),
            ("seed", self.seed, 0),
        ):
            if not isinstance(value, int) or value < low:
                raise UsageError(f"{name} must be an integer >= {low}, got {value!r}")
        if self.threads is not None and (not isinstance(self.threads, int) or self.threads < 1):
            raise UsageError(f"threads must be a positive integer, got {self.threads!r}")
        for name, value in (("radius", self.radius), ("h", self.h)):
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise UsageError(f"{name} must be a positive real, got {value!r}")
        if self.eps is not None and not (math.isfinite(self.eps) and self.eps > 0):
            raise UsageError(f"eps must be a positive real, got {self.eps!r}")
        if len(self.axes) != 8:
            raise UsageError(f"axes needs exactly 8 entries, got {len(self.axes)}")
        if not all(math.isfinite(a) and a > 0 for a in self.axes):
            raise UsageError("axes entries must be positive reals")
        for key, value in self.tolerances.items():
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                raise UsageError(f"tolerance {key}={value!r} must be a nonnegative real")


def _parse_axes(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 8:
        raise UsageError(f"--axes needs 8 comma-separated reals, got {len(parts)}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"--axes: {exc}") from exc


def _parse_tolerance_overrides(items) -> dict:
    overrides = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--tolerance wants name=real, got {item!r}")
        try:
            overrides[name] = float(value)
        except ValueError as exc:
            raise UsageError(f"--tolerance {name}: {exc}") from exc
    return overrides


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"config file has unknown keys: {', '.join(sorted(unknown))}")
    return data


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="octoks",
        description="Boundary-integral experiments for octonion-valued monogenic functions.",
    )
    parser.add_argument("experiment", choices=sorted(experiments.RUNNERS))
    parser.add_argument("--config", help="JSON config file; flags override its entries")
    parser.add_argument("--mesh", choices=MESH_KINDS)
    parser.add_argument("--mesh-path", help="mesh file to load when --mesh file")
    parser.add_argument("--n", type=int, help="number of mesh nodes")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--axes", help="8 comma-separated ellipsoid semi-axes")
    parser.add_argument("--radius", type=float, help="half-space truncation radius")
    parser.add_argument("--eps", type=float, help="principal-value exclusion radius")
    parser.add_argument("--h", type=float, help="finite-difference step")
    parser.add_argument("--terms", type=int, help="series terms beyond the leading one")
    parser.add_argument("--trials", type=int, help="random triples for the algebra suite")
    parser.add_argument("--pairs", type=int, help="random point pairs for kernel checks")
    parser.add_argument("--out", help="write the JSON report here, plus a CSV sibling")
    parser.add_argument("--threads", type=int, help="cap BLAS worker threads")
    parser.add_argument(
        "--tolerance", action="append", metavar="NAME=REAL",
        help="override a named check tolerance; repeatable",
    )
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    settings = dict(_GLOBAL_DEFAULTS)
    settings.update(_EXPERIMENT_DEFAULTS.get(args.experiment, {}))
    tolerances = {}

    if args.config:
        file_data = _load_config_file(args.config)
        if "experiment" in file_data and file_data["experiment"] != args.experiment:
            raise UsageError(
                f"config file names experiment {file_data['experiment']!r}, "
                f"command line says {args.experiment!r}"
            )
        tolerances.update(file_data.pop("tolerance", {}) or {})
        file_data.pop("experiment", None)
        if "axes" in file_data:
            file_data["axes"] = tuple(float(a) for a in file_data["axes"])
        settings.update(file_data)

    for key in ("mesh", "n", "seed", "radius", "eps", "h", "terms",
                "trials", "pairs", "threads", "out"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    if args.mesh_path is not None:
        settings["mesh_path"] = args.mesh_path
    if args.axes is not None:
        settings["axes"] = _parse_axes(args.axes)
    tolerances.update(_parse_tolerance_overrides(args.tolerance))
    settings["tolerances"] = tolerances

    cfg = RunConfig(experiment=args.experiment, **settings)
    cfg.validate()
    return cfg


def run(cfg: RunConfig):
    runner = experiments.RUNNERS[cfg.experiment]
    if cfg.threads is not None:
        from threadpoolctl import threadpool_limits

        with threadpool_limits(limits=cfg.threads):
            return runner(cfg)
    return runner(cfg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        cfg = resolve_config(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2

    try:
        report = run(cfg)
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    for line in report.lines():
        print(line)
    verdict = "PASS" if report.passed else "FAIL"
    print(f"{cfg.experiment}: {verdict}")

    if cfg.out:
        out = Path(cfg.out)
        report.write(out)
        report.write_csv(out.with_suffix(".csv"))
        print(f"report written to {out} and {out.with_suffix('.csv')}")

    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
