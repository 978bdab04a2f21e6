"""Configuration-driven command line.

``fracstable sample|solve|telegraph|limit|verify`` reads a single JSON
config document (``--config``), applies ``--set key=value`` overrides with
dotted paths, and writes a CSV result table plus a JSON run manifest.
Identical config and seed produce byte-identical CSV output; every output
embeds the config hash for provenance.

Exit codes: 0 success, 2 validation error, 3 accuracy failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import AccuracyError
from .sampling import RngStream, sample_isotropic_stable_vector, _unit_positive_stable
from .solver import (
    ModelParams,
    cf_telegraph_k2,
    cf_telegraph_k3,
    cf_time,
    density_1d,
    density_radial,
    limit_density,
)
from .subordinators import (
    SubordinatorSpec,
    sample_inverse,
    sample_iterated,
    sample_iterated_inverse,
    sample_subordinator,
)
from .suites import SUITES, run_suite

COMMANDS = ("sample", "solve", "telegraph", "limit", "verify")

DEFAULT_CONFIG = {
    "params": {"terms": [[1.0, 0.5]], "beta": 1.0, "c": 1.0, "n": 1},
    "t": 1.0,
    "depth": 1,
    "n_samples": 10000,
    "seed": 0,
    "target": "composition",
    "suite": "all",
    "k": 2,
    "grids": {
        "x": [-5.0, 5.0, 201],
        "r": [0.25, 4.0, 16],
        "xi": [0.3, 0.7, 1.0, 1.5, 3.0],
        "t": [0.3, 0.7, 1.2, 2.0, 3.0],
    },
    "tolerances": {"cf": 1e-7, "density": 1e-6},
    "limit_flag": False,
    "nu": 0.4,
    "lam": 1.0,
    "output_path": "fracstable_out.csv",
    "workers": None,
}


@dataclass
class RunConfig:
    """Validated run configuration for one CLI invocation."""

    command: str
    raw: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command: {self.command}")
        merged = json.loads(json.dumps(DEFAULT_CONFIG))
        _deep_update(merged, self.raw)
        self.raw = merged
        for key in ("cf", "density"):
            if not (float(self.raw["tolerances"][key]) > 0.0):
                raise ValueError("tolerances must be positive")
        if int(self.raw["n_samples"]) < 1:
            raise ValueError("n_samples must be positive")
        if int(self.raw["depth"]) < 1:
            raise ValueError("depth must be a positive integer")
        self.spec = SubordinatorSpec(
            terms=tuple(tuple(t) for t in self.raw["params"]["terms"])
        )
        self.model = ModelParams(
            spec=self.spec,
            beta=float(self.raw["params"]["beta"]),
            c=float(self.raw["params"]["c"]),
            n=int(self.raw["params"]["n"]),
        )

    @property
    def seed(self):
        return int(self.raw["seed"])

    def config_hash(self):
        semantic = {
            k: v for k, v in self.raw.items() if k not in ("output_path", "workers")
        }
        body = json.dumps({"command": self.command, **semantic}, sort_keys=True)
        return hashlib.sha256(body.encode()).hexdigest()[:16]


def _deep_update(base, override):
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            _deep_update(base[k], v)
        else:
            base[k] = v


def _parse_set(overrides):
    out = {}
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"--set expects key=value, got: {item}")
        key, _, value = item.partition("=")
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            parsed = value
        node = out
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        node[parts[-1]] = parsed
    return out


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_csv(path, header, rows, config_hash):
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _write_manifest(path, cfg, wall_time, status, extra=None):
    manifest = {
        "config": {"command": cfg.command, **cfg.raw},
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "versions": {
            "fracstable": __version__,
            "numpy": np.__version__,
        },
        "wall_time_s": wall_time,
        "exit_status": status,
    }
    if extra:
        manifest.update(extra)
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _chunked_draws(draw_chunk, n_total, workers):
    """Deterministic ensemble assembly independent of worker count.

    ``draw_chunk(chunk_index, chunk_size)`` must derive its own substream
    from the chunk index, so results depend only on the chunk layout.
    """
    chunk = 50000
    layout = [(i, min(chunk, n_total - i * chunk)) for i in range((n_total + chunk - 1) // chunk)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda iw: draw_chunk(*iw), layout))
    else:
        parts = [draw_chunk(i, w) for i, w in layout]
    return np.concatenate(parts, axis=0)


def _cmd_sample(cfg):
    target = cfg.raw["target"]
    t = float(cfg.raw["t"])
    n = int(cfg.raw["n_samples"])
    depth = int(cfg.raw["depth"])
    workers = cfg.raw.get("workers")
    spec, model = cfg.spec, cfg.model

    def chunk_stream(i):
        return RngStream(cfg.seed, 1000 + i)

    if target == "subordinator":
        draws = _chunked_draws(
            lambda i, w: sample_subordinator(spec, t, chunk_stream(i), size=w), n, workers
        )
    elif target == "inverse":
        draws = _chunked_draws(
            lambda i, w: sample_inverse(spec, t, rng=chunk_stream(i), size=w), n, workers
        )
    elif target == "iterated":
        draws = _chunked_draws(
            lambda i, w: sample_iterated(spec, depth, t, chunk_stream(i), size=w), n, workers
        )
    elif target == "iterated_inverse":
        draws = _chunked_draws(
            lambda i, w: sample_iterated_inverse(spec, depth, t, rng=chunk_stream(i), size=w),
            n,
            workers,
        )
    elif target == "stable_vector":
        draws = _chunked_draws(
            lambda i, w: sample_isotropic_stable_vector(
                model.n, model.beta, t, chunk_stream(i), size=w
            ),
            n,
            workers,
        )
    elif target == "composition":
        def draw_comp(i, w):
            rng = chunk_stream(i)
            lvals = sample_inverse(spec, t, rng=rng, size=w)
            gen = rng.substream(99).generator()
            tau = model.c ** 2 * lvals
            if model.beta == 1.0:
                a = tau
            else:
                a = tau ** (1.0 / model.beta) * _unit_positive_stable(
                    model.beta, gen, w
                )
            z = gen.standard_normal((w, model.n))
            return np.sqrt(2.0 * a)[:, None] * z

        draws = _chunked_draws(draw_comp, n, workers)
    else:
        raise ValueError(f"unknown sample target: {target}")

    if draws.ndim == 1:
        header = ["index", "value"]
        rows = [(i, v) for i, v in enumerate(draws)]
    else:
        header = ["index"] + [f"x{j + 1}" for j in range(draws.shape[1])]
        rows = [(i, *row) for i, row in enumerate(draws)]
    return header, rows, {}


def _cmd_solve(cfg):
    t = float(cfg.raw["t"])
    tol = float(cfg.raw["tolerances"]["density"])
    if cfg.raw.get("radial") or cfg.model.n > 1:
        lo, hi, count = cfg.raw["grids"]["r"]
        grid = np.linspace(float(lo), float(hi), int(count))
        dg = density_radial(cfg.model, grid, t=None if cfg.raw["limit_flag"] else t,
                            limit=bool(cfg.raw["limit_flag"]), tol=tol)
        header = ["r", "density", "err_est"]
    else:
        lo, hi, count = cfg.raw["grids"]["x"]
        grid = np.linspace(float(lo), float(hi), int(count))
        dg = density_1d(cfg.model, t, grid, tol=tol)
        header = ["x", "density", "err_est"]
    rows = [(x, v, dg.err_est) for x, v in zip(dg.abscissae, dg.values)]
    return header, rows, {"mass": dg.mass, "method": dg.method}


def _cmd_telegraph(cfg):
    lam = float(cfg.raw["lam"])
    nu = float(cfg.raw["nu"])
    k = int(cfg.raw["k"])
    c = cfg.model.c
    beta = cfg.model.beta
    tol = float(cfg.raw["tolerances"]["cf"])
    rows = []
    for xi in cfg.raw["grids"]["xi"]:
        for t in cfg.raw["grids"]["t"]:
            if k == 2:
                closed = cf_telegraph_k2(lam, c, nu, float(xi), float(t))
                spec = SubordinatorSpec(terms=((1.0, 2 * nu), (2 * lam, nu)))
            elif k == 3:
                closed = cf_telegraph_k3(lam, c, beta, nu, float(xi), float(t))
                spec = SubordinatorSpec(terms=((1.0, 3 * nu), (2 * lam, nu)))
            else:
                raise ValueError("k must be 2 or 3")
            model = ModelParams(spec=spec, beta=beta, c=c, n=cfg.model.n)
            inverted = cf_time(model, float(xi), float(t), tol=tol)
            rows.append((xi, t, closed, inverted, abs(closed - inverted)))
    return ["xi", "t", "cf_closed", "cf_inverted", "abs_diff"], rows, {}


def _cmd_limit(cfg):
    lambdas = [l for l, _ in cfg.spec.terms]
    c = cfg.model.c
    n = cfg.model.n
    lo, hi, count = cfg.raw["grids"]["r"]
    grid = np.linspace(float(lo), float(hi), int(count))
    rows = [
        (r, limit_density(lambdas, c, n, np.array([r] + [0.0] * (n - 1))))
        for r in grid
    ]
    return ["r", "density"], rows, {}


def _cmd_verify(cfg):
    name = cfg.raw["suite"]
    if name != "all" and name not in SUITES:
        raise ValueError(f"unknown suite: {name}")
    rows = run_suite(name, n_samples=int(cfg.raw["n_samples"]), seed=cfg.seed)
    out = [
        (r["suite"], r["check"], r["passed"], r["statistic"], r["threshold"])
        for r in rows
    ]
    n_pass = sum(r["passed"] for r in rows)
    print(f"{n_pass}/{len(rows)} checks passed")
    by_suite = {}
    for r in rows:
        ok, tot = by_suite.get(r["suite"], (0, 0))
        by_suite[r["suite"]] = (ok + r["passed"], tot + 1)
    for s, (ok, tot) in sorted(by_suite.items()):
        print(f"  {s:<14} {ok}/{tot}")
    extra = {"passed": n_pass, "total": len(rows)}
    return ["suite", "check", "passed", "statistic", "threshold"], out, extra


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fracstable",
        description="Simulate stable subordinators and solve the associated "
        "space-time fractional equations.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="path to a JSON config document")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config entry (dotted path, JSON value)",
    )
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--seed", type=int, help="override the RNG seed")
    parser.add_argument("--workers", type=int, help="ensemble worker count")
    parser.add_argument("--suite", help="verification suite name (verify command)")
    return parser


def run(config: RunConfig):
    """Execute a validated config; returns (exit_status, csv_path)."""
    t0 = time.time()
    dispatch = {
        "sample": _cmd_sample,
        "solve": _cmd_solve,
        "telegraph": _cmd_telegraph,
        "limit": _cmd_limit,
        "verify": _cmd_verify,
    }
    header, rows, extra = dispatch[config.command](config)
    status = 0
    if config.command == "verify" and extra.get("passed") != extra.get("total"):
        status = 4
    out_path = config.raw["output_path"]
    _write_csv(out_path, header, rows, config.config_hash())
    manifest_path = os.path.splitext(out_path)[0] + ".manifest.json"
    _write_manifest(manifest_path, config, time.time() - t0, status, extra)
    return status, out_path


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        raw = {}
        if args.config:
            with open(args.config) as fh:
                raw = json.load(fh)
        _deep_update(raw, _parse_set(args.set))
        if args.out:
            raw["output_path"] = args.out
        if args.seed is not None:
            raw["seed"] = args.seed
        if args.suite:
            raw["suite"] = args.suite
        if args.workers is not None:
            raw["workers"] = args.workers
        elif "workers" not in raw and os.environ.get("FRACSTABLE_WORKERS"):
            raw["workers"] = int(os.environ["FRACSTABLE_WORKERS"])
        cfg = RunConfig(command=args.command, raw=raw)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        status, out_path = run(cfg)
    except AccuracyError as exc:
        print(f"error: accuracy-failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if status == 0:
        print(f"wrote {out_path}")
    else:
        print("verification failures detected", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
