"""Command-line harness.

One executable, one subcommand per experiment::

    tilings aztec-sample --n 2 --q 0.5 --seed 7 --replicas 3 --out t.json
    tilings hexagon-count --a 2 --b 2 --c 2
    tilings variance-scan --K 4000 --t 0.5 --Lmin 16 --Lmax 1024 --out var.csv

Every stochastic command takes --seed and --replicas; replica r draws from
an independent Philox stream keyed by (seed, r), so outputs are byte
identical across reruns and across --threads settings.  CSV files carry one
comment line recording the resolved configuration and then a header row;
JSON is used for structured objects, with exact integers (tiling counts)
rendered as decimal strings.  A JSON file passed via --config supplies
defaults that explicit flags override.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import aztec, brickdimer, growth, hexagon, ope, schur, shuffling
from ._rng import replica_rng

__all__ = ["ExperimentConfig", "main", "run"]

_THREADS_ENV = "TILINGS_THREADS"


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    replicas: int = 1
    out: str | None = None
    threads: int = 1
    mode: str = "float"  # float | exact where supported

    def as_comment(self) -> str:
        payload = {
            "command": self.command,
            "mode": self.mode,
            "params": {k: self.params[k] for k in sorted(self.params)},
            "replicas": self.replicas,
            "seed": self.seed,
            "threads": self.threads,
        }
        return "# config: " + json.dumps(payload, sort_keys=True)


def _write_csv(cfg: ExperimentConfig, path: str, header: list[str],
               rows: list[list]) -> None:
    with open(path, "w") as fh:
        fh.write(cfg.as_comment() + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _map_replicas(cfg: ExperimentConfig, fn):
    """fn(replica_index, rng) -> row(s); ordered by replica index."""
    def work(r):
        return fn(r, replica_rng(cfg.seed, r))

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(work, range(cfg.replicas)))
    return [work(r) for r in range(cfg.replicas)]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_aztec_sample(cfg: ExperimentConfig) -> int:
    n, q = int(cfg.params["n"]), float(cfg.params["q"])
    measure = shuffling.AztecMeasure.from_q(n, q)
    results = _map_replicas(cfg, lambda r, rng: shuffling.sample_aztec(measure, rng))
    payload = [json.loads(aztec.tiling_to_json(t)) for t in results]
    text = json.dumps({"tilings": payload}, sort_keys=True)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_aztec_stats(cfg: ExperimentConfig) -> int:
    n, q = int(cfg.params["n"]), float(cfg.params["q"])
    r_level = int(cfg.params.get("r", max(n // 2, 1)))
    measure = shuffling.AztecMeasure.from_q(n, q)

    def one(r, rng):
        t = shuffling.sample_aztec(measure, rng)
        particles, _holes = aztec.zigzag_config(t, r_level)
        return [r, t.vertical_count(), len(particles), max(particles.positions)]

    rows = _map_replicas(cfg, one)
    _write_csv(cfg, cfg.out or "aztec_stats.csv",
               ["replica", "vertical_dominoes", "particles", "max_particle"], rows)
    return 0


def _parse_weight(cfg: ExperimentConfig) -> ope.DiscreteWeight:
    family = cfg.params["family"]
    p = dict(kv.split("=") for kv in str(cfg.params["params"]).split(","))
    if family == "krawtchouk":
        return ope.DiscreteWeight.krawtchouk(int(p["K"]), float(p["p"]))
    if family == "hahn":
        return ope.DiscreteWeight.hahn(int(p["N"]), float(p["alpha"]), float(p["beta"]))
    if family == "associated-hahn":
        return ope.DiscreteWeight.associated_hahn(
            int(p["N"]), float(p["alpha"]), float(p["beta"])
        )
    raise CliError("bad-family", f"unknown weight family {family!r}")


def _cmd_ope_kernel(cfg: ExperimentConfig) -> int:
    weight = _parse_weight(cfg)
    N = int(cfg.params["N"])
    kern = ope.cd_kernel(ope.build_orthonormal(weight, N))
    M = kern.matrix()
    rows = [[float(v) for v in row] for row in M]
    _write_csv(cfg, cfg.out or "kernel.csv",
               [f"c{j}" for j in range(M.shape[1])], rows)
    return 0


def _cmd_ope_sample(cfg: ExperimentConfig) -> int:
    weight = _parse_weight(cfg)
    N = int(cfg.params["N"])
    kern = ope.cd_kernel(ope.build_orthonormal(weight, N))
    rows = _map_replicas(
        cfg, lambda r, rng: [r, ";".join(map(str, ope.sample_dpp(kern, rng)))]
    )
    _write_csv(cfg, cfg.out or "ope_samples.csv", ["replica", "sites"], rows)
    return 0


def _cmd_variance_scan(cfg: ExperimentConfig) -> int:
    K = int(cfg.params["K"])
    t = float(cfg.params["t"])
    Lmin, Lmax = int(cfg.params["Lmin"]), int(cfg.params["Lmax"])
    N = int(round(t * K))
    kern = ope.cd_kernel(ope.build_orthonormal(ope.DiscreteWeight.krawtchouk(K, 0.5), N))
    rows = []
    L = Lmin
    while L <= Lmax:
        lo = (K - L) // 2
        rows.append([L, ope.number_variance(kern, np.arange(lo, lo + L + 1))])
        L *= 2
    _write_csv(cfg, cfg.out or "var.csv", ["L", "variance"], rows)
    return 0


def _cmd_growth_sim(cfg: ExperimentConfig) -> int:
    M, N, q = int(cfg.params["M"]), int(cfg.params["N"]), float(cfg.params["q"])

    def one(r, rng):
        W = growth.sample_weight_matrix(M, N, q, rng)
        return [r, int(growth.lpp_value(W)[-1, -1])]

    rows = _map_replicas(cfg, one)
    _write_csv(cfg, cfg.out or "g.csv", ["replica", "G"], rows)
    return 0


def _cmd_growth_cdf(cfg: ExperimentConfig) -> int:
    M, N, q = int(cfg.params["M"]), int(cfg.params["N"]), float(cfg.params["q"])
    tmax = int(cfg.params["tmax"])
    mc = int(cfg.params.get("mc-samples", 20000))
    rng = replica_rng(cfg.seed, 0)
    W = growth.sample_geometric(q, (mc, M, N), rng)
    G = np.zeros((mc, M + 1, N + 1), dtype=np.int64)
    for d in range(2, M + N + 1):
        i = np.arange(max(1, d - N), min(M, d - 1) + 1)
        j = d - i
        G[:, i, j] = np.maximum(G[:, i - 1, j], G[:, i, j - 1]) + W[:, i - 1, j - 1]
    g = G[:, M, N]
    rows = []
    for t in range(tmax + 1):
        rows.append([t, growth.lpp_cdf_exact(M, N, q, t), float((g <= t).mean())])
    _write_csv(cfg, cfg.out or "growth_cdf.csv", ["t", "exact", "montecarlo"], rows)
    return 0


def _cmd_lis_check(cfg: ExperimentConfig) -> int:
    alpha = float(cfg.params["alpha"])
    n = int(cfg.params["n"])
    draws = int(cfg.params.get("draws", 0))
    exact = growth.lis_cdf(alpha, n)
    line = {"alpha": alpha, "n": n, "fredholm": exact}
    if draws:
        rng = replica_rng(cfg.seed, 0)
        hits = sum(1 for _ in range(draws) if growth.lis_sample(alpha, rng) <= n)
        line["montecarlo"] = hits / draws
        line["draws"] = draws
    print(json.dumps(line, sort_keys=True))
    return 0


def _parse_vector(s: str) -> list[float]:
    return [float(v) for v in str(s).split(",") if v != ""]


def _cmd_schur_rsk(cfg: ExperimentConfig) -> int:
    n = int(cfg.params["n"])
    a = _parse_vector(cfg.params["a"])
    b = _parse_vector(cfg.params["b"])
    counts: dict[tuple, int] = {}
    for r in range(cfg.replicas):
        rng = replica_rng(cfg.seed, r)
        W = schur.sample_schur_matrix(n, a, b, rng)
        lam = schur.cascade_grow(W, check=False).partition
        counts[lam] = counts.get(lam, 0) + 1
    rows = [[",".join(map(str, lam)), counts[lam]] for lam in sorted(counts)]
    _write_csv(cfg, cfg.out or "shapes.csv", ["lambda", "count"], rows)
    return 0


def _cmd_schur_prob(cfg: ExperimentConfig) -> int:
    lam = tuple(int(v) for v in str(cfg.params["lam"]).split(",") if v != "")
    a = _parse_vector(cfg.params["a"])
    b = _parse_vector(cfg.params["b"])
    print(repr(schur.schur_measure_prob(lam, a, b)))
    return 0


def _cmd_hexagon_count(cfg: ExperimentConfig) -> int:
    a, b, c = (int(cfg.params[k]) for k in ("a", "b", "c"))
    print(str(hexagon.macmahon(a, b, c)))
    return 0


def _hex_spec(cfg: ExperimentConfig) -> hexagon.HexagonSpec:
    a, b, c = (int(cfg.params[k]) for k in ("a", "b", "c"))
    if a < b:
        a, b = b, a
    return hexagon.HexagonSpec(a, b, c)


def _cmd_hexagon_law(cfg: ExperimentConfig) -> int:
    spec = _hex_spec(cfg)
    m = int(cfg.params["m"])
    kind = cfg.params.get("kind", "holes")
    law = hexagon.column_law(spec, m, kind=kind)
    rows = [
        [";".join(map(str, key)), float(pr), f"{pr.numerator}/{pr.denominator}"]
        for key, pr in sorted(law.items())
    ]
    _write_csv(cfg, cfg.out or "law.csv", [kind, "probability", "exact"], rows)
    return 0


def _cmd_hexagon_sample(cfg: ExperimentConfig) -> int:
    spec = _hex_spec(cfg)
    method = cfg.params.get("method", "enumerate")
    sweeps = int(cfg.params.get("sweeps", 0)) or None
    fams = []
    if method == "mcmc":
        rng = replica_rng(cfg.seed, 0)
        chain = hexagon.LozengeChain(spec, rng)
        burn = sweeps or 10 * (spec.a + spec.b)
        chain.sweep(burn)
        for _ in range(cfg.replicas):
            chain.sweep(max((sweeps or 10) // 10, 1))
            fams.append(chain.family())
    else:
        fams = _map_replicas(
            cfg, lambda r, rng: hexagon.sample_hexagon(spec, rng, method="enumerate")
        )
    payload = [hexagon.walks_to_hole_columns(f) for f in fams]
    text = json.dumps({"hole_columns": payload}, sort_keys=True)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_dimer_z(cfg: ExperimentConfig) -> int:
    M, N = int(cfg.params["M"]), int(cfg.params["N"])
    if cfg.mode == "exact":
        from fractions import Fraction

        z = Fraction(cfg.params["z"])
        w = Fraction(cfg.params["w"])
        val = brickdimer.partition_function_exact(M, N, z, w)
        print(f"{val.numerator}/{val.denominator}" if val.denominator != 1
              else str(val.numerator))
        return 0
    spec = brickdimer.BrickLatticeSpec(
        M=M, N=N, z=float(cfg.params["z"]), w=float(cfg.params["w"]),
    )
    print(repr(brickdimer.partition_function(spec)))
    return 0


def _cmd_dimer_corr(cfg: ExperimentConfig) -> int:
    spec = brickdimer.BrickLatticeSpec(
        M=int(cfg.params["M"]), N=int(cfg.params["N"]),
        z=float(cfg.params["z"]), w=float(cfg.params["w"]),
    )
    pts = [int(v) for v in str(cfg.params["points"]).split(",")]
    rows = [[";".join(map(str, pts)), brickdimer.correlations(spec, pts)]]
    for p in pts:
        rows.append([str(p), brickdimer.correlations(spec, [p])])
    _write_csv(cfg, cfg.out or "r.csv", ["points", "correlation"], rows)
    return 0


def _cmd_dimer_free_energy(cfg: ExperimentConfig) -> int:
    M, N = int(cfg.params["M"]), int(cfg.params["N"])
    z = float(cfg.params["z"])
    lo, hi, step = (float(v) for v in str(cfg.params["scan-w"]).split(":"))
    rows = []
    w = lo
    while w <= hi + 1e-12:
        spec = brickdimer.BrickLatticeSpec(M=M, N=N, z=z, w=w)
        f = brickdimer.free_energy(spec)
        try:
            flim = brickdimer.free_energy_limit(z, w)
        except ValueError:
            flim = float("nan")
        rows.append([round(w, 10), f, flim])
        w += step
    _write_csv(cfg, cfg.out or "f.csv", ["w", "free_energy", "limit"], rows)
    return 0


_COMMANDS = {
    "aztec-sample": (_cmd_aztec_sample, ["n", "q"]),
    "aztec-stats": (_cmd_aztec_stats, ["n", "q", "r"]),
    "ope-kernel": (_cmd_ope_kernel, ["family", "params", "N"]),
    "ope-sample": (_cmd_ope_sample, ["family", "params", "N"]),
    "variance-scan": (_cmd_variance_scan, ["K", "t", "Lmin", "Lmax"]),
    "growth-sim": (_cmd_growth_sim, ["M", "N", "q"]),
    "growth-cdf": (_cmd_growth_cdf, ["M", "N", "q", "tmax", "mc-samples"]),
    "lis-check": (_cmd_lis_check, ["alpha", "n", "draws"]),
    "schur-rsk": (_cmd_schur_rsk, ["n", "a", "b"]),
    "schur-prob": (_cmd_schur_prob, ["lam", "a", "b"]),
    "hexagon-count": (_cmd_hexagon_count, ["a", "b", "c"]),
    "hexagon-law": (_cmd_hexagon_law, ["a", "b", "c", "m", "kind"]),
    "hexagon-sample": (_cmd_hexagon_sample, ["a", "b", "c", "method", "sweeps"]),
    "dimer-z": (_cmd_dimer_z, ["M", "N", "z", "w"]),
    "dimer-corr": (_cmd_dimer_corr, ["M", "N", "z", "w", "points"]),
    "dimer-free-energy": (_cmd_dimer_free_energy, ["M", "N", "z", "scan-w"]),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tilings",
                                     description="random tiling experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_fn, params) in _COMMANDS.items():
        p = sub.add_parser(name)
        for flag in params:
            p.add_argument(f"--{flag}", dest=flag, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--replicas", type=int, default=1)
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int,
                       default=int(os.environ.get(_THREADS_ENV, "1")))
        p.add_argument("--mode", choices=["float", "exact"], default="float")
        p.add_argument("--config", default=None)
    return parser


def _config_from_args(args: argparse.Namespace, params: list[str]) -> ExperimentConfig:
    overrides = {}
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
    merged = {}
    for flag in params:
        v = getattr(args, flag, None)
        if v is None:
            v = overrides.get(flag)
        if v is not None:
            merged[flag] = v
    return ExperimentConfig(
        command=args.command,
        params=merged,
        seed=args.seed if args.seed != 0 or "seed" not in overrides
        else int(overrides["seed"]),
        replicas=args.replicas if args.replicas != 1 or "replicas" not in overrides
        else int(overrides["replicas"]),
        out=args.out or overrides.get("out"),
        threads=args.threads,
        mode=args.mode,
    )


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    fn, params = _COMMANDS[args.command]
    try:
        cfg = _config_from_args(args, params)
        missing = [p for p in params if p not in cfg.params
                   and p not in ("kind", "method", "sweeps", "draws", "mc-samples", "r")]
        if missing:
            raise CliError("missing-flag", f"missing required flags: {missing}")
        return fn(cfg)
    except CliError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as e:
        print(f"error: invalid-input: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
