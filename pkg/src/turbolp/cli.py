"""Command-line entry point: ``turbolp --command <name> [options]``.

Every command writes data only (CSV or JSON) to ``--out`` or stdout.
Decode failures are results, not errors; the exit code is nonzero only
when a command cannot run (bad flags, out-of-domain parameters).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds, codec, ensembles, l1lp, matio
from .exceptions import TurboLPError
from .matgen import DEFAULT_ALPHA, CodeSpec

DEFAULT_SEED = 20110
COMMANDS = ("encode", "decode", "simulate-recovery", "ensemble-freq", "bounds",
            "burst-test", "bench", "p0p1-check")
DEFAULT_TRIALS = {
    "simulate-recovery": 20,
    "ensemble-freq": 100_000,
    "p0p1-check": 200,
}


class UsageError(TurboLPError):
    pass


@dataclass
class RunConfig:
    command: str
    N: int | None = None
    alpha: float = DEFAULT_ALPHA
    errors: list[int] | None = None
    trials: int | None = None
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "csv"
    input: str | None = None
    report: str | None = None
    block_lengths: list[int] | None = None
    budget: str = "log"
    n_min: float = 1e3
    n_max: float = 1e6
    points: int = 50
    word_lengths: list[int] | None = None
    workers: int = 1
    burst_len: int | None = None

    def trials_or_default(self) -> int:
        return self.trials if self.trials is not None else DEFAULT_TRIALS.get(self.command, 1)

    def validate(self):
        need_N = {"encode", "decode", "simulate-recovery", "burst-test", "p0p1-check"}
        if self.command in need_N and self.N is None:
            raise UsageError(f"--word-length is required for {self.command}")
        if self.command in ("encode", "decode") and self.input is None:
            raise UsageError(f"--input is required for {self.command}")
        if self.command == "simulate-recovery" and not self.errors:
            raise UsageError("simulate-recovery needs --errors or --errors-from/--errors-to")
        if self.command == "ensemble-freq" and not self.block_lengths:
            raise UsageError("ensemble-freq needs --block-length")
        if self.command == "bench":
            wl = self.word_lengths or []
            if not wl:
                raise UsageError("bench needs --word-lengths")
            if any(b <= a for a, b in zip(wl, wl[1:])):
                raise UsageError("--word-lengths must be strictly ascending")
        if self.trials is not None and self.trials < 1:
            raise UsageError("--trials must be positive")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")


# ---------------------------------------------------------------- commands

def _recovery_trial(args):
    N, t, seed, i = args
    spec = CodeSpec(N)
    rng = np.random.default_rng([seed, t, i])
    E = codec.random_errors(spec, t, rng)
    t0 = time.perf_counter()
    rep = codec.turbo_decode(codec.ProductCodeword(E.E, spec), true_error=E,
                             true_message=np.zeros((spec.K, spec.K)))
    return rep.success, (time.perf_counter() - t0) * 1e3


def _map(fn, jobs, workers):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [fn(j) for j in jobs]


def run_simulate_recovery(cfg: RunConfig) -> list[dict]:
    """Encode ``M = 0``, inject ``t`` random errors, decode, count exact recoveries."""
    CodeSpec(cfg.N)
    trials = cfg.trials_or_default()
    rows = []
    for t in cfg.errors:
        res = _map(_recovery_trial, [(cfg.N, t, cfg.seed, i) for i in range(trials)], cfg.workers)
        ok = sum(s for s, _ in res)
        rows.append({"t": t, "success_freq": ok / trials, "trials": trials,
                     "mean_decode_ms": float(np.mean([ms for _, ms in res]))})
    return rows


def _default_t(n: int, alpha: float, budget: str) -> int:
    p = bounds.BoundParams(n, alpha)
    return bounds.t_loglog_of_n(p) if budget == "loglog" else bounds.t_of_n(p)


def run_ensemble_freq(cfg: RunConfig) -> list[dict]:
    trials = cfg.trials_or_default()
    rows = []
    for n in cfg.block_lengths:
        ts = cfg.errors or [_default_t(n, cfg.alpha, cfg.budget)]
        for t in ts:
            spec = ensembles.EnsembleSpec.from_alpha(n, t, cfg.alpha)
            mc = ensembles.monte_carlo_bad_freq(spec, trials, cfg.seed)
            rows.append({"n": n, "t": t, "method": mc.method, "log10_prob": mc.log10_probability,
                         "trials": mc.trials, "std_err": mc.std_error})
            if spec.N <= ensembles.EXACT_MAX_SIDE:
                ex = ensembles.exact_bad_prob(spec)
                rows.append({"n": n, "t": t, "method": ex.method, "log10_prob": ex.log10_probability,
                             "trials": 0, "std_err": 0.0})
    return rows


def run_bounds(cfg: RunConfig) -> list[bounds.BoundCurve]:
    grid = np.geomspace(cfg.n_min, cfg.n_max, cfg.points) if cfg.points > 0 else []
    return bounds.emit_bound_curves(cfg.alpha, grid)


def _burst_trial(args):
    N, start, length, seed = args
    spec = CodeSpec(N)
    E = codec.burst_corrupt(spec, start, length, seed)
    rep = codec.turbo_decode(codec.ProductCodeword(E.E, spec), true_error=E)
    return rep.success


def run_burst(cfg: RunConfig) -> list[dict]:
    """Decode a standard-normal burst at every start offset."""
    spec = CodeSpec(cfg.N)
    length = cfg.burst_len if cfg.burst_len is not None else codec.burst_length(spec)
    starts = range(spec.n - length + 1)
    jobs = [(spec.N, s, length, cfg.seed + s) for s in starts]
    res = _map(_burst_trial, jobs, cfg.workers)
    return [{"start": s, "length": length, "success": ok} for s, ok in zip(starts, res)]


def run_bench(cfg: RunConfig) -> dict:
    """Time ``turbo_decode`` at each word length with ``t = t(n)`` random errors."""
    trials = cfg.trials_or_default()
    points = []
    for N in cfg.word_lengths:
        spec = CodeSpec(N)
        t = bounds.t_of_n(bounds.BoundParams(spec.n, cfg.alpha))
        ms = []
        for i in range(trials):
            rng = np.random.default_rng([cfg.seed, N, i])
            E = codec.random_errors(spec, t, rng)
            t0 = time.perf_counter()
            codec.turbo_decode(codec.ProductCodeword(E.E, spec))
            ms.append((time.perf_counter() - t0) * 1e3)
        points.append({"N": N, "n": spec.n, "t": t, "decode_ms": float(np.median(ms))})
    exponent = None
    if len(points) > 1:
        exponent = codec.fit_power_law([p["n"] for p in points], [p["decode_ms"] for p in points])
    return {"points": points, "exponent": exponent}


def run_p0p1(cfg: RunConfig) -> dict:
    spec = CodeSpec(cfg.N, cfg.alpha)
    trials = cfg.trials_or_default()
    frac = l1lp.p0_p1_equivalence_check(spec, trials, cfg.seed)
    return {"N": spec.N, "support_size": spec.guaranteed_t_word, "trials": trials,
            "seed": cfg.seed, "fraction": frac}


def run_encode(cfg: RunConfig) -> np.ndarray:
    spec = CodeSpec(cfg.N, cfg.alpha)
    Y = codec.encode(matio.read_matrix(cfg.input), spec).Y
    if cfg.errors:
        rng = np.random.default_rng(cfg.seed)
        Y = Y + codec.random_errors(spec, cfg.errors[0], rng).E
    return Y


def run_decode(cfg: RunConfig) -> codec.DecodeReport:
    spec = CodeSpec(cfg.N, cfg.alpha)
    return codec.turbo_decode(codec.ProductCodeword(matio.read_matrix(cfg.input), spec))


# ----------------------------------------------------------------- output

def _csv(rows: list[dict], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


HEADERS = {
    "simulate-recovery": ["t", "success_freq", "trials", "mean_decode_ms"],
    "ensemble-freq": ["n", "t", "method", "log10_prob", "trials", "std_err"],
    "burst-test": ["start", "length", "success"],
    "bench": ["N", "n", "t", "decode_ms"],
    "p0p1-check": ["N", "support_size", "trials", "seed", "fraction"],
}


def execute(cfg: RunConfig) -> None:
    cfg.validate()
    cmd = cfg.command
    if cmd == "encode":
        _emit(matio.format_matrix(run_encode(cfg)), cfg.out)
    elif cmd == "decode":
        rep = run_decode(cfg)
        if cfg.out is not None:
            matio.write_matrix(cfg.out, rep.M_hat)
        _emit(_dump_json(rep.to_dict()), cfg.report)
    elif cmd == "bounds":
        curves = run_bounds(cfg)
        if cfg.format == "json":
            _emit(_dump_json([{"label": c.label, "samples": c.samples, "skipped": c.skipped}
                              for c in curves]), cfg.out)
        elif cfg.out is None:
            sys.stdout.write("".join(c.to_csv() for c in curves))
        else:
            os.makedirs(cfg.out, exist_ok=True)
            for c in curves:
                _emit(c.to_csv(), os.path.join(cfg.out, f"{c.label}.csv"))
    else:
        runner = {
            "simulate-recovery": run_simulate_recovery,
            "ensemble-freq": run_ensemble_freq,
            "burst-test": run_burst,
            "bench": run_bench,
            "p0p1-check": run_p0p1,
        }[cmd]
        result = runner(cfg)
        if cfg.format == "json":
            _emit(_dump_json(result), cfg.out)
        else:
            rows = result["points"] if cmd == "bench" else result
            rows = [rows] if isinstance(rows, dict) else rows
            text = _csv(rows, HEADERS[cmd])
            if cmd == "bench" and result["exponent"] is not None:
                print(f"fitted exponent in n: {result['exponent']:.3f}", file=sys.stderr)
            _emit(text, cfg.out)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="turbolp", description=__doc__.splitlines()[0])
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--word-length", type=int, dest="N", help="inner word length N (2 * 2**m)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--errors", type=_int_list, help="error count(s), comma separated")
    p.add_argument("--errors-from", type=int)
    p.add_argument("--errors-to", type=int)
    p.add_argument("--errors-step", type=int, default=1)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--input", help="matrix text file (encode: message, decode: codeword)")
    p.add_argument("--report", help="decode: where to write the JSON report (default stdout)")
    p.add_argument("--block-length", type=_int_list, dest="block_lengths",
                   help="ensemble-freq: perfect-square block lengths n")
    p.add_argument("--budget", choices=("log", "loglog"), default="log",
                   help="ensemble-freq: default error count alpha n^0.75 / ln n or / ln ln n")
    p.add_argument("--n-min", type=float, default=1e3)
    p.add_argument("--n-max", type=float, default=1e6)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--word-lengths", type=_int_list, help="bench: ascending word lengths")
    p.add_argument("--burst-length", type=int, dest="burst_len")
    p.add_argument("--workers", type=int, default=1)
    return p


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    errors = ns.errors
    if ns.errors_from is not None or ns.errors_to is not None:
        if ns.errors_from is None or ns.errors_to is None or ns.errors_step < 1:
            raise UsageError("--errors-from, --errors-to and a positive --errors-step go together")
        errors = list(range(ns.errors_from, ns.errors_to + 1, ns.errors_step))
    return RunConfig(
        command=ns.command, N=ns.N, alpha=ns.alpha, errors=errors, trials=ns.trials,
        seed=ns.seed, out=ns.out, format=ns.format, input=ns.input, report=ns.report,
        block_lengths=ns.block_lengths, budget=ns.budget, n_min=ns.n_min, n_max=ns.n_max,
        points=ns.points, word_lengths=ns.word_lengths, workers=ns.workers,
        burst_len=ns.burst_len,
    )


def main(argv=None) -> int:
    try:
        execute(config_from_args(argv))
    except (TurboLPError, ValueError, OSError) as exc:
        print(f"turbolp: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
