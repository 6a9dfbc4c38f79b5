"""Cross-method equivalence runs over generated instances.

Every method that produces a set has it re-verified against the original
instance.  Reports are plain dicts with a fixed key order so that two runs
with the same seed serialise identically apart from the ``ms`` fields.
"""
from __future__ import annotations

import random
import signal
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from itertools import product

from .decomposition import modular_decomposition, structural_params
from .generators import GeneratorSpec
from .graph import Graph, brute_force_min, graph_power, is_dr_dominating, oracle_cap
from .reductions import (build_ilp, expand_ilp_solution, kernelize_nd, lift_colored_solution, lift_kernel_solution,
                         reduce_to_colored, solve_colored_bruteforce, solve_ilp_enumeration)
from .solver import EXTENDED, PAPER, ModularDP

METHODS = ("oracle", "dp-paper", "dp-extended", "kernel", "kernel-paper", "colored", "ilp")
# a size mismatch between these and the oracle fails the run
FATAL_PAIRS = {("dp-extended", "oracle"), ("kernel", "oracle")}
DEFAULT_TIMEOUT = 10.0


class TrialTimeout(Exception):
    pass


@contextmanager
def time_limit(seconds: float | None):
    if not seconds or not hasattr(signal, "setitimer"):
        yield
        return

    def _raise(signum, frame):
        raise TrialTimeout(f"trial exceeded {seconds} s")

    previous = signal.signal(signal.SIGALRM, _raise)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous)


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, round((time.perf_counter() - start) * 1000, 3)


def run_methods(g: Graph, d: int, r: int, methods=METHODS, cap: int | None = None) -> dict:
    """Run each applicable method; values are ``(size, ms, valid)`` or an error entry."""
    cap = oracle_cap() if cap is None else cap
    results: dict[str, dict] = {}

    def record(name, fn):
        try:
            (size, vertices), ms = _timed(fn)
        except Exception as exc:  # reported per method, never fatal to the run
            results[name] = {"size": None, "ms": 0.0, "valid": False, "error": f"{type(exc).__name__}: {exc}"}
            return
        results[name] = {"size": size, "ms": ms, "valid": is_dr_dominating(g, d, r, vertices)}

    small = g.n <= cap
    if "oracle" in methods and small:
        record("oracle", lambda: _sized(brute_force_min(g, d, r, cap=cap).vertices))
    gp = graph_power(g, r)
    dp_holder = {}

    def dp(variant):
        if "dp" not in dp_holder:
            dp_holder["dp"] = ModularDP(gp, d)
        return _sized(dp_holder["dp"].witness(variant))

    if "dp-paper" in methods:
        record("dp-paper", lambda: dp(PAPER))
    if "dp-extended" in methods:
        record("dp-extended", lambda: dp(EXTENDED))
    if small and ("kernel" in methods or "kernel-paper" in methods):
        kg, vmap, rep = kernelize_nd(g, d, r)
        ksol = brute_force_min(kg, d, r, cap=cap).vertices if kg.n else ()
        if "kernel" in methods:
            record("kernel", lambda: _sized(lift_kernel_solution(g, ksol, vmap, rep)))
        if "kernel-paper" in methods:
            record("kernel-paper", lambda: (len(ksol), tuple(vmap[v] for v in ksol)))
    if "colored" in methods and d == 1 and g.n >= 2 and small and g.is_connected():
        def colored():
            ci = reduce_to_colored(g, r, g.n)
            s = solve_colored_bruteforce(ci, cap=cap)
            return _sized(lift_colored_solution(ci, s))
        record("colored", colored)
    if "ilp" in methods and small:
        def ilp():
            inst = build_ilp(gp, d, g.n)
            sol = solve_ilp_enumeration(inst)
            vertices = expand_ilp_solution(gp, inst, sol)
            if len(vertices) != sol.objective:
                raise ValueError("expanded ILP solution size differs from objective")
            return sol.objective, vertices
        record("ilp", ilp)
    return results


def _sized(vertices):
    return len(vertices), tuple(vertices)


def divergences(methods: dict) -> list[dict]:
    ref = "oracle" if "oracle" in methods else "dp-extended"
    out = []
    base = methods.get(ref, {}).get("size")
    for name, res in methods.items():
        if name == ref or res.get("size") is None or base is None:
            continue
        if res["size"] != base:
            out.append({"pair": [name, ref], "sizes": [res["size"], base], "fatal": (name, ref) in FATAL_PAIRS})
    for name, res in methods.items():
        if res.get("size") is not None and not res["valid"] and name != "kernel-paper":
            out.append({"pair": [name, name], "sizes": [res["size"], res["size"]], "fatal": True,
                        "reason": "solution failed verification"})
    return out


def run_report(g: Graph, d: int, r: int, seed=None, methods=METHODS, cap: int | None = None) -> dict:
    params = structural_params(g, modular_decomposition(g)) if g.n else None
    res = run_methods(g, d, r, methods, cap)
    return {
        "n": g.n,
        "m": g.m,
        "d": d,
        "r": r,
        "params": params.as_dict() if params else None,
        "methods": res,
        "divergences": divergences(res),
        "seed": seed,
    }


def trial_seed(master: int, index: int) -> str:
    return f"{master}:{index}"


def _run_trial(args) -> list[dict]:
    spec, index, master, pairs, timeout, cap = args
    seed = trial_seed(master, index)
    rng = random.Random(seed)
    try:
        with time_limit(timeout):
            g = spec.generate(rng)
            return [run_report(g, d, r, seed=seed, cap=cap) for d, r in pairs]
    except Exception as exc:
        return [{"seed": seed, "error": f"{type(exc).__name__}: {exc}"}]


def run_harness(specs: list[GeneratorSpec], trials: int, seed: int, d_values, r_values,
                workers: int = 1, timeout: float | None = DEFAULT_TIMEOUT, cap: int | None = None) -> dict:
    pairs = list(product(d_values, r_values))
    jobs = []
    for spec in specs:
        for i in range(trials):
            jobs.append((spec, len(jobs), seed, pairs, timeout, cap))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_run_trial, jobs))
    else:
        batches = [_run_trial(job) for job in jobs]
    reports = [rep for batch in batches for rep in batch]
    return {"family": specs[0].family if specs else None, "seed": seed, "trials": reports,
            "summary": summarize(reports)}


def summarize(reports: list[dict]) -> dict:
    errors = sum(1 for r in reports if "error" in r)
    agree: dict[str, list[int]] = {}
    fatal = 0
    timing: dict[int, list[float]] = {}
    for rep in reports:
        if "error" in rep:
            continue
        methods = rep["methods"]
        ref = "oracle" if "oracle" in methods else "dp-extended"
        for name, res in methods.items():
            if name == ref or res.get("size") is None or methods.get(ref, {}).get("size") is None:
                continue
            key = f"{name}/{ref}"
            tally = agree.setdefault(key, [0, 0])
            tally[0] += res["size"] == methods[ref]["size"]
            tally[1] += 1
        fatal += any(dv["fatal"] for dv in rep["divergences"])
        if "dp-extended" in methods and methods["dp-extended"].get("size") is not None:
            timing.setdefault(rep["n"], []).append(methods["dp-extended"]["ms"])
    return {
        "instances": len(reports),
        "errors": errors,
        "fatal": fatal,
        "agreement": {k: {"agree": a, "total": t} for k, (a, t) in sorted(agree.items())},
        "dp_extended_ms_by_n": {str(n): round(sum(v) / len(v), 3) for n, v in sorted(timing.items())},
    }


def strip_timing(report):
    """Copy of a report with every ``ms`` field removed (for reproducibility checks)."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k not in ("ms", "dp_extended_ms_by_n")}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report
