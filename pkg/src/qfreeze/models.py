"""Analytical figures of merit: success probability, fidelity gaps, runtime.

EPS multiplies per-operation survival probabilities: every CNOT survives
with (1 - cnot_error), every measurement with (1 - readout_error), and
all data qubits must stay coherent for the whole circuit duration
(worst case: exp(-n * T_circuit / T_coherence)).
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, field

from .circuit import gate_census
from .freezer import freeze_many, select_hotspots
from .ising import IsingModel, brute_force_min
from .transpiler import (
    DEFAULT_GATE_TIMES,
    CompiledCircuit,
    CouplingMap,
    compile_template,
    decompose_swaps,
    duration_estimate,
)


@dataclass(frozen=True)
class EpsParams:
    cnot_error_rate: float = 0.001
    readout_error_rate: float = 0.005
    coherence_time_seconds: float = 500e-6
    gate_times: dict = field(default_factory=lambda: dict(DEFAULT_GATE_TIMES))

    def __post_init__(self) -> None:
        if not 0.0 <= self.cnot_error_rate <= 1.0 or not 0.0 <= self.readout_error_rate <= 1.0:
            raise ValueError("error rates must lie in [0, 1]")
        if self.coherence_time_seconds <= 0.0:
            raise ValueError("coherence time must be positive")
        if any(t < 0 for t in self.gate_times.values()):
            raise ValueError("gate times must be non-negative")


def eps(compiled: CompiledCircuit, params: EpsParams | None = None) -> float:
    """Probability the circuit runs free of gate, readout, and decoherence errors."""
    params = params or EpsParams()
    circ = decompose_swaps(compiled)
    census = gate_census(circ)
    duration = duration_estimate(circ, params.gate_times)
    survive_gates = (1.0 - params.cnot_error_rate) ** census["cnot"]
    survive_readout = (1.0 - params.readout_error_rate) ** census["measure"]
    survive_decoherence = math.exp(-compiled.num_logical * duration / params.coherence_time_seconds)
    return survive_gates * survive_readout * survive_decoherence


def arg(ev_ideal: float, ev_real: float) -> float:
    """Percentage gap 100 * |(EV_ideal - EV_real) / EV_ideal|; lower is better."""
    if ev_ideal == 0.0:
        raise ValueError("gap is undefined for a zero ideal expectation")
    return 100.0 * abs((ev_ideal - ev_real) / ev_ideal)


def ar(model: IsingModel, ev: float) -> float:
    """Approximation ratio EV / C_min; equals 1 only on all-optimal output."""
    c_min, _ = brute_force_min(model)
    if c_min == 0.0:
        raise ValueError("approximation ratio is undefined when the global minimum is 0")
    return ev / c_min


@dataclass(frozen=True)
class RuntimeParams:
    """Inputs to the end-to-end workflow time model (seconds throughout)."""

    iterations: int = 1000
    trials: int = 25000
    t_nisq: float = 1e-3
    batch_capacity: int = 1  # 1 = no batching; 900 mirrors batched cloud access
    cloud_latency: float = 0.0  # 0 dedicated, 1800 shared
    optimizer_latency_per_iter: float = 60.0
    compile_latency: float = 7200.0
    postprocess: float = 0.0  # 0 baseline, 60 with sub-problem decoding
    num_circuits: int = 1
    optimizer_latency_once: bool = False  # charge the optimizer once instead of per iteration

    def __post_init__(self) -> None:
        if self.batch_capacity < 1:
            raise ValueError("batch capacity must be >= 1")
        numeric = (self.iterations, self.trials, self.t_nisq, self.cloud_latency,
                   self.optimizer_latency_per_iter, self.compile_latency,
                   self.postprocess, self.num_circuits)
        if any(v < 0 for v in numeric):
            raise ValueError("runtime parameters must be non-negative")


def workflow_runtime(params: RuntimeParams) -> float:
    """T = compile + I * N_batch * (trials * t_nisq + cloud) + optimizer + postprocess."""
    n_batch = math.ceil(params.num_circuits / params.batch_capacity)
    device = params.iterations * n_batch * (params.trials * params.t_nisq + params.cloud_latency)
    opt = params.optimizer_latency_per_iter
    if not params.optimizer_latency_once:
        opt *= params.iterations
    return params.compile_latency + device + opt + params.postprocess


@dataclass(frozen=True)
class CostReport:
    """One experiment leg's metrics; arg/ar stay None in metrics-only runs."""

    m: int
    kept_circuits: int
    cnot_total: int
    cnot_from_swaps: int
    depth: int
    duration_s: float
    eps: float
    runtime_s: float
    arg: float | None = None
    ar: float | None = None


COST_CSV_COLUMNS = ("m", "kept_circuits", "cnot_total", "cnot_from_swaps",
                    "depth", "duration_s", "eps", "runtime_s", "arg", "ar")


def write_cost_csv(reports, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COST_CSV_COLUMNS)
    for r in reports:
        writer.writerow([
            r.m, r.kept_circuits, r.cnot_total, r.cnot_from_swaps, r.depth,
            repr(r.duration_s), repr(r.eps), repr(r.runtime_s),
            "" if r.arg is None else repr(r.arg),
            "" if r.ar is None else repr(r.ar),
        ])


def cost_curve(model: IsingModel, cmap: CouplingMap, p: int, m_max: int,
               eps_params: EpsParams | None = None,
               runtime_params: RuntimeParams | None = None,
               fq_postprocess: float = 60.0,
               seed: int = 0) -> list[CostReport]:
    """Metrics for freezing the top m hotspots, m = 0..m_max.

    Each leg compiles one template from a representative sub-problem;
    every kept sibling binds into it, so the leg's circuits share these
    metrics. Row m=0 is the untouched baseline.
    """
    if m_max > 20:
        raise ValueError("m_max capped at 20 (2^m executables)")
    eps_params = eps_params or EpsParams()
    runtime_params = runtime_params or RuntimeParams()
    hotspots = select_hotspots(model, min(m_max, model.num_vars))
    reports: list[CostReport] = []
    for m in range(m_max + 1):
        subs = freeze_many(model, hotspots[:m], prune=True)
        template = compile_template(subs[0].model, p, cmap, seed)
        metrics = template.compiled.metrics
        leg_runtime = dataclasses.replace(
            runtime_params,
            num_circuits=len(subs),
            postprocess=runtime_params.postprocess if m == 0 else fq_postprocess,
        )
        reports.append(CostReport(
            m=m,
            kept_circuits=len(subs),
            cnot_total=metrics.cnot_total,
            cnot_from_swaps=metrics.cnot_from_swaps,
            depth=metrics.depth,
            duration_s=metrics.duration_estimate,
            eps=eps(template.compiled, eps_params),
            runtime_s=workflow_runtime(leg_runtime),
        ))
    return reports
