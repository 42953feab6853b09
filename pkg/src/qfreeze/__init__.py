"""Qubit-freezing toolkit for QAOA at desk scale.

Freeze hotspot variables of an Ising problem into 2^m sub-problems,
prune mirrored halves, build/route/simulate the resulting circuits, and
evaluate the analytical cost models (CNOT/depth, success probability,
fidelity gap, end-to-end runtime).
"""

from .circuit import Gate, QaoaCircuit, build_qaoa, gate_census, logical_depth
from .freezer import (
    DecodedSolution,
    FrozenAssignment,
    SubProblem,
    aggregate,
    decode,
    freeze_many,
    freeze_one,
    select_hotspots,
)
from .ising import (
    CapacityError,
    GraphSpec,
    IsingModel,
    brute_force_min,
    degree,
    evaluate,
    generate_ba,
    generate_regular3,
    generate_sk,
    load_model,
    model_hash,
    save_model,
)
from .models import CostReport, EpsParams, RuntimeParams, ar, arg, cost_curve, eps, workflow_runtime
from .simulator import (
    Landscape,
    OptimizerConfig,
    OutputDistribution,
    ParamPoint,
    expectation,
    landscape,
    noisy_sample,
    optimize,
    sample,
    simulate,
)
from .transpiler import (
    CompiledCircuit,
    CouplingMap,
    TemplateExecutable,
    TemplateMismatchError,
    bind_template,
    compile_template,
    decompose_swaps,
    duration_estimate,
    grid_map,
    route,
)

__version__ = "0.1.0"
