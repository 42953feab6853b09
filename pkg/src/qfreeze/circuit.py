"""Parametric QAOA circuit construction and logical gate metrics.

Each layer l applies RZ(2*h_i*gamma_l) per linear term, the sandwich
CNOT(i,j) RZ(2*J_ij*gamma_l) CNOT(i,j) per quadratic term, then RX(2*beta_l)
on every qubit; Hadamards precede layer 1 and measurements close the
circuit. Problem rotations are emitted for every *stored* coefficient so
that models sharing a sparsity pattern yield circuits differing only in
rotation scales.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .ising import IsingModel

_ARITY = {"H": 1, "RX": 1, "RZ": 1, "CNOT": 2, "SWAP": 2, "MEASURE": 1}
_ANGLED = frozenset({"RX", "RZ"})


@dataclass(frozen=True)
class Angle:
    """Rotation angle ``scale * param``; bound once ``value`` is set."""

    scale: float
    param: str | None = None  # "gamma<l>" / "beta<l>", None once bound
    value: float | None = None

    @property
    def is_bound(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: Angle | None = None
    tag: tuple | None = None  # term slot id for template editing, not serialized

    def __post_init__(self) -> None:
        arity = _ARITY.get(self.kind)
        if arity is None:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.kind} qubits must be distinct, got {self.qubits}")
        if (self.kind in _ANGLED) != (self.angle is not None):
            raise ValueError(f"{self.kind} angle mismatch: {self.angle}")


@dataclass(frozen=True)
class QaoaCircuit:
    num_qubits: int
    p: int
    gates: tuple[Gate, ...]
    source_model: IsingModel | None = None


def build_qaoa(model: IsingModel, p: int) -> QaoaCircuit:
    """p-layer circuit for a model; deterministic ascending gate order."""
    if p < 1:
        raise ValueError(f"layer count must be >= 1, got {p}")
    if model.num_vars < 1:
        raise ValueError("cannot build a circuit for a model with no variables")
    n = model.num_vars
    gates: list[Gate] = [Gate("H", (q,)) for q in range(n)]
    for layer in range(p):
        gamma = f"gamma{layer}"
        for i, h in model.linear.items():
            gates.append(Gate("RZ", (i,), Angle(2.0 * h, gamma), tag=("h", i)))
        for (i, j), w in model.quadratic.items():
            gates.append(Gate("CNOT", (i, j)))
            gates.append(Gate("RZ", (j,), Angle(2.0 * w, gamma), tag=("j", i, j)))
            gates.append(Gate("CNOT", (i, j)))
        beta = f"beta{layer}"
        gates.extend(Gate("RX", (q,), Angle(2.0, beta)) for q in range(n))
    gates.extend(Gate("MEASURE", (q,)) for q in range(n))
    return QaoaCircuit(n, p, tuple(gates), model)


def gate_list_depth(gates) -> int:
    """Critical path length under an as-soon-as-possible schedule."""
    finish: dict[int, int] = {}
    depth = 0
    for g in gates:
        start = max((finish.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            finish[q] = start + 1
        depth = max(depth, start + 1)
    return depth


def logical_depth(circ: QaoaCircuit) -> int:
    return gate_list_depth(circ.gates)


def gate_census(circ) -> dict[str, int]:
    """Gate counts by kind for a logical or compiled circuit."""
    counts = {"cnot": 0, "rz": 0, "rx": 0, "h": 0, "swap": 0, "measure": 0}
    for g in circ.gates:
        counts[g.kind.lower()] += 1
    return counts


def _param_value(param: str, gammas, betas) -> float:
    if param.startswith("gamma"):
        return float(gammas[int(param[5:])])
    if param.startswith("beta"):
        return float(betas[int(param[4:])])
    raise ValueError(f"unknown parameter {param!r}")


def bind_gates(gates, gammas, betas) -> tuple[Gate, ...]:
    """Resolve symbolic angles to numeric values (value = scale * param)."""
    out = []
    for g in gates:
        if g.angle is not None and not g.angle.is_bound:
            value = g.angle.scale * _param_value(g.angle.param, gammas, betas)
            g = dataclasses.replace(g, angle=dataclasses.replace(g.angle, value=value))
        out.append(g)
    return tuple(out)


def bind(circ: QaoaCircuit, gammas, betas) -> QaoaCircuit:
    if len(gammas) != circ.p or len(betas) != circ.p:
        raise ValueError(f"expected {circ.p} gamma and beta values")
    return dataclasses.replace(circ, gates=bind_gates(circ.gates, gammas, betas))


def _angle_to_dict(angle: Angle | None):
    if angle is None:
        return None
    return {"scale": angle.scale, "param": angle.param, "value": angle.value}


def _angle_from_dict(data) -> Angle | None:
    if data is None:
        return None
    return Angle(float(data["scale"]), data.get("param"),
                 None if data.get("value") is None else float(data["value"]))


def circuit_to_dict(circ: QaoaCircuit) -> dict:
    return {
        "num_qubits": circ.num_qubits,
        "p": circ.p,
        "gates": [
            {"kind": g.kind, "qubits": list(g.qubits), "angle": _angle_to_dict(g.angle)}
            for g in circ.gates
        ],
    }


def circuit_from_dict(data: dict) -> QaoaCircuit:
    # Term tags are in-process bookkeeping and do not survive a round trip.
    gates = tuple(
        Gate(g["kind"], tuple(g["qubits"]), _angle_from_dict(g.get("angle")))
        for g in data["gates"]
    )
    return QaoaCircuit(int(data["num_qubits"]), int(data["p"]), gates)
