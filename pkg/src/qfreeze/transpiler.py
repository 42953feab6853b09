"""Map logical circuits onto limited-connectivity devices.

The router is a deterministic greedy scheme: a degree-descending initial
placement followed by in-order gate processing, moving the control of
each non-adjacent CNOT toward its target along a shortest physical path
(one SWAP per hop). The seed only breaks ties between equal-length
paths, so identical inputs reroute identically.

A compiled circuit keeps SWAPs symbolic; ``decompose_swaps`` expands
each into its three-CNOT sequence. Metrics always report the
decomposed-equivalent CNOT total (cnot_total = logical + 3 * swaps).

Sub-problems of one family share coefficient sparsity, so a single
routed template can be edited into every family member by rewriting
rotation-angle scales, skipping routing entirely.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .circuit import Angle, Gate, QaoaCircuit, bind_gates, build_qaoa, gate_list_depth
from .ising import IsingModel

DEFAULT_GATE_TIMES = {"cnot": 400e-9, "single": 40e-9, "measure": 1e-6}


class TemplateMismatchError(ValueError):
    """A model's sparsity pattern does not match the template's."""


class CouplingMap:
    """Physical qubit adjacency (undirected, simple)."""

    def __init__(self, num_physical: int, edges, kind: str = "custom"):
        if num_physical < 1:
            raise ValueError("coupling map needs at least one physical qubit")
        norm: set[tuple[int, int]] = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-edge ({a},{b}) not allowed")
            if not (0 <= a < num_physical and 0 <= b < num_physical):
                raise ValueError(f"edge ({a},{b}) references a qubit outside 0..{num_physical - 1}")
            norm.add((min(a, b), max(a, b)))
        self.num_physical = num_physical
        self.edges = frozenset(norm)
        self.kind = kind
        nbrs: list[list[int]] = [[] for _ in range(num_physical)]
        for a, b in sorted(norm):
            nbrs[a].append(b)
            nbrs[b].append(a)
        self._neighbors = tuple(tuple(sorted(x)) for x in nbrs)
        self._dist: np.ndarray | None = None

    def neighbors(self, q: int) -> tuple[int, ...]:
        return self._neighbors[q]

    def distances(self) -> np.ndarray:
        """All-pairs hop counts (inf where disconnected)."""
        if self._dist is None:
            n = self.num_physical
            rows = [a for a, b in self.edges] + [b for a, b in self.edges]
            cols = [b for a, b in self.edges] + [a for a, b in self.edges]
            graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
            self._dist = shortest_path(graph, method="D", unweighted=True)
        return self._dist

    def is_connected(self) -> bool:
        return bool(np.all(np.isfinite(self.distances()[0])))


def grid_map(rows: int, cols: int) -> CouplingMap:
    """4-neighbor grid with rows*(cols-1) + cols*(rows-1) edges."""
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be >= 1, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return CouplingMap(rows * cols, edges, kind=f"grid{rows}x{cols}")


def coupling_to_dict(cmap: CouplingMap) -> dict:
    if cmap.kind.startswith("grid"):
        r, c = cmap.kind[4:].split("x")
        return {"rows": int(r), "cols": int(c)}
    return {"num_physical": cmap.num_physical, "edges": [list(e) for e in sorted(cmap.edges)]}


def coupling_from_dict(data: dict) -> CouplingMap:
    if "rows" in data:
        return grid_map(int(data["rows"]), int(data["cols"]))
    edges = [tuple(e) for e in data["edges"]]
    num = int(data.get("num_physical", max(max(e) for e in edges) + 1))
    return CouplingMap(num, edges)


@dataclass(frozen=True)
class CircuitMetrics:
    cnot_total: int  # counts each SWAP as its 3-CNOT decomposition
    cnot_from_swaps: int
    swap_count: int
    depth: int  # ASAP depth of the decomposed gate list
    duration_estimate: float  # seconds under DEFAULT_GATE_TIMES


@dataclass(frozen=True)
class CompiledCircuit:
    num_physical: int
    num_logical: int
    p: int
    gates: tuple[Gate, ...]  # physical qubit indices
    initial_layout: tuple[int, ...]  # logical -> physical
    final_layout: tuple[int, ...]
    swaps_decomposed: bool
    metrics: CircuitMetrics


def _interaction_adjacency(circ: QaoaCircuit) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(circ.num_qubits)]
    for g in circ.gates:
        if len(g.qubits) == 2:
            a, b = g.qubits
            adj[a].add(b)
            adj[b].add(a)
    return adj


def _initial_placement(circ: QaoaCircuit, cmap: CouplingMap) -> list[int]:
    # Highest-degree logical qubits go first, each onto the free physical
    # qubit that is adjacent to the most already-placed neighbors (then
    # closest to them, then best-connected, then lowest index).
    adj = _interaction_adjacency(circ)
    dist = cmap.distances()
    phys_deg = np.array([len(cmap.neighbors(q)) for q in range(cmap.num_physical)], dtype=float)
    order = sorted(range(circ.num_qubits), key=lambda q: (-len(adj[q]), q))
    placed: dict[int, int] = {}
    free = np.ones(cmap.num_physical, dtype=bool)
    for q in order:
        anchors = [placed[r] for r in adj[q] if r in placed]
        if anchors:
            d = dist[:, anchors]
            adjacent = (d == 1).sum(axis=1)
            total = d.sum(axis=1)
        else:
            adjacent = np.zeros(cmap.num_physical)
            total = np.zeros(cmap.num_physical)
        candidates = np.flatnonzero(free)
        keys = list(zip(-adjacent[candidates], total[candidates],
                        -phys_deg[candidates], candidates))
        best = candidates[min(range(len(candidates)), key=keys.__getitem__)]
        placed[q] = int(best)
        free[best] = False
    return [placed[q] for q in range(circ.num_qubits)]


def route(circ: QaoaCircuit, cmap: CouplingMap, seed: int = 0) -> CompiledCircuit:
    """Greedy shortest-path routing of a logical circuit onto a device."""
    if circ.num_qubits > cmap.num_physical:
        raise ValueError(
            f"circuit needs {circ.num_qubits} qubits, map has {cmap.num_physical}"
        )
    if not cmap.is_connected():
        raise ValueError("coupling map must be connected")
    rng = np.random.default_rng(seed)
    dist = cmap.distances()
    initial = _initial_placement(circ, cmap)
    l2p = list(initial)
    p2l = [-1] * cmap.num_physical
    for lq, pq in enumerate(l2p):
        p2l[pq] = lq

    out: list[Gate] = []
    swaps = 0
    cnot_logical = 0
    for g in circ.gates:
        if g.kind == "CNOT":
            cnot_logical += 1
            pa, pb = l2p[g.qubits[0]], l2p[g.qubits[1]]
            while dist[pa, pb] > 1:
                cands = [x for x in cmap.neighbors(pa) if dist[x, pb] == dist[pa, pb] - 1]
                x = cands[int(rng.integers(len(cands)))] if len(cands) > 1 else cands[0]
                out.append(Gate("SWAP", (pa, x)))
                swaps += 1
                la, lx = p2l[pa], p2l[x]
                p2l[pa], p2l[x] = lx, la
                if la != -1:
                    l2p[la] = x
                if lx != -1:
                    l2p[lx] = pa
                pa = x
            out.append(Gate("CNOT", (pa, pb), tag=g.tag))
        elif g.kind == "SWAP":
            raise ValueError("logical circuits may not contain SWAP gates")
        else:
            out.append(dataclasses.replace(g, qubits=(l2p[g.qubits[0]],)))

    decomposed = _decompose_gate_list(out)
    metrics = CircuitMetrics(
        cnot_total=cnot_logical + 3 * swaps,
        cnot_from_swaps=3 * swaps,
        swap_count=swaps,
        depth=gate_list_depth(decomposed),
        duration_estimate=_gate_list_duration(decomposed, DEFAULT_GATE_TIMES),
    )
    return CompiledCircuit(
        num_physical=cmap.num_physical,
        num_logical=circ.num_qubits,
        p=circ.p,
        gates=tuple(out),
        initial_layout=tuple(initial),
        final_layout=tuple(l2p),
        swaps_decomposed=False,
        metrics=metrics,
    )


def _decompose_gate_list(gates) -> list[Gate]:
    out: list[Gate] = []
    for g in gates:
        if g.kind == "SWAP":
            a, b = g.qubits
            out.extend((Gate("CNOT", (a, b)), Gate("CNOT", (b, a)), Gate("CNOT", (a, b))))
        else:
            out.append(g)
    return out


def decompose_swaps(compiled: CompiledCircuit) -> CompiledCircuit:
    """Expand each SWAP into three CNOTs; metrics are already equivalent."""
    if compiled.swaps_decomposed:
        return compiled
    return dataclasses.replace(
        compiled, gates=tuple(_decompose_gate_list(compiled.gates)), swaps_decomposed=True
    )


def _gate_duration(kind: str, gate_times: dict) -> float:
    if kind == "CNOT":
        return gate_times["cnot"]
    if kind == "SWAP":
        return 3.0 * gate_times["cnot"]
    if kind == "MEASURE":
        return gate_times["measure"]
    return gate_times["single"]


def _gate_list_duration(gates, gate_times: dict) -> float:
    finish: dict[int, float] = {}
    total = 0.0
    for g in gates:
        start = max((finish.get(q, 0.0) for q in g.qubits), default=0.0)
        end = start + _gate_duration(g.kind, gate_times)
        for q in g.qubits:
            finish[q] = end
        total = max(total, end)
    return total


def duration_estimate(compiled: CompiledCircuit, gate_times: dict | None = None) -> float:
    """Critical-path run time under per-kind gate latencies (seconds)."""
    gate_times = dict(DEFAULT_GATE_TIMES if gate_times is None else gate_times)
    if any(t < 0 for t in gate_times.values()):
        raise ValueError("gate times must be non-negative")
    return _gate_list_duration(compiled.gates, gate_times)


@dataclass(frozen=True)
class TemplateExecutable:
    """A routed circuit with coefficient slots still symbolic."""

    compiled: CompiledCircuit
    slots: dict[tuple, tuple[int, ...]]  # term tag -> gate positions (one per layer)
    linear_keys: tuple[int, ...]
    quadratic_keys: tuple[tuple[int, int], ...]


def compile_template(model: IsingModel, p: int, cmap: CouplingMap, seed: int = 0) -> TemplateExecutable:
    """Route once, remember where every coefficient's rotation landed."""
    compiled = route(build_qaoa(model, p), cmap, seed)
    slots: dict[tuple, list[int]] = {}
    for pos, g in enumerate(compiled.gates):
        if g.tag is not None:
            slots.setdefault(g.tag, []).append(pos)
    return TemplateExecutable(
        compiled=compiled,
        slots={tag: tuple(pos) for tag, pos in slots.items()},
        linear_keys=tuple(sorted(model.linear)),
        quadratic_keys=tuple(sorted(model.quadratic)),
    )


def bind_template(tmpl: TemplateExecutable, model: IsingModel) -> CompiledCircuit:
    """Edit the template's rotation scales to a sibling model's coefficients.

    No re-routing happens, so the result reuses the template's layout and
    metrics verbatim. The model must carry exactly the template's stored
    key sets (values, including signs, are free).
    """
    if tuple(sorted(model.linear)) != tmpl.linear_keys or tuple(sorted(model.quadratic)) != tmpl.quadratic_keys:
        raise TemplateMismatchError(
            "model sparsity pattern does not match the compiled template"
        )
    gates = list(tmpl.compiled.gates)
    for i in tmpl.linear_keys:
        for pos in tmpl.slots[("h", i)]:
            g = gates[pos]
            gates[pos] = dataclasses.replace(
                g, angle=dataclasses.replace(g.angle, scale=2.0 * model.linear[i])
            )
    for (i, j) in tmpl.quadratic_keys:
        for pos in tmpl.slots[("j", i, j)]:
            g = gates[pos]
            gates[pos] = dataclasses.replace(
                g, angle=dataclasses.replace(g.angle, scale=2.0 * model.quadratic[(i, j)])
            )
    return dataclasses.replace(tmpl.compiled, gates=tuple(gates))


def bind_compiled(compiled: CompiledCircuit, gammas, betas) -> CompiledCircuit:
    """Resolve a compiled circuit's symbolic angles to numeric values."""
    if len(gammas) != compiled.p or len(betas) != compiled.p:
        raise ValueError(f"expected {compiled.p} gamma and beta values")
    return dataclasses.replace(compiled, gates=bind_gates(compiled.gates, gammas, betas))


def compiled_to_dict(compiled: CompiledCircuit) -> dict:
    from .circuit import _angle_to_dict

    return {
        "num_qubits": compiled.num_physical,
        "num_logical": compiled.num_logical,
        "p": compiled.p,
        "gates": [
            {"kind": g.kind, "qubits": list(g.qubits), "angle": _angle_to_dict(g.angle)}
            for g in compiled.gates
        ],
        "initial_layout": list(compiled.initial_layout),
        "final_layout": list(compiled.final_layout),
        "swaps_decomposed": compiled.swaps_decomposed,
        "metrics": {
            "cnot_total": compiled.metrics.cnot_total,
            "cnot_from_swaps": compiled.metrics.cnot_from_swaps,
            "swap_count": compiled.metrics.swap_count,
            "depth": compiled.metrics.depth,
            "duration_estimate": compiled.metrics.duration_estimate,
        },
    }


def compiled_from_dict(data: dict) -> CompiledCircuit:
    from .circuit import _angle_from_dict

    gates = tuple(
        Gate(g["kind"], tuple(g["qubits"]), _angle_from_dict(g.get("angle")))
        for g in data["gates"]
    )
    m = data["metrics"]
    return CompiledCircuit(
        num_physical=int(data["num_qubits"]),
        num_logical=int(data["num_logical"]),
        p=int(data["p"]),
        gates=gates,
        initial_layout=tuple(data["initial_layout"]),
        final_layout=tuple(data["final_layout"]),
        swaps_decomposed=bool(data["swaps_decomposed"]),
        metrics=CircuitMetrics(
            cnot_total=int(m["cnot_total"]),
            cnot_from_swaps=int(m["cnot_from_swaps"]),
            swap_count=int(m["swap_count"]),
            depth=int(m["depth"]),
            duration_estimate=float(m["duration_estimate"]),
        ),
    )


def validate_compiled(compiled: CompiledCircuit, cmap: CouplingMap) -> None:
    """Raise if any two-qubit gate falls off a coupling edge."""
    for g in compiled.gates:
        if len(g.qubits) == 2:
            a, b = g.qubits
            if (min(a, b), max(a, b)) not in cmap.edges:
                raise AssertionError(f"gate {g.kind} on ({a},{b}) is not a coupling edge")
