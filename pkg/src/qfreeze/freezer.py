"""Hotspot freezing: partition a spin problem into sub-problems.

Fixing variable k to value v removes every edge at k, folds v*J_{kj}
into the neighbors' linear terms and v*h_k into the offset. Freezing m
variables therefore splits the search space into 2^m sub-problems over
the remaining variables. When every parent linear coefficient is zero,
energies satisfy C(z) = C(-z), so only one sub-problem of each mirrored
pair needs solving; the other's solutions are recovered by flipping all
spins.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ising import CapacityError, IsingModel, evaluate, model_hash

MAX_FROZEN = 20


@dataclass(frozen=True)
class FrozenAssignment:
    """Ordered (variable, value) pairs; order records the freezing sequence."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        entries = tuple((int(k), int(v)) for k, v in self.entries)
        indices = [k for k, _ in entries]
        if len(set(indices)) != len(indices):
            raise ValueError("frozen variable indices must be distinct")
        if any(v not in (-1, 1) for _, v in entries):
            raise ValueError("frozen values must be -1 or +1")
        object.__setattr__(self, "entries", entries)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.entries)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SubProblem:
    """A child model plus the frozen assignment that produced it.

    ``index_map[new] = old`` maps the child's dense variable indices back
    to the parent's. ``mirror_of`` names the pruned symmetric twin whose
    solutions are recovered by flipping every spin of a decoded one.
    """

    parent_id: str
    frozen: FrozenAssignment
    model: IsingModel
    index_map: tuple[int, ...]
    mirror_of: str | None = None

    @property
    def id(self) -> str:
        return subproblem_id(self.parent_id, self.frozen.entries)


@dataclass(frozen=True)
class DecodedSolution:
    """A sub-problem solution lifted back to the parent index space."""

    assignment: tuple[int, ...]
    value: float
    source: str
    via_mirror: bool = False


def subproblem_id(parent_id: str, entries) -> str:
    signs = ",".join(f"{k}{'+' if v > 0 else '-'}" for k, v in entries)
    return f"{parent_id}[{signs}]"


def select_hotspots(model: IsingModel, m: int, adaptive: bool = True) -> list[int]:
    """The m highest-degree variables, ties broken by lowest index.

    Adaptive mode (default) removes each pick's edges before ranking the
    next, so two adjacent hotspots do not double-count their shared edge.
    ``adaptive=False`` ranks once on the original degrees.
    """
    if m > model.num_vars:
        raise ValueError(f"cannot select {m} hotspots from {model.num_vars} variables")
    adj: dict[int, set[int]] = {i: set() for i in range(model.num_vars)}
    for (i, j), w in model.quadratic.items():
        if w != 0.0:
            adj[i].add(j)
            adj[j].add(i)
    if not adaptive:
        order = sorted(range(model.num_vars), key=lambda i: (-len(adj[i]), i))
        return order[:m]
    picked: list[int] = []
    for _ in range(m):
        k = min((i for i in range(model.num_vars) if i not in picked),
                key=lambda i: (-len(adj[i]), i))
        picked.append(k)
        for nbr in adj[k]:
            adj[nbr].discard(k)
        adj[k] = set()
    return picked


def freeze_one(model: IsingModel, k: int, value: int) -> IsingModel:
    """Substitute variable k with value, keeping parent indexing.

    The result still has ``model.num_vars`` variables; k simply carries
    no terms. Neighbors keep their linear key even when the folded
    coefficient lands on 0.0, so siblings frozen to opposite values share
    one sparsity pattern (circuit templates rely on this).
    """
    if not 0 <= k < model.num_vars:
        raise ValueError(f"variable {k} out of range for {model.num_vars} variables")
    if value not in (-1, 1):
        raise ValueError("frozen value must be -1 or +1")
    linear = {i: h for i, h in model.linear.items() if i != k}
    offset = model.offset + value * model.linear.get(k, 0.0)
    quadratic: dict[tuple[int, int], float] = {}
    for (i, j), w in model.quadratic.items():
        if i == k:
            linear[j] = linear.get(j, 0.0) + value * w
        elif j == k:
            linear[i] = linear.get(i, 0.0) + value * w
        else:
            quadratic[(i, j)] = w
    return IsingModel(model.num_vars, linear, quadratic, offset)


def _pattern_values(counter: int, m: int) -> tuple[int, ...]:
    # Binary-counter enumeration: bit 0 of the counter's MSB side is the
    # first frozen variable; bit value 0 means +1.
    return tuple(1 if ((counter >> (m - 1 - t)) & 1) == 0 else -1 for t in range(m))


def freeze_many(model: IsingModel, qubits, prune: bool = False) -> list[SubProblem]:
    """All sub-problems from freezing ``qubits``, densely re-indexed.

    Returns 2^m sub-problems, ordered by sign pattern counter (+1 first).
    With ``prune=True`` and an all-zero parent linear part, only the
    2^(m-1) patterns whose first frozen value is +1 are returned; each
    records its omitted twin in ``mirror_of``. m=0 yields the parent
    itself as a single identity sub-problem.
    """
    qubits = [int(q) for q in qubits]
    m = len(qubits)
    if len(set(qubits)) != m:
        raise ValueError("frozen variable indices must be distinct")
    for k in qubits:
        if not 0 <= k < model.num_vars:
            raise ValueError(f"variable {k} out of range for {model.num_vars} variables")
    if m > MAX_FROZEN:
        raise CapacityError(f"freezing {m} variables would create 2^{m} sub-problems (cap {MAX_FROZEN})")

    parent_id = model_hash(model)
    frozen_pos = {k: t for t, k in enumerate(qubits)}
    remaining = [i for i in range(model.num_vars) if i not in frozen_pos]
    old_to_new = {old: new for new, old in enumerate(remaining)}
    index_map = tuple(remaining)

    child_quadratic: dict[tuple[int, int], float] = {}
    coupling: dict[int, dict[int, float]] = {}  # unfrozen j -> {frozen slot t: J}
    frozen_edges: list[tuple[int, int, float]] = []  # (slot t, slot u, J)
    for (i, j), w in model.quadratic.items():
        ti, tj = frozen_pos.get(i), frozen_pos.get(j)
        if ti is not None and tj is not None:
            frozen_edges.append((ti, tj, w))
        elif ti is not None:
            coupling.setdefault(j, {})[ti] = w
        elif tj is not None:
            coupling.setdefault(i, {})[tj] = w
        else:
            child_quadratic[(old_to_new[i], old_to_new[j])] = w

    # The linear support is shared by every sign pattern: that keeps the
    # whole family on one sparsity pattern even when a sum cancels to 0.
    support = sorted((set(model.linear) - set(qubits)) | set(coupling))
    h_frozen = [model.linear.get(k, 0.0) for k in qubits]
    symmetric = all(v == 0.0 for v in model.linear.values())
    do_prune = prune and symmetric and m >= 1
    count = (1 << m) >> 1 if do_prune else (1 << m)

    subs: list[SubProblem] = []
    for c in range(count):
        values = _pattern_values(c, m)
        linear: dict[int, float] = {}
        for j in support:
            hj = model.linear.get(j, 0.0)
            for t, w in coupling.get(j, {}).items():
                hj += values[t] * w
            linear[old_to_new[j]] = hj
        offset = model.offset
        for t in range(m):
            offset += values[t] * h_frozen[t]
        for t, u, w in frozen_edges:
            offset += values[t] * values[u] * w
        mirror = None
        if do_prune:
            twin = tuple(zip(qubits, (-v for v in values)))
            mirror = subproblem_id(parent_id, twin)
        subs.append(SubProblem(
            parent_id=parent_id,
            frozen=FrozenAssignment(tuple(zip(qubits, values))),
            model=IsingModel(len(remaining), linear, child_quadratic, offset),
            index_map=index_map,
            mirror_of=mirror,
        ))
    return subs


def decode(sub: SubProblem, sub_assignment, parent: IsingModel) -> list[DecodedSolution]:
    """Lift a sub-problem assignment into the parent space.

    Returns the direct solution and, when the sub-problem has a pruned
    mirror twin, the all-spins-flipped solution attributed to that twin.
    """
    if len(sub_assignment) != sub.model.num_vars:
        raise ValueError(
            f"assignment has {len(sub_assignment)} entries, sub-problem has {sub.model.num_vars}"
        )
    full = [0] * parent.num_vars
    for new, old in enumerate(sub.index_map):
        full[old] = int(sub_assignment[new])
    for k, v in sub.frozen.entries:
        full[k] = v
    full_t = tuple(full)
    out = [DecodedSolution(full_t, evaluate(parent, full_t), sub.id, False)]
    if sub.mirror_of is not None:
        flipped = tuple(-z for z in full_t)
        out.append(DecodedSolution(flipped, evaluate(parent, flipped), sub.mirror_of, True))
    return out


def aggregate(solutions) -> DecodedSolution:
    """The minimum-value solution; ties broken lexicographically (-1 < +1)."""
    solutions = list(solutions)
    if not solutions:
        raise ValueError("cannot aggregate an empty solution list")
    return min(solutions, key=lambda s: (s.value, s.assignment))


def subproblem_to_dict(sub: SubProblem) -> dict:
    from .ising import model_to_dict

    return {
        "parent_hash": sub.parent_id,
        "frozen": [[k, v] for k, v in sub.frozen.entries],
        "model": model_to_dict(sub.model),
        "index_map": list(sub.index_map),
        "mirror_of": sub.mirror_of,
    }


def subproblem_from_dict(data: dict) -> SubProblem:
    from .ising import model_from_dict

    return SubProblem(
        parent_id=data["parent_hash"],
        frozen=FrozenAssignment(tuple((int(k), int(v)) for k, v in data["frozen"])),
        model=model_from_dict(data["model"]),
        index_map=tuple(int(i) for i in data["index_map"]),
        mirror_of=data.get("mirror_of"),
    )
