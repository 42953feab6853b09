"""Sparse Ising spin models and exact reference tooling.

The energy convention is C(z) = sum_i h_i z_i + sum_{i<j} J_ij z_i z_j
+ offset, with spins z_i in {-1, +1}. Assignment enumeration shares one
bit convention with the statevector code: index bit i holds variable i,
and bit value b maps to spin z = 1 - 2*b (bit 0 <-> spin +1).

Random instances draw edge weights uniformly from {-1, +1} with all
linear coefficients zero. Generation uses numpy's PCG64 bit generator,
whose stream is documented and stable across platforms, so a seed pins
an instance bit-for-bit.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

BRUTE_FORCE_MAX_VARS = 24
_CHUNK = 1 << 20


class CapacityError(RuntimeError):
    """An input exceeds a hard resource guard (2^N blowup and friends)."""


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class IsingModel:
    """Sparse coefficients (h, J, offset) of a spin problem.

    ``quadratic`` keys are normalized to ordered pairs (i, j) with i < j;
    unordered duplicates passed to the constructor are merged by summing.
    Zero-valued coefficients may be stored: evaluation ignores the
    distinction but the stored key set defines the structural sparsity
    pattern used by circuit templates.
    """

    num_vars: int
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise ValueError(f"num_vars must be non-negative, got {self.num_vars}")
        lin: dict[int, float] = {}
        for i, h in self.linear.items():
            i = int(i)
            if not 0 <= i < self.num_vars:
                raise ValueError(f"linear index {i} out of range for {self.num_vars} variables")
            lin[i] = lin.get(i, 0.0) + float(h)
        quad: dict[tuple[int, int], float] = {}
        for (i, j), w in self.quadratic.items():
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"quadratic term ({i},{j}) couples a variable to itself")
            if not (0 <= i < self.num_vars and 0 <= j < self.num_vars):
                raise ValueError(f"quadratic pair ({i},{j}) out of range for {self.num_vars} variables")
            key = (i, j) if i < j else (j, i)
            quad[key] = quad.get(key, 0.0) + float(w)
        # Sorted insertion order makes every downstream iteration deterministic.
        object.__setattr__(self, "linear", dict(sorted(lin.items())))
        object.__setattr__(self, "quadratic", dict(sorted(quad.items())))
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True)
class GraphSpec:
    """Recipe for one random benchmark instance."""

    kind: str  # "ba" | "regular3" | "sk"
    num_nodes: int
    ba_degree: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("ba", "regular3", "sk"):
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.kind == "ba" and not self.num_nodes > self.ba_degree >= 1:
            raise ValueError("ba requires num_nodes > ba_degree >= 1")
        if self.kind == "regular3" and (self.num_nodes < 4 or self.num_nodes % 2):
            raise ValueError("regular3 requires an even node count >= 4")
        if self.kind == "sk" and self.num_nodes < 2:
            raise ValueError("sk requires at least 2 nodes")

    def build(self) -> IsingModel:
        if self.kind == "ba":
            return generate_ba(self.num_nodes, self.ba_degree, self.seed)
        if self.kind == "regular3":
            return generate_regular3(self.num_nodes, self.seed)
        return generate_sk(self.num_nodes, self.seed)


def evaluate(model: IsingModel, assignment) -> float:
    """Energy of one spin assignment (entries in {-1, +1}).

    Term order here is mirrored exactly by the vectorized scan in
    ``_energies_range`` so that both produce bitwise-identical floats.
    """
    if len(assignment) != model.num_vars:
        raise ValueError(
            f"assignment has {len(assignment)} entries, model has {model.num_vars} variables"
        )
    total = 0.0
    for i, h in model.linear.items():
        total += h * assignment[i]
    for (i, j), w in model.quadratic.items():
        total += w * (assignment[i] * assignment[j])
    return total + model.offset


def _energies_range(model: IsingModel, lo: int, hi: int) -> np.ndarray:
    # Must accumulate terms in the same order as evaluate() (see docstring there).
    s = np.arange(lo, hi, dtype=np.int64)
    total = np.zeros(hi - lo)
    for i, h in model.linear.items():
        total += h * (1.0 - 2.0 * ((s >> i) & 1))
    for (i, j), w in model.quadratic.items():
        zi = 1 - 2 * ((s >> i) & 1)
        zj = 1 - 2 * ((s >> j) & 1)
        total += w * (zi * zj)
    return total + model.offset


def energies(model: IsingModel) -> np.ndarray:
    """Energy of every assignment, indexed by the shared bit convention."""
    if model.num_vars > BRUTE_FORCE_MAX_VARS:
        raise CapacityError(f"energy table for {model.num_vars} variables exceeds the 2^{BRUTE_FORCE_MAX_VARS} guard")
    size = 1 << model.num_vars
    out = np.empty(size)
    for lo in range(0, size, _CHUNK):
        hi = min(lo + _CHUNK, size)
        out[lo:hi] = _energies_range(model, lo, hi)
    return out


def _spins(index: int, n: int) -> tuple[int, ...]:
    return tuple(1 - 2 * ((index >> i) & 1) for i in range(n))


def brute_force_min(model: IsingModel) -> tuple[float, list[tuple[int, ...]]]:
    """Exact global minimum and all argmin assignments by enumeration.

    Argmins are returned in lexicographic order (-1 before +1). The
    reported minimum equals evaluate() on each argmin exactly, because
    both paths accumulate terms in the same order.
    """
    n = model.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise CapacityError(f"brute force over {n} variables exceeds the 2^{BRUTE_FORCE_MAX_VARS} guard")
    if n == 0:
        return model.offset, [()]
    best = math.inf
    hits: list[int] = []
    for lo in range(0, 1 << n, _CHUNK):
        hi = min(lo + _CHUNK, 1 << n)
        e = _energies_range(model, lo, hi)
        chunk_min = float(e.min())
        if chunk_min < best:
            best = chunk_min
            hits = [lo + int(k) for k in np.flatnonzero(e == chunk_min)]
        elif chunk_min == best:
            hits.extend(lo + int(k) for k in np.flatnonzero(e == chunk_min))
    return best, sorted(_spins(s, n) for s in hits)


def degree(model: IsingModel, i: int) -> int:
    """Number of nonzero quadratic terms incident to variable i."""
    if not 0 <= i < model.num_vars:
        raise ValueError(f"variable {i} out of range for {model.num_vars} variables")
    return sum(1 for (a, b), w in model.quadratic.items() if w != 0.0 and i in (a, b))


def _draw_weights(rng: np.random.Generator, edges) -> dict[tuple[int, int], float]:
    # Weights drawn after the topology, in sorted edge order, so the
    # stream consumed by topology generation never shifts the weights.
    return {e: float(1 - 2 * int(rng.integers(2))) for e in sorted(edges)}


def generate_ba(n: int, d_ba: int, seed: int) -> IsingModel:
    """Preferential-attachment (power-law) instance.

    Bootstrap: nodes 0..d_ba form a connected path, then each remaining
    node attaches d_ba edges to distinct targets chosen proportionally
    to current degree. d_ba=1 therefore yields a tree with n-1 edges.
    """
    if d_ba < 1 or n <= d_ba:
        raise ValueError(f"ba generator requires n > d_ba >= 1, got n={n}, d_ba={d_ba}")
    rng = _rng(seed)
    edges: list[tuple[int, int]] = [(v, v + 1) for v in range(d_ba)]
    repeated: list[int] = [q for e in edges for q in e]
    for v in range(d_ba + 1, n):
        targets: set[int] = set()
        while len(targets) < d_ba:
            targets.add(int(repeated[rng.integers(len(repeated))]))
        for t in sorted(targets):
            edges.append((t, v))
        repeated.extend(sorted(targets))
        repeated.extend([v] * d_ba)
    return IsingModel(n, {}, _draw_weights(rng, edges), 0.0)


def generate_regular3(n: int, seed: int) -> IsingModel:
    """Random 3-regular simple graph via the pairing model with rejection."""
    if n < 4 or n % 2:
        raise ValueError(f"regular3 generator requires an even n >= 4, got {n}")
    rng = _rng(seed)
    stubs = np.repeat(np.arange(n), 3)
    while True:
        # Whole-matching rejection keeps the distribution uniform over
        # simple 3-regular graphs; acceptance odds are bounded away from 0.
        pairs = rng.permutation(stubs).reshape(-1, 2)
        edges: set[tuple[int, int]] = set()
        for a, b in pairs:
            a, b = int(a), int(b)
            if a == b:
                break
            key = (a, b) if a < b else (b, a)
            if key in edges:
                break
            edges.add(key)
        else:
            return IsingModel(n, {}, _draw_weights(rng, edges), 0.0)


def generate_sk(n: int, seed: int) -> IsingModel:
    """Fully connected instance: every pair carries a +/-1 coupling."""
    if n < 2:
        raise ValueError(f"sk generator requires n >= 2, got {n}")
    rng = _rng(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return IsingModel(n, {}, _draw_weights(rng, edges), 0.0)


def model_to_dict(model: IsingModel) -> dict:
    return {
        "num_vars": model.num_vars,
        "linear": {str(i): h for i, h in model.linear.items()},
        "quadratic": {f"{i},{j}": w for (i, j), w in model.quadratic.items()},
        "offset": model.offset,
    }


def model_from_dict(data: dict) -> IsingModel:
    linear = {int(k): float(v) for k, v in data.get("linear", {}).items()}
    quadratic: dict[tuple[int, int], float] = {}
    for key, v in data.get("quadratic", {}).items():
        i, j = (int(part) for part in key.split(","))
        if i >= j:
            raise ValueError(f"quadratic key {key!r} must satisfy i < j")
        quadratic[(i, j)] = float(v)
    return IsingModel(int(data["num_vars"]), linear, quadratic, float(data.get("offset", 0.0)))


def save_model(model: IsingModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> IsingModel:
    with open(path) as fh:
        return model_from_dict(json.load(fh))


def model_hash(model: IsingModel) -> str:
    """Short stable identifier for a model's exact contents."""
    canonical = json.dumps(model_to_dict(model), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]
