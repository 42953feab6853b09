"""Exact statevector simulation of bound circuits at desk scale.

Amplitudes use little-endian basis ordering: index bit q is qubit q, and
a measured bit b maps to spin z = 1 - 2*b (bit 0 <-> +1), the same
convention the energy tables use, so a statevector index doubles as a
spin-assignment index.

Noise is a global mixture surrogate: with probability eps a shot is
drawn from the ideal distribution, otherwise uniformly at random. That
is enough to reproduce the washed-out parameter landscapes noisy
hardware shows without a density-matrix simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .circuit import QaoaCircuit, bind, build_qaoa
from .ising import CapacityError, IsingModel, brute_force_min, energies

MAX_SIM_QUBITS = 22

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def _circuit_width(circ) -> int:
    return circ.num_qubits if hasattr(circ, "num_qubits") else circ.num_physical


def _apply_1q(state: np.ndarray, u: np.ndarray, q: int) -> None:
    v = state.reshape(-1, 2, 1 << q)
    a = v[:, 0, :].copy()
    b = v[:, 1, :]
    v[:, 0, :] = u[0, 0] * a + u[0, 1] * b
    v[:, 1, :] = u[1, 0] * a + u[1, 1] * b


def _apply_rz(state: np.ndarray, theta: float, q: int) -> None:
    v = state.reshape(-1, 2, 1 << q)
    v[:, 0, :] *= np.exp(-0.5j * theta)
    v[:, 1, :] *= np.exp(0.5j * theta)


def _axis_slices(n: int, fixed: dict[int, int]) -> tuple:
    sl: list = [slice(None)] * n
    for qubit, bit in fixed.items():
        sl[n - 1 - qubit] = bit
    return tuple(sl)


def _apply_cnot(state: np.ndarray, control: int, target: int, n: int) -> None:
    v = state.reshape([2] * n)
    s10 = _axis_slices(n, {control: 1, target: 0})
    s11 = _axis_slices(n, {control: 1, target: 1})
    tmp = v[s10].copy()
    v[s10] = v[s11]
    v[s11] = tmp


def _apply_swap(state: np.ndarray, a: int, b: int, n: int) -> None:
    v = state.reshape([2] * n)
    s01 = _axis_slices(n, {a: 0, b: 1})
    s10 = _axis_slices(n, {a: 1, b: 0})
    tmp = v[s01].copy()
    v[s01] = v[s10]
    v[s10] = tmp


def simulate(circ) -> np.ndarray:
    """Statevector after all gates, measurements ignored; unit norm."""
    n = _circuit_width(circ)
    if n > MAX_SIM_QUBITS:
        raise CapacityError(f"{n} qubits exceeds the {MAX_SIM_QUBITS}-qubit simulation guard")
    state = np.zeros(1 << n, dtype=complex)
    state[0] = 1.0
    for g in circ.gates:
        if g.kind == "MEASURE":
            continue
        if g.kind == "H":
            _apply_1q(state, _H, g.qubits[0])
            continue
        if g.kind == "CNOT":
            _apply_cnot(state, g.qubits[0], g.qubits[1], n)
            continue
        if g.kind == "SWAP":
            _apply_swap(state, g.qubits[0], g.qubits[1], n)
            continue
        if g.angle is None or not g.angle.is_bound:
            raise ValueError(f"cannot simulate unbound angle on {g.kind}{g.qubits}")
        theta = g.angle.value
        if g.kind == "RZ":
            _apply_rz(state, theta, g.qubits[0])
        else:  # RX
            c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
            _apply_1q(state, np.array([[c, -1j * s], [-1j * s, c]]), g.qubits[0])
    norm = np.linalg.norm(state)
    assert abs(norm - 1.0) < 1e-10, f"statevector norm drifted to {norm}"
    return state


def expectation(model: IsingModel, state: np.ndarray) -> float:
    """Energy expectation sum_z |amp(z)|^2 C(z), offset included."""
    if len(state) != 1 << model.num_vars:
        raise ValueError(
            f"state has dimension {len(state)}, model needs {1 << model.num_vars}"
        )
    probs = np.abs(state) ** 2
    return float(probs @ energies(model))


@dataclass(frozen=True)
class OutputDistribution:
    """Measured counts per bitstring; qubit 0 is the rightmost character."""

    counts: dict[str, int]
    shots: int


def _counts_dict(raw: np.ndarray, n: int) -> dict[str, int]:
    return {format(i, f"0{n}b"): int(c) for i, c in enumerate(raw) if c > 0}


def sample(state: np.ndarray, shots: int, seed: int = 0) -> OutputDistribution:
    """Multinomial draw from |amp|^2; deterministic per seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    n = int(math.log2(len(state)))
    probs = np.abs(state) ** 2
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    return OutputDistribution(_counts_dict(rng.multinomial(shots, probs), n), shots)


def noisy_sample(state: np.ndarray, shots: int, eps: float, seed: int = 0) -> OutputDistribution:
    """Global-mixture noise: each shot is ideal w.p. eps, else uniform."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    n = int(math.log2(len(state)))
    size = 1 << n
    probs = np.abs(state) ** 2
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    # eps == 1 must replay sample()'s exact stream, so skip the binomial split.
    if eps == 1.0:
        ideal = shots
    elif eps == 0.0:
        ideal = 0
    else:
        ideal = int(rng.binomial(shots, eps))
    raw = np.zeros(size, dtype=np.int64)
    if ideal:
        raw += rng.multinomial(ideal, probs)
    if shots - ideal:
        raw += np.bincount(rng.integers(0, size, size=shots - ideal), minlength=size)
    return OutputDistribution(_counts_dict(raw, n), shots)


def distribution_to_dict(dist: OutputDistribution) -> dict:
    return {"shots": dist.shots, "counts": dict(sorted(dist.counts.items()))}


def distribution_from_dict(data: dict) -> OutputDistribution:
    return OutputDistribution({k: int(v) for k, v in data["counts"].items()}, int(data["shots"]))


@dataclass(frozen=True)
class ParamPoint:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]


@dataclass(frozen=True)
class OptimizerConfig:
    num_starts: int = 8
    max_iter: int = 400  # total simplex-iteration budget across starts
    xatol: float = 1e-4
    fatol: float = 1e-7


@dataclass(frozen=True)
class OptimizeResult:
    point: ParamPoint
    value: float
    trace: list[float] = field(default_factory=list)
    converged: bool = False


def optimize(model: IsingModel, circ: QaoaCircuit,
             config: OptimizerConfig | None = None, seed: int = 0) -> OptimizeResult:
    """Multi-start Nelder-Mead over the 2p angles, minimizing expectation.

    Starts are uniform in gamma in [0, pi) and beta in [0, pi/2);
    deterministic per seed. A non-converged run still returns the best
    point found, flagged via ``converged``.
    """
    cfg = config or OptimizerConfig()
    p = circ.p
    rng = np.random.default_rng(seed)
    starts = [
        np.concatenate([rng.uniform(0.0, math.pi, p), rng.uniform(0.0, math.pi / 2.0, p)])
        for _ in range(cfg.num_starts)
    ]
    table = energies(model)
    memo: dict[bytes, float] = {}

    def objective(x: np.ndarray) -> float:
        key = x.tobytes()
        if key not in memo:
            state = simulate(bind(circ, x[:p], x[p:]))
            memo[key] = float((np.abs(state) ** 2) @ table)
        return memo[key]

    trace: list[float] = []
    best_val = math.inf
    best_x = starts[0]
    converged = False
    per_start = max(1, cfg.max_iter // cfg.num_starts)
    for x0 in starts:
        res = minimize(
            objective, x0, method="Nelder-Mead",
            callback=lambda xk: trace.append(objective(xk)),
            options={"maxiter": per_start, "xatol": cfg.xatol, "fatol": cfg.fatol},
        )
        converged = converged or bool(res.success)
        if res.fun < best_val:
            best_val, best_x = float(res.fun), res.x
    point = ParamPoint(tuple(float(v) for v in best_x[:p]), tuple(float(v) for v in best_x[p:]))
    return OptimizeResult(point, best_val, trace, converged)


@dataclass(frozen=True)
class Landscape:
    """Approximation-ratio values over a (gamma, beta) grid (rows = gamma)."""

    grid: np.ndarray
    gamma_axis: np.ndarray
    beta_axis: np.ndarray


def landscape(model: IsingModel, grid_rows: int, grid_cols: int,
              p: int = 1, eps: float | None = None) -> Landscape:
    """AR = EV / C_min on a grid spanning gamma in [0,pi), beta in [0,pi/2).

    With ``eps`` given, the exact mixture expectation
    eps*EV + (1-eps)*offset is used (a uniform draw averages every h and
    J term to zero), keeping noisy landscapes deterministic.
    """
    if p != 1:
        raise ValueError("landscape scans are defined for p=1 only")
    c_min, _ = brute_force_min(model)
    if c_min == 0.0:
        raise ValueError("approximation ratio is undefined when the global minimum is 0")
    circ = build_qaoa(model, 1)
    table = energies(model)
    gamma_axis = np.linspace(0.0, math.pi, grid_rows, endpoint=False)
    beta_axis = np.linspace(0.0, math.pi / 2.0, grid_cols, endpoint=False)
    grid = np.empty((grid_rows, grid_cols))
    for r, g in enumerate(gamma_axis):
        for c, b in enumerate(beta_axis):
            state = simulate(bind(circ, [g], [b]))
            ev = float((np.abs(state) ** 2) @ table)
            if eps is not None:
                ev = eps * ev + (1.0 - eps) * model.offset
            grid[r, c] = ev / c_min
    return Landscape(grid, gamma_axis, beta_axis)


def landscape_to_csv(ls: Landscape, fh) -> None:
    """Header row of beta values, first column gamma values, cells AR."""
    fh.write("," + ",".join(repr(float(b)) for b in ls.beta_axis) + "\n")
    for g, row in zip(ls.gamma_axis, ls.grid):
        fh.write(repr(float(g)) + "," + ",".join(repr(float(v)) for v in row) + "\n")


def extract_logical_state(state: np.ndarray, final_layout, num_logical: int) -> np.ndarray:
    """Amplitudes of the logical register inside a wider physical state.

    Valid because unused physical qubits end in |0>: routing only ever
    permutes the register, so the physical state is the logical one at
    the layout positions, tensored with |0...0>.
    """
    s = np.arange(1 << num_logical)
    idx = np.zeros(1 << num_logical, dtype=np.int64)
    for logical, phys in enumerate(final_layout[:num_logical]):
        idx |= ((s >> logical) & 1) << phys
    return state[idx]
