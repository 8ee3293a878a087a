"""Enumeration and angle optimisation of controlled-transfer gate networks.

Three families are supported:

``SEQUENTIAL``
    Every length-``p`` gate sequence with no gate repeated back to back, with
    the first gate fixed to one representative per symmetry orbit.
``PERMUTATION``
    Orderings of the complete gate set, one per symmetry orbit.
``FREEFORM``
    Nearest-neighbour chain networks whose angles come from a discrete set,
    with the last gate at ``pi/2``.

Symmetry is qubit relabeling for all-pairs topologies and chain reversal for
chains; the lexicographically smallest member of an orbit represents it.

Continuous optimisation is a seeded multi-start: a 5 degree grid (one or two
free angles) or 200 uniform random starts (three or more), each refined by a
batched Levenberg-Marquardt iteration on the population residual. Angles are
optimised on the whole real line; folding into ``[0, pi]`` happens afterwards,
so solutions at exactly ``0`` or ``pi`` are interior points for the optimiser.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from pseudopure.errors import DegenerateInitial, OptimizerFailure, UnsupportedSpec
from pseudopure.gatekernel import GateNetwork, TransferGate, fold_angle, pair_indices, transfer
from pseudopure.statemodel import EQUAL_TOL, PopulationState, target_pops, thermal_state

HALF_PI = math.pi / 2
DEFAULT_DISCRETE = (HALF_PI, math.pi)
DEFAULT_THRESHOLD = 1e-7
CLASS_TOL = 1e-4

GRID_STEP_DEG = 5.0
RANDOM_STARTS = 200
LM_MAX_ITER = 150

# fully specified candidates are evaluated in fixed-size blocks so results do
# not depend on how work is split across processes
FIXED_CHUNK = 8192
CONTINUOUS_CHUNK = 8


class Slot(NamedTuple):
    """One gate position in a candidate; ``theta=None`` marks a free angle."""

    control: int
    target: int
    theta: float | None = None

    @property
    def pair(self) -> tuple[int, int]:
        return (self.control, self.target)


class AngleMode(enum.Enum):
    HALF_PI = "half-pi"
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


class Family(enum.Enum):
    SEQUENTIAL = "sequential"
    PERMUTATION = "permutation"
    FREEFORM = "freeform"


@dataclass(frozen=True)
class Topology:
    kind: str
    n: int = 3

    def __post_init__(self):
        if self.kind not in ("all-pairs", "chain"):
            raise ValueError(f"unknown topology {self.kind!r}")
        if self.n < 2:
            raise ValueError("topology needs n >= 2")

    @classmethod
    def all_pairs(cls, n: int = 3) -> Topology:
        return cls("all-pairs", n)

    @classmethod
    def chain(cls, n: int = 3) -> Topology:
        return cls("chain", n)

    def gates(self) -> list[tuple[int, int]]:
        """Available directed gates, sorted."""
        if self.kind == "all-pairs":
            return [(c, t) for c in range(1, self.n + 1) for t in range(1, self.n + 1) if c != t]
        out = []
        for q in range(1, self.n):
            out += [(q, q + 1), (q + 1, q)]
        return sorted(out)

    def relabelings(self) -> list[dict[int, int]]:
        """The symmetry group as qubit maps (identity first)."""
        qubits = range(1, self.n + 1)
        if self.kind == "all-pairs":
            return [dict(zip(qubits, perm)) for perm in itertools.permutations(qubits)]
        return [{q: q for q in qubits}, {q: self.n + 1 - q for q in qubits}]


def relabel(pairs: Sequence[tuple[int, int]], mapping: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple((mapping[c], mapping[t]) for c, t in pairs)


def canonical_form(pairs: Sequence[tuple[int, int]], topology: Topology) -> tuple[tuple[int, int], ...]:
    """Lexicographically smallest image of a gate pattern under the topology's symmetries."""
    return min(relabel(pairs, m) for m in topology.relabelings())


def is_canonical(pairs: Sequence[tuple[int, int]], topology: Topology) -> bool:
    return tuple(pairs) == canonical_form(pairs, topology)


@dataclass(frozen=True)
class SearchSpec:
    topology: Topology
    p: int
    angle_mode: AngleMode = AngleMode.CONTINUOUS
    family: Family = Family.SEQUENTIAL
    repetitions: int = 1
    initial: PopulationState | None = None
    perfect_threshold: float = DEFAULT_THRESHOLD
    discrete_angles: tuple[float, ...] = DEFAULT_DISCRETE
    seed: int = 0

    def __post_init__(self):
        if self.topology.n > 3:
            raise UnsupportedSpec("exhaustive searches are only defined for two and three qubits")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        n_gates = len(self.topology.gates())
        if self.family is Family.PERMUTATION and self.p != n_gates:
            raise UnsupportedSpec(f"permutation family needs p == {n_gates} for this topology, got {self.p}")
        if self.family is Family.FREEFORM:
            if self.topology.kind != "chain" or self.angle_mode is not AngleMode.DISCRETE:
                raise UnsupportedSpec("free-form search is defined for chain topology with discrete angles")
            if self.p < 2:
                raise UnsupportedSpec("free-form search needs p >= 2")
        if self.initial is None:
            object.__setattr__(self, "initial", thermal_state([1.0] * self.topology.n))
        elif self.initial.n_qubits != self.topology.n:
            raise ValueError("initial state size does not match the topology")
        object.__setattr__(self, "discrete_angles", tuple(float(a) for a in self.discrete_angles))

    @property
    def n(self) -> int:
        return self.topology.n


def expected_count(spec: SearchSpec) -> int:
    """Closed-form number of candidates :func:`enumerate_networks` yields."""
    gates = spec.topology.gates()
    g = len(gates)
    first = len({canonical_form([x], spec.topology) for x in gates})
    k = len(spec.discrete_angles)
    if spec.family is Family.SEQUENTIAL:
        count = first * (g - 1) ** (spec.p - 1)
        if spec.angle_mode is AngleMode.DISCRETE:
            count *= k ** (spec.p - 1)
        return count
    if spec.family is Family.PERMUTATION:
        count = math.factorial(g) // len(spec.topology.relabelings())
        if spec.angle_mode is AngleMode.DISCRETE:
            count *= k**g
        return count
    # free-form: first gate up to mirror, then (g-1)*k per middle gate, last at pi/2
    return first * k * ((g - 1) * k) ** (spec.p - 2) * (g - 1)


def _sequential_patterns(topology: Topology, p: int):
    gates = topology.gates()
    firsts = sorted({canonical_form([g], topology)[0] for g in gates})

    def extend(prefix):
        if len(prefix) == p:
            yield tuple(prefix)
            return
        for g in gates:
            if g != prefix[-1]:
                yield from extend(prefix + [g])

    for f in firsts:
        yield from extend([f])


def _permutation_patterns(topology: Topology):
    for perm in itertools.permutations(topology.gates()):
        if is_canonical(perm, topology):
            yield perm


def enumerate_networks(spec: SearchSpec) -> list[tuple[Slot, ...]]:
    """Candidate networks for ``spec`` in canonical order.

    Free angles are ``None``. In continuous mode the last gate is pinned to
    ``pi/2``; discrete and half-pi modes produce fully specified candidates.
    """
    mode = spec.angle_mode
    angles = spec.discrete_angles
    slot_cache: dict[tuple, Slot] = {}

    def slot(pair, theta):
        key = (pair, theta)
        if key not in slot_cache:
            slot_cache[key] = Slot(pair[0], pair[1], theta)
        return slot_cache[key]

    out: list[tuple[Slot, ...]] = []
    if spec.family is Family.FREEFORM:
        gates = spec.topology.gates()
        firsts = sorted({canonical_form([g], spec.topology)[0] for g in gates})
        middle = [(g, a) for g in gates for a in angles]
        for f in firsts:
            for a0 in angles:
                stack = [[slot(f, a0)]]
                while stack:
                    cur = stack.pop()
                    prev = cur[-1].pair
                    if len(cur) == spec.p - 1:
                        for g in gates:
                            if g != prev:
                                out.append(tuple(cur) + (slot(g, HALF_PI),))
                        continue
                    # reversed so the stack pops in sorted order
                    for g, a in reversed(middle):
                        if g != prev:
                            stack.append(cur + [slot(g, a)])
        return out

    if spec.family is Family.SEQUENTIAL:
        patterns = _sequential_patterns(spec.topology, spec.p)
    else:
        patterns = _permutation_patterns(spec.topology)

    for pat in patterns:
        p = len(pat)
        if mode is AngleMode.HALF_PI:
            out.append(tuple(slot(g, HALF_PI) for g in pat))
        elif mode is AngleMode.CONTINUOUS:
            out.append(tuple(slot(g, None) for g in pat[:-1]) + (slot(pat[-1], HALF_PI),))
        elif spec.family is Family.PERMUTATION:
            for combo in itertools.product(angles, repeat=p):
                out.append(tuple(slot(g, a) for g, a in zip(pat, combo)))
        else:
            for combo in itertools.product(angles, repeat=p - 1):
                out.append(tuple(slot(g, a) for g, a in zip(pat, combo)) + (slot(pat[-1], HALF_PI),))
    return out


# --------------------------------------------------------------------------
# evaluation


def _pairs_for(n: int, slots: Sequence[Slot]):
    return [pair_indices(n, s.control, s.target) for s in slots]


def _forward(pops0: np.ndarray, pair_idx, thetas: np.ndarray, free_col: list[int], reps: int):
    """States and d(state)/d(free angle) for a batch of angle vectors.

    ``thetas`` is ``(B, p)``; ``free_col[j]`` is the Jacobian column of slot
    ``j`` or ``-1`` if that angle is fixed.
    """
    batch = thetas.shape[0]
    k = max(free_col) + 1
    state = np.broadcast_to(pops0, (batch, pops0.shape[0])).copy()
    jac = np.zeros((batch, k, pops0.shape[0]))
    cos = np.cos(thetas)
    sin = np.sin(thetas)
    for _ in range(reps):
        for j, (s0, s1) in enumerate(pair_idx):
            c = cos[:, j : j + 1]
            a, b = state[:, s0], state[:, s1]
            half_diff = (a - b) / 2
            shift = (a - b) * ((1.0 - c) / 2)
            state[:, s0] = a - shift
            state[:, s1] = b + shift
            if k:
                ja, jb = jac[:, :, s0], jac[:, :, s1]
                jshift = (ja - jb) * ((1.0 - c) / 2)[:, :, None]
                jac[:, :, s0] = ja - jshift
                jac[:, :, s1] = jb + jshift
                col = free_col[j]
                if col >= 0:
                    ds = half_diff * sin[:, j : j + 1]
                    jac[:, col, s0] -= ds
                    jac[:, col, s1] += ds
    return state, jac


def _levenberg_marquardt(pops0, target, pair_idx, thetas, free_col, reps, max_iter=LM_MAX_ITER):
    """Batched damped Gauss-Newton on ``state - target`` over the free angles.

    Returns refined angles, squared residual norms and a per-start flag that
    is set once a start stops making progress (zero residual, a negligible
    accepted step or cost decrease, or damping so large that no step is
    accepted).
    """
    free = [j for j, col in enumerate(free_col) if col >= 0]
    eye = np.eye(len(free))
    thetas = thetas.copy()
    state, jac = _forward(pops0, pair_idx, thetas, free_col, reps)
    resid = state - target
    cost = np.einsum("bi,bi->b", resid, resid)
    scale = float(np.dot(pops0 - target, pops0 - target))
    lam = np.full(thetas.shape[0], 1e-3)
    converged = cost <= 1e-26 * scale
    for _ in range(max_iter):
        idx = np.flatnonzero(~converged)
        if idx.size == 0:
            break
        ja = jac[idx]
        grad = np.einsum("bki,bi->bk", ja, resid[idx])
        hess = np.einsum("bki,bli->bkl", ja, ja)
        diag = np.diagonal(hess, axis1=1, axis2=2)
        damped = hess + lam[idx, None, None] * eye * (1.0 + diag[:, :, None])
        step = -np.linalg.solve(damped, grad[:, :, None])[:, :, 0]
        trial = thetas[idx]
        trial[:, free] += step
        t_state, t_jac = _forward(pops0, pair_idx, trial, free_col, reps)
        t_resid = t_state - target
        t_cost = np.einsum("bi,bi->b", t_resid, t_resid)

        improved = t_cost < cost[idx]
        gain = np.where(improved, cost[idx] - t_cost, 0.0)
        acc = idx[improved]
        thetas[acc] = trial[improved]
        state[acc] = t_state[improved]
        jac[acc] = t_jac[improved]
        resid[acc] = t_resid[improved]
        cost[acc] = t_cost[improved]
        lam[acc] = np.maximum(lam[acc] / 3, 1e-15)
        lam[idx[~improved]] *= 4

        tiny = cost[idx] <= 1e-26 * scale
        flat = improved & ((np.max(np.abs(step), axis=1) < 1e-13) | (gain <= 1e-15 * (cost[idx] + gain)))
        stalled = lam[idx] > 1e10
        converged[idx[tiny | flat | stalled]] = True
    return thetas, cost, converged


def _starts(n_free: int, rng: np.random.Generator, grid_step_deg: float, n_random: int) -> np.ndarray:
    if n_free <= 2:
        axis = np.radians(np.arange(0.0, 180.0 + 1e-9, grid_step_deg))
        mesh = np.meshgrid(*([axis] * n_free), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)
    return rng.uniform(0.0, math.pi, size=(n_random, n_free))


@dataclass(frozen=True)
class NetworkResult:
    network: GateNetwork
    angles: np.ndarray
    eps: float
    perfect: bool
    network_id: int = 0

    @property
    def gate_list(self) -> str:
        return "|".join(f"{g.control}-{g.target}" for g in self.network.gates)

    @property
    def angles_deg(self) -> list[float]:
        return [math.degrees(a) for a in self.angles]


def _make_result(slots, angles, eps, reps, threshold, network_id=0) -> NetworkResult:
    folded = np.array([fold_angle(a) for a in angles])
    net = GateNetwork(tuple(TransferGate(s.control, s.target, a) for s, a in zip(slots, folded)), reps)
    return NetworkResult(net, folded, float(eps), bool(eps <= threshold), network_id)


def _reference_norm(initial: PopulationState) -> tuple[np.ndarray, float]:
    target = target_pops(initial.pops)
    den = float(np.linalg.norm(initial.pops - target))
    if den <= EQUAL_TOL * max(1.0, float(np.max(np.abs(initial.pops)))):
        raise DegenerateInitial("initial state is already pseudo-pure; epsilon is undefined")
    return target, den


def optimize_network(
    gates: Sequence[Slot | tuple],
    initial: PopulationState,
    r: int = 1,
    mode: AngleMode = AngleMode.CONTINUOUS,
    *,
    seed: int | np.random.SeedSequence = 0,
    discrete_angles: Sequence[float] = DEFAULT_DISCRETE,
    perfect_threshold: float = DEFAULT_THRESHOLD,
    grid_step_deg: float = GRID_STEP_DEG,
    n_random: int = RANDOM_STARTS,
    network_id: int = 0,
) -> NetworkResult:
    """Best angles for one gate pattern, minimising epsilon after ``r`` passes.

    ``gates`` holds ``Slot`` values or ``(control, target[, theta])`` tuples.
    Unset angles are filled according to ``mode``; in continuous mode an unset
    last angle is pinned to ``pi/2``.
    """
    slots = [g if isinstance(g, Slot) else Slot(*g) for g in gates]
    if not slots:
        raise ValueError("empty gate list")
    n = initial.n_qubits
    target, den = _reference_norm(initial)
    pair_idx = _pairs_for(n, slots)

    if mode is AngleMode.CONTINUOUS and slots[-1].theta is None:
        slots[-1] = slots[-1]._replace(theta=HALF_PI)
    free = [j for j, s in enumerate(slots) if s.theta is None]
    base = np.array([HALF_PI if s.theta is None else s.theta for s in slots], dtype=float)

    if mode is AngleMode.HALF_PI or not free:
        states = _evaluate_batch(initial.pops, pair_idx, base[None, :], r)
        eps = float(np.linalg.norm(states[0] - target)) / den
        return _make_result(slots, base, eps, r, perfect_threshold, network_id)

    if mode is AngleMode.DISCRETE:
        combos = np.array(list(itertools.product(discrete_angles, repeat=len(free))), dtype=float)
        thetas = np.repeat(base[None, :], len(combos), axis=0)
        thetas[:, free] = combos
        states = _evaluate_batch(initial.pops, pair_idx, thetas, r)
        errs = np.linalg.norm(states - target, axis=1) / den
        i = int(np.argmin(errs))
        return _make_result(slots, thetas[i], errs[i], r, perfect_threshold, network_id)

    rng = np.random.default_rng(seed)
    starts = _starts(len(free), rng, grid_step_deg, n_random)
    thetas = np.repeat(base[None, :], len(starts), axis=0)
    thetas[:, free] = starts
    free_col = [-1] * len(slots)
    for col, j in enumerate(free):
        free_col[j] = col
    thetas, cost, ok = _levenberg_marquardt(initial.pops, target, pair_idx, thetas, free_col, r)
    # starts that hit the iteration cap still give a valid upper bound; only a
    # batch without a single finite cost is a failure
    finite = np.isfinite(cost) & np.isfinite(thetas).all(axis=1)
    if not finite.any():
        raise OptimizerFailure(f"no usable start for network {[s.pair for s in slots]}")
    pool = ok & finite if (ok & finite).any() else finite
    i = int(np.argmin(np.where(pool, cost, np.inf)))
    # re-evaluate on the plain kernel so eps does not carry optimiser round-off
    states = _evaluate_batch(initial.pops, pair_idx, thetas[i : i + 1], r)
    eps = float(np.linalg.norm(states[0] - target)) / den
    return _make_result(slots, thetas[i], eps, r, perfect_threshold, network_id)


def _evaluate_batch(pops0: np.ndarray, pair_idx, thetas: np.ndarray, reps: int) -> np.ndarray:
    """States for one gate pattern under many angle vectors."""
    cos = np.cos(thetas)
    state = np.broadcast_to(pops0, (thetas.shape[0], pops0.shape[0])).copy()
    for _ in range(reps):
        for j, (s0, s1) in enumerate(pair_idx):
            c = cos[:, j : j + 1]
            a, b = state[:, s0], state[:, s1]
            shift = (a - b) * ((1.0 - c) / 2)
            state[:, s0] = a - shift
            state[:, s1] = b + shift
    return state


def evaluate_fixed(candidates: Sequence[Sequence[Slot]], initial: PopulationState, r: int = 1) -> np.ndarray:
    """Epsilon of many fully specified candidates of equal length, vectorised.

    Candidates may use different gates at each position; rows are grouped by
    gate per position.
    """
    if not candidates:
        return np.zeros(0)
    n = initial.n_qubits
    target, den = _reference_norm(initial)
    p = len(candidates[0])
    pairs = np.array([[s.pair for s in cand] for cand in candidates], dtype=np.int64)
    cos = np.cos(np.array([[s.theta for s in cand] for cand in candidates], dtype=float))
    state = np.broadcast_to(initial.pops, (len(candidates), initial.dim)).copy()
    gate_ids = pairs[:, :, 0] * 16 + pairs[:, :, 1]
    for _ in range(r):
        for j in range(p):
            for gid in np.unique(gate_ids[:, j]):
                rows = np.flatnonzero(gate_ids[:, j] == gid)
                state[rows] = transfer(state[rows], n, int(gid) // 16, int(gid) % 16, cos[rows, j])
    return np.linalg.norm(state - target, axis=1) / den


# --------------------------------------------------------------------------
# full searches


@dataclass
class SearchReport:
    spec: SearchSpec
    results: list[NetworkResult]
    count_total: int
    count_perfect: int
    best: NetworkResult
    eps_histogram: dict[int, int] = field(default_factory=dict)

    def summary(self) -> str:
        lines = [
            f"family: {self.spec.family.value}  topology: {self.spec.topology.kind}({self.spec.n})  "
            f"p: {self.spec.p}  mode: {self.spec.angle_mode.value}  r: {self.spec.repetitions}",
            f"perfect: {self.count_perfect} / {self.count_total}",
            f"best eps: {self.best.eps:.6e}  network {self.best.network_id}: {self.best.gate_list}  "
            f"angles: {';'.join(f'{a:.4f}' for a in self.best.angles_deg)}",
        ]
        hist = ", ".join(f"1e{k}: {v}" for k, v in sorted(self.eps_histogram.items()))
        lines.append(f"eps decades: {hist}")
        return "\n".join(lines)


def eps_histogram(values, floor: int = -16) -> dict[int, int]:
    """Counts per decade ``floor(log10(eps))``; zeros land in the ``floor`` bin."""
    hist: dict[int, int] = {}
    for v in values:
        k = floor if v <= 10.0**floor else max(floor, math.floor(math.log10(v)))
        hist[k] = hist.get(k, 0) + 1
    return hist


def _fixed_chunk(args):
    candidates, initial, r = args
    return evaluate_fixed(candidates, initial, r)


def _continuous_chunk(args):
    chunk, spec = args
    out = []
    for network_id, slots in chunk:
        seq = np.random.SeedSequence([spec.seed, network_id])
        out.append(
            optimize_network(
                slots,
                spec.initial,
                spec.repetitions,
                spec.angle_mode,
                seed=seq,
                discrete_angles=spec.discrete_angles,
                perfect_threshold=spec.perfect_threshold,
                network_id=network_id,
            )
        )
    return out


def _map(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def run_search(spec: SearchSpec, workers: int = 1) -> SearchReport:
    """Enumerate, optimise and tally every candidate of ``spec``.

    Output depends only on ``spec`` (including its seed), never on ``workers``.
    """
    candidates = enumerate_networks(spec)
    if spec.angle_mode is AngleMode.CONTINUOUS:
        indexed = list(enumerate(candidates))
        jobs = [(indexed[i : i + CONTINUOUS_CHUNK], spec) for i in range(0, len(indexed), CONTINUOUS_CHUNK)]
        results = [res for part in _map(_continuous_chunk, jobs, workers) for res in part]
    else:
        jobs = [(candidates[i : i + FIXED_CHUNK], spec.initial, spec.repetitions) for i in range(0, len(candidates), FIXED_CHUNK)]
        errs = np.concatenate(_map(_fixed_chunk, jobs, workers)) if jobs else np.zeros(0)
        results = [
            _make_result(cand, [s.theta for s in cand], e, spec.repetitions, spec.perfect_threshold, i)
            for i, (cand, e) in enumerate(zip(candidates, errs))
        ]
    results.sort(key=lambda res: res.network_id)
    best = min(results, key=lambda res: (res.eps, res.network_id))
    return SearchReport(
        spec=spec,
        results=results,
        count_total=len(results),
        count_perfect=sum(res.perfect for res in results),
        best=best,
        eps_histogram=eps_histogram(res.eps for res in results),
    )


def shared_angle_profile(
    gates: Sequence[tuple[int, int]],
    initial: PopulationState,
    r_max: int,
    grid_step_deg: float = 0.25,
) -> list[tuple[int, float, float, float]]:
    """Naive versus optimised shared transfer angle, per number of passes.

    Every gate uses the same angle. Rows are ``(r, eps at 90 deg, best eps,
    best angle in degrees)``.
    """
    pairs = [tuple(g[:2]) for g in gates]
    n = initial.n_qubits
    target, den = _reference_norm(initial)
    pair_idx = [pair_indices(n, c, t) for c, t in pairs]

    def errs(theta, r):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        thetas = np.repeat(theta[:, None], len(pairs), axis=1)
        states = _evaluate_batch(initial.pops, pair_idx, thetas, r)
        return np.linalg.norm(states - target, axis=1) / den

    grid = np.radians(np.arange(0.0, 180.0 + 1e-9, grid_step_deg))
    step = math.radians(grid_step_deg)
    rows = []
    for r in range(1, r_max + 1):
        naive = float(errs(HALF_PI, r)[0])
        values = errs(grid, r)
        i = int(np.argmin(values))
        lo, hi = max(0.0, grid[i] - step), min(math.pi, grid[i] + step)
        res = minimize_scalar(lambda t: float(errs(t, r)[0]), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        theta, best = (float(res.x), float(res.fun)) if res.fun <= values[i] else (float(grid[i]), float(values[i]))
        rows.append((r, naive, best, math.degrees(theta)))
    return rows


@dataclass(frozen=True)
class SurveyRow:
    rank: int
    network_id: int
    gate_list: str
    angles_deg: tuple[float, ...]
    eps: tuple[float, ...]


def asymptotic_survey(spec: SearchSpec, r_max: int) -> list[SurveyRow]:
    """Epsilon after 1..r_max passes for every permutation network.

    Rows are ordered by epsilon after one pass (ties by network id).
    """
    if spec.family is not Family.PERMUTATION:
        raise UnsupportedSpec("asymptotic survey runs over the permutation family")
    if spec.angle_mode is AngleMode.CONTINUOUS:
        raise UnsupportedSpec("asymptotic survey needs fixed angles (half-pi or discrete)")
    candidates = enumerate_networks(spec)
    table = np.stack([evaluate_fixed(candidates, spec.initial, r) for r in range(1, r_max + 1)], axis=1)
    order = sorted(range(len(candidates)), key=lambda i: (table[i, 0], i))
    rows = []
    for rank, i in enumerate(order, start=1):
        cand = candidates[i]
        rows.append(
            SurveyRow(
                rank=rank,
                network_id=i,
                gate_list="|".join(f"{s.control}-{s.target}" for s in cand),
                angles_deg=tuple(math.degrees(s.theta) for s in cand),
                eps=tuple(float(v) for v in table[i]),
            )
        )
    return rows


def group_classes(values: Sequence[float], tol: float = CLASS_TOL) -> list[list[int]]:
    """Indices grouped into runs of values within ``tol`` of the run's first value."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    groups: list[list[int]] = []
    for i in order:
        if groups and abs(values[i] - values[groups[-1][0]]) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def spec_with(spec: SearchSpec, **changes) -> SearchSpec:
    return replace(spec, **changes)
