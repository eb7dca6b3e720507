"""Two-qubit entanglement: concurrence, sudden-death times and decay classes.

Concurrence comes in two independent flavors that are required to agree:
the general spectral formula (via :func:`esdlab.linalg.product_spectrum`)
and the closed form for X-shaped states.  Sudden death is detected on the
signed concurrence margin (the quantity inside max{0, .}), which keeps a
vanished-and-absorbed zero distinguishable from an exponential tail that
merely became tiny.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .channels import NoiseSpec, apply_channel, noise_channel
from .linalg import DensityMatrix, kron, product_spectrum

DEATH_C_TOL = 1e-12
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_SPIN_FLIP = kron(_SIGMA_Y, _SIGMA_Y)


class SeparableStateError(ValueError):
    """The initial state carries no entanglement to lose."""


@dataclass(frozen=True)
class XState:
    """Two-qubit state with populations a, b, c, d and inner coherence z.

    Nonzero entries sit on the diagonal and at the center of the
    anti-diagonal:

        [[a, 0,  0, 0],
         [0, b,  z, 0],
         [0, z*, c, 0],
         [0, 0,  0, d]]

    Populations sum to one and |z| <= sqrt(b*c), so the matrix is a valid
    density operator.
    """

    a: float
    b: float
    c: float
    d: float
    z: complex

    def __post_init__(self):
        pops = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(p) for p in pops) or not np.isfinite(self.z):
            raise ValueError("entries must be finite")
        if min(pops) < 0:
            raise ValueError(f"populations must be >= 0, got {pops}")
        if abs(sum(pops) - 1.0) > 1e-12:
            raise ValueError(f"populations must sum to 1, got {sum(pops)!r}")
        if abs(self.z) > math.sqrt(self.b * self.c) + 1e-12:
            raise ValueError(
                f"|z| = {abs(self.z):.6g} exceeds sqrt(b c) = "
                f"{math.sqrt(self.b * self.c):.6g}"
            )

    def to_density(self) -> DensityMatrix:
        m = np.zeros((4, 4), dtype=np.complex128)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.a, self.b, self.c, self.d
        m[1, 2] = self.z
        m[2, 1] = np.conj(self.z)
        from .linalg import validate_density

        return validate_density(m)


def lambda_state(lam: float) -> XState:
    """One-parameter benchmark family: populations (1, 4, 4, 0)/9, z = lam/9."""
    if not (0 < lam <= 4):
        raise ValueError(f"lambda must be in (0, 4], got {lam}")
    return XState(1 / 9, 4 / 9, 4 / 9, 0.0, lam / 9)


def spin_flipped(mat: np.ndarray) -> np.ndarray:
    """(sy (x) sy) conj(rho) (sy (x) sy)."""
    return _SPIN_FLIP @ mat.conj() @ _SPIN_FLIP


def concurrence_margin(rho: DensityMatrix) -> float:
    """Signed margin m with concurrence = max(0, m), from the general formula."""
    if rho.n_qubits != 2:
        raise ValueError("concurrence is defined for two-qubit states")
    roots = np.sqrt(product_spectrum(rho.mat @ spin_flipped(rho.mat)))
    return float(roots[0] - roots[1] - roots[2] - roots[3])


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state, in [0, 1]."""
    return max(0.0, concurrence_margin(rho))


def concurrence_x(x: XState) -> float:
    """Closed-form concurrence of an X state: 2 max{0, |z| - sqrt(a d)}."""
    return 2.0 * max(0.0, abs(x.z) - math.sqrt(x.a * x.d))


def _rate_sums(specs: Iterable[NoiseSpec]):
    amp = {"A": 0.0, "B": 0.0}
    ph = {"A": 0.0, "B": 0.0}
    for s in specs:
        (amp if s.kind == "amplitude" else ph)[s.target] += s.rate
    return amp, ph


def evolve_x(x: XState, specs: Iterable[NoiseSpec], t: float) -> XState:
    """Closed-form action of the lifted noise channels on an X state.

    X states are closed under these channels: populations mix through the
    per-qubit relaxation maps and z picks up the product of the per-qubit
    damping factors.  Identical (to roundoff) to building and applying the
    Kraus channels.
    """
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    amp, ph = _rate_sums(specs)
    ga, gb = math.exp(-amp["A"] * t), math.exp(-amp["B"] * t)
    zf = math.exp(-0.5 * (amp["A"] + ph["A"] + amp["B"] + ph["B"]) * t)
    a = ga * gb * x.a
    b = ga * ((1 - gb) * x.a + x.b)
    c = gb * ((1 - ga) * x.a + x.c)
    d = (1 - ga) * (1 - gb) * x.a + (1 - ga) * x.b + (1 - gb) * x.c + x.d
    return XState(a, b, c, d, zf * x.z)


def _x_margins(x: XState, specs, times: np.ndarray) -> np.ndarray:
    """Vectorized concurrence margin |z(t)| - sqrt(a(t) d(t)) for an X state."""
    amp, ph = _rate_sums(specs)
    ga = np.exp(-amp["A"] * times)
    gb = np.exp(-amp["B"] * times)
    zf = np.exp(-0.5 * (amp["A"] + ph["A"] + amp["B"] + ph["B"]) * times)
    a = ga * gb * x.a
    d = (1 - ga) * (1 - gb) * x.a + (1 - ga) * x.b + (1 - gb) * x.c + x.d
    return abs(x.z) * zf - np.sqrt(a * d)


@dataclass(frozen=True)
class ConcurrenceTrace:
    """Concurrence sampled along a time grid for one noise configuration."""

    times: np.ndarray
    values: np.ndarray
    specs: tuple
    initial: Union[XState, DensityMatrix]

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        values = np.array(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError("times and values must be 1d arrays of equal length")
        if values.min(initial=0.0) < 0 or values.max(initial=0.0) > 1 + 1e-9:
            raise ValueError("concurrence values must lie in [0, 1]")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "specs", tuple(self.specs))


def _check_times(times: np.ndarray):
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("need a nonempty 1d time grid")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be ascending and start at t >= 0")


def trace_concurrence(
    initial: Union[XState, DensityMatrix],
    specs: Iterable[NoiseSpec],
    times: Sequence[float],
) -> ConcurrenceTrace:
    """Concurrence along a time grid, each point evolved fresh from t = 0.

    The state is propagated with the lifted Kraus channels built at each
    grid time (never by composing earlier steps), so there is no error
    accumulation along the grid.
    """
    specs = tuple(specs)
    times = np.asarray(times, dtype=float)
    _check_times(times)
    is_x = isinstance(initial, XState)
    rho0 = initial.to_density() if is_x else initial
    values = np.empty_like(times)
    for i, t in enumerate(times):
        rho_t = apply_channel(noise_channel(specs, float(t)), rho0)
        if is_x:
            m = rho_t.mat
            root = math.sqrt(max(0.0, m[0, 0].real * m[3, 3].real))
            values[i] = 2.0 * max(0.0, abs(m[1, 2]) - root)
        else:
            values[i] = concurrence(rho_t)
    return ConcurrenceTrace(times=times, values=values, specs=specs, initial=initial)


def _margin_fn(initial, specs):
    """Scalar margin-of-concurrence function of time for either state kind."""
    if isinstance(initial, XState):
        return lambda t: float(_x_margins(initial, specs, np.asarray([t]))[0])
    rho0 = initial

    def margin(t: float) -> float:
        return concurrence_margin(apply_channel(noise_channel(specs, t), rho0))

    return margin


def esd_time(
    initial: Union[XState, DensityMatrix],
    specs: Iterable[NoiseSpec],
    t_max: float,
    scan_points: int = 512,
    resolution: float = 1e-10,
) -> Optional[float]:
    """Smallest time at which the concurrence hits zero and stays there.

    The signed margin is scanned on ``scan_points`` points in (0, t_max];
    the first sign change is refined by bisection to ``resolution`` and then
    confirmed on eight points up to twice the candidate time (the zero of a
    genuine sudden death is absorbing).  Returns None when the concurrence
    stays positive on the whole grid, and raises SeparableStateError when
    there is nothing to lose at t = 0.
    """
    specs = tuple(specs)
    if t_max <= 0:
        raise ValueError(f"t_max must be > 0, got {t_max}")
    margin = _margin_fn(initial, specs)
    if margin(0.0) <= 0.0:
        raise SeparableStateError("initial state is separable (zero concurrence)")

    grid = np.linspace(0.0, t_max, scan_points + 1)
    if isinstance(initial, XState):
        margins = _x_margins(initial, specs, grid)
    else:
        margins = np.array([margin(float(t)) for t in grid])

    start = 1  # invariant: margins[start - 1] > 0
    while start <= scan_points:
        hits = np.nonzero(margins[start:] <= 0.0)[0]
        if len(hits) == 0:
            return None
        idx = start + int(hits[0])
        lo, hi = grid[idx - 1], grid[idx]
        while hi - lo > resolution:
            mid = 0.5 * (lo + hi)
            if margin(mid) <= 0.0:
                hi = mid
            else:
                lo = mid
        t_star = hi
        # confirm the zero is absorbing: C <= DEATH_C_TOL out to 2 t*
        check = t_star + np.arange(1, 9) * (t_star / 8.0)
        if isinstance(initial, XState):
            confirmed = bool(
                np.all(_x_margins(initial, specs, check) <= 0.5 * DEATH_C_TOL)
            )
        else:
            confirmed = all(margin(float(t)) <= 0.5 * DEATH_C_TOL for t in check)
        if confirmed:
            return float(t_star)
        # the zero was a graze: skip past this nonpositive pocket and rescan
        nxt = idx
        while nxt <= scan_points and margins[nxt] <= 0.0:
            nxt += 1
        start = nxt + 1
    return None


class DecayKind(Enum):
    SEPARABLE_AT_START = "SEPARABLE_AT_START"
    EXPONENTIAL = "EXPONENTIAL"
    SUDDEN_DEATH = "SUDDEN_DEATH"
    INVALID = "INVALID"  # used only for out-of-range diagram cells


@dataclass(frozen=True)
class DecayClass:
    """Decay classification with the death time when there is one."""

    kind: DecayKind
    t_star: Optional[float] = None

    def __post_init__(self):
        if (self.kind is DecayKind.SUDDEN_DEATH) != (self.t_star is not None):
            raise ValueError("t_star must be present exactly for SUDDEN_DEATH")
        if self.t_star is not None and not self.t_star > 0:
            raise ValueError("t_star must be > 0")


def default_t_max(specs: Iterable[NoiseSpec]) -> float:
    """Horizon 20 / min(active rate): exp(-20) is below every tolerance in use."""
    active = [s.rate for s in specs if s.rate > 0]
    return 20.0 / min(active) if active else 1.0


def classify(
    x: XState, specs: Iterable[NoiseSpec], t_max: Optional[float] = None
) -> DecayClass:
    """Decay class of a d = 0 X state under a noise set."""
    if x.d != 0.0:
        raise ValueError("classification is defined on the d = 0 slice")
    specs = tuple(specs)
    if concurrence_x(x) == 0.0:
        return DecayClass(DecayKind.SEPARABLE_AT_START)
    horizon = default_t_max(specs) if t_max is None else t_max
    t_star = esd_time(x, specs, horizon)
    if t_star is None:
        return DecayClass(DecayKind.EXPONENTIAL)
    return DecayClass(DecayKind.SUDDEN_DEATH, t_star)


@dataclass(frozen=True)
class DiagramCell:
    a: float
    z: float
    kind: DecayKind
    t_star: Optional[float] = None


def diagram_grid(
    a_values: Sequence[float],
    z_values: Sequence[float],
    specs: Iterable[NoiseSpec],
    t_max: Optional[float] = None,
) -> list[DiagramCell]:
    """Classify the (a, |z|) lattice of d = 0 states with b = c = (1 - a)/2.

    Cells outside the validity region |z| <= (1 - a)/2 are marked INVALID.
    Rows are emitted a-major, z-minor, in grid order.
    """
    specs = tuple(specs)
    cells: list[DiagramCell] = []
    for a in a_values:
        half = 0.5 * (1.0 - a)
        for z in z_values:
            if not (0 <= a <= 1) or z < 0 or z > half + 1e-12:
                cells.append(DiagramCell(float(a), float(z), DecayKind.INVALID))
                continue
            state = XState(float(a), half, half, 0.0, min(float(z), half))
            result = classify(state, specs, t_max)
            cells.append(DiagramCell(float(a), float(z), result.kind, result.t_star))
    return cells
