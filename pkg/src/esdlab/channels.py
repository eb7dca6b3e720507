"""Qubit noise channels in Kraus form plus a matching master-equation integrator.

Conventions
-----------
A channel is built for a rate G and an elapsed time t.  Both channel kinds
share the damping factor

    gamma(G, t) = exp(-G * t / 2),      omega = sqrt(1 - gamma**2).

* ``amplitude_channel``: energy relaxation |+> -> |->.  Excited population
  decays as gamma**2 = exp(-G*t), single-qubit coherence as gamma.
* ``dephasing_channel``: pure dephasing.  Populations are untouched, the
  single-qubit coherence decays as gamma = exp(-G*t/2) per application.

Rates are therefore "half rates" on coherence for the dephasing kind: the
widely used transverse convention in which coherence decays as exp(-G*t)
corresponds to rate 2*G here, or equivalently to applying the channel
twice.  ``lindblad_rhs`` uses generators that exponentiate to exactly
these channel families, so Kraus evolution and the integrator agree
element-wise for the same noise set.

Everything is in the rotating frame of the qubits: there is no Hamiltonian
term, only dissipators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    DensityMatrix,
    NumericalFailureError,
    ValidationError,
    as_matrix,
    kron,
    validate_density,
)

COMPLETENESS_TOL = 1e-10
DEFAULT_DT = 1e-4

TARGETS = ("A", "B")
KINDS = ("amplitude", "phase")

_SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=np.complex128)  # |+> -> |->
_SIGMA_PLUS = _SIGMA_MINUS.conj().T
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_I2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True)
class NoiseSpec:
    """One independent noise source: target qubit, kind and rate.

    ``rate`` parameterizes the channel family of this module directly
    (damping factor exp(-rate*t/2) inside the Kraus matrices).
    """

    target: str
    kind: str
    rate: float

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}, got {self.target!r}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.rate) and self.rate >= 0.0):
            raise ValueError(f"rate must be finite and >= 0, got {self.rate!r}")


@dataclass(frozen=True)
class KrausChannel:
    """A finite set of Kraus matrices of one dimension.

    Channels produced by the constructors of this module satisfy
    sum(K^dag K) = 1 to within COMPLETENESS_TOL; ``apply_channel`` enforces
    that before using a channel.  The container itself only checks shapes,
    so that ``completeness_defect`` can be measured on broken channels.
    """

    dim: int
    ops: tuple

    def __post_init__(self):
        if self.dim not in (2, 4):
            raise ValueError(f"dim must be 2 or 4, got {self.dim}")
        if not self.ops:
            raise ValueError("a channel needs at least one Kraus matrix")
        frozen = []
        for op in self.ops:
            a = as_matrix(op, dims=(self.dim,)).copy()
            a.setflags(write=False)
            frozen.append(a)
        object.__setattr__(self, "ops", tuple(frozen))


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel(dim, (np.eye(dim, dtype=np.complex128),))


def dephasing_factors(rate: float, t: float) -> tuple[float, float]:
    """Damping pair (gamma, omega) with gamma = exp(-rate*t/2), gamma^2 + omega^2 = 1."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if not (math.isfinite(rate) and rate >= 0):
        raise ValueError(f"rate must be finite and >= 0, got {rate}")
    gamma = math.exp(-0.5 * rate * t)
    omega = math.sqrt(max(0.0, 1.0 - gamma * gamma))
    return gamma, omega


def dephasing_channel(rate: float, t: float) -> KrausChannel:
    """Pure dephasing: {diag(gamma, 1), diag(omega, 0)}.

    Populations are fixed, the off-diagonal element is multiplied by gamma.
    Applying the same channel twice gives the coherence factor gamma^2 =
    exp(-rate*t).
    """
    gamma, omega = dephasing_factors(rate, t)
    k0 = np.array([[gamma, 0], [0, 1]], dtype=np.complex128)
    k1 = np.array([[omega, 0], [0, 0]], dtype=np.complex128)
    return KrausChannel(2, (k0, k1))


def amplitude_channel(rate: float, t: float) -> KrausChannel:
    """Energy relaxation: {diag(gamma, 1), omega |-><+|}.

    Populations map as p+ -> gamma^2 p+, p- -> p- + omega^2 p+; the
    coherence is multiplied by gamma.
    """
    gamma, omega = dephasing_factors(rate, t)
    k0 = np.array([[gamma, 0], [0, 1]], dtype=np.complex128)
    k1 = np.array([[0, 0], [omega, 0]], dtype=np.complex128)
    return KrausChannel(2, (k0, k1))


def lift(ch_a: KrausChannel, ch_b: KrausChannel) -> KrausChannel:
    """Two-qubit channel {K_i (x) L_j} from single-qubit channels for A and B."""
    if ch_a.dim != 2 or ch_b.dim != 2:
        raise ValueError("lift expects two single-qubit channels")
    ops = tuple(kron(ka, kb) for ka in ch_a.ops for kb in ch_b.ops)
    return KrausChannel(4, ops)


def compose(first: KrausChannel, then: KrausChannel) -> KrausChannel:
    """Channel applying ``first`` and then ``then``: Kraus set {L_j K_i}."""
    if first.dim != then.dim:
        raise ValueError(f"dimension mismatch: {first.dim} vs {then.dim}")
    ops = tuple(l @ k for k in first.ops for l in then.ops)
    return KrausChannel(first.dim, ops)


def completeness_defect(ch: KrausChannel) -> float:
    """Max-norm of sum(K^dag K) - 1."""
    acc = np.zeros((ch.dim, ch.dim), dtype=np.complex128)
    for k in ch.ops:
        acc += k.conj().T @ k
    return float(np.abs(acc - np.eye(ch.dim)).max())


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a complete channel: rho -> sum K rho K^dag, revalidated."""
    if ch.dim != rho.dim:
        raise ValueError(f"dimension mismatch: channel {ch.dim}, state {rho.dim}")
    defect = completeness_defect(ch)
    if defect > COMPLETENESS_TOL:
        raise ValueError(
            f"channel completeness defect {defect:.3e} exceeds {COMPLETENESS_TOL:.0e}"
        )
    out = np.zeros_like(rho.mat)
    for k in ch.ops:
        out += k @ rho.mat @ k.conj().T
    return validate_density(out)


def _specs_for(specs: Iterable[NoiseSpec], target: str, kind: str):
    return [s for s in specs if s.target == target and s.kind == kind]


def qubit_channel(specs: Iterable[NoiseSpec], t: float, target: str) -> KrausChannel:
    """Composed channel for all noises acting on one qubit at elapsed time t.

    Amplitude factors are composed before phase factors; the two kinds
    commute in action, so the order only fixes the Kraus representative.
    """
    ch = identity_channel(2)
    for s in _specs_for(specs, target, "amplitude"):
        ch = compose(ch, amplitude_channel(s.rate, t))
    for s in _specs_for(specs, target, "phase"):
        ch = compose(ch, dephasing_channel(s.rate, t))
    return ch


def noise_channel(specs: Iterable[NoiseSpec], t: float) -> KrausChannel:
    """Two-qubit channel for a noise set at elapsed time t."""
    specs = tuple(specs)
    return lift(qubit_channel(specs, t, "A"), qubit_channel(specs, t, "B"))


def _lift_op(op: np.ndarray, target: str, n_qubits: int) -> np.ndarray:
    if n_qubits == 1:
        if target != "A":
            raise ValueError("single-qubit states only have qubit A")
        return op
    return kron(op, _I2) if target == "A" else kron(_I2, op)


def lindblad_rhs(rho, specs: Iterable[NoiseSpec]) -> np.ndarray:
    """Dissipative generator applied to a state, as a plain matrix.

    Per noise source, with L acting on the target qubit:

    * amplitude, rate G:  (G/2) (2 s- rho s+  -  s+ s- rho  -  rho s+ s-)
    * phase, rate G:      (G/4) (sz rho sz - rho)

    The phase coefficient G/4 makes this the exact generator of
    ``dephasing_channel(G, t)`` (coherence factor exp(-G*t/2)); see the
    module docstring for the relation to the exp(-G*t) convention.
    """
    mat = rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)
    n_qubits = 1 if mat.shape[0] == 2 else 2
    out = np.zeros_like(mat)
    for s in specs:
        if s.kind == "amplitude":
            low = _lift_op(_SIGMA_MINUS, s.target, n_qubits)
            raise_ = low.conj().T
            num = raise_ @ low
            out += (0.5 * s.rate) * (
                2.0 * low @ mat @ raise_ - num @ mat - mat @ num
            )
        else:
            sz = _lift_op(_SIGMA_Z, s.target, n_qubits)
            out += (0.25 * s.rate) * (sz @ mat @ sz - mat)
    return out


def _superoperator(specs, dim: int) -> np.ndarray:
    """Matrix of lindblad_rhs on vectorized states, built column by column."""
    n = dim * dim
    sup = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        basis = np.zeros(n, dtype=np.complex128)
        basis[j] = 1.0
        sup[:, j] = lindblad_rhs(basis.reshape(dim, dim), specs).reshape(n)
    return sup


def _rk4_step_matrix(sup: np.ndarray, h: float) -> np.ndarray:
    """One fixed-size classical Runge-Kutta step for a constant linear generator.

    For rho' = L rho the textbook k1..k4 update collapses to the degree-4
    Taylor polynomial of exp(h L); iterating this matrix is the RK4 solution.
    """
    n = sup.shape[0]
    step = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in (1, 2, 3, 4):
        term = (h / k) * (sup @ term)
        step = step + term
    return step


def _check_dt(t: float, dt: float):
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if t > 0 and not (0 < dt <= t):
        raise ValueError(f"need 0 < dt <= t, got dt={dt}, t={t}")


def integrate(
    rho0: DensityMatrix,
    specs: Iterable[NoiseSpec],
    t: float,
    dt: float = DEFAULT_DT,
) -> DensityMatrix:
    """Fixed-step RK4 solution of the master equation at time t.

    The step is h = t / ceil(t / dt) <= dt.  The result is revalidated with
    positivity tolerance relaxed to 1e-8 to absorb truncation error; a
    validation failure becomes NumericalFailureError.
    """
    specs = tuple(specs)
    _check_dt(t, dt)
    if t == 0:
        return rho0
    dim = rho0.dim
    sup = _superoperator(specs, dim)
    n_steps = math.ceil(t / dt - 1e-12)
    step = _rk4_step_matrix(sup, t / n_steps)
    vec = rho0.mat.reshape(dim * dim)
    for _ in range(n_steps):
        vec = step @ vec
    try:
        return validate_density(vec.reshape(dim, dim), positivity_tol=1e-8)
    except ValidationError as exc:
        raise NumericalFailureError(f"integration left the state space: {exc}") from exc


def integrate_path(
    rho0: DensityMatrix,
    specs: Iterable[NoiseSpec],
    times: Sequence[float],
    dt: float = DEFAULT_DT,
) -> list[DensityMatrix]:
    """States at an ascending time grid from a single integration pass."""
    specs = tuple(specs)
    times = [float(t) for t in times]
    if any(b <= a for a, b in zip(times, times[1:])) or (times and times[0] < 0):
        raise ValueError("times must be ascending and nonnegative")
    dim = rho0.dim
    sup = _superoperator(specs, dim)
    step_cache: dict[float, np.ndarray] = {}
    out: list[DensityMatrix] = []
    vec = rho0.mat.reshape(dim * dim)
    now = 0.0
    for t in times:
        span = t - now
        if span > 0:
            _check_dt(span, min(dt, span))
            n_steps = math.ceil(span / dt - 1e-12)
            h = span / n_steps
            if h not in step_cache:
                step_cache[h] = _rk4_step_matrix(sup, h)
            step = step_cache[h]
            for _ in range(n_steps):
                vec = step @ vec
            now = t
        try:
            out.append(validate_density(vec.reshape(dim, dim), positivity_tol=1e-8))
        except ValidationError as exc:
            raise NumericalFailureError(
                f"integration left the state space at t={t}: {exc}"
            ) from exc
    return out
