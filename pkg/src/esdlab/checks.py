"""Cross-validation suite: channel machinery against closed forms and integrator.

Each check returns a CheckResult with its worst observed deviation and the
tolerance it was held to.  The two keyword hooks exist for sensitivity
tests: ``omega_shift`` perturbs the off-diagonal amplitude Kraus entry, and
``keep_scale=False`` drops the 1/9 population normalization from the
two-noise closed form.  Either one must make the suite fail; defaults leave
the physics untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import (
    KrausChannel,
    NoiseSpec,
    amplitude_channel,
    apply_channel,
    compose,
    dephasing_channel,
    identity_channel,
    integrate_path,
    lift,
    noise_channel,
)
from .closedform import (
    amplitude_concurrence,
    amplitude_elements,
    coherence_factor,
    combined_concurrence,
    combined_death_time,
    phase_concurrence,
)
from .concurrence import concurrence, esd_time, lambda_state
from .linalg import validate_density

LAMBDAS = (1.0, 2.0, 3.0, 3.5, 4.0)
RATES = (0.5, 1.0, 2.0)
N_TIMES = 50


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "worst_deviation": self.worst,
            "tolerance": self.tol,
        }


def _result(name, worst, tol) -> CheckResult:
    return CheckResult(name, bool(worst <= tol), float(worst), float(tol))


def _perturbed_amplitude(rate, t, omega_shift) -> KrausChannel:
    ch = amplitude_channel(rate, t)
    if omega_shift == 0.0:
        return ch
    broken = ch.ops[1].copy()
    broken[1, 0] += omega_shift
    return KrausChannel(2, (ch.ops[0], broken))


def _raw_apply(ch: KrausChannel, mat: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mat)
    for k in ch.ops:
        out += k @ mat @ k.conj().T
    return out


def _evolved_lambda_matrix(lam, rate_amp, rate_phase, t, omega_shift=0.0):
    """Benchmark state evolved with symmetric noise, without validity gating."""
    one = identity_channel(2)
    if rate_amp:
        one = compose(one, _perturbed_amplitude(rate_amp, t, omega_shift))
    if rate_phase:
        one = compose(one, dephasing_channel(rate_phase, t))
    return _raw_apply(lift(one, one), lambda_state(lam).to_density().mat)


def additivity_series(gamma1: float, gamma2: float, times, dt=1e-4) -> dict:
    """Single-qubit coherence along a grid: Kraus, integrator and analytic routes.

    The Kraus route composes the relaxation channel with the dephasing
    channel applied twice, and the integrator runs with a doubled phase
    rate: both express the transverse master-equation rate gamma2 in the
    half-rate channel convention (see :mod:`esdlab.channels`).  All three
    routes must land on 0.5 * exp(-(gamma1/2 + gamma2) t).
    """
    plus_x = validate_density(np.full((2, 2), 0.5, dtype=np.complex128))
    times = [float(t) for t in times]
    kraus = []
    for t in times:
        ch = compose(
            compose(amplitude_channel(gamma1, t), dephasing_channel(gamma2, t)),
            dephasing_channel(gamma2, t),
        )
        kraus.append(apply_channel(ch, plus_x).mat[0, 1].real)
    specs = (NoiseSpec("A", "amplitude", gamma1), NoiseSpec("A", "phase", 2 * gamma2))
    lindblad = [s.mat[0, 1].real for s in integrate_path(plus_x, specs, times, dt)]
    analytic = [0.5 * coherence_factor(gamma1, gamma2, t) for t in times]
    return {"times": times, "kraus": kraus, "lindblad": lindblad, "analytic": analytic}


def check_additivity(gamma1: float, gamma2: float, times) -> tuple[float, float]:
    """Worst Kraus and integrator deviations from the summed-rate coherence law."""
    series = additivity_series(gamma1, gamma2, times)
    worst_kraus = max(
        abs(k - a) for k, a in zip(series["kraus"], series["analytic"])
    )
    worst_lind = max(
        abs(l - a) for l, a in zip(series["lindblad"], series["analytic"])
    )
    return worst_kraus, worst_lind


def _check_additivity_suite() -> list[CheckResult]:
    times = np.linspace(0.0, 5.0, 20)
    worst_k = worst_l = 0.0
    for g1 in (0.1, 1.0, 3.0):
        for g2 in (0.1, 1.0, 3.0):
            wk, wl = check_additivity(g1, g2, times)
            worst_k, worst_l = max(worst_k, wk), max(worst_l, wl)
    return [
        _result("additivity_kraus_vs_analytic", worst_k, 1e-10),
        _result("additivity_lindblad_vs_analytic", worst_l, 1e-6),
    ]


def _symmetric(kind: str, rate: float) -> tuple[NoiseSpec, NoiseSpec]:
    return (NoiseSpec("A", kind, rate), NoiseSpec("B", kind, rate))


def _check_phase_law() -> CheckResult:
    worst = 0.0
    times = np.linspace(0.0, 5.0, N_TIMES)
    for lam in LAMBDAS:
        rho0 = lambda_state(lam).to_density()
        for rate in RATES:
            specs = _symmetric("phase", rate)
            for t in times:
                got = concurrence(apply_channel(noise_channel(specs, t), rho0))
                worst = max(worst, abs(got - phase_concurrence(lam, rate, t)))
    return _result("phase_noise_concurrence", worst, 1e-10)


def _check_amplitude_elements(omega_shift: float) -> CheckResult:
    worst = 0.0
    times = np.linspace(0.0, 5.0, N_TIMES)
    for lam in LAMBDAS:
        for rate in RATES:
            for t in times:
                m = _evolved_lambda_matrix(lam, rate, 0.0, t, omega_shift)
                z, a, d = amplitude_elements(lam, rate, t)
                worst = max(
                    worst,
                    abs(m[1, 2].real - z),
                    abs(m[0, 0].real - a),
                    abs(m[3, 3].real - d),
                )
    return _result("amplitude_noise_elements", worst, 1e-12)


def _check_amplitude_law() -> list[CheckResult]:
    worst = 0.0
    survived = True
    for lam in (3.0, 3.5, 4.0):
        rho0 = lambda_state(lam).to_density()
        for rate in RATES:
            specs = _symmetric("amplitude", rate)
            for t in np.linspace(0.0, 5.0 / rate, N_TIMES):
                got = concurrence(apply_channel(noise_channel(specs, t), rho0))
                worst = max(worst, abs(got - amplitude_concurrence(lam, rate, t)))
            if esd_time(lambda_state(lam), specs, 20.0 / rate) is not None:
                survived = False
    return [
        _result("amplitude_noise_concurrence", worst, 1e-10),
        CheckResult("amplitude_noise_no_death", survived, 0.0 if survived else 1.0, 0.0),
    ]


def _check_combined_law(keep_scale: bool) -> CheckResult:
    scale = 1.0 if keep_scale else 9.0
    worst = 0.0
    times = np.linspace(0.0, 5.0, N_TIMES)
    for lam in LAMBDAS:
        rho0 = lambda_state(lam).to_density()
        for g1 in RATES:
            for g2 in RATES:
                specs = _symmetric("amplitude", g1) + _symmetric("phase", g2)
                for t in times:
                    got = concurrence(apply_channel(noise_channel(specs, t), rho0))
                    want = scale * combined_concurrence(lam, g1, g2, t)
                    worst = max(worst, abs(got - want))
    return _result("combined_noise_concurrence", worst, 1e-10)


def _check_reductions() -> CheckResult:
    worst = 0.0
    for lam in LAMBDAS:
        for rate in RATES:
            for t in np.linspace(0.0, 6.0, N_TIMES):
                worst = max(
                    worst,
                    abs(
                        combined_concurrence(lam, 0.0, rate, t)
                        - phase_concurrence(lam, rate, t)
                    ),
                )
                if lam >= 3.0:
                    worst = max(
                        worst,
                        abs(
                            combined_concurrence(lam, rate, 0.0, t)
                            - amplitude_concurrence(lam, rate, t)
                        ),
                    )
    return _result("closed_form_reductions", worst, 1e-12)


def _check_witness() -> CheckResult:
    violations = 0
    for lam in (3.2, 3.6, 4.0):
        both = combined_death_time(lam, 1.0, 1.0)
        amp_only = combined_death_time(lam, 1.0, 0.0)
        phase_only = combined_death_time(lam, 0.0, 1.0)
        if both is None or amp_only is not None or phase_only is not None:
            violations += 1
        state = lambda_state(lam)
        if esd_time(state, _symmetric("amplitude", 1.0), 20.0) is not None:
            violations += 1
        if esd_time(state, _symmetric("phase", 1.0), 20.0) is not None:
            violations += 1
        t_num = esd_time(state, _symmetric("amplitude", 1.0) + _symmetric("phase", 1.0), 20.0)
        if t_num is None or both is None or abs(t_num - both) > 1e-8:
            violations += 1
    return CheckResult(
        "non_additivity_witness", violations == 0, float(violations), 0.0
    )


EQUIVALENCE_PLACEMENTS = (
    (NoiseSpec("A", "amplitude", 1.2),),
    (NoiseSpec("B", "amplitude", 0.7),),
    (NoiseSpec("A", "phase", 1.5),),
    (NoiseSpec("B", "phase", 0.9),),
    (NoiseSpec("A", "amplitude", 1.0), NoiseSpec("B", "phase", 1.0)),
    (
        NoiseSpec("A", "amplitude", 0.8),
        NoiseSpec("A", "phase", 1.1),
        NoiseSpec("B", "amplitude", 1.3),
        NoiseSpec("B", "phase", 0.6),
    ),
)


def equivalence_state():
    """Fixed full-rank two-qubit state with every matrix element populated."""
    psi = np.array([0.7, 0.4, 0.4, math.sqrt(0.19)], dtype=np.complex128)
    rho = 0.6 * np.outer(psi, psi.conj()) + 0.4 * np.eye(4) / 4
    return validate_density(rho)


def check_kraus_lindblad(specs, times, dt=1e-4) -> float:
    """Worst element-wise deviation between channel and integrator evolution."""
    rho0 = equivalence_state()
    worst = 0.0
    states = integrate_path(rho0, specs, times, dt)
    for t, via_ode in zip(times, states):
        via_kraus = apply_channel(noise_channel(specs, t), rho0)
        worst = max(worst, float(np.abs(via_kraus.mat - via_ode.mat).max()))
    return worst


def _check_equivalence() -> CheckResult:
    worst = 0.0
    for specs in EQUIVALENCE_PLACEMENTS:
        worst = max(worst, check_kraus_lindblad(specs, (0.5, 1.5)))
    return _result("kraus_vs_lindblad", worst, 1e-6)


def run_validation(omega_shift: float = 0.0, keep_scale: bool = True):
    """Run every cross-check; returns a list of CheckResult."""
    results = []
    results.extend(_check_additivity_suite())
    results.append(_check_phase_law())
    results.append(_check_amplitude_elements(omega_shift))
    results.extend(_check_amplitude_law())
    results.append(_check_combined_law(keep_scale))
    results.append(_check_reductions())
    results.append(_check_witness())
    results.append(_check_equivalence())
    return results
