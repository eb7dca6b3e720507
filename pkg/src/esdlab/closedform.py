"""Closed-form decay laws for the one-parameter benchmark family.

These expressions are an independent cross-check layer for the channel
machinery.  The family is ``lambda_state(lam)``: populations (1, 4, 4, 0)/9
and inner coherence lam/9, with 0 < lam <= 4.  Rates follow the channel
convention of :mod:`esdlab.channels` (damping factor exp(-rate*t/2) per
qubit); symmetric noise means the same rate on both qubits.

With w2 = 1 - exp(-rate_amp * t):

* phase only:      C(t) = (2 lam / 9) exp(-rate_phase t)
* amplitude only:  C(t) = (2/9) [lam - sqrt(w2^2 + 8 w2)] exp(-rate_amp t),
  valid for 3 <= lam <= 4 where the bracket never goes negative
* both:            C(t) = (2/9) exp(-rate_amp t) *
                          max{0, lam exp(-rate_phase t) - sqrt(w2^2 + 8 w2)}

The two-noise form vanishes at the root of its bracket and stays zero; the
single-noise forms only decay exponentially.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np


def _check_lambda(lam: float):
    if not (0 < lam <= 4):
        raise ValueError(f"lambda must be in (0, 4], got {lam}")


def _check_time(t: float):
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")


def coherence_factor(rate_amp: float, rate_phase: float, t: float) -> float:
    """Single-qubit coherence decay exp(-(rate_amp/2 + rate_phase) t).

    ``rate_amp`` and ``rate_phase`` are master-equation rates: the total
    decay rate is the sum of the halved longitudinal rate and the full
    transverse rate.
    """
    _check_time(t)
    return math.exp(-(0.5 * rate_amp + rate_phase) * t)


def phase_concurrence(lam: float, rate: float, t: float) -> float:
    """Concurrence under symmetric phase noise: (2 lam / 9) exp(-rate t)."""
    _check_lambda(lam)
    _check_time(t)
    return (2.0 * lam / 9.0) * math.exp(-rate * t)


def amplitude_elements(lam: float, rate: float, t: float):
    """Matrix elements (z, a, d) under symmetric amplitude noise."""
    _check_lambda(lam)
    _check_time(t)
    decay = math.exp(-rate * t)
    w2 = 1.0 - decay
    z = (lam / 9.0) * decay
    a = decay * decay / 9.0
    d = w2 * w2 / 9.0 + 8.0 * w2 / 9.0
    return z, a, d


def _amp_bracket(lam: float, w2: float) -> float:
    return lam - math.sqrt(w2 * w2 + 8.0 * w2)


def amplitude_concurrence(lam: float, rate: float, t: float) -> float:
    """Concurrence under symmetric amplitude noise, for 3 <= lam <= 4 only.

    Outside that range the bracket changes sign and the closed form does
    not apply; evaluate amplitude_elements and the X-state formula instead.
    """
    if not (3.0 <= lam <= 4.0):
        raise ValueError(
            f"closed form holds for 3 <= lambda <= 4, got {lam}; "
            "use amplitude_elements for the general case"
        )
    _check_time(t)
    w2 = 1.0 - math.exp(-rate * t)
    return (2.0 / 9.0) * _amp_bracket(lam, w2) * math.exp(-rate * t)


def combined_concurrence(
    lam: float, rate_amp: float, rate_phase: float, t: float
) -> float:
    """Concurrence under simultaneous symmetric amplitude and phase noise."""
    _check_lambda(lam)
    _check_time(t)
    w2 = 1.0 - math.exp(-rate_amp * t)
    bracket = lam * math.exp(-rate_phase * t) - math.sqrt(w2 * w2 + 8.0 * w2)
    return (2.0 / 9.0) * math.exp(-rate_amp * t) * max(0.0, bracket)


def combined_death_time(
    lam: float,
    rate_amp: float,
    rate_phase: float,
    t_max: Optional[float] = None,
    scan_points: int = 512,
) -> Optional[float]:
    """Root of the two-noise bracket, by bracketed bisection to 1e-12.

    Returns None when the bracket keeps its sign up to the horizon
    (default 20 / min(positive rate)), meaning the decay stays exponential.
    """
    _check_lambda(lam)
    active = [r for r in (rate_amp, rate_phase) if r > 0]
    if t_max is None:
        t_max = 20.0 / min(active) if active else 1.0

    def bracket(t: float) -> float:
        w2 = 1.0 - math.exp(-rate_amp * t)
        return lam * math.exp(-rate_phase * t) - math.sqrt(w2 * w2 + 8.0 * w2)

    grid = np.linspace(0.0, t_max, scan_points + 1)
    signs = np.array([bracket(float(t)) for t in grid])
    hits = np.nonzero(signs[1:] <= 0.0)[0]
    if len(hits) == 0:
        return None
    idx = 1 + int(hits[0])
    lo, hi = float(grid[idx - 1]), float(grid[idx])
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if bracket(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    return hi
