"""Independent oracles used to freeze and cross-check expected values.

These deliberately avoid the code paths they validate: high-precision
scalar evaluation via mpmath, and exhaustive grid maximization over the
power simplex organized as a max-plus convolution (every grid point is
considered; the DP only reorders the enumeration).
"""

import mpmath as mp
import numpy as np

C_MPF = mp.mpf(299792458)


def hp_emission_angle(b_m: str, freq_hz: str) -> float:
    """Arcsin(c/(2bf)) at 50 decimal digits, rounded to float."""
    with mp.workdps(50):
        return float(mp.asin(C_MPF / (2 * mp.mpf(b_m) * mp.mpf(freq_hz))))


def hp_diffraction_gain(b_m: str, L_m: str, freq_hz: str, angle_rad) -> complex:
    """Direct 50-digit evaluation of sinc[(beta - k0 cos phi) L/2], alpha = 0."""
    with mp.workdps(50):
        b, L, f = mp.mpf(b_m), mp.mpf(L_m), mp.mpf(freq_hz)
        k0 = 2 * mp.pi * f / C_MPF
        beta = k0 * mp.sqrt(1 - (C_MPF / (2 * b * f)) ** 2)
        z = (beta - k0 * mp.cos(mp.mpf(angle_rad))) * L / 2
        if z == 0:
            return 1.0
        return complex(mp.sin(z) / z)


def hp_average_sum_rate(gains_squared, powers, sigma2) -> float:
    """Eq.-style mean rate re-evaluated at 50 decimal digits."""
    with mp.workdps(50):
        total = mp.mpf(0)
        for g, p in zip(gains_squared, powers):
            total += mp.log(1 + mp.mpf(p) * mp.mpf(g) / mp.mpf(sigma2), 2)
        return float(total / len(gains_squared))


def simplex_grid_best_rate(gains_squared, budget, sigma2, steps) -> float:
    """Max of sum_n log2(1 + p_n g_n / sigma2) over the discrete simplex
    {p_n = k_n * budget/steps, sum k_n = steps}, divided by N.

    Exhaustive over the grid: the max-plus convolution pass considers every
    split of every partial budget, so the result equals brute-force
    enumeration of all grid points.
    """
    gains = np.asarray(gains_squared, dtype=float)
    quanta = np.arange(steps + 1) * (budget / steps)
    tables = [np.log2(1.0 + quanta * g / sigma2) for g in gains]
    acc = tables[0]
    for table in tables[1:]:
        merged = np.empty(steps + 1)
        for s in range(steps + 1):
            k = np.arange(s + 1)
            merged[s] = np.max(acc[k] + table[s - k])
        acc = merged
    return float(acc[steps] / gains.size)
