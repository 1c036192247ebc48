"""Closed-form distortion and fidelity curves.

These are written directly from the analytic results and share no code with
the simulator, so they double as independent checks on it. ``x`` is always
``|alpha|^2``.
"""

from __future__ import annotations


def wz_clone_distortion(x):
    return 2.0 * x * (1.0 - x)


def bh_clone_distortion(xi, x, eta=None):
    """General form with free ``eta``; with ``eta = 1 - 2 xi`` it is ``2 xi^2``."""
    if eta is None:
        eta = 1.0 - 2.0 * xi
    return 2.0 * xi**2 * (4.0 * x**2 - 4.0 * x + 1.0) + 2.0 * x * (1.0 - x) * (eta - 1.0) ** 2


def pb_deletion_fidelity(x):
    return 1.0 - x * (1.0 - x)


def pb_input_fidelity(x):
    return 1.0 - 2.0 * x * (1.0 - x)


def imperfect_distortion(k, x):
    xb = 1.0 - x
    return k * x**2 * xb**2 + 2.0 * x * xb


def imperfect_fidelity(k1, x):
    return 1.0 - k1 * x * (1.0 - x)


def imperfect_average_distortion(gg, hh):
    return (1.0 + ((gg - 1.0) ** 2 + (hh - 1.0) ** 2) / 10.0) / 3.0


def imperfect_average_fidelity(gg, hh, m2):
    return 2.0 / 3.0 + ((gg - hh) * m2 + hh) / 6.0


def epsilon_expansion(eps, eps1, m2):
    """Averages in terms of ``eps = gg - hh`` and ``eps1 = hh - 1``, taken as independent."""
    d = 1.0 / 3.0 + (eps1**2 + (eps + eps1) ** 2) / 30.0
    f = 5.0 / 6.0 + (eps * m2 + eps1) / 6.0
    return d, f


def delta_chart_averages(delta, m2):
    """Averages on the unitary family ``gg = 1 + delta``, ``hh = 1 - delta``."""
    d = (1.0 + 2.0 * delta**2 / 10.0) / 3.0
    f = 2.0 / 3.0 + (2.0 * delta * m2 + 1.0 - delta) / 6.0
    return d, f


def bh_pb_distortion(xi, x):
    return (2.0 * xi**2 + 2.0 * x * (1.0 - x) * (1.0 + 4.0 * xi)) / (1.0 + 2.0 * xi) ** 2


def bh_pb_average_distortion(xi):
    return (6.0 * xi**2 + 4.0 * xi + 1.0) / (3.0 * (1.0 + 2.0 * xi) ** 2)


def bh_pb_fidelity(xi):
    return (1.0 + xi) / (1.0 + 2.0 * xi)


def bh_imperfect_distortion(xi, gg, hh, x):
    xb = 1.0 - x
    norm = 1.0 + (gg + hh) * xi
    return 2.0 * xi**2 * (gg * xb - hh * x) ** 2 / norm**2 + 2.0 * x * xb


def bh_imperfect_average_distortion(xi, gg, hh):
    norm = 1.0 + (gg + hh) * xi
    return 1.0 / 3.0 + 2.0 * xi**2 * (gg**2 + hh**2 - gg * hh) / (3.0 * norm**2)


def bh_imperfect_fidelity(xi, gg, hh, m2):
    return (1.0 + xi * (gg - hh) * m2 + xi * hh) / (1.0 + (gg + hh) * xi)
