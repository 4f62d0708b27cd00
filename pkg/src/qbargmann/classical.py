"""Classical (q = 1) objects that the q-deformed construction tends to.

Hermite functions, the true-polyanalytic basis, the Bargmann kernel and the
m-true-polyanalytic Bargmann kernel, together with the reproducing kernel
``exp(z conj(w)) L_m(|z - w|^2)``.  They serve only as limit targets.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

__all__ = [
    "classical_hermite",
    "classical_laguerre",
    "ito_hermite",
    "classical_hermite_function",
    "classical_coeff",
    "classical_kernel",
    "bargmann_kernel",
    "true_polyanalytic_kernel",
    "canonical_coherent_state",
]


def classical_hermite(n: int, x):
    """Physicists' Hermite polynomial ``H_n`` by the three-term recurrence."""
    x = np.asarray(x)
    prev = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return prev if x.ndim else prev.item()
    cur = 2 * x * prev
    for k in range(1, n):
        prev, cur = cur, 2 * x * cur - 2 * k * prev
    return cur if x.ndim else cur.item()


def classical_laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial ``L_n^(alpha)``."""
    x = np.asarray(x)
    prev = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return prev if x.ndim else prev.item()
    cur = 1 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if x.ndim else cur.item()


def ito_hermite(r: int, s: int, z: complex, w: complex) -> complex:
    """Ito's complex Hermite polynomial ``H_{r,s}(z, w)``."""
    return sum(
        (-1) ** k * math.factorial(k) * math.comb(r, k) * math.comb(s, k)
        * z ** (r - k) * w ** (s - k)
        for k in range(min(r, s) + 1)
    )


def classical_hermite_function(j: int, xi):
    """Normalized Hermite function ``(sqrt(pi) 2^j j!)^(-1/2) H_j(xi) exp(-xi^2/2)``.

    Evaluated by the orthonormal recurrence so large ``j`` does not overflow.
    """
    xi = np.asarray(xi, dtype=float)
    prev = np.pi ** -0.25 * np.exp(-0.5 * xi * xi)
    if j == 0:
        return prev if xi.ndim else prev.item()
    cur = math.sqrt(2.0) * xi * prev
    for k in range(1, j):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * xi * cur - math.sqrt(k / (k + 1)) * prev
    return cur if xi.ndim else cur.item()


def classical_coeff(j: int, m: int, z: complex) -> complex:
    """True-polyanalytic basis function ``h_j^m(z)`` of level ``m``."""
    z = complex(z)
    lo, d = min(m, j), abs(m - j)
    r = abs(z)
    phase = cmath.exp(-1j * (m - j) * cmath.phase(z)) if z != 0 else 1.0
    return ((-1) ** lo * math.factorial(lo) / math.sqrt(math.factorial(m) * math.factorial(j))
            * r ** d * phase * classical_laguerre(lo, d, r * r))


def classical_kernel(z: complex, w: complex, m: int) -> complex:
    """Reproducing kernel ``exp(z conj(w)) L_m^(0)(|z - w|^2)`` of level ``m``."""
    z, w = complex(z), complex(w)
    return cmath.exp(z * w.conjugate()) * classical_laguerre(m, 0, abs(z - w) ** 2)


def bargmann_kernel(z: complex, xi):
    """Kernel of the Bargmann transform, ``pi^(-1/4) exp(-z^2/2 - xi^2/2 + sqrt2 xi z)``."""
    xi = np.asarray(xi, dtype=float)
    out = np.pi ** -0.25 * np.exp(-0.5 * z * z - 0.5 * xi * xi + math.sqrt(2.0) * xi * z)
    return out if xi.ndim else complex(out)


def true_polyanalytic_kernel(z: complex, xi, m: int):
    """Kernel of the m-true-polyanalytic Bargmann transform."""
    z = complex(z)
    xi = np.asarray(xi, dtype=float)
    pref = (-1) ** m * (2 ** m * math.factorial(m) * math.sqrt(math.pi)) ** -0.5
    out = (pref * np.exp(-0.5 * z * z - 0.5 * xi * xi + math.sqrt(2.0) * xi * z)
           * classical_hermite(m, xi - (z + z.conjugate()).real / math.sqrt(2.0)))
    return out if xi.ndim else complex(out)


def canonical_coherent_state(z: complex, xi, jmax: int = 80):
    """Canonical coherent state ``exp(-|z|^2/2) sum_j z^j/sqrt(j!) phi_j(xi)``."""
    z = complex(z)
    xi = np.asarray(xi, dtype=float)
    total = np.zeros_like(xi, dtype=complex)
    c = 1.0 + 0j
    for j in range(jmax + 1):
        total = total + c * classical_hermite_function(j, xi)
        c = c * z / math.sqrt(j + 1)
    out = math.exp(-0.5 * abs(z) ** 2) * total
    return out if xi.ndim else complex(out)
