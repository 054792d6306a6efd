"""
Fast Walsh-Hadamard transform and the forrelation value.

    Phi(f, g) = 2^(-3 ell / 2) * sum_{x,y} F(x) (-1)^(x.y) G(y),
    F = (-1)^f, G = (-1)^g.

The double sum is evaluated as <H F, G> with the unnormalised transform, so
for ell <= 20 every intermediate is an integer below 2^53 and the result is
exact up to the final scaling.
"""
import numpy as np

from forrelab.core.errors import ShapeMismatchError
from .truth_table import ForrelationInstance


def fwht(values: np.ndarray) -> np.ndarray:
    """
    Unnormalised Walsh-Hadamard transform along the last axis.

    Args:
        values (np.ndarray): array whose last axis has length 2^ell

    Returns:
        np.ndarray: float64 array of the same shape,
            out[..., y] = sum_x values[..., x] * (-1)^(x.y)
    """
    a = np.array(values, dtype=np.float64)
    n = a.shape[-1]
    if n == 0 or n & (n - 1):
        raise ShapeMismatchError(f"transform length {n} is not a power of two")
    lead = a.shape[:-1]
    h = 1
    while h < n:
        a = a.reshape(*lead, n // (2 * h), 2, h)
        a = np.stack(
            (a[..., 0, :] + a[..., 1, :], a[..., 0, :] - a[..., 1, :]),
            axis=-2,
        )
        h *= 2
    return a.reshape(*lead, n)


def forrelation_value(inst: ForrelationInstance) -> float:
    """
    Exact forrelation value of an instance, in [-1, 1].
    """
    size = inst.f.size
    spectrum = fwht(inst.f.signs)
    return float(np.dot(spectrum, inst.g.signs) / size ** 1.5)


def forrelation_values(f_bits: np.ndarray, g_bits: np.ndarray) -> np.ndarray:
    """
    Forrelation values for a batch of tables.

    Args:
        f_bits (np.ndarray): (batch, 2^ell) array of 0/1
        g_bits (np.ndarray): (batch, 2^ell) array of 0/1

    Returns:
        np.ndarray: (batch,) float64 values
    """
    f_bits = np.atleast_2d(f_bits)
    g_bits = np.atleast_2d(g_bits)
    if f_bits.shape != g_bits.shape:
        raise ShapeMismatchError(
            f"batch shapes differ: {f_bits.shape} vs {g_bits.shape}"
        )
    size = f_bits.shape[-1]
    spectrum = fwht(1.0 - 2.0 * f_bits)
    return np.einsum("ij,ij->i", spectrum, 1.0 - 2.0 * g_bits) / size ** 1.5
