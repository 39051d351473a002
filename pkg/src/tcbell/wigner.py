"""Wigner function of a single-mode density matrix on a phase-space grid.

Uses the displaced-parity form ``W(beta) = (2/pi) Tr[rho D(beta) P D(beta)^dag]``
with ``P = (-1)^{a^dag a}``.  In the Fock basis this expands as

    W(beta) = sum_{m,n} rho[m, n] W_{nm}(beta),
    W_{m, m+L}(beta) = (2/pi) (-1)^m sqrt(m!/(m+L)!) (2 beta^*)^L exp(-2|beta|^2) L_m^L(4|beta|^2)

(conjugated for ``L < 0``).  For each off-diagonal order ``L`` the sequence in
``m`` follows the three-term Laguerre recurrence with the normalization folded
in, seeded from a value computed in log form so that neither the factorials
nor ``x^{L/2} exp(-x/2)`` over- or underflow prematurely.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage, special


@dataclass(frozen=True)
class GridSpec:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int = 201
    n_im: int = 201

    @classmethod
    def default(cls, nbar: float) -> GridSpec:
        r = math.sqrt(nbar) + 5.0
        return cls(-r, r, -r, r)

    @property
    def re(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.n_re)

    @property
    def im(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.n_im)

    @property
    def cell_area(self) -> float:
        d_re = (self.re_max - self.re_min) / (self.n_re - 1)
        d_im = (self.im_max - self.im_min) / (self.n_im - 1)
        return d_re * d_im


@dataclass(frozen=True, eq=False)
class PhaseSpaceGrid:
    """``values[i, k]`` is ``W(re[i] + 1j * im[k])``."""

    spec: GridSpec
    values: np.ndarray

    @property
    def re(self) -> np.ndarray:
        return self.spec.re

    @property
    def im(self) -> np.ndarray:
        return self.spec.im

    def integral(self) -> float:
        return float(self.values.sum() * self.spec.cell_area)

    def argmax(self) -> complex:
        i, k = np.unravel_index(np.argmax(self.values), self.values.shape)
        return complex(self.re[i], self.im[k])

    def peak(self) -> tuple[complex, float]:
        """Off-grid maximum from a parabola through ``log W`` along each axis.

        Exact for Gaussian lobes; falls back to the grid value at the edges or
        where neighbours are not positive.
        """
        w = self.values
        i, k = np.unravel_index(np.argmax(w), w.shape)
        pos = [self.re[i], self.im[k]]
        log_peak = math.log(w[i, k]) if w[i, k] > 0 else None
        steps = (self.re[1] - self.re[0], self.im[1] - self.im[0])
        for axis, (idx, size) in enumerate(((i, w.shape[0]), (k, w.shape[1]))):
            if log_peak is None or idx == 0 or idx == size - 1:
                continue
            lo = w[idx - 1, k] if axis == 0 else w[i, idx - 1]
            hi = w[idx + 1, k] if axis == 0 else w[i, idx + 1]
            if lo <= 0 or hi <= 0:
                continue
            a, b = math.log(lo), math.log(hi)
            curv = a + b - 2.0 * log_peak
            if curv >= 0:
                continue
            shift = 0.5 * (a - b) / curv
            pos[axis] += shift * steps[axis]
            log_peak -= 0.25 * (a - b) * shift
        value = math.exp(log_peak) if log_peak is not None else float(w[i, k])
        return complex(pos[0], pos[1]), value

    def to_csv(self, target=None) -> str:
        """Write ``re,im,w`` rows, looping over ``im`` outermost; returns the text."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["re", "im", "w"])
        for k, y in enumerate(self.im):
            for i, x in enumerate(self.re):
                writer.writerow([f"{x:.12g}", f"{y:.12g}", f"{self.values[i, k]:.12g}"])
        text = buf.getvalue()
        if target is not None:
            Path(target).write_text(text)
        return text


def _check_density_matrix(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > 1e-8:
        raise ValueError(f"density matrix is not Hermitian (residual {herm:.2e})")
    return rho


def wigner_values(rho: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Wigner function at the complex points ``beta`` (any shape)."""
    rho = _check_density_matrix(rho)
    beta = np.asarray(beta, dtype=complex)
    flat = beta.ravel()
    x = 4.0 * np.abs(flat) ** 2
    theta = np.angle(flat)
    dim = rho.shape[0]
    with np.errstate(divide="ignore"):
        logx = np.log(x)

    total = np.zeros(flat.shape, dtype=complex)
    for L in range(dim):
        # s_m = sqrt(m!/(m+L)!) x^{L/2} e^{-x/2} L_m^L(x)
        if L == 0:
            s_prev = np.exp(-x / 2.0)
        else:
            s_prev = np.exp(0.5 * L * logx - x / 2.0 - 0.5 * special.gammaln(L + 1.0))
        acc = rho[0, L] * s_prev
        s_prevprev = None
        for m in range(1, dim - L):
            if m == 1:
                s_cur = s_prev * (1.0 + L - x) / math.sqrt(L + 1.0)
            else:
                k = m - 1
                s_cur = (
                    (2 * k + 1 + L - x) * s_prev - math.sqrt(k * (k + L)) * s_prevprev
                ) / math.sqrt((k + 1) * (k + 1 + L))
            s_prevprev, s_prev = s_prev, s_cur
            coef = rho[m, m] if L == 0 else rho[m, m + L]
            acc = acc + ((-1) ** m) * coef * s_cur
        if L == 0:
            total += acc
        else:
            # rho[m, m+L] pairs with W_{m+L, m}, which carries exp(+i L theta).
            total += 2.0 * (acc * np.exp(1j * L * theta)).real
    w = (2.0 / math.pi) * total
    if np.max(np.abs(w.imag), initial=0.0) > 1e-10:
        raise ArithmeticError("Wigner function acquired an imaginary part")
    return w.real.reshape(beta.shape)


def wigner_grid(rho: np.ndarray, spec: GridSpec) -> PhaseSpaceGrid:
    re, im = np.meshgrid(spec.re, spec.im, indexing="ij")
    return PhaseSpaceGrid(spec, wigner_values(rho, re + 1j * im))


def husimi_smooth(grid: PhaseSpaceGrid) -> np.ndarray:
    """Convolve ``W`` with the vacuum Gaussian, giving the Husimi ``Q`` function on the grid."""
    spec = grid.spec
    d_re = (spec.re_max - spec.re_min) / (spec.n_re - 1)
    d_im = (spec.im_max - spec.im_min) / (spec.n_im - 1)
    return ndimage.gaussian_filter(grid.values, sigma=(0.5 / d_re, 0.5 / d_im), mode="constant")


def lobe_centers(grid: PhaseSpaceGrid, rel_threshold: float = 0.1) -> list[complex]:
    """Positions of the field lobes, strongest first.

    Interference fringes average out under Husimi smoothing, so the local
    maxima of the smoothed function mark the lobe centers.
    """
    q = husimi_smooth(grid)
    peaks = (q == ndimage.maximum_filter(q, size=5)) & (q > rel_threshold * q.max())
    idx = np.argwhere(peaks)
    order = np.argsort(-q[peaks])
    return [complex(grid.re[i], grid.im[k]) for i, k in idx[order]]
