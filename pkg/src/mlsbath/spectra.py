"""Spectral models and the retarded noise correlator.

Three spectral families are supported, each normalized by its area
``A = integral of I(omega)``:

* ``Rectangular(area, center, half_width)`` -- constant ``A/(2*eps)``
  on ``|omega - center| < eps``, zero outside.
* ``Lorentzian(area, center, width)`` -- ``(A/pi) * eps / ((omega-center)^2 + eps^2)``.
* ``PowerGaussian(area, ohmicity, cutoff)`` --
  ``amp * (omega/L)^(1+nu) * exp(-omega^2/(4 L^2))`` on ``omega >= 0``
  (zero for negative frequencies; odd powers would otherwise make the
  density negative or complex).  ``amp`` is fixed by the requested area
  through the closed form ``area = amp * L * 2^(1+nu) * Gamma(1+nu/2)``.

The noise correlator is the retarded transform
``F(tau) = Theta(tau) * integral I(omega) e^(i omega tau) d omega``,
evaluated from closed forms for the rectangular and Lorentzian families
and by adaptive oscillatory quadrature otherwise.  The value stored at
``tau = 0`` is the one-sided limit ``F(0+) = area``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

__all__ = [
    "Rectangular",
    "Lorentzian",
    "PowerGaussian",
    "SpectralModel",
    "QuadratureError",
    "evaluate",
    "area",
    "support",
    "Correlator",
    "correlator",
    "correlator_table",
]


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature cannot reach the requested tolerance."""


@dataclass(frozen=True)
class Rectangular:
    """Flat spectral density of given area centered at ``center`` with
    half-width ``half_width``."""

    area: float
    center: float
    half_width: float

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError(f"area must be positive, got {self.area}")
        if self.half_width <= 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")


@dataclass(frozen=True)
class Lorentzian:
    """Lorentzian spectral density of given area, center and width."""

    area: float
    center: float
    width: float

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError(f"area must be positive, got {self.area}")
        if self.width <= 0:
            raise ValueError(f"width must be positive, got {self.width}")


@dataclass(frozen=True)
class PowerGaussian:
    """Power-law rise with a Gaussian cutoff, supported on omega >= 0.

    ``ohmicity`` is the exponent offset nu (sub-Ohmic -1, Ohmic 0,
    super-Ohmic +1, any real > -2 accepted); ``cutoff`` is the Gaussian
    scale.  The overall amplitude is derived from the requested area.
    """

    area: float
    ohmicity: float
    cutoff: float

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError(f"area must be positive, got {self.area}")
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")
        if self.ohmicity <= -2:
            raise ValueError(
                f"ohmicity must exceed -2 for a finite area, got {self.ohmicity}"
            )

    @property
    def amplitude(self) -> float:
        """Prefactor making the omega >= 0 integral equal the requested area."""
        nu = self.ohmicity
        return self.area / (self.cutoff * 2.0 ** (1.0 + nu) * gamma_fn(1.0 + nu / 2.0))


SpectralModel = Union[Rectangular, Lorentzian, PowerGaussian]


def evaluate(model: SpectralModel, omega):
    """Spectral density I(omega); accepts scalars or arrays."""
    w = np.asarray(omega, dtype=float)
    if isinstance(model, Rectangular):
        inside = np.abs(w - model.center) < model.half_width
        out = np.where(inside, model.area / (2.0 * model.half_width), 0.0)
    elif isinstance(model, Lorentzian):
        out = (model.area / np.pi) * model.width / ((w - model.center) ** 2 + model.width**2)
    elif isinstance(model, PowerGaussian):
        lam = model.cutoff
        with np.errstate(invalid="ignore", divide="ignore"):
            raw = (
                model.amplitude
                * np.power(np.where(w > 0, w, 1.0) / lam, 1.0 + model.ohmicity)
                * np.exp(-(w**2) / (4.0 * lam**2))
            )
        out = np.where(w > 0, raw, 0.0)
    else:
        raise TypeError(f"unknown spectral model {type(model).__name__}")
    return out if out.ndim else float(out)


def area(model: SpectralModel) -> float:
    """Spectral area; the power-Gaussian value comes from its closed form."""
    if isinstance(model, (Rectangular, Lorentzian)):
        return model.area
    if isinstance(model, PowerGaussian):
        nu = model.ohmicity
        return model.amplitude * model.cutoff * 2.0 ** (1.0 + nu) * gamma_fn(1.0 + nu / 2.0)
    raise TypeError(f"unknown spectral model {type(model).__name__}")


def support(model: SpectralModel) -> tuple[float, float]:
    """Interval outside which I(omega) vanishes (may be infinite)."""
    if isinstance(model, Rectangular):
        return (model.center - model.half_width, model.center + model.half_width)
    if isinstance(model, Lorentzian):
        return (-np.inf, np.inf)
    if isinstance(model, PowerGaussian):
        return (0.0, np.inf)
    raise TypeError(f"unknown spectral model {type(model).__name__}")


def _has_analytic_correlator(model: SpectralModel) -> bool:
    return isinstance(model, (Rectangular, Lorentzian))


def _analytic_correlator(model: SpectralModel, tau):
    """Closed-form F(tau) for tau >= 0 (vectorized)."""
    tau = np.asarray(tau, dtype=float)
    if isinstance(model, Rectangular):
        x = model.half_width * tau
        small = np.abs(x) < 1e-6
        xs = np.where(small, 1.0, x)
        # series branch avoids 0/0 at the sinc singularity
        envelope = np.where(small, 1.0 - x * x / 6.0, np.sin(xs) / xs)
        out = model.area * np.exp(1j * model.center * tau) * envelope
    elif isinstance(model, Lorentzian):
        out = model.area * np.exp((1j * model.center - model.width) * tau)
    else:
        raise TypeError(f"no analytic correlator for {type(model).__name__}")
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class Correlator:
    """Evaluator for the retarded correlator of a spectral model.

    ``method`` is one of ``"auto"`` (closed form when available, else
    quadrature), ``"analytic"`` or ``"quadrature"``.  ``abs_tol`` is the
    per-evaluation absolute tolerance requested from the adaptive rule;
    an estimated error above ``100 * abs_tol`` raises QuadratureError.
    ``limit`` caps the number of interval subdivisions.
    """

    model: SpectralModel
    method: str = "auto"
    abs_tol: float = 1e-10
    limit: int = 256

    def __post_init__(self):
        if self.method not in ("auto", "analytic", "quadrature"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "analytic" and not _has_analytic_correlator(self.model):
            raise ValueError(
                f"no analytic correlator for {type(self.model).__name__}"
            )


def _effective_support(model: SpectralModel) -> tuple[float, float]:
    """Support clipped where the density is provably negligible."""
    lo, hi = support(model)
    if isinstance(model, PowerGaussian):
        # Gaussian envelope below ~1e-21 of the peak beyond 16 cutoffs
        return lo, min(hi, 16.0 * model.cutoff)
    return lo, hi


def _quad_correlator(c: Correlator, tau: float) -> complex:
    """F(tau) for tau > 0 by adaptive oscillatory quadrature.

    Finite (or finite-after-truncation) supports use the
    oscillatory-weight rule on the interval; the Lorentzian's heavy
    tails use the Fourier-integral rule on each half line, which
    subdivides by oscillation cycles and so stays accurate for large
    tau.  When tau is so small that not even a fraction of a cycle fits
    across the density, plain adaptive quadrature takes over.
    """
    model = c.model
    lo, hi = _effective_support(model)
    f = lambda w: evaluate(model, w)
    if np.isfinite(lo) and np.isfinite(hi):
        osc_scale = max(abs(lo), abs(hi))
    else:
        osc_scale = max(abs(model.center), model.width, 1.0)
    pieces = []  # (re, im, error estimate)
    if tau * osc_scale < 1e-3:
        # oscillation negligible; split heavy-tailed supports at the peak
        bounds = [lo, hi] if np.isfinite(lo) else [lo, model.center, hi]
        for seg_lo, seg_hi in zip(bounds, bounds[1:]):
            re, e1 = quad(lambda w: f(w) * np.cos(w * tau), seg_lo, seg_hi,
                          epsabs=c.abs_tol, epsrel=1e-12, limit=c.limit)
            im, e2 = quad(lambda w: f(w) * np.sin(w * tau), seg_lo, seg_hi,
                          epsabs=c.abs_tol, epsrel=1e-12, limit=c.limit)
            pieces.append((re, im, e1 + e2))
    elif np.isfinite(lo) and np.isfinite(hi):
        re, re_err = quad(f, lo, hi, weight="cos", wvar=tau, epsabs=c.abs_tol, epsrel=1e-12, limit=c.limit)
        im, im_err = quad(f, lo, hi, weight="sin", wvar=tau, epsabs=c.abs_tol, epsrel=1e-12, limit=c.limit)
        pieces.append((re, im, re_err + im_err))
    else:
        # split the line at the density's peak
        split = model.center
        re1, e1 = quad(f, split, np.inf, weight="cos", wvar=tau,
                       epsabs=c.abs_tol, epsrel=1e-12, limit=c.limit)
        im1, e2 = quad(f, split, np.inf, weight="sin", wvar=tau,
                       epsabs=c.abs_tol, epsrel=1e-12, limit=c.limit)
        pieces.append((re1, im1, e1 + e2))
        # map (-inf, split] to [-split, inf) via omega -> -omega
        g = lambda u: evaluate(model, -u)
        re2, e3 = quad(g, -split, np.inf, weight="cos", wvar=tau,
                       epsabs=c.abs_tol, epsrel=1e-12, limit=c.limit)
        im2, e4 = quad(g, -split, np.inf, weight="sin", wvar=tau,
                       epsabs=c.abs_tol, epsrel=1e-12, limit=c.limit)
        pieces.append((re2, -im2, e3 + e4))
    value = sum(p[0] for p in pieces) + 1j * sum(p[1] for p in pieces)
    err = sum(p[2] for p in pieces)
    if err > 100.0 * c.abs_tol:
        raise QuadratureError(
            f"correlator quadrature at tau={tau} did not converge: "
            f"estimated error {err:.3e} exceeds {100.0 * c.abs_tol:.3e}"
        )
    return value


def correlator(c: Correlator, tau: float) -> complex:
    """Retarded correlator F(tau): zero for tau < 0, area at tau = 0."""
    if tau < 0:
        return 0.0 + 0.0j
    if tau == 0:
        return complex(area(c.model))
    if c.method == "analytic" or (c.method == "auto" and _has_analytic_correlator(c.model)):
        return _analytic_correlator(c.model, tau)
    return _quad_correlator(c, tau)


def correlator_table(c: Correlator, t_max: float, dt: float) -> np.ndarray:
    """F on the uniform grid {0, dt, ..., t_max} used by the integrator.

    The number of steps is ``round(t_max / dt)``; the grid spacing is
    exactly ``dt`` so the table aligns with the time-stepping grid.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_max < dt:
        raise ValueError(f"t_max must be at least dt, got {t_max} < {dt}")
    n = int(round(t_max / dt))
    taus = np.arange(n + 1) * dt
    if c.method == "analytic" or (c.method == "auto" and _has_analytic_correlator(c.model)):
        table = _analytic_correlator(c.model, taus)
        table = np.asarray(table, dtype=complex)
    else:
        table = np.empty(n + 1, dtype=complex)
        for k, tau in enumerate(taus):
            table[k] = correlator(c, tau)
    table[0] = area(c.model)
    return table
