"""Stable/unstable dimension counting and hyperbolicity classification.

A matrix is hyperbolic when every eigenvalue has nonzero real part. Counting
eigenvalues left and right of the imaginary axis partitions the hyperbolic
matrices into classes indexed by the stable dimension; two hyperbolic
matrices generate topologically equivalent flows exactly when those counts
agree, so the pair (s, u) is the whole classification.

Numerically a strict sign test at the axis is not decidable, so the counts
carry a tolerance band: eigenvalues with |Re| <= tau are reported in the
indeterminate count c, and a verdict of Hyperbolic additionally requires the
eigenvalue accuracy estimate to clear the band. The classifier never reports
Hyperbolic when rounding could have flipped a sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import densemat, spectral
from .errors import DimensionMismatch, NotHyperbolic

HYPERBOLIC = "hyperbolic"
NON_HYPERBOLIC = "non_hyperbolic"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Inertia:
    """Counts of eigenvalues with Re < -tau (s), Re > tau (u), |Re| <= tau (c)."""

    s: int
    u: int
    c: int
    tau: float

    @property
    def d(self) -> int:
        return self.s + self.u + self.c


@dataclass(frozen=True)
class ConjugacyClass:
    """Stable/unstable split (s, u) of a hyperbolic matrix; s + u = d."""

    s: int
    u: int
    d: int


@dataclass(eq=False)
class Verdict:
    """Classification outcome: kind is one of the three module constants.

    ``witness`` is an on-axis eigenvalue for non-hyperbolic verdicts (the one
    with smallest |Re|, ties broken by |Im| then lexicographically), None
    otherwise. The spectrum that produced the verdict is kept for reporting.
    """

    kind: str
    inertia: Inertia
    witness: complex | None
    spectrum: spectral.Spectrum

    @property
    def is_hyperbolic(self) -> bool:
        return self.kind == HYPERBOLIC


def default_tolerance(a) -> float:
    """Relative axis tolerance 1e-9 * (1 + ||A||_2)."""
    return 1e-9 * (1.0 + densemat.op_norm2(a))


def inertia_of(spec: spectral.Spectrum, tau: float) -> Inertia:
    """Count eigenvalues left of, right of, and inside the axis band."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    re = np.real(np.asarray(spec.values))
    s = int(np.sum(re < -tau))
    u = int(np.sum(re > tau))
    return Inertia(s=s, u=u, c=len(re) - s - u, tau=tau)


def _witness(values: np.ndarray, tau: float) -> complex:
    on_axis = [complex(v) for v in values if abs(v.real) <= tau]
    on_axis.sort(key=lambda v: (abs(v.real), abs(v.imag), v.real, v.imag))
    return on_axis[0]


def classify(a, tau: float | None = None) -> Verdict:
    """Three-valued hyperbolicity verdict for a square real matrix.

    Hyperbolic requires every |Re lambda| to clear tau by more than the
    eigenvalue accuracy estimate; NonHyperbolic means some |Re lambda| <= tau
    (a witness is attached); anything in between is Indeterminate.
    """
    m = densemat.as_matrix(a)
    if tau is None:
        tau = default_tolerance(m)
    if tau < 0:
        raise ValueError("tau must be >= 0")
    spec = spectral.eigenvalues(m)
    inr = inertia_of(spec, tau)
    if inr.c > 0:
        return Verdict(kind=NON_HYPERBOLIC, inertia=inr,
                       witness=_witness(spec.values, tau), spectrum=spec)
    min_re = float(np.min(np.abs(np.real(spec.values))))
    if min_re > tau + spec.residual_bound:
        return Verdict(kind=HYPERBOLIC, inertia=inr, witness=None, spectrum=spec)
    return Verdict(kind=INDETERMINATE, inertia=inr, witness=None, spectrum=spec)


def conjugacy_class(a, tau: float | None = None) -> ConjugacyClass:
    """The (s, u) class of a hyperbolic matrix; NotHyperbolic otherwise."""
    verdict = classify(a, tau)
    if not verdict.is_hyperbolic:
        raise NotHyperbolic(f"matrix classified as {verdict.kind}")
    inr = verdict.inertia
    return ConjugacyClass(s=inr.s, u=inr.u, d=inr.d)


def same_class(a, b, tau: float | None = None) -> bool:
    """Whether two hyperbolic matrices lie in the same (s, u) class.

    By the classical classification of linear hyperbolic flows this decides
    whether e^{tA} and e^{tB} are topologically conjugate.
    """
    ma = densemat.as_matrix(a)
    mb = densemat.as_matrix(b)
    if ma.shape != mb.shape:
        raise DimensionMismatch(
            f"dimension mismatch: {ma.shape[0]} vs {mb.shape[0]}"
        )
    ca = conjugacy_class(ma, tau)
    cb = conjugacy_class(mb, tau)
    return (ca.s, ca.u) == (cb.s, cb.u)
