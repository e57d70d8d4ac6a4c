"""Genus-g control space: winding chains, cycle phases, and the U(1) pairing.

The control space is a compact orientable surface of genus ``g``.  Its loop
structure is modeled as the integer lattice ``Z^(2g)`` over a chosen basis of
2g independent cycles.  A winding chain assigns an integer traversal count to
each basis cycle; a cycle assignment attaches a phase increment and a
recurrence period to each cycle.  Pairing a chain with an assignment yields a
single gauge-invariant U(1) phase factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionError, DomainError

TWO_PI = 2.0 * math.pi

# TWO_PI == _TWO_PI_INT * 2**_TWO_PI_SCALE exactly (53-bit integer mantissa).
_TWO_PI_MANT, _TWO_PI_EXP = math.frexp(TWO_PI)
_TWO_PI_INT = int(_TWO_PI_MANT * (1 << 53))
_TWO_PI_SCALE = _TWO_PI_EXP - 53

# High/low split grid for the exact pairing accumulation.
_SPLIT_BITS = 26
_SPLIT = float(1 << _SPLIT_BITS)


def wrap_angle(angle: float) -> float:
    """Reduce an angle to the canonical interval [0, 2*pi)."""
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        # fmod is exact, but adding TWO_PI to a tiny negative rounds up to it
        a = 0.0
    return a


@dataclass(frozen=True)
class SurfaceSpec:
    """Compact orientable surface of the given genus.

    The induced cycle basis has ``2 * genus`` elements; genus 0 is legal and
    yields an empty basis (the constant-phase control case).
    """

    genus: int

    def __post_init__(self):
        if isinstance(self.genus, bool) or not isinstance(self.genus, (int, np.integer)):
            raise DomainError(f"genus must be an integer, got {self.genus!r}")
        if self.genus < 0:
            raise DomainError(f"genus must be >= 0, got {self.genus}")
        object.__setattr__(self, "genus", int(self.genus))

    @property
    def basis_size(self) -> int:
        return 2 * self.genus


@dataclass(frozen=True)
class WindingChain:
    """Integer coefficient vector over a surface's cycle basis."""

    surface: SurfaceSpec
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coeffs = []
        for k, c in enumerate(self.coefficients):
            if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
                raise DomainError(f"coefficient [{k}] must be an exact integer, got {c!r}")
            coeffs.append(int(c))
        object.__setattr__(self, "coefficients", tuple(coeffs))
        if len(self.coefficients) != self.surface.basis_size:
            raise DimensionError(
                f"chain has {len(self.coefficients)} coefficients, "
                f"surface basis size is {self.surface.basis_size}"
            )

    @classmethod
    def zero(cls, surface: SurfaceSpec) -> "WindingChain":
        return cls(surface, (0,) * surface.basis_size)

    def __add__(self, other):
        if not isinstance(other, WindingChain):
            return NotImplemented
        return chain_compose(self, other)

    def __neg__(self) -> "WindingChain":
        return WindingChain(self.surface, tuple(-c for c in self.coefficients))


def chain_compose(a: WindingChain, b: WindingChain) -> WindingChain:
    """Componentwise sum of two winding chains on the same surface."""
    if a.surface != b.surface:
        raise DimensionError(
            f"chains live on different surfaces (genus {a.surface.genus} vs "
            f"{b.surface.genus})"
        )
    return WindingChain(a.surface, tuple(x + y for x, y in zip(a.coefficients, b.coefficients)))


@dataclass(frozen=True)
class CycleAssignment:
    """Per-cycle phase increments (radians) and recurrence periods (time units).

    Increments are normalized to [0, 2*pi) on construction; periods must be
    strictly positive and finite.
    """

    surface: SurfaceSpec
    betas: Tuple[float, ...]
    periods: Tuple[float, ...]

    def __post_init__(self):
        if len(self.betas) != self.surface.basis_size:
            raise DimensionError(
                f"{len(self.betas)} betas for basis size {self.surface.basis_size}"
            )
        if len(self.periods) != self.surface.basis_size:
            raise DimensionError(
                f"{len(self.periods)} periods for basis size {self.surface.basis_size}"
            )
        betas = []
        for k, b in enumerate(self.betas):
            b = float(b)
            if not math.isfinite(b):
                raise DomainError(f"betas[{k}] must be finite, got {b!r}")
            betas.append(wrap_angle(b))
        periods = []
        for k, t in enumerate(self.periods):
            t = float(t)
            if not math.isfinite(t) or t <= 0.0:
                raise DomainError(f"periods[{k}] must be > 0 and finite, got {t!r}")
            periods.append(t)
        object.__setattr__(self, "betas", tuple(betas))
        object.__setattr__(self, "periods", tuple(periods))


@dataclass(frozen=True)
class U1Phase:
    """Element of U(1), stored as an angle in [0, 2*pi)."""

    angle: float

    def __post_init__(self):
        a = float(self.angle)
        if not math.isfinite(a):
            raise DomainError(f"angle must be finite, got {a!r}")
        object.__setattr__(self, "angle", wrap_angle(a))

    @classmethod
    def identity(cls) -> "U1Phase":
        return cls(0.0)

    def __mul__(self, other):
        if not isinstance(other, U1Phase):
            return NotImplemented
        return U1Phase(self.angle + other.angle)

    def inverse(self) -> "U1Phase":
        return U1Phase(-self.angle)

    @property
    def factor(self) -> complex:
        """The phase factor e^{i*angle}."""
        return complex(math.cos(self.angle), math.sin(self.angle))


def _reduce_dyadic(k: int, frac_bits: int) -> float:
    """(k * 2**-frac_bits) mod 2*pi, computed exactly in integer arithmetic.

    Exact because 2*pi (the float) is a dyadic rational; requires
    frac_bits <= -_TWO_PI_SCALE.
    """
    shift = -_TWO_PI_SCALE - frac_bits
    r = (k << shift) % _TWO_PI_INT
    return math.ldexp(float(r), _TWO_PI_SCALE)


def _dot_mod_2pi(coefficients: Sequence[int], betas: Sequence[float]) -> float:
    """sum(m_i * beta_i) mod 2*pi with split high/low accumulation.

    The high parts (betas rounded to the 2^-26 grid) accumulate exactly in
    integer arithmetic for arbitrary coefficient sizes, so the group
    homomorphism angle(a+b) = angle(a) + angle(b) mod 2*pi holds to ~1e-15
    instead of degrading with the magnitude of the coefficients.
    """
    hi_sum = 0
    lows = []
    for m, beta in zip(coefficients, betas):
        k = round(beta * _SPLIT)
        hi_sum += m * k
        lows.append(m * (beta - k / _SPLIT))
    return wrap_angle(_reduce_dyadic(hi_sum, _SPLIT_BITS) + math.fsum(lows))


def pairing(chain: WindingChain, assign: CycleAssignment) -> U1Phase:
    """Pair a winding chain with a cycle assignment into a U(1) phase.

    Returns the phase with angle ``(sum_i m_i * beta_i) mod 2*pi``.  The map
    is a group homomorphism from the chain lattice to U(1): composing chains
    multiplies their phases.

    Raises
    ------
    DimensionError
        If the chain and the assignment live on different surfaces.
    """
    if chain.surface != assign.surface:
        raise DimensionError(
            f"chain basis size {chain.surface.basis_size} != assignment basis "
            f"size {assign.surface.basis_size}"
        )
    return U1Phase(_dot_mod_2pi(chain.coefficients, assign.betas))


def holonomy_loop(connection_samples: Sequence[Tuple[float, float]]) -> U1Phase:
    """Net phase from transporting around a closed loop of a sampled connection.

    Parameters
    ----------
    connection_samples:
        Ordered ``(sigma, value)`` pairs with ``sigma`` strictly increasing in
        [0, 2*pi].  The loop is closed periodically: a final trapezoid panel
        connects the last sample to the first one shifted by 2*pi, so the
        panels always cover exactly one full turn.

    Returns
    -------
    U1Phase
        The loop integral of the sampled connection, reduced mod 2*pi.
    """
    pts = list(connection_samples)
    if len(pts) < 2:
        raise DomainError(f"need at least 2 samples, got {len(pts)}")
    sigma = np.asarray([p[0] for p in pts], dtype=float)
    value = np.asarray([p[1] for p in pts], dtype=float)
    if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(value))):
        raise DomainError("samples must be finite")
    if sigma[0] < 0.0 or sigma[-1] > TWO_PI:
        raise DomainError("sigma values must lie in [0, 2*pi]")
    if np.any(np.diff(sigma) <= 0.0):
        raise DomainError("sigma values must be strictly increasing")
    interior = np.sum(0.5 * (value[1:] + value[:-1]) * np.diff(sigma))
    closing = 0.5 * (value[-1] + value[0]) * (TWO_PI - sigma[-1] + sigma[0])
    return U1Phase(float(interior + closing))


@dataclass(frozen=True)
class PairVerdict:
    """Commensurability verdict for one unordered pair of periods.

    When commensurable, ``witness`` approximates the ratio
    ``periods[numerator_index] / periods[denominator_index]`` to within the
    report tolerance; the orientation is recorded because a denominator bound
    satisfied in one orientation need not be satisfied in the other.
    """

    i: int
    j: int
    commensurable: bool
    witness: Optional[Fraction] = None
    witness_error: Optional[float] = None
    numerator_index: Optional[int] = None
    denominator_index: Optional[int] = None

    @property
    def verdict(self) -> str:
        return "commensurable" if self.commensurable else "incommensurable-at-depth"


@dataclass(frozen=True)
class IncommensurabilityReport:
    """Depth-limited pairwise commensurability verdicts for a set of periods.

    An "incommensurable-at-depth" verdict is never an unconditional proof of
    irrationality: it only says no rational with denominator up to
    ``max_denominator`` approximates the period ratio within ``tolerance``.
    """

    periods: Tuple[float, ...]
    max_denominator: int
    tolerance: float
    verdicts: Tuple[PairVerdict, ...]

    def all_incommensurable(self) -> bool:
        return not any(v.commensurable for v in self.verdicts)

    def verdict_for(self, i: int, j: int) -> PairVerdict:
        a, b = min(i, j), max(i, j)
        for v in self.verdicts:
            if (v.i, v.j) == (a, b):
                return v
        raise KeyError(f"no verdict for pair ({i}, {j})")


def _convergents(x: float, max_denominator: int):
    """Continued-fraction convergents p/q of x with q <= max_denominator."""
    out = []
    a0 = math.floor(x)
    p_prev, q_prev = 1, 0
    p_cur, q_cur = a0, 1
    out.append(Fraction(p_cur, q_cur))
    frac = x - a0
    for _ in range(128):
        if frac <= 0.0:
            break
        x = 1.0 / frac
        if not math.isfinite(x):
            break
        a = math.floor(x)
        p_nxt = a * p_cur + p_prev
        q_nxt = a * q_cur + q_prev
        if q_nxt > max_denominator:
            break
        out.append(Fraction(p_nxt, q_nxt))
        p_prev, q_prev = p_cur, q_cur
        p_cur, q_cur = p_nxt, q_nxt
        frac = x - a
    return out


def _best_convergent(x: float, max_denominator: int):
    best, best_err = None, math.inf
    for f in _convergents(x, max_denominator):
        if f.numerator == 0:
            # 0/1 approximates any tiny ratio but witnesses no rational
            # relation between strictly positive periods
            continue
        err = abs(x - f.numerator / f.denominator)
        if err < best_err:
            best, best_err = f, err
    return best, best_err


def certify_incommensurable(
    assign: CycleAssignment, max_denominator: int, tolerance: float
) -> IncommensurabilityReport:
    """Certify each pair of periods commensurable or incommensurable-at-depth.

    For each unordered pair the ratio is expanded in continued fractions and
    the pair is flagged commensurable if any convergent with denominator up to
    ``max_denominator`` approximates it within ``tolerance``.  Both ratio
    orientations are checked so the verdict is symmetric even when the bound
    ``q <= max_denominator`` is only reachable on one side (e.g. periods
    (1, 100) at max_denominator 64).
    """
    if isinstance(max_denominator, bool) or not isinstance(max_denominator, (int, np.integer)):
        raise DomainError(f"max_denominator must be an integer, got {max_denominator!r}")
    if max_denominator < 1:
        raise DomainError(f"max_denominator must be >= 1, got {max_denominator}")
    tolerance = float(tolerance)
    if not math.isfinite(tolerance) or tolerance <= 0.0:
        raise DomainError(f"tolerance must be > 0, got {tolerance!r}")

    periods = assign.periods
    verdicts = []
    for i in range(len(periods)):
        for j in range(i + 1, len(periods)):
            verdicts.append(_pair_verdict(periods, i, j, max_denominator, tolerance))
    return IncommensurabilityReport(
        periods=periods,
        max_denominator=int(max_denominator),
        tolerance=tolerance,
        verdicts=tuple(verdicts),
    )


def _pair_verdict(periods, i, j, max_denominator, tolerance) -> PairVerdict:
    for num, den in ((i, j), (j, i)):
        ratio = periods[num] / periods[den]
        witness, err = _best_convergent(ratio, max_denominator)
        if witness is not None and err <= tolerance:
            return PairVerdict(
                i=i,
                j=j,
                commensurable=True,
                witness=witness,
                witness_error=err,
                numerator_index=num,
                denominator_index=den,
            )
    return PairVerdict(i=i, j=j, commensurable=False)
