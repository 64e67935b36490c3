"""Weighted L1 machinery on the real line.

Fourier convention throughout: ``fhat(s) = integral of f(t) exp(-i s t) dt``,
so that ``(f')^(s) = i s fhat(s)`` and inversion is
``f(t) = (1/2pi) integral of fhat(s) exp(i s t) ds``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.hermite_e import hermeval
from scipy import linalg as sla
from scipy import signal, special

from .errors import BudgetError, DomainError, IllConditionedError
from .quadrature import gauss_legendre, integrate

SQRT_2PI = math.sqrt(2.0 * math.pi)
FAMILIES = ("one-plus-abs", "one-plus-pow")


@dataclass(frozen=True)
class Weight:
    """Polynomial weight, ``(1+|t|)^alpha`` or ``1+|t|^alpha``."""

    alpha: float = 0.0
    family: str = "one-plus-abs"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown weight family {self.family!r}")
        if not self.alpha >= 0:
            raise DomainError("weight exponent alpha must be >= 0")
        if self.family == "one-plus-pow" and self.alpha > 1:
            # 1+|t|^alpha is submultiplicative only for alpha <= 1
            raise DomainError("family 1+|t|^alpha requires alpha <= 1")

    def __call__(self, t):
        a = np.abs(np.asarray(t, dtype=float))
        if self.family == "one-plus-abs":
            return (1.0 + a) ** self.alpha
        return 1.0 + a**self.alpha

    @property
    def majorant(self) -> float:
        """B with w(t) <= B |t|^alpha for |t| >= 1."""
        return 2.0**self.alpha if self.family == "one-plus-abs" else 2.0

    def to_dict(self) -> dict:
        return {"family": self.family, "alpha": self.alpha}


def _as_weight(w) -> Weight:
    if isinstance(w, Weight):
        return w
    return Weight(float(w))


class TestFunction:
    """An element of L1_w with analytically known Fourier data."""

    __test__ = False  # not a pytest class
    max_fourier_order: int | None = None

    def __call__(self, t):
        raise NotImplementedError

    def fourier(self, s, order: int = 0):
        raise NotImplementedError

    def weighted_tail(self, cutoff: float, weight: Weight) -> float:
        """Upper bound on the integral of |f| w over |t| > cutoff."""
        raise NotImplementedError

    def in_weighted_l1(self, alpha: float) -> bool:
        return True

    def default_cutoff(self, weight: Weight, budget: float) -> float:
        return self.cutoff_for(weight, budget)

    def cutoff_for(self, weight: Weight, budget: float) -> float:
        c = 1.0
        while self.weighted_tail(c, weight) > budget:
            c *= 1.25
            if c > 1e7:
                raise BudgetError("no cutoff below 1e7 meets the tail budget")
        return c

    def to_dict(self) -> dict:
        raise NotImplementedError

    # linear structure
    def _parts(self):
        return [(1.0, self)]

    def __add__(self, other):
        if not isinstance(other, TestFunction):
            return NotImplemented
        return Combination(self._parts() + other._parts())

    def __mul__(self, c):
        if isinstance(c, TestFunction):
            return NotImplemented
        return Combination([(complex(c) * k, f) for k, f in self._parts()])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)


def _gaussian_moment_tail(p: float, sigma: float, c: float) -> float:
    """Integral of t^p exp(-t^2/(2 sigma^2)) over t > c."""
    k = 0.5 * (p + 1.0)
    x = c * c / (2.0 * sigma * sigma)
    return sigma ** (p + 1.0) * 2.0 ** (0.5 * (p - 1.0)) * special.gamma(k) * special.gammaincc(k, x)


def _gaussian_hat_deriv(u, sigma: float, n: int):
    """n-th derivative of sqrt(2pi) sigma exp(-sigma^2 u^2 / 2)."""
    y = sigma * np.asarray(u, dtype=float)
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return SQRT_2PI * sigma * sigma**n * (-1.0) ** n * hermeval(y, coeffs) * np.exp(-0.5 * y * y)


class GaussianPoly(TestFunction):
    """Finite sum of ``coef * t^m * exp(-t^2/(2 sigma^2)) * exp(i theta t)``."""

    def __init__(self, terms: Sequence[tuple[complex, int, float, float]]):
        merged: dict[tuple[int, float, float], complex] = {}
        for coef, m, sigma, theta in terms:
            if m < 0 or sigma <= 0:
                raise DomainError("power must be >= 0 and sigma > 0")
            key = (int(m), float(sigma), float(theta))
            merged[key] = merged.get(key, 0.0) + complex(coef)
        self.terms = tuple((c, m, s, th) for (m, s, th), c in merged.items() if c != 0)

    def __repr__(self):
        return f"GaussianPoly({list(self.terms)!r})"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for c, m, s, th in self.terms:
            out += c * t**m * np.exp(-0.5 * (t / s) ** 2 + 1j * th * t)
        return out

    def fourier(self, s, order: int = 0):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=complex)
        for c, m, sig, th in self.terms:
            # t^m <-> (i d/ds)^m ; modulation shifts s by theta
            out += c * (1j) ** m * _gaussian_hat_deriv(s - th, sig, m + order)
        return out

    def derivative(self, k: int = 1) -> "GaussianPoly":
        terms = list(self.terms)
        for _ in range(k):
            nxt = []
            for c, m, s, th in terms:
                if m > 0:
                    nxt.append((c * m, m - 1, s, th))
                nxt.append((-c / (s * s), m + 1, s, th))
                if th != 0:
                    nxt.append((1j * th * c, m, s, th))
            terms = list(GaussianPoly(nxt).terms)
        return GaussianPoly(terms)

    def weighted_tail(self, cutoff: float, weight: Weight) -> float:
        weight = _as_weight(weight)
        if cutoff < 1:
            raise ValueError("tail bounds are only provided for cutoffs >= 1")
        total = 0.0
        for c, m, s, _ in self.terms:
            total += abs(c) * 2.0 * weight.majorant * _gaussian_moment_tail(m + weight.alpha, s, cutoff)
        return float(total)

    def default_cutoff(self, weight: Weight, budget: float) -> float:
        c = 40.0 * max(s for _, _, s, _ in self.terms) if self.terms else 1.0
        return max(c, self.cutoff_for(weight, budget))

    def _parts(self):
        return [(1.0, self)]

    def __add__(self, other):
        if isinstance(other, GaussianPoly):
            return GaussianPoly(self.terms + other.terms)
        return super().__add__(other)

    def __mul__(self, c):
        if isinstance(c, TestFunction):
            return NotImplemented
        return GaussianPoly([(complex(c) * k, m, s, th) for k, m, s, th in self.terms])

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {
            "family": "gaussian-poly",
            "params": {
                "terms": [
                    {"coef": [c.real, c.imag], "power": m, "sigma": s, "theta": th} for c, m, s, th in self.terms
                ]
            },
        }


def gaussian(sigma: float = 1.0, power: int = 0, theta: float = 0.0, coef: complex = 1.0) -> GaussianPoly:
    return GaussianPoly([(coef, power, sigma, theta)])


def smoothstep(order: int) -> Polynomial:
    """Polynomial S with S(0)=0, S(1)=1 and derivatives 1..order vanishing at both ends."""
    n = order
    c = np.zeros(2 * n + 2)
    for k in range(n + 1):
        c[n + k + 1] = math.comb(n + k, k) * math.comb(2 * n + 1, n - k) * (-1) ** k
    return Polynomial(c)


class Bump(TestFunction):
    """Band-limited function whose transform is a C^smoothness plateau bump.

    fhat == 1 on [center - inner_radius, center + inner_radius], fhat == 0
    outside [center - outer_radius, center + outer_radius], with a
    polynomial smoothstep transition of the given order.
    """

    transition = "polynomial-smoothstep"

    def __init__(self, center: float, inner_radius: float, outer_radius: float, smoothness: int = 6):
        if not 0 < inner_radius < outer_radius:
            raise DomainError("need 0 < inner_radius < outer_radius")
        if smoothness < 2:
            raise DomainError("smoothness must be >= 2")
        self.center = float(center)
        self.inner_radius = float(inner_radius)
        self.outer_radius = float(outer_radius)
        self.smoothness = int(smoothness)
        self.max_fourier_order = self.smoothness
        self._step = smoothstep(self.smoothness)
        self.variation = self._variation_constants()
        # the headline decay |f(t)| <= K / |t|^(smoothness+2)
        self.decay_constant = self.variation[self.smoothness + 1]

    def __repr__(self):
        return (
            f"Bump(center={self.center}, inner_radius={self.inner_radius}, "
            f"outer_radius={self.outer_radius}, smoothness={self.smoothness})"
        )

    def _profile(self, d, order: int = 0):
        """k-th derivative in d = |s - center| of the transition S((outer - d)/width).

        S is the regularised incomplete beta function I_y(n+1, n+1), whose
        derivative is y^n (1-y)^n / B(n+1, n+1); higher derivatives use the
        Leibniz rule on that product. The monomial form of S loses digits.
        """
        n = self.smoothness
        w = self.outer_radius - self.inner_radius
        y = (self.outer_radius - np.asarray(d, dtype=float)) / w
        if order == 0:
            return special.betainc(n + 1, n + 1, y)
        k = order - 1
        total = np.zeros_like(y)
        for j in range(max(0, k - n), min(k, n) + 1):
            a = math.perm(n, j) * y ** (n - j)
            b = math.perm(n, k - j) * (-1) ** (k - j) * (1.0 - y) ** (n - k + j)
            total = total + math.comb(k, j) * a * b
        return (-1.0 / w) ** order * total / special.beta(n + 1, n + 1)

    def _variation_constants(self) -> dict:
        """K_m with |f(t)| <= K_m / |t|^(m+1), for m = 1 .. smoothness + 1.

        K_m = TV(fhat^(m)) / (2 pi); the variation is taken in
        y = (outer - d)/width and rescaled, once for each side of the center.
        Only fhat^(smoothness+1) has jumps (at the ends of the transition).
        """
        w = self.outer_radius - self.inner_radius
        out = {}
        for m in range(1, self.smoothness + 2):
            q = self._step.deriv(m)
            jumps = abs(q(0.0)) + abs(q(1.0))
            r = q.deriv()
            roots = []
            if r.degree() > 0:
                roots = [y.real for y in r.roots() if abs(y.imag) < 1e-9 and 0 < y.real < 1]
            pts = [0.0] + sorted(roots) + [1.0]
            var = sum(abs(q(b) - q(a)) for a, b in zip(pts[:-1], pts[1:]))
            # small safety factor covers rounding in the monomial evaluation
            out[m] = float(2.0 * (jumps + var) * w**-m / (2.0 * math.pi) * (1.0 + 1e-6))
        return out

    def fourier(self, s, order: int = 0):
        if order > self.smoothness:
            raise ValueError(f"bump transform is only C^{self.smoothness}")
        s = np.asarray(s, dtype=float)
        d = s - self.center
        a = np.abs(d)
        out = np.zeros(s.shape)
        if order == 0:
            out[a <= self.inner_radius] = 1.0
        mid = (a > self.inner_radius) & (a < self.outer_radius)
        out[mid] = self._profile(a[mid], order) * np.sign(d[mid]) ** order
        return out.astype(complex)

    def __call__(self, t):
        """Inverse transform by Gauss-Legendre over the transition band.

        With g = fhat(center + .) even, f(t) e^{-i center t} is
        (1/pi) int_0^outer g(u) cos(ut) du. For |t| >= 1 this is integrated by
        parts once, -(1/(pi t)) int g'(u) sin(ut) du over the transition only,
        which avoids cancelling the plateau term against the transition.
        Node counts grow with |t| * width so the oscillation stays resolved.
        """
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        a, b = self.inner_radius, self.outer_radius
        w = b - a
        core = np.empty(flat.shape)
        need = (2 * self.smoothness + 20 + np.ceil(0.75 * np.abs(flat) * w)).astype(int)
        need = 8 * ((need + 7) // 8)
        small = np.abs(flat) < 1.0
        for n_nodes in np.unique(need):
            x, wts = gauss_legendre(int(n_nodes))
            u = 0.5 * (a + b) + 0.5 * w * x
            sel = (need == n_nodes) & small
            if np.any(sel):
                ts = flat[sel]
                with np.errstate(invalid="ignore", divide="ignore"):
                    plateau = np.where(ts == 0, a, np.sin(a * ts) / ts)
                trans = 0.5 * w * (self._profile(u)[None, :] * np.cos(np.outer(ts, u))) @ wts
                core[sel] = plateau + trans
            sel = (need == n_nodes) & ~small
            if np.any(sel):
                ts = flat[sel]
                parts = 0.5 * w * (self._profile(u, 1)[None, :] * np.sin(np.outer(ts, u))) @ wts
                core[sel] = -parts / ts
        out = np.exp(1j * self.center * flat) * core / math.pi
        return out.reshape(t.shape)

    def in_weighted_l1(self, alpha: float) -> bool:
        return self.smoothness >= alpha + 2

    def weighted_tail(self, cutoff: float, weight: Weight) -> float:
        weight = _as_weight(weight)
        if cutoff < 1:
            raise ValueError("tail bounds are only provided for cutoffs >= 1")
        best = math.inf
        for m, K in self.variation.items():
            e = m - weight.alpha  # integral of t^(alpha - m - 1) converges iff e > 0
            if e > 0:
                best = min(best, 2.0 * weight.majorant * K * cutoff ** (-e) / e)
        return float(best)

    def cutoff_for(self, weight: Weight, budget: float) -> float:
        weight = _as_weight(weight)
        if not any(m > weight.alpha for m in self.variation):
            raise BudgetError("bump is not in L1_w for this weight")
        best = math.inf
        for m, K in self.variation.items():
            e = m - weight.alpha
            if e > 0:
                best = min(best, (2.0 * weight.majorant * K / (e * budget)) ** (1.0 / e))
        return max(1.0, 1.0001 * best)

    def to_dict(self) -> dict:
        return {
            "family": "bandlimited-bump",
            "params": {
                "center": self.center,
                "inner_radius": self.inner_radius,
                "outer_radius": self.outer_radius,
                "smoothness": self.smoothness,
                "transition": self.transition,
            },
        }


class Combination(TestFunction):
    def __init__(self, parts):
        self.parts = [(complex(c), f) for c, f in parts]
        orders = [f.max_fourier_order for _, f in self.parts if f.max_fourier_order is not None]
        self.max_fourier_order = min(orders) if orders else None

    def __repr__(self):
        return f"Combination({self.parts!r})"

    def _parts(self):
        return list(self.parts)

    def __call__(self, t):
        return sum(c * f(t) for c, f in self.parts)

    def fourier(self, s, order: int = 0):
        return sum(c * f.fourier(s, order) for c, f in self.parts)

    def weighted_tail(self, cutoff, weight):
        return float(sum(abs(c) * f.weighted_tail(cutoff, weight) for c, f in self.parts))

    def in_weighted_l1(self, alpha):
        return all(f.in_weighted_l1(alpha) for _, f in self.parts)

    def default_cutoff(self, weight, budget):
        share = budget / max(len(self.parts), 1)
        return max(f.default_cutoff(weight, share / max(abs(c), 1e-300)) for c, f in self.parts)

    def to_dict(self):
        return {
            "family": "combination",
            "params": {"parts": [{"coef": [c.real, c.imag], "function": f.to_dict()} for c, f in self.parts]},
        }


def function_from_dict(d: dict) -> TestFunction:
    fam, p = d["family"], d.get("params", {})
    if fam == "gaussian-poly":
        return GaussianPoly(
            [(complex(*t["coef"]), t["power"], t["sigma"], t["theta"]) for t in p["terms"]]
        )
    if fam == "bandlimited-bump":
        return Bump(p["center"], p["inner_radius"], p["outer_radius"], p["smoothness"])
    if fam == "combination":
        return Combination([(complex(*q["coef"]), function_from_dict(q["function"])) for q in p["parts"]])
    raise ValueError(f"unknown function family {fam!r}")


def fourier(f: TestFunction, s, deriv_order: int = 0):
    return f.fourier(s, deriv_order)


def weighted_l1_norm(f: TestFunction, w=Weight(), quad_tol: float = 1e-8, t_cut: float | None = None) -> float:
    w = _as_weight(w)
    if not f.in_weighted_l1(w.alpha):
        raise DomainError("function is not in L1_w for this weight")
    half = 0.5 * quad_tol
    c = f.default_cutoff(w, half) if t_cut is None else float(t_cut)
    tail = f.weighted_tail(c, w)
    if tail > half:
        raise BudgetError(
            f"tail bound {tail:.3e} exceeds budget {half:.3e} at cutoff {c:g}",
            suggested_cutoff=f.cutoff_for(w, half),
        )
    res = integrate(lambda t: np.abs(f(t)) * w(t), -c, c, abs_tol=half, rel_tol=1e-13, n_init=32, breakpoints=[0.0])
    return float(res.value.real) + tail


# --- the constant C(alpha) and the triangular-wave measure -------------------


@dataclass(frozen=True)
class CAlpha:
    value: float
    tail_bound: float
    K: int


def _odd_tail_integral(a: float, alpha: float) -> float:
    """Integral of (2u+1)^(alpha-2) over u > a."""
    return (2.0 * a + 1.0) ** (alpha - 1.0) / (2.0 * (1.0 - alpha))


def _c_alpha_at(alpha: float, K: int) -> CAlpha:
    j = np.arange(K + 1, dtype=float)
    partial = float(np.sum((2.0 * j + 1.0) ** (alpha - 2.0)))
    # h(u) = (2u+1)^(alpha-2) is convex and decreasing, so the remainder
    # sum_{j>K} h(j) lies in [int_{K+1} h + h(K+1)/2, int_{K+1/2} h]
    hi = _odd_tail_integral(K + 0.5, alpha)
    lo = _odd_tail_integral(K + 1.0, alpha) + 0.5 * (2.0 * K + 3.0) ** (alpha - 2.0)
    pref = (2.0 / math.pi) ** (2.0 - alpha)
    value = pref * 2.0 * (partial + 0.5 * (hi + lo))
    bound = pref * 2.0 * 0.5 * (hi - lo)
    return CAlpha(value, max(bound, 0.0), K)


def c_alpha_details(alpha: float, tail_tol: float = 1e-12, K: int | None = None) -> CAlpha:
    if not 0 <= alpha < 1:
        raise DomainError("C(alpha) is defined for 0 <= alpha < 1 (the series diverges at alpha = 1)")
    if K is not None:
        return _c_alpha_at(alpha, int(K))
    K = 16
    while True:
        res = _c_alpha_at(alpha, K)
        if res.tail_bound <= tail_tol:
            return res
        if K > 1 << 26:
            raise BudgetError(f"C({alpha}) tail bound {res.tail_bound:.3e} not below {tail_tol:g}")
        K *= 2


def c_alpha(alpha: float, tail_tol: float = 1e-12) -> float:
    """C(alpha) = (2/pi)^(2-alpha) * sum over k in Z of |2k+1|^(alpha-2)."""
    return c_alpha_details(alpha, tail_tol).value


def triangular_wave(s, a: float):
    """4a-periodic wave equal to s on [-a, a] and 2a - s on [a, 3a]."""
    u = np.mod(np.asarray(s, dtype=float) + a, 4.0 * a) - a
    return np.where(u <= a, u, 2.0 * a - u)


@dataclass
class DiscreteMeasure:
    """Finitely many atoms plus a record of what truncation left out."""

    locations: np.ndarray
    weights: np.ndarray
    weight: Weight = field(default_factory=Weight)
    tail_bound: float = 0.0  # bound on the dropped sum of |c_k| w(t_k)
    tail_mass: float = 0.0  # bound on the dropped sum of |c_k|
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        self.locations = np.asarray(self.locations, dtype=float).ravel()
        self.weights = np.asarray(self.weights, dtype=complex).ravel()
        if self.locations.shape != self.weights.shape:
            raise ValueError("locations and weights must have equal length")

    def norm(self, weight: Weight | None = None) -> float:
        w = self.weight if weight is None else _as_weight(weight)
        return float(np.sum(np.abs(self.weights) * w(self.locations)))

    def transform(self, s):
        s = np.asarray(s, dtype=float)
        phase = np.exp(-1j * np.multiply.outer(s, self.locations))
        return phase @ self.weights

    def to_dict(self) -> dict:
        return {
            "atoms": [[float(t), [float(c.real), float(c.imag)]] for t, c in zip(self.locations, self.weights)],
            "truncation": {
                "tail_bound": self.tail_bound,
                "tail_mass": self.tail_mass,
                "weight": self.weight.to_dict(),
                "descriptor": self.descriptor,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DiscreteMeasure":
        atoms = d["atoms"]
        tr = d.get("truncation", {})
        w = tr.get("weight", {"family": "one-plus-abs", "alpha": 0.0})
        return cls(
            [a[0] for a in atoms],
            [complex(*a[1]) for a in atoms],
            Weight(w["alpha"], w["family"]),
            tr.get("tail_bound", 0.0),
            tr.get("tail_mass", 0.0),
            tr.get("descriptor", {}),
        )


def point_mass(t0: float = 0.0, c: complex = 1.0, weight: Weight = Weight()) -> DiscreteMeasure:
    return DiscreteMeasure([t0], [c], weight)


def measure_transform(mu: DiscreteMeasure, s):
    """Fourier-Stieltjes transform sum_k c_k exp(-i s t_k)."""
    return mu.transform(s)


def triangular_measure(a: float, alpha: float, K: int, family: str = "one-plus-pow") -> DiscreteMeasure:
    """Atoms of the discrete measure whose transform is the triangular wave.

    Atoms t_k = -(2k+1) pi / (2a) with weights (1/i)(4a/pi^2)(-1)^k/(2k+1)^2,
    for every k with |2k+1| <= 2K+1 (so each odd frequency appears with both
    signs and the truncated transform stays real).
    """
    if not a > 0:
        raise DomainError("a must be positive")
    if not 0 <= alpha < 1:
        raise DomainError("the weighted norm is finite only for 0 <= alpha < 1")
    k = np.arange(-K - 1, K + 1)
    odd = 2.0 * k + 1.0
    loc = -odd * math.pi / (2.0 * a)
    wts = (-1j) * (4.0 * a / math.pi**2) * np.where(k % 2 == 0, 1.0, -1.0) / odd**2
    weight = Weight(alpha, family)
    pref = 4.0 * a / math.pi**2
    # dropped odd numbers are |2j+1| >= 2K+3, each with both signs
    mass = 2.0 * pref * 1.0 / (2.0 * (2.0 * K + 2.0))
    # (1+|t|)^alpha <= 1+|t|^alpha for alpha <= 1, so one bound serves both families
    pow_part = 2.0 * pref * (math.pi / (2.0 * a)) ** alpha * _odd_tail_integral(K + 0.5, alpha)
    return DiscreteMeasure(
        loc,
        wts,
        weight,
        tail_bound=mass + pow_part,
        tail_mass=mass,
        descriptor={"kind": "triangular-wave", "a": a, "alpha": alpha, "K": K, "series": "(2k+1)^-2"},
    )


def triangular_measure_norm(a: float, alpha: float, tail_tol: float = 1e-12) -> float:
    """Full-series w-norm a + C(alpha) a^(1-alpha) for w = 1+|t|^alpha."""
    return a + c_alpha(alpha, tail_tol) * a ** (1.0 - alpha)


# --- ideals, interpolation, convolution ---------------------------------------


def ideal_membership_J(f: TestFunction, lam: float, alpha: float, tol: float = 1e-10):
    """Whether fhat and its first floor(alpha) derivatives vanish at lam."""
    k = int(math.floor(alpha))
    if f.max_fourier_order is not None and k > f.max_fourier_order:
        raise ValueError("not enough transform derivatives available")
    witnesses = [complex(f.fourier(lam, j)) for j in range(k + 1)]
    return all(abs(v) <= tol for v in witnesses), witnesses


def interpolating_family(lambdas: Sequence[float], sigma: float = 1.0) -> list[GaussianPoly]:
    """Gaussians f_1..f_N with fhat_m(-lambda_n) = delta_mn."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.size > 1:
        gaps = np.abs(lam[:, None] - lam[None, :])[~np.eye(lam.size, dtype=bool)]
        if gaps.min() < 1e-3 / sigma:
            raise IllConditionedError(
                f"points closer than 1e-3/sigma ({gaps.min():.3e}); increase sigma to separate them"
            )
    G = SQRT_2PI * sigma * np.exp(-0.5 * sigma**2 * (lam[None, :] - lam[:, None]) ** 2)
    try:
        factor = sla.cho_factor(G)
    except np.linalg.LinAlgError as exc:
        raise IllConditionedError("Gaussian kernel matrix is numerically singular; increase sigma") from exc
    beta = sla.cho_solve(factor, np.eye(lam.size))
    return [GaussianPoly([(beta[m, j], 0, sigma, -lam[j]) for j in range(lam.size)]) for m in range(lam.size)]


def bandlimited_bump(
    center: float, inner_r: float, outer_r: float, smoothness: int = 6, alpha: float | None = None
) -> Bump:
    if alpha is not None and smoothness < alpha + 2:
        raise DomainError(f"smoothness {smoothness} < alpha + 2: the bump is not in L1_w")
    return Bump(center, inner_r, outer_r, smoothness)


def approximate_identity(width: float) -> GaussianPoly:
    """Unit-mass Gaussian of the given width (a smooth stand-in for 2n chi_[-1/n,1/n])."""
    return gaussian(width, coef=1.0 / (SQRT_2PI * width))


def _grid_for(fs, half_width, step):
    sig = [s for f in fs if isinstance(f, GaussianPoly) for _, _, s, _ in f.terms]
    if half_width is None:
        if not sig or len(sig) != sum(len(f.terms) if isinstance(f, GaussianPoly) else 1 for f in fs):
            raise ValueError("half_width and step are required for non-Gaussian functions")
        half_width = 14.0 * max(sig)
    if step is None:
        step = min(sig) / 12.0 if sig else 0.01
    n = int(round(half_width / step))
    t = np.linspace(-n * step, n * step, 2 * n + 1)
    return t, step


def convolve_on_grid(f: TestFunction, g: TestFunction, half_width=None, step=None):
    """Samples of f*g on a uniform grid (rectangle rule, exact for fast decay)."""
    t, dt = _grid_for([f, g], half_width, step)
    h = signal.fftconvolve(f(t), g(t)) * dt
    n = (len(t) - 1) // 2
    tt = np.arange(-2 * n, 2 * n + 1) * dt
    return tt, h, dt


def convolve_check(f: TestFunction, g: TestFunction, s_samples, quad_tol: float = 1e-8, half_width=None, step=None):
    """max over s of |(f*g)^(s) - fhat(s) ghat(s)|."""
    tt, h, dt = convolve_on_grid(f, g, half_width, step)
    s = np.asarray(s_samples, dtype=float)
    hh = np.exp(-1j * np.outer(s, tt)) @ h * dt
    return float(np.max(np.abs(hh - f.fourier(s) * g.fourier(s))))
