"""Monic real univariate polynomial engine.

Coefficients are stored in ascending degree order, so ``coeffs[k]`` is the
coefficient of ``x**k`` and the last entry is the leading coefficient.
Root profiling targets the small degrees (<= 8) that the rest of the
library works with; behaviour on ill-conditioned high-degree inputs is
unspecified.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .config import DEFAULT_TOL, Tolerances
from .errors import DegenerateResult, RootFindingFailed

# Root iteration constants: starts are perturbed roots of unity scaled by the
# Cauchy bound, and a root counts as converged when |f(z)| drops below
# _ROOT_FTOL times the coefficient scale.
_ROOT_MAX_ITER = 500
_ROOT_FTOL = 1e-13

# Relative threshold below which a coefficient produced by cancellation is
# treated as exactly zero when trimming degrees.
_TRIM_REL = 1e-12


@dataclass(frozen=True)
class RealPoly:
    """Monic polynomial with real coefficients, degree >= 1."""

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 2:
            raise ValueError("degree must be at least 1")
        if any(not math.isfinite(c) for c in coeffs):
            raise ValueError("coefficients must be finite")
        if coeffs[-1] != 1.0:
            raise ValueError("polynomial must be monic (leading coefficient 1)")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def coefficient_scale(self) -> float:
        return max(1.0, max(abs(c) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[float]) -> "RealPoly":
        return cls(tuple(coeffs))

    @classmethod
    def from_real_roots(cls, *roots: float) -> "RealPoly":
        acc = [1.0]
        for r in roots:
            acc = mul_coeffs(acc, [-float(r), 1.0])
        return cls(tuple(acc))

    def __call__(self, z: Union[float, complex]) -> Union[float, complex]:
        value, _ = eval_and_derive(self, z)
        return value

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0.0 and k != 0 and len(terms) > 0:
                continue
            if c == 0.0 and not terms and k > 0:
                continue
            terms.append((k, c))
        parts = []
        for k, c in terms:
            if k == self.degree:
                lead = "x" if k == 1 else (f"x^{k}" if k > 1 else repr(c))
                parts.append(lead)
                continue
            if c == 0.0:
                continue
            sign = " - " if c < 0 else " + "
            mag = abs(c)
            if k == 0:
                parts.append(f"{sign}{mag!r}")
            elif k == 1:
                parts.append(f"{sign}{mag!r}*x" if mag != 1.0 else f"{sign}x")
            else:
                parts.append(f"{sign}{mag!r}*x^{k}" if mag != 1.0 else f"{sign}x^{k}")
        return "".join(parts) if parts else "x"


@dataclass(frozen=True)
class RootProfile:
    """Real roots with multiplicities plus conjugate pair data.

    ``real_roots`` holds (value, multiplicity), strictly increasing in value;
    ``complex_pairs`` holds (a, b, multiplicity) for roots a +/- i*b with
    b > 0, sorted by (a, b).
    """

    real_roots: tuple[tuple[float, int], ...]
    complex_pairs: tuple[tuple[float, float, int], ...]

    def __post_init__(self) -> None:
        for _, m in self.real_roots:
            if m < 1:
                raise ValueError("multiplicities must be positive")
        for p, q in zip(self.real_roots, self.real_roots[1:]):
            if not p[0] < q[0]:
                raise ValueError("real roots must be strictly increasing")
        for a, b, m in self.complex_pairs:
            if not b > 0:
                raise ValueError("complex pairs must carry b > 0")
            if m < 1:
                raise ValueError("multiplicities must be positive")
        for p, q in zip(self.complex_pairs, self.complex_pairs[1:]):
            if not (p[0], p[1]) < (q[0], q[1]):
                raise ValueError("complex pairs must be sorted by (a, b)")

    @property
    def total_multiplicity(self) -> int:
        real = sum(m for _, m in self.real_roots)
        cplx = sum(m for _, _, m in self.complex_pairs)
        return real + 2 * cplx


# ---------------------------------------------------------------------------
# coefficient-list ring operations (non-monic intermediates)

def trim_coeffs(coeffs: Sequence[float]) -> list[float]:
    """Drop leading coefficients that vanished through cancellation."""
    out = list(coeffs)
    scale = max((abs(c) for c in out), default=0.0)
    cutoff = _TRIM_REL * scale
    while len(out) > 1 and abs(out[-1]) <= cutoff:
        out.pop()
    return out


def add_coeffs(a: Sequence[float], b: Sequence[float]) -> list[float]:
    out = [0.0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def scale_coeffs(a: Sequence[float], s: float) -> list[float]:
    return [s * c for c in a]


def mul_coeffs(a: Sequence[float], b: Sequence[float]) -> list[float]:
    out = [0.0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0.0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def pow_coeffs(a: Sequence[float], k: int) -> list[float]:
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    out = [1.0]
    base = list(a)
    while k:
        if k & 1:
            out = mul_coeffs(out, base)
        k >>= 1
        if k:
            base = mul_coeffs(base, base)
    return out


def derive_coeffs(coeffs: Sequence[float], order: int = 1) -> list[float]:
    out = list(coeffs)
    for _ in range(order):
        out = [k * c for k, c in enumerate(out)][1:]
        if not out:
            out = [0.0]
    return out


def monic_from(coeffs: Sequence[float]) -> RealPoly:
    """Normalize a raw coefficient list to a monic RealPoly.

    A leading coefficient lost to cancellation drops the degree before the
    division; a constant result raises DegenerateResult.
    """
    trimmed = trim_coeffs(coeffs)
    if len(trimmed) < 2:
        raise DegenerateResult("expression expands to a constant polynomial")
    lead = trimmed[-1]
    return RealPoly(tuple(c / lead for c in trimmed))


def poly_algebra(
    lhs: Union[RealPoly, float],
    op: str,
    rhs: Union[RealPoly, int, float],
) -> RealPoly:
    """Ring operation on polynomials with a final monic normalization."""
    a = list(lhs.coeffs) if isinstance(lhs, RealPoly) else [float(lhs)]
    if op == "pow":
        if not isinstance(rhs, int) or rhs < 1:
            raise ValueError("pow exponent must be an integer >= 1")
        return monic_from(pow_coeffs(a, rhs))
    b = list(rhs.coeffs) if isinstance(rhs, RealPoly) else [float(rhs)]
    if op == "add":
        return monic_from(add_coeffs(a, b))
    if op == "mul":
        return monic_from(mul_coeffs(a, b))
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# evaluation

def eval_and_derive(
    f: Union[RealPoly, Sequence[float]],
    z: Union[float, complex],
) -> tuple[Union[float, complex], Union[float, complex]]:
    """Horner-scheme simultaneous value and first derivative at ``z``."""
    coeffs = f.coeffs if isinstance(f, RealPoly) else f
    value: Union[float, complex] = coeffs[-1]
    deriv: Union[float, complex] = 0.0
    for c in reversed(coeffs[:-1]):
        deriv = deriv * z + value
        value = value * z + c
    return value, deriv


# ---------------------------------------------------------------------------
# root profiling

def _aberth_roots(coeffs: Sequence[float], cscale: float) -> list[complex]:
    """All complex roots by Aberth-Ehrlich simultaneous iteration."""
    n = len(coeffs) - 1
    if n == 1:
        return [complex(-coeffs[0], 0.0)]
    radius = 1.0 + max(abs(c) for c in coeffs[:-1])
    # Perturbed roots of unity: a global twist plus a per-index stagger keeps
    # the start configuration asymmetric so symmetric root sets cannot stall.
    starts = []
    for k in range(n):
        angle = 2.0 * math.pi * k / n + 0.4 + 0.01 * k
        r = radius * (1.0 + 0.05 * math.cos(2.7 * k + 1.0))
        starts.append(r * cmath.exp(1j * angle))
    z = starts
    ftol = _ROOT_FTOL * cscale
    for _ in range(_ROOT_MAX_ITER):
        vals = [eval_and_derive(coeffs, zi) for zi in z]
        residuals = [abs(v) for v, _ in vals]
        if max(residuals) <= ftol:
            return z
        new_z = list(z)
        for i in range(n):
            v, dv = vals[i]
            if residuals[i] <= 0.01 * ftol:
                continue
            if dv == 0:
                new_z[i] = z[i] + (1e-6 + 1e-6j) * (1.0 + abs(z[i]))
                continue
            newton = v / dv
            repulsion = 0.0 + 0.0j
            for j in range(n):
                if j == i or z[i] == z[j]:
                    continue
                repulsion += 1.0 / (z[i] - z[j])
            denom = 1.0 - newton * repulsion
            step = newton if denom == 0 else newton / denom
            cap = 0.5 * (1.0 + abs(z[i]))
            mag = abs(step)
            if mag > cap:
                step *= cap / mag
            new_z[i] = z[i] - step
        z = new_z
    worst = max(abs(eval_and_derive(coeffs, zi)[0]) for zi in z)
    raise RootFindingFailed(
        f"root iteration did not converge in {_ROOT_MAX_ITER} steps "
        f"(worst residual {worst:.3e}, tolerance {ftol:.3e})"
    )


def _error_estimates(
    roots: Sequence[complex], coeffs: Sequence[float]
) -> list[float]:
    """Per-root location-error estimates from the Newton correction.

    For a root of multiplicity m, f/f' is about (z - r)/m, so n*|f/f'| bounds
    the distance to the true root without knowing m. A cap keeps the estimate
    sane when f' vanishes exactly.
    """
    n = len(roots)
    out = []
    for zi in roots:
        v, dv = eval_and_derive(coeffs, zi)
        cap = 0.05 * (1.0 + abs(zi))
        est = cap if dv == 0 else min(n * abs(v) / abs(dv), cap)
        out.append(est)
    return out


def _link_clusters(
    roots: Sequence[complex], coeffs: Sequence[float], tol: Tolerances
) -> list[list[complex]]:
    """Single-linkage clustering with a multiplicity-aware radius.

    Computed roots belonging to one multiple root spread by roughly
    (f-tolerance)^(1/m), far wider than ``cluster_radius`` for m >= 3, so the
    linking radius also grows with the per-root error estimates.
    """
    n = len(roots)
    est = _error_estimates(roots, coeffs)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            s = max(1.0, abs(roots[i]), abs(roots[j]))
            threshold = max(tol.cluster_radius * s, 4.0 * (est[i] + est[j]))
            if abs(roots[i] - roots[j]) <= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    return list(groups.values())


def _polish_cluster(
    coeffs: Sequence[float], members: Sequence[complex]
) -> complex:
    """Refine a cluster center to the underlying (possibly multiple) root.

    A cluster of size m marks a root where the (m-1)-th derivative has a
    simple zero, so Newton on that derivative recovers the center to full
    precision even when direct evaluation of f has stagnated.
    """
    m = len(members)
    center = sum(members) / m
    spread = max((abs(z - center) for z in members), default=0.0)
    target = list(coeffs) if m == 1 else derive_coeffs(coeffs, m - 1)
    z = center
    for _ in range(60):
        v, dv = eval_and_derive(target, z)
        if dv == 0:
            break
        step = v / dv
        z = z - step
        if abs(step) <= 1e-17 * (1.0 + abs(z)):
            break
    moved = abs(z - center)
    limit = max(10.0 * spread, 1e-3 * (1.0 + abs(center)))
    if not (cmath.isfinite(z) and moved <= limit):
        z = center
    return z


def _merge_close_reals(
    entries: list[tuple[float, int]], tol: Tolerances
) -> list[tuple[float, int]]:
    entries = sorted(entries)
    merged: list[tuple[float, int]] = []
    for p, m in entries:
        if merged:
            prev, pm = merged[-1]
            if p - prev <= tol.cluster_radius * max(1.0, abs(p), abs(prev)):
                merged[-1] = ((prev * pm + p * m) / (pm + m), pm + m)
                continue
        merged.append((p, m))
    return merged


def _merge_close_pairs(
    entries: list[tuple[float, float, int]], tol: Tolerances
) -> list[tuple[float, float, int]]:
    entries = sorted(entries)
    merged: list[tuple[float, float, int]] = []
    for a, b, m in entries:
        if merged:
            pa, pb, pm = merged[-1]
            s = tol.cluster_radius * max(1.0, abs(a), abs(b), abs(pa), abs(pb))
            if abs(a - pa) <= s and abs(b - pb) <= s:
                total = pm + m
                merged[-1] = (
                    (pa * pm + a * m) / total,
                    (pb * pm + b * m) / total,
                    total,
                )
                continue
        merged.append((a, b, m))
    return merged


def _pair_conjugates(
    clusters: list[tuple[complex, int]], tol: Tolerances
) -> list[tuple[float, float, int]]:
    positive = [(z, m) for z, m in clusters if z.imag > 0]
    negative = [(z, m) for z, m in clusters if z.imag < 0]
    if len(positive) != len(negative):
        raise RootFindingFailed("complex roots do not split into conjugate pairs")
    pairs: list[tuple[float, float, int]] = []
    remaining = list(negative)
    for z, m in positive:
        best = None
        best_dist = math.inf
        for idx, (w, wm) in enumerate(remaining):
            dist = abs(z - w.conjugate())
            if dist < best_dist:
                best, best_dist = idx, dist
        assert best is not None
        w, wm = remaining.pop(best)
        s = max(1.0, abs(z))
        if wm != m or best_dist > max(tol.cluster_radius * s, 1e-7 * s):
            raise RootFindingFailed(
                f"no conjugate partner for root {z:.6g} (multiplicity {m})"
            )
        a = 0.5 * (z.real + w.real)
        b = 0.5 * (z.imag - w.imag)
        pairs.append((a, b, m))
    return pairs


def _verify_multiplicities(
    coeffs: Sequence[float],
    reals: list[tuple[float, int]],
    pairs: list[tuple[float, float, int]],
) -> None:
    """Sanity check: the first m-1 derivatives must vanish at each root."""
    points: list[tuple[complex, int]] = [(complex(p, 0.0), m) for p, m in reals]
    points += [(complex(a, b), m) for a, b, m in pairs]
    for z, m in points:
        current = list(coeffs)
        for order in range(m):
            value, _ = eval_and_derive(current, z)
            dscale = max(1.0, max(abs(c) for c in current))
            dscale *= max(1.0, abs(z)) ** (len(current) - 1)
            if abs(value) > 1e-6 * dscale:
                raise RootFindingFailed(
                    f"multiplicity hypothesis failed at root {z:.6g}: "
                    f"derivative order {order} has residual {abs(value):.3e}"
                )
            current = derive_coeffs(current)


def find_root_profile(f: RealPoly, tol: Tolerances = DEFAULT_TOL) -> RootProfile:
    """Locate all roots of ``f`` and group them into a RootProfile."""
    cscale = f.coefficient_scale
    if f.degree == 1:
        return RootProfile(real_roots=((-f.coeffs[0], 1),), complex_pairs=())
    roots = _aberth_roots(f.coeffs, cscale)
    clusters = _link_clusters(roots, f.coeffs, tol)
    polished = [(_polish_cluster(f.coeffs, group), len(group)) for group in clusters]
    reals: list[tuple[float, int]] = []
    complexes: list[tuple[complex, int]] = []
    for z, m in polished:
        if abs(z.imag) <= tol.cluster_radius * max(1.0, abs(z)):
            reals.append((z.real, m))
        else:
            complexes.append((z, m))
    pairs = _pair_conjugates(complexes, tol)
    reals = _merge_close_reals(reals, tol)
    pairs = _merge_close_pairs(pairs, tol)
    total = sum(m for _, m in reals) + 2 * sum(m for _, _, m in pairs)
    if total != f.degree:
        raise RootFindingFailed(
            f"profile multiplicities sum to {total}, expected degree {f.degree}"
        )
    _verify_multiplicities(f.coeffs, reals, pairs)
    return RootProfile(tuple(reals), tuple(pairs))


@lru_cache(maxsize=256)
def _profile_cached(f: RealPoly, tol: Tolerances) -> RootProfile:
    return find_root_profile(f, tol)


def split_real_complex(
    f: RealPoly,
    profile: RootProfile,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[Optional[RealPoly], Optional[RealPoly]]:
    """Split ``f`` into its real-root and complex-root factors.

    Returns (g, h) with g the product of (x - p)^m over real roots and h the
    product of the irreducible quadratics of the conjugate pairs. A missing
    factor is returned as None (the constant-1 marker).
    """
    g_coeffs = [1.0]
    for p, m in profile.real_roots:
        g_coeffs = mul_coeffs(g_coeffs, pow_coeffs([-p, 1.0], m))
    h_coeffs = [1.0]
    for a, b, m in profile.complex_pairs:
        quad = [a * a + b * b, -2.0 * a, 1.0]
        h_coeffs = mul_coeffs(h_coeffs, pow_coeffs(quad, m))
    product = mul_coeffs(g_coeffs, h_coeffs)
    padded = product + [0.0] * (len(f.coeffs) - len(product))
    worst = max(abs(c - d) for c, d in zip(padded, f.coeffs))
    bound = tol.eps_residual * max(abs(c) for c in f.coeffs)
    if worst > bound:
        raise RootFindingFailed(
            f"factor reconstruction error {worst:.3e} exceeds {bound:.3e}"
        )
    g = RealPoly(tuple(g_coeffs)) if len(g_coeffs) > 1 else None
    h = RealPoly(tuple(h_coeffs)) if len(h_coeffs) > 1 else None
    return g, h
