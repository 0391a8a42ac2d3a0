"""Monic integer polynomials with all roots simple in a prescribed union.

Starting from an exact Pell datum (P, Q=1, M) with rational M > 2, the
composition P_n = lam^n * C_n(P / lam) with lam = M/2 and C_n the monic-pair
Chebyshev family (C_n(t + 1/t) = t^n + t^-n) oscillates n times through
+-2 lam^n on every band.  Whenever the top block of coefficients of P_n is
integral, the remaining fractional parts can be swept away by a correction
in the graded basis {x^j P_k} whose sup norm on E stays strictly below
2 lam^n — so the corrected polynomial still alternates in sign at the
extremum points of P_n and keeps all n*r roots, now with integer
coefficients.  Certificates here are exact: candidate points are rational,
membership in E is the rational inequality P(x)^2 <= M^2, and signs are
evaluated in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    CertificationError,
    DiscreteMeasure,
    ExactPoly,
    IntervalUnion,
    isolate_real_roots,
    make_interval_union,
)
from .abel import BandDensity
from .pellabel import PellAbelDatum

__all__ = [
    "RobinsonInstance",
    "make_instance",
    "preset_x2m6",
    "preset_x2m5",
    "chebyshev_Tn",
    "compose_Pn",
    "certify_integrality",
    "correction_Cn",
    "generate",
    "generate_at",
    "root_measure_from_certificate",
    "convergence_report",
]


@dataclass(frozen=True)
class RobinsonInstance:
    """Exact Pell datum plus the correction-budget constants.

    lam = M/2 > 1; A bounds sup over E of 1 + |x| + ... + |x|^(r-1) from
    above (rational, certified from outer root bounds of P^2 - M^2); ell is
    the smallest integer with lam^ell (lam - 1) >= A/2, the number of top
    basis elements the correction must not touch.
    """

    pa: PellAbelDatum
    lam: Fraction
    A: Fraction
    ell: int


def make_instance(pa: PellAbelDatum) -> RobinsonInstance:
    P, Q, M = pa.P, pa.Q, pa.M
    if not isinstance(P, ExactPoly) or not isinstance(Q, ExactPoly):
        raise ValueError("need an exact-coefficient Pell datum")
    if Q.degree != 0 or Q.coeffs[0] != 1:
        raise ValueError("need Q = 1")
    M = Fraction(M)
    if not M > 2:
        raise ValueError("need M > 2 (capacity > 1)")
    lam = M / 2

    # certified |x| bound on E = {P^2 <= M^2} from the outer isolation bounds
    D_ex = P * P - ExactPoly((M * M,))
    iso = isolate_real_roots(D_ex, refine=1e-9)
    B = max(abs(iso[0][0]), abs(iso[-1][1]))
    A = sum((B**k for k in range(pa.r)), Fraction(0))

    ell = 0
    while lam**ell * (lam - 1) < A / 2:
        ell += 1
    return RobinsonInstance(pa=pa, lam=lam, A=A, ell=ell)


def _preset(p_coeffs, M: Fraction) -> RobinsonInstance:
    P = ExactPoly.from_list(p_coeffs)
    D = P * P - ExactPoly((M * M,))
    iso = isolate_real_roots(D, refine=1e-14)
    bands = [(float(iso[2 * i][0]), float(iso[2 * i + 1][1])) for i in range(P.degree)]
    pa = PellAbelDatum(
        E=make_interval_union(bands),
        P=P,
        Q=ExactPoly((Fraction(1),)),
        D=D,
        M=M,
        r=P.degree,
        r_j=tuple([1] * P.degree),
    )
    return make_instance(pa)


def preset_x2m6() -> RobinsonInstance:
    """P = X^2 - 6, M = 4: integer lam = 2, so compositions need no
    correction; bands +-[sqrt2, sqrt10], capacity sqrt2."""
    return _preset([-6, 0, 1], Fraction(4))


def preset_x2m5() -> RobinsonInstance:
    """P = X^2 - 5, M = 3: lam = 3/2 exercises the correction machinery;
    bands +-[sqrt2, sqrt8], capacity sqrt(3/2)."""
    return _preset([-5, 0, 1], Fraction(3))


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------


def chebyshev_Tn(n: int) -> ExactPoly:
    """Monic integer C_n with C_n(t + 1/t) = t^n + t^(-n); C_0 = 2, C_1 = X."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a = ExactPoly((Fraction(2),))
    if n == 0:
        return a
    b = ExactPoly.x()
    x = ExactPoly.x()
    for _ in range(n - 1):
        a, b = b, x * b - a
    return b


def _ladder(inst: RobinsonInstance, n: int) -> list[ExactPoly]:
    """[P_0..P_n] with P_k = lam^k C_k(P/lam): P_0 = 2, P_1 = P,
    P_{k+1} = P P_k - lam^2 P_{k-1}."""
    P = inst.pa.P
    lam2 = ExactPoly((inst.lam * inst.lam,))
    out = [ExactPoly((Fraction(2),)), P]
    for _ in range(n - 1):
        out.append(P * out[-1] - lam2 * out[-2])
    return out[: n + 1]


def compose_Pn(inst: RobinsonInstance, n: int) -> ExactPoly:
    """P_n = lam^n C_n(P/lam), exact; monic of degree n*r with sup norm
    2 lam^n on E."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _ladder(inst, n)[n]


def certify_integrality(inst: RobinsonInstance, n: int, Pn: ExactPoly | None = None) -> bool:
    """True iff the ell*r coefficients of P_n below the leading 1 are
    integers (the correction basis can then reach everything lower)."""
    if Pn is None:
        Pn = compose_Pn(inst, n)
    r, ell = inst.pa.r, inst.ell
    deg = Pn.degree
    lo = max(0, deg - ell * r)
    return all(c.denominator == 1 for c in Pn.coeffs[lo:deg])


def _sweep(inst: RobinsonInstance, n: int, Pn: ExactPoly):
    """Top-down removal of fractional parts in the basis {x^j P_k},
    0 <= j < r, 0 <= k < n - ell.  Returns (c table, corrected coeffs)."""
    r, ell = inst.pa.r, inst.ell
    ladder = _ladder(inst, n - ell - 1) if n - ell - 1 >= 0 else []
    w = list(Pn.coeffs)
    table: dict[tuple[int, int], Fraction] = {}
    half = Fraction(1, 2)
    for d in range(r * (n - ell) - 1, -1, -1):
        c = w[d] - math.floor(w[d] + half)
        if c == 0:
            continue
        k, j = divmod(d, r)
        if k == 0:
            c = c / 2  # P_0 = 2, the one non-monic basis element
        table[(j, k)] = c
        for idx, pc in enumerate(ladder[k].coeffs):
            w[idx + j] -= c * pc
    return table, w


def correction_Cn(inst: RobinsonInstance, n: int) -> tuple[ExactPoly, ExactPoly]:
    """The bounded correction C_n and the integer polynomial P_n - C_n.

    Every correction coefficient lies in [-1/2, 1/2), so on E the correction
    is below A lam^(n-ell) / (lam - 1) <= 2 lam^n; the sup is re-measured
    numerically and must come out strictly smaller than 2 lam^n.
    """
    if n <= inst.ell:
        raise CertificationError(f"need n > ell = {inst.ell}")
    Pn = compose_Pn(inst, n)
    if not certify_integrality(inst, n, Pn):
        raise CertificationError(
            f"top {inst.ell * inst.pa.r} coefficients of the degree-{Pn.degree} "
            "composition are not integral; pick a different multiplier"
        )
    table, w = _sweep(inst, n, Pn)
    bad = [d for d, c in enumerate(w) if c.denominator != 1]
    if bad:
        raise CertificationError(f"fractional coefficients remain at degrees {bad}")
    P_prime = ExactPoly(tuple(w))
    C_n = Pn - P_prime

    sup_C = _sup_on_bands(inst, table, n)
    threshold = 2.0 * float(inst.lam) ** n
    if table and not sup_C < threshold:
        raise CertificationError(
            f"correction sup {sup_C} reaches the oscillation amplitude {threshold}"
        )
    return C_n, P_prime


def _band_samples(E: IntervalUnion, per_band: int = 512) -> np.ndarray:
    xs = []
    for (u, v) in E.bands:
        t = np.linspace(0.0, np.pi, per_band)
        xs.append(0.5 * (u + v) + 0.5 * (v - u) * np.cos(t))
    return np.concatenate(xs)


def _eval_structured(inst: RobinsonInstance, n: int,
                     table: dict[tuple[int, int], Fraction],
                     x: np.ndarray, want: str = "P'"):
    """Float evaluation of P_n, C_n or P'_n = P_n - C_n through the scalar
    recurrence p_{k+1} = P(x) p_k - lam^2 p_{k-1}.

    On E the recurrence magnitudes stay of order lam^k, so this is stable
    where a power-basis evaluation of the huge integer coefficients would
    cancel catastrophically.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    Pf = inst.pa.P.to_real()
    lam2 = float(inst.lam) ** 2
    px = Pf(x)
    by_k: dict[int, list[tuple[int, float]]] = {}
    for (j, k), c in table.items():
        by_k.setdefault(k, []).append((j, float(c)))
    corr = np.zeros_like(x)
    p_prev = np.full_like(x, 2.0)
    p_cur = px.copy()
    for k in range(0, n + 1):
        pk = p_prev if k == 0 else p_cur
        for j, c in by_k.get(k, ()):  # corrections use k < n - ell only
            corr += c * x**j * pk
        if k >= 1 and k < n:
            p_prev, p_cur = p_cur, px * p_cur - lam2 * p_prev
    Pn = p_cur if n >= 1 else p_prev
    if want == "P_n":
        return Pn
    if want == "C_n":
        return corr
    return Pn - corr


def _sup_on_bands(inst: RobinsonInstance, table, n: int) -> float:
    if not table:
        return 0.0
    xs = _band_samples(inst.pa.E)
    return float(np.max(np.abs(_eval_structured(inst, n, table, xs, want="C_n"))))


# ---------------------------------------------------------------------------
# generation with exact certificates
# ---------------------------------------------------------------------------


def _rationalize_into_E(inst: RobinsonInstance, x: float, direction: int,
                        spacing: float) -> Fraction:
    """A rational point certified inside E = {P^2 <= M^2} near x.

    Interior points round onto a dyadic grid (refining on the rare miss);
    band-edge points walk inward in doubling grid steps, so the total shift
    stays of the order of the rounding error — far below the distance to
    the nearest zero of the composition — and never disturbs the sign.
    """
    P = inst.pa.P
    M2 = Fraction(inst.pa.M) ** 2
    den = 1 << 24
    if direction == 0:
        for _ in range(6):
            xi = Fraction(round(x * den), den)
            if P(xi) ** 2 <= M2:
                return xi
            den <<= 8
    else:
        base = round(x * den)
        j = 0
        while j <= 0.25 * spacing * den:
            xi = Fraction(base + direction * j, den)
            if P(xi) ** 2 <= M2:
                return xi
            j = 1 if j == 0 else 2 * j
    raise CertificationError(f"no certified rational point near {x}")


def _certificate(inst: RobinsonInstance, n: int,
                 table: dict[tuple[int, int], Fraction],
                 P_prime: ExactPoly) -> dict:
    """Exact alternating-sign certificate for P'_n.

    Per band: n*r_j + 1 rational points inside E (membership by the exact
    inequality P^2 <= M^2) where the signs of P'_n, evaluated exactly,
    alternate — forcing n*r_j simple roots in the band and n*r in total.
    """
    pa = inst.pa
    E, M, r = pa.E, float(pa.M), pa.r
    Pf = pa.P.to_real()
    scale = max(abs(e) for e in E.endpoints)
    bands_out = []
    intervals: list[tuple[Fraction, Fraction]] = []
    total = 0
    for j, (u, v) in enumerate(E.bands):
        nj = n * pa.r_j[j]
        spacing = (v - u) / max(nj, 1)
        # extrema of P_n in the band: P(x) = M cos(k pi / n) levels
        pts: list[float] = []
        for k in range(nj + 1):
            level = M * math.cos(math.pi * k / n)
            shifted = list(Pf.coeffs)
            shifted[0] -= level
            rts = np.roots(np.array(shifted[::-1]))
            for z in rts:
                if abs(z.imag) < 1e-8 * scale and u - 1e-9 * scale <= z.real <= v + 1e-9 * scale:
                    pts.append(float(z.real))
        pts = sorted(pts)
        # dedupe: neighboring levels can share no roots, but guard anyway
        dedup = [pts[0]]
        for x in pts[1:]:
            if x - dedup[-1] > 0.25 * spacing / max(n, 1):
                dedup.append(x)
        if len(dedup) != nj + 1:
            raise CertificationError(
                f"band {j}: located {len(dedup)} extremum points, need {nj + 1}"
            )
        xi_list = []
        for i, x in enumerate(dedup):
            direction = 1 if i == 0 else (-1 if i == len(dedup) - 1 else 0)
            xi_list.append(_rationalize_into_E(inst, x, direction, spacing))
        signs = [1 if P_prime(xi) > 0 else (-1 if P_prime(xi) < 0 else 0) for xi in xi_list]
        for a, b in zip(signs[:-1], signs[1:]):
            if a * b != -1:
                raise CertificationError(
                    f"band {j}: exact signs do not alternate ({signs})"
                )
        intervals.extend(zip(xi_list[:-1], xi_list[1:]))
        total += nj
        bands_out.append({
            "band": [u, v],
            "count": nj,
            "points": [str(x) for x in xi_list],
            "signs": signs,
        })
    if total != n * r:
        raise CertificationError(f"certified {total} roots, degree is {n * r}")
    sup_C = _sup_on_bands(inst, table, n)
    lamf = float(inst.lam)
    return {
        "n": n,
        "degree": n * r,
        "bands": bands_out,
        "isolating_intervals": [(str(a), str(b)) for a, b in intervals],
        "correction_sup": sup_C,
        "correction_bound": float(inst.A) * lamf ** (n - inst.ell) / (lamf - 1.0)
        if inst.ell <= n else None,
        "amplitude": 2.0 * lamf**n,
        "correction_terms": len(table),
    }


def generate_at(inst: RobinsonInstance, n: int):
    """(P'_n, certificate, c-table) for a given multiplier n; raises
    CertificationError when n is inadmissible."""
    Pn = compose_Pn(inst, n)
    if all(c.denominator == 1 for c in Pn.coeffs):
        table: dict = {}
        P_prime = Pn
    else:
        if n <= inst.ell or not certify_integrality(inst, n, Pn):
            raise CertificationError(
                f"multiplier {n} is not admissible for this instance"
            )
        table, w = _sweep(inst, n, Pn)
        bad = [d for d, c in enumerate(w) if c.denominator != 1]
        if bad:
            raise CertificationError(f"fractional coefficients remain at degrees {bad}")
        P_prime = ExactPoly(tuple(w))
    cert = _certificate(inst, n, table, P_prime)
    return P_prime, cert, table


def generate(inst: RobinsonInstance, degree_target: int, max_degree: int = 256):
    """Smallest admissible multiplier n with n*r >= degree_target; returns
    (P'_n monic integer, certificate)."""
    M = Fraction(inst.pa.M)
    if not M > 2:
        raise ValueError("need M > 2")
    r = inst.pa.r
    n = max(1, -(-degree_target // r))
    tried = []
    while n * r <= max_degree:
        try:
            P_prime, cert, _ = generate_at(inst, n)
            return P_prime, cert
        except CertificationError:
            tried.append(n)
            n += 1
    raise CertificationError(
        f"no admissible multiplier with degree <= {max_degree} "
        f"(tried n = {tried[:5]}..{tried[-1] if tried else '-'}); integrality of "
        "the top coefficients requires n divisible by a modulus that grows "
        "with the denominator of lam — raise the degree cap"
    )


# ---------------------------------------------------------------------------
# convergence of root measures
# ---------------------------------------------------------------------------


def root_measure_from_certificate(inst: RobinsonInstance, n: int,
                                  table: dict, cert: dict) -> DiscreteMeasure:
    """Roots of P'_n by bisection inside the certified isolating intervals,
    evaluated through the stable recurrence; equal weights 1/(n r)."""
    roots = []
    for (a_s, b_s) in cert["isolating_intervals"]:
        a, b = float(Fraction(a_s)), float(Fraction(b_s))
        fa = float(_eval_structured(inst, n, table, np.array([a]))[0])
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = float(_eval_structured(inst, n, table, np.array([m]))[0])
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
            if b - a < 1e-14 * max(1.0, abs(m)):
                break
        roots.append(0.5 * (a + b))
    w = 1.0 / len(roots)
    return DiscreteMeasure(tuple((complex(x), w) for x in roots))


def convergence_report(roots_sequence: Sequence[DiscreteMeasure],
                       mu_E: BandDensity) -> list[float]:
    """Kolmogorov (sup-CDF) distance of each root measure to mu_E."""
    out = []
    for m in roots_sequence:
        x, w = m.real_atoms()
        cum = np.cumsum(w)
        F = np.asarray(mu_E.cdf(x))
        D = max(float(np.max(np.abs(F - cum))), float(np.max(np.abs(F - (cum - w)))))
        out.append(D)
    return out
