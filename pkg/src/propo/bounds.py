"""High-precision evaluation of the closed-form quantities around f(k).

Several formulas are asymptotic: wherever a ``(1 + o(1))`` factor appears
it is replaced by 1 and the resulting field is tagged ``asymptotic``.
Exact integers (factorials, binomials at integer n) are Python ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .core import InputError

DEFAULT_DPS = 50


def _check_k(k: int) -> None:
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")


def factorial_lower_bound(k: int) -> int:
    """k!, the counting lower bound on the edge count of any Property O family."""
    _check_k(k)
    return math.factorial(k)


def upper_bound_value(k: int, dps: int = DEFAULT_DPS) -> mpf:
    """(k^2 ln k) k!, the probabilistic upper bound on f(k) for large k."""
    _check_k(k)
    with mp.workdps(dps):
        return mpf(k) ** 2 * mpmath.log(k) * math.factorial(k)


def theorem1_n(k: int, dps: int = DEFAULT_DPS) -> tuple[mpf, int]:
    """n = (k/e)^2 (pi e^(e^2/2) k^3 ln k)^(1/k), and its ceiling."""
    _check_k(k)
    with mp.workdps(dps):
        kk = mpf(k)
        n = (kk / mp.e) ** 2 * (mp.pi * mpmath.exp(mp.e**2 / 2) * kk**3 * mpmath.log(kk)) ** (1 / kk)
        return +n, int(mpmath.ceil(n))


def falling_factorial(x, k: int, dps: int = DEFAULT_DPS) -> mpf:
    with mp.workdps(dps):
        out = mpf(1)
        for i in range(k):
            out *= mpf(x) - i
        return out


def binomial_real(x, k: int, dps: int = DEFAULT_DPS) -> mpf:
    """C(x, k) at real x through the falling factorial."""
    with mp.workdps(dps):
        return falling_factorial(x, k, dps) / math.factorial(k)


def union_bound_log(n: int, k: int, dps: int = DEFAULT_DPS) -> mpf:
    """ln(n!) + C(n,k) ln(1 - 1/k!); a negative value means n!(1-1/k!)^C(n,k) < 1."""
    _check_k(k)
    if k > n:
        raise InputError(f"need k <= n, got n={n}, k={k}")
    with mp.workdps(dps):
        return mpmath.loggamma(n + 1) + math.comb(n, k) * mpmath.log1p(-1 / mpmath.factorial(k))


@dataclass(frozen=True)
class Certification:
    k: int
    n: int
    value: mpf
    value_2x: mpf
    certified: bool
    signs_agree: bool


def certify_union_bound(k: int, dps: int = DEFAULT_DPS) -> Certification:
    """Evaluate the union bound at n = ceil(theorem1_n(k)) at dps and 2*dps."""
    _, n = theorem1_n(k, 2 * dps)
    lo = union_bound_log(n, k, dps)
    hi = union_bound_log(n, k, 2 * dps)
    agree = (lo < 0) == (hi < 0)
    return Certification(k, n, lo, hi, bool(lo < 0 and hi < 0), agree)


def union_bound_threshold(k_max: int = 100, dps: int = DEFAULT_DPS) -> tuple[int | None, list[Certification]]:
    """Least k0 such that the union bound certifies for every k in k0..k_max."""
    certs = [certify_union_bound(k, dps) for k in range(2, k_max + 1)]
    threshold = None
    for c in reversed(certs):
        if not c.certified:
            break
        threshold = c.k
    return threshold, certs


def eq3_ratio(k: int, dps: int = DEFAULT_DPS) -> tuple[mpf, mpf]:
    """C(n,k)/k! at the real n = theorem1_n(k), and its ratio to (1/2) k^2 ln k."""
    _check_k(k)
    n, _ = theorem1_n(k, dps)
    with mp.workdps(dps):
        value = binomial_real(n, k, dps) / math.factorial(k)
        return value, value / (mpf(k) ** 2 * mpmath.log(k) / 2)


def eq3_threshold(k_max: int = 500, dps: int = 30) -> int | None:
    """Least k0 with C(n,k)/k! <= k^2 ln k for every k in k0..k_max."""
    threshold = None
    for k in range(k_max, 1, -1):
        value, _ = eq3_ratio(k, dps)
        with mp.workdps(dps):
            if value > mpf(k) ** 2 * mpmath.log(k):
                break
        threshold = k
    return threshold


def fact_ratio(n: int, k: int, dps: int = DEFAULT_DPS) -> mpf:
    """(n)_k / n^k, which is about e^(-e^2/2) when n is near (k/e)^2."""
    _check_k(k)
    if k > n:
        raise InputError(f"need k <= n, got n={n}, k={k}")
    with mp.workdps(dps):
        return mpf(math.perm(n, k)) / mpf(n) ** k


def fact_limit(dps: int = DEFAULT_DPS) -> mpf:
    with mp.workdps(dps):
        return mpmath.exp(-mp.e**2 / 2)


def c_statement(dps: int = DEFAULT_DPS) -> mpf:
    """The constant in its closed statement form: 2 pi / e^(1 + e^2/2)."""
    with mp.workdps(dps):
        return 2 * mp.pi / mpmath.exp(1 + mp.e**2 / 2)


def c_proof(dps: int = DEFAULT_DPS) -> mpf:
    """The constant in its derived form: (2 pi / 3e) e^(e^2/2)."""
    with mp.workdps(dps):
        return 2 * mp.pi / (3 * mp.e) * mpmath.exp(mp.e**2 / 2)


def theorem2_params(k: int, alpha: float, dps: int = DEFAULT_DPS) -> dict[str, mpf]:
    """omega, omega', both n variants and C(n,k)/k! for the random-tournament bound.

    n = (c alpha)^(1/k) (k/e)^2 k^(3/(2k)) for each constant c.  All o(1)
    terms are dropped.
    """
    _check_k(k)
    alpha = mpf(alpha)
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    with mp.workdps(dps):
        kk = mpf(k)
        omega = alpha / (3 * mp.e) * mpmath.sqrt(kk)
        omega_prime = 2 / alpha * omega
        base = (kk / mp.e) ** 2 * kk ** (mpf(3) / (2 * kk))
        n_stmt = (c_statement(dps) * alpha) ** (1 / kk) * base
        n_proof = (c_proof(dps) * alpha) ** (1 / kk) * base
        kf = math.factorial(k)
        return {
            "omega": omega,
            "omega_prime": omega_prime,
            "c_stmt": c_statement(dps),
            "c_proof": c_proof(dps),
            "n_stmt": n_stmt,
            "n_proof": n_proof,
            "expected_C": binomial_real(n_proof, k, dps) / kf,
            "expected_C_stmt": binomial_real(n_stmt, k, dps) / kf,
        }


def _num(x, digits: int = 20) -> str:
    return mpmath.nstr(x, digits)


def bounds_report(k: int, alpha: float | None = None, n: int | None = None, dps: int = DEFAULT_DPS) -> dict:
    """Every quantity at this k as JSON-ready ``{"value", "kind"}`` entries."""
    _check_k(k)
    digits = min(dps, 40)

    def exact(v):
        return {"value": v, "kind": "exact"}

    def approx(v, note="(1+o(1)) factors set to 1"):
        return {"value": _num(v, digits), "kind": "asymptotic", "note": note}

    def real(v):
        return {"value": _num(v, digits), "kind": "exact"}

    n_real, n_int = theorem1_n(k, dps)
    eq3_value, eq3_rel = eq3_ratio(k, dps)
    cert = certify_union_bound(k, dps)
    report = {
        "k": k,
        "precision_digits": dps,
        "factorial_lower": exact(factorial_lower_bound(k)),
        "upper_bound_value": real(upper_bound_value(k, dps)),
        "n_thm1": real(n_real),
        "n_thm1_ceil": exact(n_int),
        "eq3_value": real(eq3_value),
        "eq3_ratio_to_half_k2_lnk": approx(eq3_rel, "tends to 1; finite-k deviation is the o(1) term"),
        "eq4_log": real(cert.value),
        "eq4_log_2x_precision": real(cert.value_2x),
        "eq4_certified": exact(cert.certified),
        "eq4_signs_agree": exact(cert.signs_agree),
    }
    if alpha is not None:
        p = theorem2_params(k, alpha, dps)
        report["alpha"] = alpha
        report["omega"] = approx(p["omega"])
        report["omega_prime"] = approx(p["omega_prime"])
        report["c_stmt"] = real(p["c_stmt"])
        report["c_proof"] = real(p["c_proof"])
        report["n_thm2_stmt"] = approx(p["n_stmt"])
        report["n_thm2_proof"] = approx(p["n_proof"])
        report["expected_consistent"] = approx(p["expected_C"])
        report["discrepancy"] = {
            "value": bool(abs(p["c_stmt"] - p["c_proof"]) > mpf(10) ** (-dps // 2)),
            "kind": "exact",
            "note": "the two forms of c differ; both n variants are reported",
        }
    if n is not None:
        report["n"] = n
        report["union_bound_log_at_n"] = real(union_bound_log(n, k, dps))
        report["fact_ratio_at_n"] = real(fact_ratio(n, k, dps))
        report["fact_limit"] = approx(fact_limit(dps), "limit of (n)_k/n^k for n ~ (k/e)^2")
        report["expected_consistent_at_n"] = exact(f"{math.comb(n, k)}/{math.factorial(k)}")
    return report
