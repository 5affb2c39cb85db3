"""Gamma and Mittag-Leffler evaluation on the non-positive real axis.

The Mittag-Leffler function E_{a,b}(x) = sum_k x^k / Gamma(a*k + b) is
evaluated for a in (0, 1], b > 0 and x <= 0 with a three-regime scheme
keyed to y = |x|**(1/a):

* small y: truncated Taylor series in extended (80-bit) precision with
  a term-ratio stopping rule;
* large y: the divergent asymptotic series sum_{k>=1} (-1)**(k+1)
  x**(-k) / Gamma(b - a*k), truncated at its globally smallest term,
  with the reciprocal gamma handled in log space through the
  reflection formula;
* the intermediate band, where both of the above lose accuracy to
  cancellation: a Chebyshev surrogate of log E fitted once per (a, b)
  against an arbitrary-precision Taylor evaluation built on decimal
  arithmetic and Spouge's gamma approximation.

All paths are deterministic and pure; tables are cached per (a, b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalError

_LD = np.longdouble
_LD_EPS = float(np.finfo(np.longdouble).eps)

__all__ = ["MLQuery", "gamma_fn", "mittag_leffler", "ml", "ml_array"]


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------

_GAMMA_OVERFLOW = 171.624376956302725


def gamma_fn(x: float) -> float:
    """Gamma function for positive (and negative non-integer) arguments.

    Relative error is a few ulps on (0, 170].  Raises DomainError at the
    poles (non-positive integers) and OverflowError once the result
    exceeds the double range (x > ~171.62).
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma_fn: argument must be finite, got {x!r}")
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"gamma_fn: pole at non-positive integer {x!r}")
    if x > _GAMMA_OVERFLOW:
        raise OverflowError(f"gamma_fn: overflow for x = {x!r} (max ~171.62)")
    return math.gamma(x)


def _inv_gamma_log_sign(t: float) -> tuple[float, float]:
    """Return (log|1/Gamma(t)|, sign of 1/Gamma(t)); poles map to (-inf, 0)."""
    if t > 0.0:
        return -math.lgamma(t), 1.0
    near = round(t)
    if abs(t - near) < 1e-13:
        return -math.inf, 0.0
    # reflection: 1/Gamma(t) = Gamma(1-t) * sin(pi t) / pi, with the sine
    # argument reduced exactly so precision survives large |t|
    r = t - near
    s = math.sin(math.pi * r)
    if near % 2:
        s = -s
    return math.lgamma(1.0 - t) + math.log(abs(s)) - math.log(math.pi), math.copysign(1.0, s)


# ---------------------------------------------------------------------------
# query type and validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MLQuery:
    """Validated argument triple for the Mittag-Leffler function."""

    alpha: float
    beta: float
    x: float

    def __post_init__(self) -> None:
        a, b, x = self.alpha, self.beta, self.x
        if not (math.isfinite(a) and 0.0 < a <= 1.0):
            raise DomainError(f"MLQuery: alpha must lie in (0, 1], got {a!r}")
        if not (math.isfinite(b) and b > 0.0):
            raise DomainError(f"MLQuery: beta must be positive, got {b!r}")
        if not (math.isfinite(x) and x <= 0.0):
            raise DomainError(f"MLQuery: x must be finite and <= 0, got {x!r}")


# ---------------------------------------------------------------------------
# regime map
# ---------------------------------------------------------------------------


def _regime_bounds(alpha: float, beta: float) -> tuple[float, float]:
    """(y_taylor, y_asym) thresholds in y = |x|**(1/alpha).

    Calibrated against an arbitrary-precision reference: the Taylor
    path holds 1e-11 up to the first bound and the asymptotic series
    from the second.  b == a is the weakest case on both sides because
    the leading asymptotic term vanishes there.
    """
    if abs(beta - alpha) <= 1e-9:
        return 4.0, 36.0
    if 0.5 <= beta <= 2.5:
        return 7.0, 28.0
    return 3.5, 40.0


# ---------------------------------------------------------------------------
# Taylor regime (extended double precision)
# ---------------------------------------------------------------------------

_TAYLOR_CAP = 50_000


def _taylor_vec(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """Taylor sum for a batch of non-positive x with small |x|**(1/alpha)."""
    xl = x.astype(_LD)
    acc = np.zeros_like(xl)
    pw = np.ones_like(xl)
    run = np.full_like(xl, 1e-300)
    k = 0
    prev_bound = math.inf
    while True:
        g = math.lgamma(alpha * k + beta)
        if g > 11300.0:  # term underflows even extended precision
            break
        term = pw * np.exp(_LD(-g))
        acc += term
        at = np.abs(term)
        run = np.maximum(run, at)
        pw *= xl
        if k >= 4:
            bound = float(np.max(at / run))
            ratio = min(bound / prev_bound if prev_bound > 0 else 0.0, 0.999)
            if bound / max(1.0 - ratio, 1e-3) < _LD_EPS * 1e-2:
                break
            prev_bound = bound
        k += 1
        if k > _TAYLOR_CAP:
            raise NumericalError(
                f"mittag_leffler: Taylor series did not converge within {_TAYLOR_CAP} "
                f"terms for alpha={alpha!r}, beta={beta!r}"
            )
    return acc.astype(np.float64)


# ---------------------------------------------------------------------------
# asymptotic regime
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _asym_table(alpha: float, beta: float, kmax: int) -> tuple[np.ndarray, np.ndarray]:
    """log|1/Gamma(beta - alpha*k)| and its parity-adjusted sign, k = 1..kmax."""
    logs = np.empty(kmax)
    signs = np.empty(kmax)
    for i in range(kmax):
        k = i + 1
        lg, sg = _inv_gamma_log_sign(beta - alpha * k)
        logs[i] = lg
        signs[i] = sg * (1.0 if k % 2 else -1.0)
    return logs, signs


def _asym_vec(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """Asymptotic series truncated at the globally smallest term.

    Term magnitudes decrease and then grow factorially; cutting at the
    global minimum leaves an error of the order of the first omitted
    term.  Bracketing that minimum can take ~|x|**(1/alpha)/alpha terms
    near the regime boundary, so the term table grows geometrically
    until either the minimum is interior or the tail is negligible.
    """
    ax = np.abs(x)
    lx = np.log(ax)
    # Gamma(beta - alpha*k) sits on a pole for every k >= beta when alpha = 1
    # and beta is an integer: the series terminates and is exact up to an
    # exponentially small remainder, so there is never a reason to grow it.
    terminates = alpha >= 1.0 - 1e-12 and abs(beta - round(beta)) < 1e-12
    kmax = 64
    while True:
        logs, signs = _asym_table(alpha, beta, kmax)
        ks = np.arange(1, kmax + 1)
        # logmag[i, j] = -k_j*log|x_i| + log|1/Gamma(beta - alpha*k_j)|
        logmag = -np.outer(lx, ks) + logs[None, :]
        logmag[:, signs == 0.0] = -np.inf
        finite = np.where(np.isfinite(logmag), logmag, np.inf)
        kopt = np.argmin(finite, axis=1)
        live = np.flatnonzero(signs != 0.0)
        if len(live) == 0:
            # every term sits on a Gamma pole; the algebraic part vanishes
            return np.zeros_like(x)
        if not terminates and kmax < 65536:
            kpos = np.searchsorted(live, kopt)
            at_end = kpos >= len(live) - 2
            # a tail already ~e^-45 below the leading term cannot matter
            tail_big = logmag[:, live[-1]] > logmag[:, live[0]] - 45.0
            if np.any(at_end & tail_big):
                kmax *= 4
                continue
        break
    mask = ks[None, :] <= ks[kopt][:, None]
    vals = np.exp(np.where(mask, logmag, -np.inf)) * signs[None, :]
    out = np.sum(vals, axis=1)
    # the first omitted non-pole term estimates the truncation error;
    # refuse to return values the series cannot actually support
    pos = np.searchsorted(live, kopt, side="right")
    floor = np.zeros(len(out))
    has_next = pos < len(live)
    rows = np.flatnonzero(has_next)
    if len(rows):
        floor[rows] = np.exp(logmag[rows, live[pos[rows]]])
    bad = floor > 3e-10 * np.abs(out)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NumericalError(
            f"mittag_leffler: asymptotic series cannot reach the accuracy "
            f"target for alpha={alpha!r}, beta={beta!r}, x={x[i]!r}"
        )
    return out


# ---------------------------------------------------------------------------
# gap regime: decimal-precision Taylor feeding a Chebyshev surrogate
# ---------------------------------------------------------------------------


def _dec_pi() -> Decimal:
    """pi at the current decimal context precision."""
    with localcontext() as ctx:
        ctx.prec += 4
        lasts, t, s = Decimal(0), Decimal(3), Decimal(3)
        n, na, d, da = 1, 0, 0, 24
        while s != lasts:
            lasts = s
            n, na = n + na, na + 8
            d, da = d + da, da + 32
            t = (t * n) / d
            s += t
    return +s


@lru_cache(maxsize=16)
def _spouge_coeffs(a: int, prec: int) -> tuple[Decimal, ...]:
    """Spouge coefficients c_0..c_{a-1} computed at `prec` digits."""
    with localcontext() as ctx:
        ctx.prec = prec
        pi = _dec_pi()
        out = [(2 * pi).sqrt()]
        e = Decimal(1).exp()
        fact = Decimal(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            amk = Decimal(a - k)
            c = amk.ln() * (Decimal(k) - Decimal("0.5"))
            c = c.exp() * (e ** (a - k)) / fact
            out.append(c if k % 2 else -c)
    return tuple(out)


def _dec_gamma(w: Decimal, a: int, coeffs: tuple[Decimal, ...]) -> Decimal:
    """Gamma(w) for w > 0 in the current decimal context via Spouge."""
    if w < 1:
        return _dec_gamma(w + 1, a, coeffs) / w
    z = w - 1
    acc = coeffs[0]
    for k in range(1, a):
        acc += coeffs[k] / (z + k)
    half = Decimal("0.5")
    return ((z + half) * (z + a).ln() - (z + a)).exp() * acc


class _DecimalSeries:
    """Arbitrary-precision Taylor evaluation of E_{a,b} on x <= 0.

    Coefficients 1/Gamma(a*k + b) are built once per (a, b) at the
    precision demanded by the worst cancellation seen so far and reused
    for every evaluation.
    """

    def __init__(self, alpha: float, beta: float) -> None:
        self.alpha = alpha
        self.beta = beta
        self.digits = 0
        self.work = 0
        self.coeffs: list[Decimal] = []

    def _nterms(self, absx: float, digits: int) -> int:
        a, b = self.alpha, self.beta
        lx = math.log(absx) if absx > 0 else -math.inf
        target = -(digits + 8) * math.log(10.0)
        k = 1
        while True:
            if k * lx - math.lgamma(a * k + b) < target and (a * k + b) ** a > absx:
                return k
            k = k + max(1, k // 8)
            if k > 200_000:
                raise NumericalError(
                    f"mittag_leffler: series length cap exceeded for "
                    f"alpha={a!r}, beta={b!r}, |x|={absx!r}"
                )

    def _ensure(self, digits: int, nterms: int) -> None:
        if digits > self.digits:
            self.digits = digits
            spouge_a = math.ceil(1.26 * (digits + 10))
            self.work = digits + math.ceil(0.56 * spouge_a) + 12
            self.coeffs = []
        if len(self.coeffs) >= nterms:
            return
        spouge_a = math.ceil(1.26 * (self.digits + 10))
        coeffs = _spouge_coeffs(spouge_a, self.work)
        da, db = Decimal(self.alpha), Decimal(self.beta)
        with localcontext() as ctx:
            ctx.prec = self.work
            one = Decimal(1)
            for k in range(len(self.coeffs), nterms):
                self.coeffs.append(one / _dec_gamma(da * k + db, spouge_a, coeffs))

    def log_eval(self, x: float) -> float:
        """log E_{a,b}(x) for x <= 0, via the decimal series."""
        absx = abs(x)
        y = absx ** (1.0 / self.alpha)
        digits = int(0.87 * y) + 30
        nterms = self._nterms(absx, digits)
        self._ensure(digits, nterms)
        with localcontext() as ctx:
            ctx.prec = self.work
            xd = Decimal(x)
            s = Decimal(0)
            for c in reversed(self.coeffs[:nterms]):
                s = s * xd + c
            if s <= 0:
                raise NumericalError(
                    f"mittag_leffler: extended-precision sum non-positive for "
                    f"alpha={self.alpha!r}, beta={self.beta!r}, x={x!r}"
                )
            return float(s.ln())


@lru_cache(maxsize=128)
def _decimal_series(alpha: float, beta: float) -> _DecimalSeries:
    return _DecimalSeries(alpha, beta)


class _GapCheb:
    """Chebyshev fit of v -> log E_{a,b}(-exp(a*v)) on the gap band."""

    def __init__(self, alpha: float, beta: float, lo: float, hi: float) -> None:
        self.lo = lo  # in v = log y
        self.hi = hi
        series = _decimal_series(alpha, beta)

        def f(v: float) -> float:
            return series.log_eval(-math.exp(alpha * v))

        last_err = math.inf
        for n in (65, 129, 257):
            nodes = [
                0.5 * (lo + hi) + 0.5 * (hi - lo) * math.cos(math.pi * j / (n - 1))
                for j in range(n)
            ]
            vals = [f(v) for v in nodes]
            coeffs = self._fit(vals)
            checks = [lo + (hi - lo) * (j + 0.5) / 16.0 for j in range(16)]
            err = max(abs(self._clenshaw(coeffs, v) - f(v)) for v in checks)
            if err < 1e-11:
                self.coeffs = coeffs
                return
            last_err = err
        raise NumericalError(
            f"mittag_leffler: gap surrogate failed to reach 1e-11 for "
            f"alpha={alpha!r}, beta={beta!r} (best {last_err:.2e})"
        )

    @staticmethod
    def _fit(vals: list[float]) -> np.ndarray:
        n = len(vals)
        coeffs = np.empty(n)
        for k in range(n):
            terms = [
                (0.5 if j in (0, n - 1) else 1.0)
                * vals[j]
                * math.cos(math.pi * k * j / (n - 1))
                for j in range(n)
            ]
            coeffs[k] = 2.0 * math.fsum(terms) / (n - 1)
        coeffs[0] *= 0.5
        coeffs[n - 1] *= 0.5
        return coeffs

    def _clenshaw(self, coeffs: np.ndarray, v: float) -> float:
        t = (2.0 * v - self.lo - self.hi) / (self.hi - self.lo)
        b1 = b2 = 0.0
        for c in coeffs[:0:-1]:
            b1, b2 = 2.0 * t * b1 - b2 + c, b1
        return t * b1 - b2 + coeffs[0]

    def eval(self, v: np.ndarray) -> np.ndarray:
        t = (2.0 * v - self.lo - self.hi) / (self.hi - self.lo)
        b1 = np.zeros_like(t)
        b2 = np.zeros_like(t)
        for c in self.coeffs[:0:-1]:
            b1, b2 = 2.0 * t * b1 - b2 + c, b1
        return np.exp(t * b1 - b2 + self.coeffs[0])


@lru_cache(maxsize=128)
def _gap_cheb(alpha: float, beta: float) -> _GapCheb:
    y_t, y_a = _regime_bounds(alpha, beta)
    margin = 1.02  # overlap the fit domain slightly past both thresholds
    return _GapCheb(alpha, beta, math.log(y_t / margin), math.log(y_a * margin))


# ---------------------------------------------------------------------------
# public evaluation
# ---------------------------------------------------------------------------


def ml_array(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """Vectorized E_{alpha,beta} over an array of non-positive arguments."""
    MLQuery(alpha, beta, 0.0)  # validate the orders once
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        x = x[None]
    if not np.all(np.isfinite(x)) or np.any(x > 0.0):
        raise DomainError("ml_array: arguments must be finite and <= 0")
    if alpha == 1.0 and beta == 1.0:
        return np.exp(x)
    out = np.empty_like(x)
    y = np.abs(x) ** (1.0 / alpha)
    y_t, y_a = _regime_bounds(alpha, beta)
    m_t = y <= y_t
    m_a = y >= y_a
    m_g = ~(m_t | m_a)
    if np.any(m_t):
        out[m_t] = _taylor_vec(alpha, beta, x[m_t])
    if np.any(m_a):
        out[m_a] = _asym_vec(alpha, beta, x[m_a])
    if np.any(m_g):
        if beta < alpha - 1e-12:
            # E(a,b;x) can change sign when b < a, which defeats the
            # log-domain surrogate.  Shift onto the completely monotone
            # range via E(a,b;x) = 1/Gamma(b) + x * E(a,a+b;x).
            out[m_g] = 1.0 / math.gamma(beta) + x[m_g] * ml_array(
                alpha, alpha + beta, x[m_g]
            )
        else:
            cheb = _gap_cheb(alpha, beta)
            out[m_g] = cheb.eval(np.log(y[m_g]))
    if not np.all(np.isfinite(out)):
        raise NumericalError(
            f"mittag_leffler: non-finite value for alpha={alpha!r}, beta={beta!r}"
        )
    return out


def mittag_leffler(query: MLQuery) -> float:
    """E_{alpha,beta}(x) for a validated query; see the module docstring."""
    return float(ml_array(query.alpha, query.beta, np.array([query.x]))[0])


def ml(alpha: float, beta: float, x: float) -> float:
    """Convenience wrapper building the query in place."""
    return mittag_leffler(MLQuery(float(alpha), float(beta), float(x)))
