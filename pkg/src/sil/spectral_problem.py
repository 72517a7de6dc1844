"""Synthetic co-diagonal inverse-problem family.

Everything is parametrised by power laws on a shared orthonormal basis:
kernel eigenvalues lambda_i = i^(-lambda), forward-operator coefficients
p_i = i^(-p) (p <= 0, so coefficients grow for differential-type operators),
and target coefficients c_i = i^(-r') with r' = (1 - lambda(1 - r))/2.
Proportionality constants are fixed to 1: they cancel in every rate exponent
and keep the worked examples hand-checkable.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NonSummableTarget, NotTraceClass

MAX_TRUNCATION = 2 ** 20


def default_truncation(n):
    """Default spectral truncation for an n-point design."""
    return min(max(64 * n, 4096), MAX_TRUNCATION)


@dataclass(frozen=True)
class SpectralProfile:
    """Rate-determining parameters of one synthetic inverse problem.

    lambda_decay > 1 : kernel eigendecay exponent
    op_order    <= 0 : forward-operator exponent (0 = plain regression)
    source  in (0,1] : target smoothness
    bias        >  0 : Sobolev exponent of the regularising norm
    eval_bias        : Sobolev exponent of the evaluation norm, in [0, bias]
    noise_var   >= 0 : observation-noise variance
    truncation  >= 1 : spectral truncation for all finite computations
    """

    lambda_decay: float
    op_order: float
    source: float
    bias: float
    eval_bias: float
    noise_var: float
    truncation: int
    override_bias_range: bool = False

    def with_truncation(self, n_modes):
        return replace(self, truncation=int(n_modes))

    # --- derived exponents -------------------------------------------------

    @property
    def ordering_exponent(self):
        """2p + lambda*beta: decay exponent of p_i^2 lambda_i^beta."""
        return 2.0 * self.op_order + self.lambda_decay * self.bias

    @property
    def target_exponent(self):
        """r' = (1 - lambda(1 - r)) / 2, the target-coefficient decay."""
        return (1.0 - self.lambda_decay * (1.0 - self.source)) / 2.0

    @property
    def eval_tail_exponent(self):
        """2r' + lambda(1 - beta'): decay of the evaluation-norm tail of f*."""
        return 2.0 * self.target_exponent + self.lambda_decay * (1.0 - self.eval_bias)

    @property
    def variance_weight_exponent(self):
        """2p + lambda(2*beta - beta'): decay of the variance weights."""
        return 2.0 * self.op_order + self.lambda_decay * (2.0 * self.bias - self.eval_bias)


@dataclass(frozen=True)
class RidgeSchedule:
    """Ridge level as a function of n: fixed gamma or gamma_n = scale * n^(-exponent)."""

    mode: str = "fixed"
    value: float = 0.0
    exponent: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.mode not in ("fixed", "power"):
            raise ValueError(f"unknown ridge mode {self.mode!r}")
        if self.mode == "fixed" and self.value < 0:
            raise ValueError("fixed ridge level must be >= 0")
        if self.mode == "power" and (self.exponent < 0 or self.scale <= 0):
            raise ValueError("power schedule needs exponent >= 0 and scale > 0")

    @property
    def ridgeless(self):
        return self.mode == "fixed" and self.value == 0.0

    def gamma_at(self, n):
        if self.mode == "fixed":
            return self.value
        return self.scale * float(n) ** (-self.exponent)


# --- pointwise spectra -----------------------------------------------------

def eigenvalue_at(profile, i):
    """Kernel eigenvalue lambda_i = i^(-lambda)."""
    if i < 1:
        raise ValueError("spectral index must be >= 1")
    return float(i) ** (-profile.lambda_decay)


def operator_coeff_at(profile, i):
    """Forward-operator coefficient p_i = i^(-p); grows with i when p < 0."""
    if i < 1:
        raise ValueError("spectral index must be >= 1")
    return float(i) ** (-profile.op_order)


def target_coeff_at(profile, i):
    """Target coefficient c_i = i^(-r') in the orthonormal RKHS basis."""
    if i < 1:
        raise ValueError("spectral index must be >= 1")
    rp = profile.target_exponent
    if rp <= 0:
        raise ValueError(
            "source condition incompatible with decay: 1 - lambda(1 - r) <= 0"
        )
    if profile.eval_tail_exponent <= 1.0:
        raise NonSummableTarget(
            "evaluation norm of the target diverges: 2r' + lambda(1 - beta') <= 1"
        )
    return float(i) ** (-rp)


def spectrum_arrays(profile, i_lo, i_hi):
    """(lambda_i, p_i) for i in [i_lo, i_hi] as float arrays."""
    idx = np.arange(i_lo, i_hi + 1, dtype=float)
    return idx ** (-profile.lambda_decay), idx ** (-profile.op_order)


def target_array(profile, i_lo, i_hi):
    """Target coefficients c_i for i in [i_lo, i_hi]."""
    target_coeff_at(profile, i_lo)  # runs the validity checks once
    idx = np.arange(i_lo, i_hi + 1, dtype=float)
    return idx ** (-profile.target_exponent)


# --- analytic tails --------------------------------------------------------

def power_tail_sum(a, start):
    """sum_{i > start} i^(-a) for a > 1, to ~1e-14 relative accuracy.

    Partial summation over a short explicit stretch, then an Euler-Maclaurin
    closure of the remainder (the plain integral bracket cannot reach 1e-14
    without astronomically many terms).
    """
    if a <= 1.0:
        raise NotTraceClass(f"sum i^(-{a}) diverges (exponent <= 1)")
    m = max(int(start), 1024) + 1024
    idx = np.arange(start + 1, m + 1, dtype=float)
    head = float(np.sum(idx ** (-a)))
    x = float(m)
    rem = (
        x ** (1.0 - a) / (a - 1.0)
        - 0.5 * x ** (-a)
        + a / 12.0 * x ** (-a - 1.0)
        - a * (a + 1.0) * (a + 2.0) / 720.0 * x ** (-a - 3.0)
        + a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) / 30240.0 * x ** (-a - 5.0)
    )
    return head + rem


def tail_integral_bracket(a, k):
    """Integral bracket [lo, hi] enclosing sum_{i>k} i^(-a), a > 1."""
    if a <= 1.0:
        raise NotTraceClass(f"sum i^(-{a}) diverges (exponent <= 1)")
    lo = (k + 1.0) ** (1.0 - a) / (a - 1.0)
    return lo, (k + 1.0) ** (-a) + lo


# --- assumption checks -----------------------------------------------------

@dataclass
class ProfileDiagnostics:
    """Pass/fail record per assumption, with the violated inequality named."""

    checks: list = field(default_factory=list)

    def add(self, name, inequality, passed, detail=""):
        self.checks.append(
            {"name": name, "inequality": inequality, "passed": bool(passed),
             "detail": detail}
        )

    @property
    def ok(self):
        return all(c["passed"] for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c["passed"]]

    def as_dict(self):
        return {"ok": self.ok, "checks": list(self.checks)}


def validate_profile(profile, requested_features=()):
    """Check the parameter-regime assumptions; failures are report content.

    requested_features may contain "tail_traces" (trace-class tail sums will
    be computed) and "rate_predictions" (rate-theorem hypotheses must hold).
    """
    feats = set(requested_features)
    d = ProfileDiagnostics()
    lam, p, r = profile.lambda_decay, profile.op_order, profile.source
    beta, beta_eval = profile.bias, profile.eval_bias

    d.add("kernel_decay", "lambda > 1", lam > 1.0, f"lambda={lam}")
    d.add("operator_order", "p <= 0", p <= 0.0, f"p={p}")
    d.add("source_range", "0 < r <= 1", 0.0 < r <= 1.0, f"r={r}")
    d.add("eval_range", "0 <= beta' <= beta", 0.0 <= beta_eval <= beta,
          f"beta'={beta_eval}, beta={beta}")
    d.add("bias_range", "beta <= 1 (or override flag)",
          beta <= 1.0 or profile.override_bias_range, f"beta={beta}")
    d.add("positive_bias", "beta > 0", beta > 0.0, f"beta={beta}")
    d.add("noise", "sigma^2 >= 0", profile.noise_var >= 0.0)
    d.add("truncation", "1 <= N <= 2^20",
          1 <= profile.truncation <= MAX_TRUNCATION, f"N={profile.truncation}")

    ordering = profile.ordering_exponent
    d.add("eigenvalue_ordering", "2p + lambda*beta > 0", ordering > 0.0,
          f"2p+lambda*beta={ordering}")
    rp = profile.target_exponent
    d.add("target_decay", "1 - lambda(1 - r) > 0", rp > 0.0, f"r'={rp}")
    ev = profile.eval_tail_exponent
    d.add("target_summability", "2r' + lambda(1 - beta') > 1", ev > 1.0,
          f"2r'+lambda(1-beta')={ev}")

    if "tail_traces" in feats:
        d.add("trace_class", "2p + lambda*beta > 1", ordering > 1.0,
              f"2p+lambda*beta={ordering}")
    if "rate_predictions" in feats:
        src = 2.0 * p + lam * r
        d.add("source_vs_operator", "2p + lambda*r > 0", src > 0.0,
              f"2p+lambda*r={src}")
        d.add("eval_below_source", "r > beta'", r > beta_eval,
              f"r={r}, beta'={beta_eval}")
    return d
