"""Unambiguous comparison strategies for pairs of unknown unitary channels.

A comparison experiment is a process POVM {M_diff, M_inconclusive} normalized
to rho^T (x) I on the doubled two-qudit space.  Unambiguity forces M_same = 0
and confines M_diff to the orthocomplement of the two-copy twirl's Choi
support; the best achievable average success probability is (d+1)/(2d),
attained exactly by M_diff = xi^T (x) P+ with an antisymmetric test state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .haar import McEstimate, haar_sample, scalar_mc
from .linalg import DimensionMismatchError, max_abs, tensor
from .qobj import (
    PROB_ATOL,
    ChoiOp,
    Ppovm,
    QState,
    UnitaryOp,
    pair_output_vector,
)
from .symmetry import build_split

SUPPORT_ATOL = 1e-10
SUCCESS_TOL = 1e-9
STRUCT_TOL = 1e-6
IDENTITY_GAP = 1e-6

DIFF = "diff"
INCONCLUSIVE = "inconclusive"
SAME = "same"


def success_bound(d: int) -> float:
    """Largest average success probability of any unambiguous comparator."""
    return (d + 1) / (2 * d)


def _pair_dim(ppovm: Ppovm) -> int:
    d = math.isqrt(ppovm.d_sys)
    if d * d != ppovm.d_sys:
        raise DimensionMismatchError(
            f"comparison PPOVM needs a two-qudit system, got D={ppovm.d_sys}"
        )
    return d


@dataclass(frozen=True)
class Strategy:
    """A comparison strategy: test state plus process POVM.

    effects holds the ancilla-free measurement realization (one positive
    operator per label on the two-qudit output space) when the strategy has
    the factorized form; it is None for hand-built custom PPOVMs.
    """

    kind: str
    xi: QState
    ppovm: Ppovm
    effects: dict[str, np.ndarray] | None = None

    @property
    def d(self) -> int:
        return _pair_dim(self.ppovm)

    @property
    def m_diff(self) -> np.ndarray:
        return self.ppovm.elements[DIFF]

    @property
    def m_inconclusive(self) -> np.ndarray:
        return self.ppovm.elements[INCONCLUSIVE]


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome probabilities for one channel pair plus one sampled verdict."""

    p_diff: float
    p_inconclusive: float
    verdict: str
    seed: int

    def to_json(self) -> dict:
        return {
            "p_diff": self.p_diff,
            "p_inconclusive": self.p_inconclusive,
            "verdict": self.verdict,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class NoErrorReport:
    """Residuals of the no-error conditions; all vanish for a sound comparator."""

    twirl_residual: float
    haar_max_residual: float
    same_residual: float | None
    n_samples: int

    @property
    def max_residual(self) -> float:
        worst = max(self.twirl_residual, self.haar_max_residual)
        if self.same_residual is not None:
            worst = max(worst, self.same_residual)
        return worst


@dataclass(frozen=True)
class UniquenessProbe:
    """Whether a PPOVM matches the unique optimal structure, and how far off it is."""

    optimal_form: bool
    deviation: float


def twirl_choi(d: int) -> ChoiOp:
    """Choi operator of the two-copy twirling channel.

    Equals P+ (x) P+ / d+  +  P- (x) P- / d- across the reference/output cut;
    it is also the Haar average of the Choi operators of identical pairs,
    which is what makes its orthocomplement the home of M_diff.
    """
    if d < 2:
        raise ValueError(f"twirl_choi needs d >= 2, got {d}")
    split = build_split(d)
    mat = (
        tensor(split.p_plus, split.p_plus) / split.dim_plus
        + tensor(split.p_minus, split.p_minus) / split.dim_minus
    )
    return ChoiOp(mat, d * d)


def make_strategy(kind: str, xi: QState) -> Strategy:
    """Build a named comparison strategy around the test state xi.

    'antisym_optimal' pairs an antisymmetric xi with the symmetric-outcome
    effect (conclusive on P+); 'symmetric' swaps the roles.  The test state
    must be supported on the matching subspace.
    """
    d = math.isqrt(xi.dim)
    if d * d != xi.dim or d < 2:
        raise DimensionMismatchError(f"test state must live on two qudits, got dim {xi.dim}")
    split = build_split(d)
    if kind == "antisym_optimal":
        wrong, f_diff, f_inc = split.p_plus, split.p_plus, split.p_minus
    elif kind == "symmetric":
        wrong, f_diff, f_inc = split.p_minus, split.p_minus, split.p_plus
    else:
        raise ValueError(f"unknown strategy kind {kind!r}")
    if max_abs(wrong @ xi.mat @ wrong) > SUPPORT_ATOL:
        raise ValueError(f"test state has support outside the {kind} subspace")
    effects = {DIFF: f_diff, INCONCLUSIVE: f_inc}
    elements = {label: tensor(xi.mat.T, f) for label, f in effects.items()}
    return Strategy(kind=kind, xi=xi, ppovm=Ppovm(elements, xi), effects=effects)


def _clamped_probability(raw: float) -> float:
    if raw < -PROB_ATOL or raw > 1.0 + PROB_ATOL:
        raise ValueError(f"probability {raw} outside [0, 1] beyond tolerance")
    return min(max(raw, 0.0), 1.0)


def _pair_probability(m: np.ndarray, u: UnitaryOp, v: UnitaryOp) -> float:
    # tr(omega_{U,V} M) evaluated as <w|M|w> with the rank-1 Choi vector w.
    w = pair_output_vector(u, v)
    if m.shape[0] != w.size:
        raise DimensionMismatchError(f"element dim {m.shape[0]} vs channel pair dim {w.size}")
    return _clamped_probability(float(np.vdot(w, m @ w).real))


def run_pair(strategy: Strategy, u: UnitaryOp, v: UnitaryOp, seed: int = 0) -> ComparisonReport:
    """Exact outcome probabilities for the pair (U, V) plus one sampled verdict."""
    if u.dim != strategy.d or v.dim != strategy.d:
        raise DimensionMismatchError(
            f"strategy is for d={strategy.d}, got unitaries of dim {u.dim}, {v.dim}"
        )
    p_diff = _pair_probability(strategy.m_diff, u, v)
    p_inc = _pair_probability(strategy.m_inconclusive, u, v)
    verdict = "different" if np.random.default_rng(seed).random() < p_diff else "inconclusive"
    return ComparisonReport(p_diff=p_diff, p_inconclusive=p_inc, verdict=verdict, seed=seed)


def average_success(strategy: Strategy) -> float:
    """Average probability of detecting a difference: tr(M_diff) / d^2."""
    d = strategy.d
    return float(np.trace(strategy.m_diff).real) / (d * d)


def average_success_mc(strategy: Strategy, n: int, rng: np.random.Generator) -> McEstimate:
    """Monte Carlo check of average_success over independent Haar pairs (U, V).

    Factorized strategies are evaluated through their ancilla-free
    realization (evolve xi, measure the effect), which is exactly equivalent
    and avoids rebuilding the doubled-space Choi operator per sample.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d = strategy.d
    samples = np.empty(n)
    if strategy.effects is not None:
        f_diff = strategy.effects[DIFF]
        xi = strategy.xi.mat
        for i in range(n):
            uv = np.kron(haar_sample(d, rng).mat, haar_sample(d, rng).mat)
            out = uv @ xi @ uv.conj().T
            samples[i] = np.einsum("ij,ji->", out, f_diff).real
    else:
        m_diff = strategy.m_diff
        for i in range(n):
            samples[i] = _pair_probability(m_diff, haar_sample(d, rng), haar_sample(d, rng))
    return scalar_mc(samples)


def overall_success(strategy: Strategy, eta_same: float) -> float:
    """Average success weighted by the prior (1 - eta_same) of actually differing."""
    if not 0.0 < eta_same < 1.0:
        raise ValueError(f"eta_same must lie strictly in (0, 1), got {eta_same}")
    return (1.0 - eta_same) * average_success(strategy)


def verify_no_error(ppovm: Ppovm, n_samples: int, rng: np.random.Generator) -> NoErrorReport:
    """Residuals of the no-error conditions for a claimed unambiguous comparator.

    Checks the overlap of M_diff with the twirl Choi operator, the sampled
    'diff' probability on n identical Haar pairs, and tr(M_same)/d^2 when a
    'same' element is present.  Reports rather than raises.
    """
    d = _pair_dim(ppovm)
    m_diff = ppovm.elements[DIFF]
    omega_t = twirl_choi(d)
    twirl_residual = abs(float(np.einsum("ij,ji->", omega_t.mat, m_diff).real))
    haar_max = 0.0
    for _ in range(n_samples):
        u = haar_sample(d, rng)
        haar_max = max(haar_max, abs(_pair_probability(m_diff, u, u)))
    same_residual = None
    if SAME in ppovm.elements:
        same_residual = abs(float(np.trace(ppovm.elements[SAME]).real)) / (d * d)
    return NoErrorReport(
        twirl_residual=twirl_residual,
        haar_max_residual=haar_max,
        same_residual=same_residual,
        n_samples=n_samples,
    )


def max_psd_scale(base: np.ndarray, k: np.ndarray, eig_tol: float = 1e-10, width_tol: float = 1e-10) -> float:
    """Largest s such that base - s*k stays PSD within eig_tol, by bisection.

    k must have unit spectral norm and base spectral norm at most 1 so that
    s = 2 is always infeasible; the returned value was explicitly verified
    feasible.
    """
    lo, hi = 0.0, 2.0
    while hi - lo > width_tol:
        mid = (lo + hi) / 2
        if float(np.linalg.eigvalsh(base - mid * k)[0]) >= -eig_tol:
            lo = mid
        else:
            hi = mid
    return lo


def random_unambiguous_ppovm(d: int, rng: np.random.Generator, rho: QState | None = None) -> Ppovm:
    """Random PPOVM satisfying every unambiguity constraint by construction.

    M_diff = lambda * K with K a random PSD operator supported on the
    symmetric/antisymmetric cross subspace (orthogonal to the twirl Choi
    support) and lambda maximal under positivity of the inconclusive
    element.  rho defaults to a random full-rank two-qudit state; a
    rank-deficient rho misaligned with K degenerates to lambda = 0.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    split = build_split(d)
    dd = d * d
    if rho is None:
        g = rng.normal(size=(dd, dd)) + 1j * rng.normal(size=(dd, dd))
        mat = g @ g.conj().T
        rho = QState(mat / np.trace(mat).real, [d, d])
    elif rho.dim != dd:
        raise DimensionMismatchError(f"rho must live on two qudits of dim {d}")

    # Columns span {|s_j, a_n>, |a_n, s_j>}; kron acts columnwise.
    cross = np.hstack(
        [np.kron(split.basis_plus, split.basis_minus), np.kron(split.basis_minus, split.basis_plus)]
    )
    m = cross.shape[1]
    g = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    k = cross @ (g @ g.conj().T) @ cross.conj().T
    k /= float(np.linalg.eigvalsh(k)[-1])

    base = tensor(rho.mat.T, np.eye(dd))
    lam = max_psd_scale(base, k)
    m_diff = lam * k
    return Ppovm({DIFF: m_diff, INCONCLUSIVE: base - m_diff}, rho)


def uniqueness_probe(
    ppovm: Ppovm, success_tol: float = SUCCESS_TOL, struct_tol: float = STRUCT_TOL
) -> UniquenessProbe:
    """Test whether a no-error PPOVM has the unique bound-saturating structure.

    Saturation forces M_diff = rho^T (x) P+ with rho supported on the
    antisymmetric subspace; the probe reports the largest of the success,
    structure and support residuals.  Callers should verify the no-error
    conditions first.
    """
    d = _pair_dim(ppovm)
    split = build_split(d)
    m_diff = ppovm.elements[DIFF]
    rho_t = ppovm.rho.mat.T

    success_residual = abs(float(np.trace(m_diff).real) / (d * d) - success_bound(d))
    struct_residual = max_abs(m_diff - tensor(rho_t, split.p_plus))
    support_residual = max_abs(split.p_plus @ rho_t @ split.p_plus)

    ok = (
        success_residual <= success_tol
        and struct_residual <= struct_tol
        and support_residual <= struct_tol
    )
    return UniquenessProbe(
        optimal_form=ok,
        deviation=max(success_residual, struct_residual, support_residual),
    )


def identity_phase_gap(r: UnitaryOp) -> float:
    """Frobenius distance from r to the nearest global-phase multiple of I."""
    d = r.dim
    return math.sqrt(max(0.0, 2.0 * (d - abs(np.trace(r.mat)))))


def sequential_witness(w: UnitaryOp, r: UnitaryOp) -> tuple[UnitaryOp, UnitaryOp]:
    """Unitaries U = W R and V = R^dagger W, both distinct from W, with U V = W^2.

    Sequential (one-after-the-other) use of the two boxes therefore cannot
    reveal whether they are equal: the composed channels of (U, V) and
    (W, W) coincide.  r may not be a global-phase multiple of the identity.
    """
    if w.dim != r.dim:
        raise DimensionMismatchError(f"dims {w.dim} and {r.dim} differ")
    if identity_phase_gap(r) <= IDENTITY_GAP:
        raise ValueError("r equals the identity up to a global phase")
    return UnitaryOp(w.mat @ r.mat), UnitaryOp(r.mat.conj().T @ w.mat)
