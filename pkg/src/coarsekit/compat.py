"""Compatibility of a microscopic unitary with a coarse-graining map.

Given a CPTP coarse-graining ``cg`` from dimension D to dimension d and a
D x D unitary ``u``, four independent criteria decide whether an effective
d-level dynamics ``gamma`` exists with ``gamma(cg(rho)) == cg(u rho u*)``
for every state rho:

1. kernel invariance of the coarse-graining under conjugation by u
   (exact; decides whether a well-defined linear map exists at all);
2. a one-sided algebraic shortcut: a single d x d matrix V intertwining
   every Kraus operator, ``M_k u == V M_k`` (sufficient, not necessary);
3. semidefinite feasibility for a CPTP effective map, decided by Dykstra
   alternating projections on the effective map's Choi matrix;
4. a randomized discrimination witness: a binary ensemble whose optimal
   guessing probability increases across the dynamics certifies that no
   CPTP effective map can exist.

``run_all`` aggregates the four verdicts, cross-checks their logical
consistency, and constructs the effective channel when one exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import (
    ChoiMatrix,
    DensityMatrix,
    KrausChannel,
    choi_to_kraus,
    choi_to_transfer_mat,
    compose,
    connecting_unitary,
    channels_equal,
    transfer_to_choi_mat,
    unitary_channel,
)
from .errors import (
    DimensionMismatch,
    MethodDisagreement,
    NotCP,
    NotUnitary,
)
from .linalg import (
    asmatrix,
    frob,
    hermitize,
    kernel_basis,
    partial_trace,
    pinv,
    vec,
)
from .rand import random_density_mat, random_pure_state_mat

FIBER_TOL = 1e-8
ALGEBRAIC_REL_TOL = 1e-8
SDP_TOL = 1e-7
SDP_MAX_ITER = 20000
SDP_STALL_WINDOW = 200
SDP_STALL_RTOL = 1e-12
WITNESS_MARGIN = 1e-9

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class Scenario:
    """A coarse-graining map paired with a microscopic unitary."""

    cg: KrausChannel
    u: np.ndarray

    def __post_init__(self):
        m = asmatrix(self.u)
        if m.shape != (self.cg.din, self.cg.din):
            raise DimensionMismatch(
                f"unitary is {m.shape}, coarse-graining expects {self.cg.din}"
            )
        if frob(m.conj().T @ m - np.eye(m.shape[0])) > 1e-9:
            raise NotUnitary("microscopic dynamics must be unitary")
        if self.cg.dout > self.cg.din:
            raise DimensionMismatch("coarse-graining must not increase dimension")
        mm = m.astype(np.complex128)
        mm.setflags(write=False)
        object.__setattr__(self, "u", mm)

    @property
    def D(self) -> int:
        return self.cg.din

    @property
    def d(self) -> int:
        return self.cg.dout

    @property
    def u_transfer(self) -> np.ndarray:
        return np.kron(self.u.conj(), self.u)


@dataclass(frozen=True)
class CheckConfig:
    """Tolerances, iteration caps, and sampling settings for run_all."""

    fiber_tol: float = FIBER_TOL
    algebraic_rel_tol: float = ALGEBRAIC_REL_TOL
    sdp_tol: float = SDP_TOL
    sdp_max_iter: int = SDP_MAX_ITER
    equality_tol: float = 1e-8
    witness_trials: int = 1000
    ancilla_dims: Optional[tuple[int, ...]] = None
    seed: int = 0

    def resolved_ancillas(self, s: "Scenario") -> tuple[int, ...]:
        if self.ancilla_dims is not None:
            return self.ancilla_dims
        return tuple(sorted({1, s.d, s.D}))


@dataclass(frozen=True)
class EnsembleWitness:
    """A binary ensemble whose distinguishability grows across the dynamics.

    pg_before / pg_after are optimal guessing probabilities for the
    coarse-grained ensemble before and after the microscopic unitary; any
    increase beyond numerical noise rules out a CPTP effective map.
    """

    p0: float
    p1: float
    rho0: DensityMatrix
    rho1: DensityMatrix
    pg_before: float
    pg_after: float
    ancilla_dim: int = 1
    trial: int = 0

    @property
    def gap(self) -> float:
        return self.pg_after - self.pg_before


@dataclass(frozen=True)
class SdpOutcome:
    status: str
    residual: float
    iterations: int
    choi: Optional[ChoiMatrix] = None


@dataclass(frozen=True)
class CompatReport:
    """Verdicts and residuals of all four criteria for one scenario."""

    fiber_preserved: bool
    fiber_residual: float
    algebraic_v: Optional[np.ndarray]
    algebraic_residual: float
    dual_identity_residual: float
    sdp: SdpOutcome
    witness: Optional[EnsembleWitness]
    emergent: Optional[KrausChannel]
    diagram_residual: Optional[float]
    method_agreement: dict = field(default_factory=dict)
    verdict: str = UNDECIDED


def check_fiber_preservation(s: Scenario, tol: float = FIBER_TOL) -> tuple[bool, float]:
    """Exact test that conjugation by u maps ker(cg) into ker(cg).

    Two microscopic states have the same coarse-grained image iff they differ
    by a kernel element of the coarse-graining's transfer matrix, so an
    effective map is well defined iff the kernel is invariant.  The residual
    is the operator norm of (T_cg . T_u) restricted to the kernel; no
    sampling is involved.
    """
    t_cg = s.cg.transfer_mat
    ker = kernel_basis(t_cg)
    if ker.shape[1] == 0:
        return True, 0.0
    residual = float(np.linalg.norm(t_cg @ (s.u_transfer @ ker), 2))
    return residual <= tol, residual


def _algebraic_lstsq(s: Scenario) -> tuple[np.ndarray, float]:
    """Least-squares solution of ``M_k u == V M_k`` over all Kraus operators.

    Stacks the linear system for V (column-stacking convention) and returns
    the minimum-norm solution together with the joint residual.
    """
    d = s.d
    eye_d = np.eye(d)
    a = np.vstack([np.kron(m.T, eye_d) for m in s.cg.kraus])
    b = np.concatenate([vec(m @ s.u) for m in s.cg.kraus])
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    v = x.reshape(d, d, order="F")
    residual = float(
        np.sqrt(sum(frob(m @ s.u - v @ m) ** 2 for m in s.cg.kraus))
    )
    return v, residual


def solve_algebraic_V(
    s: Scenario, rel_tol: float = ALGEBRAIC_REL_TOL
) -> tuple[Optional[np.ndarray], float]:
    """Search for a single matrix V with ``M_k u == V M_k`` for every k.

    Returns (V, residual) with V reported only when the residual is below
    ``rel_tol`` times the norm of the right-hand side.  Existence of such a
    V is sufficient for a well-defined effective dynamics but not necessary:
    absence proves nothing.
    """
    v, residual = _algebraic_lstsq(s)
    scale = float(np.sqrt(sum(frob(m @ s.u) ** 2 for m in s.cg.kraus)))
    if residual <= rel_tol * scale:
        return v, residual
    return None, residual


def verify_dual_identity(s: Scenario, v) -> float:
    """Residual of reconstructing u from V through the dual coarse-graining,
    ``|| u - sum_k M_k* V M_k ||_F``."""
    vm = asmatrix(v)
    if vm.shape != (s.d, s.d):
        raise DimensionMismatch(f"V must be {s.d}x{s.d}, got {vm.shape}")
    rebuilt = sum(m.conj().T @ vm @ m for m in s.cg.kraus)
    return frob(s.u - rebuilt)


def helstrom_pguess(p0: float, rho0, rho1) -> float:
    """Optimal guessing probability for a binary ensemble,
    ``(1 + || p0 rho0 - p1 rho1 ||_1) / 2``."""
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must be a probability, got {p0}")
    m0 = rho0.mat if isinstance(rho0, DensityMatrix) else asmatrix(rho0)
    m1 = rho1.mat if isinstance(rho1, DensityMatrix) else asmatrix(rho1)
    if m0.shape != m1.shape:
        raise DimensionMismatch(f"state shapes differ: {m0.shape} vs {m1.shape}")
    w = np.linalg.eigvalsh(hermitize(p0 * m0 - (1.0 - p0) * m1))
    return float(0.5 * (1.0 + np.abs(w).sum()))


def search_witness(
    s: Scenario, trials: int, ancilla_dim: int = 1, seed: int = 0
) -> Optional[EnsembleWitness]:
    """Randomized hunt for an ensemble violating data processing.

    Samples binary ensembles on the microscopic system tensored with an
    ancilla (Haar-random pure states and Wishart mixed states, weight drawn
    uniformly), and compares guessing probabilities of the coarse-grained
    ensemble before and after the unitary.  Returns the first violation
    found; absence proves nothing, the test is one-sided.
    """
    if trials < 1 or ancilla_dim < 1:
        raise ValueError("trials and ancilla_dim must be >= 1")
    n = ancilla_dim
    dim = s.D * n
    eye_n = np.eye(n)
    lifted = [np.kron(m, eye_n) for m in s.cg.kraus]
    u_lift = np.kron(s.u, eye_n)

    def coarse(mat):
        return sum(k @ mat @ k.conj().T for k in lifted)

    for t in range(trials):
        rng = np.random.default_rng([seed, ancilla_dim, t])
        p0 = rng.uniform(0.2, 0.8)
        pair = []
        for _ in range(2):
            if rng.random() < 0.5:
                pair.append(random_pure_state_mat(dim, rng))
            else:
                pair.append(random_density_mat(dim, rng))
        r0, r1 = pair
        pg_before = helstrom_pguess(p0, coarse(r0), coarse(r1))
        pg_after = helstrom_pguess(
            p0,
            coarse(u_lift @ r0 @ u_lift.conj().T),
            coarse(u_lift @ r1 @ u_lift.conj().T),
        )
        if pg_after > pg_before + WITNESS_MARGIN:
            return EnsembleWitness(
                p0=float(p0),
                p1=float(1.0 - p0),
                rho0=DensityMatrix(r0),
                rho1=DensityMatrix(r1),
                pg_before=pg_before,
                pg_after=pg_after,
                ancilla_dim=ancilla_dim,
                trial=t,
            )
    return None


def _hermitian_basis(n: int) -> np.ndarray:
    """Orthonormal real basis of n x n Hermitian matrices, stacked (n^2, n, n)."""
    out = np.zeros((n * n, n, n), dtype=np.complex128)
    idx = 0
    for i in range(n):
        out[idx, i, i] = 1.0
        idx += 1
    inv_s2 = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for k in range(i + 1, n):
            out[idx, i, k] = out[idx, k, i] = inv_s2
            idx += 1
            out[idx, i, k] = -1j * inv_s2
            out[idx, k, i] = 1j * inv_s2
            idx += 1
    return out


def sdp_feasibility(
    s: Scenario, max_iter: int = SDP_MAX_ITER, tol: float = SDP_TOL
) -> SdpOutcome:
    """Decide existence of a CPTP effective map by alternating projections.

    The unknown is the effective map's Choi matrix J, constrained to be PSD
    (cone projection by eigenvalue clipping), trace preserving, and to close
    the coarse-graining square (both affine; their orthogonal projector is
    precomputed from the stacked linear system).  Dykstra's correction on
    the cone side makes the iteration converge to a point of the
    intersection whenever one exists.

    The reported residual is the affine violation of the PSD-projected iterate.
    ``feasible`` means residual <= tol; ``infeasible`` means the residual
    stalled (relative change < 1e-12 across 200 iterations) while still
    above 100*tol, which in practice signals an empty intersection;
    anything else is ``undecided``.
    """
    if max_iter < 1 or tol <= 0:
        raise ValueError("max_iter must be >= 1 and tol > 0")
    d = s.d
    n = d * d
    t_cg = s.cg.transfer_mat
    rhs = t_cg @ s.u_transfer
    basis = _hermitian_basis(n)

    cols = []
    for b_el in basis:
        tb = choi_to_transfer_mat(b_el, d, d)
        diagram = (tb @ t_cg).ravel()
        tp = partial_trace(b_el, (d, d), keep="A").ravel()
        cols.append(
            np.concatenate([diagram.real, diagram.imag, tp.real, tp.imag])
        )
    a = np.array(cols).T
    b_vec = np.concatenate(
        [rhs.ravel().real, rhs.ravel().imag, np.eye(d).ravel(), np.zeros(d * d)]
    )
    a_pinv = np.linalg.pinv(a, rcond=1e-13)

    x = np.zeros(n * n)
    p = np.zeros(n * n)
    history: list[float] = []
    status = UNDECIDED
    residual = np.inf
    iterations = 0
    psd_point = None
    for iterations in range(1, max_iter + 1):
        j_mat = np.einsum("a,aij->ij", x + p, basis)
        w, vecs = np.linalg.eigh(j_mat)
        psd_point = (vecs * np.maximum(w, 0.0)) @ vecs.conj().T
        y = np.einsum("aij,ji->a", basis, psd_point).real
        p = x + p - y
        violation = a @ y - b_vec
        x = y - a_pinv @ violation
        residual = float(np.linalg.norm(violation))
        history.append(residual)
        if residual <= tol:
            status = FEASIBLE
            break
        if iterations > SDP_STALL_WINDOW and residual > 100 * tol:
            past = history[-SDP_STALL_WINDOW - 1]
            if abs(past - residual) <= SDP_STALL_RTOL * max(residual, 1e-300):
                status = INFEASIBLE
                break

    choi = None
    if status == FEASIBLE:
        try:
            choi = ChoiMatrix(d, d, hermitize(psd_point))
        except (NotCP, ValueError):
            # feasible only marginally; the iterate is not yet a valid channel
            choi = None
    return SdpOutcome(status=status, residual=residual, iterations=iterations, choi=choi)


def construct_emergent(
    s: Scenario,
    diagram_tol: float = FIBER_TOL,
    sdp_max_iter: int = SDP_MAX_ITER,
) -> Optional[KrausChannel]:
    """Build the effective channel, or return None when none exists.

    The candidate transfer matrix is T_cg . T_u . pinv(T_cg): the
    pseudoinverse realizes the (set-valued) inverse of the coarse-graining
    on its image, and the candidate is the least-squares-optimal linear
    effective map.  If it closes the diagram we test complete positivity
    and trace preservation directly; a candidate that closes the diagram
    but is not CPTP may still admit a CPTP completion off the image of the
    coarse-graining, which the feasibility SDP then searches for.
    """
    d = s.d
    t_cg = s.cg.transfer_mat
    rhs = t_cg @ s.u_transfer
    t_gamma = rhs @ pinv(t_cg)
    diagram_residual = frob(t_gamma @ t_cg - rhs)
    if diagram_residual > diagram_tol:
        return None

    j_raw = transfer_to_choi_mat(t_gamma, d, d)
    herm_err = frob(j_raw - j_raw.conj().T)
    j_mat = hermitize(j_raw)
    w_min = float(np.linalg.eigvalsh(j_mat).min())
    tp_err = frob(partial_trace(j_mat, (d, d), keep="A") - np.eye(d))
    if herm_err <= 1e-8 and w_min >= -1e-8 and tp_err <= 1e-8:
        return choi_to_kraus(ChoiMatrix(d, d, j_mat))

    out = sdp_feasibility(s, max_iter=sdp_max_iter, tol=1e-9)
    if out.status == FEASIBLE and out.choi is not None:
        return choi_to_kraus(out.choi)
    return None


def diagram_distance(s: Scenario, gamma: KrausChannel) -> float:
    """Choi-space distance between gamma(cg(.)) and cg(u . u*)."""
    left = compose(gamma, s.cg)
    right = compose(s.cg, unitary_channel(s.u))
    return frob(left.choi.mat - right.choi.mat)


def verify_kraus_equivalence(
    s: Scenario, gamma: KrausChannel, tol: float = 1e-8
) -> tuple[bool, Optional[np.ndarray]]:
    """Check that {K_i M_j} and {M_k u} are unitarily equivalent Kraus sets.

    Both sets represent the two paths around the coarse-graining square, so
    gamma closes the diagram iff a single unitary mixes one list into the
    other.  Returns (True, V) with the mixing matrix on success; the per-
    operator reconstruction residual is bounded by 10*tol.
    """
    if (gamma.din, gamma.dout) != (s.d, s.d):
        raise DimensionMismatch(
            f"gamma must act on dimension {s.d}, got {gamma.din}->{gamma.dout}"
        )
    upper = compose(gamma, s.cg)
    lower = compose(s.cg, unitary_channel(s.u))
    if not channels_equal(upper, lower, tol):
        return False, None
    try:
        v = connecting_unitary(upper, lower, tol)
    except Exception:
        return False, None
    return True, v


def run_all(s: Scenario, cfg: Optional[CheckConfig] = None) -> CompatReport:
    """Run all four criteria, cross-check them, and assemble a report.

    Raises MethodDisagreement when the verdicts are logically inconsistent
    (a bug or a tolerance pathology; never ignored silently).
    """
    cfg = cfg or CheckConfig()
    fiber_ok, fiber_res = check_fiber_preservation(s, cfg.fiber_tol)

    v_lsq, alg_res = _algebraic_lstsq(s)
    scale = float(np.sqrt(sum(frob(m @ s.u) ** 2 for m in s.cg.kraus)))
    v_opt = v_lsq if alg_res <= cfg.algebraic_rel_tol * scale else None
    dual_res = verify_dual_identity(s, v_lsq)

    sdp = sdp_feasibility(s, max_iter=cfg.sdp_max_iter, tol=cfg.sdp_tol)

    witness = None
    if cfg.witness_trials > 0:
        for ancilla in cfg.resolved_ancillas(s):
            witness = search_witness(s, cfg.witness_trials, ancilla, cfg.seed)
            if witness is not None:
                break

    emergent = construct_emergent(s, diagram_tol=cfg.fiber_tol, sdp_max_iter=cfg.sdp_max_iter)
    diag_res = diagram_distance(s, emergent) if emergent is not None else None
    if diag_res is not None and diag_res > 1e-6:
        raise MethodDisagreement(
            f"constructed effective map fails to close the diagram: {diag_res:.3e}"
        )

    flags = {
        "algebraic_implies_fiber": v_opt is None or fiber_ok,
        "sdp_feasible_implies_fiber": sdp.status != FEASIBLE or fiber_ok,
        "witness_implies_not_feasible": witness is None or sdp.status != FEASIBLE,
        "witness_implies_no_emergent": witness is None or emergent is None,
        "emergent_implies_fiber": emergent is None or fiber_ok,
        "emergent_implies_sdp_not_infeasible": emergent is None or sdp.status != INFEASIBLE,
    }
    if not all(flags.values()):
        failed = sorted(k for k, ok in flags.items() if not ok)
        raise MethodDisagreement(
            f"criteria disagree ({', '.join(failed)}); "
            f"fiber={fiber_ok} residual={fiber_res:.3e}, sdp={sdp.status}, "
            f"witness={'found' if witness else 'none'}, "
            f"emergent={'yes' if emergent else 'no'}"
        )

    if emergent is not None:
        verdict = "compatible"
    elif not fiber_ok or sdp.status == INFEASIBLE or witness is not None:
        verdict = "incompatible"
    else:
        verdict = UNDECIDED

    return CompatReport(
        fiber_preserved=fiber_ok,
        fiber_residual=fiber_res,
        algebraic_v=v_opt,
        algebraic_residual=alg_res,
        dual_identity_residual=dual_res,
        sdp=sdp,
        witness=witness,
        emergent=emergent,
        diagram_residual=diag_res,
        method_agreement=flags,
        verdict=verdict,
    )
