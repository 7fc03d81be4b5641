"""Witness-state generators and the steering-to-entanglement protocol.

Contains the named states used throughout the package (maximally correlated
families, the Bell state, the coherence/disturbance gap example, the rho_X
counterexample), JSON-serializable recipes for the CLI, and the tripartite
protocol that converts steered coherence into B-C entanglement through an
incoherent copy gate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .correlations import (
    EPS_DEG,
    SearchBudget,
    avg_steered_coherence,
    b_side_mid,
    fourier_basis,
    sic,
    _multistart_minimize,
)
from .measures import (
    DistanceKind,
    SupportViolationError,
    coherence,
    relative_entropy,
)
from .qkernel import (
    DensityMatrix,
    KrausMap,
    ProjectiveBasis,
    apply_kraus,
    eig_hermitian,
    partial_trace,
    product_basis,
    regroup_dims,
    steer,
    tensor_product,
    von_neumann_entropy,
)
from .report import FAIL, FINDING, PASS, SKIP, VerificationReport
from .sampling import (
    min_eigengap,
    random_b_classical,
    random_hs_state,
    random_psd_unit_trace,
    random_pure,
)

PURITY_TOL = 1e-9

RECIPE_KINDS = (
    "maximally_correlated",
    "bell",
    "gap_example",
    "rho_x",
    "b_classical",
    "random_hs",
    "random_pure",
    "product",
    "werner",
)


# ---------------------------------------------------------------------------
# named states


def maximally_correlated(coeff) -> DensityMatrix:
    """rho = sum_ij m_ij |ii><jj| from a PSD unit-trace coefficient matrix.

    The embedding is an isometry onto span{|ii>}, so the state inherits the
    coefficient matrix's spectrum.
    """
    m = np.asarray(coeff, dtype=complex)
    d = m.shape[0]
    if m.shape != (d, d):
        raise ValueError("coefficient matrix must be square")
    if abs(np.trace(m) - 1.0) > 1e-9 or np.abs(m - m.conj().T).max() > 1e-9:
        raise ValueError("coefficient matrix must be Hermitian with unit trace")
    if np.linalg.eigvalsh(m).min() < -1e-9:
        raise ValueError("coefficient matrix must be positive semidefinite")
    data = np.zeros((d * d, d * d), dtype=complex)
    idx = np.arange(d) * d + np.arange(d)
    data[np.ix_(idx, idx)] = m
    return DensityMatrix(data, (d, d))


def bell_state() -> DensityMatrix:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / math.sqrt(2.0)
    return DensityMatrix.from_pure(v, (2, 2))


def gap_example() -> DensityMatrix:
    """Equal mixture of the Bell state with |01><01|: the state whose B-side
    relative-entropy disturbance (0.5 bits) strictly exceeds its steered
    coherence."""
    bell = bell_state().data
    data = 0.5 * bell
    data[1, 1] += 0.5
    return DensityMatrix(data, (2, 2))


def rho_x_state() -> DensityMatrix:
    """Three-qubit state mixing |0><0| (x) Psi+ with |1><1| (x) Psi-.

    BC-classical with respect to the Bell-type basis (so the BC disturbance
    vanishes) yet each steered BC state is maximally entangled.
    """
    psi_p = np.zeros(4, dtype=complex)
    psi_m = np.zeros(4, dtype=complex)
    psi_p[0] = psi_p[3] = 1.0 / math.sqrt(2.0)
    psi_m[0], psi_m[3] = 1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)
    data = np.zeros((8, 8), dtype=complex)
    data[:4, :4] = 0.5 * np.outer(psi_p, psi_p.conj())
    data[4:, 4:] = 0.5 * np.outer(psi_m, psi_m.conj())
    return DensityMatrix(data, (2, 2, 2))


def werner_state(p: float) -> DensityMatrix:
    """p |Phi+><Phi+| + (1-p) I/4, valid for -1/3 <= p <= 1."""
    if p < -1.0 / 3.0 - 1e-12 or p > 1.0 + 1e-12:
        raise ValueError("werner mixing parameter out of range")
    data = p * bell_state().data + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(data, (2, 2))


def product_state(rho_a: DensityMatrix, rho_b: DensityMatrix) -> DensityMatrix:
    return tensor_product(rho_a, rho_b)


# ---------------------------------------------------------------------------
# recipes


@dataclass(frozen=True)
class StateRecipe:
    """JSON-serializable description of a state for CLI replay."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in RECIPE_KINDS:
            raise ValueError(f"unknown recipe kind {self.kind!r}")

    def to_json(self) -> str:
        return json.dumps(
            {"kind": self.kind, "params": self.params, "seed": self.seed},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "StateRecipe":
        payload = json.loads(text)
        if not isinstance(payload, dict) or "kind" not in payload:
            raise ValueError("recipe must be an object with a 'kind' field")
        return cls(
            kind=payload["kind"],
            params=dict(payload.get("params", {})),
            seed=int(payload.get("seed", 0)),
        )


def _recipe_dims(params, default=(2, 2)):
    dims = params.get("dims", list(default))
    dims = tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise ValueError("every subsystem dimension must be at least 2")
    return dims


def make_state(recipe: StateRecipe) -> DensityMatrix:
    rng = np.random.default_rng(recipe.seed)
    kind, params = recipe.kind, recipe.params
    if kind == "maximally_correlated":
        if "coeff_re" in params:
            m = np.asarray(params["coeff_re"], dtype=float) + 1j * np.asarray(
                params.get("coeff_im", np.zeros_like(params["coeff_re"])), dtype=float
            )
        elif "schmidt" in params:
            lam = np.asarray(params["schmidt"], dtype=float)
            if lam.min() < -1e-12 or abs(lam.sum() - 1.0) > 1e-9:
                raise ValueError("schmidt weights must be a probability vector")
            root = np.sqrt(np.clip(lam, 0.0, None))
            m = np.outer(root, root)
        else:
            m = random_psd_unit_trace(int(params.get("d", 2)), rng)
        return maximally_correlated(m)
    if kind == "bell":
        return bell_state()
    if kind == "gap_example":
        return gap_example()
    if kind == "rho_x":
        return rho_x_state()
    if kind == "b_classical":
        return random_b_classical(_recipe_dims(params), rng)
    if kind == "random_hs":
        return random_hs_state(_recipe_dims(params), rng)
    if kind == "random_pure":
        return random_pure(_recipe_dims(params), rng)
    if kind == "product":
        da, db = _recipe_dims(params)
        return tensor_product(random_hs_state((da,), rng), random_hs_state((db,), rng))
    if kind == "werner":
        return werner_state(float(params.get("p", 1.0)))
    raise ValueError(f"unknown recipe kind {kind!r}")


# ---------------------------------------------------------------------------
# maximally correlated verification


def verify_theorem2(d: int, budget: SearchBudget | None = None, seed: int = 0,
                    coeff=None) -> VerificationReport:
    """Check that maximally correlated states reach the disturbance bound:
    steered coherence = B-side disturbance = S(rho_B) - S(rho), with the
    mutually unbiased (Fourier) measurement achieving the optimum."""
    rng = np.random.default_rng(seed)
    if coeff is None:
        for _ in range(64):
            m = random_psd_unit_trace(d, rng)
            if min_eigengap(np.diag(np.diagonal(m))) > 1e-4:
                break
        else:
            return VerificationReport(
                theorem="maximally_correlated_equality", kind="r",
                value_lhs=0.0, value_rhs=0.0, margin=0.0, tolerance=1e-5,
                seeds=(seed,), converged=False, status=SKIP,
                details=("resampling budget exhausted: rho_B stayed degenerate",),
            )
    else:
        m = np.asarray(coeff, dtype=complex)
    rho = maximally_correlated(m)
    rho_b = partial_trace(rho, [1])
    rhs = von_neumann_entropy(rho_b) - von_neumann_entropy(rho)
    four = avg_steered_coherence(
        rho, fourier_basis(d), ProjectiveBasis.computational(d), DistanceKind.RELATIVE_ENTROPY
    )
    q_b = b_side_mid(rho, DistanceKind.RELATIVE_ENTROPY, budget, seed)
    res = sic(rho, DistanceKind.RELATIVE_ENTROPY, budget, seed)
    tol = 1e-5
    dev_sic = abs(res.value - rhs)
    dev_four = abs(four - rhs)
    overshoot = res.value - q_b
    ok = dev_sic <= tol and dev_four <= 1e-7 and overshoot <= 1e-6
    return VerificationReport(
        theorem="maximally_correlated_equality",
        kind="r",
        value_lhs=res.value,
        value_rhs=rhs,
        margin=tol - dev_sic,
        tolerance=tol,
        seeds=(seed,),
        converged=res.converged,
        status=PASS if ok else FAIL,
        details=(
            f"entropy_gap={rhs:.10f}",
            f"fourier_avg={four:.10f} (dev {dev_four:.2e}, tol 1e-07)",
            f"b_side_mid={q_b:.10f} (overshoot {overshoot:+.2e}, tol 1e-06)",
        ),
    )


# ---------------------------------------------------------------------------
# tripartite steering protocol


def incoherent_cnot(d_b: int, d_c: int) -> KrausMap:
    """Copy gate |j>_B |k>_C -> |j>_B |(k + j) mod d_C>_C as a single-unitary
    Kraus map on the joined BC subsystem. Permutes the computational product
    basis, so incoherent states stay incoherent."""
    if d_c < d_b:
        raise ValueError("the target register cannot be smaller than the source")
    side = d_b * d_c
    u = np.zeros((side, side), dtype=complex)
    for j in range(d_b):
        for k in range(d_c):
            u[j * d_c + (k + j) % d_c, j * d_c + k] = 1.0
    return KrausMap((u,), target=1)


def prepare_protocol_state(varrho_ab: DensityMatrix, d_c: int | None = None) -> DensityMatrix:
    """Attach |0><0| on C and apply the incoherent copy gate on BC."""
    if varrho_ab.n_subsystems != 2:
        raise ValueError("expected a bipartite input state")
    da, db = varrho_ab.dims
    d_c = db if d_c is None else int(d_c)
    ancilla = np.zeros((d_c, d_c), dtype=complex)
    ancilla[0, 0] = 1.0
    rho0 = tensor_product(varrho_ab, DensityMatrix(ancilla, (d_c,)))
    flat = regroup_dims(rho0, (da, db * d_c))
    out = apply_kraus(flat, incoherent_cnot(db, d_c))
    return regroup_dims(out, (da, db, d_c))


class ReeResult(NamedTuple):
    value: float
    converged: bool


def _separable_candidate(params: np.ndarray) -> np.ndarray:
    logits = params[:8]
    w = np.exp(logits - logits.max())
    w /= w.sum()
    acc = np.zeros((4, 4), dtype=complex)
    for k in range(8):
        ta, pa, tb, pb = params[8 + 4 * k: 12 + 4 * k]
        ka = np.array([math.cos(ta / 2.0), math.sin(ta / 2.0) * np.exp(1j * pa)])
        kb = np.array([math.cos(tb / 2.0), math.sin(tb / 2.0) * np.exp(1j * pb)])
        prod = np.kron(ka, kb)
        acc += w[k] * np.outer(prod, prod.conj())
    return acc


def ree_numeric(rho: DensityMatrix, budget: SearchBudget | None = None,
                seed: int = 0) -> ReeResult:
    """Upper bound on the relative entropy of entanglement of a two-qubit
    state: minimize S(rho || sigma) over mixtures of up to 8 product
    projectors. Warm-started at the fully dephased state, so the result
    never exceeds that separable candidate's divergence.
    """
    if rho.dims != (2, 2):
        raise ValueError("ree_numeric supports two-qubit states only")
    budget = budget or SearchBudget(starts=16, max_evals=3000)
    rng = np.random.default_rng(seed)

    def objective(params):
        cand = _separable_candidate(params)
        try:
            sigma = DensityMatrix(cand, (2, 2))
        except ValueError:
            return 1e3
        try:
            return relative_entropy(rho, sigma)
        except SupportViolationError:
            return 1e3

    diag = np.clip(np.diagonal(rho.data).real, 0.0, None)
    warm = np.zeros(40)
    warm[:4] = np.log(diag + 1e-12)
    warm[4:8] = np.log(1e-12)
    for k in range(4):
        ja, jb = divmod(k, 2)
        warm[8 + 4 * k] = math.pi * ja
        warm[10 + 4 * k] = math.pi * jb
    starts = [warm]
    while len(starts) < budget.starts:
        s = rng.normal(scale=1.0, size=40)
        s[:8] = rng.normal(scale=0.5, size=8)
        starts.append(s)
    res = _multistart_minimize(objective, starts, budget.max_evals,
                               xtol=1e-6, ftol=1e-10)
    return ReeResult(max(0.0, res.value), res.converged)


def steering_induced_entanglement(rho_abc: DensityMatrix, alice: ProjectiveBasis,
                                  budget: SearchBudget | None = None,
                                  seed: int = 0):
    """Average entanglement Alice's measurement leaves between B and C.

    Pure steered BC states (largest eigenvalue within 1e-9 of one) get the
    exact entanglement entropy; mixed two-qubit cases fall back to the
    numerical relative-entropy upper bound and are flagged approximate.
    Returns (average, per_outcome) where each entry records probability,
    entanglement and whether it was exact.
    """
    if rho_abc.n_subsystems != 3:
        raise ValueError("expected a tripartite state")
    da, db, dc = rho_abc.dims
    flat = regroup_dims(rho_abc, (da, db * dc))
    per_outcome = []
    avg = 0.0
    for out in steer(flat, alice):
        if out.negligible:
            continue
        bc = regroup_dims(out.state, (db, dc))
        lam = np.linalg.eigvalsh(bc.data)
        if lam[-1] >= 1.0 - PURITY_TOL:
            ent = von_neumann_entropy(partial_trace(bc, [0]))
            exact = converged = True
        else:
            if bc.dims != (2, 2):
                raise ValueError(
                    "mixed steered state beyond two qubits: no entanglement "
                    "estimate available"
                )
            ree = ree_numeric(bc, budget, seed)
            ent, exact, converged = ree.value, False, ree.converged
        per_outcome.append(
            {
                "probability": out.probability,
                "entanglement": ent,
                "exact": exact,
                "converged": converged,
            }
        )
        avg += out.probability * ent
    return avg, per_outcome


def _align_b_frame(rho: DensityMatrix) -> DensityMatrix:
    """Rotate Bob's side so rho_B is diagonal (all coherence/disturbance
    quantities with basis-covariant definitions are unchanged)."""
    da, db = rho.dims
    _, v = eig_hermitian(partial_trace(rho, [1]).data)
    big = np.kron(np.eye(da), v)
    return DensityMatrix(big.conj().T @ rho.data @ big, rho.dims, rho.tol)


def verify_corollary1(varrho_ab: DensityMatrix, alice: ProjectiveBasis | None = None,
                      budget: SearchBudget | None = None, seed: int = 0) -> VerificationReport:
    """Drive the copy-gate protocol and check the entanglement chain: each
    steered BC entanglement is bounded by its BC coherence, which is bounded
    by the steered B coherence, and the average entanglement never exceeds
    the B-side disturbance of the input."""
    if varrho_ab.n_subsystems != 2:
        raise ValueError("expected a bipartite input state")
    da, db = varrho_ab.dims
    rho_b = partial_trace(varrho_ab, [1])
    if min_eigengap(rho_b.data) < EPS_DEG:
        raise ValueError("input must have a non-degenerate B marginal")
    alice = alice or fourier_basis(da)
    aligned = _align_b_frame(varrho_ab)
    e_b = ProjectiveBasis.computational(db)
    e_c = ProjectiveBasis.computational(db)
    e_bc = product_basis(e_b, e_c)

    q_b = b_side_mid(aligned, DistanceKind.RELATIVE_ENTROPY, budget, seed)
    rho_abc = prepare_protocol_state(aligned)
    avg, per_outcome = steering_induced_entanglement(rho_abc, alice, budget, seed)

    chain_tol = 1e-5
    agg_tol = 1e-6
    worst = math.inf
    details = []
    steered_b = [out for out in steer(aligned, alice) if not out.negligible]
    flat_abc = regroup_dims(rho_abc, (da, db * db))
    steered_bc = [out for out in steer(flat_abc, alice) if not out.negligible]
    all_exact = True
    for i, rec in enumerate(per_outcome):
        bc = regroup_dims(steered_bc[i].state, (db, db))
        c_bc = coherence(DistanceKind.RELATIVE_ENTROPY, bc, e_bc)
        c_b = coherence(DistanceKind.RELATIVE_ENTROPY, steered_b[i].state, e_b)
        if rec["exact"]:
            worst = min(worst, c_bc + chain_tol - rec["entanglement"])
        else:
            all_exact = False
        worst = min(worst, c_b + chain_tol - c_bc)
        details.append(
            f"outcome {i}: p={rec['probability']:.6f} E={rec['entanglement']:.8f} "
            f"C_bc={c_bc:.8f} C_b={c_b:.8f} exact={rec['exact']}"
        )
    worst = min(worst, q_b + agg_tol - avg)
    details.append(f"avg_entanglement={avg:.10f} b_side_mid={q_b:.10f}")
    if not all_exact:
        details.append("mixed steered states present: their chain checks are informational")
    return VerificationReport(
        theorem="steered_entanglement_bound",
        kind="r",
        value_lhs=avg,
        value_rhs=q_b,
        margin=float(worst),
        tolerance=agg_tol,
        seeds=(seed,),
        converged=True,
        status=PASS if worst >= 0 else FAIL,
        details=tuple(details),
    )


def rho_x_finding(budget: SearchBudget | None = None, seed: int = 0) -> VerificationReport:
    """The documented counterexample: steering rho_X creates a full ebit
    between B and C on average although the BC-side disturbance vanishes,
    so the disturbance bound does not extend to the BC pair."""
    rho = rho_x_state()
    flat = regroup_dims(rho, (2, 4))
    q_bc = b_side_mid(flat, DistanceKind.RELATIVE_ENTROPY, budget, seed)
    avg, per_outcome = steering_induced_entanglement(
        rho, ProjectiveBasis.computational(2), budget, seed
    )
    ok = q_bc <= 1e-9 and abs(avg - 1.0) <= 1e-9
    details = [f"bc_side_mid={q_bc:.3e}", f"avg_entanglement={avg:.12f}"]
    details += [
        f"outcome: p={rec['probability']:.6f} E={rec['entanglement']:.10f} exact={rec['exact']}"
        for rec in per_outcome
    ]
    return VerificationReport(
        theorem="steered_entanglement_exceeds_bc_disturbance",
        kind="r",
        value_lhs=avg,
        value_rhs=q_bc,
        margin=avg - q_bc,
        tolerance=1e-9,
        seeds=(seed,),
        converged=True,
        status=FINDING if ok else FAIL,
        details=tuple(details),
    )
