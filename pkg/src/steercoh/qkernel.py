"""Dense density-matrix primitives: states, projective bases, measurements, channels.

Everything here works on explicit complex matrices for small multipartite
systems. Subsystem structure is carried as a tuple of local dimensions, with
subsystem 0 as the leftmost tensor factor (row-major Kronecker convention).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9

# Eigenvalues below this floor are treated as exact zeros (entropy terms,
# support projections); outcome probabilities below ZERO_PROB are negligible.
EIG_FLOOR = 1e-12
ZERO_PROB = 1e-12


class InvalidStateError(ValueError):
    """A matrix failed a physicality check (hermiticity, trace, positivity)."""


def _as_square_complex(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix with a declared subsystem factorization.

    Args:
        data: square complex matrix, side = prod(dims).
        dims: local dimensions, leftmost factor first.
        tol: validation tolerance for hermiticity, unit trace and positivity.
    """

    data: np.ndarray
    dims: tuple
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        a = _as_square_complex(self.data).copy()
        dims = tuple(int(d) for d in (self.dims if np.iterable(self.dims) else (self.dims,)))
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid dims {dims}")
        side = int(np.prod(dims))
        if a.shape[0] != side:
            raise ValueError(f"matrix side {a.shape[0]} does not match prod(dims) = {side}")
        if np.abs(a - a.conj().T).max() > self.tol:
            raise InvalidStateError("matrix is not Hermitian within tolerance")
        tr = a.trace()
        if abs(tr - 1.0) > self.tol:
            raise InvalidStateError(f"trace {tr} is not 1 within tolerance")
        if np.linalg.eigvalsh(a).min() < -self.tol:
            raise InvalidStateError("matrix has a negative eigenvalue beyond tolerance")
        a.flags.writeable = False
        object.__setattr__(self, "data", a)
        object.__setattr__(self, "dims", dims)

    @property
    def side(self) -> int:
        return self.data.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @classmethod
    def from_pure(cls, vec, dims, tol: float = DEFAULT_TOL) -> "DensityMatrix":
        v = np.asarray(vec, dtype=complex).reshape(-1)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), dims, tol)

    def close_to(self, other: "DensityMatrix", atol: float = 1e-9) -> bool:
        return self.dims == other.dims and np.abs(self.data - other.data).max() <= atol


def maximally_mixed(dims) -> DensityMatrix:
    dims = tuple(int(d) for d in (dims if np.iterable(dims) else (dims,)))
    side = int(np.prod(dims))
    return DensityMatrix(np.eye(side) / side, dims)


@dataclass(frozen=True)
class ProjectiveBasis:
    """Orthonormal, complete basis of a d-dimensional space.

    vectors[i] is the i-th basis ket (shape (d, d) overall).
    """

    vectors: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex).copy()
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"basis must be d vectors of length d, got shape {v.shape}")
        d = v.shape[0]
        gram = v.conj() @ v.T
        if np.abs(gram - np.eye(d)).max() > self.tol:
            raise InvalidStateError("basis vectors are not orthonormal within tolerance")
        completeness = v.T @ v.conj()
        if np.abs(completeness - np.eye(d)).max() > self.tol:
            raise InvalidStateError("basis is not complete within tolerance")
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Unitary with basis kets as columns."""
        return self.vectors.T

    @classmethod
    def computational(cls, d: int) -> "ProjectiveBasis":
        return cls(np.eye(d))

    @classmethod
    def from_columns(cls, u, tol: float = DEFAULT_TOL) -> "ProjectiveBasis":
        return cls(np.asarray(u, dtype=complex).T, tol)

    def projector(self, i: int) -> np.ndarray:
        v = self.vectors[i]
        return np.outer(v, v.conj())


def product_basis(first: ProjectiveBasis, second: ProjectiveBasis) -> ProjectiveBasis:
    """Tensor-product basis ordered row-major: (i, j) -> i * dim2 + j."""
    return ProjectiveBasis.from_columns(np.kron(first.matrix, second.matrix))


@dataclass(frozen=True)
class SteeringOutcome:
    """One measurement outcome: probability and the conditional remote state.

    negligible marks outcomes with probability below ZERO_PROB; their state
    field is a placeholder and must be excluded from averages.
    """

    probability: float
    state: DensityMatrix
    negligible: bool = False


@dataclass(frozen=True)
class SteeringEnsemble:
    outcomes: tuple

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self):
        return len(self.outcomes)

    def average_state(self) -> DensityMatrix:
        acc = np.zeros((self.outcomes[0].state.side,) * 2, dtype=complex)
        for out in self.outcomes:
            if not out.negligible:
                acc += out.probability * out.state.data
        return DensityMatrix(acc / acc.trace().real, self.outcomes[0].state.dims)


@dataclass(frozen=True)
class KrausMap:
    """Trace-preserving Kraus map acting on one subsystem.

    operators: square matrices of a common shape; sum of K'K equals identity.
    target: index of the subsystem the operators act on.
    """

    operators: tuple
    target: int
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        ops = tuple(_as_square_complex(k) for k in self.operators)
        if not ops:
            raise ValueError("Kraus map needs at least one operator")
        d = ops[0].shape[0]
        if any(k.shape != (d, d) for k in ops):
            raise ValueError("Kraus operators must share a common shape")
        acc = sum(k.conj().T @ k for k in ops)
        if np.abs(acc - np.eye(d)).max() > self.tol:
            raise InvalidStateError("Kraus map is not trace preserving within tolerance")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def tensor_product(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(np.kron(a.data, b.data), a.dims + b.dims, max(a.tol, b.tol))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every subsystem not listed in keep (original order preserved)."""
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = sorted(set(int(k) for k in keep))
    n = rho.n_subsystems
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"invalid subsystem index set {keep} for {n} subsystems")
    t = rho.data.reshape(rho.dims + rho.dims)
    bra = list(range(n))
    ket = [i + n if i in keep else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    reduced = np.einsum(t, bra + ket, out)
    side = int(np.prod([rho.dims[k] for k in keep]))
    return DensityMatrix(reduced.reshape(side, side), tuple(rho.dims[k] for k in keep), rho.tol)


def regroup_dims(rho: DensityMatrix, dims) -> DensityMatrix:
    """Re-declare the subsystem factorization (merge or split adjacent factors)."""
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != rho.side:
        raise ValueError(f"dims {dims} incompatible with side {rho.side}")
    return DensityMatrix(rho.data, dims, rho.tol)


def eig_hermitian(m, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    Returns (eigenvalues, eigenvectors) with eigenvectors as columns.
    """
    a = _as_square_complex(m)
    if np.abs(a - a.conj().T).max() > tol:
        raise InvalidStateError("eig_hermitian requires a Hermitian matrix")
    w, v = np.linalg.eigh(a)
    recon = (v * w) @ v.conj().T
    if np.abs(recon - a).max() > max(tol, 1e-10):
        raise InvalidStateError("eigendecomposition failed reconstruction check")
    return w, v


def entropy_of_probs(p) -> float:
    """Shannon entropy in bits; values below EIG_FLOOR contribute zero."""
    w = np.asarray(p, dtype=float).reshape(-1)
    w = w[w > EIG_FLOOR]
    if w.size == 0:
        return 0.0
    return float(max(0.0, -np.sum(w * np.log2(w))))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits."""
    return entropy_of_probs(np.linalg.eigvalsh(rho.data))


def steer(rho: DensityMatrix, basis: ProjectiveBasis) -> SteeringEnsemble:
    """Measure subsystem A of a bipartite state projectively; collect the
    conditional states of subsystem B with their outcome probabilities."""
    if rho.n_subsystems != 2:
        raise ValueError("steer expects a bipartite state (regroup dims first)")
    da, db = rho.dims
    if basis.dim != da:
        raise ValueError(f"basis dim {basis.dim} does not match subsystem A dim {da}")
    t = rho.data.reshape(da, db, da, db)
    outcomes = []
    for v in basis.vectors:
        m = np.einsum("a,abcd,c->bd", v.conj(), t, v)
        p = float(m.trace().real)
        if p < ZERO_PROB:
            outcomes.append(SteeringOutcome(max(p, 0.0), maximally_mixed((db,)), True))
        else:
            outcomes.append(SteeringOutcome(p, DensityMatrix(m / p, (db,), rho.tol)))
    return SteeringEnsemble(tuple(outcomes))


def dephase(rho: DensityMatrix, basis: ProjectiveBasis, target: int = 0) -> DensityMatrix:
    """Remove coherences on one subsystem with respect to a projective basis."""
    n = rho.n_subsystems
    if target < 0 or target >= n:
        raise ValueError(f"invalid target {target} for {n} subsystems")
    dt = rho.dims[target]
    if basis.dim != dt:
        raise ValueError(f"basis dim {basis.dim} does not match subsystem dim {dt}")
    pre = int(np.prod(rho.dims[:target], dtype=int)) if target > 0 else 1
    post = int(np.prod(rho.dims[target + 1:], dtype=int)) if target < n - 1 else 1
    u = basis.matrix
    t = rho.data.reshape(pre, dt, post, pre, dt, post)
    # Rotate the target legs into the measurement basis, keep only the
    # diagonal in that index pair, rotate back.
    t1 = np.einsum("ai,paqrbs,bj->piqrjs", u.conj(), t, u, optimize=True)
    t1 = t1 * np.eye(dt).reshape(1, dt, 1, 1, dt, 1)
    t2 = np.einsum("ai,piqrjs,bj->paqrbs", u, t1, u.conj(), optimize=True)
    return DensityMatrix(t2.reshape(rho.side, rho.side), rho.dims, rho.tol)


def _embed_on_subsystem(op: np.ndarray, dims, target: int) -> np.ndarray:
    pre = int(np.prod(dims[:target], dtype=int)) if target > 0 else 1
    post = int(np.prod(dims[target + 1:], dtype=int)) if target < len(dims) - 1 else 1
    out = op
    if pre > 1:
        out = np.kron(np.eye(pre), out)
    if post > 1:
        out = np.kron(out, np.eye(post))
    return out


def apply_kraus(rho: DensityMatrix, kmap: KrausMap, selective: bool = False):
    """Apply a Kraus map to its target subsystem.

    Non-selective mode returns the summed output state. Selective mode returns
    a list of SteeringOutcome records (probability, normalized conditional
    state, negligible flag), mirroring steer's zero-probability policy.
    """
    n = rho.n_subsystems
    if kmap.target < 0 or kmap.target >= n:
        raise ValueError(f"invalid target {kmap.target} for {n} subsystems")
    if kmap.dim != rho.dims[kmap.target]:
        raise ValueError(
            f"Kraus dim {kmap.dim} does not match subsystem dim {rho.dims[kmap.target]}"
        )
    embedded = [_embed_on_subsystem(k, rho.dims, kmap.target) for k in kmap.operators]
    if not selective:
        acc = np.zeros_like(rho.data)
        for k in embedded:
            acc = acc + k @ rho.data @ k.conj().T
        return DensityMatrix(acc, rho.dims, rho.tol)
    outcomes = []
    for k in embedded:
        m = k @ rho.data @ k.conj().T
        p = float(m.trace().real)
        if p < ZERO_PROB:
            outcomes.append(SteeringOutcome(max(p, 0.0), maximally_mixed(rho.dims), True))
        else:
            outcomes.append(SteeringOutcome(p, DensityMatrix(m / p, rho.dims, rho.tol)))
    return outcomes


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temp file and rename, so readers never see
    a partially written file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def state_to_dict(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.dims),
        "re": rho.data.real.tolist(),
        "im": rho.data.imag.tolist(),
    }


def state_from_dict(payload: dict, tol: float = DEFAULT_TOL) -> DensityMatrix:
    try:
        dims = payload["dims"]
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state payload: {exc}") from exc
    if re.shape != im.shape:
        raise ValueError("re and im parts have different shapes")
    return DensityMatrix(re + 1j * im, dims, tol)


def save_state(rho: DensityMatrix, path: str) -> None:
    """Serialize a state to JSON ({dims, re, im}, row-major), atomically."""
    atomic_write_text(path, json.dumps(state_to_dict(rho), indent=1))


def load_state(path: str, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Load and re-validate a JSON state file."""
    with open(path) as fh:
        payload = json.load(fh)
    return state_from_dict(payload, tol)
