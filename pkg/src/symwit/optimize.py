"""Witness and state optimization by convex programming.

Two solvers back the public API.  ``optimize_witness`` fits witness
coefficients over a fixed operator basis by a cutting-plane method: the
positivity constraint ``W - alpha * W_P >= 0`` is relaxed to a growing set of
eigenvector cuts, a small linear program is re-solved after each round, and a
feasibility repair (shifting along the identity) turns the relaxed iterate
into a certified witness, so the gap between the two sides bounds the model
error.  ``max_ppt`` maximizes a Hermitian objective over density matrices
whose partial transpose across a given bipartition stays positive, using a
log-barrier interior-point method; when the objective is permutation
invariant the state variable is restricted (without loss of generality, by a
twirling argument) to the span of symmetrized Pauli products on each part,
which shrinks the problem from ``4^N`` to polynomially many real unknowns.
``max_bisep_seesaw`` and ``max_symmetric_product`` provide matching
product-state lower bounds by alternating eigenvector updates and direct
Bloch-sphere search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, fields
from functools import lru_cache, reduce
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog, minimize

from .compiler import PauliClass
from .linalg import (
    DenseOperator,
    StateVector,
    identity,
    op_power,
    partial_transpose,
    schmidt_max_sq,
)
from .symmetric import (
    collective_j,
    dicke,
    is_permutation_invariant,
    permute_qubits,
)
from .witnesses import BasisTerm, NoiseModel, WitnessSpec

__all__ = [
    "SolverConfig",
    "SolverReport",
    "OptimizationError",
    "WitnessOptimizationProblem",
    "collective_power_basis",
    "optimize_witness",
    "PptProblem",
    "PptResult",
    "max_ppt",
    "PptScanResult",
    "max_ppt_all",
    "max_bisep_seesaw",
    "BisepResult",
    "max_bisep_all",
    "max_symmetric_product",
    "QScanResult",
    "q_scan",
]


class OptimizationError(RuntimeError):
    """Raised when a solver cannot produce a certified answer."""


@dataclass(frozen=True)
class SolverConfig:
    """Numerical knobs shared by the solvers.

    ``barrier_tol`` is the final barrier parameter mu of the interior-point
    solver (the duality gap is bounded by ``2 * dim * mu``); ``cut_tol`` is
    the model-gap target of the cutting-plane witness fit; the seesaw fields
    control the random-restart product-state search.  All randomness flows
    from ``seed`` through explicit generators, so runs are reproducible.
    """

    barrier_tol: float = 1e-9
    cut_tol: float = 1e-6
    seesaw_restarts: int = 50
    seesaw_tol: float = 1e-12
    seed: int = 0

    @classmethod
    def from_mapping(cls, entries: dict) -> "SolverConfig":
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, raw in entries.items():
            if key not in known:
                raise ValueError(f"unknown solver option {key!r}")
            kwargs[key] = int(raw) if key in ("seesaw_restarts", "seed") else float(raw)
        return cls(**kwargs)


@dataclass(frozen=True)
class SolverReport:
    """Convergence certificate attached to every solver result.

    ``optimum`` is the objective value at the returned point;
    ``primal_residual`` the violation of the equality constraints;
    ``dual_residual`` the optimality-gap bound (cutting-plane model gap, or
    ``2 * dim * mu`` for the barrier method); ``min_eig_slack`` the smallest
    eigenvalue over the semidefinite blocks at the returned point.
    """

    optimum: float
    primal_residual: float
    dual_residual: float
    min_eig_slack: float
    iterations: int
    converged: bool

    def to_json(self) -> dict:
        return {
            "optimum": float(self.optimum),
            "primal_residual": float(self.primal_residual),
            "dual_residual": float(self.dual_residual),
            "min_eig_slack": float(self.min_eig_slack),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SolverReport":
        return cls(
            optimum=float(data["optimum"]),
            primal_residual=float(data["primal_residual"]),
            dual_residual=float(data["dual_residual"]),
            min_eig_slack=float(data["min_eig_slack"]),
            iterations=int(data["iterations"]),
            converged=bool(data["converged"]),
        )


def _herm(mat: np.ndarray) -> np.ndarray:
    return (mat + mat.conj().T) / 2.0


# ---------------------------------------------------------------------------
# witness optimization (cutting plane)
# ---------------------------------------------------------------------------


def collective_power_basis(
    num_qubits: int,
    axes: tuple[str, ...] = ("x", "y", "z"),
    max_power: int | None = None,
    include_odd: bool = False,
) -> tuple[BasisTerm, ...]:
    """Identity plus powers of collective spin components as witness basis.

    Even powers ``J_a^2, J_a^4, ...`` up to ``max_power`` (default: the qubit
    number) for each requested axis; odd powers are excluded by default since
    they vanish on the states of interest, but can be switched on.
    """
    if max_power is None:
        max_power = num_qubits
    start = 1 if include_odd else 2
    step = 1 if include_odd else 2
    terms = [BasisTerm("identity")]
    for power in range(start, max_power + 1, step):
        for axis in axes:
            terms.append(BasisTerm("collective", axis=axis, power=power))
    return tuple(terms)


@dataclass(frozen=True)
class WitnessOptimizationProblem:
    """Inputs of the witness fit: target state, noise model, operator basis.

    The witness is constrained to ``W = sum_k c_k B_k`` with the
    normalization ``<target|W|target> = -1`` and the matrix inequality
    ``W - alpha * (lambda_sq * 1 - |target><target|) >= 0`` for some
    ``alpha > 0``; the objective is to minimize ``Tr(W rho_noise)``, which
    maximizes the noise tolerance ``1 / (1 + Tr(W rho_noise))``.
    """

    target: StateVector
    noise: NoiseModel
    basis: tuple[BasisTerm, ...]
    name: str = "optimized"

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(self.basis))
        if not self.basis:
            raise ValueError("witness basis must not be empty")
        if self.noise.rho_noise.dim != self.target.dim:
            raise ValueError("noise model dimension does not match the target")
        flats = np.stack([op.mat.ravel() for op in self.dense_basis])
        norms = np.linalg.norm(flats, axis=1)
        if np.any(norms == 0):
            raise ValueError("witness basis contains a zero operator")
        gram = np.real((flats / norms[:, None]).conj() @ (flats / norms[:, None]).T)
        if float(np.linalg.eigvalsh(gram)[0]) < 1e-10:
            raise ValueError("witness basis operators are linearly dependent")

    @property
    def num_qubits(self) -> int:
        return self.target.num_qubits

    @property
    def dense_basis(self) -> tuple[DenseOperator, ...]:
        cached = self.__dict__.get("_dense_basis")
        if cached is None:
            cached = tuple(
                term.realize(self.num_qubits, self.target) for term in self.basis
            )
            for op in cached:
                if not op.is_hermitian(1e-10):
                    raise ValueError("witness basis operators must be Hermitian")
            self.__dict__["_dense_basis"] = cached
        return cached

    @property
    def lambda_sq(self) -> float:
        return schmidt_max_sq(self.target)

    def projector_witness_matrix(self) -> np.ndarray:
        proj = np.outer(self.target.vec, self.target.vec.conj())
        return self.lambda_sq * np.eye(self.target.dim) - proj


def optimize_witness(
    problem: WitnessOptimizationProblem, config: SolverConfig | None = None
) -> tuple[WitnessSpec, SolverReport]:
    """Fit witness coefficients by cutting planes on the positivity constraint.

    Each round solves a linear program over the accumulated eigenvector cuts
    (a relaxation, hence a lower bound on the objective), then repairs the
    iterate into a strictly feasible witness by an identity shift (an upper
    bound).  Iteration stops once the two bounds agree to ``config.cut_tol``;
    the certified model gap is returned as ``dual_residual``.  Raises
    :class:`OptimizationError` if no witness of the requested form exists.
    """
    cfg = config or SolverConfig()
    mats = np.stack([op.mat for op in problem.dense_basis])
    nb = mats.shape[0]
    dim = problem.target.dim
    wp = problem.projector_witness_matrix()
    psi = problem.target.vec

    t_vec = np.real(np.einsum("i,kij,j->k", psi.conj(), mats, psi))
    rho_noise = problem.noise.rho_noise.mat
    n_vec = np.real(np.einsum("kij,ji->k", mats, rho_noise))

    # identity expansion for the feasibility repair (requires 1 in the span)
    flats = mats.reshape(nb, -1)
    e_vec, *_ = np.linalg.lstsq(flats.T, np.eye(dim, dtype=complex).ravel(), rcond=None)
    e_vec = np.real(e_vec)
    residual = np.linalg.norm(flats.T @ e_vec - np.eye(dim).ravel())
    has_identity = residual < 1e-9 * math.sqrt(dim)

    obj = np.append(n_vec, 0.0)
    a_eq = np.append(t_vec, 0.0)[None, :]
    b_eq = np.array([-1.0])
    bounds = [(-1e3, 1e3)] * nb + [(0.0, 1e3)]
    cut_rows: list[np.ndarray] = []

    best_obj = math.inf
    best_point: tuple[np.ndarray, float] | None = None
    gap = math.inf
    lp_obj = -math.inf
    iterations = 0

    def add_cuts(vectors: np.ndarray) -> None:
        for col in range(vectors.shape[1]):
            v = vectors[:, col]
            row = np.empty(nb + 1)
            row[:nb] = np.real(np.einsum("i,kij,j->k", v.conj(), mats, v))
            row[nb] = -np.real(v.conj() @ (wp @ v))
            cut_rows.append(row)

    for _ in range(2000):
        a_ub = -np.array(cut_rows) if cut_rows else None
        b_ub = np.zeros(len(cut_rows)) if cut_rows else None
        res = linprog(
            obj, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
            method="highs",
        )
        iterations += 1
        if res.status == 2:
            raise OptimizationError(
                "no witness of the requested form exists: the normalization "
                "and positivity constraints are jointly infeasible"
            )
        if res.status != 0:
            raise OptimizationError(f"linear-program master failed: {res.message}")
        z = res.x
        lp_obj = float(res.fun)
        coeffs, alpha = z[:nb], z[nb]

        slack = _herm(np.tensordot(coeffs, mats, axes=(0, 0)) - alpha * wp)
        vals, vecs = np.linalg.eigh(slack)
        lam_min = float(vals[0])

        if lam_min >= -1e-12:
            cand_obj = float(n_vec @ coeffs)
            if cand_obj < best_obj:
                best_obj, best_point = cand_obj, (coeffs.copy(), float(alpha))
            gap = best_obj - lp_obj
            break

        add_cuts(vecs[:, vals < -1e-12][:, :4])

        if has_identity:
            delta = -lam_min + 1e-10 * max(1.0, float(np.linalg.norm(slack, 2)))
            if delta < 0.999:
                coeffs2 = (coeffs + delta * e_vec) / (1.0 - delta)
                alpha2 = alpha / (1.0 - delta)
                cand_obj = float(n_vec @ coeffs2)
                if cand_obj < best_obj:
                    best_obj, best_point = cand_obj, (coeffs2, alpha2)

        gap = best_obj - lp_obj
        if best_point is not None and gap <= cfg.cut_tol:
            break

    if best_point is None:
        raise OptimizationError(
            "cutting-plane witness fit found no feasible witness "
            f"(last positivity violation {lam_min:.3e})"
        )

    coeffs, alpha = best_point
    slack = _herm(np.tensordot(coeffs, mats, axes=(0, 0)) - alpha * wp)
    min_slack = float(np.linalg.eigvalsh(slack)[0])
    spec = WitnessSpec(
        name=problem.name,
        num_qubits=problem.num_qubits,
        basis=problem.basis,
        coefficients=tuple(float(c) for c in coeffs),
        target=problem.target,
        alpha=float(alpha),
        lambda_sq=problem.lambda_sq,
        alpha_source="optimized",
    )
    report = SolverReport(
        optimum=best_obj,
        primal_residual=float(abs(t_vec @ coeffs + 1.0)),
        dual_residual=float(gap),
        min_eig_slack=min_slack,
        iterations=iterations,
        converged=bool(gap <= cfg.cut_tol),
    )
    return spec, report


# ---------------------------------------------------------------------------
# PPT maximization (interior point)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PptProblem:
    """Maximize ``Tr(M rho)`` over states PPT across one bipartition.

    ``bipartition`` lists the qubits (1-based) of one part; the partial
    transpose acts on that part.  Dense spectra limit the solver to at most
    8 qubits.
    """

    objective: DenseOperator
    bipartition: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.objective.is_hermitian(1e-10):
            raise ValueError("PPT objective must be Hermitian")
        n = self.objective.num_qubits
        if n > 8:
            raise ValueError("PPT maximization is limited to 8 qubits")
        part = tuple(sorted(set(int(q) for q in self.bipartition)))
        if not part or len(part) >= n or any(q < 1 or q > n for q in part):
            raise ValueError(f"bipartition {part} is not a proper subset of 1..{n}")
        object.__setattr__(self, "bipartition", part)


class PptResult(NamedTuple):
    value: float
    rho: DenseOperator
    report: SolverReport


class PptScanResult(NamedTuple):
    value: float
    bipartition: tuple[int, ...]
    rho: DenseOperator
    report: SolverReport


class BisepResult(NamedTuple):
    value: float
    bipartition: tuple[int, ...]


def _part_classes(part_size: int) -> list[PauliClass]:
    return [
        PauliClass(i, j, m)
        for i in range(part_size + 1)
        for j in range(part_size - i + 1)
        for m in range(part_size - i - j + 1)
    ]


@lru_cache(maxsize=8)
def _pi_commutant_basis(num_qubits: int, part_size: int):
    """Hermitian basis of operators invariant under permutations within each part.

    Elements are products (class sum on the first ``part_size`` qubits) x
    (class sum on the rest); they are mutually orthogonal, and the partial
    transpose of the first part acts diagonally with sign ``(-1)^j`` where
    ``j`` counts sigma_y factors in the first-part class.
    """
    p, q = part_size, num_qubits - part_size
    a_cls = _part_classes(p)
    b_cls = _part_classes(q)
    a_mats = [c.realization(p).mat for c in a_cls]
    b_mats = [c.realization(q).mat for c in b_cls]
    elems = np.stack([np.kron(am, bm) for am in a_mats for bm in b_mats])
    signs = np.array(
        [(-1.0) ** ca.j for ca in a_cls for _ in b_cls], dtype=float
    )
    elems.setflags(write=False)
    signs.setflags(write=False)
    return elems, signs


@lru_cache(maxsize=4)
def _hermitian_basis(dim: int):
    """Orthonormal Hermitian basis of the full matrix space (for small dims)."""
    elems = np.zeros((dim * dim, dim, dim), dtype=complex)
    idx = 0
    for k in range(dim):
        elems[idx, k, k] = 1.0
        idx += 1
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for k in range(dim):
        for l in range(k + 1, dim):
            elems[idx, k, l] = inv_sqrt2
            elems[idx, l, k] = inv_sqrt2
            idx += 1
            elems[idx, k, l] = 1j * inv_sqrt2
            elems[idx, l, k] = -1j * inv_sqrt2
            idx += 1
    elems.setflags(write=False)
    return elems


def _batched_pt_front(elems: np.ndarray, dim_a: int) -> np.ndarray:
    """Partial transpose of the leading ``dim_a`` factor for a stack of matrices."""
    nb, dim, _ = elems.shape
    dim_b = dim // dim_a
    arr = elems.reshape(nb, dim_a, dim_b, dim_a, dim_b)
    return arr.transpose(0, 3, 2, 1, 4).reshape(nb, dim, dim)


def _logdet_pd(mat: np.ndarray) -> float | None:
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        return None
    return 2.0 * float(np.sum(np.log(np.real(np.diag(chol)))))


def _barrier_maximize(
    m_mat: np.ndarray,
    elems: np.ndarray,
    signs: np.ndarray | None,
    pt_elems: np.ndarray | None,
    cfg: SolverConfig,
) -> tuple[np.ndarray, SolverReport]:
    """Log-barrier interior point for max Tr(M rho), rho and rho^PT both PSD.

    The state is parameterized as ``rho = sum_k x_k E_k`` over the Hermitian
    basis ``elems``; the partial transpose is either diagonal in that basis
    (``signs``) or given explicitly (``pt_elems``).  Follows the central path
    mu = 1, 0.1, ... down to ``cfg.barrier_tol`` with damped Newton steps; the
    final duality gap is bounded by ``2 * dim * mu``.
    """
    nb, dim, _ = elems.shape
    e_flat = elems.reshape(nb, -1)
    ec = e_flat.conj()
    m_vec = np.real(ec @ m_mat.ravel())
    a_vec = np.real(np.trace(elems, axis1=1, axis2=2))
    if pt_elems is not None:
        gc = pt_elems.reshape(nb, -1).conj()

    gram = np.real(ec @ e_flat.T)
    x = np.linalg.solve(gram, a_vec / dim)
    rho0 = np.tensordot(x, elems, axes=(0, 0))
    if np.linalg.norm(rho0 - np.eye(dim) / dim) > 1e-9:
        raise OptimizationError("identity is not in the span of the state basis")

    def parts_of(vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rho = _herm(np.tensordot(vec, elems, axes=(0, 0)))
        if signs is not None:
            rho_pt = _herm(np.tensordot(vec * signs, elems, axes=(0, 0)))
        else:
            rho_pt = _herm(np.tensordot(vec, pt_elems, axes=(0, 0)))
        return rho, rho_pt

    def f_of(vec: np.ndarray, t: float) -> float | None:
        rho, rho_pt = parts_of(vec)
        ld1 = _logdet_pd(rho)
        if ld1 is None:
            return None
        ld2 = _logdet_pd(rho_pt)
        if ld2 is None:
            return None
        return -t * float(m_vec @ vec) - ld1 - ld2

    total_newton = 0
    converged = True
    mu = 1.0
    while True:
        t = 1.0 / mu
        f_x = f_of(x, t)
        dec = math.inf
        for _ in range(60):
            rho, rho_pt = parts_of(x)
            prec = _herm(np.linalg.inv(rho))
            prec_pt = _herm(np.linalg.inv(rho_pt))
            grad = -t * m_vec - np.real(ec @ prec.ravel())
            if signs is not None:
                grad -= signs * np.real(ec @ prec_pt.ravel())
            else:
                grad -= np.real(gc @ prec_pt.ravel())

            f1 = np.matmul(np.matmul(prec, elems), prec)
            hess = np.real(f1.reshape(nb, -1) @ ec.T)
            if signs is not None:
                f2 = np.matmul(np.matmul(prec_pt, elems), prec_pt)
                hess += np.outer(signs, signs) * np.real(f2.reshape(nb, -1) @ ec.T)
            else:
                f2 = np.matmul(np.matmul(prec_pt, pt_elems), prec_pt)
                hess += np.real(f2.reshape(nb, -1) @ gc.T)
            hess = (hess + hess.T) / 2.0

            kkt = np.zeros((nb + 1, nb + 1))
            kkt[:nb, :nb] = hess
            kkt[:nb, nb] = a_vec
            kkt[nb, :nb] = a_vec
            rhs = np.append(-grad, 0.0)
            try:
                sol = np.linalg.solve(kkt, rhs)
            except np.linalg.LinAlgError:
                sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
            dx = sol[:nb]
            dec = float(-grad @ dx)
            if not math.isfinite(dec) or dec < 0:
                break
            if dec <= 2e-9:
                break

            step = 1.0
            accepted = False
            for _ in range(60):
                x_new = x + step * dx
                f_new = f_of(x_new, t)
                if f_new is not None and f_new <= f_x - 0.25 * step * dec:
                    x, f_x = x_new, f_new
                    accepted = True
                    break
                step *= 0.5
            total_newton += 1
            if not accepted:
                break
        if dec > 1e-5:
            converged = False
        if mu <= cfg.barrier_tol * (1.0 + 1e-12):
            break
        mu = max(mu / 10.0, cfg.barrier_tol)

    x = x / float(a_vec @ x)  # remove the accumulated unit-trace drift
    rho, rho_pt = parts_of(x)
    min_slack = float(
        min(np.linalg.eigvalsh(rho)[0], np.linalg.eigvalsh(rho_pt)[0])
    )
    report = SolverReport(
        optimum=float(m_vec @ x),
        primal_residual=float(abs(a_vec @ x - 1.0)),
        dual_residual=float(2.0 * dim * mu),
        min_eig_slack=min_slack,
        iterations=total_newton,
        converged=converged,
    )
    return x, report


def _front_permutation(part: tuple[int, ...], num_qubits: int):
    """Permutation sending the part qubits to slots 1..k, and its inverse."""
    dest = {}
    slot = 1
    for q in part:
        dest[q] = slot
        slot += 1
    for q in range(1, num_qubits + 1):
        if q not in dest:
            dest[q] = slot
            slot += 1
    perm = tuple(dest[q] for q in range(1, num_qubits + 1))
    inverse = [0] * num_qubits
    for q in range(1, num_qubits + 1):
        inverse[perm[q - 1] - 1] = q
    return perm, tuple(inverse)


def max_ppt(problem: PptProblem, config: SolverConfig | None = None) -> PptResult:
    """Maximum of ``Tr(M rho)`` over PPT states for one bipartition.

    Permutation-invariant objectives are solved in the two-part symmetrized
    operator basis regardless of which qubits form the part (any part of the
    same size gives the same value); other objectives fall back to the full
    Hermitian basis, which is practical up to 5 qubits.
    """
    cfg = config or SolverConfig()
    m = problem.objective
    n = m.num_qubits
    part = problem.bipartition
    k = len(part)
    prefix = tuple(range(1, k + 1))
    pi = is_permutation_invariant(m)

    if pi:
        elems, signs = _pi_commutant_basis(n, k)
        x, report = _barrier_maximize(_herm(m.mat), elems, signs, None, cfg)
        rho_mat = _herm(np.tensordot(x, elems, axes=(0, 0)))
        rho = DenseOperator(rho_mat)
        if part != prefix:
            _, inverse = _front_permutation(part, n)
            rho = permute_qubits(rho, inverse)
    else:
        if n > 5:
            raise OptimizationError(
                "dense PPT maximization without permutation symmetry is "
                "limited to 5 qubits"
            )
        m_mat = m.mat
        if part != prefix:
            perm, inverse = _front_permutation(part, n)
            m_mat = permute_qubits(m, perm).mat
        elems = _hermitian_basis(2**n)
        pt_elems = _batched_pt_front(elems, 2**k)
        x, report = _barrier_maximize(_herm(m_mat), elems, None, pt_elems, cfg)
        rho_mat = _herm(np.tensordot(x, elems, axes=(0, 0)))
        rho = DenseOperator(rho_mat)
        if part != prefix:
            rho = permute_qubits(rho, inverse)
    return PptResult(value=report.optimum, rho=rho, report=report)


def _bipartitions(num_qubits: int, permutation_invariant: bool) -> list[tuple[int, ...]]:
    """Each unordered bipartition once; only part sizes matter in the PI case."""
    n = num_qubits
    if permutation_invariant:
        return [tuple(range(1, k + 1)) for k in range(1, n // 2 + 1)]
    parts = []
    for k in range(1, n // 2 + 1):
        for combo in itertools.combinations(range(1, n + 1), k):
            if 2 * k == n and combo[0] != 1:
                continue
            parts.append(combo)
    return parts


def max_ppt_all(
    objective: DenseOperator, config: SolverConfig | None = None
) -> PptScanResult:
    """Maximum of ``Tr(M rho)`` over states PPT across at least one bipartition.

    States that mix over bipartitions cannot exceed the best single
    bipartition for a linear objective, so the scan over bipartitions is
    exact.  Ties are resolved to the first bipartition in scan order
    (ascending part size, lexicographic within a size).
    """
    cfg = config or SolverConfig()
    best: PptScanResult | None = None
    for part in _bipartitions(objective.num_qubits, is_permutation_invariant(objective)):
        result = max_ppt(PptProblem(objective, part), cfg)
        if best is None or result.value > best.value:
            best = PptScanResult(result.value, part, result.rho, result.report)
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# product-state searches (lower bounds)
# ---------------------------------------------------------------------------


def _seesaw_once(
    m_tensor: np.ndarray,
    dim_b: int,
    rng: np.random.Generator,
    tol: float,
    max_iters: int,
) -> float:
    vec_b = rng.standard_normal(dim_b) + 1j * rng.standard_normal(dim_b)
    vec_b /= np.linalg.norm(vec_b)
    value = -math.inf
    for _ in range(max_iters):
        m_a = np.einsum("ijkl,j,l->ik", m_tensor, vec_b.conj(), vec_b)
        vals, vecs = np.linalg.eigh(m_a)
        vec_a = vecs[:, -1]
        m_b = np.einsum("ijkl,i,k->jl", m_tensor, vec_a.conj(), vec_a)
        vals, vecs = np.linalg.eigh(m_b)
        vec_b = vecs[:, -1]
        new_value = float(vals[-1])
        if new_value - value <= tol:
            value = max(value, new_value)
            break
        value = new_value
    return value


def max_bisep_seesaw(
    objective: DenseOperator,
    bipartition,
    restarts: int | None = None,
    tol: float | None = None,
    config: SolverConfig | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Best product-state value ``max <a(x)b| M |a(x)b>`` across one bipartition.

    Alternates exact eigenvector updates of the two factors from random
    (Haar-uniform) starts; each pass is monotonically nondecreasing, so the
    final value is a certified lower bound on the biseparable maximum.
    """
    cfg = config or SolverConfig()
    if restarts is None:
        restarts = cfg.seesaw_restarts
    if tol is None:
        tol = cfg.seesaw_tol
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    n = objective.num_qubits
    part = tuple(sorted(set(int(q) for q in bipartition)))
    if not part or len(part) >= n or any(q < 1 or q > n for q in part):
        raise ValueError(f"bipartition {part} is not a proper subset of 1..{n}")
    prefix = tuple(range(1, len(part) + 1))
    m = objective
    if part != prefix:
        perm, _ = _front_permutation(part, n)
        m = permute_qubits(objective, perm)
    dim_a = 2 ** len(part)
    dim_b = 2 ** (n - len(part))
    m_tensor = m.mat.reshape(dim_a, dim_b, dim_a, dim_b)
    best = -math.inf
    for _ in range(restarts):
        best = max(best, _seesaw_once(m_tensor, dim_b, rng, tol, 2000))
    return best


def max_bisep_all(
    objective: DenseOperator,
    restarts: int | None = None,
    tol: float | None = None,
    config: SolverConfig | None = None,
) -> BisepResult:
    """Best product-state value over all bipartitions, with the achiever.

    Mixtures of biseparable states cannot exceed the best pure product state
    for a linear objective, so this lower-bounds the biseparable maximum and
    is tight when the seesaw finds the global optimum for each split.
    """
    cfg = config or SolverConfig()
    best_value = -math.inf
    best_part: tuple[int, ...] | None = None
    parts = _bipartitions(objective.num_qubits, is_permutation_invariant(objective))
    for index, part in enumerate(parts):
        rng = np.random.default_rng(cfg.seed + index)
        value = max_bisep_seesaw(
            objective, part, restarts=restarts, tol=tol, config=cfg, rng=rng
        )
        if value > best_value:
            best_value, best_part = value, part
    assert best_part is not None
    return BisepResult(value=best_value, bipartition=best_part)


def max_symmetric_product(
    objective: DenseOperator,
    restarts: int | None = None,
    tol: float | None = None,
    config: SolverConfig | None = None,
) -> float:
    """Maximum of ``<a^(x)N| M |a^(x)N>`` over identical single-qubit states.

    Parameterizes the qubit by Bloch angles and runs Nelder-Mead from
    seeded random starts; the best value found is returned.
    """
    cfg = config or SolverConfig()
    if restarts is None:
        restarts = cfg.seesaw_restarts
    if tol is None:
        tol = max(cfg.seesaw_tol, 1e-14)
    n = objective.num_qubits
    mat = objective.mat
    rng = np.random.default_rng(cfg.seed)

    def negated(angles: np.ndarray) -> float:
        theta, phi = angles
        qubit = np.array(
            [math.cos(theta / 2.0), np.exp(1j * phi) * math.sin(theta / 2.0)]
        )
        state = reduce(np.kron, [qubit] * n)
        return -float(np.real(state.conj() @ (mat @ state)))

    best = -math.inf
    for _ in range(restarts):
        theta0 = math.acos(rng.uniform(-1.0, 1.0))
        phi0 = rng.uniform(0.0, 2.0 * math.pi)
        res = minimize(
            negated,
            np.array([theta0, phi0]),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": tol, "maxiter": 2000},
        )
        best = max(best, -float(res.fun))
    return best


# ---------------------------------------------------------------------------
# q scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QScanResult:
    """Rows ``(q, c_q, tolerance)`` plus the tolerance-maximizing row.

    Ties resolve to the earliest grid point.  A row's tolerance is 0 when the
    witness with that ``q`` does not detect the target at all (``c_q`` at
    least the target expectation).
    """

    rows: np.ndarray
    opt_index: int
    q_opt: float
    c_opt: float
    tolerance_opt: float


def q_scan(
    num_qubits: int,
    excitations: int,
    q_grid,
    config: SolverConfig | None = None,
) -> QScanResult:
    """Scan the penalty strength q of the witness family
    ``c_q - (J_x^2 + J_y^2 - q (J_z - <J_z>)^2)`` for a Dicke target.

    For each q the constant ``c_q`` is the PPT maximum of the bracketed
    operator over all bipartitions, and the white-noise tolerance of the
    resulting witness is recorded.
    """
    cfg = config or SolverConfig()
    target = dicke(num_qubits, excitations)
    rho_t = target.density()
    dim = 2**num_qubits
    jx2 = op_power(collective_j(num_qubits, "x"), 2)
    jy2 = op_power(collective_j(num_qubits, "y"), 2)
    jz = collective_j(num_qubits, "z")
    jz_mean = float(np.real(jz.expectation(target)))
    penalty = op_power(jz - jz_mean * identity(num_qubits), 2)

    rows = []
    for q in q_grid:
        q = float(q)
        if q < 0:
            raise ValueError("q must be nonnegative")
        m = jx2 + jy2 - q * penalty if q else jx2 + jy2
        c_q = max_ppt_all(m, cfg).value
        value_target = c_q - float(np.real(m.expectation(rho_t)))
        value_white = c_q - float(np.real(m.trace())) / dim
        if value_target < 0 and value_white > value_target:
            tolerance = min(1.0, value_target / (value_target - value_white))
        else:
            tolerance = 0.0
        rows.append((q, c_q, tolerance))

    arr = np.array(rows, dtype=float)
    opt = int(np.argmax(arr[:, 2]))
    return QScanResult(
        rows=arr,
        opt_index=opt,
        q_opt=float(arr[opt, 0]),
        c_opt=float(arr[opt, 1]),
        tolerance_opt=float(arr[opt, 2]),
    )
