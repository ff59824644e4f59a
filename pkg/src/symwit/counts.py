"""Measurement-count simulation and witness evaluation from counts.

Count data is newline-delimited JSON (NDJSON), one line per observed outcome
pattern::

    {"setting": [0, 1, 1], "outcomes": "++-+-+", "count": 17}

``setting`` is the measurement direction n shared by all qubits (each qubit
measures n . sigma); ``outcomes`` holds one character per qubit, first
character = qubit 1, with ``+`` marking the +1 eigenvalue along the canonical
direction (gcd-reduced, first nonzero component positive); ``count`` is the
number of shots that produced the pattern.  Directions supplied with the
opposite sign are canonicalized on load and the outcome characters flipped,
so files may use either sign convention.

A schedule term ``coefficient * (scale * (n . sigma) + w * 1)^{(x) N}`` has
the unbiased single-shot estimator ``coefficient * prod_k (w + scale * o_k)``
with ``o_k = +-1`` the outcome of qubit ``k``; statistical errors come from a
per-setting multinomial bootstrap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .compiler import LocalTerm, Schedule, Setting, compile_operator
from .linalg import DenseOperator, StateVector, _SIGMA
from .witnesses import WitnessSpec

__all__ = [
    "CountRecord",
    "CountsDataset",
    "TermEstimate",
    "EvaluationResult",
    "simulate_counts",
    "evaluate_counts",
    "evaluate_witness_counts",
]


@dataclass(frozen=True)
class CountRecord:
    """One NDJSON line: a setting, an outcome pattern, and its multiplicity."""

    setting: Setting
    outcomes: str
    count: int

    def __post_init__(self) -> None:
        if not self.outcomes or any(ch not in "+-" for ch in self.outcomes):
            raise ValueError(f"outcomes must be a nonempty +/- string, got {self.outcomes!r}")
        if self.count < 0:
            raise ValueError("count must be nonnegative")

    def json_line(self) -> str:
        return json.dumps(
            {
                "setting": self.setting.json_entry(),
                "outcomes": self.outcomes,
                "count": int(self.count),
            },
            separators=(", ", ": "),
        )


@dataclass(frozen=True)
class CountsDataset:
    """A collection of count records over a fixed qubit number."""

    num_qubits: int
    records: tuple[CountRecord, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        for rec in self.records:
            if len(rec.outcomes) != self.num_qubits:
                raise ValueError(
                    f"outcome string {rec.outcomes!r} does not have {self.num_qubits} characters"
                )

    def grouped(self) -> list[tuple[Setting, list[str], np.ndarray]]:
        """Aggregate records per distinct setting, in first-appearance order.

        Returns ``(setting, outcome_patterns, counts)`` triples with duplicate
        patterns merged; the order defines the bootstrap task index.
        """
        groups: list[tuple[Setting, dict]] = []
        for rec in self.records:
            for setting, table in groups:
                if setting.matches(rec.setting):
                    table[rec.outcomes] = table.get(rec.outcomes, 0) + rec.count
                    break
            else:
                groups.append((rec.setting, {rec.outcomes: rec.count}))
        return [
            (setting, list(table.keys()), np.array(list(table.values()), dtype=np.int64))
            for setting, table in groups
        ]

    def total_shots(self) -> int:
        return int(sum(rec.count for rec in self.records))

    # -- NDJSON ----------------------------------------------------------
    def to_ndjson(self) -> str:
        return "".join(rec.json_line() + "\n" for rec in self.records)

    @classmethod
    def from_ndjson(cls, text: str) -> "CountsDataset":
        records = []
        num_qubits = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
                raw = [float(v) for v in entry["setting"]]
                outcomes = str(entry["outcomes"])
                count = int(entry["count"])
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise ValueError(f"malformed counts record on line {lineno}: {exc}") from None
            if len(raw) != 3:
                raise ValueError(f"setting on line {lineno} must have 3 components")
            if all(abs(v - round(v)) < 1e-9 for v in raw):
                setting = Setting.from_ints([round(v) for v in raw])
            else:
                setting = Setting.from_vector(raw)
            # canonicalization may flip the direction; flip outcomes to match
            if sum(a * u for a, u in zip(raw, setting.unit)) < 0:
                outcomes = outcomes.translate(str.maketrans("+-", "-+"))
            if num_qubits is None:
                num_qubits = len(outcomes)
            records.append(CountRecord(setting, outcomes, count))
        if num_qubits is None:
            raise ValueError("counts data contains no records")
        return cls(num_qubits, tuple(records))


@dataclass(frozen=True)
class TermEstimate:
    """Estimated contribution of one schedule term to the total."""

    setting: tuple | None
    scale: float
    identity_weight: float
    coefficient: float
    mean: float
    contribution: float

    def to_json(self) -> dict:
        return {
            "setting": list(self.setting) if self.setting is not None else None,
            "scale": self.scale,
            "identity_weight": self.identity_weight,
            "coefficient": self.coefficient,
            "mean": self.mean,
            "contribution": self.contribution,
        }


@dataclass(frozen=True)
class EvaluationResult:
    """Witness value estimated from counts, with bootstrap errors.

    ``per_term`` sums exactly to ``witness_value``; the fidelity fields are
    filled only when the evaluated object carries a positivity certificate
    (``alpha`` and ``lambda_sq``).
    """

    witness_value: float
    standard_error: float
    fidelity_bound: float | None
    fidelity_bound_error: float | None
    per_term: tuple[TermEstimate, ...]

    def to_json(self) -> dict:
        return {
            "witness_value": self.witness_value,
            "standard_error": self.standard_error,
            "fidelity_bound": self.fidelity_bound,
            "fidelity_bound_error": self.fidelity_bound_error,
            "per_term": [t.to_json() for t in self.per_term],
        }


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------


def _measurement_frame(setting: Setting) -> np.ndarray:
    """Columns: the +1 and -1 eigenvectors of ``n . sigma`` for the unit n."""
    ux, uy, uz = setting.unit
    mat = ux * _SIGMA["x"] + uy * _SIGMA["y"] + uz * _SIGMA["z"]
    vals, vecs = np.linalg.eigh(mat)  # ascending: -1 then +1
    return vecs[:, ::-1]


def _rotate_state(vec: np.ndarray, frame_dag: np.ndarray, num_qubits: int) -> np.ndarray:
    out = vec
    for k in range(num_qubits):
        shaped = out.reshape(2**k, 2, 2 ** (num_qubits - 1 - k))
        out = np.einsum("ab,ibj->iaj", frame_dag, shaped).reshape(-1)
    return out

def _born_probabilities(
    state: StateVector | DenseOperator, setting: Setting, num_qubits: int
) -> np.ndarray:
    frame = _measurement_frame(setting)
    if isinstance(state, StateVector):
        amps = _rotate_state(state.vec, frame.conj().T, num_qubits)
        probs = np.abs(amps) ** 2
    else:
        full = reduce(np.kron, [frame] * num_qubits)
        half = full.conj().T @ state.mat
        probs = np.real(np.einsum("bj,jb->b", half, full))
    probs = np.clip(probs, 0.0, None)
    total = float(probs.sum())
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"outcome probabilities sum to {total}, not 1")
    return probs / total


def _outcome_string(index: int, num_qubits: int) -> str:
    return "".join(
        "+" if (index >> (num_qubits - 1 - k)) & 1 == 0 else "-"
        for k in range(num_qubits)
    )


def simulate_counts(
    state: StateVector | DenseOperator,
    schedule: Schedule,
    shots_per_setting: int,
    seed: int = 0,
) -> CountsDataset:
    """Sample measurement counts for every setting of a schedule.

    Each distinct setting is one task; task ``i`` draws ``shots_per_setting``
    multinomial samples from the Born distribution using an independent
    generator seeded with ``seed + i``, so tasks may be reproduced in
    isolation.
    """
    n = schedule.num_qubits
    dim = state.dim
    if dim != 2**n:
        raise ValueError("state dimension does not match the schedule")
    if isinstance(state, DenseOperator):
        if not state.is_hermitian(1e-10) or abs(state.trace() - 1.0) > 1e-9:
            raise ValueError("density matrix input must be Hermitian with unit trace")
    if shots_per_setting <= 0:
        raise ValueError("shots_per_setting must be positive")
    records = []
    for index, setting in enumerate(schedule.settings):
        probs = _born_probabilities(state, setting, n)
        rng = np.random.default_rng(seed + index)
        draws = rng.multinomial(shots_per_setting, probs)
        for basis_index in np.nonzero(draws)[0]:
            records.append(
                CountRecord(setting, _outcome_string(int(basis_index), n), int(draws[basis_index]))
            )
    return CountsDataset(n, tuple(records))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _term_factors(term: LocalTerm, patterns: list[str]) -> np.ndarray:
    """Per-pattern estimator ``prod_k (w + scale * o_k)`` for one term."""
    w = float(term.identity_weight)
    s = float(term.scale)
    out = np.empty(len(patterns))
    for i, pattern in enumerate(patterns):
        plus = pattern.count("+")
        out[i] = (w + s) ** plus * (w - s) ** (len(pattern) - plus)
    return out


def evaluate_counts(
    schedule: Schedule,
    dataset: CountsDataset,
    bootstrap_samples: int = 1000,
    seed: int = 0,
) -> EvaluationResult:
    """Estimate the schedule's observable from counts, with bootstrap errors.

    Every term is averaged against the empirical outcome distribution of its
    setting (exactly linear in the term coefficients); missing settings raise
    a :class:`ValueError`.  The standard error is the standard deviation over
    ``bootstrap_samples`` multinomial resamples, drawn per setting from a
    generator seeded with ``seed`` plus the setting's position in the data.
    """
    if dataset.num_qubits != schedule.num_qubits:
        raise ValueError("dataset and schedule disagree on the qubit number")
    groups = dataset.grouped()
    resamples: dict[int, np.ndarray] = {}
    totals = [int(counts.sum()) for _, _, counts in groups]

    def group_for(setting: Setting) -> int:
        for gi, (s, _, _) in enumerate(groups):
            if s.matches(setting):
                return gi
        raise ValueError(f"no counts found for setting {setting!r}")

    def resample(gi: int) -> np.ndarray:
        if gi not in resamples:
            _, _, counts = groups[gi]
            total = totals[gi]
            if total == 0:
                raise ValueError(f"setting {groups[gi][0]!r} has zero total shots")
            rng = np.random.default_rng(seed + gi)
            resamples[gi] = rng.multinomial(total, counts / total, size=bootstrap_samples)
        return resamples[gi]

    boot = np.zeros(max(bootstrap_samples, 1))
    per_term = []
    value = 0.0
    for term in schedule.terms:
        coeff = float(term.coefficient)
        if term.setting is None:
            mean = float(term.identity_weight) ** schedule.num_qubits
            contribution = coeff * mean
            boot += contribution
            per_term.append(
                TermEstimate(None, term.scale, term.identity_weight, coeff, mean, contribution)
            )
        else:
            gi = group_for(term.setting)
            _, patterns, counts = groups[gi]
            total = totals[gi]
            if total == 0:
                raise ValueError(f"setting {term.setting!r} has zero total shots")
            factors = _term_factors(term, patterns)
            mean = float(factors @ counts) / total
            contribution = coeff * mean
            if bootstrap_samples > 0:
                boot += coeff * (resample(gi) @ factors) / total
            per_term.append(
                TermEstimate(
                    tuple(term.setting.json_entry()),
                    term.scale,
                    term.identity_weight,
                    coeff,
                    mean,
                    contribution,
                )
            )
        value += contribution
    error = float(np.std(boot, ddof=1)) if bootstrap_samples > 1 else 0.0
    return EvaluationResult(
        witness_value=value,
        standard_error=error,
        fidelity_bound=None,
        fidelity_bound_error=None,
        per_term=tuple(per_term),
    )


def evaluate_witness_counts(
    witness: WitnessSpec,
    dataset: CountsDataset,
    schedule: Schedule | None = None,
    bootstrap_samples: int = 1000,
    seed: int = 0,
) -> EvaluationResult:
    """Evaluate a witness from counts and attach its fidelity bound.

    The witness is compiled into a measurement schedule unless one is given
    (pass the schedule used to take the data to keep term bookkeeping
    identical).  The fidelity bound ``lambda_sq - value / alpha`` and its
    propagated error are filled when the witness carries a certificate.
    """
    if schedule is None:
        schedule = compile_operator(witness.dense)
    base = evaluate_counts(schedule, dataset, bootstrap_samples=bootstrap_samples, seed=seed)
    if witness.alpha is None or witness.lambda_sq is None:
        return base
    bound = float(witness.lambda_sq) - base.witness_value / float(witness.alpha)
    bound_err = base.standard_error / float(witness.alpha)
    return EvaluationResult(
        witness_value=base.witness_value,
        standard_error=base.standard_error,
        fidelity_bound=bound,
        fidelity_bound_error=bound_err,
        per_term=base.per_term,
    )
