"""Monte Carlo triple-slit experiment.

Three slits (outcomes of ``a``) and three screen detectors (outcomes of
``b``). Frequencies are collected in eight independent runs:

* ``A``: detectors directly behind the slits, all slits open (estimates ``p_a``);
* ``C123``: all slits open, screen detectors (``p_b``);
* ``C1``, ``C2``, ``C3``: a single open slit (columns of ``cond``);
* ``C12``, ``C13``, ``C23``: two open slits (columns of ``pair_cond``).

Detectors are ideal and double clicks do not occur.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _jsonio
from .forward import QuantumInstance, generate
from .prob_model import PAIR_LABELS, ProbabilityData, _check_schema

CONTEXTS: tuple[str, ...] = ("A", "C123", "C1", "C2", "C3", "C12", "C13", "C23")


@dataclass(frozen=True)
class SlitExperimentPlan:
    instance: QuantumInstance
    samples_per_context: int
    seed: int = 0

    def __post_init__(self):
        if int(self.samples_per_context) < 1:
            raise ValueError("samples_per_context must be at least 1")


@dataclass(frozen=True, eq=False)
class FrequencyData:
    """Observed counts per context; ``data`` holds the matching frequencies."""

    data: ProbabilityData
    counts: dict

    def to_dict(self) -> dict:
        out = self.data.to_dict()
        out["counts"] = {k: [int(n) for n in v] for k, v in self.counts.items()}
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "FrequencyData":
        _check_schema(doc)
        counts = {k: np.asarray(doc["counts"][k], dtype=np.int64) for k in CONTEXTS}
        return frequencies_from_counts(counts)


def _context_distributions(exact: ProbabilityData) -> dict[str, np.ndarray]:
    dists = {"A": exact.p_a, "C123": exact.p_b}
    for i in range(3):
        dists[f"C{i + 1}"] = exact.cond[:, i]
    for p, lab in enumerate(PAIR_LABELS):
        dists[f"C{lab}"] = exact.pair_cond[:, p]
    return dists


def _normalized(p: np.ndarray) -> np.ndarray:
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    return p / p.sum()


def frequencies_from_counts(counts: dict) -> FrequencyData:
    """Rebuild frequencies as exact ratios of counts."""
    freq = {k: np.asarray(counts[k], dtype=float) / np.sum(counts[k]) for k in CONTEXTS}
    data = ProbabilityData(
        freq["C123"],
        freq["A"],
        np.column_stack([freq[f"C{i}"] for i in (1, 2, 3)]),
        np.column_stack([freq[f"C{lab}"] for lab in PAIR_LABELS]),
    )
    return FrequencyData(data, {k: np.asarray(counts[k], dtype=np.int64) for k in CONTEXTS})


def simulate(plan: SlitExperimentPlan) -> FrequencyData:
    """Draw ``samples_per_context`` detections in each context.

    Every context has its own random stream seeded by ``(seed, context
    number)``, so results are reproducible and contexts are independent.
    """
    exact = generate(plan.instance)
    dists = _context_distributions(exact)
    n = int(plan.samples_per_context)
    counts = {}
    for idx, name in enumerate(CONTEXTS):
        rng = np.random.default_rng([int(plan.seed), idx])
        counts[name] = rng.multinomial(n, _normalized(dists[name]))
    return frequencies_from_counts(counts)


def to_probability_data(freq: FrequencyData) -> ProbabilityData:
    return freq.data


def save_frequencies(freq: FrequencyData) -> str:
    return _jsonio.dumps(freq.to_dict())
