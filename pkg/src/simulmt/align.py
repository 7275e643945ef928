"""Word alignment with a diagonal-reparameterized IBM Model 2.

EM estimates lexical translation probabilities P(target | source) under a
fixed positional prior proportional to exp(-lambda * |t/m - j/n|), plus a
null cell carrying p_null mass. Viterbi links each target position to its
best source position (or to null, dropping the link).

Pharaoh files written/read here use the common 0-based "srcIdx-tgtIdx"
convention, one sentence per line; internally positions are 1-based.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import SentencePair
from .errors import DataError

NULL_TOKEN = "<null>"

DEFAULT_LAMBDA = 4.0
DEFAULT_P_NULL = 0.08
LEXICAL_FLOOR = 1e-7


@dataclass(frozen=True)
class AlignmentSet:
    """Links (t, j): target position t aligned to source position j, 1-based."""

    links: frozenset[tuple[int, int]]
    source_len: int
    target_len: int

    def __post_init__(self):
        if self.source_len < 1 or self.target_len < 1:
            raise ValueError("alignment needs positive sentence lengths")
        for t, j in self.links:
            if not (1 <= t <= self.target_len and 1 <= j <= self.source_len):
                raise ValueError(
                    f"link ({t},{j}) outside {self.source_len}x{self.target_len} grid"
                )


@dataclass(frozen=True)
class TranslationTable:
    """Lexical probabilities keyed by (source token, target token).

    Probabilities for each source token sum to 1 over the target tokens it
    was observed with. `log_likelihoods` holds the corpus log-likelihood
    evaluated at the start of each EM iteration.
    """

    probs: dict[tuple[str, str], float]
    log_likelihoods: tuple[float, ...] = ()

    def prob(self, source_token: str, target_token: str, floor: float = LEXICAL_FLOOR) -> float:
        return self.probs.get((source_token, target_token), floor)


def _positional_priors(target_len: int, source_len: int, lam: float, p_null: float) -> list[list[float]]:
    """priors[t-1][j] for j = 0 (null) .. source_len; rows sum to 1."""
    rows = []
    for t in range(1, target_len + 1):
        weights = [
            math.exp(-lam * abs(t / target_len - j / source_len))
            for j in range(1, source_len + 1)
        ]
        total = sum(weights)
        rows.append([p_null] + [(1.0 - p_null) * w / total for w in weights])
    return rows


def em_align(
    pairs: Sequence[SentencePair],
    iterations: int,
    lam: float = DEFAULT_LAMBDA,
    p_null: float = DEFAULT_P_NULL,
) -> TranslationTable:
    """Run EM over per-target-position alignment variables.

    The positional prior is fixed (lambda is a hyperparameter, not learned),
    so the corpus log-likelihood is non-decreasing across iterations.
    """
    if not pairs:
        raise DataError("cannot run EM on an empty corpus")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    if not 0 <= p_null < 1:
        raise ValueError(f"p_null must be in [0,1), got {p_null}")

    # uniform init over the observed cooccurrences; null cooccurs with everything
    cooc: dict[str, set[str]] = defaultdict(set)
    for pair in pairs:
        for y in pair.target:
            cooc[NULL_TOKEN].add(y)
            for x in pair.source:
                cooc[x].add(y)
    probs: dict[tuple[str, str], float] = {}
    for x, ys in cooc.items():
        p0 = 1.0 / len(ys)
        for y in ys:
            probs[(x, y)] = p0

    priors_cache: dict[tuple[int, int], list[list[float]]] = {}
    log_likelihoods = []
    for _ in range(iterations):
        counts: dict[tuple[str, str], float] = defaultdict(float)
        ll = 0.0
        for pair in pairs:
            n, m = len(pair.source), len(pair.target)
            key = (m, n)
            if key not in priors_cache:
                priors_cache[key] = _positional_priors(m, n, lam, p_null)
            priors = priors_cache[key]
            for t, y in enumerate(pair.target, start=1):
                row = priors[t - 1]
                scores = [row[0] * probs[(NULL_TOKEN, y)]]
                for j, x in enumerate(pair.source, start=1):
                    scores.append(row[j] * probs[(x, y)])
                z = sum(scores)
                ll += math.log(z)
                counts[(NULL_TOKEN, y)] += scores[0] / z
                for j, x in enumerate(pair.source, start=1):
                    counts[(x, y)] += scores[j] / z
        log_likelihoods.append(ll)

        totals: dict[str, float] = defaultdict(float)
        for (x, _), c in counts.items():
            totals[x] += c
        probs = {(x, y): c / totals[x] for (x, y), c in counts.items()}

    return TranslationTable(probs, tuple(log_likelihoods))


def viterbi_align(
    pair: SentencePair,
    table: TranslationTable,
    lam: float = DEFAULT_LAMBDA,
    p_null: float = DEFAULT_P_NULL,
    floor: float = LEXICAL_FLOOR,
) -> AlignmentSet:
    """Link each target position to its argmax source position.

    Unseen token pairs fall back to `floor`. Ties between source positions go
    to the lowest index; the null cell wins only when strictly better than
    every source position (in which case the target position stays unlinked).
    """
    n, m = len(pair.source), len(pair.target)
    priors = _positional_priors(m, n, lam, p_null)
    links = set()
    for t, y in enumerate(pair.target, start=1):
        row = priors[t - 1]
        null_score = row[0] * table.prob(NULL_TOKEN, y, floor)
        best_j, best_score = None, -1.0
        for j, x in enumerate(pair.source, start=1):
            score = row[j] * table.prob(x, y, floor)
            if score > best_score:
                best_j, best_score = j, score
        if null_score > best_score:
            continue
        links.add((t, best_j))
    return AlignmentSet(frozenset(links), n, m)


def write_pharaoh(alignments: Iterable[AlignmentSet], path: str | Path) -> None:
    """One sentence per line, space-separated 0-based "srcIdx-tgtIdx" pairs."""
    with open(path, "w", encoding="utf-8") as fh:
        for aset in alignments:
            ordered = sorted(aset.links, key=lambda link: (link[0], link[1]))
            fh.write(" ".join(f"{j - 1}-{t - 1}" for t, j in ordered) + "\n")


def read_pharaoh(path: str | Path, pairs: Sequence[SentencePair]) -> list[AlignmentSet]:
    """Read 0-based "srcIdx-tgtIdx" lines, validated against `pairs` bounds."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if len(lines) != len(pairs):
        raise DataError(f"{path} has {len(lines)} lines for {len(pairs)} pairs")
    alignments = []
    for lineno, (line, pair) in enumerate(zip(lines, pairs), 1):
        links = set()
        for chunk in line.split():
            try:
                j_str, t_str = chunk.split("-")
                j, t = int(j_str) + 1, int(t_str) + 1
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad link {chunk!r}") from exc
            if not (1 <= j <= len(pair.source) and 1 <= t <= len(pair.target)):
                raise DataError(
                    f"{path}:{lineno}: link {chunk} outside "
                    f"{len(pair.source)}x{len(pair.target)} sentence"
                )
            links.add((t, j))
        alignments.append(AlignmentSet(frozenset(links), len(pair.source), len(pair.target)))
    return alignments
