"""Parallel corpus ingestion, length/ratio filtering, and BPE segmentation.

Inputs are pre-tokenized, whitespace-separated sentences (one per line,
UTF-8, aligned by line number). Case is preserved. Subword continuation
uses the "@@" marker convention; the end-of-word sentinel "</w>" is
internal to merge learning and never appears in output tokens.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError

WORD_END = "</w>"
CONTINUATION = "@@"


@dataclass(frozen=True)
class SentencePair:
    """One aligned sentence pair; tokens carry no whitespace."""

    id: int
    source: tuple[str, ...]
    target: tuple[str, ...]

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"pair id must be non-negative, got {self.id}")
        for side, toks in (("source", self.source), ("target", self.target)):
            if not toks:
                raise ValueError(f"pair {self.id}: empty {side} side")
            for tok in toks:
                if not tok or any(c.isspace() for c in tok):
                    raise ValueError(
                        f"pair {self.id}: bad {side} token {tok!r} (empty or whitespace)"
                    )


@dataclass(frozen=True)
class MergeTable:
    """Ordered BPE merge rules; rank is the position in the list."""

    rules: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(set(self.rules)) != len(self.rules):
            raise ValueError("duplicate merge rule in table")

    def __len__(self) -> int:
        return len(self.rules)


def make_pairs(sources: Iterable[Sequence[str]], targets: Iterable[Sequence[str]]) -> list[SentencePair]:
    src = [tuple(s) for s in sources]
    tgt = [tuple(t) for t in targets]
    if len(src) != len(tgt):
        raise DataError(f"side length mismatch: {len(src)} source vs {len(tgt)} target sentences")
    return [SentencePair(i, s, t) for i, (s, t) in enumerate(zip(src, tgt))]


def filter_pairs(pairs: Sequence[SentencePair], max_len: int = 175, max_ratio: float = 1.5) -> list[SentencePair]:
    """Keep pairs with both sides <= max_len tokens and length ratio <= max_ratio.

    The ratio is max(|x|/|y|, |y|/|x|); order is preserved and filtering is
    idempotent. An empty result is legal.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if max_ratio <= 0:
        raise ValueError(f"max_ratio must be > 0, got {max_ratio}")
    kept = []
    for p in pairs:
        n, m = len(p.source), len(p.target)
        if n > max_len or m > max_len:
            continue
        if max(n / m, m / n) > max_ratio:
            continue
        kept.append(p)
    return kept


def _word_symbols(word: str) -> tuple[str, ...]:
    return tuple(word) + (WORD_END,)


def _pair_counts(vocab: Counter) -> Counter:
    counts: Counter = Counter()
    for symbols, freq in vocab.items():
        for i in range(len(symbols) - 1):
            counts[(symbols[i], symbols[i + 1])] += freq
    return counts


def _merge_once(symbols: tuple[str, ...], pair: tuple[str, str]) -> tuple[str, ...]:
    # left-to-right, non-overlapping
    a, b = pair
    merged = a + b
    out = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == a and symbols[i + 1] == b:
            out.append(merged)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def bpe_learn(corpus: Sequence[Sequence[str]], num_merges: int) -> MergeTable:
    """Learn greedy most-frequent-pair merges over character-split words.

    Ties between equal-frequency pairs go to the lexicographically smallest
    pair (left symbol, then right), which makes learning deterministic.
    Stops early when no pair occurs at least twice.
    """
    if num_merges < 0:
        raise ValueError(f"num_merges must be >= 0, got {num_merges}")
    word_freq: Counter = Counter()
    for sent in corpus:
        word_freq.update(sent)
    if not word_freq:
        raise DataError("cannot learn BPE merges from an empty corpus")

    vocab: Counter = Counter()
    for word, freq in word_freq.items():
        vocab[_word_symbols(word)] += freq

    rules: list[tuple[str, str]] = []
    for _ in range(num_merges):
        counts = _pair_counts(vocab)
        if not counts:
            break
        best_count = max(counts.values())
        if best_count < 2:
            break
        best = min(p for p, c in counts.items() if c == best_count)
        rules.append(best)
        vocab = Counter({_merge_once(symbols, best): freq for symbols, freq in vocab.items()})
    return MergeTable(tuple(rules))


def bpe_apply(table: MergeTable, word: str) -> list[str]:
    """Segment one word, applying merges in rank order.

    All subwords but the last carry the "@@" continuation marker; stripping
    markers and concatenating always reproduces the input word.
    """
    if not word:
        raise ValueError("cannot segment an empty word")
    symbols = _word_symbols(word)
    for rule in table.rules:
        if len(symbols) == 1:
            break
        symbols = _merge_once(symbols, rule)
    pieces = list(symbols)
    if pieces[-1] == WORD_END:
        pieces.pop()
    elif pieces[-1].endswith(WORD_END):
        pieces[-1] = pieces[-1][: -len(WORD_END)]
    return [p + CONTINUATION for p in pieces[:-1]] + [pieces[-1]]


def segment_sentence(table: MergeTable, tokens: Sequence[str]) -> list[str]:
    """Apply BPE to every token of a sentence, flattening the result."""
    out: list[str] = []
    for tok in tokens:
        out.extend(bpe_apply(table, tok))
    return out


def desegment(tokens: Sequence[str]) -> list[str]:
    """Undo "@@ " segmentation, rejoining subwords into words."""
    words: list[str] = []
    buf = ""
    for tok in tokens:
        if tok.endswith(CONTINUATION):
            buf += tok[: -len(CONTINUATION)]
        else:
            words.append(buf + tok)
            buf = ""
    if buf:
        words.append(buf)
    return words


def read_tokenized(path: str | Path) -> list[tuple[str, ...]]:
    """Read one whitespace-tokenized sentence per line."""
    sents = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            sents.append(tuple(line.split()))
    return sents


def write_tokenized(path: str | Path, sentences: Iterable[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sent in sentences:
            fh.write(" ".join(sent) + "\n")


def read_parallel(source_path: str | Path, target_path: str | Path) -> list[SentencePair]:
    src = read_tokenized(source_path)
    tgt = read_tokenized(target_path)
    if len(src) != len(tgt):
        raise DataError(
            f"{source_path} has {len(src)} lines but {target_path} has {len(tgt)}"
        )
    pairs = []
    for i, (s, t) in enumerate(zip(src, tgt)):
        if not s or not t:
            raise DataError(f"line {i + 1}: empty sentence on one side")
        pairs.append(SentencePair(i, s, t))
    return pairs


def save_merge_table(table: MergeTable, path: str | Path) -> None:
    """One rule per line, "left right"; rank equals the line number."""
    with open(path, "w", encoding="utf-8") as fh:
        for left, right in table.rules:
            fh.write(f"{left} {right}\n")


def load_merge_table(path: str | Path) -> MergeTable:
    rules = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected 'left right', got {line!r}")
            rules.append((parts[0], parts[1]))
    return MergeTable(tuple(rules))
