"""Witness-based classification of mod-ell Galois images from Frobenius data.

The classifier only sees conjugacy-invariant data: a stream of
(label, trace, det) triples. For a trace table over Q the label and the
determinant are both the prime p; synthetic streams drawn from GL2 lab
subgroups carry prime labels and the sampled element's determinant.

A Surjective verdict is a certificate. Every other verdict is a heuristic
flag that a larger trace bound may change.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import n_order

from exceptional_primes.core.config import settings
from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.enums import ImageVerdict
from exceptional_primes.services.arithmetic import (
    fundamental_part,
    kronecker,
    squares_table,
)
from exceptional_primes.services.exceptions import CharacterNotInSpan, EmptyTable
from exceptional_primes.services.frobenius_engine import TraceTable

logger = get_logger(__name__)

# Residue codes of projective_order_of_trace, vectorised.
_CLASS_ONE, _CLASS_TWO, _CLASS_THREE, _CLASS_FOUR, _CLASS_FIVE, _CLASS_LARGE = range(6)
_CLASS_NAMES = ("1-or-ell", "2", "3", "4", "5", ">5-or-ell")


@dataclass(frozen=True)
class FrobeniusStream:
    """Parallel arrays of labels, traces and determinants."""

    labels: np.ndarray
    traces: np.ndarray
    dets: np.ndarray
    det_surjective_known: bool = False

    def __post_init__(self) -> None:
        if not (len(self.labels) == len(self.traces) == len(self.dets)):
            raise ValueError("stream arrays must have equal length")

    def __len__(self) -> int:
        return len(self.labels)

    @classmethod
    def from_table(cls, table: TraceTable) -> "FrobeniusStream":
        primes = table.primes
        # Over Q the determinant is the cyclotomic character, always surjective.
        return cls(primes, table.traces, primes.copy(), det_surjective_known=True)

    @classmethod
    def from_triples(
        cls, triples: Iterable[tuple[int, int, int]], det_surjective_known: bool = False
    ) -> "FrobeniusStream":
        rows = list(triples)
        arr = np.array(rows, dtype=np.int64).reshape(len(rows), 3)
        return cls(
            arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), det_surjective_known
        )


@dataclass(frozen=True)
class WitnessSet:
    ell: int
    sampled: int
    w_irred: Optional[int]
    w_split: Optional[int]
    w_bigorder: Optional[int]
    zero_trace_primes: int
    det_surjective: bool
    nonsquare_disc_count: int = 0
    order_classes: tuple[str, ...] = ()

    @property
    def zero_trace_fraction(self) -> float:
        return self.zero_trace_primes / self.sampled if self.sampled else 0.0


@dataclass(frozen=True)
class CharacterSearch:
    """Outcome of the normalizer-character search at one ell."""

    searched: tuple[int, ...]
    matches: tuple[int, ...]
    insufficient: tuple[int, ...] = ()

    @property
    def character(self) -> Optional[int]:
        return self.matches[0] if len(self.matches) == 1 else None

    @property
    def ambiguous(self) -> bool:
        return len(self.matches) > 1 or (not self.matches and bool(self.insufficient))


@dataclass(frozen=True)
class ImageEntry:
    ell: int
    verdict: ImageVerdict
    witnesses: WitnessSet
    character: Optional[int] = None
    character_search: Optional[CharacterSearch] = None
    note: str = ""


@dataclass(frozen=True)
class ImageReport:
    entries: tuple[ImageEntry, ...]
    scan_bound: int
    trace_bound: int

    @property
    def candidates(self) -> tuple[ImageEntry, ...]:
        return tuple(e for e in self.entries if e.verdict.is_candidate)

    def entry(self, ell: int) -> Optional[ImageEntry]:
        return next((e for e in self.entries if e.ell == ell), None)


@dataclass(frozen=True)
class VExceptionalGroups:
    span: tuple[int, ...]
    groups: dict[int, list[int]] = field(default_factory=dict)
    not_in_span: tuple[tuple[int, int], ...] = ()


def character_span(basis: Sequence[int]) -> list[int]:
    """All products of basis discriminants, reduced to fundamental form."""
    span = {1}
    for d in basis:
        span |= {fundamental_part(s * d) for s in span}
    return sorted(span, key=lambda d: (abs(d), d))


def candidate_discriminants(additive_primes: Iterable[int]) -> list[int]:
    """Nontrivial fundamental discriminants unramified outside the additive set."""
    basis: list[int] = []
    for p in sorted(set(additive_primes)):
        if p == 2:
            basis.extend([-4, 8])
        else:
            basis.append(p if p % 4 == 1 else -p)
    return [d for d in character_span(basis) if d != 1]


def _inverse_table(ell: int) -> np.ndarray:
    inv = np.zeros(ell, dtype=np.int64)
    for x in range(1, ell):
        inv[x] = pow(x, -1, ell)
    return inv


def _order_classes(t: np.ndarray, q: np.ndarray, ell: int) -> np.ndarray:
    u = (t * t % ell) * _inverse_table(ell)[q] % ell
    five = (u * u - 3 * u + 1) % ell == 0
    return np.select(
        [u == 4 % ell, u == 0, u == 1, u == 2, five],
        [_CLASS_ONE, _CLASS_TWO, _CLASS_THREE, _CLASS_FOUR, _CLASS_FIVE],
        default=_CLASS_LARGE,
    )


def _dets_generate_units(dets: np.ndarray, ell: int) -> bool:
    values = sorted({int(d) for d in dets})
    if not values:
        return False
    lcm = 1
    for v in values:
        lcm = math.lcm(lcm, int(n_order(v, ell)))
    return lcm == ell - 1


class ImageClassifier:
    """Per-ell verdicts over one shared, immutable Frobenius stream."""

    def __init__(
        self,
        stream: FrobeniusStream,
        zero_fraction_window: Optional[tuple[float, float]] = None,
        min_inert_samples: Optional[int] = None,
    ):
        if len(stream) == 0:
            raise EmptyTable("cannot classify from an empty trace table")
        self.stream = stream
        self.zero_fraction_window = zero_fraction_window or (
            settings.normalizer_zero_fraction_low,
            settings.normalizer_zero_fraction_high,
        )
        self.min_inert_samples = (
            settings.character_min_inert_samples
            if min_inert_samples is None
            else min_inert_samples
        )
        self._kronecker_cache: dict[int, np.ndarray] = {}

    @classmethod
    def from_table(cls, table: TraceTable, **kwargs) -> "ImageClassifier":
        if len(table) == 0:
            raise EmptyTable(f"trace table for [{table.curve_id}] is empty")
        return cls(FrobeniusStream.from_table(table), **kwargs)

    def _usable(self, ell: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        s = self.stream
        q = s.dets % ell
        mask = (s.labels != ell) & (q != 0)
        if not mask.any():
            raise EmptyTable(f"no usable samples for ell={ell}")
        return s.labels[mask], s.traces[mask] % ell, q[mask]

    def collect_witnesses(self, ell: int) -> WitnessSet:
        """Smallest witness label for each fingerprint; zero-trace count."""
        labels, t, q = self._usable(ell)
        zero = int(np.count_nonzero(t == 0))
        det_ok = self.stream.det_surjective_known or _dets_generate_units(q, ell)

        if ell == 2:
            return WitnessSet(ell, len(labels), None, None, None, zero, det_ok)

        disc = (t * t - 4 * q) % ell
        square = squares_table(ell)[disc]
        nonzero = disc != 0
        traced = t != 0
        classes = _order_classes(t, q, ell)

        def smallest(mask: np.ndarray) -> Optional[int]:
            return int(labels[mask].min()) if mask.any() else None

        nonsquare = nonzero & ~square
        return WitnessSet(
            ell=ell,
            sampled=len(labels),
            w_irred=smallest(nonsquare & traced),
            w_split=smallest(nonzero & square & traced),
            w_bigorder=smallest(classes == _CLASS_LARGE),
            zero_trace_primes=zero,
            det_surjective=det_ok,
            nonsquare_disc_count=int(np.count_nonzero(nonsquare)),
            order_classes=tuple(_CLASS_NAMES[c] for c in sorted(set(classes.tolist()))),
        )

    @staticmethod
    def certify_surjective(w: WitnessSet) -> bool:
        """True certifies image = GL2(F_ell); False certifies nothing."""
        return (
            w.ell >= 5
            and w.w_irred is not None
            and w.w_split is not None
            and w.w_bigorder is not None
            and w.det_surjective
        )

    def detect_reducible(self, ell: int) -> bool:
        """Necessary condition for a reducible image: every char poly splits."""
        labels, t, q = self._usable(ell)
        if ell == 2:
            return bool(np.all(t == 0))
        disc = (t * t - 4 * q) % ell
        return bool(np.all((disc == 0) | squares_table(ell)[disc]))

    def _kronecker_values(self, d: int) -> np.ndarray:
        cached = self._kronecker_cache.get(d)
        if cached is None:
            cached = np.array(
                [kronecker(d, int(p)) for p in self.stream.labels], dtype=np.int64
            )
            self._kronecker_cache[d] = cached
        return cached

    def extract_normalizer_character(
        self, ell: int, additive_primes: Iterable[int]
    ) -> CharacterSearch:
        """Search characters D with (D/p) = -1 forcing a_p = 0 mod ell.

        The converse may fail at Cartan Frobenius of trace zero; up to
        max(2, 3 n_plus / ell) such primes are tolerated.
        """
        searched = candidate_discriminants(additive_primes)
        s = self.stream
        base = (s.labels != ell) & (s.dets % ell != 0)
        zero = (s.traces % ell) == 0

        matches: list[int] = []
        insufficient: list[int] = []
        for d in searched:
            kron = self._kronecker_values(d)
            usable = base & (kron != 0)
            inert = usable & (kron == -1)
            split = usable & (kron == 1)
            n_inert = int(np.count_nonzero(inert))
            if np.any(inert & ~zero):
                continue
            n_plus = int(np.count_nonzero(split))
            tolerated = max(2, 3 * n_plus / ell)
            if np.count_nonzero(split & zero) > tolerated:
                continue
            if n_inert < self.min_inert_samples:
                insufficient.append(d)
                continue
            matches.append(d)

        return CharacterSearch(tuple(searched), tuple(matches), tuple(insufficient))

    def classify(self, ell: int, additive_primes: Iterable[int] = ()) -> ImageEntry:
        """Surjective, then reducible, normalizer and irregular candidates."""
        w = self.collect_witnesses(ell)

        if ell in (2, 3):
            if self.detect_reducible(ell):
                return ImageEntry(
                    ell, ImageVerdict.REDUCIBLE_CANDIDATE, w, note="small-ell heuristic"
                )
            return ImageEntry(
                ell, ImageVerdict.UNDETERMINED, w, note="small ell is never certified"
            )

        if self.certify_surjective(w):
            return ImageEntry(
                ell, ImageVerdict.SURJECTIVE, w, note="certified by witnesses"
            )
        if self.detect_reducible(ell):
            return ImageEntry(
                ell,
                ImageVerdict.REDUCIBLE_CANDIDATE,
                w,
                note="all Frobenius discriminants are squares",
            )

        low, high = self.zero_fraction_window
        if low <= w.zero_trace_fraction <= high:
            search = self.extract_normalizer_character(ell, additive_primes)
            if search.character is not None:
                return ImageEntry(
                    ell,
                    ImageVerdict.NORMALIZER_CANDIDATE,
                    w,
                    character=search.character,
                    character_search=search,
                    note=(
                        f"zero-trace fraction {w.zero_trace_fraction:.4f} "
                        f"in [{low}, {high}]"
                    ),
                )
        else:
            search = None

        if w.w_bigorder is None:
            return ImageEntry(
                ell,
                ImageVerdict.IRREGULAR_CANDIDATE,
                w,
                character_search=search,
                note="no Frobenius of projective order above 5",
            )
        return ImageEntry(ell, ImageVerdict.UNDETERMINED, w, character_search=search)

    def classify_range(
        self, ells: Sequence[int], additive_primes: Iterable[int] = (), jobs: int = 1
    ) -> list[ImageEntry]:
        additive = frozenset(additive_primes)
        if jobs <= 1:
            return [self.classify(ell, additive) for ell in ells]
        # Warm shared caches before fanning out.
        for d in candidate_discriminants(additive):
            self._kronecker_values(d)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda ell: self.classify(ell, additive), ells))


def build_image_report(
    table: TraceTable,
    ells: Sequence[int],
    additive_primes: Iterable[int],
    scan_bound: int,
    jobs: int = 1,
) -> ImageReport:
    classifier = ImageClassifier.from_table(table)
    entries = classifier.classify_range(ells, additive_primes, jobs)
    report = ImageReport(tuple(entries), scan_bound, table.bound)
    logger.info(
        "Classified %d primes ell <= %d for [%s]: %d candidates",
        len(entries),
        scan_bound,
        table.curve_id,
        len(report.candidates),
    )
    return report


def v_exceptional_bookkeeping(
    entries: Iterable[ImageEntry], basis: Sequence[int]
) -> VExceptionalGroups:
    """Group normalizer candidates by character, restricted to span(basis)."""
    span = character_span(basis)
    members = set(span)
    groups: dict[int, list[int]] = {}
    outside: list[tuple[int, int]] = []
    for entry in entries:
        if entry.verdict is not ImageVerdict.NORMALIZER_CANDIDATE:
            continue
        if entry.character is None:
            continue
        d = fundamental_part(entry.character)
        if d in members:
            groups.setdefault(d, []).append(entry.ell)
        else:
            outside.append((entry.ell, d))
            err = CharacterNotInSpan(
                f"character {d} at ell={entry.ell} is outside the given space",
                detail=f"span = {span}",
            )
            logger.warning("%s (%s)", err.message, err.detail)
    grouped = {d: sorted(v) for d, v in sorted(groups.items())}
    return VExceptionalGroups(tuple(span), grouped, tuple(outside))
