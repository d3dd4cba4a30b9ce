"""Synthetic Frobenius streams drawn from GL2 lab subgroups.

These are the ground truth the image classifier is checked against: the
full (trace, det) multiset of a small subgroup, uniform samples of a large
one, and normalizer streams whose coset membership is planted by a
quadratic character.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from exceptional_primes.core.logging import get_logger
from exceptional_primes.models.enums import ImageVerdict, SubgroupFamilyKind
from exceptional_primes.services.arithmetic import kronecker, primes_up_to
from exceptional_primes.services.gl2_lab import (
    Mat2,
    SubgroupFamily,
    classify_subgroup,
    subgroup_families,
)
from exceptional_primes.services.image_classifier import (
    FrobeniusStream,
    ImageClassifier,
    ImageEntry,
)

logger = get_logger(__name__)

PLANTED_DISCRIMINANT = -4
PLANTED_ADDITIVE = frozenset({2})

NORMALIZER_KINDS = frozenset(
    {SubgroupFamilyKind.SPLIT_NORMALIZER, SubgroupFamilyKind.NONSPLIT_NORMALIZER}
)


def _label_primes(ell: int, exclude: Iterable[int] = ()) -> Iterator[int]:
    skip = set(exclude) | {ell}
    limit = 1024
    start = 0
    while True:
        primes = primes_up_to(limit)
        for p in primes[start:]:
            if int(p) not in skip:
                yield int(p)
        start = len(primes)
        limit *= 2


def element_stream(elements: Sequence[Mat2], ell: int) -> FrobeniusStream:
    """One triple per element, labelled by consecutive primes != ell."""
    labels = _label_primes(ell)
    return FrobeniusStream.from_triples(
        (next(labels), m.trace, m.det) for m in elements
    )


def sampled_stream(
    family: SubgroupFamily, rng: np.random.Generator, size: int
) -> FrobeniusStream:
    return element_stream([family.sample(rng) for _ in range(size)], family.ell)


def planted_normalizer_stream(
    family: SubgroupFamily,
    discriminant: int = PLANTED_DISCRIMINANT,
    elements: Optional[Sequence[Mat2]] = None,
) -> FrobeniusStream:
    """Cartan elements at primes split by D, the other coset at inert primes."""
    if family.kind not in NORMALIZER_KINDS:
        raise ValueError(f"{family.kind.value} has no line-swapping coset")
    pool = elements if elements is not None else family.elements_sorted
    in_cartan = [m for m in pool if family.in_cartan(m)]
    swapping = [m for m in pool if not family.in_cartan(m)]

    labels = _label_primes(family.ell)
    split_labels: list[int] = []
    inert_labels: list[int] = []
    while len(split_labels) < len(in_cartan) or len(inert_labels) < len(swapping):
        p = next(labels)
        k = kronecker(discriminant, p)
        if k == 1 and len(split_labels) < len(in_cartan):
            split_labels.append(p)
        elif k == -1 and len(inert_labels) < len(swapping):
            inert_labels.append(p)

    triples = [(p, m.trace, m.det) for p, m in zip(split_labels, in_cartan)]
    triples += [(p, m.trace, m.det) for p, m in zip(inert_labels, swapping)]
    triples.sort()
    return FrobeniusStream.from_triples(triples)


def planted_normalizer_sample(
    family: SubgroupFamily,
    rng: np.random.Generator,
    size: int,
    discriminant: int = PLANTED_DISCRIMINANT,
) -> FrobeniusStream:
    """Monte Carlo variant: each prime draws from the coset its character picks."""
    triples = []
    for p in _label_primes(family.ell):
        if len(triples) == size:
            break
        k = kronecker(discriminant, p)
        if k == 0:
            continue
        while True:
            m = family.sample(rng)
            if family.in_cartan(m) == (k == 1):
                break
        triples.append((p, m.trace, m.det))
    return FrobeniusStream.from_triples(triples)


def expected_verdicts(
    family: SubgroupFamily, stream: FrobeniusStream
) -> frozenset[ImageVerdict]:
    """Verdicts a sound classifier may return on the family's full multiset.

    Irregular images whose elements all have split characteristic
    polynomials look reducible from (trace, det) alone.
    """
    kind = family.kind
    if kind is SubgroupFamilyKind.GENERAL_LINEAR:
        return frozenset({ImageVerdict.SURJECTIVE})
    if kind in (SubgroupFamilyKind.BOREL, SubgroupFamilyKind.SPLIT_CARTAN):
        return frozenset({ImageVerdict.REDUCIBLE_CANDIDATE})
    if kind is SubgroupFamilyKind.NONSPLIT_CARTAN:
        return frozenset({ImageVerdict.UNDETERMINED})
    if kind in NORMALIZER_KINDS:
        return frozenset({ImageVerdict.NORMALIZER_CANDIDATE})
    if kind is SubgroupFamilyKind.SPECIAL_LINEAR:
        return frozenset(v for v in ImageVerdict if v is not ImageVerdict.SURJECTIVE)
    all_split = ImageClassifier(stream).detect_reducible(family.ell)
    if all_split:
        return frozenset({ImageVerdict.REDUCIBLE_CANDIDATE})
    return frozenset({ImageVerdict.IRREGULAR_CANDIDATE})


@dataclass(frozen=True)
class OracleCheck:
    ell: int
    family: SubgroupFamilyKind
    order: int
    subgroup_tag: str
    expected_tag: str
    verdict: ImageVerdict
    character: Optional[int]
    passed: bool


def exhaustive_family_check(family: SubgroupFamily) -> OracleCheck:
    """Classify the family's closure exactly and through its (tr, det) multiset."""
    ell = family.ell
    elements = family.elements_sorted
    subgroup = classify_subgroup(elements, ell, family.eps)

    if family.kind in NORMALIZER_KINDS:
        stream = planted_normalizer_stream(family, elements=elements)
        entry: ImageEntry = ImageClassifier(stream).classify(ell, PLANTED_ADDITIVE)
    else:
        stream = element_stream(elements, ell)
        entry = ImageClassifier(stream).classify(ell, ())

    tag_ok = subgroup.tag is family.expected_tag and (
        family.pattern is None or subgroup.pattern is family.pattern
    )
    verdict_ok = entry.verdict in expected_verdicts(family, stream)
    if family.kind in NORMALIZER_KINDS:
        verdict_ok = verdict_ok and entry.character == PLANTED_DISCRIMINANT
    surjective_ok = (entry.verdict is ImageVerdict.SURJECTIVE) == (
        len(elements) == (ell * ell - 1) * (ell * ell - ell)
    )
    passed = tag_ok and verdict_ok and surjective_ok and len(elements) == family.order
    if not passed:
        logger.error(
            "Oracle mismatch mod %d for %s: tag=%s verdict=%s",
            ell,
            family.kind.value,
            subgroup.tag.value,
            entry.verdict.value,
        )
    return OracleCheck(
        ell,
        family.kind,
        len(elements),
        subgroup.tag.value,
        family.expected_tag.value,
        entry.verdict,
        entry.character,
        passed,
    )


def exhaustive_oracle(ells: Sequence[int]) -> list[OracleCheck]:
    checks: list[OracleCheck] = []
    for ell in ells:
        for family in subgroup_families(ell):
            checks.append(exhaustive_family_check(family))
    return checks
