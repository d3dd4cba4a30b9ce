"""Tests for the witness-based mod-ell image classifier."""

import logging

import numpy as np
import pytest

from exceptional_primes.models.enums import CartanKind, ImageVerdict, SubgroupFamilyKind
from exceptional_primes.services.arithmetic import primes_in_range
from exceptional_primes.services.exceptions import EmptyTable
from exceptional_primes.services.gl2_lab import normalizer, subgroup_families
from exceptional_primes.services.image_classifier import (
    FrobeniusStream,
    ImageClassifier,
    ImageEntry,
    WitnessSet,
    build_image_report,
    candidate_discriminants,
    character_span,
    v_exceptional_bookkeeping,
)
from exceptional_primes.services.oracle_streams import (
    PLANTED_ADDITIVE,
    PLANTED_DISCRIMINANT,
    planted_normalizer_sample,
    planted_normalizer_stream,
    sampled_stream,
)


def test_conductor_11_curve_is_reducible_only_at_5(table_11a):
    report = build_image_report(table_11a, primes_in_range(2, 200), (), 200)

    assert [e.ell for e in report.candidates] == [5]
    assert report.entry(5).verdict is ImageVerdict.REDUCIBLE_CANDIDATE
    assert report.entry(2).verdict is ImageVerdict.UNDETERMINED
    assert report.entry(3).verdict is ImageVerdict.UNDETERMINED
    for entry in report.entries:
        if entry.ell >= 7:
            assert entry.verdict is ImageVerdict.SURJECTIVE, entry.ell


def test_conductor_37_curve_has_no_candidates(table_37a):
    report = build_image_report(table_37a, primes_in_range(2, 200), (), 200)

    assert report.candidates == ()
    assert all(
        e.verdict is ImageVerdict.SURJECTIVE for e in report.entries if e.ell >= 5
    )


def test_witnesses_are_smallest_primes(table_37a):
    classifier = ImageClassifier.from_table(table_37a)
    w = classifier.collect_witnesses(7)

    assert w.det_surjective
    assert None not in (w.w_irred, w.w_split, w.w_bigorder)
    for witness in (w.w_irred, w.w_split, w.w_bigorder):
        assert table_37a.trace(witness) is not None
    assert w.sampled == len(table_37a)
    assert ImageClassifier.certify_surjective(w)


def test_certificate_needs_every_witness():
    w = WitnessSet(7, 100, 3, None, 5, 10, True)

    assert not ImageClassifier.certify_surjective(w)
    assert not ImageClassifier.certify_surjective(WitnessSet(3, 100, 2, 5, 7, 10, True))


def test_even_traces_flag_ell_two():
    stream = FrobeniusStream.from_triples(
        [(3, 0, 3), (5, 2, 5), (7, -2, 7), (11, 4, 11)], det_surjective_known=True
    )

    entry = ImageClassifier(stream).classify(2)

    assert entry.verdict is ImageVerdict.REDUCIBLE_CANDIDATE


def test_empty_stream_is_rejected():
    with pytest.raises(EmptyTable):
        ImageClassifier(FrobeniusStream.from_triples([]))


def test_character_candidates():
    assert candidate_discriminants([2]) == [-4, -8, 8]
    assert candidate_discriminants([3, 5]) == [-3, 5, -15]
    assert candidate_discriminants([]) == []
    assert character_span([-4, 5]) == [1, -4, 5, -20]


def test_planted_split_normalizer_is_found():
    stream = planted_normalizer_stream(normalizer(7, CartanKind.SPLIT))

    entry = ImageClassifier(stream).classify(7, PLANTED_ADDITIVE)

    assert entry.verdict is ImageVerdict.NORMALIZER_CANDIDATE
    assert entry.character == PLANTED_DISCRIMINANT
    assert entry.character_search.matches == (PLANTED_DISCRIMINANT,)


def test_sampled_nonsplit_normalizer_is_found(rng):
    family = normalizer(53, CartanKind.NONSPLIT)
    stream = planted_normalizer_sample(family, rng, 2000)

    entry = ImageClassifier(stream).classify(53, PLANTED_ADDITIVE)

    assert entry.verdict is ImageVerdict.NORMALIZER_CANDIDATE
    assert entry.character == PLANTED_DISCRIMINANT


def test_too_few_inert_samples_is_insufficient():
    stream = planted_normalizer_stream(normalizer(5, CartanKind.SPLIT))

    classifier = ImageClassifier(stream, min_inert_samples=10**6)

    search = classifier.extract_normalizer_character(5, PLANTED_ADDITIVE)

    assert search.matches == ()
    assert PLANTED_DISCRIMINANT in search.insufficient
    assert search.character is None


def _soundness_round(rng: np.random.Generator, ell: int) -> None:
    for family in subgroup_families(ell, include_irregular=False):
        if family.kind is SubgroupFamilyKind.GENERAL_LINEAR:
            continue
        entry = ImageClassifier(sampled_stream(family, rng, 500)).classify(ell)
        assert entry.verdict is not ImageVerdict.SURJECTIVE, family.kind


@pytest.mark.parametrize("ell", [53, 61])
def test_proper_subgroups_are_never_certified(rng, ell):
    for _ in range(5):
        _soundness_round(rng, ell)


@pytest.mark.slow
@pytest.mark.parametrize("ell", [53, 61])
def test_proper_subgroups_are_never_certified_exhaustively(rng, ell):
    for _ in range(100):
        _soundness_round(rng, ell)


def test_uniform_gl2_sample_is_certified(rng):
    general = next(
        f
        for f in subgroup_families(53, False)
        if f.kind is SubgroupFamilyKind.GENERAL_LINEAR
    )

    entry = ImageClassifier(sampled_stream(general, rng, 500)).classify(53)

    assert entry.verdict is ImageVerdict.SURJECTIVE


def _normalizer_entry(ell: int, character: int) -> ImageEntry:
    witnesses = WitnessSet(ell, 100, 3, None, 5, 50, True)
    return ImageEntry(
        ell, ImageVerdict.NORMALIZER_CANDIDATE, witnesses, character=character
    )


def test_v_exceptional_groups_by_character(caplog):
    entries = [
        _normalizer_entry(13, -4),
        _normalizer_entry(17, -4),
        _normalizer_entry(19, 5),
    ]

    with caplog.at_level(logging.WARNING):
        groups = v_exceptional_bookkeeping(entries, [-4])

    assert groups.span == (1, -4)
    assert groups.groups == {-4: [13, 17]}
    assert groups.not_in_span == ((19, 5),)
    assert "outside the given space" in caplog.text
