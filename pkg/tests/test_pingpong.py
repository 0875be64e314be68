from fractions import Fraction

import pytest

import fixtures as fx
from freevol import pingpong as pp
from freevol.errors import (
    NotFillingEvidence,
    NotProperSubgroup,
    UsageError,
)
from freevol.splittings import dehn_twist
from freevol.twisting import TwistConstants
from freevol.words import Automorphism, power

B3 = fx.B3
P = fx.w3


@pytest.fixture(scope="module")
def config():
    return pp.configure(fx.certified_filling_pair())


def test_threshold_anchors():
    assert pp.threshold_exponent(TwistConstants(B=2, M=1, C=10), 2, 2) == 7
    assert pp.threshold_exponent(TwistConstants(B=0, M=0, C=0), 1, 1) == 2


def test_threshold_rejects_elliptic_edge_word():
    with pytest.raises(NotFillingEvidence):
        pp.threshold_exponent(TwistConstants(B=1, M=1, C=10), 0, 3)


def test_configure_anchor(config):
    assert config.constants == TwistConstants(B=1, M=6, C=15)
    assert config.threshold == 15


def test_classify_edge_words(config):
    pair = config.pair
    assert pp.classify(config, [pair.first.edge_word_ambient()]) == pp.SIDE_FIRST
    assert pp.classify(config, [pair.second.edge_word_ambient()]) == pp.SIDE_SECOND


def test_classify_rejects_full_rank_subgroup(config):
    with pytest.raises(NotProperSubgroup):
        pp.classify(config, [P("a"), P("b"), P("c")])


def test_twist_word_validation():
    with pytest.raises(UsageError):
        pp.TwistWord(((1, 3), (1, 2)))  # ids must alternate
    with pytest.raises(UsageError):
        pp.TwistWord(((1, 0),))  # exponents nonzero
    with pytest.raises(UsageError):
        pp.TwistWord(((3, 1),))  # ids in {1, 2}


def test_twist_word_parse_render_inverse():
    word = pp.parse_twist_word("1:+7 2:-7", None)
    assert word.render() == "1:+7 2:-7"
    assert word.inverse().factors == ((2, 7), (1, -7))
    with_threshold = pp.parse_twist_word("1:+N 2:-N", 15)
    assert with_threshold.factors == ((1, 15), (2, -15))


def test_twist_word_concat_cancels():
    word = pp.parse_twist_word("1:+3 2:+4", None)
    combined = pp.concat_twist_words(word, word.inverse())
    assert combined.factors == ()


def test_realize_single_factor_is_twist_power(config):
    realized = pp.realize(config, pp.parse_twist_word("1:+3", None))
    assert realized == power(dehn_twist(config.pair.first), 3)


def test_certify_alternating_word(config):
    word = pp.parse_twist_word("1:+N 2:+N", config.threshold)
    certificate = pp.certify(config, word)
    assert certificate.verdict == pp.VERDICT_IWIP
    assert certificate.failed_check is None
    payload = certificate.to_json()
    assert payload["schema"] == "freevol/1"
    assert payload["constants"] == {"B": 1, "M": 6, "C": 15}


def test_certify_single_factor(config):
    certificate = pp.certify(config, pp.parse_twist_word("1:+N", config.threshold))
    assert certificate.verdict == pp.VERDICT_TWIST_POWER


def test_certify_same_twist_at_both_ends(config):
    word = pp.parse_twist_word("1:+N 2:+N 1:+N", config.threshold)
    certificate = pp.certify(config, word)
    assert certificate.verdict == pp.VERDICT_NONTRIVIAL


def test_certify_small_exponent_fails(config):
    word = pp.parse_twist_word("1:+1 2:+N", config.threshold)
    certificate = pp.certify(config, word)
    assert certificate.verdict == pp.VERDICT_NOT_MET
    assert certificate.failed_check == "exponents_reach_threshold"


def test_orbit_check_reports_twist_fixed_class():
    twist = dehn_twist(fx.certified_filling_pair().first)
    report = pp.empirical_no_periodic_orbit(twist, 4, 3)
    assert not report["ok"]
    assert report["violation"] is not None


def test_orbit_check_reports_identity():
    report = pp.empirical_no_periodic_orbit(Automorphism.identity(B3), 3, 2)
    assert not report["ok"]
    assert report["violation"]["power"] == 1


def test_orbit_check_passes_certified_word_small(config):
    word = pp.parse_twist_word("1:+N 2:+N", config.threshold)
    certificate = pp.certify(config, word)
    forward, backward = pp.twist_factors(config, word)
    report = pp.empirical_no_periodic_orbit(
        certificate.automorphism, 5, 3, factors=forward, inverse_factors=backward
    )
    assert report["ok"]
    assert report["classes_checked"] > 0


def test_slack_guardrails():
    pair = fx.certified_filling_pair()
    with pytest.raises(UsageError):
        pp.configure(pair, slack=Fraction(3, 1))
