import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import random_tdes
from netsup import Tdes, obs_relation


def test_unobservable_branches_are_related():
    t = Tdes.build("T", ["s0", "s1", "s2", "s3"], {"o", "u"},
                   [("s0", "u", "s1"), ("s0", "o", "s2"), ("s1", "o", "s3")], "s0")
    rel = obs_relation(t, {"o", "tick"})
    assert rel.of("s0") == {"s0", "s1"}
    assert rel.of("s2") == {"s2", "s3"}
    assert ("s0", "s2") not in rel
    assert rel.of_set({"s1", "s3"}) == {"s0", "s1", "s2", "s3"}
    assert rel.observer.name == "OBS(T)"


def test_full_observation_is_identity_on_deterministic():
    t = Tdes.build("T", ["s0", "s1"], {"o"}, [("s0", "o", "s1")], "s0")
    rel = obs_relation(t, t.alphabet)
    assert all(rel.of(s) == {s} for s in t.states)


def test_observable_must_be_in_alphabet():
    t = Tdes.build("T", ["s0"], {"o"}, [], "s0")
    with pytest.raises(ValueError):
        obs_relation(t, {"zz"})


@settings(max_examples=150, deadline=None)
@given(random_tdes(), st.sets(st.sampled_from(["a", "b", "u"])))
def test_relation_matches_pair_oracle(t, obs):
    obs = obs | {"tick"}
    rel = obs_relation(t, obs)
    pairs = oracles.obs_pairs(t, obs)
    got = {(x, y) for x in rel.classes for y in rel.classes[x]}
    assert got == pairs


@settings(max_examples=100, deadline=None)
@given(random_tdes(), st.sets(st.sampled_from(["a", "b", "u"])))
def test_relation_reflexive_and_symmetric(t, obs):
    rel = obs_relation(t, obs | {"tick"})
    for x, cls in rel.classes.items():
        assert x in cls
        for y in cls:
            assert x in rel.of(y)
