"""Diffusion profiles: per-(year, country) cells and inventor tallies."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcs.client import patent_from_api
from pcs.diffusion import UNKNOWN_COUNTRY, build_profile, profile_summary
from pcs.errors import InconsistentInputError

from .wire import wire_patent

TARGET = "4335266"


def citer(pid, date, inventor_countries, assignees=(), extra_cited=()):
    inventors = [(f"I{i}", f"Surname{i}", country) for i, country in enumerate(inventor_countries)]
    cited = [(TARGET, "1982-06-15", None)] + list(extra_cited)
    return patent_from_api(
        wire_patent(pid, date, inventors=inventors, assignees=assignees, cited=cited)
    )


class TestBuildProfile:
    def test_empty_citer_list(self):
        profile = build_profile(TARGET, [])
        assert profile.cells == {}
        assert profile.inventor_tallies == {}
        assert profile.citing_patent_count == 0
        assert profile.inventor_instance_count == 0

    def test_two_citers_hand_enumerated(self):
        citers = [
            citer("8000001", "2010-03-01", ["US"]),
            citer("8000002", "2012-07-01", ["JP", "US"]),
        ]
        profile = build_profile(TARGET, citers)
        assert profile.cells == {(2010, "US"): 1, (2012, "JP"): 1, (2012, "US"): 1}
        assert profile.inventor_tallies == {"US": 2, "JP": 1}
        assert profile.citing_patent_count == 2
        assert profile.inventor_instance_count == 3

    def test_summary_shares_hand_arithmetic(self):
        citers = [
            citer("8000001", "2010-03-01", ["US"]),
            citer("8000002", "2012-07-01", ["JP", "US"]),
        ]
        summary = profile_summary(build_profile(TARGET, citers))
        assert summary["inventor_shares"]["US"] == pytest.approx(2 / 3)
        assert summary["inventor_shares"]["JP"] == pytest.approx(1 / 3)
        assert summary["country_year_span"]["US"] == {"first_year": 2010, "last_year": 2012}

    def test_countryless_inventors_fall_into_unknown(self):
        profile = build_profile(TARGET, [citer("8000001", "2010-03-01", [None, None])])
        assert profile.cells == {(2010, UNKNOWN_COUNTRY): 1}
        assert profile.inventor_tallies == {UNKNOWN_COUNTRY: 2}

    def test_patent_without_inventors_still_occupies_a_cell(self):
        profile = build_profile(TARGET, [citer("8000001", "2010-03-01", [])])
        assert profile.cells == {(2010, UNKNOWN_COUNTRY): 1}
        assert profile.inventor_instance_count == 0

    def test_non_citer_rejected(self):
        stranger = patent_from_api(
            wire_patent("8000009", "2011-01-01", cited=[("1234567", "1970-01-01", None)])
        )
        with pytest.raises(InconsistentInputError, match="8000009"):
            build_profile(TARGET, [stranger])

    def test_assignee_tallies_kept_separately(self):
        citers = [
            citer("8000001", "2010-03-01", ["US"], assignees=[("Acme", "US")]),
            citer("8000002", "2012-07-01", ["JP"], assignees=[("Kabushiki", "JP")]),
            citer("8000003", "2013-07-01", ["US"], assignees=[("NoCountry", None)]),
        ]
        profile = build_profile(TARGET, citers)
        assert profile.assignee_tallies == {"US": 1, "JP": 1}
        summary = profile_summary(profile)
        assert summary["assignee_shares"]["US"] == pytest.approx(0.5)

    def test_summary_of_empty_profile(self):
        summary = profile_summary(build_profile(TARGET, []))
        assert summary["inventor_shares"] == {}
        assert summary["country_year_span"] == {}


@given(
    st.lists(
        st.tuples(
            st.integers(1990, 2020),
            st.lists(st.sampled_from(["US", "JP", "DE", None]), max_size=4),
        ),
        max_size=25,
    )
)
def test_conservation_and_monotonicity(patent_specs):
    citers = [
        citer(str(8_000_000 + i), f"{year}-06-01", countries)
        for i, (year, countries) in enumerate(patent_specs)
    ]
    profile = build_profile(TARGET, citers)

    assert sum(profile.inventor_tallies.values()) == profile.inventor_instance_count
    assert sum(profile.cells.values()) >= profile.citing_patent_count

    if profile.inventor_instance_count > 0:
        shares = profile_summary(profile)["inventor_shares"]
        assert sum(shares.values()) == pytest.approx(1.0, abs=1e-12)

    if citers:
        smaller = build_profile(TARGET, citers[:-1])
        for key, count in smaller.cells.items():
            assert profile.cells[key] >= count
        for country, tally in smaller.inventor_tallies.items():
            assert profile.inventor_tallies[country] >= tally
