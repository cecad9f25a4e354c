"""Country-by-year spread of the patents citing a target patent.

Counting rules: a citing patent adds 1 to the (grant year, country) cell of
every distinct inventor country it has, so a multi-country patent appears in
several cells; inventor tallies count inventor instances, so the two views
answer different questions and both are kept. Assignee countries, when
present, are tallied separately as the applicant-side view.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .client import PatentRecord, normalize_patent_id
from .errors import InconsistentInputError

UNKNOWN_COUNTRY = "unknown"


@dataclass(frozen=True)
class DiffusionProfile:
    target_patent_id: str
    cells: dict[tuple[int, str], int]
    inventor_tallies: dict[str, int]
    citing_patent_count: int
    inventor_instance_count: int
    assignee_tallies: dict[str, int] = field(default_factory=dict)


def build_profile(target: str, citers: Iterable[PatentRecord]) -> DiffusionProfile:
    """Aggregate the citers of ``target`` into per-(year, country) cells.

    Every citer must actually cite the target; anything else means the
    caller mixed up retrievals and is an error, not data.
    """
    target_id = normalize_patent_id(target)
    cells: Counter[tuple[int, str]] = Counter()
    inventor_tallies: Counter[str] = Counter()
    assignee_tallies: Counter[str] = Counter()
    citer_count = 0
    instance_count = 0

    for patent in citers:
        if target_id not in {ref.cited_id for ref in patent.cited}:
            raise InconsistentInputError(
                f"patent {patent.patent_id} does not cite {target_id}"
            )
        citer_count += 1
        year = patent.grant_year()
        countries = {inv.country or UNKNOWN_COUNTRY for inv in patent.inventors}
        for country in countries or {UNKNOWN_COUNTRY}:
            cells[(year, country)] += 1
        for inventor in patent.inventors:
            inventor_tallies[inventor.country or UNKNOWN_COUNTRY] += 1
            instance_count += 1
        for assignee in patent.assignees:
            if assignee.country:
                assignee_tallies[assignee.country] += 1

    return DiffusionProfile(
        target_patent_id=target_id,
        cells=dict(cells),
        inventor_tallies=dict(inventor_tallies),
        citing_patent_count=citer_count,
        inventor_instance_count=instance_count,
        assignee_tallies=dict(assignee_tallies),
    )


def profile_summary(profile: DiffusionProfile) -> dict:
    """Per-country shares and first/last citing year, for rendering."""
    inventor_total = profile.inventor_instance_count
    shares = {
        country: count / inventor_total
        for country, count in sorted(profile.inventor_tallies.items())
    } if inventor_total else {}

    assignee_total = sum(profile.assignee_tallies.values())
    assignee_shares = {
        country: count / assignee_total
        for country, count in sorted(profile.assignee_tallies.items())
    } if assignee_total else {}

    year_span: dict[str, dict[str, int]] = {}
    for (year, country), _count in sorted(profile.cells.items()):
        span = year_span.setdefault(country, {"first_year": year, "last_year": year})
        span["first_year"] = min(span["first_year"], year)
        span["last_year"] = max(span["last_year"], year)

    return {
        "citing_patents": profile.citing_patent_count,
        "inventor_instances": profile.inventor_instance_count,
        "inventor_shares": shares,
        "assignee_shares": assignee_shares,
        "country_year_span": year_span,
    }
