#!/usr/bin/env python3
"""Build the bundled replay snapshots under fixtures/store.

The sandbox this project is developed in has no route to the live provider,
so the bundled snapshots are synthesized: deterministic, seeded wire-format
responses shaped like real provider pages, engineered so each technology
area's recorded aggregates land on its documented reference values (patent
counts, unique reference counts, seminal patent and year, citer tallies).

Everything flows through the production client against a scripted transport,
so pagination, parsing, normalization, and recording are exercised exactly
as a live capture would be. Regenerating is byte-identical: every value
derives from fixed seeds.

Usage: python3 tools/make_snapshots.py [--out fixtures]
"""

from __future__ import annotations

import argparse
import bisect
import json
import random
import shutil
from dataclasses import dataclass
from pathlib import Path

from pcs.canon import canonical_json
from pcs.client import (
    FetchPolicy,
    PatentsViewClient,
    TransportResponse,
    forward_citation_query,
)
from pcs.diffusion import build_profile
from pcs.pipeline import analyze_retrieval
from pcs.query import parse_advanced, provider_criterion
from pcs.store import SnapshotStore

REPO_ROOT = Path(__file__).resolve().parent.parent

# Approximate first utility patent number granted in each anchor year;
# linear interpolation in between. Only plausibility matters here: generated
# ids must sort consistently with their grant years.
_NUMBER_ANCHORS = [
    (1900, 640_167), (1910, 945_010), (1920, 1_326_899), (1930, 1_742_181),
    (1940, 2_185_170), (1950, 2_492_944), (1955, 2_698_434), (1960, 2_919_443),
    (1965, 3_163_865), (1970, 3_487_470), (1975, 3_858_241), (1980, 4_180_867),
    (1985, 4_490_855), (1990, 4_890_335), (1995, 5_377_354), (2000, 6_009_555),
    (2005, 6_836_899), (2010, 7_640_598), (2015, 8_925_112), (2020, 10_530_000),
]

_TITLE_HEADS = [
    "Method of forming", "Process for producing", "Apparatus for depositing",
    "Method for fabricating", "Semiconductor device with", "Manufacture of",
    "Method of improving", "System for", "Structure of", "Method of treating",
]
_TITLE_BODIES = [
    "a thin-film photovoltaic layer", "heterojunction solar cells",
    "a transparent conductive oxide", "tandem photovoltaic modules",
    "a semiconductor absorber layer", "crystalline silicon substrates",
    "an antireflective coating", "a p-n junction device",
    "flexible solar cell arrays", "a passivated emitter structure",
    "a chalcogenide semiconductor film", "a photoelectric conversion element",
]
_FIRST_NAMES = [
    "James", "Mary", "Hiroshi", "Wei", "Anna", "Peter", "Yuki", "Lars",
    "Marie", "Kenji", "Susan", "Erik", "Mei", "Thomas", "Sophie", "Jun",
]
_LAST_NAMES = [
    "Smith", "Tanaka", "Chen", "Mueller", "Johnson", "Sato", "Kim", "Dubois",
    "Brown", "Yamamoto", "Lee", "Schmidt", "Wilson", "Nakamura", "Park", "Martin",
]
_ORG_HEADS = ["Apex", "Helios", "Crystal", "Meridian", "Pacific", "Solaris", "Quantum", "Vertex"]
_ORG_TAILS = ["Energy Corp.", "Semiconductor Inc.", "Photonics Ltd.", "Materials Co.",
              "Technologies Inc.", "Industries K.K.", "Research GmbH", "Electronics Co."]

_INVENTOR_COUNTRIES = ["US"] * 55 + ["JP"] * 15 + ["DE"] * 8 + ["KR"] * 5 + \
    ["TW"] * 4 + ["FR"] * 4 + ["GB"] * 4 + ["CN"] * 5


def first_number(year: int) -> int:
    years = [y for y, _ in _NUMBER_ANCHORS]
    index = bisect.bisect_right(years, year) - 1
    if index >= len(_NUMBER_ANCHORS) - 1:
        index = len(_NUMBER_ANCHORS) - 2
    (y0, n0), (y1, n1) = _NUMBER_ANCHORS[index], _NUMBER_ANCHORS[index + 1]
    return n0 + (n1 - n0) * (year - y0) // (y1 - y0)


class IdPool:
    """Draws unique patent numbers consistent with their grant year."""

    def __init__(self, rng: random.Random, reserved: set[str]):
        self.rng = rng
        self.used = set(reserved)

    def take(self, year: int) -> str:
        start, end = first_number(year), first_number(year + 1)
        while True:
            candidate = str(self.rng.randrange(start, end))
            if candidate not in self.used:
                self.used.add(candidate)
                return candidate


def random_date(rng: random.Random, year: int) -> str:
    return f"{year:04d}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"


def random_title(rng: random.Random) -> str:
    return f"{rng.choice(_TITLE_HEADS)} {rng.choice(_TITLE_BODIES)}"


def random_inventors(rng: random.Random) -> list[dict]:
    return [
        {
            "inventor_first_name": rng.choice(_FIRST_NAMES),
            "inventor_last_name": rng.choice(_LAST_NAMES),
            "inventor_country": rng.choice(_INVENTOR_COUNTRIES),
        }
        for _ in range(rng.randint(1, 3))
    ]


def random_assignees(rng: random.Random, country: str | None = None) -> list[dict]:
    if rng.random() < 0.15:
        return []
    return [
        {
            "assignee_organization": f"{rng.choice(_ORG_HEADS)} {rng.choice(_ORG_TAILS)}",
            "assignee_country": country or rng.choice(_INVENTOR_COUNTRIES),
        }
    ]


def allocate(total: int, weights: list[float]) -> list[int]:
    """Largest-remainder allocation of ``total`` across ``weights``."""
    scale = sum(weights)
    raw = [total * w / scale for w in weights]
    base = [int(x) for x in raw]
    remainder = total - sum(base)
    order = sorted(range(len(raw)), key=lambda i: raw[i] - base[i], reverse=True)
    for i in order[:remainder]:
        base[i] += 1
    return base


@dataclass(frozen=True)
class SubgroupPlan:
    code: str            # query value, slash-free form
    display: str         # CPC display form carried in wire records
    label: str
    seminal_id: str
    seminal_date: str
    seminal_title: str
    n_patents: int
    n_refs: int          # distinct cited patents, seminal included
    seminal_citers: int
    ref_years: tuple[int, int]
    citer_years: tuple[int, int]
    created_at: str
    seed: int


PLANS = [
    SubgroupPlan("Y02E10V541", "Y02E10/541", "CuInSe2 material PV cells",
                 "4335266", "1982-06-15",
                 "Methods for forming a thin-film heterojunction solar cell "
                 "from a I-III-VI2 chalcopyrite compound",
                 962, 3502, 130, (1950, 2013), (1983, 2014),
                 "2026-07-15T08:01:00Z", 5411),
    SubgroupPlan("Y02E10V542", "Y02E10/542", "Dye sensitized solar cells",
                 "4927721", "1990-05-22", "Photo-electrochemical cell",
                 410, 1600, 90, (1955, 2012), (1991, 2014),
                 "2026-07-15T08:02:00Z", 5421),
    SubgroupPlan("Y02E10V543", "Y02E10/543", "Solar cells from Group II-VI materials",
                 "5536333", "1996-07-16",
                 "Process for making photovoltaic devices and resultant product",
                 350, 1400, 80, (1960, 2012), (1997, 2014),
                 "2026-07-15T08:03:00Z", 5431),
    SubgroupPlan("Y02E10V544", "Y02E10/544", "Solar cells from Group III-V materials",
                 "6252287", "2001-06-26",
                 "InGaAsN/GaAs heterojunction for multijunction solar cells",
                 380, 1500, 85, (1960, 2012), (2002, 2014),
                 "2026-07-15T08:04:00Z", 5441),
    SubgroupPlan("Y02E10V545", "Y02E10/545", "Microcrystalline silicon PV cells",
                 "5677236", "1997-10-14",
                 "Process for forming a thin microcrystalline silicon semiconductor film",
                 260, 1000, 60, (1960, 2012), (1998, 2014),
                 "2026-07-15T08:05:00Z", 5451),
    SubgroupPlan("Y02E10V546", "Y02E10/546", "Polycrystalline silicon PV cells",
                 "5227329", "1993-07-13", "Method of manufacturing semiconductor device",
                 300, 1200, 70, (1955, 2012), (1994, 2014),
                 "2026-07-15T08:06:00Z", 5461),
    SubgroupPlan("Y02E10V547", "Y02E10/547", "Monocrystalline silicon PV cells",
                 "5053083", "1991-10-01", "Bilevel contact solar cells",
                 280, 1100, 65, (1955, 2012), (1992, 2014),
                 "2026-07-15T08:07:00Z", 5471),
    SubgroupPlan("Y02E10V548", "Y02E10/548", "Amorphous silicon PV cells",
                 "4109271", "1978-08-22", "Amorphous silicon photovoltaic device",
                 420, 1700, 95, (1945, 2012), (1979, 2014),
                 "2026-07-15T08:08:00Z", 5481),
    SubgroupPlan("Y02E10V549", "Y02E10/549", "Organic PV cells",
                 "4539507", "1985-09-03",
                 "Organic electroluminescent devices having improved power "
                 "conversion efficiencies",
                 330, 1300, 75, (1950, 2012), (1986, 2014),
                 "2026-07-15T08:09:00Z", 5491),
]

DIFFUSION_TARGET = PLANS[0]
DIFFUSION_CREATED_AT = "2026-07-15T08:10:00Z"
# (patents, inventors each, country, year span); instance tallies must land on
# 273 US / 56 JP / 10 TW, 351 total across 151 citing patents.
DIFFUSION_GROUPS = [
    (8, 5, "JP", (1995, 2005)),
    (8, 2, "JP", (1995, 2005)),
    (2, 3, "TW", (1996, 2004)),
    (2, 2, "TW", (1996, 2004)),
    (1, 3, "DE", (1992, 2010)),
    (2, 2, "DE", (1992, 2010)),
    (1, 3, "KR", (2001, 2008)),
    (1, 2, "FR", (1998, 2006)),
    (21, 3, "US", (1984, 2015)),
    (105, 2, "US", (1984, 2015)),
]


class ScriptedTransport:
    """Serves prebuilt pages keyed by the request's criterion object."""

    def __init__(self, routes: dict[str, list[str]]):
        self.routes = routes

    def post(self, url: str, body: str, timeout: float) -> TransportResponse:
        data = json.loads(body)
        pages = self.routes[canonical_json(data["q"])]
        page_number = data.get("o", {}).get("page", 1)
        return TransportResponse(200, pages[page_number - 1])


def draw_ref_count(rng: random.Random) -> int:
    roll = rng.random()
    if roll < 0.72:
        return 1
    if roll < 0.90:
        return 2
    if roll < 0.96:
        return 3
    if roll < 0.99:
        return 4
    return 5


def build_subgroup_pages(plan: SubgroupPlan, per_page: int = 100) -> list[str]:
    rng = random.Random(plan.seed)
    seminal_year = int(plan.seminal_date[:4])
    pool = IdPool(rng, reserved={plan.seminal_id})

    # Citing patents, more in recent years.
    c0, c1 = plan.citer_years
    citer_year_list = list(range(c0, c1 + 1))
    citer_counts = allocate(
        plan.n_patents, [(i + 2) ** 1.1 for i in range(len(citer_year_list))]
    )
    citers: list[tuple[str, int]] = []  # (id, year) sorted by year
    for year, count in zip(citer_year_list, citer_counts):
        for _ in range(count):
            citers.append((pool.take(year), year))
    citers.sort(key=lambda c: (c[1], int(c[0])))
    citer_years_sorted = [year for _, year in citers]

    def eligible_after(year: int) -> list[str]:
        index = bisect.bisect_right(citer_years_sorted, year)
        return [cid for cid, _ in citers[index:]]

    # Distinct cited patents per year, ramping up over time.
    r0, r1 = plan.ref_years
    ref_year_list = list(range(r0, r1 + 1))
    ref_counts = allocate(
        plan.n_refs - 1, [(i + 1) ** 1.3 for i in range(len(ref_year_list))]
    )
    refs: list[tuple[str, int, str, str | None]] = []  # (id, year, date, title)
    for year, count in zip(ref_year_list, ref_counts):
        for _ in range(count):
            title = random_title(rng) if rng.random() < 0.7 else None
            refs.append((pool.take(year), year, random_date(rng, year), title))
    refs.append((plan.seminal_id, seminal_year, plan.seminal_date, plan.seminal_title))
    refs.sort(key=lambda r: (r[1], int(r[0])))

    # Assign each cited patent to distinct citing patents.
    cited_by_citer: dict[str, list[tuple[str, str, str | None]]] = {cid: [] for cid, _ in citers}
    for ref_id, ref_year, ref_date, ref_title in refs:
        candidates = eligible_after(ref_year)
        count = plan.seminal_citers if ref_id == plan.seminal_id else draw_ref_count(rng)
        if len(candidates) < count:
            raise RuntimeError(
                f"{plan.code}: only {len(candidates)} citers available after {ref_year}"
            )
        for citing_id in rng.sample(candidates, count):
            cited_by_citer[citing_id].append((ref_id, ref_date, ref_title))

    # Give reference-less citers a few noise refs (never the seminal patent,
    # so its engineered count stays exact).
    plain_refs = [r for r in refs if r[0] != plan.seminal_id]
    citer_year_by_id = dict(citers)
    for citing_id, assigned in cited_by_citer.items():
        if assigned:
            continue
        year = citer_year_by_id[citing_id]
        eligible_refs = [r for r in plain_refs if r[1] < year]
        already = {ref_id for ref_id, _, _ in assigned}
        for ref_id, _, ref_date, ref_title in rng.sample(
            eligible_refs, min(rng.randint(1, 3), len(eligible_refs))
        ):
            if ref_id not in already:
                assigned.append((ref_id, ref_date, ref_title))
                already.add(ref_id)

    patents = []
    for citing_id, year in citers:
        cited = sorted(cited_by_citer[citing_id], key=lambda r: int(r[0]))
        patents.append(
            {
                "patent_number": citing_id,
                "patent_title": random_title(rng),
                "patent_date": random_date(rng, year),
                "inventors": random_inventors(rng),
                "assignees": random_assignees(rng),
                "cpcs": [{"cpc_subgroup_id": plan.display}],
                "cited_patents": [
                    {
                        "cited_patent_number": ref_id,
                        "cited_patent_date": ref_date,
                        "cited_patent_title": ref_title,
                    }
                    for ref_id, ref_date, ref_title in cited
                ],
            }
        )
    patents.sort(key=lambda p: int(p["patent_number"]))

    total = len(patents)
    chunks = [patents[i : i + per_page] for i in range(0, total, per_page)]
    return [
        json.dumps({"patents": chunk, "count": len(chunk), "total_patent_count": total})
        for chunk in chunks
    ]


def build_diffusion_pages(per_page: int = 100) -> list[str]:
    plan = DIFFUSION_TARGET
    rng = random.Random(151_351)
    pool = IdPool(rng, reserved={plan.seminal_id})

    noise_refs = [
        (pool.take(year), random_date(rng, year), random_title(rng))
        for year in rng.choices(range(1955, 1982), k=60)
    ]

    patents = []
    for n_patents, n_inventors, country, (y0, y1) in DIFFUSION_GROUPS:
        for _ in range(n_patents):
            if country == "US" and rng.random() < 0.62:
                year = rng.randint(2010, 2015)
            else:
                year = rng.randint(y0, y1)
            cited = [
                {
                    "cited_patent_number": plan.seminal_id,
                    "cited_patent_date": plan.seminal_date,
                    "cited_patent_title": plan.seminal_title,
                }
            ] + [
                {
                    "cited_patent_number": rid,
                    "cited_patent_date": rdate,
                    "cited_patent_title": rtitle,
                }
                for rid, rdate, rtitle in rng.sample(noise_refs, rng.randint(0, 3))
            ]
            patents.append(
                {
                    "patent_number": pool.take(year),
                    "patent_title": random_title(rng),
                    "patent_date": random_date(rng, year),
                    "inventors": [
                        {
                            "inventor_first_name": rng.choice(_FIRST_NAMES),
                            "inventor_last_name": rng.choice(_LAST_NAMES),
                            "inventor_country": country,
                        }
                        for _ in range(n_inventors)
                    ],
                    "assignees": random_assignees(rng, country=country),
                    "cpcs": [{"cpc_subgroup_id": plan.display}],
                    "cited_patents": cited,
                }
            )
    patents.sort(key=lambda p: int(p["patent_number"]))

    total = len(patents)
    chunks = [patents[i : i + per_page] for i in range(0, total, per_page)]
    return [
        json.dumps({"patents": chunk, "count": len(chunk), "total_patent_count": total})
        for chunk in chunks
    ]


def record_subgroup(plan: SubgroupPlan, store: SnapshotStore) -> dict:
    query = parse_advanced(json.dumps({"cpc_subgroup_id": plan.code}))
    pages = build_subgroup_pages(plan)
    transport = ScriptedTransport({canonical_json(provider_criterion(query)): pages})
    client = PatentsViewClient(
        transport=transport,
        base_url="https://api.patentsview.org",
        store=store,
        sleep=lambda s: None,
        rng=random.Random(0),
        now=lambda: plan.created_at,
    )
    policy = FetchPolicy(per_page=100, rate_limit=10_000.0)
    result = client.fetch_patents(query, policy)
    snapshot_id = client.record_snapshot(query, result, store)

    outcome = analyze_retrieval(result)
    assert outcome.seminal is not None, plan.code
    if outcome.seminal.patent_id != plan.seminal_id:
        raise RuntimeError(
            f"{plan.code}: spectrum peak picked {outcome.seminal.patent_id}, "
            f"wanted {plan.seminal_id}"
        )
    expected_year = int(plan.seminal_date[:4])
    if outcome.seminal.peak_year != expected_year:
        raise RuntimeError(
            f"{plan.code}: peak year {outcome.seminal.peak_year}, wanted {expected_year}"
        )
    if outcome.seminal.runner_up_years:
        margin = outcome.seminal.peak_pcs / max(
            pcs for _, pcs in outcome.seminal.runner_up_years
        )
        if margin < 2.0:
            raise RuntimeError(f"{plan.code}: peak margin only {margin:.2f}x")
    if len(result.patents) != plan.n_patents:
        raise RuntimeError(f"{plan.code}: {len(result.patents)} patents, wanted {plan.n_patents}")
    unique_refs = outcome.provenance["unique_cited_patents"]
    if unique_refs != plan.n_refs:
        raise RuntimeError(f"{plan.code}: {unique_refs} unique refs, wanted {plan.n_refs}")

    return {
        "kind": "subgroup",
        "cpc_subgroup": plan.code,
        "label": plan.label,
        "query": json.dumps({"cpc_subgroup_id": plan.code}),
        "snapshot_id": snapshot_id,
        "patents": len(result.patents),
        "unique_cited_patents": unique_refs,
        "seminal_patent": outcome.seminal.patent_id,
        "peak_year": outcome.seminal.peak_year,
    }


def record_diffusion(store: SnapshotStore) -> dict:
    plan = DIFFUSION_TARGET
    query = forward_citation_query(plan.seminal_id)
    pages = build_diffusion_pages()
    probe = canonical_json({"patent_number": plan.seminal_id})
    probe_page = json.dumps(
        {"patents": [{"patent_number": plan.seminal_id}], "count": 1, "total_patent_count": 1}
    )
    transport = ScriptedTransport(
        {
            canonical_json(provider_criterion(query)): pages,
            probe: [probe_page],
        }
    )
    client = PatentsViewClient(
        transport=transport,
        base_url="https://api.patentsview.org",
        store=store,
        sleep=lambda s: None,
        rng=random.Random(0),
        now=lambda: DIFFUSION_CREATED_AT,
    )
    policy = FetchPolicy(per_page=100, rate_limit=10_000.0)
    result = client.fetch_forward_citations(plan.seminal_id, policy)
    snapshot_id = client.record_snapshot(query, result, store)

    profile = build_profile(plan.seminal_id, result.patents)
    expected_tallies = {"US": 273, "JP": 56, "TW": 10, "DE": 7, "KR": 3, "FR": 2}
    if profile.citing_patent_count != 151:
        raise RuntimeError(f"diffusion: {profile.citing_patent_count} citers, wanted 151")
    if profile.inventor_instance_count != 351:
        raise RuntimeError(
            f"diffusion: {profile.inventor_instance_count} inventor instances, wanted 351"
        )
    if profile.inventor_tallies != expected_tallies:
        raise RuntimeError(f"diffusion: tallies {profile.inventor_tallies}")

    return {
        "kind": "forward_citations",
        "target_patent": plan.seminal_id,
        "snapshot_id": snapshot_id,
        "citing_patents": profile.citing_patent_count,
        "inventor_instances": profile.inventor_instance_count,
        "inventor_tallies": dict(sorted(profile.inventor_tallies.items())),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(REPO_ROOT / "fixtures"), help="fixture root")
    args = parser.parse_args()

    fixtures_root = Path(args.out)
    store_root = fixtures_root / "store"
    if store_root.exists():
        shutil.rmtree(store_root)
    store = SnapshotStore(store_root)

    entries = [record_subgroup(plan, store) for plan in PLANS]
    entries.append(record_diffusion(store))

    manifest_path = fixtures_root / "manifest.json"
    manifest_path.write_text(
        json.dumps({"snapshots": entries}, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    for entry in entries:
        name = entry.get("cpc_subgroup") or f"citers of {entry['target_patent']}"
        print(f"{entry['snapshot_id'][:12]}  {name}")
    print(f"wrote {len(entries)} snapshots under {store_root}")


if __name__ == "__main__":
    main()
