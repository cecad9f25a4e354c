"""Query forms: free-text keyword phrases and provider-style advanced JSON trees.

The advanced grammar is a frozen subset of the provider's query DSL:
bare ``{"field": value}`` criteria (equality), comparison operators
(``_eq``, ``_neq``, ``_gt``, ``_gte``, ``_lt``, ``_lte``, ``_begins``,
``_contains``, ``_text_any``, ``_text_all``, ``_text_phrase``) and the
combinators ``_and`` / ``_or`` / ``_not``. Anything outside the subset is
rejected loudly instead of passed through, so recorded snapshots stay
interpretable. Field names are validated against the bundled catalog.
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Union

from .canon import canonical_json, sha256_text
from .errors import (
    BoundsError,
    EmptyQueryError,
    QueryError,
    QuerySyntaxError,
    UnknownFieldError,
    UnsupportedOperatorError,
)

LEAF_OPS = frozenset(
    {"eq", "neq", "gt", "gte", "lt", "lte", "begins", "contains", "text_any", "text_all", "text_phrase"}
)
COMBINATORS = frozenset({"and", "or", "not"})
MAX_TREE_DEPTH = 32
MAX_LEAF_CRITERIA = 1024
PROVIDER_MAX_PER_PAGE = 10_000
DEFAULT_ENDPOINT = "patents"

# Fields requested with every retrieval; everything the spectrum and
# diffusion analyses consume downstream.
DEFAULT_FIELDS = (
    "patent_number",
    "patent_title",
    "patent_date",
    "inventor_first_name",
    "inventor_last_name",
    "inventor_country",
    "assignee_organization",
    "assignee_country",
    "cpc_subgroup_id",
    "cited_patent_number",
    "cited_patent_date",
    "cited_patent_title",
)

# Keyword phrases are lowered to a text_any criterion over these fields.
KEYWORD_FIELDS = ("patent_title", "patent_abstract")

Scalar = Union[str, int, float]


@lru_cache(maxsize=1)
def field_catalog() -> dict[str, dict]:
    """Known provider fields, loaded once from the bundled catalog."""
    text = resources.files("pcs.data").joinpath("field_catalog.json").read_text("utf-8")
    return json.loads(text)["fields"]


def _check_field(name: str) -> None:
    catalog = field_catalog()
    if name not in catalog:
        suggestions = difflib.get_close_matches(name, catalog.keys(), n=3, cutoff=0.5)
        raise UnknownFieldError(name, suggestions)


def _check_scalar(value: object, context: str) -> Scalar:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise QueryError(f"criterion value for {context} must be a string or number, got {value!r}")
    return value


@dataclass(frozen=True)
class Leaf:
    """A single field comparison."""

    field: str
    op: str
    value: Scalar

    def __post_init__(self):
        if self.op not in LEAF_OPS:
            raise UnsupportedOperatorError(f"unsupported operator {self.op!r}")
        _check_scalar(self.value, self.field)


@dataclass(frozen=True)
class Branch:
    """A boolean combination of child criteria (``not`` takes exactly one)."""

    combinator: str
    children: tuple["QueryNode", ...]

    def __post_init__(self):
        if self.combinator not in COMBINATORS:
            raise UnsupportedOperatorError(f"unsupported combinator {self.combinator!r}")
        if not self.children:
            raise QueryError(f"{self.combinator!r} requires at least one child criterion")
        if self.combinator == "not" and len(self.children) != 1:
            raise QueryError("'not' takes exactly one child criterion")


QueryNode = Union[Leaf, Branch]


@dataclass(frozen=True)
class Query:
    """Either a keyword phrase or an advanced criterion tree, never both."""

    keyword: str | None = None
    advanced: QueryNode | None = None

    def __post_init__(self):
        if (self.keyword is None) == (self.advanced is None):
            raise QueryError("query must be exactly one of keyword or advanced")

    @property
    def kind(self) -> str:
        return "keyword" if self.keyword is not None else "advanced"


def parse_keyword(text: str) -> Query:
    """Build a keyword query from a free-text phrase, trimming whitespace."""
    trimmed = text.strip()
    if not trimmed:
        raise EmptyQueryError("keyword query is empty")
    return Query(keyword=trimmed)


def parse_advanced(text: str) -> Query:
    """Parse raw provider-style JSON criteria into a validated query tree."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuerySyntaxError(f"malformed JSON at offset {exc.pos}: {exc.msg}", offset=exc.pos) from exc
    leaves: list[int] = [0]
    node = _parse_node(data, depth=1, leaves=leaves)
    return Query(advanced=node)


def _parse_node(obj: object, depth: int, leaves: list[int]) -> QueryNode:
    if depth > MAX_TREE_DEPTH:
        raise QueryError(f"query tree deeper than {MAX_TREE_DEPTH} levels")
    if not isinstance(obj, dict):
        raise QueryError(f"criterion must be a JSON object, got {type(obj).__name__}")
    if len(obj) != 1:
        raise QueryError(
            'criterion objects take exactly one key; combine multiple criteria with "_and"'
        )
    key, value = next(iter(obj.items()))

    if key in ("_and", "_or"):
        if not isinstance(value, list) or not value:
            raise QueryError(f"{key!r} requires a non-empty list of criteria")
        children = tuple(_parse_node(child, depth + 1, leaves) for child in value)
        return Branch(combinator=key[1:], children=children)
    if key == "_not":
        return Branch(combinator="not", children=(_parse_node(value, depth + 1, leaves),))
    if key.startswith("_"):
        op = key[1:]
        if op not in LEAF_OPS:
            raise UnsupportedOperatorError(f"unsupported operator key {key!r}")
        if not isinstance(value, dict) or len(value) != 1:
            raise QueryError(f"{key!r} requires a single {{field: value}} object")
        field, scalar = next(iter(value.items()))
        return _make_leaf(field, op, scalar, leaves)
    return _make_leaf(key, "eq", value, leaves)


def _make_leaf(field: str, op: str, value: object, leaves: list[int]) -> Leaf:
    leaves[0] += 1
    if leaves[0] > MAX_LEAF_CRITERIA:
        raise QueryError(f"query has more than {MAX_LEAF_CRITERIA} leaf criteria")
    _check_field(field)
    return Leaf(field=field, op=op, value=_check_scalar(value, field))


def serialize_node(node: QueryNode) -> dict:
    """Render a query tree back to the provider's JSON criterion shape."""
    if isinstance(node, Leaf):
        if node.op == "eq":
            return {node.field: node.value}
        return {f"_{node.op}": {node.field: node.value}}
    if node.combinator == "not":
        return {"_not": serialize_node(node.children[0])}
    return {f"_{node.combinator}": [serialize_node(child) for child in node.children]}


def provider_criterion(query: Query) -> dict:
    """The ``q`` object sent to the provider for either query form."""
    if query.keyword is not None:
        return {"_or": [{"_text_any": {field: query.keyword}} for field in KEYWORD_FIELDS]}
    return serialize_node(query.advanced)


def validate(query: Query) -> None:
    """Re-check field names and guard limits on a programmatically built tree."""
    if query.keyword is not None:
        if not query.keyword.strip():
            raise EmptyQueryError("keyword query is empty")
        return

    leaves = 0

    def walk(node: QueryNode, depth: int) -> None:
        nonlocal leaves
        if depth > MAX_TREE_DEPTH:
            raise QueryError(f"query tree deeper than {MAX_TREE_DEPTH} levels")
        if isinstance(node, Leaf):
            leaves += 1
            _check_field(node.field)
        else:
            for child in node.children:
                walk(child, depth + 1)

    walk(query.advanced, 1)
    if leaves > MAX_LEAF_CRITERIA:
        raise QueryError(f"query has more than {MAX_LEAF_CRITERIA} leaf criteria")


def to_request(
    query: Query,
    page: int,
    per_page: int,
    fields: tuple[str, ...] = DEFAULT_FIELDS,
) -> str:
    """Canonical provider request body for one page of results.

    Canonical (sorted keys, compact) so that identical queries always
    produce byte-identical bodies.
    """
    if page < 1:
        raise BoundsError(f"page must be >= 1, got {page}")
    if not 1 <= per_page <= PROVIDER_MAX_PER_PAGE:
        raise BoundsError(f"per_page must be in [1, {PROVIDER_MAX_PER_PAGE}], got {per_page}")
    validate(query)
    body = {
        "f": sorted(fields),
        "o": {"page": page, "per_page": per_page},
        "q": provider_criterion(query),
    }
    return canonical_json(body)


def canonical_query_text(
    query: Query,
    fields: tuple[str, ...] = DEFAULT_FIELDS,
    endpoint: str = DEFAULT_ENDPOINT,
) -> str:
    """Page-independent canonical text identifying a retrieval; its hash is the snapshot id."""
    validate(query)
    return canonical_json(
        {"endpoint": endpoint, "f": sorted(fields), "q": provider_criterion(query)}
    )


def query_hash(
    query: Query,
    fields: tuple[str, ...] = DEFAULT_FIELDS,
    endpoint: str = DEFAULT_ENDPOINT,
) -> str:
    """Snapshot id for a query: SHA-256 of its canonical text."""
    return sha256_text(canonical_query_text(query, fields=fields, endpoint=endpoint))
