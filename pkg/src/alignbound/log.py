"""Event logs as variant multisets, plus XES and CSV parsing.

A trace is a tuple of activity labels (plain strings, interned on
construction).  An :class:`EventLog` stores each distinct trace (variant)
with its multiplicity; parsing order does not matter because every consumer
iterates variants in a canonical order (length first, then lexicographic).
"""

import csv
import io
import sys
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass
from xml.sax.saxutils import quoteattr

from .errors import LogParseError

Activity = str
Trace = tuple[Activity, ...]

CONCEPT_NAME = "concept:name"


def make_trace(activities) -> Trace:
    return tuple(sys.intern(str(a)) for a in activities)


def trace_sort_key(trace: Trace):
    """Canonical trace order: shorter first, then lexicographic by labels."""
    return (len(trace), trace)


def format_trace(trace: Trace) -> str:
    return "<" + ",".join(trace) + ">"


@dataclass(frozen=True)
class EventLog:
    """Finite multiset of traces, stored as variant -> multiplicity."""

    variants: dict[Trace, int]

    def __post_init__(self):
        for trace, mult in self.variants.items():
            if mult < 1:
                raise ValueError(
                    f"multiplicity must be >= 1, got {mult} for {format_trace(trace)}"
                )

    @classmethod
    def from_traces(cls, traces) -> "EventLog":
        return cls(dict(Counter(make_trace(t) for t in traces)))

    @property
    def total_traces(self) -> int:
        return sum(self.variants.values())

    @property
    def variant_traces(self) -> tuple[Trace, ...]:
        """Distinct traces in canonical order."""
        return tuple(sorted(self.variants, key=trace_sort_key))

    def multiplicity(self, trace) -> int:
        return self.variants.get(tuple(trace), 0)


def _local(tag: str) -> str:
    # strip a namespace prefix like {http://...}trace
    return tag.rsplit("}", 1)[-1]


def parse_xes(data: bytes) -> EventLog:
    """Parse the XES subset: trace elements holding events whose activity is
    the concept:name string attribute.  Lifecycle and other attributes are
    ignored.  An empty log element yields a log with zero variants.

    :raises LogParseError: on malformed XML (message includes the position)
        or an event without a usable concept:name.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise LogParseError(f"malformed XES: {exc}") from None
    traces = []
    for elem in root.iter():
        if _local(elem.tag) != "trace":
            continue
        activities = []
        for child in elem:
            if _local(child.tag) != "event":
                continue
            name = None
            for attr in child:
                if _local(attr.tag) == "string" and attr.get("key") == CONCEPT_NAME:
                    name = attr.get("value")
            if not name:
                raise LogParseError(
                    f"event without a non-empty {CONCEPT_NAME} in trace {len(traces)}"
                )
            activities.append(name)
        traces.append(activities)
    return EventLog.from_traces(traces)


def parse_csv(
    data: bytes,
    case_column: str = "case",
    activity_column: str = "activity",
    order_column: str = "order",
) -> EventLog:
    """Parse a headered CSV into an event log.

    Rows are grouped by ``case_column`` and sorted within each case by
    ``order_column``; the sort is numeric when every order value in the file
    parses as an integer, lexicographic otherwise.  Ties keep file order
    (stable sort).  One case group becomes one trace.

    :raises LogParseError: missing header or column (named in the message),
        or a row with missing cells (reported with its line number).
    """
    text = data.decode("utf-8")
    reader = csv.DictReader(io.StringIO(text))
    if not reader.fieldnames:
        raise LogParseError("CSV input has no header row")
    for col in (case_column, activity_column, order_column):
        if col not in reader.fieldnames:
            raise LogParseError(
                f"missing column {col!r}; header has {reader.fieldnames}"
            )
    rows = []
    for line_no, row in enumerate(reader, start=2):
        case = row.get(case_column)
        activity = row.get(activity_column)
        order = row.get(order_column)
        if case is None or order is None or not activity:
            raise LogParseError(f"unparseable row at line {line_no}")
        rows.append((case, order, activity))

    numeric = True
    for _, order, _ in rows:
        try:
            int(order)
        except ValueError:
            numeric = False
            break

    cases: dict[str, list] = {}
    for idx, (case, order, activity) in enumerate(rows):
        key = int(order) if numeric else order
        cases.setdefault(case, []).append((key, idx, activity))

    traces = []
    for case in cases:
        events = sorted(cases[case], key=lambda e: e[0])
        traces.append([a for _, _, a in events])
    return EventLog.from_traces(traces)


def write_log_csv(
    log: EventLog,
    case_column: str = "case",
    activity_column: str = "activity",
    order_column: str = "order",
) -> bytes:
    """Serialize a log to the CSV interchange format, one case per trace
    instance (variants are repeated according to their multiplicity).

    Empty traces cannot be carried by CSV; use the XES writer for those.
    """
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([case_column, activity_column, order_column])
    case_no = 0
    for trace in sorted(log.variants, key=trace_sort_key):
        if not trace:
            raise ValueError("CSV interchange cannot represent an empty trace")
        for _ in range(log.variants[trace]):
            case_no += 1
            for pos, activity in enumerate(trace, start=1):
                writer.writerow([f"case-{case_no}", activity, pos])
    return buf.getvalue().encode("utf-8")


def write_log_xes(log: EventLog) -> bytes:
    """Serialize a log to the XES subset understood by :func:`parse_xes`."""
    out = ['<?xml version="1.0" encoding="UTF-8"?>', '<log xes.version="1.0">']
    case_no = 0
    for trace in sorted(log.variants, key=trace_sort_key):
        for _ in range(log.variants[trace]):
            case_no += 1
            out.append("  <trace>")
            out.append(
                f'    <string key="{CONCEPT_NAME}" value="case-{case_no}"/>'
            )
            for activity in trace:
                out.append(
                    "    <event><string key=%s value=%s/></event>"
                    % (quoteattr(CONCEPT_NAME), quoteattr(activity))
                )
            out.append("  </trace>")
    out.append("</log>")
    out.append("")
    return "\n".join(out).encode("utf-8")
