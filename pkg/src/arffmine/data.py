"""ARFF datasets: attribute schema, instance matrix, parsing and writing.

A dataset holds its instances in a single float64 matrix. Numeric cells are
stored as their value, nominal cells as the 0-based index into the attribute's
declared value list, and missing cells ('?') as NaN. String attributes keep
their raw text in a per-column side table, with the matrix cell holding the
row index (or NaN when missing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NUMERIC = "numeric"
NOMINAL = "nominal"
STRING = "string"


class ArffError(ValueError):
    """Raised for any malformed ARFF input; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Attribute:
    """One declared attribute: name, kind and (for nominals) its value list."""

    name: str
    kind: str
    index: int
    values: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ArffError("attribute name must be non-empty")
        if self.kind not in (NUMERIC, NOMINAL, STRING):
            raise ArffError(f"unknown attribute kind {self.kind!r}")
        if self.kind == NOMINAL:
            if not self.values:
                raise ArffError(f"nominal attribute {self.name!r} has no values")
            if len(set(self.values)) != len(self.values):
                raise ArffError(f"nominal attribute {self.name!r} has duplicate values")

    def value_index(self, token):
        try:
            return self.values.index(token)
        except ValueError:
            raise ArffError(
                f"value {token!r} not in declared set for attribute {self.name!r}"
            ) from None


class Dataset:
    """Parsed relation: schema, instance matrix and the class-attribute index.

    Immutable by convention: operations that change the view (class index,
    row subsets) return new Dataset objects sharing or copying the matrix.
    """

    def __init__(self, relation, attributes, X, string_tables=None, class_index=None):
        self.relation = relation
        self.attributes = list(attributes)
        self.X = np.asarray(X, dtype=np.float64)
        if self.X.ndim != 2 or self.X.shape[1] != len(self.attributes):
            raise ValueError("instance matrix shape does not match attribute count")
        self.string_tables = string_tables or {}
        if class_index is None:
            class_index = len(self.attributes) - 1
        if not 0 <= class_index < len(self.attributes):
            raise IndexError(
                f"class index {class_index} out of range for {len(self.attributes)} attributes"
            )
        self.class_index = class_index

    # -- basic accessors ---------------------------------------------------

    @property
    def n_instances(self):
        return self.X.shape[0]

    @property
    def n_attributes(self):
        return len(self.attributes)

    @property
    def class_attribute(self):
        return self.attributes[self.class_index]

    def column(self, j):
        return self.X[:, j]

    def class_codes(self):
        """Class column as int codes; raises if any class cell is missing."""
        col = self.X[:, self.class_index]
        if np.isnan(col).any():
            raise ValueError("dataset has instances with a missing class value")
        return col.astype(np.intp)

    def feature_indices(self):
        return [j for j in range(self.n_attributes) if j != self.class_index]

    # -- views and subsets ---------------------------------------------------

    def with_class_index(self, index):
        if not 0 <= index < self.n_attributes:
            raise IndexError(
                f"class index {index} out of range for {self.n_attributes} attributes"
            )
        return Dataset(self.relation, self.attributes, self.X, self.string_tables, index)

    def subset(self, row_indices):
        rows = np.asarray(row_indices, dtype=np.intp)
        return Dataset(
            self.relation, self.attributes, self.X[rows], self.string_tables, self.class_index
        )

    # -- cell formatting -----------------------------------------------------

    def cell_text(self, i, j):
        """Render cell (i, j) back to its ARFF token, '?' for missing."""
        v = self.X[i, j]
        if math.isnan(v):
            return "?"
        attr = self.attributes[j]
        if attr.kind == NOMINAL:
            return attr.values[int(v)]
        if attr.kind == STRING:
            return self.string_tables[j][int(v)]
        if v == int(v) and abs(v) < 1e15:
            return str(int(v))
        return repr(float(v))

    def equals(self, other):
        """Structural equality: schema, class index and all cells (NaN == NaN)."""
        if not isinstance(other, Dataset):
            return False
        if self.relation != other.relation or self.class_index != other.class_index:
            return False
        if self.attributes != other.attributes:
            return False
        if self.X.shape != other.X.shape:
            return False
        a, b = self.X, other.X
        same = (a == b) | (np.isnan(a) & np.isnan(b))
        if not same.all():
            return False
        for j, tab in self.string_tables.items():
            col = self.X[:, j]
            other_tab = other.string_tables.get(j, [])
            for i in range(self.n_instances):
                if not math.isnan(col[i]):
                    if tab[int(col[i])] != other_tab[int(other.X[i, j])]:
                        return False
        return True


@dataclass
class AttributeSummary:
    name: str
    kind: str
    distinct: int
    missing: int


@dataclass
class DatasetSummary:
    relation: str
    n_instances: int
    n_attributes: int
    attributes: list[AttributeSummary] = field(default_factory=list)
    class_distribution: dict[str, int] = field(default_factory=dict)

    def to_dict(self):
        return {
            "relation": self.relation,
            "instances": self.n_instances,
            "attributes": self.n_attributes,
            "attribute_details": [
                {"name": a.name, "kind": a.kind, "distinct": a.distinct, "missing": a.missing}
                for a in self.attributes
            ],
            "class_distribution": self.class_distribution,
        }


def summarize(ds: Dataset) -> DatasetSummary:
    """Exact per-attribute distinct/missing counts plus the class label distribution."""
    summary = DatasetSummary(ds.relation, ds.n_instances, ds.n_attributes)
    for attr in ds.attributes:
        col = ds.X[:, attr.index]
        missing = int(np.isnan(col).sum())
        present = col[~np.isnan(col)]
        summary.attributes.append(
            AttributeSummary(attr.name, attr.kind, int(np.unique(present).size), missing)
        )
    cls = ds.class_attribute
    if cls.kind == NOMINAL:
        col = ds.X[:, ds.class_index]
        counts = {v: 0 for v in cls.values}
        for v in col[~np.isnan(col)]:
            counts[cls.values[int(v)]] += 1
        summary.class_distribution = counts
    return summary


def set_class_index(ds: Dataset, index: int) -> Dataset:
    return ds.with_class_index(index)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_NUMERIC_TYPES = {"numeric", "real", "integer"}


def _unquote(token, line):
    if len(token) >= 2 and token[0] in "'\"" and token[-1] == token[0]:
        body = token[1:-1]
        out = []
        i = 0
        while i < len(body):
            c = body[i]
            if c == "\\" and i + 1 < len(body):
                out.append(body[i + 1])
                i += 2
            else:
                out.append(c)
                i += 1
        return "".join(out)
    return token


def _split_csv(text, line):
    """Split a data row on commas, honoring quotes and backslash escapes."""
    cells = []
    buf = []
    quote = None
    i = 0
    while i < len(text):
        c = text[i]
        if quote:
            if c == "\\" and i + 1 < len(text):
                buf.append(c)
                buf.append(text[i + 1])
                i += 2
                continue
            if c == quote:
                quote = None
            buf.append(c)
        elif c in "'\"":
            quote = c
            buf.append(c)
        elif c == ",":
            cells.append("".join(buf).strip())
            buf = []
        else:
            buf.append(c)
        i += 1
    if quote:
        raise ArffError("unterminated quote", line)
    cells.append("".join(buf).strip())
    return cells


def _parse_attribute(rest, index, line):
    rest = rest.strip()
    if not rest:
        raise ArffError("@attribute needs a name and a type", line)
    # attribute name: quoted token or run up to whitespace
    if rest[0] in "'\"":
        quote = rest[0]
        i = 1
        while i < len(rest):
            if rest[i] == "\\":
                i += 2
                continue
            if rest[i] == quote:
                break
            i += 1
        else:
            raise ArffError("unterminated quote", line)
        name = _unquote(rest[: i + 1], line)
        type_part = rest[i + 1 :].strip()
    else:
        parts = rest.split(None, 1)
        if len(parts) < 2:
            raise ArffError("@attribute needs a name and a type", line)
        name, type_part = parts[0], parts[1].strip()
    if not name:
        raise ArffError("attribute name must be non-empty", line)

    if type_part.startswith("{"):
        if not type_part.endswith("}"):
            raise ArffError("nominal value list must end with '}'", line)
        inner = type_part[1:-1]
        raw = _split_csv(inner, line)
        values = tuple(_unquote(v, line) for v in raw)
        if any(v == "" for v in values):
            raise ArffError("empty nominal value", line)
        if len(set(values)) != len(values):
            raise ArffError(f"duplicate nominal value in attribute {name!r}", line)
        return Attribute(name, NOMINAL, index, values)

    kind_token = type_part.split()[0].lower() if type_part else ""
    if kind_token in _NUMERIC_TYPES:
        return Attribute(name, NUMERIC, index)
    if kind_token == "string":
        return Attribute(name, STRING, index)
    if kind_token == "date":
        raise ArffError(f"unsupported attribute type 'date' for attribute {name!r}", line)
    raise ArffError(f"unsupported attribute type {type_part!r} for attribute {name!r}", line)


def parse_arff(text: str) -> Dataset:
    """Parse a complete ARFF document into a Dataset.

    Keywords match case-insensitively, '%' lines are comments, '?' is a
    missing cell, and single- or double-quoted tokens are unquoted. The
    class attribute defaults to the last attribute. Rejects 'date' and
    sparse-format rows; every rejection names the offending line.
    """
    relation = None
    attributes = []
    string_tables = {}
    rows = []
    in_data = False
    names_seen = set()
    lineno = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n").strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            lowered = line.lower()
            if lowered.startswith("@relation"):
                rest = line[len("@relation") :].strip()
                if not rest:
                    raise ArffError("@relation needs a name", lineno)
                relation = _unquote(rest, lineno)
            elif lowered.startswith("@attribute"):
                attr = _parse_attribute(line[len("@attribute") :], len(attributes), lineno)
                if attr.name in names_seen:
                    raise ArffError(f"duplicate attribute name {attr.name!r}", lineno)
                names_seen.add(attr.name)
                if attr.kind == STRING:
                    string_tables[attr.index] = []
                attributes.append(attr)
            elif lowered.startswith("@data"):
                if not attributes:
                    raise ArffError("@data before any @attribute declaration", lineno)
                in_data = True
            else:
                raise ArffError(f"unrecognized header line {line!r}", lineno)
            continue

        # data section
        if line.startswith("{"):
            raise ArffError("sparse-format rows are not supported", lineno)
        cells = _split_csv(line, lineno)
        if len(cells) != len(attributes):
            raise ArffError(
                f"row has {len(cells)} cells, expected {len(attributes)}", lineno
            )
        row = np.empty(len(attributes), dtype=np.float64)
        for j, cell in enumerate(cells):
            token = _unquote(cell, lineno)
            if token == "?" and cell == "?":
                row[j] = np.nan
                continue
            attr = attributes[j]
            if attr.kind == NUMERIC:
                try:
                    row[j] = float(token)
                except ValueError:
                    raise ArffError(
                        f"invalid numeric value {token!r} for attribute {attr.name!r}",
                        lineno,
                    ) from None
            elif attr.kind == NOMINAL:
                try:
                    row[j] = attr.values.index(token)
                except ValueError:
                    raise ArffError(
                        f"value {token!r} not in declared set for attribute {attr.name!r}",
                        lineno,
                    ) from None
            else:
                table = string_tables[j]
                row[j] = len(table)
                table.append(token)
        rows.append(row)

    if relation is None:
        raise ArffError("missing @relation declaration", max(lineno, 1))
    if not in_data:
        raise ArffError("missing @data section", max(lineno, 1))
    X = np.vstack(rows) if rows else np.empty((0, len(attributes)))
    return Dataset(relation, attributes, X, string_tables)


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------

_PLAIN_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.+<>=/:*&^|!")


def _quote_token(token):
    if token and all(c in _PLAIN_CHARS for c in token) and token != "?":
        return token
    escaped = token.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def write_arff(ds: Dataset) -> str:
    """Serialize a Dataset so that parse_arff maps the text back to an equal one."""
    lines = [f"@relation {_quote_token(ds.relation)}", ""]
    for attr in ds.attributes:
        name = _quote_token(attr.name)
        if attr.kind == NOMINAL:
            vals = ",".join(_quote_token(v) for v in attr.values)
            lines.append(f"@attribute {name} {{{vals}}}")
        else:
            lines.append(f"@attribute {name} {attr.kind}")
    lines.append("")
    lines.append("@data")
    for i in range(ds.n_instances):
        cells = []
        for j, attr in enumerate(ds.attributes):
            v = ds.X[i, j]
            if math.isnan(v):
                cells.append("?")
            elif attr.kind == NUMERIC:
                cells.append(ds.cell_text(i, j))
            else:
                cells.append(_quote_token(ds.cell_text(i, j)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def load_arff(path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return parse_arff(fh.read())
