"""Corpus format readers and writers: category files, LibSVM, CSV, ARFF.

All readers are deterministic, never reorder documents, and raise
:class:`~jatecs.errors.ParseError` (which carries the line number) on bad
input.  Files are UTF-8; CR-LF is tolerated on read, LF is emitted on write.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError
from .index import Index, build_index

TRAINING = "Training"
TEST = "Test"


@dataclass(frozen=True)
class RawDocument:
    """One corpus document before indexing.

    `features` carries pre-extracted (featureText, count, weight) triples for
    formats whose attributes are already features (ARFF numerics, LibSVM
    pairs); text-based features come from running an extractor over `text`.
    """

    name: str
    text: str
    labels: tuple
    set_type: str = TRAINING
    features: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class SparseInstance:
    """One LibSVM line: label tokens plus (1-based index, value) pairs."""

    labels: tuple
    pairs: tuple


def read_category_file(path) -> list:
    """One category label per non-empty line; `#`-prefixed lines are skipped."""
    labels = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n").strip()
            if not line or line.startswith("#"):
                continue
            if line in seen:
                raise ParseError(path, line_no, f"duplicate label {line!r}")
            seen.add(line)
            labels.append(line)
    if not labels:
        raise ParseError(path, 0, "no category labels in file")
    return labels


# -- LibSVM / SvmLight -------------------------------------------------------


def _parse_libsvm_line(path, line_no, raw, categories):
    body = raw
    comment = body.find("#")
    if comment >= 0:
        body = body[:comment]
        if not body.strip():
            return None  # comment-only line
    if body == "":
        return None
    if body[0].isspace():
        label_field, pair_tokens = "", body.split()
    else:
        tokens = body.split()
        label_field, pair_tokens = tokens[0], tokens[1:]
    labels = tuple(t for t in label_field.split(",") if t)
    if categories is not None:
        for lab in labels:
            if lab not in categories:
                raise ParseError(path, line_no, f"unknown label {lab!r}")
    pairs = []
    prev = 0
    for tok in pair_tokens:
        idx_s, sep, val_s = tok.partition(":")
        if not sep:
            raise ParseError(path, line_no, f"missing colon in pair {tok!r}")
        try:
            idx = int(idx_s)
        except ValueError:
            raise ParseError(path, line_no,
                             f"unparsable feature index {idx_s!r}") from None
        try:
            val = float(val_s)
        except ValueError:
            raise ParseError(path, line_no,
                             f"unparsable value {val_s!r}") from None
        if idx < 1:
            raise ParseError(path, line_no, f"feature index {idx} is not >= 1")
        if idx <= prev:
            raise ParseError(path, line_no,
                             f"indices not ascending at {tok!r}")
        if not math.isfinite(val):
            raise ParseError(path, line_no, f"non-finite value {val_s!r}")
        prev = idx
        pairs.append((idx, val))
    return SparseInstance(labels=labels, pairs=tuple(pairs))


def read_libsvm(path, categories=None) -> list:
    """Parse a LibSVM/SvmLight file into instances, in file order.

    The first whitespace-separated field holds comma-joined label tokens
    (the multilabel extension; a single token is the degenerate case); a
    line starting with whitespace has no labels.  `#` starts a comment.
    """
    instances = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for line_no, raw in enumerate(fh, start=1):
            raw = raw.rstrip("\r\n")
            if raw == "":
                continue
            inst = _parse_libsvm_line(path, line_no, raw, categories)
            if inst is not None:
                instances.append(inst)
    return instances


def format_libsvm_instance(inst: SparseInstance) -> str:
    label_field = ",".join(inst.labels)
    pair_field = " ".join(f"{i}:{v!r}" for i, v in inst.pairs)
    if pair_field:
        line = f"{label_field} {pair_field}"
    else:
        line = label_field or " "
    return line


def write_libsvm(instances, path) -> None:
    """Write instances so that parsing the file reproduces them exactly."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for inst in instances:
            fh.write(format_libsvm_instance(inst) + "\n")


# -- CSV ----------------------------------------------------------------------


def read_csv(path, separator="\t", categories=None, set_type=TRAINING) -> list:
    """Separator-delimited corpus: docName, comma-joined labels, text.

    The text field is the unescaped remainder of the line after the second
    separator, so it may itself contain the separator.  The labels field may
    be empty.
    """
    if len(separator) != 1:
        raise ValidationError("CSV separator must be a single character")
    docs = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if line == "":
                continue
            parts = line.split(separator, 2)
            if len(parts) < 3:
                raise ParseError(path, line_no, "missing text field "
                                 f"(expected 3 {separator!r}-separated fields)")
            name, label_field, text = parts
            if not name:
                raise ParseError(path, line_no, "empty document name")
            labels = tuple(t for t in label_field.split(",") if t)
            if categories is not None:
                for lab in labels:
                    if lab not in categories:
                        raise ParseError(path, line_no, f"unknown label {lab!r}")
            docs.append(RawDocument(name=name, text=text, labels=labels,
                                    set_type=set_type))
    return docs


# -- ARFF ----------------------------------------------------------------------

NUMERIC = "numeric"
STRING = "string"
NOMINAL = "nominal"

_NUMERIC_SYNONYMS = {"numeric", "real", "integer"}


@dataclass(frozen=True)
class ArffAttribute:
    name: str
    type: str                  # NUMERIC, STRING or NOMINAL
    values: tuple = ()         # declared values, NOMINAL only


def _unquote(value: str) -> str:
    v = value.strip()
    if len(v) >= 2 and v[0] == v[-1] and v[0] in "'\"":
        return v[1:-1]
    return v


def _split_quoted(body: str, sep: str) -> list:
    """Split on sep outside single/double quotes."""
    parts = []
    buf = []
    quote = None
    for ch in body:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
            buf.append(ch)
        elif ch == sep:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    return parts


def _parse_attribute(path, line_no, rest) -> ArffAttribute:
    rest = rest.strip()
    if rest.startswith(("'", '"')):
        quote = rest[0]
        end = rest.find(quote, 1)
        if end < 0:
            raise ParseError(path, line_no, "unterminated attribute name quote")
        name, type_s = rest[1:end], rest[end + 1:].strip()
    else:
        split = rest.split(None, 1)
        if len(split) != 2:
            raise ParseError(path, line_no, "attribute declaration needs a type")
        name, type_s = split[0], split[1].strip()
    if not name:
        raise ParseError(path, line_no, "empty attribute name")
    if type_s.startswith("{"):
        if not type_s.endswith("}"):
            raise ParseError(path, line_no, "unterminated nominal value list")
        values = tuple(_unquote(v) for v in _split_quoted(type_s[1:-1], ","))
        if any(not v for v in values):
            raise ParseError(path, line_no, "empty nominal value")
        return ArffAttribute(name=name, type=NOMINAL, values=values)
    kind = type_s.lower()
    if kind in _NUMERIC_SYNONYMS:
        return ArffAttribute(name=name, type=NUMERIC)
    if kind == STRING:
        return ArffAttribute(name=name, type=STRING)
    raise ParseError(path, line_no, f"unsupported attribute type {type_s!r}")


def _class_attribute_index(attributes) -> int | None:
    for i, attr in enumerate(attributes):
        if attr.name.lower() == "class":
            return i
    last_nominal = None
    for i, attr in enumerate(attributes):
        if attr.type == NOMINAL:
            last_nominal = i
    return last_nominal


def _row_to_document(path, line_no, attributes, class_idx, values, ordinal):
    """values: {attribute index: raw string value}, missing entries absent."""
    text_parts = []
    features = []
    labels = ()
    for i, attr in enumerate(attributes):
        if i not in values:
            continue
        raw = _unquote(values[i])
        if raw == "?":
            continue
        if i == class_idx:
            if raw not in attr.values:
                raise ParseError(path, line_no,
                                 f"nominal value {raw!r} not in declared set")
            labels = (raw,)
        elif attr.type == STRING:
            if raw:
                text_parts.append(raw)
        elif attr.type == NOMINAL:
            if raw not in attr.values:
                raise ParseError(path, line_no,
                                 f"nominal value {raw!r} not in declared set")
            features.append((f"{attr.name}={raw}", 1, 1.0))
        else:
            try:
                v = float(raw)
            except ValueError:
                raise ParseError(path, line_no,
                                 f"unparsable numeric value {raw!r}") from None
            if v != 0.0:
                # the value acts as the weight; occurrences are its ceiling
                features.append((attr.name, max(1, math.ceil(v)), v))
    return RawDocument(name=f"doc{ordinal}", text=" ".join(text_parts),
                       labels=labels, features=tuple(features))


def read_arff(path):
    """Parse the ARFF subset: header, dense and sparse `{i v}` data rows.

    Returns (attribute schema, documents).  The class attribute is the one
    named `class` if declared, otherwise the last nominal attribute.  String
    attributes concatenate into the document text; numeric attributes become
    pre-extracted features named after the attribute; other nominal
    attributes become `name=value` presence features.
    """
    attributes: list = []
    docs: list = []
    in_data = False
    class_idx: int | None = None
    ordinal = 0
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n").strip()
            if not line or line.startswith("%"):
                continue
            lower = line.lower()
            if not in_data:
                if lower.startswith("@relation"):
                    continue
                if lower.startswith("@attribute"):
                    attributes.append(
                        _parse_attribute(path, line_no, line[len("@attribute"):]))
                    continue
                if lower == "@data":
                    if not attributes:
                        raise ParseError(path, line_no, "@data before any @attribute")
                    class_idx = _class_attribute_index(attributes)
                    in_data = True
                    continue
                raise ParseError(path, line_no, f"unexpected header line {line!r}")
            if line.startswith("{"):
                if not line.endswith("}"):
                    raise ParseError(path, line_no, "unterminated sparse row")
                body = line[1:-1].strip()
                values: dict = {}
                if body:
                    for cell in _split_quoted(body, ","):
                        cell = cell.strip()
                        split = cell.split(None, 1)
                        if len(split) != 2:
                            raise ParseError(path, line_no,
                                             f"malformed sparse entry {cell!r}")
                        try:
                            idx = int(split[0])
                        except ValueError:
                            raise ParseError(path, line_no,
                                             f"unparsable sparse index {split[0]!r}"
                                             ) from None
                        if not 0 <= idx < len(attributes):
                            raise ParseError(path, line_no,
                                             f"sparse index {idx} out of range")
                        if idx in values:
                            raise ParseError(path, line_no,
                                             f"duplicate sparse index {idx}")
                        values[idx] = split[1]
                else:
                    values = {}
            else:
                cells = _split_quoted(line, ",")
                if len(cells) != len(attributes):
                    raise ParseError(path, line_no,
                                     f"data row arity mismatch: {len(cells)} values "
                                     f"for {len(attributes)} attributes")
                values = dict(enumerate(cells))
            docs.append(_row_to_document(path, line_no, attributes, class_idx,
                                         values, ordinal))
            ordinal += 1
    if not in_data:
        raise ParseError(path, 0, "no @data section")
    return attributes, docs


# -- glue: raw documents -> index ---------------------------------------------


def instances_to_documents(instances) -> list:
    """LibSVM instances as documents: feature text is the 1-based index."""
    docs = []
    for i, inst in enumerate(instances):
        feats = tuple((str(idx), max(1, math.ceil(v)), v)
                      for idx, v in inst.pairs if v != 0.0)
        docs.append(RawDocument(name=f"doc{i}", text="", labels=inst.labels,
                                features=feats))
    return docs


def documents_to_index(documents, categories, extractor=None) -> Index:
    """Run the extractor over each document and build the index.

    Pre-extracted features (ARFF numerics, LibSVM pairs) are appended after
    the extracted text features, in document order.
    """
    docs = []
    labels = []
    for doc in documents:
        feats = list(extractor.extract(doc.text)) if extractor is not None else []
        feats.extend(doc.features)
        docs.append((doc.name, feats))
        labels.append((doc.name, list(doc.labels)))
    return build_index(docs, labels, categories)


def read_corpus(reader, path, categories, separator="\t") -> list:
    """Dispatch on reader name: libsvm, csv or arff."""
    if reader == "libsvm":
        if not os.path.exists(path):
            raise ParseError(path, 0, "input file not found")
        return instances_to_documents(read_libsvm(path, categories))
    if reader == "csv":
        if not os.path.exists(path):
            raise ParseError(path, 0, "input file not found")
        return read_csv(path, separator=separator, categories=categories)
    if reader == "arff":
        if not os.path.exists(path):
            raise ParseError(path, 0, "input file not found")
        _, docs = read_arff(path)
        for doc in docs:
            for lab in doc.labels:
                if lab not in categories:
                    raise ParseError(path, 0, f"unknown label {lab!r}")
        return docs
    raise ValidationError(f"unknown reader {reader!r}")
