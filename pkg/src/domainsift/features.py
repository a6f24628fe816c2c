"""Lexical feature extraction for domain names.

Eight counting features are computed from each normalized domain string:
four totals (length, distinct characters, distinct letters, distinct digits)
and four ratios. Letter/digit counts are taken over string length, distinct
letter/digit counts over the distinct-character count. Letters are strictly
a-z and digits strictly 0-9; any other character (dot, hyphen, underscore)
contributes to length and distinct-character counts only.
"""

from __future__ import annotations

import csv

import numpy as np

from .base import ParamsMixin, check_matrix

FEATURE_NAMES = (
    "len",
    "uniq_chars",
    "uniq_letters",
    "uniq_numbers",
    "ratio_letters",
    "ratio_numbers",
    "ratio_uniq_letters",
    "ratio_uniq_numbers",
)

N_FEATURES = len(FEATURE_NAMES)

_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz")
_DIGITS = frozenset("0123456789")


def domain_features(domain):
    """Feature vector for one domain string as a float64 array of length 8."""
    if not isinstance(domain, str):
        raise TypeError(f"domain must be str, got {type(domain).__name__}")
    if not domain:
        raise ValueError("cannot extract features from an empty domain")
    n = len(domain)
    n_letters = 0
    n_digits = 0
    for ch in domain:
        if ch in _LETTERS:
            n_letters += 1
        elif ch in _DIGITS:
            n_digits += 1
    distinct = set(domain)
    u_chars = len(distinct)
    u_letters = len(distinct & _LETTERS)
    u_digits = len(distinct & _DIGITS)
    return np.array(
        [
            n,
            u_chars,
            u_letters,
            u_digits,
            n_letters / n,
            n_digits / n,
            u_letters / u_chars,
            u_digits / u_chars,
        ],
        dtype=np.float64,
    )


class FeatureExtractor(ParamsMixin):
    """Stateless transformer mapping domain strings to the 8-column matrix.

    Follows the fit/transform convention so it can sit first in a pipeline;
    fit only validates input and learns nothing.
    """

    def fit(self, domains, y=None):
        self._validate(domains)
        self.n_features_in_ = 0
        return self

    def transform(self, domains):
        self._validate(domains)
        out = np.empty((len(domains), N_FEATURES), dtype=np.float64)
        for i, domain in enumerate(domains):
            try:
                out[i] = domain_features(domain)
            except (TypeError, ValueError) as exc:
                raise type(exc)(f"row {i}: {exc}") from None
        return out

    def fit_transform(self, domains, y=None):
        return self.fit(domains, y).transform(domains)

    @staticmethod
    def _validate(domains):
        if isinstance(domains, str):
            raise TypeError("domains must be a sequence of strings, not a single str")


def extract_features(records_or_domains):
    """Feature matrix for DomainRecords or plain strings, plus label vector.

    Returns ``(X, y)`` where ``y`` is None unless every input record carries
    a label.
    """
    domains = []
    labels = []
    for item in records_or_domains:
        if isinstance(item, str):
            domains.append(item)
            labels.append(None)
        else:
            domains.append(item.domain_part)
            labels.append(item.label)
    X = FeatureExtractor().fit_transform(domains)
    if labels and all(label is not None for label in labels):
        return X, np.asarray(labels, dtype=np.int64)
    return X, None


def write_feature_csv(stream, X, y=None):
    """Write a feature matrix (optionally with labels) in the exchange format.

    Header is the canonical feature order plus "label" when y is given.
    The four count columns stay integral-looking ("12" not "12.0"); the four
    ratio columns always carry 6 decimal places.
    """
    X = check_matrix(X, n_features=N_FEATURES)
    names = list(FEATURE_NAMES)
    if y is not None:
        y = np.asarray(y)
        if y.shape != (X.shape[0],):
            raise ValueError(
                f"label vector has shape {y.shape}, expected ({X.shape[0]},)"
            )
        names.append("label")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(names)
    for i in range(X.shape[0]):
        row = [_format_value(v, j) for j, v in enumerate(X[i])]
        if y is not None:
            row.append(str(int(y[i])))
        writer.writerow(row)


# first 4 columns are counts, last 4 ratios
_N_COUNT_COLUMNS = 4


def _format_value(v, column):
    v = float(v)
    if column < _N_COUNT_COLUMNS and v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return f"{v:.6f}"


def read_feature_csv(stream):
    """Read a feature CSV written by :func:`write_feature_csv`.

    Returns ``(X, y)`` with ``y`` None when the file has no label column.
    The eight feature columns must appear first and in canonical order.
    """
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("feature CSV is empty: no header row") from None
    header = [h.strip() for h in header]
    if tuple(header[:N_FEATURES]) != FEATURE_NAMES:
        raise ValueError(
            f"feature CSV header {header!r} does not start with the expected "
            f"columns {list(FEATURE_NAMES)!r}"
        )
    has_label = len(header) > N_FEATURES and header[N_FEATURES] == "label"
    if len(header) > N_FEATURES and not has_label:
        raise ValueError(f"unexpected trailing columns in feature CSV: {header[N_FEATURES:]!r}")

    rows = []
    labels = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        expected = N_FEATURES + (1 if has_label else 0)
        if len(row) != expected:
            raise ValueError(f"row {row_no}: expected {expected} values, got {len(row)}")
        rows.append([float(v) for v in row[:N_FEATURES]])
        if has_label:
            labels.append(int(row[N_FEATURES]))
    X = np.asarray(rows, dtype=np.float64).reshape(len(rows), N_FEATURES)
    y = np.asarray(labels, dtype=np.int64) if has_label else None
    return X, y
