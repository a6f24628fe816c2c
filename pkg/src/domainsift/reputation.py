"""Spot-verification of flagged domains against a reputation provider.

Scores run 0-100; anything below 50 is treated as suspicious. Two providers
ship here: a local bad-list (membership means score 0) and a generic HTTP
JSON endpoint with an injectable fetch function so it can be exercised
without a live vendor. Provider failures mark a single result unknown and
never abort a batch.
"""

from __future__ import annotations

import csv
import json
import urllib.parse
import urllib.request
from dataclasses import dataclass

import numpy as np

SUSPICION_THRESHOLD = 50

VERDICT_SUSPICIOUS = "suspicious"
VERDICT_BENIGN = "benign"
VERDICT_UNKNOWN = "unknown"


class ProviderError(RuntimeError):
    """A provider could not produce a score for a domain."""


@dataclass(frozen=True, slots=True)
class ReputationResult:
    domain: str
    score: int | None  # None when the provider had no answer
    verdict: str
    provider: str
    note: str = ""


def classify_score(score):
    """Verdict for a 0-100 reputation score; scores below 50 are suspicious."""
    if score is None:
        return VERDICT_UNKNOWN
    return VERDICT_SUSPICIOUS if score < SUSPICION_THRESHOLD else VERDICT_BENIGN


class LocalListProvider:
    """Bad-list membership: listed domains score 0, everything else is unknown."""

    provider_id = "local-list"

    def __init__(self, bad_domains):
        self.bad_domains = frozenset(d.strip().lower() for d in bad_domains if d.strip())

    @classmethod
    def from_file(cls, path):
        """One domain per line; "#" starts a comment."""
        with open(path, encoding="utf-8") as fh:
            return cls(line.split("#", 1)[0] for line in fh)

    def lookup(self, domain):
        return 0 if domain.strip().lower() in self.bad_domains else None


class HTTPReputationProvider:
    """Generic JSON-over-HTTP scorer: GET url_template, expect {"score": n}.

    ``fetch`` takes a URL and returns the response body text; the default
    uses urllib. Tests inject a stub fetch, so no live endpoint is needed.
    """

    provider_id = "http"

    def __init__(self, url_template, fetch=None, timeout=10.0):
        if "{domain}" not in url_template:
            raise ValueError("url_template must contain a {domain} placeholder")
        self.url_template = url_template
        self.timeout = timeout
        self._fetch = fetch if fetch is not None else self._default_fetch

    def _default_fetch(self, url):
        with urllib.request.urlopen(url, timeout=self.timeout) as response:
            return response.read().decode("utf-8")

    def lookup(self, domain):
        url = self.url_template.format(domain=urllib.parse.quote(domain))
        try:
            body = self._fetch(url)
            score = json.loads(body)["score"]
        except Exception as exc:
            raise ProviderError(f"reputation lookup failed for {domain!r}: {exc}") from exc
        if not isinstance(score, int) or not 0 <= score <= 100:
            raise ProviderError(f"provider returned invalid score {score!r} for {domain!r}")
        return score


def check(domain, provider):
    """One domain against one provider; provider errors yield an unknown verdict."""
    try:
        score = provider.lookup(domain)
    except Exception as exc:
        return ReputationResult(
            domain=domain,
            score=None,
            verdict=VERDICT_UNKNOWN,
            provider=provider.provider_id,
            note=str(exc),
        )
    return ReputationResult(
        domain=domain,
        score=score,
        verdict=classify_score(score),
        provider=provider.provider_id,
    )


def sample_and_check(flagged, n, seed, provider):
    """Check a seeded uniform sample (without replacement) of flagged domains.

    ``flagged`` holds domain strings or records with a ``domain_part``.
    Results keep the input order of the sampled entries.
    """
    domains = [d if isinstance(d, str) else d.domain_part for d in flagged]
    if n > len(domains):
        raise ValueError(f"cannot sample {n} of {len(domains)} flagged domains")
    rng = np.random.default_rng(seed)
    picked = np.sort(rng.choice(len(domains), size=n, replace=False))
    return [check(domains[i], provider) for i in picked]


def write_reputation_csv(stream, results):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["domain", "score", "verdict", "provider"])
    for r in results:
        writer.writerow([r.domain, "" if r.score is None else r.score, r.verdict, r.provider])
