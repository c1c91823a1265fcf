"""Shared envelope for certificate files.

Every certificate serializes as ``{type, schema_version, scheme_params,
payload}``.  The scheme parameters pin the deterministic generation scheme,
so a verifier can refuse certificates produced under a different family.
"""

from __future__ import annotations

SCHEMA_VERSION = 1

CERTIFICATE_KINDS = ("witness", "lc2", "decomposition", "scattered")


class CertificateFormatError(ValueError):
    """Envelope malformed or produced under an incompatible scheme."""


def scheme_params() -> dict:
    return {
        "name": "diagonal-lenlex-greedy",
        "version": 1,
        "dense_tail_cycle": "20",
        "approximant_tail_digit": "0",
        "depth_rule": "i + ceil_log3(n + 1) + 2",
        "tag": "2 (02)^n 22 (02)^i 22",
    }


def wrap(kind: str, payload: dict) -> dict:
    if kind not in CERTIFICATE_KINDS:
        raise CertificateFormatError(f"unknown certificate kind: {kind!r}")
    return {
        "type": kind,
        "schema_version": SCHEMA_VERSION,
        "scheme_params": scheme_params(),
        "payload": payload,
    }


def unwrap(doc: dict, kind: str) -> dict:
    if not isinstance(doc, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    if doc.get("type") != kind:
        raise CertificateFormatError(f"expected a {kind!r} certificate, got {doc.get('type')!r}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise CertificateFormatError(f"unsupported schema version: {doc.get('schema_version')!r}")
    if doc.get("scheme_params") != scheme_params():
        raise CertificateFormatError("certificate was produced under a different scheme")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise CertificateFormatError("certificate payload must be a JSON object")
    return payload
