"""Exact total K-theory computations and verification."""

from ._totalk import (
    ParseError,
    TotalKError,
    canonical_document,
    check_document,
    cokernel,
    de_conjugation,
    fixture_group,
    fixture_names,
    main,
    odd_part,
    smith_normal_form,
    verify,
)

__all__ = [
    "ParseError",
    "TotalKError",
    "canonical_document",
    "check_document",
    "cokernel",
    "de_conjugation",
    "fixture_group",
    "fixture_names",
    "main",
    "odd_part",
    "smith_normal_form",
    "verify",
]
