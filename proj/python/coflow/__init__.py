"""Coflow scheduling with exact rational arithmetic.

Instances, schedules and deadline profiles are JSON strings in the same format
as the ``coflow`` command line; rationals come back as ``"p/q"`` strings, see
``as_fraction``.
"""

from fractions import Fraction

from ._coflow import (
    OracleRefused,
    ProfileRejected,
    StructuralError,
    certify,
    decompose,
    deadlines,
    generate,
    opt,
    solve,
    verify,
)

__all__ = [
    "OracleRefused",
    "ProfileRejected",
    "StructuralError",
    "as_fraction",
    "certify",
    "decompose",
    "deadlines",
    "generate",
    "opt",
    "solve",
    "verify",
]


def as_fraction(text):
    return Fraction(text)
