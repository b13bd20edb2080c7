"""Exact computational algebra for involutions of capacity 4.

Builds the discriminant Pfister form of an algebra with involution, decides
total decomposability over Q and finite fields, and produces independently
checkable quaternion tensor decomposition certificates.
"""

from .fields import QQ, GF, FieldCtx, FieldElem, multiquadratic  # noqa: F401

__version__ = "0.1.0"
