"""Exact quantum cluster algebras of sl3-webs on unpunctured marked surfaces."""

__version__ = "0.1.0"
