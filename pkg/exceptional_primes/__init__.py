"""Exceptional primes of elliptic curves over Q: traces, images and bounds."""

__version__ = "1.0.0"
