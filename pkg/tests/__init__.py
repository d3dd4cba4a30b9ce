"""Test package for exceptional-primes."""
