"""Unit test package for explicit_heat."""
