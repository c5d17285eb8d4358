"""Synthesis, scheduling, verification and cost analysis of quantum modular
exponentiation circuits on abstract-concurrent (AC) and neighbor-only
two-qubit (NTC) architectures."""

__version__ = "0.1.0"
