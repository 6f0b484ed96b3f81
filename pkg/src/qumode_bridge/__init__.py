"""Bridging continuous-variable qumodes and qubit registers."""
