"""Exact verification toolkit for moderately ramified actions of Z/pZ in characteristic p."""
