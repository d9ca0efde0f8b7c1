"""Numerical workbench for OPUC sum rules and circular ensembles."""
