"""Pydantic records for degree data, reports and input files."""
