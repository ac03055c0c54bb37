"""Core package: models, services, configuration and utilities."""
