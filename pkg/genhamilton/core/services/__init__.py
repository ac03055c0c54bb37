"""Group engine, generating graphs, character bounds and criteria."""
