"""Hidden translation and orbit coset simulation."""
