"""
Seeded random streams, one per party.
"""

import zlib

import numpy as np


def party_rng(master_seed: int, party: str) -> np.random.Generator:
	"""
	Independent generator for one party.

	The stream depends only on the master seed and the party name, never on
	the order in which parties draw.

	Args:
		master_seed: Non-negative master seed
		party: Party name

	Returns:
		numpy.random.Generator
	"""
	key = zlib.crc32(party.encode("utf-8"))
	return np.random.default_rng(np.random.SeedSequence([int(master_seed), key]))
