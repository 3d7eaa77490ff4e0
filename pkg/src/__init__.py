"""subspace-magic: stabilizer entropies and average magic of subspaces."""
