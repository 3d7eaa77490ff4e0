# Tests for subspace-magic
