"""
Seed Derivation
Pure 64-bit split-mix derivation of per-graph, per-trial and per-restart seeds
"""

MASK64 = (1 << 64) - 1

# XOR'ed into the master seed for GNN training streams so that training
# graph seeds never coincide with benchmark graph seeds
TRAIN_STREAM_SALT = 0x5452_4149_4E5F_4C47


def splitmix64(value: int) -> int:
    """One split-mix 64 finalization step."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Seed of stream element `index`; independent of evaluation order."""
    return splitmix64((splitmix64(master & MASK64) ^ (index & MASK64)) & MASK64)


def training_seed(master: int, index: int) -> int:
    return derive_seed((master ^ TRAIN_STREAM_SALT) & MASK64, index)
