"""Diffie-Hellman key derivation with a two-source extractor in place of a hash.

The exchange yields g^(ab) in G1. The second source is an element of G2
picked by a seeded generator whose seed is public; this stands in for an
independent second source, it is not a key-agreement protocol.
"""

from __future__ import annotations

import random

from .errors import ParameterError
from .extract import ExtractorKind, ExtractorSpec, f_k, symbol_text


def second_source_sample(spec: ExtractorSpec, seed: int):
    G2 = spec.source2
    return G2.elements[random.Random(seed).randrange(G2.order)]


def derive(spec: ExtractorSpec, secret_a: int, secret_b: int, seed: int = 0) -> dict:
    """Run both sides of the exchange and return the transcript."""
    if spec.kind is not ExtractorKind.FP_LSB:
        raise ParameterError("the DH demo needs an fp_lsb entry")
    G1 = spec.source1
    q = G1.order
    for label, s in (("secret-a", secret_a), ("secret-b", secret_b)):
        if not 1 <= s <= q - 1:
            raise ParameterError(f"{label}={s} outside [1, {q - 1}]")
    g = G1.generator
    A = g**secret_a
    B = g**secret_b
    shared_alice = B**secret_a
    shared_bob = A**secret_b
    s2 = second_source_sample(spec, seed)
    key_alice = f_k(shared_alice, s2, spec.k, G1, spec.source2)
    key_bob = f_k(shared_bob, s2, spec.k, G1, spec.source2)
    return {
        "p": spec.p,
        "q1": q,
        "k": spec.k,
        "g": g.value,
        "g^a": A.value,
        "g^b": B.value,
        "g^ab_alice": shared_alice.value,
        "g^ab_bob": shared_bob.value,
        "second_source_seed": seed,
        "second_source": s2.value,
        "key_alice": key_alice,
        "key_bob": key_bob,
        "key_bits": symbol_text(key_alice, spec.k),
        "agree": key_alice == key_bob and shared_alice == shared_bob,
    }
