"""Frozen conventions that pin down the hash value for a given prime.

Changing any of these rules changes hash outputs, so they are versioned
under a single tag and embedded in every export and CLI report.
"""

WALK_CONVENTION = "lex-walk-v1"

MODULUS_RULE = "z^2+1 if p % 4 == 3 else z^2-d with d the smallest quadratic non-residue"
ROOT_ORDER_RULE = "lexicographic on (c0, c1) with elements written c0+c1*z"
BIT_ORDER_RULE = "most-significant bit first within each byte"


def convention_tag() -> dict:
    """The full convention block as embedded in reports and graph exports."""
    return {
        "convention": WALK_CONVENTION,
        "modulus_rule": MODULUS_RULE,
        "root_order_rule": ROOT_ORDER_RULE,
        "bit_order_rule": BIT_ORDER_RULE,
    }
