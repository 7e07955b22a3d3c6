"""Brute-force trial-division oracle for table verification.

Nothing here is shared with the sieve: every value is derived from a fresh
factorization of ``k``.
"""

import math
from typing import List, Tuple, Union

from sumfunc.errors.lab_errors import InvalidArgumentError
from sumfunc.models.table_models import FunctionKind


def factorize(k: int) -> List[Tuple[int, int]]:
    """
    Factor k by trial division.

    Args:
        k: Positive integer

    Returns:
        List of (prime, exponent) pairs in increasing prime order
    """
    factors: List[Tuple[int, int]] = []
    p = 2
    while p * p <= k:
        if k % p == 0:
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if k > 1:
        factors.append((k, 1))
    return factors


def oracle_value(kind: FunctionKind, k: int, constant: int = 1) -> Union[int, float]:
    """
    Compute f(k) for a built-in kind by trial division.

    Args:
        kind: Function kind (anything but EXTERNAL)
        k: Argument, k >= 1
        constant: Value of the CONSTANT kind

    Returns:
        Exact integer value, or a float for VON_MANGOLDT and PRIME_LOG

    Raises:
        InvalidArgumentError: If k < 1 or the kind has no closed definition
    """
    if k < 1:
        raise InvalidArgumentError(f"oracle argument must be >= 1, got {k}")
    if kind is FunctionKind.EXTERNAL:
        raise InvalidArgumentError("external tables have no oracle")
    if kind is FunctionKind.CONSTANT:
        return constant

    factors = factorize(k)
    distinct = len(factors)
    total = sum(e for _, e in factors)
    squarefree = all(e == 1 for _, e in factors)
    is_prime = distinct == 1 and total == 1

    if kind is FunctionKind.MOEBIUS:
        return (-1) ** distinct if squarefree else 0
    if kind is FunctionKind.LIOUVILLE:
        return (-1) ** total
    if kind is FunctionKind.SQUAREFREE:
        return int(squarefree)
    if kind is FunctionKind.SQUAREFREE_ODD:
        return int(squarefree and distinct % 2 == 1)
    if kind is FunctionKind.SQUAREFREE_EVEN:
        return int(squarefree and distinct % 2 == 0)
    if kind is FunctionKind.PRIME:
        return int(is_prime)
    if kind is FunctionKind.DIVISOR_COUNT:
        return math.prod(e + 1 for _, e in factors)
    if kind is FunctionKind.VON_MANGOLDT:
        return math.log(factors[0][0]) if distinct == 1 else 0.0
    if kind is FunctionKind.PRIME_LOG:
        return math.log(k) if is_prime else 0.0
    raise InvalidArgumentError(f"no oracle for kind {kind.value}")
