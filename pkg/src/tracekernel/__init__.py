"""Explicit kernel elements of the trace map on free homotopy classes.

The chain Theta_n is the alternating sum over S_2n of the classes of
a b^s(1) a b^s(2) a ... a b^s(2n) a in F(a, b); its trace vanishes on every
representation into GL_n, while its (2n)! classes stay pairwise distinct.
"""

from .chains import Chain, chain_add, chain_scale, support_size
from .construction import (
    SignedPermutation,
    build_theta,
    build_W,
    build_x,
    certify_homology,
    certify_pairwise_distinct,
    enumerate_signed_permutations,
)
from .linrep import (
    GF,
    QQ,
    Matrix,
    Representation,
    evaluate_word,
    random_representation,
    trace,
    trace_of_chain,
)
from .verify import (
    VerificationReport,
    al_sum_fast,
    al_sum_naive,
    verify_all,
    verify_amitsur_levitzki,
    verify_kernel,
)
from .words import CyclicWord, Word, abelianize, are_conjugate, canonical_class

__version__ = "0.1.0"
