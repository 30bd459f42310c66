"""Finite embeddings of MV-chains and finite MV-algebras into Lukasiewicz chains.

The pieces, bottom up:

* :mod:`mvembed.rational` -- fraction helpers (parsing, lcm of denominators);
* :mod:`mvembed.algebra` -- Cayley-table MV-algebras, axiom checks,
  partial subalgebras and embedding verification;
* :mod:`mvembed.chains` -- element-wise chain oracles: L_k, the rational unit
  interval and Chang's algebra;
* :mod:`mvembed.farkas` -- exact linear feasibility with Farkas certificates;
* :mod:`mvembed.filters` -- filters, quotients and reduced products;
* :mod:`mvembed.embedding` -- the rational valuation, chain embeddings and
  embeddings of finite algebras into (L_k)^l;
* :mod:`mvembed.cli` -- the ``mvembed`` command.
"""

from .algebra import (
    EmbeddingMap,
    FiniteMvAlgebra,
    PartialSubalgebra,
    Report,
    check_adjointness,
    check_axioms,
    direct_product,
    is_chain,
    lukasiewicz_chain,
    restrict,
    trivial_algebra,
    verify_partial_embedding,
)
from .chains import ChainPower, ChangAlgebra, FiniteChain, RationalChain, oracle_from_spec, sample_partial
from .embedding import (
    ChainEmbedding,
    EmbeddingVerificationError,
    NonMVOracleError,
    ProductEmbedding,
    build_lemma1_system,
    closure_oplus,
    embed_chain,
    embed_finite_mv,
    rational_valuation,
    verify_valuation,
)
from .farkas import (
    Certificate,
    LinearSystem,
    RowLimitExceeded,
    Solution,
    integerize_certificate,
    solve_equality_nonneg,
    solve_inequalities,
    verify_equality_result,
    verify_result,
)
from .filters import (
    Filter,
    QuotientAlgebra,
    enumerate_filters,
    generated_filter,
    is_prime,
    is_ultra,
    prime_filters,
    quotient,
    reduced_product,
    separating_prime_filters,
)
from .rational import format_rational, lcm_of_denominators, parse_rational, scale_to_integers

__version__ = "0.1.0"
