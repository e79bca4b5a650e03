"""Ordinal notation workbench: stepwise and simultaneous collapsing terms,
fundamental sequences, the isomorphism between the two systems, norms and
the Hardy hierarchy."""

from .terms import (
    ZERO,
    Collapse,
    DomainError,
    Kind,
    MixedSystemError,
    OrdinalError,
    ParseError,
    Sum,
    System,
    Term,
    Zero,
    classify,
    collapse,
    components,
    make_sum,
    nat_to_term,
    omega_level,
    one,
    parse,
    split_arg,
    term_to_nat,
    to_text,
)
from .stepwise import (
    LocalizationSeq,
    alpha_plus,
    compare,
    compare_T,
    fixpoint_F,
    localization,
    star,
    valid_T,
)
from .fundseq import FsCase, FsResult, chi, dom_ind, fundseq, fundseq_case, support
from .bar import chi_bar, compare_bar, dom_ind_bar, fundseq_bar, fundseq_bar_case, ht, k_sets, star_bar, valid_bar
from .iso import f, g, it, rt, to_bar, to_step
from .norms import BudgetExceeded, HardyBudget, bracket_walk, cnorm, gnorm, hardy, norm
from .universe import Universe, UniverseSpec, enumerate_terms

__version__ = "0.1.0"
