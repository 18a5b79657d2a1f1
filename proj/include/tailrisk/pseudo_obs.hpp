#pragma once

// Rank-based pseudo-observations: each coordinate is replaced by its
// midrank divided by n+1, which maps raw measurements into the open unit
// square while preserving the dependence structure.

#include <vector>

#include "tailrisk/copula.hpp"

namespace tailrisk {

struct RawPairs {
    std::vector<double> x;
    std::vector<double> y;
};

struct PseudoSample {
    std::vector<UnitPair> pairs;

    std::size_t n() const { return pairs.size(); }
};

/**
 * Midranks (ties get the average of the ranks they span) scaled by
 * 1/(n+1).  Requires n >= 2 and finite inputs of equal length.
 */
PseudoSample to_pseudo_observations(const RawPairs& raw);

/**
 * Wraps already-uniform pairs (for example copula draws) as a
 * PseudoSample without reranking; every coordinate must be strictly
 * inside (0,1).
 */
PseudoSample pseudo_sample_from_pairs(std::vector<UnitPair> pairs);

namespace detail {

// Midranks of xs on the 1..n scale, ties averaged.
std::vector<double> midranks(const std::vector<double>& xs);

}  // namespace detail

}  // namespace tailrisk
