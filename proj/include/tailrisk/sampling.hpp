#pragma once

// Exact sampling from Clayton and Gumbel copulas by conditional inversion:
// draw U uniform, then solve dC/du (u, V) = W for V.  Clayton inverts in
// closed form, Gumbel by bracketed root finding.
//
// Reproducibility contract: a given (seed, n, model) triple produces a
// bit-identical sample on every standards-conforming platform.  The
// generator is std::mt19937_64 (its output sequence is pinned down by the
// C++ standard) and each 64-bit word is mapped to the open interval (0,1)
// as u = (top53bits + 0.5) * 2^-53, recorded as "mt19937_64/u53".

#include <cstdint>
#include <random>
#include <vector>

#include "tailrisk/copula.hpp"

namespace tailrisk {

struct RngSeed {
    std::uint64_t value = 1;
};

// Stream identifier written into reports and cache files next to seeds.
inline constexpr const char* kRngAlgorithm = "mt19937_64/u53";

class Rng {
  public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    // Uniform draw strictly inside (0,1); never returns an endpoint.
    double uniform01() {
        std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

  private:
    std::mt19937_64 engine_;
};

/**
 * Derives an independent child seed from a base seed and an index using
 * the splitmix64 finalizer.  Replicate r of a study uses index r, node i
 * of a Fisher table uses index i; the mapping is part of the
 * reproducibility contract.
 */
RngSeed derive_seed(RngSeed base, std::uint64_t index);

struct CopulaSample {
    CopulaModel model;
    RngSeed seed;
    std::vector<UnitPair> pairs;
};

/** One (U,V) draw from the copula, consuming exactly two uniforms. */
UnitPair sample_pair(const CopulaModel& model, Rng& rng);

/** n independent draws with a freshly seeded stream. */
CopulaSample sample_dataset(const CopulaModel& model, std::size_t n,
                            RngSeed seed);

namespace detail {

// Solves dC/du (u, v) = w for v.  Exposed for direct testing of the
// two inversion paths.
double conditional_v_given_u(const CopulaModel& model, double u, double w);

}  // namespace detail

}  // namespace tailrisk
