#include "tailrisk/pseudo_obs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tailrisk {

namespace detail {

std::vector<double> midranks(const std::vector<double>& xs) {
    std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && xs[order[j]] == xs[order[i]]) ++j;
        // Positions i..j-1 (0-based) share the average of ranks i+1..j.
        double shared = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
        i = j;
    }
    return ranks;
}

}  // namespace detail

PseudoSample to_pseudo_observations(const RawPairs& raw) {
    if (raw.x.size() != raw.y.size()) {
        throw ConfigError("pseudo-observations need x and y of equal length");
    }
    std::size_t n = raw.x.size();
    if (n < 2) {
        throw ConfigError("pseudo-observations need at least 2 rows");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(raw.x[i]) || !std::isfinite(raw.y[i])) {
            std::ostringstream msg;
            msg << "non-finite value in row " << i
                << " (x=" << raw.x[i] << ", y=" << raw.y[i] << ")";
            throw ConfigError(msg.str());
        }
    }

    std::vector<double> rx = detail::midranks(raw.x);
    std::vector<double> ry = detail::midranks(raw.y);
    double scale = 1.0 / static_cast<double>(n + 1);
    PseudoSample out;
    out.pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.pairs.push_back(UnitPair{rx[i] * scale, ry[i] * scale});
    }
    return out;
}

PseudoSample pseudo_sample_from_pairs(std::vector<UnitPair> pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const UnitPair& p = pairs[i];
        if (!(p.u > 0.0) || !(p.u < 1.0) || !(p.v > 0.0) || !(p.v < 1.0)) {
            std::ostringstream msg;
            msg << "pair " << i << " not strictly inside the unit square (u="
                << p.u << ", v=" << p.v << ")";
            throw ConfigError(msg.str());
        }
    }
    PseudoSample out;
    out.pairs = std::move(pairs);
    return out;
}

}  // namespace tailrisk
