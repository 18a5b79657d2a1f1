#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tailrisk/inference.hpp"

// Plain-text Fisher table cache.  Layout (field order is fixed):
//
//   tailrisk-fisher-table v1
//   family <clayton|gumbel>
//   theta_min <double>
//   theta_max <double>
//   grid_size <count>
//   spacing <log|linear>
//   mc_draws <count>
//   fd_base <double>
//   fd_relative <0|1>
//   seed <uint64>
//   rng <algorithm id>
//   nodes
//   <theta> <info> <step>     (grid_size rows)
//
// Doubles are written with %.17g so a rewrite of a loaded table is
// byte-identical and equality checks against a requested spec are exact.

namespace tailrisk {

namespace {

constexpr const char* kMagic = "tailrisk-fisher-table v1";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0';
}

bool parse_u64(const std::string& text, std::uint64_t& out) {
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtoull(begin, &end, 10);
    return end != begin && *end == '\0';
}

// Reads "key value" and returns value; empty on any mismatch.
bool read_field(std::istream& in, const std::string& key, std::string& value) {
    std::string line;
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t space = line.find(' ');
    if (space == std::string::npos) return false;
    if (line.substr(0, space) != key) return false;
    value = line.substr(space + 1);
    return !value.empty();
}

}  // namespace

void save_fisher_table(const std::string& path, const FisherTable& table) {
    if (table.values.size() != table.grid.size() ||
        table.steps.size() != table.grid.size()) {
        throw ConfigError("fisher table rows do not match its grid");
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write fisher cache '" + path + "'");
    out << kMagic << '\n';
    out << "family " << family_name(table.family) << '\n';
    out << "theta_min " << fmt_double(table.grid.nodes.front()) << '\n';
    out << "theta_max " << fmt_double(table.grid.nodes.back()) << '\n';
    out << "grid_size " << table.grid.size() << '\n';
    out << "spacing " << spacing_name(table.spacing) << '\n';
    out << "mc_draws " << table.draws << '\n';
    out << "fd_base " << fmt_double(table.fd.base) << '\n';
    out << "fd_relative " << (table.fd.relative ? 1 : 0) << '\n';
    out << "seed " << table.seed.value << '\n';
    out << "rng " << kRngAlgorithm << '\n';
    out << "nodes\n";
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        out << fmt_double(table.grid.nodes[i]) << ' '
            << fmt_double(table.values[i]) << ' '
            << fmt_double(table.steps[i]) << '\n';
    }
    if (!out) throw InputError("short write to fisher cache '" + path + "'");
}

std::optional<FisherTable> load_fisher_table(const std::string& path,
                                             const PriorSpec& spec) {
    validate_prior_spec(spec);
    std::ifstream in(path);
    if (!in) return std::nullopt;

    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kMagic) return std::nullopt;

    std::string value;
    if (!read_field(in, "family", value) ||
        value != family_name(spec.family)) {
        return std::nullopt;
    }
    double theta_min = 0.0;
    if (!read_field(in, "theta_min", value) ||
        !parse_double(value, theta_min) || theta_min != spec.theta_min) {
        return std::nullopt;
    }
    double theta_max = 0.0;
    if (!read_field(in, "theta_max", value) ||
        !parse_double(value, theta_max) || theta_max != spec.theta_max) {
        return std::nullopt;
    }
    std::uint64_t grid_size = 0;
    if (!read_field(in, "grid_size", value) || !parse_u64(value, grid_size) ||
        grid_size != spec.fisher_grid_size) {
        return std::nullopt;
    }
    if (!read_field(in, "spacing", value) ||
        value != spacing_name(default_spacing(spec.family))) {
        return std::nullopt;
    }
    std::uint64_t draws = 0;
    if (!read_field(in, "mc_draws", value) || !parse_u64(value, draws) ||
        draws != spec.fisher_mc_draws) {
        return std::nullopt;
    }
    double fd_base = 0.0;
    if (!read_field(in, "fd_base", value) || !parse_double(value, fd_base) ||
        fd_base != spec.fisher_fd.base) {
        return std::nullopt;
    }
    std::uint64_t fd_relative = 0;
    if (!read_field(in, "fd_relative", value) ||
        !parse_u64(value, fd_relative) ||
        (fd_relative != 0) != spec.fisher_fd.relative) {
        return std::nullopt;
    }
    std::uint64_t seed = 0;
    if (!read_field(in, "seed", value) || !parse_u64(value, seed) ||
        seed != spec.fisher_seed.value) {
        return std::nullopt;
    }
    if (!read_field(in, "rng", value) || value != kRngAlgorithm) {
        return std::nullopt;
    }
    if (!std::getline(in, line)) return std::nullopt;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "nodes") return std::nullopt;

    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> steps;
    nodes.reserve(grid_size);
    for (std::uint64_t i = 0; i < grid_size; ++i) {
        if (!std::getline(in, line)) return std::nullopt;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream row(line);
        std::string a;
        std::string b;
        std::string c;
        if (!(row >> a >> b >> c)) return std::nullopt;
        std::string extra;
        if (row >> extra) return std::nullopt;
        double theta = 0.0;
        double info = 0.0;
        double step = 0.0;
        if (!parse_double(a, theta) || !parse_double(b, info) ||
            !parse_double(c, step)) {
            return std::nullopt;
        }
        nodes.push_back(theta);
        values.push_back(info);
        steps.push_back(step);
    }
    if (nodes.empty() || nodes.front() != spec.theta_min ||
        nodes.back() != spec.theta_max) {
        return std::nullopt;
    }

    FisherTable table;
    table.family = spec.family;
    try {
        table.grid = theta_grid_from_nodes(std::move(nodes));
    } catch (const ConfigError&) {
        return std::nullopt;
    }
    table.values = std::move(values);
    table.steps = std::move(steps);
    table.draws = spec.fisher_mc_draws;
    table.spacing = default_spacing(spec.family);
    table.fd = spec.fisher_fd;
    table.seed = spec.fisher_seed;
    return table;
}

}  // namespace tailrisk
