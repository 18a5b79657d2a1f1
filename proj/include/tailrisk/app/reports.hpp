#pragma once

// Report serialization.  JSON documents carry a schema name plus version
// and are emitted with sorted keys and 2-space indentation, so identical
// runs produce byte-identical files apart from provenance.timestamp.

#include <array>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "tailrisk/app/ingest.hpp"
#include "tailrisk/inference.hpp"
#include "tailrisk/sim_harness.hpp"

namespace tailrisk::app {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kFitSchemaVersion = 1;
inline constexpr int kSimSchemaVersion = 1;

// Per-family fit bundle kept around after the pipeline runs so that
// plot emission can reuse the posterior instead of recomputing it.
struct FamilyFit {
    PriorSpec spec;
    JeffreysPrior prior;
    PosteriorGrid posterior;
    TailRiskReport report;
    std::array<CredibleInterval, 3> delta;  // delta-method CIs, RL/RU/RC order
    bool fisher_cache_hit = false;
};

nlohmann::json credible_interval_json(const CredibleInterval& ci);
nlohmann::json posterior_summary_json(const PosteriorSummary& summary);
nlohmann::json family_fit_json(const FamilyFit& fit);

/** Complete fit report; timestamp "" omits provenance.timestamp. */
nlohmann::json fit_report_json(const InputTable& table,
                               const ColumnSpec& columns,
                               const std::vector<FamilyFit>& fits,
                               const std::string& timestamp);

nlohmann::json sim_report_json(const SimReport& report,
                               const std::string& records_csv,
                               const std::string& timestamp);

/** Per-replicate rows; column order is part of the format contract. */
void write_sim_records_csv(std::ostream& out, const SimReport& report);

/**
 * Posterior of R_T as value,density rows over the grid.  Uses the
 * change-of-variables density posterior(theta)/|R_T'(theta)| when R_T is
 * strictly monotone on the grid; otherwise falls back to a 64-bin
 * weighted histogram and reports that via the return value.
 */
bool write_risk_curve_csv(std::ostream& out, const PosteriorGrid& post,
                          TailSpec spec);

/** Posterior of theta itself as value,density rows. */
void write_theta_curve_csv(std::ostream& out, const PosteriorGrid& post);

/** Short human-readable summary of one family fit. */
void print_fit_summary(std::ostream& out, const FamilyFit& fit);

/** Current time as an ISO 8601 UTC string. */
std::string utc_timestamp();

}  // namespace tailrisk::app
