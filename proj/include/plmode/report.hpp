#pragma once

// Text output: CSV files with '#' header comments (schema version and the
// echoed run configuration) and aligned human-readable reports.

#include "plmode/cycles.hpp"
#include "plmode/predict.hpp"
#include "plmode/scan.hpp"
#include "plmode/shrink.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace plmode {

inline constexpr const char* kSchemaScan = "plmode-scan/1";
inline constexpr const char* kSchemaTrace = "plmode-trace/1";
inline constexpr const char* kSchemaPredict = "plmode-predict/1";
inline constexpr const char* kSchemaNearby = "plmode-nearby/1";
inline constexpr const char* kSchemaShrink = "plmode-shrink/1";
inline constexpr const char* kSchemaCycle = "plmode-cycle/1";

/// 17 significant digits.
std::string num(double x);

void write_csv_header(std::ostream& os, const std::string& schema, const std::vector<std::string>& config,
                      const std::vector<std::string>& columns);

void write_scan_csv(std::ostream& os, const ScanGrid& g, const std::vector<std::string>& config);
void write_trace_csv(std::ostream& os, const BoundaryTrace& tr, const std::vector<std::string>& config);
void write_predict_csv(std::ostream& os, const std::vector<PredictionRecord>& recs,
                       const std::vector<std::string>& config);
void write_nearby_csv(std::ostream& os, const std::vector<NearbyResult>& rows, const std::vector<std::string>& config);
void write_shrink_csv(std::ostream& os, const ShrinkPoint& sp, const std::vector<std::string>& config);
void write_cycle_csv(std::ostream& os, const CycleResult& c, const std::vector<std::string>& config);

void print_matrices(std::ostream& os, const PwlMap& f);
void print_cycle(std::ostream& os, const CycleResult& c);
void print_shrink_point(std::ostream& os, const ShrinkPoint& sp);
void print_identity_report(std::ostream& os, const IdentityReport& rep);
void print_kappa_table(std::ostream& os, const ShrinkPoint& sp, int chi_max);

struct VerifySummary {
    int passed = 0;
    int failed = 0;
    std::vector<std::string> failures;
};

/// Worked word examples and exhaustive word identities: all rotational words
/// with n <= 30 and all nearby words with n <= 15, k <= 8, |chi| <= 3.
VerifySummary run_symbolic_suite(std::ostream& log);

/// Symbolic identities, shrinking-point identities for the built-in
/// families and the kappa table; progress lines go to log.
VerifySummary run_verify_suite(std::ostream& log);

/// Shrinking points of the built-in families at their default parameters.
ShrinkPoint builtin_shrinking_point(const std::string& family);

}  // namespace plmode
