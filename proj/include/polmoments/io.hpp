// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief File formats: JSON state specs and reports, and the whitespace
 *        separated tables for scans, observations, counts and direction sets.
 *
 * Text tables start with `#` header lines of the form `# key value...`; the
 * `# columns` line names the data columns. Numbers are written with 12
 * significant digits and negative zero is printed as 0. A `# generated`
 * timestamp line (or "generated" JSON field) is optional.
 */

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <polmoments/classifier.hpp>
#include <polmoments/experiment_sim.hpp>
#include <polmoments/tomography.hpp>

namespace polmoments {

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

namespace io {

using Json = nlohmann::ordered_json;

// --- numbers -----------------------------------------------------------------

/// Rounds to 12 significant digits and maps -0 to 0.
double round12(double v);
/// "%.12g" of round12(v).
std::string format_number(double v);

// --- state specs ---------------------------------------------------------------

/// Parses a tagged state description. Throws SpecError on schema violations.
StateSpec parse_state_spec(const Json& j);
/// Accepts inline JSON (starting with '{') or a path to a JSON file.
Json load_json_argument(const std::string& text);
/// FNV-1a 64-bit of the compact canonical dump, as 16 hex digits.
std::string digest(const Json& j);

// --- generic text/JSON files ------------------------------------------------

Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
/// Writes to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& content, std::ostream& stdout_stream);
std::string dump(const Json& j);
/// UTC ISO-8601 time.
std::string timestamp_now();

struct TableFile {
  std::vector<std::pair<std::string, std::string>> header;  ///< key, rest of line
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::string> header_value(const std::string& key) const;
};

TableFile parse_table(const std::string& text);

// --- scans ---------------------------------------------------------------------

struct ScanMeta {
  std::string state_digest;
  bool timestamp = false;
};

std::string format_scan(const SphereScan& scan, const ScanMeta& meta);

struct ScanRow {
  double theta = 0, phi = 0;
  Vec3 n = Vec3::Zero();
  double value = 0;
};
std::vector<ScanRow> parse_scan(const std::string& text);

// --- observations --------------------------------------------------------------

std::string format_observations(const MomentObservations& obs, bool timestamp);
MomentObservations parse_observations(const std::string& text);

// --- counts --------------------------------------------------------------------

std::string format_counts(const std::vector<CountsRecord>& records, bool timestamp);
std::vector<CountsRecord> parse_counts(const std::string& text);

// --- directions ----------------------------------------------------------------

std::string format_directions(const DirectionSet& set, bool timestamp);
DirectionSet parse_directions(const std::string& text);
/// "canonical-2nd", "canonical-3rd-paper", "canonical-3rd-minimal" or a file path.
DirectionSet resolve_directions(const std::string& label_or_path);

// --- detector config -------------------------------------------------------------

DetectorConfig parse_detector_config(const Json& j);
Json detector_config_to_json(const DetectorConfig& config);

// --- reports ---------------------------------------------------------------------

Json pack_to_json(const SymmetricPack& pack, const std::vector<double>* stderr_values = nullptr);
SymmetricPack pack_from_json(const Json& j);
Json covariance_to_json(const CovarianceMatrix& c);

Json moments_report(const PolarizationState& state, const MomentTensors& tensors,
                    const std::optional<UncertaintyReport>& uncertainty);
Json reconstruction_report(const ReconstructionResult& result, const std::optional<MisalignmentFit>& fit);
/// Raw packs from a reconstruction (or moments) report.
MomentTensors tensors_from_report(const Json& report);
Json classification_report(const IsotropyReport& report, const std::optional<PolarizationClass>& cls);
Json parameter_counts_report(const ParameterCounts& counts);

}  // namespace io
}  // namespace polmoments
